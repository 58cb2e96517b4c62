//! Bounded checkers for pseudo effect algebras and pseudo MV-algebras.
//!
//! Sums are always evaluated exactly, also when they leave the window, so a
//! quantified instance is only skipped when an instance budget forces sampling
//! or when an existential search runs out of window.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::verdict::{Tally, Verdict, Witness};

/// A partial algebra `(E; +, 0, 1)` that can be sampled on windows.
pub trait Pea: Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Finite carrier sample of height `h`, deterministic order.
    fn window(&self, h: u32) -> Vec<Self::Elem>;
    /// Exact carrier membership.
    fn contains(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Option<Self::Elem>;
    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;
    /// `x⁻`, with `x⁻ + x = 1`.
    fn minus(&self, x: &Self::Elem) -> Self::Elem;
    /// `x∼`, with `x + x∼ = 1`.
    fn tilde(&self, x: &Self::Elem) -> Self::Elem;
    /// `b∖a`, with `(b∖a) + a = b`.
    fn ldiff(&self, b: &Self::Elem, a: &Self::Elem) -> Option<Self::Elem>;
    /// `a/b`, with `a + (a/b) = b`.
    fn rdiff(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    fn to_json(&self, x: &Self::Elem) -> Value;
    fn show(&self, x: &Self::Elem) -> String;

    /// Greatest lower bound, when the order is a lattice.
    fn meet(&self, _x: &Self::Elem, _y: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    /// Elements below `x` and whether the list is complete.
    fn lower_set(&self, x: &Self::Elem, h: u32) -> (Vec<Self::Elem>, bool) {
        (self.window(h).into_iter().filter(|y| self.leq(y, x)).collect(), false)
    }

    /// Coarse class used to prioritise instances; kites return 0 on lowers.
    fn class(&self, _x: &Self::Elem) -> u8 {
        0
    }

    fn witness(&self, name: &str, x: &Self::Elem) -> Witness {
        Witness::new(name, self.to_json(x), self.show(x))
    }
}

/// A total algebra `(M; ⊕, ⁻, ∼, 0, 1)`.
pub trait PseudoMv: Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn window(&self, h: u32) -> Vec<Self::Elem>;
    fn oplus(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn minus(&self, x: &Self::Elem) -> Self::Elem;
    fn tilde(&self, x: &Self::Elem) -> Self::Elem;
    fn to_json(&self, x: &Self::Elem) -> Value;
    fn show(&self, x: &Self::Elem) -> String;

    /// `x ⊙ y = (y⁻ ⊕ x⁻)∼`.
    fn odot(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.tilde(&self.oplus(&self.minus(y), &self.minus(x)))
    }

    fn witness(&self, name: &str, x: &Self::Elem) -> Witness {
        Witness::new(name, self.to_json(x), self.show(x))
    }
}

/// Cap on quantified instances per axiom; above it a seeded sample is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_instances: u64,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_instances: 2_000_000, seed: 0 }
    }
}

impl Budget {
    pub fn new(max_instances: u64) -> Self {
        Budget { max_instances, seed: 0 }
    }
}

/// Per-axiom verdicts keyed `PEA.i`…, `PMV.A1`….
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub verdicts: BTreeMap<String, Verdict>,
    /// Triples made only of class-0 elements (kite lowers) that were not checked.
    pub class0_skipped: u64,
}

impl AxiomReport {
    pub fn overall(&self) -> Verdict {
        Verdict::merge_all(self.verdicts.values().cloned())
    }

    pub fn get(&self, key: &str) -> &Verdict {
        &self.verdicts[key]
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(&self.verdicts).expect("report serializes")
    }
}

/// Window elements with an index for quick sum lookups.
struct Indexed<E> {
    elems: Vec<E>,
    index: HashMap<E, u32>,
}

#[derive(Clone, PartialEq, Eq)]
enum Val<E> {
    Undef,
    Idx(u32),
    Out(E),
}

impl<E: Clone + Eq + Hash> Indexed<E> {
    fn new(elems: Vec<E>) -> Self {
        let index = elems.iter().enumerate().map(|(i, x)| (x.clone(), i as u32)).collect();
        Indexed { elems, index }
    }

    fn val(&self, x: Option<E>) -> Val<E> {
        match x {
            None => Val::Undef,
            Some(e) => match self.index.get(&e) {
                Some(&i) => Val::Idx(i),
                None => Val::Out(e),
            },
        }
    }

    fn get<'a>(&'a self, v: &'a Val<E>) -> Option<&'a E> {
        match v {
            Val::Undef => None,
            Val::Idx(i) => Some(&self.elems[*i as usize]),
            Val::Out(e) => Some(e),
        }
    }

    fn len(&self) -> usize {
        self.elems.len()
    }
}

const TABLE_LIMIT: usize = 1 << 21;

/// Binary operation tabulated on the window; entries are indices, -1 undefined, -2 outside.
struct OpTable {
    n: usize,
    cells: Option<Vec<i32>>,
}

impl OpTable {
    fn build<E: Clone + Eq + Hash>(ix: &Indexed<E>, op: &dyn Fn(&E, &E) -> Option<E>) -> OpTable {
        let n = ix.len();
        if n * n > TABLE_LIMIT {
            return OpTable { n, cells: None };
        }
        let mut cells = Vec::with_capacity(n * n);
        for x in &ix.elems {
            for y in &ix.elems {
                cells.push(match op(x, y) {
                    None => -1,
                    Some(z) => ix.index.get(&z).map(|&i| i as i32).unwrap_or(-2),
                });
            }
        }
        OpTable { n, cells: Some(cells) }
    }

    fn apply<E: Clone + Eq + Hash>(&self, ix: &Indexed<E>, op: &dyn Fn(&E, &E) -> Option<E>, a: &Val<E>, b: &Val<E>) -> Val<E> {
        if let (Some(cells), Val::Idx(i), Val::Idx(j)) = (&self.cells, a, b) {
            let c = cells[*i as usize * self.n + *j as usize];
            if c >= 0 {
                return Val::Idx(c as u32);
            }
            if c == -1 {
                return Val::Undef;
            }
        }
        match (ix.get(a), ix.get(b)) {
            (Some(x), Some(y)) => ix.val(op(x, y)),
            _ => Val::Undef,
        }
    }
}

/// Visits index triples: all class-0 triples first, then the rest (sampled above budget).
fn for_triples(
    classes: &[u8],
    budget: Budget,
    mut visit: impl FnMut(usize, usize, usize) -> bool,
) -> (u64, u64, u64) {
    let n = classes.len();
    let zeros: Vec<usize> = (0..n).filter(|&i| classes[i] == 0).collect();
    let z3 = (zeros.len() as u64).pow(3);
    let total = (n as u64).pow(3);
    let mut used = 0u64;
    let mut class0_skipped = 0u64;
    if z3 <= budget.max_instances {
        'a: for &i in &zeros {
            for &j in &zeros {
                for &k in &zeros {
                    used += 1;
                    if visit(i, j, k) {
                        break 'a;
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        for _ in 0..budget.max_instances {
            used += 1;
            let (i, j, k) = (zeros[rng.gen_range(0..zeros.len())], zeros[rng.gen_range(0..zeros.len())], zeros[rng.gen_range(0..zeros.len())]);
            if visit(i, j, k) {
                break;
            }
        }
        class0_skipped = z3 - used;
    }
    let rest_total = total - z3;
    let remaining = budget.max_instances.saturating_sub(used.min(z3));
    let mut rest_used = 0u64;
    if rest_total <= remaining {
        'b: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if classes[i] == 0 && classes[j] == 0 && classes[k] == 0 {
                        continue;
                    }
                    rest_used += 1;
                    if visit(i, j, k) {
                        break 'b;
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0x9e37_79b9_7f4a_7c15);
        while rest_used < remaining {
            let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if classes[i] == 0 && classes[j] == 0 && classes[k] == 0 {
                continue;
            }
            rest_used += 1;
            if visit(i, j, k) {
                break;
            }
        }
    }
    let skipped = (z3 - used.min(z3)) + (rest_total - rest_used.min(rest_total));
    (used + rest_used, skipped, class0_skipped)
}

const BUDGET_REASON: &str = "instance budget: triples were sampled";

/// Checks axioms (i)–(iv) on the window of height `h`.
pub fn check_pea_axioms<P: Pea>(p: &P, h: u32, budget: Budget) -> AxiomReport {
    let ix = Indexed::new(p.window(h));
    let classes: Vec<u8> = ix.elems.iter().map(|x| p.class(x)).collect();
    let add = |x: &P::Elem, y: &P::Elem| p.add(x, y);
    let table = OpTable::build(&ix, &add);
    let mut verdicts = BTreeMap::new();

    // (i) (a + b) + c = a + (b + c), definedness included
    let mut failure = None;
    let (checked, skipped, class0_skipped) = for_triples(&classes, budget, |i, j, k| {
        let (a, b, c) = (Val::Idx(i as u32), Val::Idx(j as u32), Val::Idx(k as u32));
        let left = table.apply(&ix, &add, &table.apply(&ix, &add, &a, &b), &c);
        let right = table.apply(&ix, &add, &a, &table.apply(&ix, &add, &b, &c));
        if left != right {
            failure = Some(vec![p.witness("a", &ix.elems[i]), p.witness("b", &ix.elems[j]), p.witness("c", &ix.elems[k])]);
            return true;
        }
        false
    });
    let v = match failure {
        Some(w) => Verdict::fails(checked, w),
        None if skipped > 0 => Verdict::unknown(checked, skipped, BUDGET_REASON),
        None => Verdict::holds(checked),
    };
    verdicts.insert("PEA.i".to_string(), v);

    // (ii) exactly one left and one right complement
    let one = p.one();
    let mut t = Tally::default();
    for a in &ix.elems {
        let lefts: Vec<&P::Elem> = ix.elems.iter().filter(|d| p.add(d, a).as_ref() == Some(&one)).collect();
        let rights: Vec<&P::Elem> = ix.elems.iter().filter(|e| p.add(a, e).as_ref() == Some(&one)).collect();
        let mut ok = true;
        for (found, cand, side) in [(&lefts, p.minus(a), "left"), (&rights, p.tilde(a), "right")] {
            if found.len() > 1 {
                t.fail(vec![p.witness("a", a), p.witness(&format!("{side}_1"), found[0]), p.witness(&format!("{side}_2"), found[1])]);
                ok = false;
                break;
            }
            if found.is_empty() {
                let valid = p.contains(&cand)
                    && if side == "left" { p.add(&cand, a) } else { p.add(a, &cand) }.as_ref() == Some(&one);
                if !valid {
                    t.fail(vec![p.witness("a", a), Witness::new("missing", Value::from(side), side)]);
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            break;
        }
        t.pass();
    }
    verdicts.insert("PEA.ii".to_string(), t.finish());

    // (iii) a + b = d + a = b + e
    let mut t = Tally::default();
    for a in &ix.elems {
        for b in &ix.elems {
            let Some(s) = p.add(a, b) else { continue };
            let d_ok = p.ldiff(&s, a).is_some_and(|d| p.contains(&d) && p.add(&d, a).as_ref() == Some(&s))
                || ix.elems.iter().any(|d| p.add(d, a).as_ref() == Some(&s));
            let e_ok = p.rdiff(b, &s).is_some_and(|e| p.contains(&e) && p.add(b, &e).as_ref() == Some(&s))
                || ix.elems.iter().any(|e| p.add(b, e).as_ref() == Some(&s));
            if d_ok && e_ok {
                t.pass();
            } else {
                t.skip("no witness for the mixed complement inside the window");
            }
        }
    }
    verdicts.insert("PEA.iii".to_string(), t.finish());

    // (iv) 1 + a or a + 1 defined forces a = 0
    let zero = p.zero();
    let mut t = Tally::default();
    for a in &ix.elems {
        if *a != zero {
            if p.add(&one, a).is_some() {
                t.fail(vec![p.witness("one", &one), p.witness("a", a)]);
                break;
            }
            if p.add(a, &one).is_some() {
                t.fail(vec![p.witness("a", a), p.witness("one", &one)]);
                break;
            }
        }
        t.pass();
    }
    verdicts.insert("PEA.iv".to_string(), t.finish());

    AxiomReport { verdicts, class0_skipped }
}

/// Checks (A1)–(A8) on the window of height `h`.
pub fn check_pmv_axioms<M: PseudoMv>(m: &M, h: u32, budget: Budget) -> AxiomReport {
    let ix = Indexed::new(m.window(h));
    let op = |x: &M::Elem, y: &M::Elem| Some(m.oplus(x, y));
    let table = OpTable::build(&ix, &op);
    let mut verdicts = BTreeMap::new();
    let classes = vec![1u8; ix.len()];

    let mut failure = None;
    let (checked, skipped, _) = for_triples(&classes, budget, |i, j, k| {
        let (a, b, c) = (Val::Idx(i as u32), Val::Idx(j as u32), Val::Idx(k as u32));
        let left = table.apply(&ix, &op, &a, &table.apply(&ix, &op, &b, &c));
        let right = table.apply(&ix, &op, &table.apply(&ix, &op, &a, &b), &c);
        if left != right {
            failure = Some(vec![m.witness("x", &ix.elems[i]), m.witness("y", &ix.elems[j]), m.witness("z", &ix.elems[k])]);
            return true;
        }
        false
    });
    let v = match failure {
        Some(w) => Verdict::fails(checked, w),
        None if skipped > 0 => Verdict::unknown(checked, skipped, BUDGET_REASON),
        None => Verdict::holds(checked),
    };
    verdicts.insert("PMV.A1".to_string(), v);

    let zero = m.zero();
    let one = m.one();
    let single = |test: &dyn Fn(&M::Elem) -> bool| {
        let mut t = Tally::default();
        for x in &ix.elems {
            if test(x) {
                t.pass();
            } else {
                t.fail(vec![m.witness("x", x)]);
                break;
            }
        }
        t.finish()
    };
    verdicts.insert("PMV.A2".into(), single(&|x| m.oplus(x, &zero) == *x && m.oplus(&zero, x) == *x));
    verdicts.insert("PMV.A3".into(), single(&|x| m.oplus(x, &one) == one && m.oplus(&one, x) == one));
    let a4 = if m.tilde(&one) == zero && m.minus(&one) == zero {
        Verdict::holds(1)
    } else {
        Verdict::fails(1, vec![m.witness("one", &one)])
    };
    verdicts.insert("PMV.A4".into(), a4);
    verdicts.insert("PMV.A8".into(), single(&|x| m.tilde(&m.minus(x)) == *x));

    let pair = |test: &dyn Fn(&M::Elem, &M::Elem) -> bool| {
        let n = ix.len() as u64;
        let total = n * n;
        let mut t = Tally::default();
        if total <= budget.max_instances {
            'o: for x in &ix.elems {
                for y in &ix.elems {
                    if test(x, y) {
                        t.pass();
                    } else {
                        t.fail(vec![m.witness("x", x), m.witness("y", y)]);
                        break 'o;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            for _ in 0..budget.max_instances {
                let (x, y) = (&ix.elems[rng.gen_range(0..ix.len())], &ix.elems[rng.gen_range(0..ix.len())]);
                if test(x, y) {
                    t.pass();
                } else {
                    t.fail(vec![m.witness("x", x), m.witness("y", y)]);
                    break;
                }
            }
            t.skipped = total - t.checked;
            t.skip_reason = Some("instance budget: pairs were sampled".into());
        }
        t.finish()
    };
    verdicts.insert(
        "PMV.A5".into(),
        pair(&|x, y| m.tilde(&m.oplus(&m.minus(x), &m.minus(y))) == m.minus(&m.oplus(&m.tilde(x), &m.tilde(y)))),
    );
    verdicts.insert(
        "PMV.A6".into(),
        pair(&|x, y| {
            let a = m.oplus(x, &m.odot(&m.tilde(x), y));
            let b = m.oplus(y, &m.odot(&m.tilde(y), x));
            let c = m.oplus(&m.odot(x, &m.minus(y)), y);
            let d = m.oplus(&m.odot(y, &m.minus(x)), x);
            a == b && b == c && c == d
        }),
    );
    verdicts.insert(
        "PMV.A7".into(),
        pair(&|x, y| m.odot(x, &m.oplus(&m.minus(x), y)) == m.odot(&m.oplus(x, &m.tilde(y)), y)),
    );
    AxiomReport { verdicts, class0_skipped: 0 }
}

/// Holds iff `x⁻ = x∼` on the window.
pub fn check_symmetric<P: Pea>(p: &P, h: u32) -> Verdict {
    let mut t = Tally::default();
    for x in p.window(h) {
        let (m, s) = (p.minus(&x), p.tilde(&x));
        if m != s {
            t.fail(vec![p.witness("x", &x), p.witness("minus", &m), p.witness("tilde", &s)]);
            break;
        }
        t.pass();
    }
    t.finish()
}

/// Holds iff `x + y` and `y + x` agree, definedness included, on window pairs.
pub fn check_commutative<P: Pea>(p: &P, h: u32) -> Verdict {
    let win = p.window(h);
    let mut t = Tally::default();
    'o: for x in &win {
        for y in &win {
            if p.add(x, y) != p.add(y, x) {
                t.fail(vec![p.witness("x", x), p.witness("y", y)]);
                break 'o;
            }
            t.pass();
        }
    }
    t.finish()
}

/// Is `k·x` defined for every `k ≤ nmax`.
pub fn is_infinitesimal<P: Pea>(p: &P, x: &P::Elem, nmax: u32) -> bool {
    let mut acc = x.clone();
    for _ in 2..=nmax {
        match p.add(&acc, x) {
            Some(s) => acc = s,
            None => return false,
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct Infinitesimals<E> {
    pub elements: Vec<E>,
    pub nmax: u32,
    pub verdict: Verdict,
}

/// Window elements whose multiples up to `nmax` exist.
pub fn find_infinitesimals<P: Pea>(p: &P, h: u32, nmax: u32) -> Infinitesimals<P::Elem> {
    let win = p.window(h);
    let elements: Vec<P::Elem> = win.iter().filter(|x| is_infinitesimal(p, x, nmax)).cloned().collect();
    let verdict = Verdict::unknown(win.len() as u64, 0, format!("multiples checked only up to n = {nmax}"));
    Infinitesimals { elements, nmax, verdict }
}

#[derive(Clone, Debug)]
pub struct PerfectSplit<E> {
    pub e0: Vec<E>,
    pub e1: Vec<E>,
    pub nmax: u32,
    pub verdict: Verdict,
}

impl<E: Eq> PerfectSplit<E> {
    pub fn part_of(&self, x: &E) -> Option<u8> {
        if self.e0.contains(x) {
            Some(0)
        } else if self.e1.contains(x) {
            Some(1)
        } else {
            None
        }
    }
}

/// Checks conditions (a)–(c) of a perfect split with `E0` = bounded infinitesimals.
fn split_conditions<P: Pea>(p: &P, win: &[P::Elem], part: &dyn Fn(&P::Elem) -> u8) -> Verdict {
    let mut t = Tally::default();
    // (a) E_i⁻ = E_i∼ = E_{1-i}; the maps are bijections, so images landing in the right part suffice
    for x in win {
        let i = part(x);
        for (name, y) in [("minus", p.minus(x)), ("tilde", p.tilde(x))] {
            if part(&y) != 1 - i {
                t.fail(vec![p.witness("x", x), p.witness(name, &y)]);
                return t.finish();
            }
        }
        t.pass();
    }
    // (b) sums respect the grading, (c) E0 + E0 is always defined
    for x in win {
        for y in win {
            let (i, j) = (part(x), part(y));
            match p.add(x, y) {
                Some(s) => {
                    if i + j > 1 || part(&s) != i + j {
                        t.fail(vec![p.witness("x", x), p.witness("y", y), p.witness("sum", &s)]);
                        return t.finish();
                    }
                }
                None if i == 0 && j == 0 => {
                    t.fail(vec![p.witness("x", x), p.witness("y", y)]);
                    return t.finish();
                }
                None => {}
            }
            t.pass();
        }
    }
    t.finish()
}

/// Splits the window into bounded infinitesimals and the rest, if that split is perfect.
pub fn perfect_split<P: Pea>(p: &P, h: u32, nmax: u32) -> Option<PerfectSplit<P::Elem>> {
    let win = p.window(h);
    let part = |x: &P::Elem| if is_infinitesimal(p, x, nmax) { 0u8 } else { 1u8 };
    let verdict = split_conditions(p, &win, &part);
    if verdict.is_fails() {
        return None;
    }
    let (e0, e1): (Vec<_>, Vec<_>) = win.into_iter().partition(|x| part(x) == 0);
    Some(PerfectSplit { e0, e1, nmax, verdict })
}

/// Checks a proposed split given by an explicit membership rule.
pub fn verify_split_by<P: Pea>(p: &P, h: u32, part: &dyn Fn(&P::Elem) -> u8) -> Verdict {
    split_conditions(p, &p.window(h), part)
}

/// The two-valued state `s(E0) = 0`, `s(E1) = 1`.
#[derive(Clone, Debug)]
pub struct StateTable<E> {
    pub entries: Vec<(E, u8)>,
}

impl<E: Eq> StateTable<E> {
    pub fn value(&self, x: &E) -> Option<u8> {
        self.entries.iter().find(|(y, _)| y == x).map(|(_, v)| *v)
    }
}

/// Builds the state of a perfect split and checks additivity on window sums.
pub fn unique_state<P: Pea>(p: &P, split: &PerfectSplit<P::Elem>, h: u32) -> Result<(StateTable<P::Elem>, Verdict)> {
    let nmax = split.nmax;
    if split.e0.iter().any(|x| !is_infinitesimal(p, x, nmax)) || split.e1.iter().any(|x| is_infinitesimal(p, x, nmax)) {
        return Err(Error::usage("split does not separate bounded infinitesimals"));
    }
    let s = |x: &P::Elem| if is_infinitesimal(p, x, nmax) { 0u8 } else { 1u8 };
    let win = p.window(h);
    let mut t = Tally::default();
    if s(&p.zero()) != 0 || s(&p.one()) != 1 {
        t.fail(vec![p.witness("zero", &p.zero()), p.witness("one", &p.one())]);
    }
    'o: for x in &win {
        for y in &win {
            if let Some(z) = p.add(x, y) {
                if s(&z) != s(x) + s(y) {
                    t.fail(vec![p.witness("x", x), p.witness("y", y), p.witness("sum", &z)]);
                    break 'o;
                }
                t.pass();
            }
        }
    }
    let entries = win.iter().map(|x| (x.clone(), s(x))).collect();
    Ok((StateTable { entries }, t.finish()))
}

/// Deliberately broken algebras used as mutation controls.
pub mod mutants {
    use super::*;
    use crate::kite::{Kite, KiteElement, Tag};
    use crate::pogroup::Elem;

    /// A kite whose `U + L` sum ignores its definedness condition.
    pub struct DroppedCaseTwo(pub Kite);

    impl Pea for DroppedCaseTwo {
        type Elem = KiteElement;

        fn name(&self) -> String {
            format!("{} without the U+L guard", self.0.name())
        }
        fn zero(&self) -> KiteElement {
            self.0.zero()
        }
        fn one(&self) -> KiteElement {
            self.0.one()
        }
        fn window(&self, h: u32) -> Vec<KiteElement> {
            self.0.kite_window(h)
        }
        fn contains(&self, x: &KiteElement) -> bool {
            self.0.is_member(x)
        }
        fn add(&self, x: &KiteElement, y: &KiteElement) -> Option<KiteElement> {
            if x.tag == Tag::Upper && y.tag == Tag::Lower {
                let k = &self.0;
                let rho_inv = k.rho().inverse();
                let mut out = Elem::new();
                for i in 0..k.n() {
                    out.extend_from_slice(&k.base().mul(k.coord(x, i), k.coord(y, rho_inv.apply(i))));
                }
                return Some(KiteElement::upper(out));
            }
            self.0.kite_add(x, y)
        }
        fn leq(&self, x: &KiteElement, y: &KiteElement) -> bool {
            self.0.kite_leq(x, y)
        }
        fn minus(&self, x: &KiteElement) -> KiteElement {
            self.0.neg_minus(x)
        }
        fn tilde(&self, x: &KiteElement) -> KiteElement {
            self.0.neg_tilde(x)
        }
        fn ldiff(&self, b: &KiteElement, a: &KiteElement) -> Option<KiteElement> {
            self.0.kite_ldiff(b, a)
        }
        fn rdiff(&self, a: &KiteElement, b: &KiteElement) -> Option<KiteElement> {
            self.0.kite_rdiff(a, b)
        }
        fn to_json(&self, x: &KiteElement) -> Value {
            self.0.to_json(x)
        }
        fn show(&self, x: &KiteElement) -> String {
            self.0.show(x)
        }
        fn class(&self, x: &KiteElement) -> u8 {
            x.tag as u8
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kite::{Kite, KiteMv};
    use crate::perm::Perm;
    use crate::pogroup::PoGroup;

    fn swap() -> Perm {
        Perm::new(vec![1, 0]).unwrap()
    }

    fn kz(l: Perm, r: Perm) -> Kite {
        Kite::over(&PoGroup::integers(), l, r).unwrap()
    }

    #[test]
    fn kite_axioms_hold() {
        let k = kz(Perm::identity(2), swap());
        let r = check_pea_axioms(&k, 2, Budget::default());
        for (key, v) in &r.verdicts {
            assert!(v.is_holds(), "{key}: {}", v.summary());
        }
        assert_eq!(r.verdicts.len(), 4);
    }

    #[test]
    fn boolean_kite_axioms() {
        let k = kz(Perm::identity(0), Perm::identity(0));
        let r = check_pea_axioms(&k, 2, Budget::default());
        assert!(r.overall().is_holds());
        assert_eq!(r.overall().skipped, 0);
    }

    #[test]
    fn sabotage_is_caught() {
        let m = mutants::DroppedCaseTwo(kz(Perm::identity(1), Perm::identity(1)));
        let r = check_pea_axioms(&m, 2, Budget::default());
        let v = r.get("PEA.iv");
        assert!(v.is_fails());
        assert_eq!(v.witness[0].text, "U(0)");
        assert_eq!(v.witness[1].text, "L(1)");
    }

    #[test]
    fn pmv_axioms_and_noncommutative_oplus() {
        let k = kz(Perm::identity(1), Perm::identity(1));
        let r = check_pmv_axioms(&KiteMv::new(&k).unwrap(), 2, Budget::default());
        assert_eq!(r.verdicts.len(), 8);
        assert!(r.overall().is_holds(), "{:?}", r.overall());
        let k2 = kz(Perm::identity(2), swap());
        let mv = KiteMv::new(&k2).unwrap();
        assert!(check_pmv_axioms(&mv, 2, Budget::default()).overall().is_holds());
        let win = k2.kite_window(2);
        let witness = win.iter().flat_map(|x| win.iter().map(move |y| (x, y))).find(|(x, y)| mv.oplus(x, y) != mv.oplus(y, x));
        assert!(witness.is_some());
        assert_eq!(mv.tilde(&mv.minus(&k2.zero())), k2.zero());
    }

    #[test]
    fn symmetric_and_commutative() {
        assert!(check_symmetric(&kz(Perm::identity(2), Perm::identity(2)), 2).is_holds());
        let v = check_symmetric(&kz(Perm::identity(2), swap()), 2);
        assert!(v.is_fails());
        assert!(check_symmetric(&kz(Perm::identity(0), Perm::identity(0)), 2).is_holds());
        assert!(check_commutative(&kz(Perm::identity(1), Perm::identity(1)), 2).is_holds());
        assert!(check_commutative(&kz(Perm::identity(2), swap()), 2).is_fails());
        let tl = PoGroup::twisted_lex(Perm::identity(2), swap(), &PoGroup::integers()).unwrap();
        let k = Kite::over(&tl, Perm::identity(1), Perm::identity(1)).unwrap();
        let v = check_commutative(&k, 1);
        assert!(v.is_fails());
        assert!(v.witness.iter().all(|w| w.text.starts_with('L')));
    }

    #[test]
    fn symmetric_witness_negations_differ() {
        let k = kz(Perm::identity(2), swap());
        let x = k.upper_ints(&[-1, 0]);
        assert_ne!(k.neg_minus(&x), k.neg_tilde(&x));
        assert_eq!(k.neg_minus(&x), k.lower_ints(&[1, 0]));
        assert_eq!(k.neg_tilde(&x), k.lower_ints(&[0, 1]));
    }

    #[test]
    fn infinitesimals_are_lowers() {
        let k = kz(Perm::identity(2), swap());
        let inf = find_infinitesimals(&k, 2, 8);
        let lowers: Vec<_> = k.kite_window(2).into_iter().filter(|x| x.is_lower()).collect();
        assert_eq!(inf.elements, lowers);
        assert!(inf.elements.contains(&k.zero()));
    }

    #[test]
    fn kite_split_and_state() {
        let k = kz(Perm::identity(2), swap());
        let split = perfect_split(&k, 3, 8).unwrap();
        assert!(split.verdict.is_holds());
        assert!(split.e0.iter().all(|x| x.is_lower()) && split.e1.iter().all(|x| x.is_upper()));
        let (st, v) = unique_state(&k, &split, 3).unwrap();
        assert!(v.is_holds());
        assert_eq!(st.value(&k.lower_ints(&[1, 2])), Some(0));
        assert_eq!(st.value(&k.upper_ints(&[-1, 0])), Some(1));
        for (x, s) in &st.entries {
            assert_eq!(st.value(&k.neg_minus(x)), Some(1 - s));
        }
        let k0 = kz(Perm::identity(0), Perm::identity(0));
        let s0 = perfect_split(&k0, 2, 8).unwrap();
        assert_eq!((s0.e0, s0.e1), (vec![k0.zero()], vec![k0.one()]));
    }
}
