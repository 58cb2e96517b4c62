//! Ideals, normal ideals and the least non-trivial normal ideal of a kite.
//!
//! Everything is window-truncated. Membership outside the window is answered
//! by an optional oracle; without one, normality checks that leave the window
//! come back Unknown.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::axioms::Pea;
use crate::error::{Error, Result};
use crate::kite::{Kite, KiteElement, KiteShape};
use crate::perm::Perm;
use crate::pogroup::{Elem, GroupDescriptor, PoGroup};
use crate::repr::IntervalPea;
use crate::verdict::{Status, Tally, Verdict};

/// Exact membership outside the window, when known.
pub type Oracle<'a, E> = &'a (dyn Fn(&E) -> bool + Sync);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFlags {
    pub downward: bool,
    pub sums: bool,
    /// No lower set or defined sum of members left the window.
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdealSet<E: Ord> {
    pub elements: BTreeSet<E>,
    pub generators: Vec<E>,
    pub flags: ClosedFlags,
}

impl<E: Ord + Clone> IdealSet<E> {
    pub fn contains(&self, x: &E) -> bool {
        self.elements.contains(x)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_subset(&self, other: &IdealSet<E>) -> bool {
        self.elements.is_subset(&other.elements)
    }

    pub fn to_json<P: Pea<Elem = E>>(&self, p: &P) -> Value {
        json!({
            "elements": self.elements.iter().map(|x| p.to_json(x)).collect::<Vec<_>>(),
            "generators": self.generators.iter().map(|x| p.to_json(x)).collect::<Vec<_>>(),
            "flags": self.flags,
        })
    }
}

/// Least window set containing `gens` that is closed downward and under defined sums.
pub fn ideal_closure<P: Pea>(p: &P, gens: &[P::Elem], h: u32) -> IdealSet<P::Elem> {
    let window: HashSet<P::Elem> = p.window(h).into_iter().collect();
    let mut set: BTreeSet<P::Elem> = BTreeSet::new();
    let mut exhaustive = true;
    let mut queue: Vec<P::Elem> = Vec::new();
    let push = |x: P::Elem, set: &mut BTreeSet<P::Elem>, queue: &mut Vec<P::Elem>| {
        if set.insert(x.clone()) {
            queue.push(x);
        }
    };
    for g in gens {
        if window.contains(g) {
            push(g.clone(), &mut set, &mut queue);
        } else {
            exhaustive = false;
        }
    }
    while let Some(x) = queue.pop() {
        let (below, ex) = p.lower_set(&x, h);
        exhaustive &= ex;
        for y in below {
            if window.contains(&y) {
                push(y, &mut set, &mut queue);
            } else {
                exhaustive = false;
            }
        }
        let members: Vec<P::Elem> = set.iter().cloned().collect();
        for y in &members {
            for s in [p.add(&x, y), p.add(y, &x)].into_iter().flatten() {
                if window.contains(&s) {
                    push(s, &mut set, &mut queue);
                } else {
                    exhaustive = false;
                }
            }
        }
    }
    IdealSet { elements: set, generators: gens.to_vec(), flags: ClosedFlags { downward: true, sums: true, exhaustive } }
}

/// `x + I = I + x` for every window `x`.
///
/// Each `x + y` is matched with the unique `z` having `z + x = x + y`, and
/// dually; `z` must lie in `I`.
pub fn is_normal<P: Pea>(p: &P, ideal: &IdealSet<P::Elem>, h: u32, oracle: Option<Oracle<'_, P::Elem>>) -> Verdict {
    let window: HashSet<P::Elem> = p.window(h).into_iter().collect();
    let member = |z: &P::Elem| -> Option<bool> {
        if ideal.contains(z) {
            Some(true)
        } else if let Some(o) = oracle {
            Some(o(z))
        } else if window.contains(z) {
            Some(false)
        } else {
            None
        }
    };
    let mut t = Tally::default();
    let mut xs: Vec<P::Elem> = window.iter().cloned().collect();
    xs.sort();
    'outer: for x in &xs {
        for y in &ideal.elements {
            if let Some(s) = p.add(x, y) {
                let z = p.ldiff(&s, x);
                match z.as_ref().map(&member) {
                    Some(Some(true)) => t.pass(),
                    Some(None) => t.skip("conjugate leaves the window"),
                    _ => {
                        let mut w = vec![p.witness("x", x), p.witness("y", y)];
                        if let Some(z) = &z {
                            w.push(p.witness("z", z));
                        }
                        if t.fail(w) {
                            break 'outer;
                        }
                    }
                }
            }
            if let Some(s) = p.add(y, x) {
                let z = p.rdiff(x, &s);
                match z.as_ref().map(&member) {
                    Some(Some(true)) => t.pass(),
                    Some(None) => t.skip("conjugate leaves the window"),
                    _ => {
                        let mut w = vec![p.witness("x", x), p.witness("y", y)];
                        if let Some(z) = &z {
                            w.push(p.witness("z", z));
                        }
                        if t.fail(w) {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

/// Result of iterating the generated-normal-ideal closure.
#[derive(Clone, Debug, PartialEq)]
pub struct Generated<E: Ord> {
    pub ideal: IdealSet<E>,
    pub rounds: u32,
    pub fixpoint: bool,
}

/// `N₀(a)` as an iterated closure: conjugate images `y/(x+y)`, `(z+x)∖z`,
/// double negations, then ideal closure, until a fixpoint or `depth` rounds.
pub fn normal_ideal_generated<P: Pea>(p: &P, a: &P::Elem, h: u32, depth: u32) -> Generated<P::Elem> {
    let win = p.window(h);
    let window: HashSet<P::Elem> = win.iter().cloned().collect();
    let mut ideal = ideal_closure(p, std::slice::from_ref(a), h);
    let mut rounds = 0;
    let mut fixpoint = false;
    while rounds < depth {
        rounds += 1;
        let mut fresh: Vec<P::Elem> = Vec::new();
        let mut left_window = false;
        let mut offer = |z: P::Elem, fresh: &mut Vec<P::Elem>| {
            if window.contains(&z) {
                if !ideal.contains(&z) {
                    fresh.push(z);
                }
            } else {
                left_window = true;
            }
        };
        for x in &ideal.elements {
            offer(p.minus(&p.minus(x)), &mut fresh);
            offer(p.tilde(&p.tilde(x)), &mut fresh);
            for y in &win {
                if let Some(s) = p.add(x, y) {
                    if let Some(z) = p.rdiff(y, &s) {
                        offer(z, &mut fresh);
                    }
                }
                if let Some(s) = p.add(y, x) {
                    if let Some(z) = p.ldiff(&s, y) {
                        offer(z, &mut fresh);
                    }
                }
            }
        }
        if left_window {
            ideal.flags.exhaustive = false;
        }
        if fresh.is_empty() {
            fixpoint = true;
            break;
        }
        let mut gens: Vec<P::Elem> = ideal.elements.iter().cloned().collect();
        gens.extend(fresh);
        let exhaustive = ideal.flags.exhaustive;
        ideal = ideal_closure(p, &gens, h);
        ideal.flags.exhaustive &= exhaustive;
    }
    ideal.generators = vec![a.clone()];
    Generated { ideal, rounds, fixpoint }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub sigma: Perm,
    pub cycles: Vec<Vec<usize>>,
    pub connected: bool,
}

impl OrbitReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("orbit report serializes")
    }
}

/// Cycles of `σ = ρ∘λ⁻¹`.
pub fn orbits(shape: &KiteShape) -> OrbitReport {
    let sigma = shape.sigma();
    let cycles = sigma.cycles();
    let connected = cycles.len() <= 1;
    OrbitReport { sigma, cycles, connected }
}

/// `λ = id`, `ρ(i) = i − k` on `I = ℤ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftShape {
    pub k: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftOrbits {
    pub k: i64,
    /// `None` when every index is its own orbit (`k = 0`).
    pub orbit_count: Option<u64>,
    /// One representative per orbit, when finitely many.
    pub representatives: Vec<i64>,
    pub connected: bool,
}

impl ShiftShape {
    pub fn orbits(&self) -> ShiftOrbits {
        let m = self.k.unsigned_abs();
        if m == 0 {
            return ShiftOrbits { k: 0, orbit_count: None, representatives: vec![], connected: false };
        }
        ShiftOrbits { k: self.k, orbit_count: Some(m), representatives: (0..m as i64).collect(), connected: m == 1 }
    }

    /// The relabeling `i ↦ i·k` turning a connected shift into `ρ(i) = i − 1`.
    pub fn canonical_form(&self) -> Result<(ShiftShape, i64)> {
        if !self.orbits().connected {
            return Err(Error::usage(format!("shift by {} is not connected", self.k)));
        }
        Ok((ShiftShape { k: 1 }, self.k))
    }
}

/// An o-ideal of a po-group, as far as it is known.
#[derive(Clone, Debug, PartialEq)]
pub enum OIdeal {
    Whole,
    /// Elements vanishing outside coordinates `lo..hi`.
    Block { lo: usize, hi: usize },
    /// Window part of a bounded closure.
    Sample(BTreeSet<Elem>),
}

impl OIdeal {
    /// Exact membership, or `None` when the answer depends on unseen elements.
    pub fn contains(&self, x: &[i64]) -> Option<bool> {
        match self {
            OIdeal::Whole => Some(true),
            OIdeal::Block { lo, hi } => {
                Some(x.iter().enumerate().all(|(i, &v)| (*lo..*hi).contains(&i) || v == 0))
            }
            OIdeal::Sample(s) => s.contains(x).then_some(true),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            OIdeal::Whole => "whole group".to_string(),
            OIdeal::Block { lo, hi } => format!("coordinates {lo}..{hi}"),
            OIdeal::Sample(s) => format!("bounded sample of {} elements", s.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeastOIdeal {
    pub verdict: Verdict,
    pub least: Option<OIdeal>,
    /// Two non-trivial o-ideals with trivial intersection, on failure.
    pub disjoint: Vec<OIdeal>,
}

/// Window part of the o-ideal generated by `g`: subgroup, conjugation and
/// convex closure, in that order each round.
pub fn o_ideal_closure(g: &PoGroup, gen: &[i64], h: u32, depth: u32) -> (BTreeSet<Elem>, bool) {
    let win = g.window(h);
    let window: HashSet<Elem> = win.iter().cloned().collect();
    let mut s: BTreeSet<Elem> = [g.identity(), Elem::from_slice(gen), g.inv(gen)]
        .into_iter()
        .filter(|x| window.contains(x))
        .collect();
    for _ in 0..depth {
        let before = s.len();
        let cur: Vec<Elem> = s.iter().cloned().collect();
        for a in &cur {
            for b in &cur {
                let p = g.mul(a, b);
                if window.contains(&p) {
                    s.insert(p);
                }
            }
            for c in &win {
                let p = g.mul(&g.mul(c, a), &g.inv(c));
                if window.contains(&p) {
                    s.insert(p);
                }
            }
        }
        let cur: Vec<Elem> = s.iter().cloned().collect();
        for x in &win {
            if s.contains(x) {
                continue;
            }
            let above = cur.iter().any(|a| g.leq(a, x));
            if above && cur.iter().any(|b| g.leq(x, b)) {
                s.insert(x.clone());
            }
        }
        if s.len() == before {
            return (s, true);
        }
    }
    (s, false)
}

/// The least non-trivial o-ideal of a po-group.
pub fn least_o_ideal(g: &PoGroup, h: u32) -> LeastOIdeal {
    if g.is_trivial() {
        return LeastOIdeal {
            verdict: Verdict::fails(0, vec![]).with_reason("trivial group has no non-trivial o-ideal"),
            least: None,
            disjoint: vec![],
        };
    }
    if matches!(g.descriptor(), GroupDescriptor::Integers) || (g.width() == 1 && g.twist_params().is_some()) {
        return LeastOIdeal { verdict: Verdict::holds(1), least: Some(OIdeal::Whole), disjoint: vec![] };
    }
    if let Some(parts) = g.product_parts() {
        let mut blocks = Vec::new();
        let mut lo = 0;
        for p in parts {
            if !p.is_trivial() {
                blocks.push(OIdeal::Block { lo, hi: lo + p.width() });
            }
            lo += p.width();
        }
        if blocks.len() >= 2 {
            return LeastOIdeal {
                verdict: Verdict::fails(2, vec![]).with_reason("two factor o-ideals meet trivially"),
                least: None,
                disjoint: blocks[..2].to_vec(),
            };
        }
        if blocks.len() == 1 {
            if let OIdeal::Block { lo, hi } = blocks[0] {
                let inner = &parts.iter().find(|p| !p.is_trivial()).expect("one factor");
                let sub = least_o_ideal(inner, h);
                let least = match sub.least {
                    Some(OIdeal::Whole) => Some(OIdeal::Block { lo, hi }),
                    _ => None,
                };
                let status = if least.is_some() { sub.verdict } else { sub.verdict.with_reason("factor o-ideal not lifted") };
                return LeastOIdeal { verdict: status, least, disjoint: vec![] };
            }
        }
    }
    // bounded generic search
    let gens: Vec<Elem> = g.window_by_norm(h).into_iter().filter(|x| g.is_positive(x) && !g.is_identity(x)).collect();
    let closures: Vec<BTreeSet<Elem>> = gens.iter().map(|x| o_ideal_closure(g, x, h, 4).0).collect();
    let e = g.identity();
    for i in 0..closures.len() {
        for j in i + 1..closures.len() {
            if closures[i].intersection(&closures[j]).all(|x| *x == e) {
                let w = vec![g.witness("g1", &gens[i]), g.witness("g2", &gens[j])];
                return LeastOIdeal {
                    verdict: Verdict::fails(closures.len() as u64, w).with_reason("window-bounded closures meet trivially"),
                    least: None,
                    disjoint: vec![OIdeal::Sample(closures[i].clone()), OIdeal::Sample(closures[j].clone())],
                };
            }
        }
    }
    let mut common = closures.first().cloned().unwrap_or_default();
    for c in &closures[1..] {
        common = common.intersection(c).cloned().collect();
    }
    LeastOIdeal {
        verdict: Verdict::unknown(closures.len() as u64, 1, "o-ideal closures are window-bounded"),
        least: Some(OIdeal::Sample(common)),
        disjoint: vec![],
    }
}

/// Outcome of the least-normal-ideal decision for a kite.
#[derive(Clone, Debug, PartialEq)]
pub struct LeastNormalIdeal {
    pub verdict: Verdict,
    pub orbits: OrbitReport,
    pub base: LeastOIdeal,
    /// Window part of `N_f^I` when the verdict holds.
    pub ideal: Option<IdealSet<KiteElement>>,
    /// Two disjoint non-trivial normal ideals on failure.
    pub witnesses: Vec<IdealSet<KiteElement>>,
    /// Normality verdicts of the returned ideals, in order.
    pub normality: Vec<Verdict>,
}

impl LeastNormalIdeal {
    pub fn to_json(&self, kite: &Kite) -> Value {
        json!({
            "verdict": self.verdict.to_json(),
            "orbits": self.orbits.to_json(),
            "base": {
                "verdict": self.base.verdict.to_json(),
                "least": self.base.least.as_ref().map(|o| o.describe()),
                "disjoint": self.base.disjoint.iter().map(|o| o.describe()).collect::<Vec<_>>(),
            },
            "ideal": self.ideal.as_ref().map(|i| i.to_json(kite)),
            "witnesses": self.witnesses.iter().map(|i| i.to_json(kite)).collect::<Vec<_>>(),
            "normality": self.normality.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Window lowers `L(f)` with every `f_j` in `h_ideal` and support inside `support`.
fn lowers_in(kite: &Kite, o: &OIdeal, support: &[usize], h: u32) -> IdealSet<KiteElement> {
    let elements: BTreeSet<KiteElement> = kite
        .kite_window(h)
        .into_iter()
        .filter(|x| x.is_lower())
        .filter(|x| {
            (0..kite.n()).all(|j| {
                let c = kite.coord(x, j);
                if support.contains(&j) {
                    o.contains(c) == Some(true)
                } else {
                    kite.base().is_identity(c)
                }
            })
        })
        .collect();
    let generators: Vec<KiteElement> = elements.iter().filter(|x| kite.kite_dimension(x) == 1).cloned().collect();
    IdealSet { elements, generators, flags: ClosedFlags { downward: true, sums: true, exhaustive: false } }
}

fn lowers_oracle<'a>(kite: &'a Kite, o: &'a OIdeal, support: &'a [usize]) -> impl Fn(&KiteElement) -> bool + Sync + 'a {
    move |x: &KiteElement| {
        x.is_lower()
            && (0..kite.n()).all(|j| {
                let c = kite.coord(x, j);
                if support.contains(&j) {
                    o.contains(c) == Some(true)
                } else {
                    kite.base().is_identity(c)
                }
            })
    }
}

/// Decides whether the kite has a least non-trivial normal ideal.
///
/// Holds needs a least o-ideal in the base and a single `σ`-cycle; the
/// returned ideal is then checked for normality and for containment in every
/// normal ideal generated by a one-dimensional window element.
pub fn least_normal_ideal(kite: &Kite, h: u32) -> LeastNormalIdeal {
    let orb = orbits(kite.shape());
    let base = least_o_ideal(kite.base(), h);
    let all: Vec<usize> = (0..kite.n()).collect();
    let mut out = LeastNormalIdeal {
        verdict: Verdict::holds(0),
        orbits: orb.clone(),
        base: base.clone(),
        ideal: None,
        witnesses: vec![],
        normality: vec![],
    };
    if kite.n() == 0 {
        out.verdict = Verdict::fails(0, vec![]).with_reason("empty index set: the only proper ideal is {0}");
        return out;
    }
    match base.verdict.status {
        Status::Fails => {
            if base.disjoint.len() == 2 {
                for o in &base.disjoint {
                    let set = lowers_in(kite, o, &all, h);
                    let oracle = lowers_oracle(kite, o, &all);
                    out.normality.push(is_normal(kite, &set, h, Some(&oracle)));
                    out.witnesses.push(set);
                }
            }
            out.verdict = Verdict::fails(1, vec![]).with_reason("base has no least non-trivial o-ideal");
            return out;
        }
        Status::Unknown if orb.connected => {
            out.verdict = Verdict::unknown(0, 1, "least o-ideal of the base is undecided");
            return out;
        }
        _ => {}
    }
    if !orb.connected {
        // supports of lowers move along τ = λ⁻¹σλ, so components are λ⁻¹ of σ-cycles
        let lam_inv = kite.lambda().inverse();
        let comps: Vec<Vec<usize>> =
            orb.cycles.iter().take(2).map(|c| c.iter().map(|&i| lam_inv.apply(i)).collect()).collect();
        let o = base.least.clone().unwrap_or(OIdeal::Whole);
        for c in &comps {
            let set = lowers_in(kite, &o, c, h);
            let oracle = lowers_oracle(kite, &o, c);
            out.normality.push(is_normal(kite, &set, h, Some(&oracle)));
            out.witnesses.push(set);
        }
        let zero = kite.zero();
        let meet_trivial = out.witnesses[0].elements.intersection(&out.witnesses[1].elements).all(|x| *x == zero);
        let w = comps.iter().enumerate().map(|(k, c)| {
            crate::verdict::Witness::new(format!("component{k}"), json!(c), format!("{c:?}"))
        });
        out.verdict = Verdict::fails(1, w.collect()).with_reason(if meet_trivial {
            "disconnected indices give disjoint normal ideals"
        } else {
            "disconnected indices; witness ideals overlap in the window"
        });
        return out;
    }
    let o = base.least.clone().unwrap_or(OIdeal::Whole);
    let ideal = lowers_in(kite, &o, &all, h);
    let oracle = lowers_oracle(kite, &o, &all);
    let normal = is_normal(kite, &ideal, h, Some(&oracle));
    let mut t = Tally::default();
    for g in ideal.generators.clone() {
        let gen = normal_ideal_generated(kite, &g, h, 4);
        if ideal.is_subset(&gen.ideal) {
            t.pass();
        } else {
            let missing = ideal.elements.difference(&gen.ideal.elements).next().expect("not a subset");
            if t.fail(vec![kite.witness("generator", &g), kite.witness("missing", missing)]) {
                break;
            }
        }
    }
    let contained = t.finish();
    out.normality.push(normal.clone());
    out.verdict = Verdict::holds(1).merge(normal).merge(contained);
    if out.verdict.status == Status::Unknown && base.verdict.is_holds() {
        out.verdict.reason.get_or_insert_with(|| "bounded".into());
    }
    out.ideal = Some(ideal);
    out
}

/// Index relabeling of a kite: `L(f) ↦ L(f∘α)`, `U(A) ↦ U(A∘β)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relabeling {
    pub alpha: Perm,
    pub beta: Perm,
}

impl Relabeling {
    /// Image of `x` in the relabeled kite `K^{β⁻¹λα, β⁻¹ρα}`.
    pub fn apply(&self, kite: &Kite, x: &KiteElement) -> KiteElement {
        let p = if x.is_lower() { &self.alpha } else { &self.beta };
        let coords = (0..kite.n()).flat_map(|j| kite.coord(x, p.apply(j)).iter().copied()).collect();
        KiteElement { tag: x.tag, coords }
    }

    pub fn shape_image(&self, shape: &KiteShape) -> KiteShape {
        let bi = self.beta.inverse();
        KiteShape {
            n: shape.n,
            lambda: bi.compose(&shape.lambda).compose(&self.alpha),
            rho: bi.compose(&shape.rho).compose(&self.alpha),
            base: shape.base.clone(),
        }
    }
}

/// Relabels a connected shape to `λ' = id`, `ρ'(i) = i − 1 mod n`.
pub fn canonical_form(shape: &KiteShape) -> Result<(KiteShape, Relabeling)> {
    let orb = orbits(shape);
    if !orb.connected {
        return Err(Error::usage(format!("{} has {} σ-cycles; canonical form needs one", shape.label(), orb.cycles.len())));
    }
    let n = shape.n;
    let sigma = orb.sigma;
    let beta = Perm::new((0..n).map(|k| if n == 0 { 0 } else { sigma.pow_apply(0, -(k as i64)) }).collect())?;
    let alpha = shape.lambda.inverse().compose(&beta);
    let r = Relabeling { alpha, beta };
    let image = r.shape_image(shape);
    debug_assert!(image.lambda.is_identity());
    Ok((image, r))
}

/// Support movement of a one-dimensional lower under double negation.
///
/// Indices are read in the frame `j = λ(s)` of the raw support `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleNegationShift {
    pub support: usize,
    pub frame: usize,
    pub minus_minus: Option<usize>,
    pub tilde_tilde: Option<usize>,
    pub sigma_image: usize,
    pub sigma_inv_image: usize,
    pub meet_zero_minus: Option<bool>,
    pub meet_zero_tilde: Option<bool>,
    /// `ρ(λ⁻¹(j)) ≠ j`.
    pub predicted_zero_minus: bool,
    /// `λ(ρ⁻¹(j)) ≠ j`.
    pub predicted_zero_tilde: bool,
}

impl DoubleNegationShift {
    pub fn consistent(&self) -> bool {
        self.minus_minus == Some(self.sigma_image)
            && self.tilde_tilde == Some(self.sigma_inv_image)
            && self.meet_zero_minus.is_none_or(|m| m == self.predicted_zero_minus)
            && self.meet_zero_tilde.is_none_or(|m| m == self.predicted_zero_tilde)
    }
}

pub fn double_negation_shift(kite: &Kite, x: &KiteElement) -> Option<DoubleNegationShift> {
    if !x.is_lower() || kite.kite_dimension(x) != 1 {
        return None;
    }
    let s = kite.support(x)[0];
    let (lam, rho) = (kite.lambda(), kite.rho());
    let sigma = kite.shape().sigma();
    let j = lam.apply(s);
    let frame_of = |y: &KiteElement| -> Option<usize> {
        let sup = kite.support(y);
        (y.is_lower() && sup.len() == 1).then(|| lam.apply(sup[0]))
    };
    let mm = kite.neg_minus(&kite.neg_minus(x));
    let tt = kite.neg_tilde(&kite.neg_tilde(x));
    let zero = kite.zero();
    Some(DoubleNegationShift {
        support: s,
        frame: j,
        minus_minus: frame_of(&mm),
        tilde_tilde: frame_of(&tt),
        sigma_image: sigma.apply(j),
        sigma_inv_image: sigma.inverse().apply(j),
        meet_zero_minus: kite.kite_meet(&mm, x).map(|m| m == zero),
        meet_zero_tilde: kite.kite_meet(&tt, x).map(|m| m == zero),
        predicted_zero_minus: rho.apply(lam.inverse().apply(j)) != j,
        predicted_zero_tilde: lam.apply(rho.inverse().apply(j)) != j,
    })
}

/// Checks the double-negation shift law on every one-dimensional window lower.
pub fn check_double_negation_shift(kite: &Kite, h: u32) -> Verdict {
    let mut t = Tally::default();
    for x in kite.kite_window(h) {
        if let Some(d) = double_negation_shift(kite, &x) {
            if d.consistent() {
                t.pass();
            } else if t.fail(vec![kite.witness("x", &x)]) {
                break;
            }
        }
    }
    t.finish()
}

/// Window part of the subgroup generated by an ideal of `Γ(G, u)`, with its
/// o-ideal and restriction checks.
#[derive(Clone, Debug)]
pub struct PhiReport {
    pub subgroup: BTreeSet<Elem>,
    pub fixpoint: bool,
    /// Convex and closed under conjugation on the group window; conjugates
    /// leaving the window are not counted.
    pub o_ideal: Verdict,
    pub normal: Verdict,
    /// `o_ideal` and `normal` agree.
    pub agreement: Verdict,
    /// `φ(I) ∩ [0, u]` equals `I` on the window.
    pub restriction: Verdict,
}

impl PhiReport {
    pub fn to_json(&self, g: &PoGroup) -> Value {
        json!({
            "subgroup": self.subgroup.iter().map(|x| g.to_json(x)).collect::<Vec<_>>(),
            "fixpoint": self.fixpoint,
            "o_ideal": self.o_ideal.to_json(),
            "normal": self.normal.to_json(),
            "agreement": self.agreement.to_json(),
            "restriction": self.restriction.to_json(),
        })
    }
}

fn o_ideal_check(g: &PoGroup, s: &BTreeSet<Elem>, win: &[Elem]) -> Verdict {
    let window: HashSet<&Elem> = win.iter().collect();
    let mut t = Tally::default();
    let cur: Vec<&Elem> = s.iter().collect();
    for x in win {
        if s.contains(x) {
            continue;
        }
        let lo = cur.iter().find(|a| g.leq(a, x));
        let hi = cur.iter().find(|b| g.leq(x, b));
        if let (Some(a), Some(b)) = (lo, hi) {
            if t.fail(vec![g.witness("below", a), g.witness("x", x), g.witness("above", b)]) {
                return t.finish();
            }
        } else {
            t.pass();
        }
    }
    for a in &cur {
        for c in win {
            let p = g.mul(&g.mul(c, a), &g.inv(c));
            if !window.contains(&p) {
                continue;
            }
            if s.contains(&p) {
                t.pass();
            } else if t.fail(vec![g.witness("a", a), g.witness("c", c), g.witness("conjugate", &p)]) {
                return t.finish();
            }
        }
    }
    t.finish()
}

/// `φ(I) = {x₁ + ⋯ + x_n − y₁ − ⋯ − y_m}` on the group window of height `h`.
pub fn phi_o_ideal(q: &IntervalPea, ideal: &IdealSet<Elem>, h: u32, depth: u32) -> PhiReport {
    let g = q.group();
    let win = g.window(h);
    let window: HashSet<Elem> = win.iter().cloned().collect();
    let mut s: BTreeSet<Elem> = BTreeSet::new();
    s.insert(g.identity());
    for x in &ideal.elements {
        for y in [x.clone(), g.inv(x)] {
            if window.contains(&y) {
                s.insert(y);
            }
        }
    }
    let mut fixpoint = false;
    for _ in 0..depth.max(1) * 4 {
        let cur: Vec<Elem> = s.iter().cloned().collect();
        let before = s.len();
        for a in &cur {
            for b in &cur {
                let p = g.mul(a, b);
                if window.contains(&p) {
                    s.insert(p);
                }
            }
        }
        if s.len() == before {
            fixpoint = true;
            break;
        }
    }
    let o_ideal = o_ideal_check(g, &s, &win);
    let normal = is_normal(q, ideal, h, None);
    let agreement = match (o_ideal.is_unknown() || normal.is_unknown(), o_ideal.is_holds() == normal.is_holds()) {
        (true, _) => Verdict::unknown(1, 0, "undecided at window scale"),
        (false, true) => Verdict::holds(1),
        (false, false) => Verdict::fails(1, vec![]).with_reason(format!(
            "o-ideal {} but normality {}",
            o_ideal.summary(),
            normal.summary()
        )),
    };
    let mut t = Tally::default();
    for x in q.window(h) {
        if s.contains(&x) == ideal.contains(&x) {
            t.pass();
        } else if t.fail(vec![q.witness("x", &x)]) {
            break;
        }
    }
    PhiReport { subgroup: s, fixpoint, o_ideal, normal, agreement, restriction: t.finish() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kz(l: Perm, r: Perm) -> Kite {
        Kite::over(&PoGroup::integers(), l, r).unwrap()
    }

    fn swap() -> Perm {
        Perm::new(vec![1, 0]).unwrap()
    }

    fn shift4() -> Perm {
        Perm::rotation(4, -1)
    }

    #[test]
    fn closures() {
        let k = kz(Perm::identity(2), swap());
        let z = ideal_closure(&k, &[k.zero()], 3);
        assert_eq!(z.elements.len(), 1);
        let i = ideal_closure(&k, &[k.lower_ints(&[1, 0])], 3);
        let expect: BTreeSet<KiteElement> = (0..=3).map(|a| k.lower_ints(&[a, 0])).collect();
        assert_eq!(i.elements, expect);
        assert!(!i.flags.exhaustive);
        let top = ideal_closure(&k, &[k.one()], 2);
        assert_eq!(top.len(), k.kite_window(2).len());
    }

    #[test]
    fn normality() {
        let k = kz(Perm::identity(2), swap());
        let all: BTreeSet<KiteElement> = k.kite_window(2).into_iter().filter(|x| x.is_lower()).collect();
        let n = IdealSet { elements: all, generators: vec![], flags: ClosedFlags::default() };
        let oracle = |x: &KiteElement| x.is_lower();
        assert!(is_normal(&k, &n, 2, Some(&oracle)).is_holds());
        let one = ideal_closure(&k, &[k.lower_ints(&[1, 0])], 3);
        let v = is_normal(&k, &one, 3, None);
        assert!(v.is_fails());
        assert_eq!(v.witness[0].text.chars().next(), Some('U'));
        let zero = ideal_closure(&k, &[k.zero()], 2);
        assert!(is_normal(&k, &zero, 2, None).is_holds());
    }

    #[test]
    fn generated_normal_ideals() {
        let k = kz(Perm::identity(2), swap());
        let g = normal_ideal_generated(&k, &k.lower_ints(&[1, 0]), 2, 4);
        assert!(g.ideal.contains(&k.lower_ints(&[0, 1])));
        let lowers: BTreeSet<KiteElement> = k.kite_window(2).into_iter().filter(|x| x.is_lower()).collect();
        assert_eq!(g.ideal.elements, lowers);
        let k = kz(Perm::identity(2), Perm::identity(2));
        let g = normal_ideal_generated(&k, &k.lower_ints(&[1, 0]), 2, 4);
        assert!(!g.ideal.contains(&k.lower_ints(&[0, 1])));
        assert!(g.fixpoint);
        let g = normal_ideal_generated(&k, &k.zero(), 2, 4);
        assert_eq!(g.ideal.len(), 1);
    }

    #[test]
    fn orbit_reports() {
        let s = KiteShape::new(Perm::identity(4), shift4(), GroupDescriptor::Integers).unwrap();
        assert!(orbits(&s).connected);
        let s = KiteShape::new(Perm::identity(4), Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap(), GroupDescriptor::Integers).unwrap();
        let o = orbits(&s);
        assert!(!o.connected);
        assert_eq!(o.cycles.len(), 2);
        let s = KiteShape::new(Perm::identity(1), Perm::identity(1), GroupDescriptor::Integers).unwrap();
        assert!(orbits(&s).connected);
        assert_eq!(orbits(&s).to_json()["connected"], true);
    }

    #[test]
    fn shift_shapes() {
        assert!(ShiftShape { k: 1 }.orbits().connected);
        assert_eq!(ShiftShape { k: -3 }.orbits().orbit_count, Some(3));
        assert_eq!(ShiftShape { k: 0 }.orbits().orbit_count, None);
        assert!(ShiftShape { k: 2 }.canonical_form().is_err());
        assert_eq!(ShiftShape { k: -1 }.canonical_form().unwrap().0, ShiftShape { k: 1 });
    }

    #[test]
    fn o_ideals() {
        assert!(least_o_ideal(&PoGroup::integers(), 2).verdict.is_holds());
        let v = least_o_ideal(&PoGroup::z2(), 2);
        assert!(v.verdict.is_fails());
        assert_eq!(v.disjoint.len(), 2);
        assert!(least_o_ideal(&PoGroup::product(vec![]), 2).verdict.is_fails());
        let (s, _) = o_ideal_closure(&PoGroup::z2(), &[1, 0], 2, 4);
        assert!(s.iter().all(|x| x[1] == 0));
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn least_normal_ideal_decisions() {
        let k = kz(Perm::identity(4), shift4());
        let r = least_normal_ideal(&k, 2);
        assert!(r.verdict.is_holds(), "{}", r.verdict.summary());
        let k = kz(Perm::identity(4), Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap());
        let r = least_normal_ideal(&k, 2);
        assert!(r.verdict.is_fails());
        assert_eq!(r.witnesses.len(), 2);
        assert!(r.normality.iter().all(|v| v.is_holds()));
        let common: Vec<_> = r.witnesses[0].elements.intersection(&r.witnesses[1].elements).collect();
        assert_eq!(common, vec![&k.zero()]);
        let k = Kite::over(&PoGroup::z2(), Perm::identity(1), Perm::identity(1)).unwrap();
        let r = least_normal_ideal(&k, 2);
        assert!(r.verdict.is_fails());
        assert!(r.normality.iter().all(|v| v.is_holds()));
    }

    #[test]
    fn canonical_forms() {
        let l = Perm::new(vec![1, 2, 0]).unwrap();
        let s = KiteShape::new(l, Perm::identity(3), GroupDescriptor::Integers).unwrap();
        let (c, r) = canonical_form(&s).unwrap();
        assert!(c.lambda.is_identity());
        assert_eq!(c.rho, Perm::rotation(3, -1));
        let k = Kite::new(s).unwrap();
        let kc = Kite::new(c).unwrap();
        let w = k.kite_window(2);
        for x in &w {
            for y in &w {
                let s = k.kite_add(x, y).map(|s| r.apply(&k, &s));
                assert_eq!(s, kc.kite_add(&r.apply(&k, x), &r.apply(&k, y)));
            }
        }
        let s = KiteShape::new(swap(), swap(), GroupDescriptor::Integers).unwrap();
        assert!(canonical_form(&s).is_err());
        let s = KiteShape::new(Perm::identity(1), Perm::identity(1), GroupDescriptor::Integers).unwrap();
        assert_eq!(canonical_form(&s).unwrap().0, s);
    }

    #[test]
    fn double_negation_law() {
        for n in 1..=3 {
            for l in Perm::all(n) {
                for r in Perm::all(n) {
                    let k = kz(l.clone(), r);
                    assert!(check_double_negation_shift(&k, 2).is_holds());
                }
            }
        }
    }

    #[test]
    fn phi_of_interval_ideals() {
        let z = PoGroup::integers();
        let lex = crate::repr::twisted_lex_group(Perm::identity(1), Perm::identity(1), &z).unwrap();
        let q = IntervalPea::new(lex.clone(), &[1, 0]).unwrap();
        let zero = ideal_closure(&q, &[lex.identity()], 2);
        let r = phi_o_ideal(&q, &zero, 2, 4);
        assert_eq!(r.subgroup.len(), 1);
        assert!(r.agreement.is_holds() && r.restriction.is_holds());

        let infin = ideal_closure(&q, &[Elem::from_slice(&[0, 1])], 2);
        let r = phi_o_ideal(&q, &infin, 2, 4);
        assert!(r.fixpoint);
        assert_eq!(r.subgroup.len(), 5);
        assert!(r.subgroup.iter().all(|x| x[0] == 0));
        assert!(r.normal.is_holds() && r.o_ideal.is_holds() && r.agreement.is_holds());
        assert!(r.restriction.is_holds());

        let full = ideal_closure(&q, &[Elem::from_slice(&[1, 0])], 2);
        let r = phi_o_ideal(&q, &full, 2, 4);
        assert!(lex.window(2).iter().all(|x| r.subgroup.contains(x)));
        assert!(r.agreement.is_holds() && r.restriction.is_holds());
    }

    #[test]
    fn phi_of_non_normal_ideal_is_not_an_o_ideal() {
        let z = PoGroup::integers();
        let g = crate::repr::twisted_lex_group(Perm::identity(2), swap(), &z).unwrap();
        let q = IntervalPea::new(g, &[1, 0, 0]).unwrap();
        let i = ideal_closure(&q, &[Elem::from_slice(&[0, 1, 0])], 3);
        let r = phi_o_ideal(&q, &i, 3, 4);
        assert!(r.normal.is_fails());
        assert!(r.o_ideal.is_fails());
        assert!(r.agreement.is_holds());
        assert!(r.restriction.is_holds());
    }
}
