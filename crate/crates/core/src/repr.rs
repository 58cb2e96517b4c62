//! Interval algebras `Γ(G, u)`, twisted lexicographic groups and window
//! isomorphism checks between kites and intervals.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::axioms::{Pea, PseudoMv};
use crate::error::{Error, Result};
use crate::kite::{Kite, KiteElement, KiteShape, Tag};
use crate::perm::Perm;
use crate::pogroup::{Elem, GroupDescriptor, PoGroup};
use crate::verdict::{Tally, Verdict};

/// `Γ(G, u) = {g : e ≤ g ≤ u}` with `a + b = ab` when `ab ≤ u`.
#[derive(Clone, Debug)]
pub struct IntervalPea {
    group: PoGroup,
    unit: Elem,
}

impl IntervalPea {
    pub fn new(group: PoGroup, unit: &[i64]) -> Result<Self> {
        if unit.len() != group.width() {
            return Err(Error::usage(format!("unit has width {}, group {} has width {}", unit.len(), group.name(), group.width())));
        }
        if !group.lt(&group.identity(), unit) {
            return Err(Error::usage(format!("unit {} is not strictly positive", group.show(unit))));
        }
        Ok(IntervalPea { group, unit: unit.into() })
    }

    pub fn group(&self) -> &PoGroup {
        &self.group
    }

    pub fn unit(&self) -> &Elem {
        &self.unit
    }

    pub fn mv(&self) -> Result<IntervalMv<'_>> {
        if !self.group.is_lattice() {
            return Err(Error::capability(format!("{} is not lattice ordered", self.group.name())));
        }
        Ok(IntervalMv(self))
    }
}

/// `Γ(G, u)` for convenience.
pub fn interval_pea(group: PoGroup, unit: &[i64]) -> Result<IntervalPea> {
    IntervalPea::new(group, unit)
}

impl Pea for IntervalPea {
    type Elem = Elem;

    fn name(&self) -> String {
        format!("Γ({}, {})", self.group.name(), self.group.show(&self.unit))
    }

    fn zero(&self) -> Elem {
        self.group.identity()
    }

    fn one(&self) -> Elem {
        self.unit.clone()
    }

    fn window(&self, h: u32) -> Vec<Elem> {
        self.group.enumerate_interval(&self.group.identity(), &self.unit, h).0
    }

    fn contains(&self, x: &Elem) -> bool {
        x.len() == self.group.width() && self.group.is_positive(x) && self.group.leq(x, &self.unit)
    }

    fn add(&self, x: &Elem, y: &Elem) -> Option<Elem> {
        let s = self.group.mul(x, y);
        self.group.leq(&s, &self.unit).then_some(s)
    }

    fn leq(&self, x: &Elem, y: &Elem) -> bool {
        self.group.leq(x, y)
    }

    fn minus(&self, x: &Elem) -> Elem {
        self.group.mul(&self.unit, &self.group.inv(x))
    }

    fn tilde(&self, x: &Elem) -> Elem {
        self.group.mul(&self.group.inv(x), &self.unit)
    }

    fn ldiff(&self, b: &Elem, a: &Elem) -> Option<Elem> {
        let c = self.group.rdiv(b, a);
        self.contains(&c).then_some(c)
    }

    fn rdiff(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        let c = self.group.ldiv(a, b);
        self.contains(&c).then_some(c)
    }

    fn meet(&self, x: &Elem, y: &Elem) -> Option<Elem> {
        self.group.meet(x, y)
    }

    fn lower_set(&self, x: &Elem, h: u32) -> (Vec<Elem>, bool) {
        let e = self.group.identity();
        match self.group.interval_exact(&e, x) {
            Some(v) => (v, true),
            None => self.group.enumerate_interval(&e, x, h),
        }
    }

    fn class(&self, x: &Elem) -> u8 {
        match self.group.twist_params() {
            Some(_) => x[0].clamp(0, 1) as u8,
            None => 0,
        }
    }

    fn to_json(&self, x: &Elem) -> Value {
        self.group.to_json(x)
    }

    fn show(&self, x: &Elem) -> String {
        self.group.show(x)
    }
}

/// The pseudo MV-algebra on `Γ(G, u)` for a lattice-ordered `G`.
#[derive(Clone, Copy, Debug)]
pub struct IntervalMv<'a>(&'a IntervalPea);

impl PseudoMv for IntervalMv<'_> {
    type Elem = Elem;

    fn name(&self) -> String {
        self.0.name()
    }

    fn zero(&self) -> Elem {
        self.0.zero()
    }

    fn one(&self) -> Elem {
        self.0.one()
    }

    fn window(&self, h: u32) -> Vec<Elem> {
        self.0.window(h)
    }

    /// `x ⊕ y = xy ∧ u`.
    fn oplus(&self, x: &Elem, y: &Elem) -> Elem {
        let g = &self.0.group;
        g.meet(&g.mul(x, y), &self.0.unit).expect("lattice group")
    }

    /// `x ⊙ y = x u⁻¹ y ∨ e`.
    fn odot(&self, x: &Elem, y: &Elem) -> Elem {
        let g = &self.0.group;
        let p = g.mul(&g.mul(x, &g.inv(&self.0.unit)), y);
        g.join(&p, &g.identity()).expect("lattice group")
    }

    fn minus(&self, x: &Elem) -> Elem {
        self.0.minus(x)
    }

    fn tilde(&self, x: &Elem) -> Elem {
        self.0.tilde(x)
    }

    fn to_json(&self, x: &Elem) -> Value {
        self.0.to_json(x)
    }

    fn show(&self, x: &Elem) -> String {
        self.0.show(x)
    }
}

/// Group laws and translation invariance of the order on a window.
pub fn check_group_axioms(g: &PoGroup, h: u32) -> Verdict {
    let w = g.window(h);
    let e = g.identity();
    let mut t = Tally::default();
    for a in &w {
        if g.mul(a, &e) != *a || g.mul(&e, a) != *a || g.mul(a, &g.inv(a)) != e || g.mul(&g.inv(a), a) != e {
            if t.fail(vec![g.witness("a", a)]) {
                return t.finish();
            }
            continue;
        }
        t.pass();
    }
    'outer: for a in &w {
        for b in &w {
            let ab = g.mul(a, b);
            let le = g.leq(a, b);
            for c in &w {
                let ok = g.mul(&ab, c) == g.mul(a, &g.mul(b, c))
                    && (!le || (g.leq(&g.mul(c, a), &g.mul(c, b)) && g.leq(&g.mul(a, c), &g.mul(b, c))));
                if ok {
                    t.pass();
                } else if t.fail(vec![g.witness("a", a), g.witness("b", b), g.witness("c", c)]) {
                    break 'outer;
                }
            }
        }
    }
    t.finish()
}

/// `ℤ ×→ base^n` with the twisted product; the group laws are checked on the
/// height-1 window before returning.
pub fn twisted_lex_group(lambda: Perm, rho: Perm, base: &PoGroup) -> Result<PoGroup> {
    let g = PoGroup::twisted_lex(lambda, rho, base)?;
    let v = check_group_axioms(&g, 1);
    if v.is_fails() {
        return Err(Error::usage(format!("{} fails the group laws: {}", g.name(), v.summary())));
    }
    Ok(g)
}

/// `u` is a strong unit on the window: each element lies below some `u^k`, `k ≤ h + 1`.
pub fn check_strong_unit(g: &PoGroup, u: &[i64], h: u32) -> Verdict {
    let mut t = Tally::default();
    let mut powers = vec![g.identity()];
    for _ in 0..=h {
        let last = powers.last().expect("nonempty").clone();
        powers.push(g.mul(&last, u));
    }
    for x in g.window(h) {
        if powers.iter().any(|p| g.leq(&x, p)) {
            t.pass();
        } else if t.fail(vec![g.witness("x", &x)]) {
            break;
        }
    }
    t.finish()
}

/// `(m₁,x) *₁ (m₂,y) = (m₁+m₂, x_{i+m₂} + y_i)`, indices mod n.
pub fn scrimger_mul(a: &[i64], b: &[i64]) -> Elem {
    let n = a.len() - 1;
    let m2 = b[0];
    let mut out = Elem::from_slice(&[a[0] + b[0]]);
    for i in 0..n {
        let k = (i as i64 + m2).rem_euclid(n as i64) as usize;
        out.push(a[1 + k] + b[1 + i]);
    }
    out
}

/// `(m₁,x) * (m₂,y) = (m₁+m₂, x_i + y_{i+m₁})`, indices mod n.
pub fn shifted_mul(a: &[i64], b: &[i64]) -> Elem {
    let n = a.len() - 1;
    let m1 = a[0];
    let mut out = Elem::from_slice(&[a[0] + b[0]]);
    for i in 0..n {
        let k = (i as i64 + m1).rem_euclid(n as i64) as usize;
        out.push(a[1 + i] + b[1 + k]);
    }
    out
}

/// `−(m, a) = (−m, −a_{i−m})`, shared by both products above.
pub fn scrimger_inv(a: &[i64]) -> Elem {
    let n = a.len() - 1;
    let m = a[0];
    let mut out = Elem::from_slice(&[-m]);
    for i in 0..n {
        let k = (i as i64 - m).rem_euclid(n as i64) as usize;
        out.push(-a[1 + k]);
    }
    out
}

/// `c(i) = i − 1 mod n`.
pub fn down_cycle(n: usize) -> Perm {
    Perm::rotation(n, -1)
}

/// The twisted group realising `*₁`.
pub fn scrimger_group(n: usize) -> Result<PoGroup> {
    twisted_lex_group(down_cycle(n), Perm::identity(n), &PoGroup::integers())
}

/// The twisted group realising `*`.
pub fn shifted_group(n: usize) -> Result<PoGroup> {
    twisted_lex_group(Perm::identity(n), down_cycle(n), &PoGroup::integers())
}

/// Piecewise map from a kite to `Γ(ℤ ×→ G^n, u)`:
/// `L(f) ↦ (0, f∘τ_L)`, `U(A) ↦ (1, A∘τ_U)`, with `A` inverted when asked.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MapSpec {
    #[serde(rename = "tauL")]
    pub tau_l: Perm,
    #[serde(rename = "tauU")]
    pub tau_u: Perm,
    pub invert: bool,
}

impl MapSpec {
    pub fn identity(n: usize) -> MapSpec {
        MapSpec { tau_l: Perm::identity(n), tau_u: Perm::identity(n), invert: false }
    }

    pub fn forward(&self, kite: &Kite, x: &KiteElement) -> Elem {
        let g = kite.base();
        let (m, tau) = match x.tag {
            Tag::Lower => (0, &self.tau_l),
            Tag::Upper => (1, &self.tau_u),
        };
        let mut out = Elem::from_slice(&[m]);
        for j in 0..kite.n() {
            let c = kite.coord(x, tau.apply(j));
            if self.invert && x.is_upper() {
                out.extend_from_slice(&g.inv(c));
            } else {
                out.extend_from_slice(c);
            }
        }
        out
    }

    pub fn backward(&self, kite: &Kite, q: &[i64]) -> Option<KiteElement> {
        let w = kite.base_width();
        if q.len() != 1 + kite.n() * w {
            return None;
        }
        let (tag, tau) = match q[0] {
            0 => (Tag::Lower, &self.tau_l),
            1 => (Tag::Upper, &self.tau_u),
            _ => return None,
        };
        let inv = tau.inverse();
        let g = kite.base();
        let mut coords = Elem::new();
        for k in 0..kite.n() {
            let j = inv.apply(k);
            let c = &q[1 + j * w..1 + (j + 1) * w];
            if self.invert && tag == Tag::Upper {
                coords.extend_from_slice(&g.inv(c));
            } else {
                coords.extend_from_slice(c);
            }
        }
        Some(KiteElement { tag, coords })
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("map spec serializes")
    }
}

/// Window isomorphism check between two algebras given both directions.
///
/// Sums are exact; the forward map is checked on `p`'s window and the
/// backward map on `q`'s window, each against exact carrier membership.
pub fn verify_iso_with<P: Pea, Q: Pea>(
    p: &P,
    q: &Q,
    fwd: &(dyn Fn(&P::Elem) -> Option<Q::Elem> + Sync),
    bwd: &(dyn Fn(&Q::Elem) -> Option<P::Elem> + Sync),
    hp: u32,
    hq: u32,
) -> Verdict {
    let mut t = Tally::default();
    for (name, img, want) in [("zero", fwd(&p.zero()), q.zero()), ("one", fwd(&p.one()), q.one())] {
        if img.as_ref() == Some(&want) {
            t.pass();
        } else {
            let mut w = vec![p.witness(name, &if name == "zero" { p.zero() } else { p.one() })];
            if let Some(i) = &img {
                w.push(q.witness("image", i));
            }
            t.fail(w);
            return t.finish();
        }
    }
    let pw = p.window(hp);
    let qw = q.window(hq);
    for x in &pw {
        match fwd(x) {
            Some(y) if q.contains(&y) && bwd(&y).as_ref() == Some(x) => t.pass(),
            _ => {
                t.fail(vec![p.witness("x", x)]);
                return t.finish();
            }
        }
    }
    for y in &qw {
        match bwd(y) {
            Some(x) if p.contains(&x) && fwd(&x).as_ref() == Some(y) => t.pass(),
            _ => {
                t.fail(vec![q.witness("y", y)]);
                return t.finish();
            }
        }
    }
    for x in &pw {
        let fx = fwd(x).expect("checked above");
        for y in &pw {
            let fy = fwd(y).expect("checked above");
            let left = p.add(x, y).map(|s| fwd(&s));
            let right = q.add(&fx, &fy).map(Some);
            if left == right {
                t.pass();
            } else {
                t.fail(vec![p.witness("x", x), p.witness("y", y)]);
                return t.finish();
            }
        }
    }
    for a in &qw {
        let ba = bwd(a).expect("checked above");
        for b in &qw {
            let bb = bwd(b).expect("checked above");
            let left = q.add(a, b).map(|s| bwd(&s));
            let right = p.add(&ba, &bb).map(Some);
            if left == right {
                t.pass();
            } else {
                t.fail(vec![q.witness("a", a), q.witness("b", b)]);
                return t.finish();
            }
        }
    }
    t.finish()
}

/// Checks a [`MapSpec`] between a kite and an interval algebra at height `h`.
pub fn verify_iso(kite: &Kite, q: &IntervalPea, m: &MapSpec, h: u32) -> Verdict {
    let width = 1 + kite.n() * kite.base_width();
    if q.group().width() != width || m.tau_l.len() != kite.n() || m.tau_u.len() != kite.n() {
        return Verdict::fails(0, vec![]).with_reason("map spec and algebras have mismatched sizes");
    }
    let fwd = |x: &KiteElement| Some(m.forward(kite, x));
    let bwd = |y: &Elem| m.backward(kite, y);
    verify_iso_with(kite, q, &fwd, &bwd, h, h)
}

/// Index permutations tried by the search: `id, λ, ρ, λ⁻¹, ρ⁻¹, σ^k`, deduplicated.
pub fn perm_family(shape: &KiteShape) -> Vec<Perm> {
    let sigma = shape.sigma();
    let mut out: Vec<Perm> = Vec::new();
    let mut add = |p: Perm| {
        if !out.contains(&p) {
            out.push(p);
        }
    };
    add(Perm::identity(shape.n));
    add(shape.lambda.clone());
    add(shape.rho.clone());
    add(shape.lambda.inverse());
    add(shape.rho.inverse());
    for k in 0..sigma.order() as i64 {
        add(sigma.pow(k));
    }
    out
}

/// First map spec in family order that verifies.
pub fn search_mapspec(kite: &Kite, q: &IntervalPea, h: u32) -> Option<MapSpec> {
    let fam = perm_family(kite.shape());
    let mut cands = Vec::new();
    for invert in [false, true] {
        for tl in &fam {
            for tu in &fam {
                cands.push(MapSpec { tau_l: tl.clone(), tau_u: tu.clone(), invert });
            }
        }
    }
    cands.into_par_iter().find_first(|m| verify_iso(kite, q, m, h).is_holds())
}

/// Outcome of a representation attempt.
#[derive(Clone, Debug)]
pub struct Representation {
    pub target: IntervalPea,
    pub map: Option<MapSpec>,
    pub verdict: Verdict,
}

/// `K^{λ,λ}(G) ≅ Γ(ℤ ×→ G^n, (1, e))` for symmetric kites.
pub fn perfect_representation(kite: &Kite, h: u32) -> Result<Representation> {
    if !kite.shape().is_symmetric() {
        return Err(Error::usage(format!("{} is not symmetric", kite.shape().label())));
    }
    let g = twisted_lex_group(kite.lambda().clone(), kite.lambda().clone(), kite.base())?;
    represent(kite, g, h)
}

fn represent(kite: &Kite, g: PoGroup, h: u32) -> Result<Representation> {
    let mut u = g.identity();
    u[0] = 1;
    let target = IntervalPea::new(g, &u)?;
    let map = search_mapspec(kite, &target, h);
    let verdict = match &map {
        Some(m) => verify_iso(kite, &target, m, h),
        None => Verdict::fails(0, vec![]).with_reason("no map spec in the family verifies"),
    };
    Ok(Representation { target, map, verdict })
}

/// `K^{λ,ρ}(G)` against `Γ(W^{λ,ρ}(G), (1, e))`; for `n = 0` the target is `Γ(ℤ, 1)`.
pub fn twisted_representation(kite: &Kite, h: u32) -> Result<Representation> {
    let g = if kite.n() == 0 {
        PoGroup::integers()
    } else {
        twisted_lex_group(kite.lambda().clone(), kite.rho().clone(), kite.base())?
    };
    represent(kite, g, h)
}

/// One orientation tried by [`scrimger_fixture`].
#[derive(Clone, Debug)]
pub struct Orientation {
    pub label: String,
    pub shape: KiteShape,
    pub map: Option<MapSpec>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct ScrimgerFixture {
    pub n: usize,
    pub group: PoGroup,
    pub orientations: Vec<Orientation>,
}

impl ScrimgerFixture {
    /// The first orientation that verifies.
    pub fn chosen(&self) -> Option<&Orientation> {
        self.orientations.iter().find(|o| o.verdict.is_holds())
    }

    pub fn verdict(&self) -> Verdict {
        match self.chosen() {
            Some(o) => o.verdict.clone(),
            None => Verdict::fails(0, vec![]).with_reason("no orientation verifies"),
        }
    }
}

/// The `*₁` group against the kites `K^{id,c}` and `K^{c,id}`, `c(i) = i − 1`.
pub fn scrimger_fixture(n: usize, h: u32) -> Result<ScrimgerFixture> {
    if n < 2 {
        return Err(Error::usage("the Scrimger fixture needs n ≥ 2"));
    }
    let group = scrimger_group(n)?;
    let mut u = group.identity();
    u[0] = 1;
    let target = IntervalPea::new(group.clone(), &u)?;
    let c = down_cycle(n);
    let mut orientations = Vec::new();
    for (label, l, r) in [("K^{id,c}", Perm::identity(n), c.clone()), ("K^{c,id}", c.clone(), Perm::identity(n))] {
        let shape = KiteShape::new(l, r, GroupDescriptor::Integers)?;
        let kite = Kite::new(shape.clone())?;
        let map = search_mapspec(&kite, &target, h);
        let verdict = match &map {
            Some(m) => verify_iso(&kite, &target, m, h),
            None => Verdict::fails(0, vec![]).with_reason("no map spec in the family verifies"),
        };
        orientations.push(Orientation { label: label.to_string(), shape, map, verdict });
    }
    Ok(ScrimgerFixture { n, group, orientations })
}

/// Stored map specs keyed by fixture name.
pub type Registry = BTreeMap<String, MapSpec>;

pub fn load_registry(path: &Path) -> Result<Registry> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::config("registry", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::config("registry", e.to_string()))
}

/// Kite and target of every registry fixture at height `h`.
pub fn registry_fixtures() -> Result<Vec<(String, Kite, IntervalPea)>> {
    let z = PoGroup::integers();
    let mut out = Vec::new();
    let boolean = Kite::over(&z, Perm::identity(0), Perm::identity(0))?;
    out.push(("boolean-n0".into(), boolean, IntervalPea::new(z.clone(), &[1])?));
    let chang = Kite::over(&z, Perm::identity(1), Perm::identity(1))?;
    let lex = twisted_lex_group(Perm::identity(1), Perm::identity(1), &z)?;
    out.push(("chang-n1".into(), chang, IntervalPea::new(lex, &[1, 0])?));
    for n in [2, 3] {
        let f = scrimger_fixture(n, 2)?;
        let o = f.chosen().ok_or_else(|| Error::usage(format!("no Scrimger orientation verifies at n = {n}")))?;
        let mut u = f.group.identity();
        u[0] = 1;
        out.push((format!("scrimger-n{n}"), Kite::new(o.shape.clone())?, IntervalPea::new(f.group.clone(), &u)?));
    }
    let swap = Perm::new(vec![1, 0])?;
    let sym = Kite::over(&z, swap.clone(), swap.clone())?;
    let g = twisted_lex_group(swap.clone(), swap.clone(), &z)?;
    out.push(("perfect-swap-n2".into(), sym, IntervalPea::new(g, &[1, 0, 0])?));
    let tw = Kite::over(&z, Perm::identity(2), swap.clone())?;
    let g = twisted_lex_group(Perm::identity(2), swap, &z)?;
    out.push(("twisted-id-swap-n2".into(), tw, IntervalPea::new(g, &[1, 0, 0])?));
    Ok(out)
}

/// Searches a map spec for every registry fixture.
pub fn build_registry(h: u32) -> Result<Registry> {
    let mut reg = Registry::new();
    for (name, kite, q) in registry_fixtures()? {
        let m = search_mapspec(&kite, &q, h).ok_or_else(|| Error::usage(format!("{name}: no map spec verifies")))?;
        reg.insert(name, m);
    }
    Ok(reg)
}
