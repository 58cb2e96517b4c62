//! Partially ordered groups on integer vectors.
//!
//! Every builtin group has `ℤ^width` as its underlying set, so elements are flat
//! `i64` vectors and windows are boxes `[-h, h]^width`. The group law and the
//! positive cone depend on the kind. Notation is multiplicative throughout.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::perm::{Perm, PowerTable};
use crate::verdict::{Verdict, Witness};

/// Flat coordinates of a group element.
pub type Elem = SmallVec<[i64; 8]>;

/// Serializable description of a group; `PoGroup::from_descriptor` validates it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum GroupDescriptor {
    Integers,
    Product { factors: Vec<GroupDescriptor> },
    StrictCone2,
    TwistedLex { n: usize, lambda: Perm, rho: Perm, base: Box<GroupDescriptor> },
    ConeByGenerators { rank: usize, generators: Vec<Vec<i64>> },
}

impl GroupDescriptor {
    pub fn integers() -> Self {
        GroupDescriptor::Integers
    }

    pub fn z2() -> Self {
        GroupDescriptor::Product { factors: vec![GroupDescriptor::Integers, GroupDescriptor::Integers] }
    }

    /// `ℤ ×→ base^n` with coordinates twisted by `λ`, `ρ`.
    pub fn twisted_lex(lambda: Perm, rho: Perm, base: GroupDescriptor) -> Self {
        GroupDescriptor::TwistedLex { n: lambda.len(), lambda, rho, base: Box::new(base) }
    }

    /// Short human name such as `Z`, `Z^2`, `TwistedLex(2,id,(0 1),Z)`.
    pub fn name(&self) -> String {
        match self {
            GroupDescriptor::Integers => "Z".into(),
            GroupDescriptor::Product { factors } => {
                if !factors.is_empty() && factors.iter().all(|f| *f == GroupDescriptor::Integers) {
                    format!("Z^{}", factors.len())
                } else {
                    let parts: Vec<String> = factors.iter().map(|f| f.name()).collect();
                    format!("Product({})", parts.join(","))
                }
            }
            GroupDescriptor::StrictCone2 => "StrictCone2".into(),
            GroupDescriptor::TwistedLex { n, lambda, rho, base } => {
                format!("TwistedLex({n},{lambda},{rho},{})", base.name())
            }
            GroupDescriptor::ConeByGenerators { rank, generators } => {
                format!("Cone({rank},{generators:?})")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capabilities {
    pub abelian: bool,
    pub lattice: bool,
    pub totally_ordered: bool,
}

#[derive(Clone, Debug)]
enum Kind {
    Integers,
    Product { parts: Vec<PoGroup>, offsets: Vec<usize> },
    StrictCone2,
    TwistedLex(Box<Twist>),
    Cone(Box<Cone>),
}

#[derive(Clone, Debug)]
struct Twist {
    n: usize,
    lambda: Perm,
    rho: Perm,
    lam: PowerTable,
    rh: PowerTable,
    rho_lam: PowerTable,
    base: PoGroup,
}

#[derive(Clone, Debug)]
struct Cone {
    rank: usize,
    gens: Vec<Vec<i64>>,
    /// Integer functional with `φ(g) ≥ 1` on every generator, when one was found.
    functional: Option<Vec<i64>>,
    nonneg: bool,
}

/// Bound on total coefficient mass when no positive functional is known.
const CONE_FALLBACK_MASS: i64 = 12;

/// A concrete partially ordered group.
#[derive(Clone, Debug)]
pub struct PoGroup {
    desc: GroupDescriptor,
    kind: Kind,
    width: usize,
    caps: Capabilities,
    warnings: Vec<String>,
}

impl PartialEq for PoGroup {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc
    }
}

impl Eq for PoGroup {}

impl PoGroup {
    pub fn integers() -> PoGroup {
        PoGroup::from_descriptor(&GroupDescriptor::Integers).unwrap()
    }

    pub fn z2() -> PoGroup {
        PoGroup::from_descriptor(&GroupDescriptor::z2()).unwrap()
    }

    pub fn strict_cone2() -> PoGroup {
        PoGroup::from_descriptor(&GroupDescriptor::StrictCone2).unwrap()
    }

    pub fn product(factors: Vec<PoGroup>) -> PoGroup {
        let desc = GroupDescriptor::Product { factors: factors.iter().map(|f| f.desc.clone()).collect() };
        PoGroup::from_descriptor(&desc).unwrap()
    }

    /// `W = ℤ ×→ base^n` with `(m₁,x)(m₂,y) = (m₁+m₂, x_{λ^{-m₂}(i)} y_{ρ^{-m₁}(i)})`.
    pub fn twisted_lex(lambda: Perm, rho: Perm, base: &PoGroup) -> Result<PoGroup> {
        PoGroup::from_descriptor(&GroupDescriptor::twisted_lex(lambda, rho, base.desc.clone()))
    }

    pub fn cone_by_generators(rank: usize, generators: Vec<Vec<i64>>) -> Result<PoGroup> {
        PoGroup::from_descriptor(&GroupDescriptor::ConeByGenerators { rank, generators })
    }

    pub fn from_descriptor(desc: &GroupDescriptor) -> Result<PoGroup> {
        match desc {
            GroupDescriptor::Integers => Ok(PoGroup {
                desc: desc.clone(),
                kind: Kind::Integers,
                width: 1,
                caps: Capabilities { abelian: true, lattice: true, totally_ordered: true },
                warnings: vec![],
            }),
            GroupDescriptor::StrictCone2 => Ok(PoGroup {
                desc: desc.clone(),
                kind: Kind::StrictCone2,
                width: 2,
                caps: Capabilities { abelian: true, lattice: false, totally_ordered: false },
                warnings: vec![],
            }),
            GroupDescriptor::Product { factors } => {
                let parts = factors.iter().map(PoGroup::from_descriptor).collect::<Result<Vec<_>>>()?;
                let mut offsets = Vec::with_capacity(parts.len() + 1);
                let mut w = 0;
                for p in &parts {
                    offsets.push(w);
                    w += p.width;
                }
                offsets.push(w);
                let nontrivial = parts.iter().filter(|p| p.width > 0).count();
                let caps = Capabilities {
                    abelian: parts.iter().all(|p| p.caps.abelian),
                    lattice: parts.iter().all(|p| p.caps.lattice),
                    totally_ordered: nontrivial <= 1 && parts.iter().all(|p| p.width == 0 || p.caps.totally_ordered),
                };
                let warnings = parts.iter().flat_map(|p| p.warnings.clone()).collect();
                Ok(PoGroup { desc: desc.clone(), kind: Kind::Product { parts, offsets }, width: w, caps, warnings })
            }
            GroupDescriptor::TwistedLex { n, lambda, rho, base } => {
                if lambda.len() != *n || rho.len() != *n {
                    return Err(Error::config("params.n", format!("n = {n} but λ, ρ act on {} and {} points", lambda.len(), rho.len())));
                }
                if lambda.compose(rho) != rho.compose(lambda) {
                    return Err(Error::usage(format!("twisted lex product needs λ∘ρ = ρ∘λ; got λ = {lambda}, ρ = {rho}")));
                }
                let base = PoGroup::from_descriptor(base)?;
                let caps = Capabilities {
                    abelian: *n == 0 || (base.caps.abelian && lambda == rho),
                    lattice: base.caps.lattice,
                    totally_ordered: *n == 0 || (*n == 1 && base.caps.totally_ordered),
                };
                let width = 1 + n * base.width;
                let warnings = base.warnings.clone();
                let tw = Twist {
                    n: *n,
                    lambda: lambda.clone(),
                    rho: rho.clone(),
                    lam: lambda.power_table(),
                    rh: rho.power_table(),
                    rho_lam: rho.compose(lambda).power_table(),
                    base,
                };
                Ok(PoGroup { desc: desc.clone(), kind: Kind::TwistedLex(Box::new(tw)), width, caps, warnings })
            }
            GroupDescriptor::ConeByGenerators { rank, generators } => {
                Self::build_cone(desc, *rank, generators)
            }
        }
    }

    fn build_cone(desc: &GroupDescriptor, rank: usize, gens: &[Vec<i64>]) -> Result<PoGroup> {
        for (k, g) in gens.iter().enumerate() {
            if g.len() != rank {
                return Err(Error::config(format!("params.generators[{k}]"), format!("expected {rank} coordinates")));
            }
            if g.iter().all(|&x| x == 0) {
                return Err(Error::config(format!("params.generators[{k}]"), "zero generator"));
            }
        }
        let functional = find_positive_functional(rank, gens);
        let mut warnings = vec![];
        if functional.is_none() {
            if let Some(c) = find_zero_combination(gens, 4) {
                return Err(Error::config(
                    "params.generators",
                    format!("cone is not pointed: coefficients {c:?} sum to zero"),
                ));
            }
            warnings.push(format!(
                "no strictly positive functional found; cone membership is searched with coefficient mass ≤ {CONE_FALLBACK_MASS}"
            ));
        }
        let nonneg = gens.iter().all(|g| g.iter().all(|&x| x >= 0));
        let total = rank == 1 && gens.iter().any(|g| g[0].abs() == 1);
        let cone = Cone { rank, gens: gens.to_vec(), functional, nonneg };
        Ok(PoGroup {
            desc: desc.clone(),
            kind: Kind::Cone(Box::new(cone)),
            width: rank,
            caps: Capabilities { abelian: true, lattice: total, totally_ordered: total },
            warnings,
        })
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.desc
    }

    pub fn name(&self) -> String {
        self.desc.name()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn caps(&self) -> Capabilities {
        self.caps
    }

    pub fn is_lattice(&self) -> bool {
        self.caps.lattice
    }

    pub fn is_abelian(&self) -> bool {
        self.caps.abelian
    }

    /// Validation notes for cones whose order is only decided by bounded search.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// `(n, λ, ρ, base)` for twisted lexicographic groups.
    pub fn twist_params(&self) -> Option<(usize, &Perm, &Perm, &PoGroup)> {
        match &self.kind {
            Kind::TwistedLex(t) => Some((t.n, &t.lambda, &t.rho, &t.base)),
            _ => None,
        }
    }

    pub fn product_parts(&self) -> Option<&[PoGroup]> {
        match &self.kind {
            Kind::Product { parts, .. } => Some(parts),
            _ => None,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.width == 0
    }

    pub fn identity(&self) -> Elem {
        smallvec::smallvec![0; self.width]
    }

    pub fn is_identity(&self, a: &[i64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    // ---- hot-path slice operations ----

    pub fn mul_into(&self, a: &[i64], b: &[i64], out: &mut [i64]) {
        match &self.kind {
            Kind::Integers | Kind::StrictCone2 | Kind::Cone(_) => {
                for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
                    *o = x + y;
                }
            }
            Kind::Product { parts, offsets } => {
                for (k, p) in parts.iter().enumerate() {
                    let r = offsets[k]..offsets[k + 1];
                    p.mul_into(&a[r.clone()], &b[r.clone()], &mut out[r]);
                }
            }
            Kind::TwistedLex(t) => {
                let (m1, m2) = (a[0], b[0]);
                out[0] = m1 + m2;
                let w = t.base.width;
                for i in 0..t.n {
                    let xi = t.lam.apply(i, -m2);
                    let yi = t.rh.apply(i, -m1);
                    t.base.mul_into(
                        &a[1 + xi * w..1 + (xi + 1) * w],
                        &b[1 + yi * w..1 + (yi + 1) * w],
                        &mut out[1 + i * w..1 + (i + 1) * w],
                    );
                }
            }
        }
    }

    pub fn inv_into(&self, a: &[i64], out: &mut [i64]) {
        match &self.kind {
            Kind::Integers | Kind::StrictCone2 | Kind::Cone(_) => {
                for (o, x) in out.iter_mut().zip(a) {
                    *o = -x;
                }
            }
            Kind::Product { parts, offsets } => {
                for (k, p) in parts.iter().enumerate() {
                    let r = offsets[k]..offsets[k + 1];
                    p.inv_into(&a[r.clone()], &mut out[r]);
                }
            }
            Kind::TwistedLex(t) => {
                let m = a[0];
                out[0] = -m;
                let w = t.base.width;
                for i in 0..t.n {
                    let j = t.rho_lam.apply(i, m);
                    t.base.inv_into(&a[1 + j * w..1 + (j + 1) * w], &mut out[1 + i * w..1 + (i + 1) * w]);
                }
            }
        }
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> Elem {
        let mut out = self.identity();
        self.mul_into(a, b, &mut out);
        out
    }

    pub fn inv(&self, a: &[i64]) -> Elem {
        let mut out = self.identity();
        self.inv_into(a, &mut out);
        out
    }

    /// `a⁻¹ b`.
    pub fn ldiv(&self, a: &[i64], b: &[i64]) -> Elem {
        self.mul(&self.inv(a), b)
    }

    /// `a b⁻¹`.
    pub fn rdiv(&self, a: &[i64], b: &[i64]) -> Elem {
        self.mul(a, &self.inv(b))
    }

    /// Membership in the positive cone `G⁺`.
    pub fn is_positive(&self, a: &[i64]) -> bool {
        match &self.kind {
            Kind::Integers => a[0] >= 0,
            Kind::StrictCone2 => (a[0] == 0 && a[1] == 0) || (a[0] >= 1 && a[1] >= 1),
            Kind::Product { parts, offsets } => {
                parts.iter().enumerate().all(|(k, p)| p.is_positive(&a[offsets[k]..offsets[k + 1]]))
            }
            Kind::TwistedLex(t) => {
                let m = a[0];
                m > 0 || (m == 0 && (0..t.n).all(|i| t.base.is_positive(&a[1 + i * t.base.width..1 + (i + 1) * t.base.width])))
            }
            Kind::Cone(c) => c.contains(a),
        }
    }

    pub fn is_negative(&self, a: &[i64]) -> bool {
        self.is_positive(&self.inv(a))
    }

    pub fn leq(&self, a: &[i64], b: &[i64]) -> bool {
        match &self.kind {
            Kind::Integers => a[0] <= b[0],
            Kind::Product { parts, offsets } => {
                parts.iter().enumerate().all(|(k, p)| {
                    let r = offsets[k]..offsets[k + 1];
                    p.leq(&a[r.clone()], &b[r])
                })
            }
            Kind::StrictCone2 | Kind::Cone(_) => {
                let d: Elem = a.iter().zip(b).map(|(x, y)| y - x).collect();
                self.is_positive(&d)
            }
            Kind::TwistedLex(t) => {
                if a[0] != b[0] {
                    return a[0] < b[0];
                }
                let w = t.base.width;
                (0..t.n).all(|i| t.base.leq(&a[1 + i * w..1 + (i + 1) * w], &b[1 + i * w..1 + (i + 1) * w]))
            }
        }
    }

    pub fn lt(&self, a: &[i64], b: &[i64]) -> bool {
        a != b && self.leq(a, b)
    }

    /// Least upper bound; `None` unless the group is a lattice.
    pub fn join(&self, a: &[i64], b: &[i64]) -> Option<Elem> {
        self.lattice_op(a, b, true)
    }

    /// Greatest lower bound; `None` unless the group is a lattice.
    pub fn meet(&self, a: &[i64], b: &[i64]) -> Option<Elem> {
        self.lattice_op(a, b, false)
    }

    fn lattice_op(&self, a: &[i64], b: &[i64], join: bool) -> Option<Elem> {
        if !self.caps.lattice {
            return None;
        }
        let pick = |x: i64, y: i64| if join { x.max(y) } else { x.min(y) };
        match &self.kind {
            Kind::Integers | Kind::Cone(_) => {
                // rank-1 lattice cones are ℤ with the usual order
                Some(a.iter().zip(b).map(|(&x, &y)| pick(x, y)).collect())
            }
            Kind::StrictCone2 => None,
            Kind::Product { parts, offsets } => {
                let mut out = self.identity();
                for (k, p) in parts.iter().enumerate() {
                    let r = offsets[k]..offsets[k + 1];
                    let v = p.lattice_op(&a[r.clone()], &b[r.clone()], join)?;
                    out[r].copy_from_slice(&v);
                }
                Some(out)
            }
            Kind::TwistedLex(t) => {
                if a[0] != b[0] {
                    let a_wins = (a[0] > b[0]) == join;
                    return Some(Elem::from_slice(if a_wins { a } else { b }));
                }
                let mut out = self.identity();
                out[0] = a[0];
                let w = t.base.width;
                for i in 0..t.n {
                    let r = 1 + i * w..1 + (i + 1) * w;
                    let v = t.base.lattice_op(&a[r.clone()], &b[r.clone()], join)?;
                    out[r].copy_from_slice(&v);
                }
                Some(out)
            }
        }
    }

    /// Max absolute coordinate.
    pub fn norm(&self, a: &[i64]) -> i64 {
        a.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// All elements of norm ≤ h in lexicographic order of coordinates.
    pub fn window(&self, h: u32) -> Vec<Elem> {
        let h = h as i64;
        let bx = vec![(-h, h); self.width];
        box_elements(&bx)
    }

    /// A coordinate box containing `[a, b]`, when the interval is known to be bounded.
    pub fn interval_box(&self, a: &[i64], b: &[i64]) -> Option<Vec<(i64, i64)>> {
        match &self.kind {
            Kind::Integers | Kind::StrictCone2 => Some(a.iter().zip(b).map(|(&x, &y)| (x, y)).collect()),
            Kind::Cone(c) if c.nonneg => Some(a.iter().zip(b).map(|(&x, &y)| (x, y)).collect()),
            Kind::Cone(_) => None,
            Kind::Product { parts, offsets } => {
                let mut out = Vec::with_capacity(self.width);
                for (k, p) in parts.iter().enumerate() {
                    let r = offsets[k]..offsets[k + 1];
                    out.extend(p.interval_box(&a[r.clone()], &b[r])?);
                }
                Some(out)
            }
            Kind::TwistedLex(t) => {
                if a[0] < b[0] {
                    return None;
                }
                if a[0] > b[0] {
                    return Some(vec![(1, 0); self.width]);
                }
                let mut out = vec![(a[0], a[0])];
                let w = t.base.width;
                for i in 0..t.n {
                    let r = 1 + i * w..1 + (i + 1) * w;
                    out.extend(t.base.interval_box(&a[r.clone()], &b[r])?);
                }
                Some(out)
            }
        }
    }

    /// Window elements `x` with `a ≤ x ≤ b`, and whether that is the whole interval.
    pub fn enumerate_interval(&self, a: &[i64], b: &[i64], h: u32) -> (Vec<Elem>, bool) {
        let hh = h as i64;
        match self.interval_box(a, b) {
            Some(bx) => {
                let empty = bx.iter().any(|&(lo, hi)| lo > hi);
                if empty {
                    return (vec![], true);
                }
                let inside = bx.iter().all(|&(lo, hi)| lo >= -hh && hi <= hh);
                let clipped: Vec<(i64, i64)> = bx.iter().map(|&(lo, hi)| (lo.max(-hh), hi.min(hh))).collect();
                let xs = box_elements(&clipped)
                    .into_iter()
                    .filter(|x| self.leq(a, x) && self.leq(x, b))
                    .collect();
                (xs, inside)
            }
            None => {
                let xs = self.window(h).into_iter().filter(|x| self.leq(a, x) && self.leq(x, b)).collect();
                (xs, false)
            }
        }
    }

    /// The whole interval `[a, b]` when it is known to be finite.
    pub fn interval_exact(&self, a: &[i64], b: &[i64]) -> Option<Vec<Elem>> {
        let bx = self.interval_box(a, b)?;
        if bx.iter().any(|&(lo, hi)| lo > hi) {
            return Some(vec![]);
        }
        Some(box_elements(&bx).into_iter().filter(|x| self.leq(a, x) && self.leq(x, b)).collect())
    }

    /// Window elements ordered by norm, ties broken by enumeration order.
    pub fn window_by_norm(&self, h: u32) -> Vec<Elem> {
        let mut w = self.window(h);
        w.sort_by_key(|x| self.norm(x));
        w
    }

    // ---- serialization ----

    pub fn to_json(&self, a: &[i64]) -> Value {
        match &self.kind {
            Kind::Integers => Value::from(a[0]),
            Kind::StrictCone2 | Kind::Cone(_) => Value::from(a.to_vec()),
            Kind::Product { parts, offsets } => Value::Array(
                parts.iter().enumerate().map(|(k, p)| p.to_json(&a[offsets[k]..offsets[k + 1]])).collect(),
            ),
            Kind::TwistedLex(t) => {
                let w = t.base.width;
                let xs: Vec<Value> = (0..t.n).map(|i| t.base.to_json(&a[1 + i * w..1 + (i + 1) * w])).collect();
                Value::Array(vec![Value::from(a[0]), Value::Array(xs)])
            }
        }
    }

    pub fn from_json(&self, v: &Value) -> Result<Elem> {
        let mut out = Elem::new();
        self.parse_into(v, &mut out)?;
        Ok(out)
    }

    fn parse_into(&self, v: &Value, out: &mut Elem) -> Result<()> {
        let bad = || Error::usage(format!("{v} is not an element of {}", self.name()));
        match &self.kind {
            Kind::Integers => out.push(v.as_i64().ok_or_else(bad)?),
            Kind::StrictCone2 | Kind::Cone(_) => {
                let arr = v.as_array().ok_or_else(bad)?;
                if arr.len() != self.width {
                    return Err(bad());
                }
                for x in arr {
                    out.push(x.as_i64().ok_or_else(bad)?);
                }
            }
            Kind::Product { parts, .. } => {
                let arr = v.as_array().ok_or_else(bad)?;
                if arr.len() != parts.len() {
                    return Err(bad());
                }
                for (p, x) in parts.iter().zip(arr) {
                    p.parse_into(x, out)?;
                }
            }
            Kind::TwistedLex(t) => {
                let arr = v.as_array().ok_or_else(bad)?;
                if arr.len() != 2 {
                    return Err(bad());
                }
                out.push(arr[0].as_i64().ok_or_else(bad)?);
                let xs = arr[1].as_array().ok_or_else(bad)?;
                if xs.len() != t.n {
                    return Err(bad());
                }
                for x in xs {
                    t.base.parse_into(x, out)?;
                }
            }
        }
        Ok(())
    }

    /// `5`, `(1,0)`, `(1,(0,1))`.
    pub fn show(&self, a: &[i64]) -> String {
        fn render(v: &Value) -> String {
            match v {
                Value::Array(xs) => format!("({})", xs.iter().map(render).collect::<Vec<_>>().join(",")),
                other => other.to_string(),
            }
        }
        render(&self.to_json(a))
    }

    pub fn witness(&self, name: &str, a: &[i64]) -> Witness {
        Witness::new(name, self.to_json(a), self.show(a))
    }

    // ---- checked API ----

    fn check_width(&self, a: &[i64]) -> Result<()> {
        if a.len() != self.width {
            return Err(Error::usage(format!(
                "element of width {} used with {} (width {})",
                a.len(),
                self.name(),
                self.width
            )));
        }
        Ok(())
    }

    pub fn op_mul(&self, g: &[i64], h: &[i64]) -> Result<Elem> {
        self.check_width(g)?;
        self.check_width(h)?;
        Ok(self.mul(g, h))
    }

    pub fn op_inv(&self, g: &[i64]) -> Result<Elem> {
        self.check_width(g)?;
        Ok(self.inv(g))
    }

    pub fn op_leq(&self, g: &[i64], h: &[i64]) -> Result<bool> {
        self.check_width(g)?;
        self.check_width(h)?;
        Ok(self.leq(g, h))
    }

    pub fn op_join(&self, g: &[i64], h: &[i64]) -> Result<Elem> {
        self.check_width(g)?;
        self.check_width(h)?;
        self.join(g, h).ok_or_else(|| Error::capability(format!("{} is not a lattice", self.name())))
    }

    pub fn op_meet(&self, g: &[i64], h: &[i64]) -> Result<Elem> {
        self.check_width(g)?;
        self.check_width(h)?;
        self.meet(g, h).ok_or_else(|| Error::capability(format!("{} is not a lattice", self.name())))
    }

    /// Smallest-norm common upper bound of `g1`, `g2` inside the window.
    pub fn check_directed(&self, g1: &[i64], g2: &[i64], h: u32) -> Verdict {
        let cands = self.window_by_norm(h);
        let mut checked = 0;
        for c in &cands {
            checked += 1;
            if self.leq(g1, c) && self.leq(g2, c) {
                return Verdict::holds(checked).with_witness(vec![self.witness("upper_bound", c)]);
            }
        }
        Verdict::unknown(checked, 1, "no upper bound inside the window")
    }

    /// `a com b`: every `x ≤ a` commutes with every `y ≤ b` (both above the identity).
    pub fn check_com(&self, a: &[i64], b: &[i64], h: u32) -> Result<Verdict> {
        if !self.is_positive(a) || !self.is_positive(b) {
            return Err(Error::usage("check_com needs positive arguments"));
        }
        let e = self.identity();
        let (mut xs, ex_a) = self.enumerate_interval(&e, a, h);
        let (mut ys, ex_b) = self.enumerate_interval(&e, b, h);
        xs.sort_by_key(|x| self.norm(x));
        ys.sort_by_key(|y| self.norm(y));
        let mut checked = 0;
        for x in &xs {
            for y in &ys {
                checked += 1;
                if self.mul(x, y) != self.mul(y, x) {
                    return Ok(Verdict::fails(checked, vec![self.witness("x", x), self.witness("y", y)]));
                }
            }
        }
        if ex_a && ex_b {
            Ok(Verdict::holds(checked))
        } else {
            Ok(Verdict::unknown(checked, 1, "interval below a or b exceeds the window"))
        }
    }
}

impl Cone {
    fn contains(&self, a: &[i64]) -> bool {
        if a.iter().all(|&x| x == 0) {
            return true;
        }
        match &self.functional {
            Some(phi) => {
                let target = dot(phi, a);
                if target <= 0 {
                    return false;
                }
                let weights: Vec<i64> = self.gens.iter().map(|g| dot(phi, g)).collect();
                let mut rest: Vec<i64> = a.to_vec();
                self.span_search(0, &mut rest, &weights, target)
            }
            None => {
                let mut rest: Vec<i64> = a.to_vec();
                let w = vec![1; self.gens.len()];
                self.span_search(0, &mut rest, &w, CONE_FALLBACK_MASS)
            }
        }
    }

    /// Is `rest` a nonnegative integer combination of generators `k..` with weighted mass ≤ budget.
    fn span_search(&self, k: usize, rest: &mut [i64], weights: &[i64], budget: i64) -> bool {
        if rest.iter().all(|&x| x == 0) {
            return true;
        }
        if k == self.gens.len() || budget <= 0 {
            return false;
        }
        let g = &self.gens[k];
        let maxc = budget / weights[k];
        let mut ok = false;
        let mut used = 0;
        for c in 0..=maxc {
            if c > 0 {
                for (r, x) in rest.iter_mut().zip(g) {
                    *r -= x;
                }
                used = c;
            }
            if self.span_search(k + 1, rest, weights, budget - c * weights[k]) {
                ok = true;
                break;
            }
        }
        for (r, x) in rest.iter_mut().zip(g) {
            *r += used * x;
        }
        let _ = self.rank;
        ok
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn find_positive_functional(rank: usize, gens: &[Vec<i64>]) -> Option<Vec<i64>> {
    for bound in 1..=4i64 {
        let bx = vec![(-bound, bound); rank];
        for phi in box_elements(&bx) {
            if gens.iter().all(|g| dot(&phi, g) >= 1) {
                return Some(phi.to_vec());
            }
        }
    }
    None
}

/// A nonzero coefficient vector with small entries whose combination vanishes.
fn find_zero_combination(gens: &[Vec<i64>], max_coef: i64) -> Option<Vec<i64>> {
    let bx = vec![(0, max_coef); gens.len()];
    box_elements(&bx).into_iter().find(|c| {
        c.iter().any(|&x| x > 0)
            && (0..gens[0].len()).all(|j| gens.iter().zip(c.iter()).map(|(g, &k)| g[j] * k).sum::<i64>() == 0)
    }).map(|c| c.to_vec())
}

/// All integer vectors in a box, lexicographically.
pub fn box_elements(bx: &[(i64, i64)]) -> Vec<Elem> {
    if bx.iter().any(|&(lo, hi)| lo > hi) {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur: Elem = bx.iter().map(|&(lo, _)| lo).collect();
    loop {
        out.push(cur.clone());
        let mut k = bx.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < bx[k].1 {
                cur[k] += 1;
                for j in k + 1..bx.len() {
                    cur[j] = bx[j].0;
                }
                break;
            }
        }
    }
}
