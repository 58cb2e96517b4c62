//! Kites: the pseudo effect algebra on `(G⁺)^n ⊎ (G⁻)^n` twisted by `λ`, `ρ`.
//!
//! Lower elements `L(f)` carry positive coordinates `f_j`; upper elements
//! `U(A)` carry negative coordinates `A_i = a_i⁻¹`. `L(e)` is 0 and `U(e)` is 1.
//!
//! ```text
//! U(A) + L(f) = U(A_i f_{ρ⁻¹(i)})     defined iff every coordinate is ≤ e
//! L(f) + U(A) = U(f_{λ⁻¹(i)} A_i)     defined iff every coordinate is ≤ e
//! L(f) + L(g) = L(f_j g_j)
//! U    + U    undefined
//! ```

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::axioms::{Pea, PseudoMv};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::pogroup::{Elem, GroupDescriptor, PoGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    #[serde(rename = "L")]
    Lower,
    #[serde(rename = "U")]
    Upper,
}

/// Tagged coordinate tuple; `coords` holds `n` base elements back to back.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KiteElement {
    pub tag: Tag,
    pub coords: Elem,
}

impl KiteElement {
    pub fn lower(coords: impl Into<Elem>) -> Self {
        KiteElement { tag: Tag::Lower, coords: coords.into() }
    }

    pub fn upper(coords: impl Into<Elem>) -> Self {
        KiteElement { tag: Tag::Upper, coords: coords.into() }
    }

    pub fn is_lower(&self) -> bool {
        self.tag == Tag::Lower
    }

    pub fn is_upper(&self) -> bool {
        self.tag == Tag::Upper
    }
}

fn default_base() -> GroupDescriptor {
    GroupDescriptor::Integers
}

/// Index data of a kite plus the base group descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KiteShape {
    pub n: usize,
    pub lambda: Perm,
    pub rho: Perm,
    #[serde(default = "default_base")]
    pub base: GroupDescriptor,
}

impl KiteShape {
    pub fn new(lambda: Perm, rho: Perm, base: GroupDescriptor) -> Result<Self> {
        let s = KiteShape { n: lambda.len(), lambda, rho, base };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda.len() != self.n {
            return Err(Error::config("shape.lambda", format!("expected a permutation of 0..{}", self.n)));
        }
        if self.rho.len() != self.n {
            return Err(Error::config("shape.rho", format!("expected a permutation of 0..{}", self.n)));
        }
        Ok(())
    }

    /// `σ = ρ∘λ⁻¹`.
    pub fn sigma(&self) -> Perm {
        self.rho.compose(&self.lambda.inverse())
    }

    /// `τ = λ⁻¹∘ρ`, the shift seen by lower supports under double negation.
    pub fn tau(&self) -> Perm {
        self.lambda.inverse().compose(&self.rho)
    }

    pub fn is_symmetric(&self) -> bool {
        self.lambda == self.rho
    }

    pub fn label(&self) -> String {
        format!("K{}^{{{},{}}}({})", self.n, self.lambda, self.rho, self.base.name())
    }
}

/// A kite over a concrete base group.
#[derive(Clone, Debug)]
pub struct Kite {
    base: PoGroup,
    shape: KiteShape,
    lam_inv: Perm,
    rho_inv: Perm,
    w: usize,
}

impl Kite {
    pub fn new(shape: KiteShape) -> Result<Kite> {
        shape.validate()?;
        let base = PoGroup::from_descriptor(&shape.base)?;
        Ok(Kite { w: base.width(), lam_inv: shape.lambda.inverse(), rho_inv: shape.rho.inverse(), base, shape })
    }

    pub fn over(base: &PoGroup, lambda: Perm, rho: Perm) -> Result<Kite> {
        if lambda.len() != rho.len() {
            return Err(Error::usage("λ and ρ must act on the same index set"));
        }
        Kite::new(KiteShape::new(lambda, rho, base.descriptor().clone())?)
    }

    pub fn base(&self) -> &PoGroup {
        &self.base
    }

    pub fn shape(&self) -> &KiteShape {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.n
    }

    pub fn lambda(&self) -> &Perm {
        &self.shape.lambda
    }

    pub fn rho(&self) -> &Perm {
        &self.shape.rho
    }

    /// Width of one base coordinate.
    pub fn base_width(&self) -> usize {
        self.w
    }

    #[inline]
    pub fn coord<'a>(&self, x: &'a KiteElement, j: usize) -> &'a [i64] {
        &x.coords[j * self.w..(j + 1) * self.w]
    }

    fn e_tuple(&self) -> Elem {
        smallvec::smallvec![0; self.shape.n * self.w]
    }

    pub fn zero(&self) -> KiteElement {
        KiteElement::lower(self.e_tuple())
    }

    pub fn one(&self) -> KiteElement {
        KiteElement::upper(self.e_tuple())
    }

    /// Builds `L(f)` from per-coordinate base elements, checking positivity.
    pub fn make_lower(&self, coords: &[&[i64]]) -> Result<KiteElement> {
        self.make(Tag::Lower, coords)
    }

    /// Builds `U(A)` from per-coordinate base elements, checking negativity.
    pub fn make_upper(&self, coords: &[&[i64]]) -> Result<KiteElement> {
        self.make(Tag::Upper, coords)
    }

    fn make(&self, tag: Tag, coords: &[&[i64]]) -> Result<KiteElement> {
        if coords.len() != self.shape.n || coords.iter().any(|c| c.len() != self.w) {
            return Err(Error::usage(format!("kite element needs {} coordinates of width {}", self.shape.n, self.w)));
        }
        let x = KiteElement { tag, coords: coords.iter().flat_map(|c| c.iter().copied()).collect() };
        if !self.is_member(&x) {
            return Err(Error::usage(format!("{} is not in the kite carrier", self.show(&x))));
        }
        Ok(x)
    }

    /// Scalar shorthand for bases of width 1: `L(1,2)`.
    pub fn lower_ints(&self, v: &[i64]) -> KiteElement {
        assert_eq!(self.w, 1, "lower_ints needs a width-1 base");
        let x = KiteElement::lower(Elem::from_slice(v));
        assert!(self.is_member(&x), "{v:?} is not a positive tuple");
        x
    }

    /// Scalar shorthand for bases of width 1: `U(-1,0)`.
    pub fn upper_ints(&self, v: &[i64]) -> KiteElement {
        assert_eq!(self.w, 1, "upper_ints needs a width-1 base");
        let x = KiteElement::upper(Elem::from_slice(v));
        assert!(self.is_member(&x), "{v:?} is not a negative tuple");
        x
    }

    pub fn is_member(&self, x: &KiteElement) -> bool {
        if x.coords.len() != self.shape.n * self.w {
            return false;
        }
        (0..self.shape.n).all(|j| match x.tag {
            Tag::Lower => self.base.is_positive(self.coord(x, j)),
            Tag::Upper => self.base.is_negative(self.coord(x, j)),
        })
    }

    pub fn kite_leq(&self, x: &KiteElement, y: &KiteElement) -> bool {
        match (x.tag, y.tag) {
            (Tag::Lower, Tag::Upper) => true,
            (Tag::Upper, Tag::Lower) => false,
            _ => (0..self.shape.n).all(|j| self.base.leq(self.coord(x, j), self.coord(y, j))),
        }
    }

    pub fn kite_add(&self, x: &KiteElement, y: &KiteElement) -> Option<KiteElement> {
        let w = self.w;
        let mut out = self.e_tuple();
        match (x.tag, y.tag) {
            (Tag::Upper, Tag::Upper) => None,
            (Tag::Lower, Tag::Lower) => {
                for j in 0..self.shape.n {
                    self.base.mul_into(self.coord(x, j), self.coord(y, j), &mut out[j * w..(j + 1) * w]);
                }
                Some(KiteElement::lower(out))
            }
            (Tag::Upper, Tag::Lower) => {
                for i in 0..self.shape.n {
                    let k = self.rho_inv.apply(i);
                    let o = &mut out[i * w..(i + 1) * w];
                    self.base.mul_into(self.coord(x, i), self.coord(y, k), o);
                    if !self.base.is_negative(o) {
                        return None;
                    }
                }
                Some(KiteElement::upper(out))
            }
            (Tag::Lower, Tag::Upper) => {
                for i in 0..self.shape.n {
                    let k = self.lam_inv.apply(i);
                    let o = &mut out[i * w..(i + 1) * w];
                    self.base.mul_into(self.coord(x, k), self.coord(y, i), o);
                    if !self.base.is_negative(o) {
                        return None;
                    }
                }
                Some(KiteElement::upper(out))
            }
        }
    }

    /// `x⁻`, the unique element with `x⁻ + x = 1`.
    pub fn neg_minus(&self, x: &KiteElement) -> KiteElement {
        match x.tag {
            // U(A)⁻ = L(a_{λ(j)})
            Tag::Upper => self.permuted_inverse(x, Tag::Lower, &self.shape.lambda),
            // L(f)⁻ = U(f⁻¹_{ρ⁻¹(i)})
            Tag::Lower => self.permuted_inverse(x, Tag::Upper, &self.rho_inv),
        }
    }

    /// `x∼`, the unique element with `x + x∼ = 1`.
    pub fn neg_tilde(&self, x: &KiteElement) -> KiteElement {
        match x.tag {
            // U(A)∼ = L(a_{ρ(j)})
            Tag::Upper => self.permuted_inverse(x, Tag::Lower, &self.shape.rho),
            // L(f)∼ = U(f⁻¹_{λ⁻¹(i)})
            Tag::Lower => self.permuted_inverse(x, Tag::Upper, &self.lam_inv),
        }
    }

    /// `(x∼, x⁻)`.
    pub fn kite_negations(&self, x: &KiteElement) -> (KiteElement, KiteElement) {
        (self.neg_tilde(x), self.neg_minus(x))
    }

    /// Coordinate `j` of the result is the inverse of coordinate `p(j)` of `x`.
    fn permuted_inverse(&self, x: &KiteElement, tag: Tag, p: &Perm) -> KiteElement {
        let w = self.w;
        let mut out = self.e_tuple();
        for j in 0..self.shape.n {
            self.base.inv_into(self.coord(x, p.apply(j)), &mut out[j * w..(j + 1) * w]);
        }
        KiteElement { tag, coords: out }
    }

    /// `b∖a`: the `c` with `c + a = b`.
    pub fn kite_ldiff(&self, b: &KiteElement, a: &KiteElement) -> Option<KiteElement> {
        let n = self.shape.n;
        let w = self.w;
        let g = &self.base;
        let mut out = self.e_tuple();
        let tag = match (a.tag, b.tag) {
            (Tag::Upper, Tag::Lower) => return None,
            (Tag::Lower, Tag::Lower) => {
                for j in 0..n {
                    out[j * w..(j + 1) * w].copy_from_slice(&g.rdiv(self.coord(b, j), self.coord(a, j)));
                }
                Tag::Lower
            }
            (Tag::Lower, Tag::Upper) => {
                // C_i = B_i f⁻¹_{ρ⁻¹(i)}
                for i in 0..n {
                    let k = self.rho_inv.apply(i);
                    out[i * w..(i + 1) * w].copy_from_slice(&g.rdiv(self.coord(b, i), self.coord(a, k)));
                }
                Tag::Upper
            }
            (Tag::Upper, Tag::Upper) => {
                // g_j = B_{λ(j)} A⁻¹_{λ(j)}
                for j in 0..n {
                    let k = self.shape.lambda.apply(j);
                    out[j * w..(j + 1) * w].copy_from_slice(&g.rdiv(self.coord(b, k), self.coord(a, k)));
                }
                Tag::Lower
            }
        };
        let c = KiteElement { tag, coords: out };
        (self.is_member(&c) && self.kite_add(&c, a).as_ref() == Some(b)).then_some(c)
    }

    /// `a/b`: the `c` with `a + c = b`.
    pub fn kite_rdiff(&self, a: &KiteElement, b: &KiteElement) -> Option<KiteElement> {
        let n = self.shape.n;
        let w = self.w;
        let g = &self.base;
        let mut out = self.e_tuple();
        let tag = match (a.tag, b.tag) {
            (Tag::Upper, Tag::Lower) => return None,
            (Tag::Lower, Tag::Lower) => {
                for j in 0..n {
                    out[j * w..(j + 1) * w].copy_from_slice(&g.ldiv(self.coord(a, j), self.coord(b, j)));
                }
                Tag::Lower
            }
            (Tag::Lower, Tag::Upper) => {
                // C_i = f⁻¹_{λ⁻¹(i)} B_i
                for i in 0..n {
                    let k = self.lam_inv.apply(i);
                    out[i * w..(i + 1) * w].copy_from_slice(&g.ldiv(self.coord(a, k), self.coord(b, i)));
                }
                Tag::Upper
            }
            (Tag::Upper, Tag::Upper) => {
                // g_j = A⁻¹_{ρ(j)} B_{ρ(j)}
                for j in 0..n {
                    let k = self.shape.rho.apply(j);
                    out[j * w..(j + 1) * w].copy_from_slice(&g.ldiv(self.coord(a, k), self.coord(b, k)));
                }
                Tag::Lower
            }
        };
        let c = KiteElement { tag, coords: out };
        (self.is_member(&c) && self.kite_add(a, &c).as_ref() == Some(b)).then_some(c)
    }

    /// Number of coordinates different from the identity.
    pub fn kite_dimension(&self, x: &KiteElement) -> usize {
        (0..self.shape.n).filter(|&j| !self.base.is_identity(self.coord(x, j))).count()
    }

    /// Indices of non-identity coordinates.
    pub fn support(&self, x: &KiteElement) -> Vec<usize> {
        (0..self.shape.n).filter(|&j| !self.base.is_identity(self.coord(x, j))).collect()
    }

    pub fn mv_available(&self) -> bool {
        self.base.is_lattice()
    }

    fn lattice_coords(&self, x: &KiteElement, y: &KiteElement, join: bool) -> Option<Elem> {
        let w = self.w;
        let mut out = self.e_tuple();
        for j in 0..self.shape.n {
            let (a, b) = (self.coord(x, j), self.coord(y, j));
            let v = if join { self.base.join(a, b)? } else { self.base.meet(a, b)? };
            out[j * w..(j + 1) * w].copy_from_slice(&v);
        }
        Some(out)
    }

    /// Greatest lower bound; needs a lattice base.
    pub fn kite_meet(&self, x: &KiteElement, y: &KiteElement) -> Option<KiteElement> {
        match (x.tag, y.tag) {
            (Tag::Lower, Tag::Upper) => Some(x.clone()),
            (Tag::Upper, Tag::Lower) => Some(y.clone()),
            _ => Some(KiteElement { tag: x.tag, coords: self.lattice_coords(x, y, false)? }),
        }
    }

    /// Least upper bound; needs a lattice base.
    pub fn kite_join(&self, x: &KiteElement, y: &KiteElement) -> Option<KiteElement> {
        match (x.tag, y.tag) {
            (Tag::Lower, Tag::Upper) => Some(y.clone()),
            (Tag::Upper, Tag::Lower) => Some(x.clone()),
            _ => Some(KiteElement { tag: x.tag, coords: self.lattice_coords(x, y, true)? }),
        }
    }

    fn require_mv(&self) -> Result<()> {
        if self.mv_available() {
            Ok(())
        } else {
            Err(Error::capability(format!("MV operations need a lattice-ordered base; {} is not", self.base.name())))
        }
    }

    /// Truncated product: `x ⊙ y`.
    pub fn kite_mv_odot(&self, x: &KiteElement, y: &KiteElement) -> Result<KiteElement> {
        self.require_mv()?;
        Ok(self.odot_unchecked(x, y))
    }

    /// Truncated sum: `x ⊕ y = (y∼ ⊙ x∼)⁻`.
    pub fn kite_mv_oplus(&self, x: &KiteElement, y: &KiteElement) -> Result<KiteElement> {
        self.require_mv()?;
        Ok(self.oplus_unchecked(x, y))
    }

    fn odot_unchecked(&self, x: &KiteElement, y: &KiteElement) -> KiteElement {
        let n = self.shape.n;
        let w = self.w;
        let g = &self.base;
        let e: Elem = g.identity();
        let mut out = self.e_tuple();
        match (x.tag, y.tag) {
            (Tag::Lower, Tag::Lower) => self.zero(),
            (Tag::Upper, Tag::Upper) => {
                for i in 0..n {
                    g.mul_into(self.coord(x, i), self.coord(y, i), &mut out[i * w..(i + 1) * w]);
                }
                KiteElement::upper(out)
            }
            (Tag::Upper, Tag::Lower) => {
                // L(A_{λ(j)} f_j ∨ e)
                for j in 0..n {
                    let p = g.mul(self.coord(x, self.shape.lambda.apply(j)), self.coord(y, j));
                    out[j * w..(j + 1) * w].copy_from_slice(&g.join(&p, &e).expect("lattice base"));
                }
                KiteElement::lower(out)
            }
            (Tag::Lower, Tag::Upper) => {
                // L(f_j A_{ρ(j)} ∨ e)
                for j in 0..n {
                    let p = g.mul(self.coord(x, j), self.coord(y, self.shape.rho.apply(j)));
                    out[j * w..(j + 1) * w].copy_from_slice(&g.join(&p, &e).expect("lattice base"));
                }
                KiteElement::lower(out)
            }
        }
    }

    fn oplus_unchecked(&self, x: &KiteElement, y: &KiteElement) -> KiteElement {
        let n = self.shape.n;
        let w = self.w;
        let g = &self.base;
        let e: Elem = g.identity();
        let mut out = self.e_tuple();
        match (x.tag, y.tag) {
            (Tag::Upper, Tag::Upper) => self.one(),
            (Tag::Lower, Tag::Lower) => {
                for j in 0..n {
                    g.mul_into(self.coord(x, j), self.coord(y, j), &mut out[j * w..(j + 1) * w]);
                }
                KiteElement::lower(out)
            }
            (Tag::Upper, Tag::Lower) => {
                for i in 0..n {
                    let p = g.mul(self.coord(x, i), self.coord(y, self.rho_inv.apply(i)));
                    out[i * w..(i + 1) * w].copy_from_slice(&g.meet(&p, &e).expect("lattice base"));
                }
                KiteElement::upper(out)
            }
            (Tag::Lower, Tag::Upper) => {
                for i in 0..n {
                    let p = g.mul(self.coord(x, self.lam_inv.apply(i)), self.coord(y, i));
                    out[i * w..(i + 1) * w].copy_from_slice(&g.meet(&p, &e).expect("lattice base"));
                }
                KiteElement::upper(out)
            }
        }
    }

    /// `x + y` read off the MV structure: defined iff `y ⊙ x = 0`, then `x ⊕ y`.
    pub fn mv_induced_add(&self, x: &KiteElement, y: &KiteElement) -> Result<Option<KiteElement>> {
        self.require_mv()?;
        Ok((self.odot_unchecked(y, x) == self.zero()).then(|| self.oplus_unchecked(x, y)))
    }

    /// Sum of coordinate norms.
    pub fn norm(&self, x: &KiteElement) -> i64 {
        (0..self.shape.n).map(|j| self.base.norm(self.coord(x, j))).sum()
    }

    /// Elements whose coordinate norms sum to at most `h`: all lowers, then all uppers.
    pub fn kite_window(&self, h: u32) -> Vec<KiteElement> {
        let win = self.base.window(h);
        let pos: Vec<(Elem, i64)> =
            win.iter().filter(|x| self.base.is_positive(x)).map(|x| (x.clone(), self.base.norm(x))).collect();
        let neg: Vec<(Elem, i64)> =
            win.iter().filter(|x| self.base.is_negative(x)).map(|x| (x.clone(), self.base.norm(x))).collect();
        let mut out = Vec::new();
        for (tag, pool) in [(Tag::Lower, &pos), (Tag::Upper, &neg)] {
            let mut cur = Elem::new();
            self.tuples(pool, h as i64, 0, &mut cur, &mut |c| out.push(KiteElement { tag, coords: c.clone() }));
        }
        out
    }

    fn tuples(&self, pool: &[(Elem, i64)], budget: i64, j: usize, cur: &mut Elem, emit: &mut dyn FnMut(&Elem)) {
        if j == self.shape.n {
            emit(cur);
            return;
        }
        for (x, nx) in pool {
            if *nx <= budget {
                let len = cur.len();
                cur.extend_from_slice(x);
                self.tuples(pool, budget - nx, j + 1, cur, emit);
                cur.truncate(len);
            }
        }
    }

    /// Everything below `x`: exact for lowers over boundedly ordered bases.
    pub fn lower_set(&self, x: &KiteElement, h: u32) -> (Vec<KiteElement>, bool) {
        if x.is_lower() {
            let e = self.base.identity();
            let mut pools = Vec::with_capacity(self.shape.n);
            for j in 0..self.shape.n {
                match self.base.interval_exact(&e, self.coord(x, j)) {
                    Some(v) => pools.push(v),
                    None => {
                        let xs = self.kite_window(h).into_iter().filter(|y| self.kite_leq(y, x)).collect();
                        return (xs, false);
                    }
                }
            }
            let mut out = Vec::new();
            let mut cur = Elem::new();
            product_rec(&pools, 0, &mut cur, &mut |c| out.push(KiteElement::lower(c.clone())));
            (out, true)
        } else {
            let xs = self.kite_window(h).into_iter().filter(|y| self.kite_leq(y, x)).collect();
            (xs, false)
        }
    }

    pub fn to_json(&self, x: &KiteElement) -> Value {
        let cs: Vec<Value> = (0..self.shape.n).map(|j| self.base.to_json(self.coord(x, j))).collect();
        json!({"tag": x.tag, "coords": cs})
    }

    pub fn from_json(&self, v: &Value) -> Result<KiteElement> {
        let tag: Tag = serde_json::from_value(v["tag"].clone()).map_err(|e| Error::usage(format!("bad tag: {e}")))?;
        let cs = v["coords"].as_array().ok_or_else(|| Error::usage("coords must be an array"))?;
        if cs.len() != self.shape.n {
            return Err(Error::usage(format!("expected {} coordinates", self.shape.n)));
        }
        let mut coords = Elem::new();
        for c in cs {
            coords.extend_from_slice(&self.base.from_json(c)?);
        }
        let x = KiteElement { tag, coords };
        if !self.is_member(&x) {
            return Err(Error::usage(format!("{v} is not in the kite carrier")));
        }
        Ok(x)
    }

    /// `L(1,2)`, `U(-1,0)`, `L((1,0),(0,2))`.
    pub fn show(&self, x: &KiteElement) -> String {
        let t = if x.is_lower() { "L" } else { "U" };
        let cs: Vec<String> = (0..self.shape.n).map(|j| self.base.show(self.coord(x, j))).collect();
        format!("{t}({})", cs.join(","))
    }
}

fn product_rec(pools: &[Vec<Elem>], j: usize, cur: &mut Elem, emit: &mut dyn FnMut(&Elem)) {
    if j == pools.len() {
        emit(cur);
        return;
    }
    for x in &pools[j] {
        let len = cur.len();
        cur.extend_from_slice(x);
        product_rec(pools, j + 1, cur, emit);
        cur.truncate(len);
    }
}

impl Pea for Kite {
    type Elem = KiteElement;

    fn name(&self) -> String {
        self.shape.label()
    }

    fn zero(&self) -> KiteElement {
        Kite::zero(self)
    }

    fn one(&self) -> KiteElement {
        Kite::one(self)
    }

    fn window(&self, h: u32) -> Vec<KiteElement> {
        self.kite_window(h)
    }

    fn contains(&self, x: &KiteElement) -> bool {
        self.is_member(x)
    }

    fn add(&self, x: &KiteElement, y: &KiteElement) -> Option<KiteElement> {
        self.kite_add(x, y)
    }

    fn leq(&self, x: &KiteElement, y: &KiteElement) -> bool {
        self.kite_leq(x, y)
    }

    fn minus(&self, x: &KiteElement) -> KiteElement {
        self.neg_minus(x)
    }

    fn tilde(&self, x: &KiteElement) -> KiteElement {
        self.neg_tilde(x)
    }

    fn ldiff(&self, b: &KiteElement, a: &KiteElement) -> Option<KiteElement> {
        self.kite_ldiff(b, a)
    }

    fn rdiff(&self, a: &KiteElement, b: &KiteElement) -> Option<KiteElement> {
        self.kite_rdiff(a, b)
    }

    fn meet(&self, x: &KiteElement, y: &KiteElement) -> Option<KiteElement> {
        self.kite_meet(x, y)
    }

    fn lower_set(&self, x: &KiteElement, h: u32) -> (Vec<KiteElement>, bool) {
        Kite::lower_set(self, x, h)
    }

    fn class(&self, x: &KiteElement) -> u8 {
        x.tag as u8
    }

    fn to_json(&self, x: &KiteElement) -> Value {
        Kite::to_json(self, x)
    }

    fn show(&self, x: &KiteElement) -> String {
        Kite::show(self, x)
    }
}

/// The pseudo MV-algebra of a kite over a lattice-ordered base.
#[derive(Clone, Debug)]
pub struct KiteMv<'a>(&'a Kite);

impl<'a> KiteMv<'a> {
    pub fn new(kite: &'a Kite) -> Result<Self> {
        kite.require_mv()?;
        Ok(KiteMv(kite))
    }

    pub fn kite(&self) -> &Kite {
        self.0
    }
}

impl PseudoMv for KiteMv<'_> {
    type Elem = KiteElement;

    fn name(&self) -> String {
        self.0.shape.label()
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

    fn oplus(&self, x: &KiteElement, y: &KiteElement) -> KiteElement {
        self.0.oplus_unchecked(x, y)
    }

    fn odot(&self, x: &KiteElement, y: &KiteElement) -> KiteElement {
        self.0.odot_unchecked(x, y)
    }

    fn minus(&self, x: &KiteElement) -> KiteElement {
        self.0.neg_minus(x)
    }

    fn tilde(&self, x: &KiteElement) -> KiteElement {
        self.0.neg_tilde(x)
    }

    fn to_json(&self, x: &KiteElement) -> Value {
        self.0.to_json(x)
    }

    fn show(&self, x: &KiteElement) -> String {
        self.0.show(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap() -> Perm {
        Perm::new(vec![1, 0]).unwrap()
    }

    fn kz(lambda: Perm, rho: Perm) -> Kite {
        Kite::over(&PoGroup::integers(), lambda, rho).unwrap()
    }

    #[test]
    fn order_examples() {
        let k = kz(Perm::identity(2), Perm::identity(2));
        assert!(k.kite_leq(&k.zero(), &k.one()));
        assert!(k.kite_leq(&k.lower_ints(&[1, 2]), &k.lower_ints(&[1, 3])));
        assert!(!k.kite_leq(&k.lower_ints(&[1, 2]), &k.lower_ints(&[0, 5])));
        assert!(!k.kite_leq(&k.upper_ints(&[-1, 0]), &k.lower_ints(&[5, 5])));
        assert_ne!(k.zero(), k.one());
    }

    #[test]
    fn addition_examples() {
        let k = kz(Perm::identity(2), swap());
        assert_eq!(k.kite_add(&k.lower_ints(&[1, 2]), &k.lower_ints(&[3, 4])), Some(k.lower_ints(&[4, 6])));
        assert_eq!(k.kite_add(&k.upper_ints(&[-3, -1]), &k.lower_ints(&[1, 2])), Some(k.upper_ints(&[-1, 0])));
        assert_eq!(k.kite_add(&k.one(), &k.lower_ints(&[1, 0])), None);
        assert_eq!(k.kite_add(&k.one(), &k.one()), None);
    }

    #[test]
    fn negation_examples() {
        let k = kz(Perm::identity(2), swap());
        let x = k.upper_ints(&[-2, -3]);
        assert_eq!(k.neg_minus(&x), k.lower_ints(&[2, 3]));
        assert_eq!(k.neg_tilde(&x), k.lower_ints(&[3, 2]));
        assert_eq!(k.kite_negations(&k.zero()), (k.one(), k.one()));
        assert_eq!(k.kite_negations(&k.one()), (k.zero(), k.zero()));
    }

    #[test]
    fn negations_are_complements() {
        for (l, r) in [(Perm::identity(3), Perm::new(vec![1, 2, 0]).unwrap()), (Perm::new(vec![2, 0, 1]).unwrap(), Perm::new(vec![1, 0, 2]).unwrap())] {
            let k = kz(l, r);
            for x in k.kite_window(2) {
                let m = k.neg_minus(&x);
                let t = k.neg_tilde(&x);
                assert_eq!(k.kite_add(&m, &x), Some(k.one()), "{}", k.show(&x));
                assert_eq!(k.kite_add(&x, &t), Some(k.one()), "{}", k.show(&x));
                assert_eq!(k.neg_tilde(&m), x);
                assert_eq!(k.neg_minus(&t), x);
            }
        }
    }

    #[test]
    fn difference_examples() {
        let k1 = kz(Perm::identity(1), Perm::identity(1));
        assert_eq!(k1.kite_ldiff(&k1.lower_ints(&[5]), &k1.lower_ints(&[2])), Some(k1.lower_ints(&[3])));
        let k = kz(Perm::identity(2), swap());
        assert_eq!(k.kite_rdiff(&k.upper_ints(&[-3, -1]), &k.upper_ints(&[-1, 0])), Some(k.lower_ints(&[1, 2])));
        for x in k.kite_window(2) {
            assert_eq!(k.kite_ldiff(&x, &x), Some(k.zero()));
            assert_eq!(k.kite_rdiff(&x, &x), Some(k.zero()));
        }
        assert_eq!(k.kite_ldiff(&k.lower_ints(&[1, 0]), &k.lower_ints(&[0, 1])), None);
    }

    #[test]
    fn differences_agree_with_search() {
        let k = kz(Perm::new(vec![1, 2, 0]).unwrap(), Perm::new(vec![0, 2, 1]).unwrap());
        let win = k.kite_window(2);
        for a in &win {
            for b in &win {
                let l = win.iter().find(|c| k.kite_add(c, a).as_ref() == Some(b));
                let r = win.iter().find(|c| k.kite_add(a, c).as_ref() == Some(b));
                if let Some(c) = l {
                    assert_eq!(k.kite_ldiff(b, a).as_ref(), Some(c));
                }
                if let Some(c) = r {
                    assert_eq!(k.kite_rdiff(a, b).as_ref(), Some(c));
                }
                if let Some(c) = k.kite_ldiff(b, a) {
                    assert_eq!(k.kite_add(&c, a).as_ref(), Some(b));
                }
            }
        }
    }

    #[test]
    fn mv_examples() {
        let k = kz(Perm::identity(1), Perm::identity(1));
        assert_eq!(k.kite_mv_oplus(&k.lower_ints(&[2]), &k.lower_ints(&[3])).unwrap(), k.lower_ints(&[5]));
        let k2 = kz(Perm::identity(2), swap());
        for x in k2.kite_window(2) {
            assert_eq!(k2.kite_mv_oplus(&x, &k2.zero()).unwrap(), x);
            for y in k2.kite_window(2) {
                if x.is_lower() && y.is_lower() {
                    assert_eq!(k2.kite_mv_odot(&x, &y).unwrap(), k2.zero());
                }
            }
        }
        let sc = Kite::over(&PoGroup::strict_cone2(), Perm::identity(1), Perm::identity(1)).unwrap();
        assert!(matches!(sc.kite_mv_oplus(&sc.zero(), &sc.zero()), Err(Error::Capability(_))));
    }

    #[test]
    fn oplus_matches_negation_formula() {
        let k = kz(Perm::new(vec![1, 2, 0]).unwrap(), Perm::new(vec![2, 0, 1]).unwrap());
        let win = k.kite_window(2);
        for x in &win {
            for y in &win {
                let direct = k.oplus_unchecked(x, y);
                let via = k.neg_minus(&k.odot_unchecked(&k.neg_tilde(y), &k.neg_tilde(x)));
                assert_eq!(direct, via);
                assert_eq!(k.mv_induced_add(x, y).unwrap(), k.kite_add(x, y), "{} + {}", k.show(x), k.show(y));
            }
        }
    }

    #[test]
    fn dimension_examples() {
        let k = kz(Perm::identity(3), Perm::identity(3));
        assert_eq!(k.kite_dimension(&k.lower_ints(&[0, 0, 0])), 0);
        assert_eq!(k.kite_dimension(&k.lower_ints(&[0, 3, 0])), 1);
        assert_eq!(k.kite_dimension(&k.upper_ints(&[-1, -1, 0])), 2);
    }

    #[test]
    fn lowers_are_joins_of_one_dimensional_lowers() {
        let k = kz(Perm::identity(3), Perm::new(vec![1, 2, 0]).unwrap());
        for x in k.kite_window(2).into_iter().filter(|x| x.is_lower()) {
            let mut acc = k.zero();
            for j in k.support(&x) {
                let mut c = k.zero();
                c.coords[j] = x.coords[j];
                acc = k.kite_join(&acc, &c).unwrap();
            }
            assert_eq!(acc, x);
        }
    }

    #[test]
    fn n_zero_is_boolean() {
        let k = kz(Perm::identity(0), Perm::identity(0));
        let w = k.kite_window(2);
        assert_eq!(w, vec![k.zero(), k.one()]);
        assert_eq!(k.kite_add(&k.zero(), &k.zero()), Some(k.zero()));
        assert_eq!(k.kite_add(&k.zero(), &k.one()), Some(k.one()));
        assert_eq!(k.kite_add(&k.one(), &k.zero()), Some(k.one()));
        assert_eq!(k.kite_add(&k.one(), &k.one()), None);
    }

    #[test]
    fn window_sizes() {
        let k = kz(Perm::identity(3), Perm::identity(3));
        assert_eq!(k.kite_window(2).len(), 20);
        let k2 = Kite::over(&PoGroup::z2(), Perm::identity(2), Perm::identity(2)).unwrap();
        assert_eq!(k2.kite_window(2).len(), 52);
    }

    #[test]
    fn json_roundtrip() {
        let k = Kite::over(&PoGroup::z2(), Perm::identity(2), swap()).unwrap();
        for x in k.kite_window(2) {
            let v = k.to_json(&x);
            assert_eq!(k.from_json(&v).unwrap(), x);
        }
        let v = serde_json::json!({"tag": "L", "coords": [[-1, 0], [0, 0]]});
        assert!(k.from_json(&v).is_err());
    }

    #[test]
    fn shape_json() {
        let s: KiteShape = serde_json::from_str(r#"{"n":2,"lambda":[0,1],"rho":[1,0]}"#).unwrap();
        assert_eq!(s.base, GroupDescriptor::Integers);
        assert!(serde_json::from_str::<KiteShape>(r#"{"n":2,"lambda":[0,0],"rho":[1,0]}"#).is_err());
        let bad = KiteShape { n: 3, lambda: Perm::identity(2), rho: Perm::identity(2), base: GroupDescriptor::Integers };
        assert!(Kite::new(bad).is_err());
    }
}
