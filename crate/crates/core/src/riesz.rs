//! Riesz interpolation and decomposition properties.
//!
//! Checks run on a [`Refinable`] context, either the positive cone of a
//! po-group ([`ConeCtx`]) or a pseudo effect algebra ([`PeaCtx`]). A refinement
//! of `a1 + a2 = b1 + b2` is a table
//!
//! ```text
//!        b1    b2
//!   a1   c11   c12
//!   a2   c21   c22
//! ```
//!
//! with rows summing to `a1`, `a2` and columns to `b1`, `b2`.

use std::fmt::Debug;
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::axioms::{Budget, Pea};
use crate::error::{Error, Result};
use crate::kite::{Kite, KiteElement, Tag};
use crate::pogroup::{Elem, PoGroup};
use crate::verdict::{Status, Tally, Verdict, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RdpLevel {
    Rip,
    Rdp0,
    Rdp,
    Rdp1,
    Rdp2,
}

impl RdpLevel {
    pub const ALL: [RdpLevel; 5] = [RdpLevel::Rip, RdpLevel::Rdp0, RdpLevel::Rdp, RdpLevel::Rdp1, RdpLevel::Rdp2];

    pub fn label(self) -> &'static str {
        match self {
            RdpLevel::Rip => "RIP",
            RdpLevel::Rdp0 => "RDP0",
            RdpLevel::Rdp => "RDP",
            RdpLevel::Rdp1 => "RDP1",
            RdpLevel::Rdp2 => "RDP2",
        }
    }

    pub fn parse(s: &str) -> Option<RdpLevel> {
        Some(match s.to_ascii_lowercase().as_str() {
            "rip" => RdpLevel::Rip,
            "rdp0" => RdpLevel::Rdp0,
            "rdp" => RdpLevel::Rdp,
            "rdp1" => RdpLevel::Rdp1,
            "rdp2" => RdpLevel::Rdp2,
            _ => return None,
        })
    }
}

/// Operations the refinement search needs.
pub trait Refinable: Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    /// Elements above zero with height ≤ `h`, in enumeration order.
    fn window(&self, h: u32) -> Vec<Self::Elem>;
    /// Domain of the interpolation property; po-groups use the whole group.
    fn rip_window(&self, h: u32) -> Vec<Self::Elem> {
        self.window(h)
    }
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Option<Self::Elem>;
    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;
    /// The `c` with `a + c = b`.
    fn rdiff(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Option<Self::Elem>;
    /// `{x : a ≤ x ≤ b}` in enumeration order, and whether the list is complete.
    fn between(&self, a: &Self::Elem, b: &Self::Elem, h: u32) -> (Vec<Self::Elem>, bool);
    /// `a com b`: everything below `a` commutes with everything below `b`.
    fn com(&self, a: &Self::Elem, b: &Self::Elem, h: u32) -> Verdict;
    fn to_json(&self, x: &Self::Elem) -> Value;
    fn show(&self, x: &Self::Elem) -> String;

    fn witness(&self, name: &str, x: &Self::Elem) -> Witness {
        Witness::new(name, self.to_json(x), self.show(x))
    }
}

/// The positive cone `G⁺` of a po-group, with the group product as addition.
#[derive(Clone, Copy, Debug)]
pub struct ConeCtx<'a>(pub &'a PoGroup);

impl Refinable for ConeCtx<'_> {
    type Elem = Elem;

    fn name(&self) -> String {
        self.0.name()
    }

    fn zero(&self) -> Elem {
        self.0.identity()
    }

    fn window(&self, h: u32) -> Vec<Elem> {
        self.0.window(h).into_iter().filter(|x| self.0.is_positive(x)).collect()
    }

    fn rip_window(&self, h: u32) -> Vec<Elem> {
        self.0.window(h)
    }

    fn add(&self, x: &Elem, y: &Elem) -> Option<Elem> {
        Some(self.0.mul(x, y))
    }

    fn leq(&self, x: &Elem, y: &Elem) -> bool {
        self.0.leq(x, y)
    }

    fn rdiff(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        let c = self.0.ldiv(a, b);
        self.0.is_positive(&c).then_some(c)
    }

    fn meet(&self, x: &Elem, y: &Elem) -> Option<Elem> {
        self.0.meet(x, y)
    }

    fn between(&self, a: &Elem, b: &Elem, h: u32) -> (Vec<Elem>, bool) {
        match self.0.interval_exact(a, b) {
            Some(v) => (v, true),
            None => self.0.enumerate_interval(a, b, h),
        }
    }

    fn com(&self, a: &Elem, b: &Elem, h: u32) -> Verdict {
        self.0.check_com(a, b, h).unwrap_or_else(|e| Verdict::unknown(0, 1, e.to_string()))
    }

    fn to_json(&self, x: &Elem) -> Value {
        self.0.to_json(x)
    }

    fn show(&self, x: &Elem) -> String {
        self.0.show(x)
    }
}

/// A pseudo effect algebra as a refinement context.
#[derive(Clone, Copy, Debug)]
pub struct PeaCtx<'a, P>(pub &'a P);

impl<P: Pea> Refinable for PeaCtx<'_, P> {
    type Elem = P::Elem;

    fn name(&self) -> String {
        self.0.name()
    }

    fn zero(&self) -> P::Elem {
        self.0.zero()
    }

    fn window(&self, h: u32) -> Vec<P::Elem> {
        self.0.window(h)
    }

    fn add(&self, x: &P::Elem, y: &P::Elem) -> Option<P::Elem> {
        self.0.add(x, y)
    }

    fn leq(&self, x: &P::Elem, y: &P::Elem) -> bool {
        self.0.leq(x, y)
    }

    fn rdiff(&self, a: &P::Elem, b: &P::Elem) -> Option<P::Elem> {
        self.0.rdiff(a, b)
    }

    fn meet(&self, x: &P::Elem, y: &P::Elem) -> Option<P::Elem> {
        self.0.meet(x, y)
    }

    fn between(&self, a: &P::Elem, b: &P::Elem, h: u32) -> (Vec<P::Elem>, bool) {
        let (below, exhaustive) = self.0.lower_set(b, h);
        (below.into_iter().filter(|x| self.0.leq(a, x)).collect(), exhaustive)
    }

    fn com(&self, a: &P::Elem, b: &P::Elem, h: u32) -> Verdict {
        let z = self.0.zero();
        if *a == z || *b == z {
            return Verdict::holds(1);
        }
        let (xs, ex_a) = self.0.lower_set(a, h);
        let (ys, ex_b) = self.0.lower_set(b, h);
        let mut checked = 0;
        for x in &xs {
            for y in &ys {
                checked += 1;
                if self.0.add(x, y) != self.0.add(y, x) {
                    return Verdict::fails(checked, vec![self.0.witness("x", x), self.0.witness("y", y)]);
                }
            }
        }
        if ex_a && ex_b {
            Verdict::holds(checked)
        } else {
            Verdict::unknown(checked, 1, "elements below a or b exceed the window")
        }
    }

    fn to_json(&self, x: &P::Elem) -> Value {
        self.0.to_json(x)
    }

    fn show(&self, x: &P::Elem) -> String {
        self.0.show(x)
    }
}

/// Outcome of a bounded existential search.
#[derive(Clone, Debug, PartialEq)]
pub struct Found<T> {
    pub value: Option<T>,
    /// True when every candidate was examined.
    pub exhaustive: bool,
}

impl<T> Found<T> {
    fn some(value: T) -> Self {
        Found { value: Some(value), exhaustive: true }
    }

    fn none(exhaustive: bool) -> Self {
        Found { value: None, exhaustive }
    }

    /// Holds when found, Fails when absent after a complete search.
    pub fn status(&self) -> Status {
        match (&self.value, self.exhaustive) {
            (Some(_), _) => Status::Holds,
            (None, true) => Status::Fails,
            (None, false) => Status::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RefinementTable<E> {
    pub c11: E,
    pub c12: E,
    pub c21: E,
    pub c22: E,
    /// Side condition for RDP1 (`c12 com c21`) or RDP2 (`c12 ∧ c21 = 0`).
    pub side: Option<Verdict>,
}

impl<E: Clone + Eq> RefinementTable<E> {
    /// Checks the four sum equations.
    pub fn validates<C: Refinable<Elem = E>>(&self, ctx: &C, a1: &E, a2: &E, b1: &E, b2: &E) -> bool {
        ctx.add(&self.c11, &self.c12).as_ref() == Some(a1)
            && ctx.add(&self.c21, &self.c22).as_ref() == Some(a2)
            && ctx.add(&self.c11, &self.c21).as_ref() == Some(b1)
            && ctx.add(&self.c12, &self.c22).as_ref() == Some(b2)
    }

    /// Side status; tables without a side condition count as Holds.
    pub fn side_status(&self) -> Status {
        self.side.as_ref().map_or(Status::Holds, |v| v.status)
    }

    pub fn to_json<C: Refinable<Elem = E>>(&self, ctx: &C) -> Value {
        let mut v = json!({
            "rows": ["a1", "a2"],
            "cols": ["b1", "b2"],
            "cells": [
                [ctx.to_json(&self.c11), ctx.to_json(&self.c12)],
                [ctx.to_json(&self.c21), ctx.to_json(&self.c22)],
            ],
        });
        if let Some(s) = &self.side {
            v["side"] = s.to_json();
        }
        v
    }

    pub fn show<C: Refinable<Elem = E>>(&self, ctx: &C) -> String {
        format!(
            "[{} {} ; {} {}]",
            ctx.show(&self.c11),
            ctx.show(&self.c12),
            ctx.show(&self.c21),
            ctx.show(&self.c22)
        )
    }
}

/// Common lower bounds of `x` and `y` above zero, largest first.
fn common_lower<C: Refinable>(ctx: &C, x: &C::Elem, y: &C::Elem, h: u32) -> (Vec<C::Elem>, bool) {
    let z = ctx.zero();
    let (mut v, mut ex) = ctx.between(&z, x, h);
    let mut other = y;
    if !ex {
        let (w, ex_y) = ctx.between(&z, y, h);
        if ex_y {
            v = w;
            ex = true;
            other = x;
        }
    }
    let mut out: Vec<C::Elem> = v.into_iter().filter(|c| ctx.leq(c, other)).collect();
    out.reverse();
    if let Some(m) = ctx.meet(x, y) {
        if let Some(p) = out.iter().position(|c| *c == m) {
            out.remove(p);
        }
        out.insert(0, m);
    }
    (out, ex)
}

/// A split `a = b1 + c1` with `b1 ≤ b`, `c1 ≤ c`, for `a ≤ b + c`.
pub fn rdp0_split<C: Refinable>(ctx: &C, a: &C::Elem, b: &C::Elem, c: &C::Elem, h: u32) -> Result<Found<(C::Elem, C::Elem)>> {
    let s = ctx.add(b, c).ok_or_else(|| Error::usage(format!("{} + {} is undefined", ctx.show(b), ctx.show(c))))?;
    if !ctx.leq(a, &s) {
        return Err(Error::usage(format!("{} is not below {}", ctx.show(a), ctx.show(&s))));
    }
    Ok(rdp0_unchecked(ctx, a, b, c, h))
}

fn rdp0_unchecked<C: Refinable>(ctx: &C, a: &C::Elem, b: &C::Elem, c: &C::Elem, h: u32) -> Found<(C::Elem, C::Elem)> {
    let (cands, exhaustive) = common_lower(ctx, a, b, h);
    for b1 in cands {
        if let Some(c1) = ctx.rdiff(&b1, a) {
            if ctx.leq(&c1, c) {
                return Found::some((b1, c1));
            }
        }
    }
    Found::none(exhaustive)
}

/// An interpolant `a1, a2 ≤ c ≤ b1, b2`.
pub fn find_interpolant<C: Refinable>(ctx: &C, a1: &C::Elem, a2: &C::Elem, b1: &C::Elem, b2: &C::Elem, h: u32) -> Found<C::Elem> {
    let ok = |c: &C::Elem| ctx.leq(a1, c) && ctx.leq(a2, c) && ctx.leq(c, b1) && ctx.leq(c, b2);
    if let Some(m) = ctx.meet(b1, b2) {
        if ok(&m) {
            return Found::some(m);
        }
    }
    let (mut cands, mut ex) = ctx.between(a1, b1, h);
    if !ex {
        let (w, ex2) = ctx.between(a2, b2, h);
        if ex2 {
            cands = w;
            ex = true;
        }
    }
    match cands.into_iter().rev().find(|c| ok(c)) {
        Some(c) => Found::some(c),
        None => Found::none(ex),
    }
}

fn side_condition<C: Refinable>(ctx: &C, level: RdpLevel, c12: &C::Elem, c21: &C::Elem, h: u32) -> Option<Verdict> {
    match level {
        RdpLevel::Rdp1 => Some(ctx.com(c12, c21, h)),
        RdpLevel::Rdp2 => Some(meet_is_zero(ctx, c12, c21, h)),
        _ => None,
    }
}

/// `x ∧ y = 0`, through the lattice meet or an exhaustive lower-bound search.
pub fn meet_is_zero<C: Refinable>(ctx: &C, x: &C::Elem, y: &C::Elem, h: u32) -> Verdict {
    let z = ctx.zero();
    if let Some(m) = ctx.meet(x, y) {
        return if m == z { Verdict::holds(1) } else { Verdict::fails(1, vec![ctx.witness("meet", &m)]) };
    }
    let (lows, ex) = common_lower(ctx, x, y, h);
    match lows.iter().find(|c| **c != z) {
        Some(c) => Verdict::fails(lows.len() as u64, vec![ctx.witness("lower_bound", c)]),
        None if ex => Verdict::holds(lows.len() as u64),
        None => Verdict::unknown(lows.len() as u64, 1, "common lower bounds exceed the window"),
    }
}

/// Searches a refinement of `a1 + a2 = b1 + b2` at `level`.
///
/// A table whose side condition is only Unknown is returned when no table with
/// a holding side condition exists; RIP returns the interpolant in `c11` and
/// zeros elsewhere.
pub fn find_refinement<C: Refinable>(
    ctx: &C,
    a1: &C::Elem,
    a2: &C::Elem,
    b1: &C::Elem,
    b2: &C::Elem,
    level: RdpLevel,
    h: u32,
) -> Result<Found<RefinementTable<C::Elem>>> {
    match level {
        RdpLevel::Rip => {
            if !(ctx.leq(a1, b1) && ctx.leq(a1, b2) && ctx.leq(a2, b1) && ctx.leq(a2, b2)) {
                return Err(Error::usage("interpolation needs a1, a2 ≤ b1, b2"));
            }
            let f = find_interpolant(ctx, a1, a2, b1, b2, h);
            let z = ctx.zero();
            Ok(Found {
                value: f.value.map(|c| RefinementTable { c11: c, c12: z.clone(), c21: z.clone(), c22: z, side: None }),
                exhaustive: f.exhaustive,
            })
        }
        RdpLevel::Rdp0 => Err(Error::usage("RDP0 is a split, use rdp0_split")),
        _ => {
            let s = ctx.add(a1, a2);
            if s.is_none() || s != ctx.add(b1, b2) {
                return Err(Error::usage("refinement needs a1 + a2 = b1 + b2, both defined"));
            }
            Ok(refine_unchecked(ctx, a1, a2, b1, b2, level, h))
        }
    }
}

fn refine_unchecked<C: Refinable>(
    ctx: &C,
    a1: &C::Elem,
    a2: &C::Elem,
    b1: &C::Elem,
    b2: &C::Elem,
    level: RdpLevel,
    h: u32,
) -> Found<RefinementTable<C::Elem>> {
    let (cands, exhaustive) = common_lower(ctx, a1, b1, h);
    let mut fallback = None;
    let mut side_unknown = false;
    for c11 in cands {
        let Some(c12) = ctx.rdiff(&c11, a1) else { continue };
        let Some(c21) = ctx.rdiff(&c11, b1) else { continue };
        let Some(c22) = ctx.rdiff(&c21, a2) else { continue };
        if ctx.add(&c12, &c22).as_ref() != Some(b2) {
            continue;
        }
        let side = side_condition(ctx, level, &c12, &c21, h);
        let t = RefinementTable { c11, c12, c21, c22, side };
        match t.side_status() {
            Status::Holds => return Found::some(t),
            Status::Unknown => {
                side_unknown = true;
                fallback.get_or_insert(t);
            }
            Status::Fails => {}
        }
    }
    match fallback {
        Some(t) => Found { value: Some(t), exhaustive },
        None => Found::none(exhaustive && !side_unknown),
    }
}

fn instance_status<T>(f: &Found<RefinementTable<T>>) -> Status
where
    T: Clone + Eq,
{
    match &f.value {
        Some(t) => t.side_status(),
        None => f.status(),
    }
}

/// Quantifies a level over every window instance.
///
/// Instances are enumerated with the first element as the outer loop; each
/// outer element gets an equal share of the budget.
pub fn check_rdp_level<C: Refinable>(ctx: &C, level: RdpLevel, h: u32, budget: Budget) -> Verdict {
    let win = if level == RdpLevel::Rip { ctx.rip_window(h) } else { ctx.window(h) };
    if win.is_empty() {
        return Verdict::holds(0);
    }
    let share = (budget.max_instances / win.len() as u64).max(1);
    let tallies: Vec<Tally> = win
        .par_iter()
        .map(|x| {
            let mut t = Tally::default();
            let mut used = 0u64;
            let mut visit = |t: &mut Tally, status: Status, w: &dyn Fn() -> Vec<Witness>, reason: &str| -> bool {
                used += 1;
                match status {
                    Status::Holds => t.pass(),
                    Status::Unknown => {
                        t.pass();
                        t.skip(reason);
                    }
                    Status::Fails => return t.fail(w()),
                }
                if used >= share {
                    t.skip("instance budget reached");
                    return true;
                }
                false
            };
            match level {
                RdpLevel::Rip => 'a: for a2 in &win {
                    for b1 in &win {
                        if !(ctx.leq(x, b1) && ctx.leq(a2, b1)) {
                            continue;
                        }
                        for b2 in &win {
                            if !(ctx.leq(x, b2) && ctx.leq(a2, b2)) {
                                continue;
                            }
                            let f = find_interpolant(ctx, x, a2, b1, b2, h);
                            let w = || quad(ctx, x, a2, b1, b2);
                            if visit(&mut t, f.status(), &w, "interpolant search left the window") {
                                break 'a;
                            }
                        }
                    }
                },
                RdpLevel::Rdp0 => 'b: for b in &win {
                    for c in &win {
                        let Some(s) = ctx.add(b, c) else { continue };
                        if !ctx.leq(x, &s) {
                            continue;
                        }
                        let f = rdp0_unchecked(ctx, x, b, c, h);
                        let w = || vec![ctx.witness("a", x), ctx.witness("b", b), ctx.witness("c", c)];
                        if visit(&mut t, f.status(), &w, "split search left the window") {
                            break 'b;
                        }
                    }
                },
                _ => 'c: for a2 in &win {
                    let Some(s) = ctx.add(x, a2) else { continue };
                    for b1 in &win {
                        if !ctx.leq(b1, &s) {
                            continue;
                        }
                        let Some(b2) = ctx.rdiff(b1, &s) else { continue };
                        let f = refine_unchecked(ctx, x, a2, b1, &b2, level, h);
                        let w = || quad(ctx, x, a2, b1, &b2);
                        if visit(&mut t, instance_status(&f), &w, "refinement search left the window") {
                            break 'c;
                        }
                    }
                },
            }
            t
        })
        .collect();
    let mut total = Tally::default();
    for t in tallies {
        total.checked += t.checked;
        total.skipped += t.skipped;
        if total.failure.is_none() {
            total.failure = t.failure;
        }
        if total.skip_reason.is_none() {
            total.skip_reason = t.skip_reason;
        }
    }
    total.finish()
}

fn quad<C: Refinable>(ctx: &C, a1: &C::Elem, a2: &C::Elem, b1: &C::Elem, b2: &C::Elem) -> Vec<Witness> {
    vec![ctx.witness("a1", a1), ctx.witness("a2", a2), ctx.witness("b1", b1), ctx.witness("b2", b2)]
}

/// Smallest-norm upper bound of two positive elements; `ab` bounds the search.
fn upper_bound(g: &PoGroup, a: &[i64], b: &[i64]) -> Elem {
    let ab = g.mul(a, b);
    let hh = g.norm(&ab).max(g.norm(a)).max(g.norm(b)) as u32;
    g.window_by_norm(hh).into_iter().find(|c| g.leq(a, c) && g.leq(b, c)).unwrap_or(ab)
}

fn build(kite: &Kite, tag: Tag, coord: impl Fn(usize) -> Elem) -> KiteElement {
    KiteElement { tag, coords: (0..kite.n()).flat_map(coord).collect() }
}

type Cells = [Elem; 4];

fn base_table(g: &PoGroup, x1: &[i64], x2: &[i64], y1: &[i64], y2: &[i64], h: u32) -> Result<Option<Cells>> {
    let ctx = ConeCtx(g);
    let f = find_refinement(&ctx, &x1.into(), &x2.into(), &y1.into(), &y2.into(), RdpLevel::Rdp, h)?;
    Ok(f.value.map(|t| [t.c11, t.c12, t.c21, t.c22]))
}

/// A kite refinement assembled from base refinements, case by case.
///
/// Returns `None` when a base refinement is not found inside the window.
pub fn kite_refinement_constructive(
    kite: &Kite,
    x1: &KiteElement,
    x2: &KiteElement,
    y1: &KiteElement,
    y2: &KiteElement,
    h: u32,
) -> Result<Option<RefinementTable<KiteElement>>> {
    let s = kite.kite_add(x1, x2);
    if s.is_none() || s != kite.kite_add(y1, y2) {
        return Err(Error::usage("refinement needs x1 + x2 = y1 + y2, both defined"));
    }
    let g = kite.base();
    let n = kite.n();
    let (lam, rho) = (kite.lambda(), kite.rho());
    let (lam_inv, rho_inv) = (lam.inverse(), rho.inverse());
    let c = |x: &KiteElement, j: usize| -> Elem { kite.coord(x, j).into() };
    let mut tables: Vec<Cells> = Vec::with_capacity(n);
    let cells = match (x1.tag, x2.tag, y1.tag, y2.tag) {
        (Tag::Lower, Tag::Lower, Tag::Lower, Tag::Lower) => {
            for j in 0..n {
                match base_table(g, &c(x1, j), &c(x2, j), &c(y1, j), &c(y2, j), h)? {
                    Some(t) => tables.push(t),
                    None => return Ok(None),
                }
            }
            let t = &tables;
            [
                build(kite, Tag::Lower, |j| t[j][0].clone()),
                build(kite, Tag::Lower, |j| t[j][1].clone()),
                build(kite, Tag::Lower, |j| t[j][2].clone()),
                build(kite, Tag::Lower, |j| t[j][3].clone()),
            ]
        }
        (Tag::Upper, Tag::Lower, Tag::Upper, Tag::Lower) => {
            let mut ds = Vec::with_capacity(n);
            for i in 0..n {
                let (ai, bi) = (g.inv(&c(x1, i)), g.inv(&c(y1, i)));
                let d = upper_bound(g, &ai, &bi);
                let j = rho_inv.apply(i);
                match base_table(g, &g.mul(&d, &c(x1, i)), &c(x2, j), &g.mul(&d, &c(y1, i)), &c(y2, j), h)? {
                    Some(t) => tables.push(t),
                    None => return Ok(None),
                }
                ds.push(d);
            }
            let t = &tables;
            [
                build(kite, Tag::Upper, |i| g.mul(&g.inv(&ds[i]), &t[i][0])),
                build(kite, Tag::Lower, |j| t[rho.apply(j)][1].clone()),
                build(kite, Tag::Lower, |j| t[rho.apply(j)][2].clone()),
                build(kite, Tag::Lower, |j| t[rho.apply(j)][3].clone()),
            ]
        }
        (Tag::Lower, Tag::Upper, Tag::Lower, Tag::Upper) => {
            let mut ds = Vec::with_capacity(n);
            for i in 0..n {
                let (ai, bi) = (g.inv(&c(x2, i)), g.inv(&c(y2, i)));
                let d = upper_bound(g, &ai, &bi);
                let j = lam_inv.apply(i);
                match base_table(g, &c(x1, j), &g.mul(&c(x2, i), &d), &c(y1, j), &g.mul(&c(y2, i), &d), h)? {
                    Some(t) => tables.push(t),
                    None => return Ok(None),
                }
                ds.push(d);
            }
            let t = &tables;
            [
                build(kite, Tag::Lower, |j| t[lam.apply(j)][0].clone()),
                build(kite, Tag::Lower, |j| t[lam.apply(j)][1].clone()),
                build(kite, Tag::Lower, |j| t[lam.apply(j)][2].clone()),
                build(kite, Tag::Upper, |i| g.mul(&t[i][3], &g.inv(&ds[i]))),
            ]
        }
        (Tag::Upper, Tag::Lower, Tag::Lower, Tag::Upper) => [
            y1.clone(),
            build(kite, Tag::Upper, |i| g.mul(&g.inv(&c(y1, lam_inv.apply(i))), &c(x1, i))),
            kite.zero(),
            x2.clone(),
        ],
        (Tag::Lower, Tag::Upper, Tag::Upper, Tag::Lower) => [
            x1.clone(),
            kite.zero(),
            build(kite, Tag::Upper, |i| g.mul(&g.inv(&c(x1, lam_inv.apply(i))), &c(y1, i))),
            y2.clone(),
        ],
        _ => return Err(Error::usage("no kite sum has two upper summands")),
    };
    let [c11, c12, c21, c22] = cells;
    let ctx = PeaCtx(kite);
    let side = Some(ctx.com(&c12, &c21, h));
    let t = RefinementTable { c11, c12, c21, c22, side };
    if t.validates(&ctx, x1, x2, y1, y2) && [&t.c11, &t.c12, &t.c21, &t.c22].iter().all(|x| kite.is_member(x)) {
        Ok(Some(t))
    } else {
        Err(Error::usage("constructed table does not validate"))
    }
}

/// A kite split `x = y1 + z1`, `y1 ≤ y`, `z1 ≤ z`, built from base splits.
pub fn kite_rdp0_split_constructive(
    kite: &Kite,
    x: &KiteElement,
    y: &KiteElement,
    z: &KiteElement,
    h: u32,
) -> Result<Option<(KiteElement, KiteElement)>> {
    let s = kite.kite_add(y, z).ok_or_else(|| Error::usage("y + z is undefined"))?;
    if !kite.kite_leq(x, &s) {
        return Err(Error::usage("x is not below y + z"));
    }
    let g = kite.base();
    let gc = ConeCtx(g);
    let n = kite.n();
    let (lam, rho) = (kite.lambda(), kite.rho());
    let (lam_inv, rho_inv) = (lam.inverse(), rho.inverse());
    let c = |v: &KiteElement, j: usize| -> Elem { kite.coord(v, j).into() };
    let zero = kite.zero();
    let mut splits: Vec<(Elem, Elem)> = Vec::with_capacity(n);
    let mut base_split = |a: Elem, b: Elem, cc: Elem| -> Result<bool> {
        match rdp0_split(&gc, &a, &b, &cc, h)?.value {
            Some(p) => {
                splits.push(p);
                Ok(true)
            }
            None => Ok(false),
        }
    };
    let out = if *x == zero {
        (zero.clone(), zero)
    } else {
        match (x.tag, y.tag, z.tag) {
            (Tag::Lower, Tag::Lower, Tag::Lower) => {
                for j in 0..n {
                    if !base_split(c(x, j), c(y, j), c(z, j))? {
                        return Ok(None);
                    }
                }
                (
                    build(kite, Tag::Lower, |j| splits[j].0.clone()),
                    build(kite, Tag::Lower, |j| splits[j].1.clone()),
                )
            }
            (Tag::Lower, Tag::Upper, _) => (x.clone(), zero),
            (Tag::Lower, Tag::Lower, Tag::Upper) => (zero, x.clone()),
            (Tag::Upper, Tag::Upper, Tag::Lower) => {
                for i in 0..n {
                    let (ai, bi) = (g.inv(&c(x, i)), g.inv(&c(y, i)));
                    if !base_split(bi, c(z, rho_inv.apply(i)), ai)? {
                        return Ok(None);
                    }
                }
                (
                    build(kite, Tag::Upper, |i| g.mul(&c(x, i), &g.inv(&splits[i].0))),
                    build(kite, Tag::Lower, |j| splits[rho.apply(j)].0.clone()),
                )
            }
            (Tag::Upper, Tag::Lower, Tag::Upper) => {
                for i in 0..n {
                    let (ai, bi) = (g.inv(&c(x, i)), g.inv(&c(z, i)));
                    if !base_split(bi, ai, c(y, lam_inv.apply(i)))? {
                        return Ok(None);
                    }
                }
                (
                    build(kite, Tag::Lower, |j| splits[lam.apply(j)].1.clone()),
                    build(kite, Tag::Upper, |i| g.mul(&g.inv(&splits[i].1), &c(x, i))),
                )
            }
            _ => return Err(Error::usage("x is not below y + z")),
        }
    };
    let (y1, z1) = out;
    let ok = kite.is_member(&y1)
        && kite.is_member(&z1)
        && kite.kite_leq(&y1, y)
        && kite.kite_leq(&z1, z)
        && kite.kite_add(&y1, &z1).as_ref() == Some(x);
    if ok {
        Ok(Some((y1, z1)))
    } else {
        Err(Error::usage("constructed split does not validate"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;
    use smallvec::smallvec;

    fn e(v: &[i64]) -> Elem {
        Elem::from_slice(v)
    }

    fn swap() -> Perm {
        Perm::new(vec![1, 0]).unwrap()
    }

    #[test]
    fn integer_split_and_table() {
        let z = PoGroup::integers();
        let ctx = ConeCtx(&z);
        let f = rdp0_split(&ctx, &e(&[3]), &e(&[2]), &e(&[2]), 2).unwrap();
        assert_eq!(f.value, Some((e(&[2]), e(&[1]))));
        let f = rdp0_split(&ctx, &e(&[0]), &e(&[2]), &e(&[2]), 2).unwrap();
        assert_eq!(f.value, Some((e(&[0]), e(&[0]))));
        let t = find_refinement(&ctx, &e(&[2]), &e(&[1]), &e(&[1]), &e(&[2]), RdpLevel::Rdp, 2).unwrap();
        let t = t.value.unwrap();
        assert_eq!([t.c11, t.c12, t.c21, t.c22], [e(&[1]), e(&[1]), e(&[0]), e(&[1])]);
        let t = find_refinement(&ctx, &e(&[2]), &e(&[0]), &e(&[2]), &e(&[0]), RdpLevel::Rdp2, 2).unwrap();
        let t = t.value.unwrap();
        assert_eq!([t.c11, t.c12, t.c21, t.c22], [e(&[2]), e(&[0]), e(&[0]), e(&[0])]);
        assert!(rdp0_split(&ctx, &e(&[5]), &e(&[2]), &e(&[2]), 2).is_err());
    }

    #[test]
    fn strict_cone_splits_and_interpolants() {
        let g = PoGroup::strict_cone2();
        let ctx = ConeCtx(&g);
        let f = rdp0_split(&ctx, &e(&[1, 1]), &e(&[1, 1]), &e(&[1, 1]), 2).unwrap();
        assert_eq!(f.value, Some((e(&[1, 1]), e(&[0, 0]))));
        let f = rdp0_split(&ctx, &e(&[1, 1]), &e(&[2, 1]), &e(&[1, 2]), 2).unwrap();
        assert_eq!(f, Found::none(true));
        let f = find_refinement(&ctx, &e(&[0, 0]), &e(&[1, -1]), &e(&[2, 1]), &e(&[2, 2]), RdpLevel::Rip, 2).unwrap();
        assert_eq!(f.value, None);
        assert!(f.exhaustive);
    }

    #[test]
    fn group_levels() {
        let z = PoGroup::integers();
        for level in RdpLevel::ALL {
            assert!(check_rdp_level(&ConeCtx(&z), level, 2, Budget::default()).is_holds(), "{level:?}");
        }
        let g = PoGroup::strict_cone2();
        let v = check_rdp_level(&ConeCtx(&g), RdpLevel::Rdp0, 2, Budget::default());
        assert!(v.is_fails());
        assert_eq!(v.witness.len(), 3);
        assert!(check_rdp_level(&ConeCtx(&g), RdpLevel::Rip, 2, Budget::default()).is_fails());
    }

    #[test]
    fn kite_levels_over_integers() {
        let k = Kite::over(&PoGroup::integers(), Perm::identity(2), swap()).unwrap();
        for level in RdpLevel::ALL {
            let v = check_rdp_level(&PeaCtx(&k), level, 2, Budget::default());
            assert!(v.is_holds(), "{level:?}: {}", v.summary());
        }
    }

    #[test]
    fn kite_over_strict_cone_fails_rdp0() {
        let k = Kite::over(&PoGroup::strict_cone2(), Perm::identity(1), Perm::identity(1)).unwrap();
        let v = check_rdp_level(&PeaCtx(&k), RdpLevel::Rdp0, 2, Budget::default());
        assert!(v.is_fails(), "{}", v.summary());
        let x = k.from_json(&v.witness[0].value).unwrap();
        let y = k.from_json(&v.witness[1].value).unwrap();
        let z = k.from_json(&v.witness[2].value).unwrap();
        assert_eq!(rdp0_split(&PeaCtx(&k), &x, &y, &z, 2).unwrap(), Found::none(true));
    }

    #[test]
    fn constructive_cases() {
        let k = Kite::over(&PoGroup::integers(), Perm::identity(1), Perm::identity(1)).unwrap();
        let (u, l) = (|v: i64| k.upper_ints(&[v]), |v: i64| k.lower_ints(&[v]));
        // U(-2) + L(1) = L(1) + U(-2)
        let t = kite_refinement_constructive(&k, &u(-2), &l(1), &l(1), &u(-2), 2).unwrap().unwrap();
        assert_eq!([&t.c11, &t.c12, &t.c21, &t.c22], [&l(1), &u(-3), &l(0), &l(1)]);
        let t = kite_refinement_constructive(&k, &l(1), &l(2), &l(2), &l(1), 2).unwrap().unwrap();
        assert!(t.validates(&PeaCtx(&k), &l(1), &l(2), &l(2), &l(1)));
        let t = kite_refinement_constructive(&k, &u(-1), &l(0), &u(-1), &l(0), 2).unwrap().unwrap();
        assert_eq!(t.c12, l(0));
        assert!(kite_refinement_constructive(&k, &u(-1), &l(0), &u(-2), &l(0), 2).is_err());
    }

    #[test]
    fn constructive_matches_search() {
        for (lam, rho) in [(Perm::identity(2), swap()), (swap(), Perm::identity(2)), (swap(), swap())] {
            let k = Kite::over(&PoGroup::integers(), lam, rho).unwrap();
            let ctx = PeaCtx(&k);
            let w = k.kite_window(2);
            let mut count = 0;
            for a1 in &w {
                for a2 in &w {
                    let Some(s) = k.kite_add(a1, a2) else { continue };
                    for b1 in &w {
                        let Some(b2) = k.kite_rdiff(b1, &s) else { continue };
                        let t = kite_refinement_constructive(&k, a1, a2, b1, &b2, 2).unwrap();
                        let f = find_refinement(&ctx, a1, a2, b1, &b2, RdpLevel::Rdp, 2).unwrap();
                        assert_eq!(t.is_some(), f.value.is_some());
                        assert_ne!(t.unwrap().side_status(), Status::Fails);
                        count += 1;
                    }
                }
            }
            assert!(count > 100);
        }
    }

    #[test]
    fn constructive_splits() {
        let k = Kite::over(&PoGroup::integers(), Perm::identity(2), swap()).unwrap();
        let w = k.kite_window(2);
        let mut count = 0;
        for x in &w {
            for y in &w {
                for z in &w {
                    let Some(s) = k.kite_add(y, z) else { continue };
                    if !k.kite_leq(x, &s) {
                        continue;
                    }
                    let p = kite_rdp0_split_constructive(&k, x, y, z, 2).unwrap();
                    assert!(p.is_some());
                    count += 1;
                }
            }
        }
        assert!(count > 100);
        let x = k.lower_ints(&[1, 0]);
        let y = k.upper_ints(&[-1, -1]);
        let z = k.lower_ints(&[1, 1]);
        assert_eq!(kite_rdp0_split_constructive(&k, &x, &y, &z, 2).unwrap(), Some((x.clone(), k.zero())));
    }

    #[test]
    fn table_json_layout() {
        let z = PoGroup::integers();
        let ctx = ConeCtx(&z);
        let t = RefinementTable { c11: smallvec![1], c12: smallvec![1], c21: smallvec![0], c22: smallvec![1], side: None };
        let v = t.to_json(&ctx);
        assert_eq!(v["rows"], json!(["a1", "a2"]));
        assert_eq!(v["cells"], json!([[1, 1], [0, 1]]));
    }
}
