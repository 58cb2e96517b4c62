//! One PASS/FAIL line per acceptance criterion.
//!
//! Run with `cargo test -p kitepea --test acceptance -- --nocapture`.

use std::collections::BTreeSet;
use std::path::PathBuf;

use kitepea::axioms::{check_commutative, check_pea_axioms, check_pmv_axioms, check_symmetric, perfect_split, unique_state};
use kitepea::cli::{self, CheckKind, Pairs, RunConfig, SweepConfig};
use kitepea::ideals::{
    canonical_form, check_double_negation_shift, double_negation_shift, is_normal, least_normal_ideal, normal_ideal_generated,
    ClosedFlags, IdealSet, Relabeling,
};
use kitepea::repr::{
    build_registry, load_registry, perfect_representation, registry_fixtures, scrimger_fixture, twisted_lex_group, verify_iso,
    verify_iso_with, IntervalPea, MapSpec,
};
use kitepea::riesz::{check_rdp_level, find_refinement, kite_refinement_constructive, Found, PeaCtx, RdpLevel};
use kitepea::{Budget, GroupDescriptor, Kite, KiteElement, KiteMv, KiteShape, Perm, PoGroup};
use serde_json::Value;

const H: u32 = 2;
/// Instance caps for the axiom sweep; the small-n cap covers every class-0 triple.
const AXIOM_BUDGET_SMALL_N: u64 = 20_000_000;
const AXIOM_BUDGET: u64 = 400_000;
/// Instance cap for the pseudo MV sweep.
const PMV_BUDGET: u64 = 2_000_000;
/// Instance cap per Riesz level.
const RIESZ_BUDGET: u64 = 2_000_000;
/// Minimum number of constructive refinement instances compared with search.
const MIN_TABLES: usize = 100;
const NMAX: u32 = 8;

struct Outcome {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
}

impl Outcome {
    fn new(id: u32, title: &'static str) -> Self {
        Outcome { id, title, failures: vec![] }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn report(&self) -> bool {
        if self.failures.is_empty() {
            println!("PASS criterion {:>2}: {}", self.id, self.title);
            true
        } else {
            println!("FAIL criterion {:>2}: {} ({} problems; first: {})", self.id, self.title, self.failures.len(), self.failures[0]);
            false
        }
    }
}

fn swap() -> Perm {
    Perm::new(vec![1, 0]).unwrap()
}

fn z() -> PoGroup {
    PoGroup::integers()
}

fn tl2() -> PoGroup {
    PoGroup::twisted_lex(Perm::identity(2), swap(), &z()).unwrap()
}

fn kites_over(g: &PoGroup, nmax: usize) -> Vec<Kite> {
    let mut out = Vec::new();
    for n in 0..=nmax {
        for l in Perm::all(n) {
            for r in Perm::all(n) {
                out.push(Kite::over(g, l.clone(), r).unwrap());
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new(1, "axiom soundness over Z, Z^2, StrictCone2, TwistedLex(2,id,swap,Z), n <= 3");
    for g in [z(), PoGroup::z2(), PoGroup::strict_cone2(), tl2()] {
        for k in kites_over(&g, 3) {
            let budget = if k.n() <= 2 { AXIOM_BUDGET_SMALL_N } else { AXIOM_BUDGET };
            let r = check_pea_axioms(&k, H, Budget::new(budget));
            for (key, v) in &r.verdicts {
                o.expect(!v.is_fails(), || format!("{} {key}: {}", k.shape().label(), v.summary()));
            }
            if k.n() <= 2 {
                o.expect(r.class0_skipped == 0, || format!("{}: {} class-0 triples skipped", k.shape().label(), r.class0_skipped));
            }
        }
    }
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new(2, "pseudo MV axioms and induced addition over Z, Z^2");
    for g in [z(), PoGroup::z2()] {
        for k in kites_over(&g, 3) {
            let mv = KiteMv::new(&k).unwrap();
            let r = check_pmv_axioms(&mv, H, Budget::new(PMV_BUDGET));
            for (key, v) in &r.verdicts {
                o.expect(v.is_holds(), || format!("{} {key}: {}", k.shape().label(), v.summary()));
            }
            let w = k.kite_window(H);
            for x in &w {
                for y in &w {
                    let induced = k.mv_induced_add(x, y).unwrap();
                    o.expect(induced == k.kite_add(x, y), || format!("{}: {} + {}", k.shape().label(), k.show(x), k.show(y)));
                }
            }
        }
    }
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new(3, "symmetric exactly when lambda = rho, Z, n <= 3");
    for k in kites_over(&z(), 3) {
        let v = check_symmetric(&k, H);
        let want = k.lambda() == k.rho();
        o.expect(v.is_holds() == want && (want || v.is_fails()), || format!("{}: {}", k.shape().label(), v.summary()));
    }
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new(4, "commutative exactly on abelian and lambda = rho cells, n >= 1");
    for g in [z(), tl2()] {
        for k in kites_over(&g, 2) {
            let v = check_commutative(&k, H);
            // n = 0 is the two-element Boolean algebra whatever the base.
            let want = k.n() == 0 || (g.is_abelian() && k.lambda() == k.rho());
            o.expect(v.is_holds() == want && (want || v.is_fails()), || format!("{} over {}: {}", k.shape().label(), g.name(), v.summary()));
        }
    }
    o
}

fn refinement_instances(k: &Kite) -> Vec<[KiteElement; 4]> {
    let w = k.kite_window(H);
    let mut out = Vec::new();
    for x1 in &w {
        for x2 in &w {
            let Some(s) = k.kite_add(x1, x2) else { continue };
            for y1 in &w {
                if !k.kite_leq(y1, &s) {
                    continue;
                }
                if let Some(y2) = k.kite_rdiff(y1, &s) {
                    if w.contains(&y2) {
                        out.push([x1.clone(), x2.clone(), y1.clone(), y2]);
                    }
                }
            }
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new(5, "Riesz levels, StrictCone2 RDP0 witness, constructive tables");
    for k in kites_over(&z(), 3) {
        for level in [RdpLevel::Rdp0, RdpLevel::Rdp, RdpLevel::Rdp1, RdpLevel::Rdp2] {
            let v = check_rdp_level(&PeaCtx(&k), level, H, Budget::new(RIESZ_BUDGET));
            o.expect(v.is_holds(), || format!("{} {}: {}", k.shape().label(), level.label(), v.summary()));
        }
    }
    let sc = Kite::over(&PoGroup::strict_cone2(), Perm::identity(1), Perm::identity(1)).unwrap();
    let v = check_rdp_level(&PeaCtx(&sc), RdpLevel::Rdp0, 3, Budget::new(RIESZ_BUDGET));
    o.expect(v.is_fails(), || format!("StrictCone2 RDP0: {}", v.summary()));
    if v.is_fails() {
        let get = |name: &str| -> KiteElement {
            let w = v.witness.iter().find(|w| w.name == name).expect("witness field");
            sc.from_json(&w.value).expect("replayable witness")
        };
        let (a, b, c) = (get("a"), get("b"), get("c"));
        let split_exists = sc.kite_window(6).iter().any(|b1| {
            sc.kite_window(6).iter().any(|c1| sc.kite_add(b1, c1).as_ref() == Some(&a) && sc.kite_leq(b1, &b) && sc.kite_leq(c1, &c))
        });
        o.expect(sc.kite_leq(&a, &sc.kite_add(&b, &c).unwrap_or_else(|| sc.one())), || "witness violates a <= b + c".into());
        o.expect(!split_exists, || "replayed witness has a split".into());
    }
    let mut compared = 0usize;
    for k in kites_over(&z(), 2).into_iter().filter(|k| k.n() >= 1) {
        for [x1, x2, y1, y2] in refinement_instances(&k) {
            let c = kite_refinement_constructive(&k, &x1, &x2, &y1, &y2, H + 2).unwrap();
            let f: Found<_> = find_refinement(&PeaCtx(&k), &x1, &x2, &y1, &y2, RdpLevel::Rdp, H + 2).unwrap();
            if let Some(t) = &c {
                o.expect(t.validates(&PeaCtx(&k), &x1, &x2, &y1, &y2), || format!("{}: table fails sums", k.shape().label()));
            }
            if f.exhaustive || f.value.is_some() {
                o.expect(c.is_some() == f.value.is_some(), || {
                    format!("{}: constructive {} vs search {}", k.shape().label(), c.is_some(), f.value.is_some())
                });
            }
            compared += 1;
        }
    }
    o.expect(compared >= MIN_TABLES, || format!("only {compared} constructive instances"));
    o
}

fn lower_kernel(k: &Kite, h: u32) -> IdealSet<KiteElement> {
    let elements: BTreeSet<KiteElement> = k.kite_window(h).into_iter().filter(|x| x.is_lower()).collect();
    IdealSet { elements, generators: vec![], flags: ClosedFlags { downward: true, sums: true, exhaustive: false } }
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new(6, "perfect split, additive state, normal kernel, no split for Gamma(Z,2)");
    let hs = H + 1;
    let mut fixtures = kites_over(&z(), 2);
    for g in [PoGroup::z2(), PoGroup::strict_cone2(), tl2()] {
        fixtures.push(Kite::over(&g, Perm::identity(1), Perm::identity(1)).unwrap());
    }
    for k in &fixtures {
        let label = format!("{} over {}", k.shape().label(), k.base().name());
        let Some(split) = perfect_split(k, hs, NMAX) else {
            o.expect(false, || format!("{label}: no perfect split"));
            continue;
        };
        o.expect(split.verdict.is_holds(), || format!("{label}: {}", split.verdict.summary()));
        o.expect(split.e0.iter().all(|x| x.is_lower()) && split.e1.iter().all(|x| x.is_upper()), || format!("{label}: split is not (Lower, Upper)"));
        o.expect(split.e0.len() + split.e1.len() == k.kite_window(hs).len(), || format!("{label}: split misses elements"));
        let (st, v) = unique_state(k, &split, hs).unwrap();
        o.expect(v.is_holds(), || format!("{label}: state {}", v.summary()));
        let w = k.kite_window(hs);
        for x in &w {
            for y in &w {
                if let Some(s) = k.kite_add(x, y) {
                    if let (Some(a), Some(b), Some(c)) = (st.value(x), st.value(y), st.value(&s)) {
                        o.expect(a + b == c, || format!("{label}: state not additive at {} + {}", k.show(x), k.show(y)));
                    }
                }
            }
        }
        let kernel = lower_kernel(k, hs);
        let oracle = |x: &KiteElement| x.is_lower();
        let nv = is_normal(k, &kernel, hs, Some(&oracle));
        o.expect(nv.is_holds(), || format!("{label}: kernel {}", nv.summary()));
    }
    let g = IntervalPea::new(z(), &[2]).unwrap();
    o.expect(perfect_split(&g, 3, NMAX).is_none(), || "Gamma(Z,2) has a perfect split".into());
    o
}

fn registry_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/mapspecs.json")
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new(7, "window isomorphisms and stored map specs replay");
    let stored = load_registry(&registry_path());
    o.expect(stored.is_ok(), || "registry missing".into());
    let stored = stored.unwrap_or_default();
    let fresh = build_registry(H).unwrap();
    o.expect(stored == fresh, || "stored map specs differ from a fresh search".into());
    for (name, kite, q) in registry_fixtures().unwrap() {
        match stored.get(&name) {
            Some(m) => {
                let v = verify_iso(&kite, &q, m, H);
                o.expect(v.is_holds(), || format!("{name}: {}", v.summary()));
                let text = serde_json::to_string(m).unwrap();
                let back: MapSpec = serde_json::from_str(&text).unwrap();
                o.expect(back == *m && serde_json::to_string(&back).unwrap() == text, || format!("{name}: map spec does not round-trip"));
            }
            None => o.expect(false, || format!("{name}: not stored")),
        }
    }
    let k0 = Kite::over(&z(), Perm::identity(0), Perm::identity(0)).unwrap();
    let v = verify_iso(&k0, &IntervalPea::new(z(), &[1]).unwrap(), &MapSpec::identity(0), H);
    o.expect(v.is_holds(), || format!("n = 0 vs Gamma(Z,1): {}", v.summary()));
    let k1 = Kite::over(&z(), Perm::identity(1), Perm::identity(1)).unwrap();
    let lex = twisted_lex_group(Perm::identity(1), Perm::identity(1), &z()).unwrap();
    let v = verify_iso(&k1, &IntervalPea::new(lex, &[1, 0]).unwrap(), &MapSpec::identity(1), H);
    o.expect(v.is_holds(), || format!("K1 vs Gamma(Z lex Z): {}", v.summary()));
    for n in [2, 3] {
        let f = scrimger_fixture(n, H).unwrap();
        o.expect(f.verdict().is_holds(), || format!("Scrimger n = {n}: {}", f.verdict().summary()));
    }
    let ks = Kite::over(&z(), swap(), swap()).unwrap();
    let r = perfect_representation(&ks, H).unwrap();
    o.expect(r.verdict.is_holds(), || format!("perfect swap/swap: {}", r.verdict.summary()));
    o
}

fn four_cycle() -> Perm {
    Perm::rotation(4, 1)
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new(8, "least normal ideal decisions and canonical form");
    let h = H;
    let k = Kite::over(&z(), Perm::identity(4), four_cycle()).unwrap();
    let r = least_normal_ideal(&k, h);
    o.expect(r.verdict.is_holds(), || format!("4-cycle: {}", r.verdict.summary()));
    if let Some(ideal) = &r.ideal {
        for g in k.kite_window(h).into_iter().filter(|x| x.is_lower() && k.kite_dimension(x) == 1) {
            let n0 = normal_ideal_generated(&k, &g, h, 4);
            o.expect(ideal.is_subset(&n0.ideal), || format!("ideal not inside N0({})", k.show(&g)));
        }
    } else {
        o.expect(false, || "4-cycle: no ideal returned".into());
    }
    let split = Perm::new(vec![1, 0, 3, 2]).unwrap();
    let k2 = Kite::over(&z(), Perm::identity(4), split).unwrap();
    let r2 = least_normal_ideal(&k2, h);
    o.expect(r2.verdict.is_fails(), || format!("(01)(23): {}", r2.verdict.summary()));
    o.expect(r2.witnesses.len() == 2, || format!("(01)(23): {} witnesses", r2.witnesses.len()));
    if r2.witnesses.len() == 2 {
        let (a, b) = (&r2.witnesses[0], &r2.witnesses[1]);
        let common: Vec<_> = a.elements.intersection(&b.elements).collect();
        o.expect(common == vec![&k2.zero()], || "witness ideals intersect non-trivially".into());
        o.expect(a.len() > 1 && b.len() > 1, || "witness ideal is trivial".into());
        o.expect(r2.normality.iter().all(|v| v.is_holds()), || "witness ideal is not normal".into());
    }
    for (l, rr) in [(Perm::rotation(3, 1), Perm::identity(3)), (Perm::identity(4), four_cycle()), (Perm::rotation(4, 1), Perm::new(vec![0, 2, 3, 1]).unwrap())] {
        let shape = KiteShape::new(l, rr, GroupDescriptor::Integers).unwrap();
        let Ok((c, rel)) = canonical_form(&shape) else { continue };
        o.expect(c.lambda.is_identity() && c.rho == Perm::rotation(c.n, -1), || format!("{} not canonical", c.label()));
        let ka = Kite::new(shape.clone()).unwrap();
        let kb = Kite::new(c).unwrap();
        let inv = Relabeling { alpha: rel.alpha.inverse(), beta: rel.beta.inverse() };
        let fwd = |x: &KiteElement| Some(rel.apply(&ka, x));
        let bwd = |y: &KiteElement| Some(inv.apply(&kb, y));
        let v = verify_iso_with(&ka, &kb, &fwd, &bwd, h, h);
        o.expect(v.is_holds(), || format!("{}: {}", shape.label(), v.summary()));
    }
    o
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new(9, "double negation shift and meet-zero test, Z, n <= 4");
    for n in 1..=4 {
        for l in Perm::all(n) {
            for r in Perm::all(n) {
                let k = Kite::over(&z(), l.clone(), r).unwrap();
                let v = check_double_negation_shift(&k, H);
                o.expect(v.is_holds(), || format!("{}: {}", k.shape().label(), v.summary()));
                let x = k.lower_ints(&(0..n).map(|i| i64::from(i == 0)).collect::<Vec<_>>());
                let d = double_negation_shift(&k, &x).expect("one-dimensional");
                o.expect(d.minus_minus == Some(d.sigma_image) && d.tilde_tilde == Some(d.sigma_inv_image), || format!("{}: support", k.shape().label()));
                o.expect(d.meet_zero_minus == Some(d.predicted_zero_minus), || format!("{}: meet-zero minus", k.shape().label()));
                o.expect(d.meet_zero_tilde == Some(d.predicted_zero_tilde), || format!("{}: meet-zero tilde", k.shape().label()));
            }
        }
    }
    o
}

fn strip_wall(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_ms");
            m.values_mut().for_each(strip_wall);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_wall),
        _ => {}
    }
}

fn criterion_10() -> Outcome {
    let mut o = Outcome::new(10, "byte-identical reports apart from wall-clock fields");
    let run = RunConfig {
        group: GroupDescriptor::Integers,
        shape: Some(KiteShape::new(Perm::identity(2), swap(), GroupDescriptor::Integers).unwrap()),
        checks: CheckKind::ALL.to_vec(),
        ..RunConfig::default()
    };
    let render = || {
        let mut v = cli::cmd_check(&run).unwrap().to_json();
        strip_wall(&mut v);
        serde_json::to_string_pretty(&v).unwrap()
    };
    let (a, b) = (render(), render());
    o.expect(a == b, || "check reports differ".into());
    let sweep = SweepConfig {
        groups: vec![GroupDescriptor::Integers, GroupDescriptor::StrictCone2],
        n: vec![0, 1, 2],
        pairs: Pairs::All,
        heights: vec![H],
        cell_budget: 100,
        run: RunConfig { checks: vec![CheckKind::Symmetric, CheckKind::Commutative, CheckKind::Rdp0], ..RunConfig::default() },
    };
    let render = || {
        let mut v = cli::cmd_sweep(&sweep).unwrap().to_json();
        strip_wall(&mut v);
        serde_json::to_string(&v).unwrap()
    };
    let (a, b) = (render(), render());
    o.expect(a == b, || "sweep reports differ".into());
    o
}

#[test]
fn acceptance() {
    let outcomes = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    let passed = outcomes.iter().map(Outcome::report).filter(|&p| p).count();
    println!("{passed}/{} criteria pass", outcomes.len());
    assert_eq!(passed, outcomes.len());
}
