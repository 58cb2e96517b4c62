//! Riesz decomposition: refinement tables, splits and the level checks.

use kitepea::riesz::{check_rdp_level, find_refinement, kite_refinement_constructive, rdp0_split, ConeCtx, PeaCtx, RdpLevel};
use kitepea::{Budget, Elem, Kite, Perm, PoGroup};

fn main() -> kitepea::Result<()> {
    let z = PoGroup::integers();
    let c = ConeCtx(&z);
    let e = |v: i64| Elem::from_slice(&[v]);
    let s = rdp0_split(&c, &e(3), &e(2), &e(2), 4)?;
    println!("Z: 3 <= 2 + 2 splits as {:?}", s.value);

    let k = Kite::over(&z, Perm::identity(1), Perm::identity(1))?;
    let (x1, x2) = (k.upper_ints(&[-2]), k.lower_ints(&[1]));
    let (y1, y2) = (k.lower_ints(&[1]), k.upper_ints(&[-2]));
    let search = find_refinement(&PeaCtx(&k), &x1, &x2, &y1, &y2, RdpLevel::Rdp, 4)?;
    if let Some(t) = search.value {
        println!("search table:\n{}", t.show(&PeaCtx(&k)));
    }
    if let Some(t) = kite_refinement_constructive(&k, &x1, &x2, &y1, &y2, 4)? {
        println!("constructive table:\n{}", t.show(&PeaCtx(&k)));
    }
    for level in RdpLevel::ALL {
        println!("{:<5} {}", level.label(), check_rdp_level(&PeaCtx(&k), level, 2, Budget::default()).summary());
    }

    let sc = Kite::over(&PoGroup::strict_cone2(), Perm::identity(1), Perm::identity(1))?;
    let v = check_rdp_level(&PeaCtx(&sc), RdpLevel::Rdp0, 3, Budget::default());
    println!("{} rdp0: {}", sc.shape().label(), v.summary());
    Ok(())
}
