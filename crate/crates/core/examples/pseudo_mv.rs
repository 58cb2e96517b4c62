//! The pseudo MV-algebra on a kite over a lattice group.

use kitepea::axioms::check_pmv_axioms;
use kitepea::{Budget, Kite, KiteMv, Perm, PoGroup, PseudoMv};

fn main() -> kitepea::Result<()> {
    let k = Kite::over(&PoGroup::integers(), Perm::identity(2), Perm::new(vec![1, 0])?)?;
    let mv = KiteMv::new(&k)?;
    let x = k.upper_ints(&[-1, 0]);
    let y = k.upper_ints(&[0, -2]);
    println!("{} (+) {} = {}", k.show(&x), k.show(&y), k.show(&mv.oplus(&x, &y)));
    println!("{} (+) {} = {}", k.show(&y), k.show(&x), k.show(&mv.oplus(&y, &x)));
    println!("{} (.) {} = {}", k.show(&x), k.show(&y), k.show(&mv.odot(&x, &y)));
    let r = check_pmv_axioms(&mv, 2, Budget::default());
    println!("pseudo MV axioms: {}", r.overall().summary());
    Ok(())
}
