//! Builds a kite, adds a few elements and checks the pseudo effect algebra axioms.

use kitepea::axioms::{check_commutative, check_pea_axioms, check_symmetric};
use kitepea::{Budget, Kite, Perm, PoGroup};

fn main() -> kitepea::Result<()> {
    let k = Kite::over(&PoGroup::integers(), Perm::identity(2), Perm::new(vec![1, 0])?)?;
    let x = k.upper_ints(&[-2, 0]);
    let y = k.lower_ints(&[1, 0]);
    let show = |v: Option<kitepea::KiteElement>| v.map(|e| k.show(&e)).unwrap_or_else(|| "undefined".into());
    println!("{}", k.shape().label());
    println!("  {} + {} = {}", k.show(&x), k.show(&y), show(k.kite_add(&x, &y)));
    println!("  {} + {} = {}", k.show(&y), k.show(&x), show(k.kite_add(&y, &x)));
    println!("  minus {} = {}, tilde = {}", k.show(&x), k.show(&k.neg_minus(&x)), k.show(&k.neg_tilde(&x)));

    let r = check_pea_axioms(&k, 2, Budget::default());
    for (name, v) in &r.verdicts {
        println!("  {name}: {}", v.summary());
    }
    println!("  symmetric: {}", check_symmetric(&k, 2).summary());
    println!("  commutative: {}", check_commutative(&k, 2).summary());
    Ok(())
}
