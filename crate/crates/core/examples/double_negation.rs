//! How double negations move the support of a one-dimensional lower.

use kitepea::ideals::{check_double_negation_shift, double_negation_shift};
use kitepea::{Kite, Perm, PoGroup};

fn main() -> kitepea::Result<()> {
    let k = Kite::over(&PoGroup::integers(), Perm::identity(3), Perm::rotation(3, 1))?;
    for j in 0..3 {
        let mut v = vec![0; 3];
        v[j] = 1;
        let x = k.lower_ints(&v);
        let d = double_negation_shift(&k, &x).expect("one-dimensional lower");
        println!(
            "{}: --x at {:?}, ~~x at {:?}, meets zero {:?}/{:?}",
            k.show(&x),
            d.minus_minus,
            d.tilde_tilde,
            d.meet_zero_minus,
            d.meet_zero_tilde
        );
    }
    println!("law on the window: {}", check_double_negation_shift(&k, 2).summary());
    Ok(())
}
