//! Ideal closures, normality, orbits and the least normal ideal.

use kitepea::ideals::{canonical_form, ideal_closure, is_normal, least_normal_ideal, normal_ideal_generated, orbits};
use kitepea::{Kite, Perm, PoGroup};

fn main() -> kitepea::Result<()> {
    let z = PoGroup::integers();
    let k = Kite::over(&z, Perm::identity(2), Perm::new(vec![1, 0])?)?;
    let g = k.lower_ints(&[1, 0]);
    let i = ideal_closure(&k, std::slice::from_ref(&g), 3);
    println!("closure of {}: {} elements, normal: {}", k.show(&g), i.len(), is_normal(&k, &i, 3, None).summary());
    let n0 = normal_ideal_generated(&k, &g, 3, 4);
    println!("normal ideal generated: {} elements after {} rounds (fixpoint {})", n0.ideal.len(), n0.rounds, n0.fixpoint);

    for rho in [Perm::rotation(4, 1), Perm::new(vec![1, 0, 3, 2])?] {
        let k = Kite::over(&z, Perm::identity(4), rho)?;
        let o = orbits(k.shape());
        let r = least_normal_ideal(&k, 2);
        println!("{}: sigma cycles {:?}, least normal ideal {}", k.shape().label(), o.cycles, r.verdict.summary());
    }

    let k = Kite::over(&z, Perm::rotation(3, 1), Perm::identity(3))?;
    let (c, rel) = canonical_form(k.shape())?;
    println!("{} relabels to {} (alpha {}, beta {})", k.shape().label(), c.label(), rel.alpha, rel.beta);
    Ok(())
}
