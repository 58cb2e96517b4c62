//! Perfect split into lowers and uppers and the unique state.

use kitepea::axioms::{find_infinitesimals, perfect_split, unique_state};
use kitepea::repr::IntervalPea;
use kitepea::{Kite, Perm, PoGroup};

fn main() -> kitepea::Result<()> {
    let k = Kite::over(&PoGroup::integers(), Perm::identity(2), Perm::new(vec![1, 0])?)?;
    let inf = find_infinitesimals(&k, 2, 8);
    println!("{} infinitesimals in the window", inf.elements.len());
    let split = perfect_split(&k, 3, 8).expect("kites are perfect");
    println!("split: {} lowers, {} uppers, {}", split.e0.len(), split.e1.len(), split.verdict.summary());
    let (state, v) = unique_state(&k, &split, 3)?;
    println!("state: {}", v.summary());
    for x in [k.lower_ints(&[1, 2]), k.upper_ints(&[-1, 0]), k.one()] {
        println!("  s({}) = {:?}", k.show(&x), state.value(&x));
    }
    let g = IntervalPea::new(PoGroup::integers(), &[2])?;
    println!("Gamma(Z, 2) perfect: {}", perfect_split(&g, 3, 8).is_some());
    Ok(())
}
