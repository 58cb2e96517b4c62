//! Kites as intervals of twisted lexicographic groups.

use kitepea::repr::{interval_pea, perfect_representation, scrimger_fixture, twisted_lex_group, verify_iso, MapSpec};
use kitepea::{Kite, Pea, Perm, PoGroup};

fn main() -> kitepea::Result<()> {
    let z = PoGroup::integers();
    let g = interval_pea(z.clone(), &[2])?;
    println!("{}: {:?}", g.name(), g.window(3));

    let k = Kite::over(&z, Perm::identity(1), Perm::identity(1))?;
    let lex = twisted_lex_group(Perm::identity(1), Perm::identity(1), &z)?;
    let q = interval_pea(lex, &[1, 0])?;
    println!("{} vs {}: {}", k.shape().label(), q.name(), verify_iso(&k, &q, &MapSpec::identity(1), 2).summary());

    for n in [2, 3] {
        let f = scrimger_fixture(n, 2)?;
        for o in &f.orientations {
            println!("Scrimger n = {n}, {}: {} {}", o.label, o.verdict.summary(), o.map.as_ref().map(|m| m.to_json().to_string()).unwrap_or_default());
        }
    }

    let swap = Perm::new(vec![1, 0])?;
    let k = Kite::over(&z, swap.clone(), swap)?;
    let r = perfect_representation(&k, 2)?;
    println!("{} vs {}: {}", k.shape().label(), r.target.name(), r.verdict.summary());
    Ok(())
}
