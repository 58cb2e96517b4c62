//! Builtin po-groups: products, the strict cone and twisted lexicographic groups.

use kitepea::{Perm, PoGroup};

fn main() -> kitepea::Result<()> {
    let sc = PoGroup::strict_cone2();
    let (a, b) = ([0i64, 0], [2i64, 2]);
    let (between, exhaustive) = sc.enumerate_interval(&a, &b, 3);
    println!("{}: [{}, {}] has {} elements (exhaustive {exhaustive})", sc.name(), sc.show(&a), sc.show(&b), between.len());
    println!("  meet of (1,0) and (0,1): {:?}", sc.meet(&[1, 0], &[0, 1]));

    let tl = PoGroup::twisted_lex(Perm::identity(2), Perm::new(vec![1, 0])?, &PoGroup::integers())?;
    let x = [1i64, 2, 0];
    let y = [0i64, 0, 5];
    println!("{}: {} * {} = {}", tl.name(), tl.show(&x), tl.show(&y), tl.show(&tl.mul(&x, &y)));
    println!("  {} * {} = {}", tl.show(&y), tl.show(&x), tl.show(&tl.mul(&y, &x)));
    println!("  abelian {}, lattice {}", tl.is_abelian(), tl.is_lattice());
    Ok(())
}
