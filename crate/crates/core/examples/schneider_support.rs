//! Support of a mixed area measure against the extreme directions.

use mixedarea::extremality::{classify, schneider_verify};
use mixedarea::{Direction, Polytope};

fn main() -> mixedarea::Result<()> {
    let cube = Polytope::cube(3, 0, 1)?;
    let seg = Polytope::segment(&Direction::from_ints(&[0, 0, 1])?);
    let r = schneider_verify(&[cube.clone(), seg.clone()])?;
    println!("atom support: {:?}", r.atom_support.iter().map(|d| d.to_string()).collect::<Vec<_>>());
    println!("extreme set:  {:?}", r.extreme_set.iter().map(|d| d.to_string()).collect::<Vec<_>>());
    println!("equal: {}", r.equal);

    for u in [[1, 1, 0], [1, 0, 0], [0, 0, 1]] {
        let v = classify(&[cube.clone(), seg.clone()], &Direction::from_ints(&u)?)?;
        println!("{:?}: extreme={} exposed={} failing={:?}", u, v.extreme, v.exposed, v.failing_sets);
    }
    Ok(())
}
