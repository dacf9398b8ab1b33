//! Projection identities for mixed volumes and mixed area measures.

use mixedarea::extremality::projection_witness;
use mixedarea::mixed::projection_identities;
use mixedarea::{Direction, Polytope};

fn main() -> mixedarea::Result<()> {
    let cube = Polytope::cube(3, 0, 1)?;
    let simplex = Polytope::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], 3)?;
    let v = Direction::from_ints(&[1, 1, 2])?;
    let r = projection_identities(&[cube.clone(), simplex.clone()], &v)?;
    println!("volume identity: {:?}", r.volume.map(|(a, b)| (a.to_string(), b.to_string())));
    println!("measure identity holds: {}", r.measure.0 == r.measure.1);

    let u = Direction::from_ints(&[1, 0, 0])?;
    let w = projection_witness(&cube, std::slice::from_ref(&cube), &u)?;
    println!("projection direction for {u}: {w}");
    Ok(())
}
