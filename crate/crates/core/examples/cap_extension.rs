//! Extending a polytope by a cap point whose normal cone stays near a direction.

use mixedarea::extremality::{cap_extend, in_cap};
use mixedarea::rational::frac;
use mixedarea::{Direction, Polytope};

fn main() -> mixedarea::Result<()> {
    let k = Polytope::cube(3, -1, 1)?;
    let u = Direction::from_ints(&[0, 0, 1])?;
    let eps = frac(1, 10);
    let k2 = cap_extend(&k, &u, &eps)?;
    println!("vertices before {} after {}", k.vertices().len(), k2.vertices().len());
    let new = k2.vertices().iter().find(|p| !k.contains(p)).expect("one new vertex");
    let cone = k2.normal_cone_at(&u);
    let inside = cone.generators().iter().all(|g| in_cap(g, &u, &eps));
    println!("new vertex {:?}", new.iter().map(|q| q.to_string()).collect::<Vec<_>>());
    println!("normal cone inside the cap: {inside}");
    Ok(())
}
