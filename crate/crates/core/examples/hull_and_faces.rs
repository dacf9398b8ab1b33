//! Exact hull of a point cloud, its face lattice and normal cones.

use mixedarea::rational::{format_rational, frac, rat};
use mixedarea::{Direction, Polytope};

fn main() -> mixedarea::Result<()> {
    let pts = vec![
        vec![rat(0), rat(0), rat(0)],
        vec![rat(2), rat(0), rat(0)],
        vec![rat(0), rat(2), rat(0)],
        vec![rat(0), rat(0), rat(2)],
        vec![frac(1, 2), frac(1, 2), frac(1, 2)],
    ];
    let p = Polytope::hull(&pts, 3)?;
    println!("vertices: {}", p.vertices().len());
    println!("volume: {}", format_rational(&p.volume()));
    for (k, faces) in p.faces().iter().enumerate() {
        println!("{k}-faces: {}", faces.len());
    }
    for f in p.facets() {
        println!("facet normal {} offset {}", f.normal, format_rational(&f.offset));
    }
    let u = Direction::from_ints(&[1, 1, 0])?;
    let face = p.exposed_face(&u);
    println!("F(P, {u}) has dimension {}", face.dim);
    println!("touching cone at {u} has dimension {}", p.touching_cone(&u).dim());
    println!("fan rays: {}", p.fan_rays().len());
    Ok(())
}
