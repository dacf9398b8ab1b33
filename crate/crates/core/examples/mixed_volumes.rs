//! Mixed volumes by two independent exact methods.

use mixedarea::mixed::{integrate_support, mixed_area_atoms, mixed_volume, SupportArg};
use mixedarea::rational::format_rational;
use mixedarea::{Direction, Polytope};

fn main() -> mixedarea::Result<()> {
    let cube = Polytope::cube(3, 0, 1)?;
    let seg = Polytope::segment(&Direction::from_ints(&[0, 0, 1])?);
    let r = mixed_volume(&[cube.clone(), cube.clone(), seg.clone()])?;
    println!("V(cube, cube, [0,e3]) = {} (interpolation {}, measure {})",
        format_rational(&r.value), format_rational(&r.method_a), format_rational(&r.method_b));

    let s1 = Polytope::segment(&Direction::from_ints(&[1, 0])?);
    let s2 = Polytope::segment(&Direction::from_ints(&[0, 1])?);
    let r = mixed_volume(&[s1, s2])?;
    println!("V(I1, I2) = {}", format_rational(&r.value));

    let s = mixed_area_atoms(&[cube.clone(), seg])?;
    for (w, q) in s.atoms() {
        println!("atom {w}: scale {}", format_rational(q));
    }
    let total = integrate_support(SupportArg::Body(&cube), &s)?;
    println!("integral of h_cube against S = {}", format_rational(&total));
    Ok(())
}
