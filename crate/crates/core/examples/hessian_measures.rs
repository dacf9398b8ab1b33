//! Mixed Hessian measures of piecewise-affine convex functions.

use mixedarea::hessian::{fcn_classify, fcn_schneider_verify, lift_body, ma_oracle, mixed_hessian_atoms, PiecewiseAffineConvex};
use mixedarea::rational::{format_rational, frac, rat};

fn main() -> mixedarea::Result<()> {
    let linf = PiecewiseAffineConvex::from_ints(&[(&[1, 0], 0), (&[-1, 0], 0), (&[0, 1], 0), (&[0, -1], 0)], -1, 1)?;
    let abs1 = PiecewiseAffineConvex::from_ints(&[(&[1, 0], 0), (&[-1, 0], 0)], -1, 1)?;
    for (name, fs) in [("linf, linf", [linf.clone(), linf.clone()]), ("linf, |x1|", [linf.clone(), abs1.clone()])] {
        let h = mixed_hessian_atoms(&fs)?;
        println!("H[{name}] total {} (oracle agrees: {})", format_rational(&h.total()), h == ma_oracle(&fs)?);
    }
    let lift = lift_body(&linf)?;
    println!("lift of linf: {} vertices", lift.vertices().len());
    let v = fcn_classify(&[linf.clone(), abs1.clone()], &[frac(1, 2), rat(0)])?;
    println!("(1/2, 0): extreme={} failing={:?}", v.extreme, v.failing_sets);
    let r = fcn_schneider_verify(&[linf, abs1])?;
    println!("atoms equal extreme points: {}", r.equal);
    Ok(())
}
