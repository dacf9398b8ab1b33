//! Rulings of piecewise-affine and smooth pairs with vanishing mixed Hessian measure.

use mixedarea::hessian::{ruling, PiecewiseAffineConvex};
use mixedarea::rational::{frac, rat};
use mixedarea::smooth::{self as function, hn_ruling, Rect};

fn main() -> mixedarea::Result<()> {
    let abs1 = PiecewiseAffineConvex::from_ints(&[(&[1, 0], 0), (&[-1, 0], 0)], -1, 1)?;
    let d = vec![(rat(-1), rat(1)); 2];
    let r = ruling(&abs1, &abs1, &d, &[rat(0), frac(1, 4)])?;
    println!("exact ruling direction {} from {:?} to {:?}", r.direction,
        r.start.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        r.end.iter().map(|q| q.to_string()).collect::<Vec<_>>());

    let f = function::half(true);
    let g = function::half(false);
    let d = Rect::new([-1.0, -0.9], [1.0, 0.9]);
    let s = hn_ruling(&f, &g, &d, [0.0, 0.2])?;
    println!("sampled ruling direction {:?}, max second difference {:.2e}", s.direction, s.max_second_derivative);
    Ok(())
}
