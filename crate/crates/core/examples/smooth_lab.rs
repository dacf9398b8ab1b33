//! Mixed discriminants, smooth densities and the planar residual field.

use mixedarea::smooth::{self as function, mixed_discriminant, mixed_ma_residual, panov_zero, residual_csv, smooth_density, Grid, Rect, SymmetricMatrix};

fn main() -> mixedarea::Result<()> {
    let a = SymmetricMatrix::diagonal(&[1.0, 0.0]);
    let b = SymmetricMatrix::diagonal(&[0.0, 1.0]);
    println!("D(diag(1,0), diag(0,1)) = {}", mixed_discriminant(&[a.clone(), b.clone()])?);
    println!("Panov: {:?}", panov_zero(&a, &a)?.reason);

    let ball = function::norm(3);
    let u = [0.6, 0.0, 0.8];
    let w = [0.48, 0.6, 0.64];
    println!("ball density at {u:?}: {}", smooth_density(&[ball.clone(), ball], &u)?);
    let l4 = function::l4_norm(3);
    println!("l4 density at {u:?}: {}", smooth_density(&[l4.clone(), l4.clone()], &u)?);
    println!("l4 density at {w:?}: {}", smooth_density(&[l4.clone(), l4], &w)?);

    let grid = Grid::new(Rect::new([-0.5, -0.5], [0.5, 0.5]), 3, 3)?;
    let nodes = mixed_ma_residual(&function::norm_sq(2), &function::harmonic(), &grid)?;
    print!("{}", residual_csv(&nodes)?);
    Ok(())
}
