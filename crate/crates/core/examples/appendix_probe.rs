//! Newton probe of the residual system and a sampled body L.

use mixedarea::appendix::{body_l_checks, body_l_sample, dimension_probe, AppendixParams, DEFAULT_T};

fn main() -> mixedarea::Result<()> {
    let p = AppendixParams::new(4, DEFAULT_T, vec![1.0, 1.0])?;
    let c = p.convexity_check(1000);
    println!("strictly convex at t = {}: {} (min curvature {:.3})", p.t, c.strictly_convex, c.min_curvature);
    let r = dimension_probe(&p, 2000, 1)?;
    println!("converged {} diverged {} clusters {}", r.converged, r.diverged, r.clusters.len());
    for cl in &r.clusters {
        println!("  a = {:?} residual {:.1e} hits {}", cl.a, cl.residual, cl.hits);
    }
    println!("box-counting slope {:.3} (heuristic)", r.box_dim);
    let l = body_l_sample(&p, 200)?;
    let checks = body_l_checks(&l)?;
    println!("L: {} vertices, e1 face is a segment: {}", checks.vertex_count, checks.e1_face_is_segment);
    Ok(())
}
