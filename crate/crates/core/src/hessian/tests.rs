use itertools::Itertools;

use super::*;
use crate::extremality::classify;
use crate::linalg::solve_columns;
use crate::rational::{frac, rvec};

fn linf() -> PiecewiseAffineConvex {
    PiecewiseAffineConvex::from_ints(&[(&[1, 0], 0), (&[-1, 0], 0), (&[0, 1], 0), (&[0, -1], 0)], -1, 1).unwrap()
}

fn abs1() -> PiecewiseAffineConvex {
    PiecewiseAffineConvex::from_ints(&[(&[1, 0], 0), (&[-1, 0], 0)], -1, 1).unwrap()
}

fn abs2() -> PiecewiseAffineConvex {
    PiecewiseAffineConvex::from_ints(&[(&[0, 1], 0), (&[0, -1], 0)], -1, 1).unwrap()
}

fn abs_sum() -> PiecewiseAffineConvex {
    PiecewiseAffineConvex::from_ints(&[(&[1, 1], 0), (&[-1, -1], 0)], -1, 1).unwrap()
}

fn origin(n: usize) -> RVec {
    vec![Rational::zero(); n]
}

/// `f*(y) = min Σλᵢbᵢ` over convex weights with `Σλᵢaᵢ = y`, by enumerating
/// affinely independent supports.
fn conjugate_oracle(f: &PiecewiseAffineConvex, y: &[Rational]) -> Option<Rational> {
    let n = f.dim();
    let pieces = f.pieces();
    (1..=n + 1)
        .flat_map(|k| (0..pieces.len()).combinations(k))
        .filter_map(|support| {
            let cols: Vec<RVec> = support
                .iter()
                .map(|&i| {
                    let mut c = pieces[i].a.clone();
                    c.push(Rational::one());
                    c
                })
                .collect();
            if rank(&cols, n + 1) < cols.len() {
                return None;
            }
            let mut target = y.to_vec();
            target.push(Rational::one());
            let lambda = solve_columns(&cols, &target)?;
            if lambda.iter().any(|l| l.is_negative()) {
                return None;
            }
            Some(support.iter().zip(&lambda).map(|(&i, l)| l * &pieces[i].b).sum::<Rational>())
        })
        .min()
}

#[test]
fn conjugate_examples() {
    let c = conjugate(&linf()).unwrap();
    assert_eq!(c.domain.vertices().len(), 4);
    assert_eq!(c.domain.volume(), rat(2));
    for (a, s) in &c.values {
        assert_eq!(Some(s.clone()), conjugate_oracle(&linf(), a));
        assert!(s.is_zero());
    }
    assert_eq!(c.value(&[frac(1, 4), frac(1, 4)]), Some(rat(0)));
    assert_eq!(c.value(&[rat(1), rat(1)]), None);

    let c = conjugate(&abs1()).unwrap();
    assert_eq!(c.domain, Polytope::from_ints(&[&[-1, 0], &[1, 0]], 2).unwrap());
    assert_eq!(c.value(&[frac(1, 2), rat(0)]), Some(rat(0)));

    let affine = PiecewiseAffineConvex::from_ints(&[(&[2, -1], 3)], -1, 1).unwrap();
    let c = conjugate(&affine).unwrap();
    assert_eq!(c.values, vec![(rvec(&[2, -1]), rat(3))]);
    assert_eq!(c.cap, rat(3));
}

#[test]
fn conjugate_with_tilted_pieces_matches_oracle() {
    let f = PiecewiseAffineConvex::from_ints(&[(&[1, 0], 1), (&[-1, 0], 0), (&[0, 2], 3), (&[0, 0], 0), (&[1, 1], 2)], -2, 2).unwrap();
    let c = conjugate(&f).unwrap();
    for (a, s) in &c.values {
        assert_eq!(Some(s.clone()), conjugate_oracle(&f, a));
    }
    let y = [frac(1, 3), frac(1, 2)];
    assert_eq!(c.value(&y), conjugate_oracle(&f, &y));
}

#[test]
fn lift_body_examples() {
    let k = lift_body(&linf()).unwrap();
    let diamond = Polytope::from_ints(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0]], 3).unwrap();
    assert_eq!(k, diamond);
    assert_eq!(k.dim(), 2);
    assert_eq!(lift_body(&abs1()).unwrap(), Polytope::from_ints(&[&[-1, 0, 0], &[1, 0, 0]], 3).unwrap());
    let affine = PiecewiseAffineConvex::from_ints(&[(&[2, -1], 3)], -1, 1).unwrap();
    let k = lift_body(&affine).unwrap();
    assert_eq!(k.vertices(), &[rvec(&[2, -1, 3])]);
    let x = [frac(1, 2), frac(-1, 3)];
    assert_eq!(support_at(&k, &x), affine.eval(&x));
}

#[test]
fn sphere_map_examples() {
    assert_eq!(sphere_map(&origin(2)), Direction::from_ints(&[0, 0, -1]).unwrap());
    let x = [frac(1, 2), frac(-1, 3)];
    let w = sphere_map(&x);
    assert_eq!(w, Direction::from_ints(&[3, -2, -6]).unwrap());
    assert_eq!(sphere_map_inv(&w).unwrap(), x.to_vec());
    assert_eq!(sphere_map_inv(&Direction::from_ints(&[1, 0, 1]).unwrap()), Err(Error::UpperHemisphere));
}

#[test]
fn mixed_hessian_examples() {
    let h = mixed_hessian_atoms(&[linf(), linf()]).unwrap();
    assert_eq!(h.len(), 1);
    assert_eq!(h.mass_at(&origin(2)), rat(2));
    assert_eq!(h.mass_at(&origin(2)), linf().subdifferential(&origin(2)).volume());
    assert_eq!(h, ma_oracle(&[linf(), linf()]).unwrap());

    let h = mixed_hessian_atoms(&[linf(), abs1()]).unwrap();
    let sum = linf().sum(&abs1()).unwrap();
    let polarized = (sum.subdifferential(&origin(2)).volume()
        - linf().subdifferential(&origin(2)).volume()
        - abs1().subdifferential(&origin(2)).volume())
        / rat(2);
    assert_eq!(polarized, rat(2));
    assert_eq!(h.mass_at(&origin(2)), polarized);
    assert_eq!(h, ma_oracle(&[linf(), abs1()]).unwrap());

    assert!(mixed_hessian_atoms(&[abs1(), abs1()]).unwrap().is_empty());
    assert!(ma_oracle(&[abs1(), abs1()]).unwrap().is_empty());
}

#[test]
fn ma_oracle_examples() {
    let h = ma_oracle(&[abs1(), abs_sum()]).unwrap();
    let sum = abs1().sum(&abs_sum()).unwrap();
    assert_eq!(sum.subdifferential(&origin(2)).volume(), rat(4));
    assert_eq!(h.mass_at(&origin(2)), rat(2));
    assert_eq!(h, mixed_hessian_atoms(&[abs1(), abs_sum()]).unwrap());

    let a = PiecewiseAffineConvex::from_ints(&[(&[1, 2], 0)], -1, 1).unwrap();
    let b = PiecewiseAffineConvex::from_ints(&[(&[0, -1], 1)], -1, 1).unwrap();
    assert!(ma_oracle(&[a.clone(), b.clone()]).unwrap().is_empty());
    assert!(mixed_hessian_atoms(&[a, b]).unwrap().is_empty());
}

#[test]
fn hessian_in_three_dimensions() {
    let l3 = PiecewiseAffineConvex::from_ints(
        &[(&[1, 0, 0], 0), (&[-1, 0, 0], 0), (&[0, 1, 0], 0), (&[0, -1, 0], 0), (&[0, 0, 1], 0), (&[0, 0, -1], 1)],
        -2,
        2,
    )
    .unwrap();
    let ridge = PiecewiseAffineConvex::from_ints(&[(&[1, 1, 0], 0), (&[0, 0, 0], 1)], -2, 2).unwrap();
    let fs = [l3.clone(), l3, ridge];
    assert_eq!(mixed_hessian_atoms(&fs).unwrap(), ma_oracle(&fs).unwrap());
}

#[test]
fn pushforward_factor_is_rational() {
    // Mass q·‖w‖ times the density |w₃|/‖w‖ of the sphere map leaves q·|w₃|.
    let bodies = [lift_body(&linf()).unwrap(), lift_body(&abs1()).unwrap()];
    let refs: Vec<&Polytope> = bodies.iter().collect();
    let sphere = area_atoms_in(3, &refs);
    let plane = hessian_from_bodies(2, &bodies);
    for (w, q) in sphere.atoms().iter().filter(|(w, _)| w.is_negative_last()) {
        let x = sphere_map_inv(w).unwrap();
        let numeric = sphere.mass_f64(w) * (num_traits::ToPrimitive::to_f64(&w.last().abs()).unwrap() / w.norm_f64());
        assert_eq!(plane.mass_at(&x), q * Rational::from_integer(w.last().abs()));
        assert!((numeric - crate::rational::to_f64(&plane.mass_at(&x))).abs() < 1e-12);
    }
}

#[test]
fn cap_height_does_not_move_lower_atoms() {
    let f = PiecewiseAffineConvex::from_ints(&[(&[1, 0], 1), (&[-1, 0], 0), (&[0, 2], 3), (&[0, 0], 0)], -2, 2).unwrap();
    let g = linf();
    let conj = conjugate(&f).unwrap();
    let raised = lift_body_capped(&f, &(&conj.cap + rat(1))).unwrap();
    let plain = hessian_from_bodies(2, &[lift_body(&f).unwrap(), lift_body(&g).unwrap()]);
    let capped = hessian_from_bodies(2, &[raised, lift_body(&g).unwrap()]);
    assert_eq!(plain, capped);
    assert_eq!(lift_body_capped(&f, &(&conj.cap - rat(1))), Err(Error::Invalid("cap lies below r_f".into())));
}

#[test]
fn affine_cell_examples() {
    let c = affine_cell(&abs1(), &[rat(0), frac(1, 3)]).unwrap();
    assert_eq!(c.dim(), 1);
    assert_eq!(c.cell, Polytope::from_ints(&[&[0, -1], &[0, 1]], 2).unwrap());
    let c = affine_cell(&linf(), &origin(2)).unwrap();
    assert_eq!(c.dim(), 0);
    assert_eq!(c.cell.vertices(), &[origin(2)]);
    let c = affine_cell(&abs1(), &[frac(1, 2), rat(0)]).unwrap();
    assert_eq!(c.dim(), 2);
    assert_eq!(c.cell, Polytope::from_ints(&[&[0, -1], &[1, -1], &[0, 1], &[1, 1]], 2).unwrap());
    assert_eq!(affine_cell(&abs1(), &[rat(2), rat(0)]), Err(Error::OutsideDomain));
}

#[test]
fn fcn_classify_examples() {
    let v = fcn_classify(&[linf(), abs1()], &origin(2)).unwrap();
    assert!(v.extreme && v.line_witness.is_some());
    let v = fcn_classify(&[abs1(), abs1()], &origin(2)).unwrap();
    assert!(!v.extreme);
    assert_eq!(v.failing_sets, vec![vec![0, 1]]);
    let fs = [linf(), abs1()];
    let x = [frac(1, 2), rat(0)];
    let v = fcn_classify(&fs, &x).unwrap();
    assert!(!v.extreme);
    assert!(v.failing_sets.contains(&vec![1]));
    assert_eq!(v.failing_sets, failing_by_cells(&fs, &x));
}

/// Failing sets from the dimensions of the clipped cells of partial sums.
fn failing_by_cells(fs: &[PiecewiseAffineConvex], x: &[Rational]) -> Vec<Vec<usize>> {
    let n = x.len();
    (1..=fs.len())
        .flat_map(|k| (0..fs.len()).combinations(k))
        .filter(|subset| {
            let parts: Vec<&PiecewiseAffineConvex> = subset.iter().map(|&i| &fs[i]).collect();
            let sum = PiecewiseAffineConvex::sum_all(&parts).unwrap();
            n - affine_cell(&sum, x).unwrap().cell.dim() < subset.len()
        })
        .collect()
}

#[test]
fn extreme_points_match_lifted_directions() {
    let tuples = [[linf(), abs1()], [abs1(), abs1()], [abs1(), abs2()], [linf(), abs_sum()]];
    let points = [origin(2), vec![frac(1, 2), rat(0)], vec![rat(0), frac(1, 2)], vec![frac(1, 2), frac(1, 2)]];
    for fs in &tuples {
        let lifts: Vec<Polytope> = fs.iter().map(|f| lift_body(f).unwrap()).collect();
        for x in &points {
            let plane = fcn_classify(fs, x).unwrap().extreme;
            let sphere = classify(&lifts, &sphere_map(x)).unwrap().extreme;
            assert_eq!(plane, sphere, "{x:?}");
        }
    }
}

#[test]
fn fcn_schneider_examples() {
    let r = fcn_schneider_verify(&[linf(), abs1()]).unwrap();
    assert!(r.holds && r.equal);
    assert_eq!(r.atom_points, vec![origin(2)]);
    let r = fcn_schneider_verify(&[abs1(), abs2()]).unwrap();
    assert!(r.holds);
    assert_eq!(r.extreme_points, vec![origin(2)]);
    assert_eq!(mixed_hessian_atoms(&[abs1(), abs2()]).unwrap().mass_at(&origin(2)), rat(2));
    let r = fcn_schneider_verify(&[abs1(), abs1()]).unwrap();
    assert!(r.holds && r.atom_points.is_empty() && r.extreme_points.is_empty());
}

fn open_square() -> Vec<(Rational, Rational)> {
    vec![(rat(-1), rat(1)); 2]
}

#[test]
fn ruling_examples() {
    let r = ruling(&abs1(), &abs1(), &open_square(), &[rat(0), frac(1, 4)]).unwrap();
    assert_eq!(r.direction, Direction::from_ints(&[0, 1]).unwrap());
    assert_eq!((r.start, r.end), (rvec(&[0, -1]), rvec(&[0, 1])));

    // g = |x₁ − 1/2| is affine near the origin, so the origin lies in a planar
    // region of g.
    let g = PiecewiseAffineConvex::new(
        vec![Piece::new(rvec(&[1, 0]), frac(1, 2)), Piece::new(rvec(&[-1, 0]), frac(-1, 2))],
        vec![(rat(-1), rat(1)); 2],
    )
    .unwrap();
    assert_eq!(ruling(&abs1(), &g, &open_square(), &origin(2)), Err(Error::InPlanarRegion));
    let r = ruling(&abs1(), &g, &open_square(), &[frac(1, 2), frac(1, 3)]);
    assert_eq!(r, Err(Error::InPlanarRegion));

    assert_eq!(ruling(&abs1(), &abs1(), &open_square(), &[frac(1, 2), rat(0)]), Err(Error::InPlanarRegion));
    assert_eq!(ruling(&linf(), &abs1(), &open_square(), &[rat(0), frac(1, 2)]), Err(Error::MeasureNonzero));
    assert_eq!(ruling(&abs1(), &abs1(), &open_square(), &[rat(1), rat(0)]), Err(Error::OutsideDomain));
}

#[test]
fn function_json_round_trip() {
    let j = serde_json::to_string(&abs1()).unwrap();
    assert_eq!(j, r#"{"dim":2,"pieces":[{"a":["1","0"],"b":"0"},{"a":["-1","0"],"b":"0"}],"box":[["-1","1"],["-1","1"]]}"#);
    assert_eq!(PiecewiseAffineConvex::from_json(&j).unwrap(), abs1());
    let h = mixed_hessian_atoms(&[linf(), linf()]).unwrap();
    let j = serde_json::to_string(&h).unwrap();
    assert_eq!(j, r#"{"dim":2,"atoms":[{"point":["0","0"],"mass":"2","mass_numeric":2.0}]}"#);
    assert_eq!(PlaneMeasure::from_json(&j).unwrap(), h);
}
