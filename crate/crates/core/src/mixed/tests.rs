use itertools::Itertools;
use num_traits::Zero;

use super::*;
use crate::rational::frac;

fn d(x: &[i64]) -> Direction {
    Direction::from_ints(x).unwrap()
}

fn square() -> Polytope {
    Polytope::cube(2, 0, 1).unwrap()
}

fn cube() -> Polytope {
    Polytope::cube(3, 0, 1).unwrap()
}

fn seg(v: &[i64]) -> Polytope {
    Polytope::segment(&d(v))
}

/// Inclusion–exclusion over subset sums: `n!·𝖵 = Σ_I (−1)^{n−|I|} Vol(C_I)`.
fn polarization_oracle(bodies: &[Polytope]) -> Rational {
    let n = bodies.len();
    let mut total = Rational::zero();
    for k in 1..=n {
        for subset in (0..n).combinations(k) {
            let refs: Vec<&Polytope> = subset.iter().map(|&i| &bodies[i]).collect();
            let v = Polytope::sum_all(&refs).unwrap().volume();
            if (n - k) % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
    }
    let fact: i64 = (1..=n as i64).product();
    total / rat(fact)
}

#[test]
fn mixed_volume_examples() {
    let r = mixed_volume(&[square(), square()]).unwrap();
    assert_eq!(r.value, rat(1));
    assert!(r.agree());
    let pair = [seg(&[1, 0]), seg(&[0, 1])];
    let r = mixed_volume(&pair).unwrap();
    assert_eq!(r.value, polarization_oracle(&pair));
    assert_eq!(r.value, frac(1, 2));
    assert!(r.agree());
    assert_eq!(r.witness, Some(vec![d(&[1, 0]), d(&[0, 1])]));
    let triple = [cube(), cube(), seg(&[0, 0, 1])];
    let r = mixed_volume(&triple).unwrap();
    assert_eq!(r.value, polarization_oracle(&triple));
    assert_eq!(r.value, frac(1, 3));
    assert!(r.agree());
}

#[test]
fn mixed_volume_in_dimension_four() {
    let tess = Polytope::cube(4, 0, 1).unwrap();
    let s = seg(&[1, 1, 0, 0]);
    let bodies = [tess.clone(), s.clone(), tess.clone(), s];
    let r = mixed_volume(&bodies).unwrap();
    assert!(r.agree());
    assert_eq!(r.value, polarization_oracle(&bodies));
    let r = mixed_volume(&[tess.clone(), tess.clone(), tess.clone(), tess]).unwrap();
    assert_eq!(r.value, rat(1));
}

#[test]
fn rejects_wrong_arity() {
    assert!(matches!(mixed_volume(&[square()]), Err(Error::Invalid(_))));
    assert!(matches!(mixed_volume(&[square(), cube()]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn area_atom_examples() {
    let s = mixed_area_atoms(&[square()]).unwrap();
    assert_eq!(s.support(), vec![d(&[-1, 0]), d(&[0, -1]), d(&[0, 1]), d(&[1, 0])]);
    assert!(s.atoms().values().all(|q| *q == rat(1)));

    let s = mixed_area_atoms(&[cube(), seg(&[0, 0, 1])]).unwrap();
    assert_eq!(s.support(), vec![d(&[-1, 0, 0]), d(&[0, -1, 0]), d(&[0, 1, 0]), d(&[1, 0, 0])]);
    // Oracle: the atom at e₁ is 𝖵₂ of the unit square face and [0,e₃] inside e₁^⊥.
    let face_oracle = polarization_oracle(&[square(), seg(&[0, 1])]);
    assert!(s.atoms().values().all(|q| *q == face_oracle));
    assert_eq!(face_oracle, frac(1, 2));

    let s = mixed_area_atoms(&[seg(&[1, 0, 0]), seg(&[1, 0, 0])]).unwrap();
    assert!(s.is_empty());
}

#[test]
fn atoms_on_skew_facets_carry_gram_correction() {
    // The triangle conv{0, e₁, e₂} has a hypotenuse of length √2 with normal (1,1).
    let t = Polytope::from_ints(&[&[0, 0], &[1, 0], &[0, 1]], 2).unwrap();
    let s = mixed_area_atoms(&[t.clone()]).unwrap();
    assert_eq!(s.scale_at(&d(&[1, 1])), rat(1));
    assert!((s.mass_f64(&d(&[1, 1])) - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(integrate_support(SupportArg::Body(&t), &s).unwrap(), rat(1));
}

#[test]
fn integrate_support_examples() {
    let s = mixed_area_atoms(&[cube(), cube()]).unwrap();
    assert_eq!(s.len(), 6);
    let v = integrate_support(SupportArg::Body(&seg(&[0, 0, 1])), &s).unwrap();
    assert_eq!(v, rat(1));
    assert_eq!(v / rat(3), mixed_volume_interpolated(&[&cube(), &cube(), &seg(&[0, 0, 1])]));
    let empty = SphereMeasure::new(3);
    assert_eq!(integrate_support(SupportArg::Body(&cube()), &empty).unwrap(), rat(0));
    let sq = mixed_area_atoms(&[square()]).unwrap();
    let twice_volume = rat(2) * square().volume();
    assert_eq!(integrate_support(SupportArg::Body(&square()), &sq).unwrap(), twice_volume);
    let big = Polytope::cube(2, 0, 3).unwrap();
    assert_eq!(integrate_support(SupportArg::Difference(&big, &square()), &sq).unwrap(), rat(4));
}

#[test]
fn positivity_examples() {
    let r = positivity(&[seg(&[1, 0]), seg(&[0, 1])]).unwrap();
    assert!(r.positive);
    let dirs: Vec<Direction> = r.witness.unwrap().into_iter().map(|(_, d)| d).collect();
    assert_eq!(dirs, vec![d(&[1, 0]), d(&[0, 1])]);
    assert_eq!(r.failing_set, None);
    let r = positivity(&[seg(&[1, 0]), seg(&[1, 0])]).unwrap();
    assert!(!r.positive);
    assert!(r.witness.is_none());
    assert_eq!(r.failing_set, Some(vec![0, 1]));
    let r = positivity(&[cube(), cube(), cube()]).unwrap();
    assert!(r.positive && r.witness.is_some());
}

#[test]
fn monotonicity_examples() {
    let k = square();
    let l = Polytope::from_ints(&[&[0, 0], &[1, 0], &[0, 2], &[1, 2]], 2).unwrap();
    let r = monotonicity_equality(&k, &l, &[seg(&[0, 1])]).unwrap();
    assert!(r.equal && r.support_agreement);
    assert_eq!(r.lhs, frac(1, 2));
    let r = monotonicity_equality(&k, &l, &[seg(&[1, 0])]).unwrap();
    assert!(!r.equal && !r.support_agreement);
    assert_eq!((r.lhs, r.rhs), (frac(1, 2), rat(1)));
    assert_eq!(r.differing, vec![d(&[0, 1])]);
    let r = monotonicity_equality(&k, &k, &[seg(&[1, 0])]).unwrap();
    assert!(r.equal && r.support_agreement);
    assert_eq!(monotonicity_equality(&l, &k, &[seg(&[1, 0])]), Err(Error::NotContained));
}

#[test]
fn af_examples() {
    let r = af_check(&square(), &square(), &[]).unwrap();
    assert!(r.equality && r.consistent());
    assert_eq!(r.proportional, Some(true));
    let r = af_check(&square(), &seg(&[1, 0]), &[]).unwrap();
    assert_eq!((r.lhs.clone(), r.rhs.clone()), (frac(1, 4), rat(0)));
    assert!(r.holds && !r.equality && r.consistent());
    let big = Polytope::cube(3, 0, 2).unwrap();
    let r = af_check(&cube(), &big, &[cube()]).unwrap();
    assert!(r.equality && r.consistent());
    assert_eq!(r.mixed, rat(2));
}

#[test]
fn projection_examples() {
    let e3 = d(&[0, 0, 1]);
    let r = projection_identities(&[cube()], &e3).unwrap();
    assert!(r.holds());
    assert_eq!(r.measure.0[&d(&[1, 0, 0])], rat(1));
    assert_eq!(r.volume, None);
    let r = projection_identities(&[cube(), cube()], &e3).unwrap();
    assert_eq!(r.volume, Some((rat(1), rat(1))));
    assert!(r.holds());
    let r = projection_identities(&[seg(&[0, 0, 1]), cube()], &e3).unwrap();
    assert_eq!(r.volume, Some((rat(0), rat(0))));
    assert!(r.measure.0.is_empty() && r.measure.1.is_empty());
    let skew = d(&[1, 1, 0]);
    let r = projection_identities(&[cube(), Polytope::cube(3, -1, 2).unwrap()], &skew).unwrap();
    assert!(r.holds(), "{r:?}");
}

#[test]
fn measure_json_shape() {
    let s = mixed_area_atoms(&[seg(&[1, 0])]).unwrap();
    let j = serde_json::to_string(&s).unwrap();
    assert_eq!(
        j,
        r#"{"dim":2,"atoms":[{"dir":[0,-1],"scale":"1","mass_numeric":1.0},{"dir":[0,1],"scale":"1","mass_numeric":1.0}]}"#
    );
    assert_eq!(SphereMeasure::from_json(&j).unwrap(), s);
}
