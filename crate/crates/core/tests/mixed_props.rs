mod common;

use common::*;
use itertools::Itertools;
use mixedarea::extremality::classify;
use mixedarea::mixed::{mixed_area_atoms, mixed_volume, positivity};
use mixedarea::rational::{rat, Rational};
use mixedarea::Polytope;
use num_rational::BigRational;
use proptest::prelude::*;

fn v(bodies: &[Polytope]) -> Rational {
    mixed_volume(bodies).unwrap().value
}

fn tuple(n: usize, len: usize) -> impl Strategy<Value = Vec<Polytope>> {
    prop::collection::vec(polytope_strategy(n), len)
}

fn dims() -> impl Strategy<Value = usize> {
    2usize..=3
}

/// `dim Σ_{i∈I} Cᵢ ≥ |I|` for every `I`, from vertex differences.
fn dimension_condition(bodies: &[Polytope]) -> bool {
    (1..=bodies.len()).flat_map(|k| (0..bodies.len()).combinations(k)).all(|subset| {
        let parts: Vec<&Polytope> = subset.iter().map(|&i| &bodies[i]).collect();
        Polytope::sum_all(&parts).unwrap().dim() >= subset.len()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn mixed_volume_is_symmetric((n, bodies) in dims().prop_flat_map(|n| (Just(n), tuple(n, n)))) {
        let base = mixed_volume(&bodies).unwrap();
        prop_assert!(base.agree());
        for perm in (0..n).permutations(n) {
            let permuted: Vec<Polytope> = perm.iter().map(|&i| bodies[i].clone()).collect();
            prop_assert_eq!(&v(&permuted), &base.value);
        }
    }

    #[test]
    fn mixed_volume_is_additive_and_homogeneous(
        (k, k2, rest, p, q) in dims().prop_flat_map(|n| (polytope_strategy(n), polytope_strategy(n), tuple(n, n - 1), 0i64..5, 1i64..4))
    ) {
        let with = |first: Polytope| {
            let mut b = vec![first];
            b.extend(rest.iter().cloned());
            v(&b)
        };
        prop_assert_eq!(with(k.minkowski_sum(&k2).unwrap()), with(k.clone()) + with(k2.clone()));
        let lambda = BigRational::new(p.into(), q.into());
        prop_assert_eq!(with(k.scale(&lambda)), &lambda * with(k));
    }

    #[test]
    fn translations_change_neither_volume_nor_measure(
        (bodies, shift) in dims().prop_flat_map(|n| (tuple(n, n), prop::collection::vec(-3i64..=3, n)))
    ) {
        let t: Vec<Rational> = shift.iter().map(|&s| rat(s)).collect();
        let moved: Vec<Polytope> = bodies.iter().map(|b| b.translate(&t)).collect();
        prop_assert_eq!(v(&moved), v(&bodies));
        let n = bodies.len();
        prop_assert_eq!(mixed_area_atoms(&moved[..n - 1]).unwrap(), mixed_area_atoms(&bodies[..n - 1]).unwrap());
    }

    #[test]
    fn mixed_volume_is_monotone(
        (k, extra, rest) in dims().prop_flat_map(|n| (points_strategy(n, 1, n + 2), points_strategy(n, 1, 3), tuple(n, n - 1)))
    ) {
        let n = rest[0].ambient_dim();
        let small = hull(&k, n);
        let mut all = k.clone();
        all.extend(extra);
        let big = hull(&all, n);
        let mut a = vec![small];
        a.extend(rest.iter().cloned());
        let mut b = vec![big];
        b.extend(rest.iter().cloned());
        prop_assert!(v(&a) <= v(&b));
    }

    #[test]
    fn both_methods_agree((_n, bodies) in dims().prop_flat_map(|n| (Just(n), tuple(n, n)))) {
        let r = mixed_volume(&bodies).unwrap();
        prop_assert_eq!(&r.method_a, &r.method_b);
        prop_assert!(r.value >= rat(0));
    }

    #[test]
    fn positivity_certificates_agree((_n, bodies) in dims().prop_flat_map(|n| (Just(n), tuple(n, n)))) {
        let r = positivity(&bodies).unwrap();
        prop_assert_eq!(r.positive, r.witness.is_some());
        prop_assert_eq!(r.positive, r.failing_set.is_none());
        prop_assert_eq!(r.positive, dimension_condition(&bodies));
        prop_assert_eq!(r.positive, v(&bodies) > rat(0));
    }

    #[test]
    fn atoms_sit_at_exposed_directions((_n, bodies) in dims().prop_flat_map(|n| (Just(n), tuple(n, n - 1)))) {
        let s = mixed_area_atoms(&bodies).unwrap();
        for (w, q) in s.atoms() {
            prop_assert!(*q > rat(0));
            prop_assert!(classify(&bodies, w).unwrap().exposed, "atom at non-exposed {}", w);
        }
    }
}
