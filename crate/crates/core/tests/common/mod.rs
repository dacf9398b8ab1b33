//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use mixedarea::hessian::{Piece, PiecewiseAffineConvex};
use mixedarea::rational::{rat, rvec, RVec};
use mixedarea::{Direction, Polytope};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn hull(points: &[Vec<i64>], n: usize) -> Polytope {
    let pts: Vec<RVec> = points.iter().map(|p| rvec(p)).collect();
    Polytope::hull(&pts, n).expect("nonempty point set")
}

pub fn dir(x: &[i64]) -> Direction {
    Direction::from_ints(x).expect("nonzero")
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-r..=r)).collect()
}

/// A random lattice polytope in `[-3,3]^n`. About one in five is lower
/// dimensional: a point, a segment or a flat body in a coordinate hyperplane.
pub fn random_polytope(rng: &mut ChaCha8Rng, n: usize) -> Polytope {
    let kind = rng.gen_range(0..10);
    let count = match kind {
        0 => 1,
        1 => 2,
        _ => rng.gen_range(n + 1..=n + 4),
    };
    let flat = kind == 2 && n > 2;
    let points: Vec<Vec<i64>> = (0..count)
        .map(|_| {
            let mut p = random_point(rng, n, 3);
            if flat {
                p[n - 1] = 0;
            }
            p
        })
        .collect();
    hull(&points, n)
}

pub fn random_full_polytope(rng: &mut ChaCha8Rng, n: usize) -> Polytope {
    loop {
        let count = rng.gen_range(n + 1..=n + 4);
        let points: Vec<Vec<i64>> = (0..count).map(|_| random_point(rng, n, 3)).collect();
        let p = hull(&points, n);
        if p.is_full_dim() {
            return p;
        }
    }
}

pub fn random_direction(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Direction {
    loop {
        let p = random_point(rng, n, r);
        if p.iter().any(|&c| c != 0) {
            return dir(&p);
        }
    }
}

/// `max` of 1 to 4 random affine pieces with small integer data on a box
/// around the origin.
pub fn random_pa(rng: &mut ChaCha8Rng, n: usize) -> PiecewiseAffineConvex {
    let k = rng.gen_range(1..=4);
    let pieces: Vec<Piece> = (0..k).map(|_| Piece::new(rvec(&random_point(rng, n, 2)), rat(rng.gen_range(-2..=2)))).collect();
    let domain = (0..n).map(|_| (rat(-rng.gen_range(1..=2)), rat(rng.gen_range(1..=2)))).collect();
    PiecewiseAffineConvex::new(pieces, domain).expect("valid function")
}

pub fn pa_from(pieces: &[(Vec<i64>, i64)], n: usize, half_width: i64) -> PiecewiseAffineConvex {
    let pieces = pieces.iter().map(|(a, b)| Piece::new(rvec(a), rat(*b))).collect();
    PiecewiseAffineConvex::new(pieces, vec![(rat(-half_width), rat(half_width)); n]).expect("valid function")
}

pub fn points_strategy(n: usize, min: usize, max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), min..=max)
}

pub fn polytope_strategy(n: usize) -> impl Strategy<Value = Polytope> {
    points_strategy(n, 1, n + 4).prop_map(move |pts| hull(&pts, n))
}

pub fn full_polytope_strategy(n: usize) -> impl Strategy<Value = Polytope> {
    polytope_strategy(n).prop_filter("full dimensional", Polytope::is_full_dim)
}

pub fn direction_strategy(n: usize) -> impl Strategy<Value = Direction> {
    prop::collection::vec(-4i64..=4, n).prop_filter_map("nonzero", |v| Direction::from_ints(&v).ok())
}

pub fn pa_strategy(n: usize) -> impl Strategy<Value = PiecewiseAffineConvex> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, n), -2i64..=2), 1..=4)
        .prop_map(move |pieces| pa_from(&pieces, n, 1))
}
