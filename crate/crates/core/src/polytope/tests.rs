use super::*;
use crate::rational::{frac, rat, rvec};

fn d(x: &[i64]) -> Direction {
    Direction::from_ints(x).unwrap()
}

fn square() -> Polytope {
    Polytope::cube(2, 0, 1).unwrap()
}

fn seg_e3() -> Polytope {
    Polytope::segment(&d(&[0, 0, 1]))
}

#[test]
fn hull_drops_interior_points() {
    let pts = vec![rvec(&[0, 0]), rvec(&[1, 0]), rvec(&[0, 1]), rvec(&[1, 1]), vec![frac(1, 2), frac(1, 2)]];
    let k = Polytope::hull(&pts, 2).unwrap();
    assert_eq!(k.vertices(), &[rvec(&[0, 0]), rvec(&[0, 1]), rvec(&[1, 0]), rvec(&[1, 1])]);
    assert_eq!(k.facets().len(), 4);
    assert_eq!(k.volume(), rat(1));
}

#[test]
fn hull_of_segment_in_space() {
    let k = seg_e3();
    assert_eq!(k.dim(), 1);
    assert_eq!(k.vertices().len(), 2);
    assert_eq!(k.affine_complement(), &[d(&[1, 0, 0]), d(&[0, 1, 0])]);
    assert_eq!(k.volume(), rat(0));
}

#[test]
fn cube_with_midpoints() {
    let mut pts = Vec::new();
    for x in 0..3 {
        for y in 0..3 {
            for z in 0..3 {
                pts.push(vec![frac(x, 2), frac(y, 2), frac(z, 2)]);
            }
        }
    }
    let k = Polytope::hull(&pts, 3).unwrap();
    assert_eq!(k, Polytope::cube(3, 0, 1).unwrap());
    let faces = k.faces();
    assert_eq!(faces.iter().map(Vec::len).collect::<Vec<_>>(), vec![8, 12, 6, 1]);
}

#[test]
fn rejects_unsupported_dimensions() {
    assert_eq!(Polytope::hull(&[vec![rat(0); 5]], 5), Err(Error::UnsupportedDimension(5)));
    assert_eq!(Polytope::hull(&[], 2), Err(Error::Empty));
}

#[test]
fn support_examples() {
    let q = square();
    let (h, f) = q.support(&d(&[1, 0]));
    assert_eq!(h, rat(1));
    assert_eq!(f.vertices(), &[rvec(&[1, 0]), rvec(&[1, 1])]);
    let (h, f) = q.support(&d(&[1, 1]));
    assert_eq!(h, rat(2));
    assert_eq!(f.vertices(), &[rvec(&[1, 1])]);
    let (h, f) = seg_e3().support(&d(&[0, 0, -1]));
    assert_eq!(h, rat(0));
    assert_eq!(f.vertices(), &[rvec(&[0, 0, 0])]);
}

#[test]
fn normal_cone_examples() {
    let q = square();
    let edge = q.exposed_face(&d(&[1, 0]));
    assert_eq!(q.normal_cone(&edge).unwrap(), Cone::ray(&d(&[1, 0])));
    let corner = q.exposed_face(&d(&[1, 1]));
    let c = q.normal_cone(&corner).unwrap();
    assert_eq!(c.generators(), &[d(&[0, 1]), d(&[1, 0])]);
    let s = seg_e3();
    let whole = Face { dim: 1, vertices: vec![0, 1] };
    let n = s.normal_cone(&whole).unwrap();
    assert!(n.generators().is_empty());
    assert_eq!(n.lineality(), &[d(&[1, 0, 0]), d(&[0, 1, 0])]);
    assert_eq!(q.normal_cone(&Face { dim: 1, vertices: vec![0, 3] }), Err(Error::NotAFace));
}

#[test]
fn touching_cone_examples() {
    let q = square();
    assert_eq!(q.touching_cone(&d(&[1, 0])), Cone::ray(&d(&[1, 0])));
    assert_eq!(q.touching_cone(&d(&[1, 1])).dim(), 2);
    let t = seg_e3().touching_cone(&d(&[1, 0, 0]));
    assert_eq!(t.dim(), 2);
    assert_eq!(t, Cone::subspace(3, &[rvec(&[1, 0, 0]), rvec(&[0, 1, 0])]));
}

#[test]
fn minkowski_sum_examples() {
    let q = square();
    assert_eq!(q.minkowski_sum(&q).unwrap(), Polytope::cube(2, 0, 2).unwrap());
    let diamond = Polytope::from_ints(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], 2).unwrap();
    let seg = Polytope::from_ints(&[&[-1, 0], &[1, 0]], 2).unwrap();
    let hex = diamond.minkowski_sum(&seg).unwrap();
    assert_eq!(hex.vertices().len(), 6);
    assert_eq!(hex.volume(), rat(6));
    let box3 = Polytope::cube(3, 0, 1).unwrap().minkowski_sum(&seg_e3()).unwrap();
    assert_eq!(box3.volume(), rat(2));
    assert_eq!(box3.support_value(&d(&[0, 0, 1])), rat(2));
}

#[test]
fn projection_examples() {
    let cube = Polytope::cube(3, 0, 1).unwrap();
    let e3 = d(&[0, 0, 1]);
    assert_eq!(cube.project(&e3).unwrap(), square());
    let chart = HyperplaneChart::new(&e3).unwrap();
    let e1 = d(&[1, 0, 0]);
    let projected = cube.project(&e3).unwrap();
    let lhs = chart.cone_from_chart(&projected.touching_cone(&chart.dir_to_chart(&e1).unwrap()));
    let rhs = cube.touching_cone(&e1).intersect_hyperplane(&e3);
    assert_eq!(lhs, rhs);
    let p = seg_e3().project(&e3).unwrap();
    assert_eq!(p.vertices(), &[rvec(&[0, 0])]);
}

#[test]
fn polar_examples() {
    let cube = Polytope::cube(3, -1, 1).unwrap();
    let octa = Polytope::from_ints(
        &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]],
        3,
    )
    .unwrap();
    assert_eq!(cube.polar().unwrap(), octa);
    assert_eq!(octa.polar().unwrap(), cube);
    let sq = Polytope::cube(2, -1, 1).unwrap();
    let diamond = Polytope::from_ints(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], 2).unwrap();
    assert_eq!(sq.polar().unwrap(), diamond);
    assert_eq!(square().polar(), Err(Error::OriginNotInterior));
}

#[test]
fn volume_examples() {
    assert_eq!(Polytope::cube(3, 0, 1).unwrap().volume(), rat(1));
    let simplex = Polytope::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], 3).unwrap();
    assert_eq!(simplex.volume(), frac(1, 6));
    let seg = Polytope::from_ints(&[&[0, 0], &[1, 2]], 2).unwrap();
    assert_eq!(seg.volume(), rat(0));
    let tess = Polytope::cube(4, 0, 2).unwrap();
    assert_eq!(tess.volume(), rat(16));
    assert_eq!(tess.faces().iter().map(Vec::len).collect::<Vec<_>>(), vec![16, 32, 24, 8, 1]);
}

#[test]
fn fan_rays_by_dimension() {
    assert_eq!(square().fan_rays().len(), 4);
    let seg = Polytope::from_ints(&[&[0, 0], &[1, 0]], 2).unwrap();
    assert_eq!(seg.fan_rays(), vec![d(&[0, -1]), d(&[0, 1])]);
    assert!(seg_e3().fan_rays().is_empty());
}

#[test]
fn json_round_trip() {
    let k = Polytope::hull(&[rvec(&[0, 0]), vec![frac(1, 2), rat(0)], rvec(&[0, 1])], 2).unwrap();
    let s = serde_json::to_string(&k).unwrap();
    assert_eq!(s, r#"{"dim":2,"vertices":[["0","0"],["0","1"],["1/2","0"]]}"#);
    let back: Polytope = serde_json::from_str(&s).unwrap();
    assert_eq!(back, k);
}
