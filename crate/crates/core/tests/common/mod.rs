#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rci_bounds::config::AnalysisConfig;
use rci_bounds::sets::{ConvexSet, HPolytope, Point, Polygon, VPolytope};
use rci_bounds::spectral::SpectralDecomposition;
use rci_bounds::system::LinearSystem;

pub fn v(xs: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(xs)
}

pub fn config(name: &str) -> AnalysisConfig {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.json"));
    AnalysisConfig::load(&path).expect("golden config loads")
}

pub fn golden(name: &str) -> (LinearSystem, SpectralDecomposition) {
    let c = config(name);
    let sys = c.system().unwrap();
    let spec = c.spectral(&sys).unwrap();
    (sys, spec)
}

pub fn unit(t: f64) -> DVector<f64> {
    v(&[t.cos(), t.sin()])
}

/// Max of `z·p` over a point cloud: the support of its hull.
pub fn brute_support(points: &[DVector<f64>], z: &DVector<f64>) -> f64 {
    points.iter().map(|p| p.dot(z)).fold(f64::NEG_INFINITY, f64::max)
}

pub fn points_2d(min: usize, max: usize, r: f64) -> impl Strategy<Value = Vec<DVector<f64>>> {
    prop::collection::vec((-r..r, -r..r), min..max).prop_map(|ps| ps.into_iter().map(|(x, y)| v(&[x, y])).collect())
}

/// Points whose hull contains the origin in its interior.
pub fn c_set_points(r: f64) -> impl Strategy<Value = Vec<DVector<f64>>> {
    prop::collection::vec((0.0..2.0 * std::f64::consts::PI, 0.2..r), 3..9).prop_map(|ps| {
        let mut out: Vec<DVector<f64>> = ps.iter().map(|&(t, s)| unit(t) * s).collect();
        // a triangle around the origin keeps it interior
        out.extend([v(&[0.1, 0.0]), v(&[-0.05, 0.09]), v(&[-0.05, -0.09])]);
        out
    })
}

pub fn hull_h(points: &[DVector<f64>]) -> ConvexSet {
    let pts: Vec<Point> = points.iter().map(|p| Point::new(p[0], p[1])).collect();
    let poly = Polygon::hull(&pts).unwrap();
    let (n, g) = poly.halfplanes();
    let rows: Vec<Vec<f64>> = n.iter().map(|n| vec![n.x, n.y]).collect();
    HPolytope::from_rows(&rows, &g).unwrap().into()
}

/// Any of the three representations, all from one point cloud.
pub fn any_set() -> impl Strategy<Value = (ConvexSet, Vec<DVector<f64>>)> {
    prop_oneof![
        points_2d(3, 10, 3.0).prop_map(|p| (ConvexSet::from(VPolytope::new(p.clone()).unwrap()), p)),
        c_set_points(3.0).prop_map(|p| (hull_h(&p), p)),
        (-2.0..-0.1f64, -2.0..-0.1f64, 0.1..2.0f64, 0.1..2.0f64).prop_map(|(a, b, c, d)| {
            let s = ConvexSet::boxed(&[a, b], &[c, d]).unwrap();
            let corners = vec![v(&[a, b]), v(&[a, d]), v(&[c, b]), v(&[c, d])];
            (s, corners)
        }),
    ]
}

pub fn direction() -> impl Strategy<Value = DVector<f64>> {
    (0.0..2.0 * std::f64::consts::PI, 0.1..3.0f64).prop_map(|(t, r)| unit(t) * r)
}

pub fn matrix2() -> impl Strategy<Value = DMatrix<f64>> {
    prop::array::uniform4(-2.0..2.0f64).prop_map(|a| DMatrix::from_row_slice(2, 2, &a))
}
