//! Ready-made systems used throughout the examples and tests.

use nalgebra::DMatrix;

use crate::sets::{ConvexSet, VPolytope};
use crate::spectral::DeclaredBlock;
use crate::system::LinearSystem;

/// Two distinct unstable real eigenvalues, 1.2 and -1.5.
pub fn unstable_example() -> LinearSystem {
    LinearSystem::new(
        DMatrix::from_row_slice(2, 2, &[1.2, 1.0, 0.0, -1.5]),
        DMatrix::from_row_slice(2, 1, &[0.1, 1.0]),
        ConvexSet::boxed(&[-5.0, -2.0], &[5.0, 2.0]).expect("valid box"),
        ConvexSet::boxed(&[-0.5], &[1.0]).expect("valid box"),
        ConvexSet::cube(2, 1.0),
    )
    .expect("valid system")
}

/// Double integrator whose disturbance enters through the input channel,
/// so `W̄ = BU` is a segment.
pub fn double_integrator() -> LinearSystem {
    let b = DMatrix::from_row_slice(2, 1, &[0.5, 1.0]);
    let wbar = VPolytope::from_rows(&[vec![-0.5, -1.0], vec![0.5, 1.0]]).expect("valid segment");
    LinearSystem::new(
        DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]),
        b,
        ConvexSet::cube(2, 5.0),
        ConvexSet::cube(1, 1.0),
        wbar.into(),
    )
    .expect("valid system")
}

pub fn double_integrator_structure() -> Vec<DeclaredBlock> {
    vec![DeclaredBlock { eig: 1.0, size: 2 }]
}

/// `A = ρ·[[0, 1], [-1, 0]]` (a quarter turn scaled by `ρ`), `B = I`, and
/// boxes `X = [-x, x]²`, `U = W̄ = [-1, 1]²`.
pub fn rotating_box(rho: f64, x: f64) -> LinearSystem {
    LinearSystem::new(
        DMatrix::from_row_slice(2, 2, &[0.0, rho, -rho, 0.0]),
        DMatrix::identity(2, 2),
        ConvexSet::cube(2, x),
        ConvexSet::cube(2, 1.0),
        ConvexSet::cube(2, 1.0),
    )
    .expect("valid system")
}
