//! Constrained linear system `x⁺ = Ax + Bu + w`, `x ∈ X`, `u ∈ U`, `w ∈ αW̄`.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::sets::{ConvexSet, SetError, VPolytope};

/// Singular values below this (relative to the largest) do not count
/// towards the controllability rank.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("(A, B) is not reachable: controllability rank {rank} < {n}")]
    NotReachable { rank: usize, n: usize },
    #[error("{0} must contain the origin in its interior")]
    NotPc(&'static str),
    #[error("W̄ must contain the origin")]
    WbarMissingOrigin,
    #[error(transparent)]
    Set(#[from] SetError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub x: ConvexSet,
    pub u: ConvexSet,
    pub wbar: ConvexSet,
    wbar_is_pc: bool,
}

pub fn controllability_rank(a: &DMatrix<f64>, b: &DMatrix<f64>) -> usize {
    let n = a.nrows();
    let m = b.ncols();
    let mut cols = DMatrix::zeros(n, n * m);
    let mut blk = b.clone();
    for i in 0..n {
        cols.view_mut((0, i * m), (n, m)).copy_from(&blk);
        blk = a * blk;
    }
    let sv = cols.singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > RANK_TOL * smax).count()
}

impl LinearSystem {
    /// Builds and validates: dimensions agree, `(A, B)` reachable, `X`
    /// and `U` contain the origin in their interior, `W̄` contains it.
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, x: ConvexSet, u: ConvexSet, wbar: ConvexSet) -> Result<Self, SystemError> {
        let sys = Self::unchecked(a, b, x, u, wbar)?;
        let n = sys.n();
        let rank = controllability_rank(&sys.a, &sys.b);
        if rank < n {
            return Err(SystemError::NotReachable { rank, n });
        }
        if !sys.x.contains_origin_in_interior()? {
            return Err(SystemError::NotPc("X"));
        }
        if !sys.u.contains_origin_in_interior()? {
            return Err(SystemError::NotPc("U"));
        }
        Ok(sys)
    }

    /// Dimension checks only. Used for autonomous systems (`U = {0}`),
    /// which fall outside the reachability assumption.
    pub fn unchecked(a: DMatrix<f64>, b: DMatrix<f64>, x: ConvexSet, u: ConvexSet, wbar: ConvexSet) -> Result<Self, SystemError> {
        let n = a.nrows();
        if !a.is_square() {
            return Err(SystemError::Dimension(format!("A is {}x{}, must be square", a.nrows(), a.ncols())));
        }
        if b.nrows() != n {
            return Err(SystemError::Dimension(format!("B has {} rows, A has {}", b.nrows(), n)));
        }
        if x.dim() != n || wbar.dim() != n {
            return Err(SystemError::Dimension(format!(
                "X has dimension {}, W̄ has dimension {}, state dimension is {n}",
                x.dim(),
                wbar.dim()
            )));
        }
        if u.dim() != b.ncols() {
            return Err(SystemError::Dimension(format!("U has dimension {}, B has {} columns", u.dim(), b.ncols())));
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(SystemError::Dimension("non-finite matrix entry".into()));
        }
        if !wbar.contains_origin()? {
            return Err(SystemError::WbarMissingOrigin);
        }
        let wbar_is_pc = wbar.contains_origin_in_interior()?;
        Ok(Self { a, b, x, u, wbar, wbar_is_pc })
    }

    /// `x⁺ = Ax + w` with `U = {0}`.
    pub fn autonomous(a: DMatrix<f64>, x: ConvexSet, wbar: ConvexSet) -> Result<Self, SystemError> {
        let n = a.nrows();
        let u = VPolytope::new(vec![DVector::zeros(1)])?.into();
        Self::unchecked(a, DMatrix::zeros(n, 1), x, u, wbar)
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn m(&self) -> usize {
        self.b.ncols()
    }

    pub fn wbar_is_pc(&self) -> bool {
        self.wbar_is_pc
    }

    pub fn h_x(&self, z: &DVector<f64>) -> Result<f64, SetError> {
        self.x.support(z)
    }

    /// `h_{-BU}(z) = h_U(-Bᵀz)`.
    pub fn h_neg_bu(&self, z: &DVector<f64>) -> Result<f64, SetError> {
        self.u.support(&(-(self.b.transpose() * z)))
    }

    pub fn h_bu(&self, z: &DVector<f64>) -> Result<f64, SetError> {
        self.u.support(&(self.b.transpose() * z))
    }

    pub fn h_w(&self, z: &DVector<f64>) -> Result<f64, SetError> {
        self.wbar.support(z)
    }

    /// `-BU` in vertex form.
    pub fn neg_bu(&self) -> Result<ConvexSet, SetError> {
        let nb = -&self.b;
        Ok(self.u.linear_image(&nb)?.into())
    }

    pub fn is_autonomous(&self) -> Result<bool, SetError> {
        Ok(self.u.vertices()?.iter().all(|v| v.amax() == 0.0) || self.b.amax() == 0.0)
    }
}
