//! Closed-form critical scaling bounds.
//!
//! Every bound is a ratio of support-function sums along a spectral
//! direction `z` of `Aᵀ`. A value `v` certifies that `C^α_k = ∅` for all
//! `α > v`. Values are always computed for `+z` and `-z` and the larger one
//! is reported.

pub mod aggregate;
pub mod complex;
pub mod negative;
pub mod real;
pub mod series;

use nalgebra::DVector;
use serde::Serialize;
use thiserror::Error;

use crate::sets::SetError;
use crate::spectral::SpectralError;
use crate::system::LinearSystem;

pub use aggregate::{best_bound, BestBound, PerK};
pub use complex::{alpha_c_inf, alpha_c_k, ComplexValue, RotatingFrame, RotatingSupports};
pub use negative::{alpha_minus_classify, alpha_minus_inf, alpha_minus_k, parity_limits, ParityClass};
pub use real::{
    alpha_plus_classify, alpha_plus_inf, alpha_plus_k, beta_plus_k, beta_plus_k_direct, f_crossover,
    support_sum_lower_bound, ChainSupports, Crossover,
};
pub use series::{geom_sum, geom_sum_deriv};

/// Tie tolerance of the monotonicity classifications.
pub const TIE_TOL: f64 = 1e-12;
/// Agreement required between closed-form and direct-series evaluation.
pub const SERIES_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("eigenvalue must be positive, got {0}")]
    NonPositiveEigenvalue(f64),
    #[error("eigenvalue must be negative, got {0}")]
    NonNegativeEigenvalue(f64),
    #[error("k must be at least 1")]
    InvalidK,
    #[error("denominator {0:e} is not positive")]
    NonPositiveDenominator(f64),
    #[error("W̄ must be symmetric for generalized-eigenvector bounds")]
    AsymmetricW,
    #[error("rotation angle is not a rational multiple of π (within tolerance)")]
    IrrationalAngle,
    #[error("complex pair with zero modulus")]
    ZeroModulus,
    #[error("support of W̄ vanishes along the bound direction")]
    DegenerateDirection,
    #[error("limit hypothesis does not hold")]
    HypothesisViolated { fallback: Option<f64> },
    #[error("closed form {closed:e} and direct series {direct:e} disagree")]
    SeriesMismatch { closed: f64, direct: f64 },
    #[error("no eigenvalue block admits a bound")]
    NoApplicableBlock,
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

pub type Result<T> = std::result::Result<T, BoundError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem {
    /// Real positive eigenvalue, eigenvector direction.
    T1,
    /// Real positive eigenvalue, generalized eigenvector direction.
    T3,
    /// Real negative eigenvalue.
    T4,
    /// Complex pair, rotating directions.
    T6,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::T1 => "T1",
            Theorem::T3 => "T3",
            Theorem::T4 => "T4",
            Theorem::T6 => "T6",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    Decreasing,
    Increasing,
    Constant,
    NonMonotone,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Justification {
    LimitFormula,
    K1Value,
    MinOverComputed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Infimum {
    pub value: f64,
    pub justification: Justification,
}

/// Value of a bound at one `k` along `+z` and `-z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairValue {
    pub plus: f64,
    pub minus: f64,
    pub bar: f64,
}

impl PairValue {
    pub fn new(plus: f64, minus: f64) -> Self {
        Self { plus, minus, bar: plus.max(minus) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundPoint {
    pub k: usize,
    pub plus: f64,
    pub minus: f64,
    pub bar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSequence {
    pub theorem: Theorem,
    /// Index into the spectral decomposition's block list.
    pub block: usize,
    pub direction: Direction,
    pub per_k: Vec<BoundPoint>,
    pub classification: Classification,
    pub infimum: Option<Infimum>,
}

impl BoundSequence {
    pub fn at(&self, k: usize) -> Option<&BoundPoint> {
        self.per_k.iter().find(|p| p.k == k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// `±φ_j` of a real block.
    Eigen { j: usize },
    /// `±ψ^{l0}_j` of a complex block; `j = 0, l0 = 0` before a minimizer
    /// is known.
    Rotating { j: usize, l0: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KStar {
    Finite(usize),
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaCertificate {
    pub alpha: f64,
    pub k_star: KStar,
    pub block: usize,
    pub theorem: Theorem,
    pub direction: Direction,
    pub justification: Justification,
}

/// Supports of `X`, `-BU` and `W̄` along `±z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportTriple {
    pub hx_plus: f64,
    pub hx_minus: f64,
    pub hbu_plus: f64,
    pub hbu_minus: f64,
    pub hw_plus: f64,
    pub hw_minus: f64,
}

impl SupportTriple {
    pub fn along(sys: &LinearSystem, z: &DVector<f64>) -> Result<Self> {
        let nz = -z;
        Ok(Self {
            hx_plus: sys.h_x(z)?,
            hx_minus: sys.h_x(&nz)?,
            hbu_plus: sys.h_neg_bu(z)?,
            hbu_minus: sys.h_neg_bu(&nz)?,
            hw_plus: sys.h_w(z)?,
            hw_minus: sys.h_w(&nz)?,
        })
    }

    /// Same supports for both signs.
    pub fn symmetric(hx: f64, hbu: f64, hw: f64) -> Self {
        Self { hx_plus: hx, hx_minus: hx, hbu_plus: hbu, hbu_minus: hbu, hw_plus: hw, hw_minus: hw }
    }

    /// The triple seen from `-z`.
    pub fn flipped(&self) -> Self {
        Self {
            hx_plus: self.hx_minus,
            hx_minus: self.hx_plus,
            hbu_plus: self.hbu_minus,
            hbu_minus: self.hbu_plus,
            hw_plus: self.hw_minus,
            hw_minus: self.hw_plus,
        }
    }

    pub(crate) fn check_w(&self) -> Result<()> {
        if self.hw_plus > 0.0 && self.hw_minus > 0.0 {
            Ok(())
        } else {
            Err(BoundError::DegenerateDirection)
        }
    }
}

pub(crate) fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(BoundError::InvalidK)
    } else {
        Ok(())
    }
}

/// Classification of a computed sequence from its values.
pub fn classify_values(values: &[f64]) -> Classification {
    if values.len() < 2 {
        return Classification::Unknown;
    }
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    if diffs.iter().all(|d| d.abs() <= TIE_TOL * 1.0f64.max(values[0].abs())) {
        Classification::Constant
    } else if diffs.iter().all(|d| *d < 0.0) {
        Classification::Decreasing
    } else if diffs.iter().all(|d| *d > 0.0) {
        Classification::Increasing
    } else {
        Classification::NonMonotone
    }
}

pub(crate) fn compare(lhs: f64, rhs: f64) -> Classification {
    if (lhs - rhs).abs() <= TIE_TOL * 1.0f64.max(lhs.abs()).max(rhs.abs()) {
        Classification::Constant
    } else if lhs > rhs {
        Classification::Decreasing
    } else {
        Classification::Increasing
    }
}

pub(crate) fn non_increasing(c: Classification) -> bool {
    matches!(c, Classification::Decreasing | Classification::Constant)
}
