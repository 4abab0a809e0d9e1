//! Bounds for complex eigenvalue pairs along the rotating directions
//! `ψ^l_j`, which repeat with period `M`.

use nalgebra::DVector;

use super::real::growth_ratio;
use super::{check_k, BoundError, Direction, Result};
use crate::spectral::{rotate_pair, BlockKind, JordanBlock};
use crate::system::LinearSystem;

/// Rotation data `(ρ, θ, M, φ_1, φ_2)` of an eigenplane.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatingFrame {
    pub rho: f64,
    pub theta: f64,
    pub period: usize,
    pub phi1: DVector<f64>,
    pub phi2: DVector<f64>,
}

impl RotatingFrame {
    pub fn from_block(block: &JordanBlock) -> Result<Self> {
        if block.kind != BlockKind::ComplexPair {
            return Err(crate::spectral::SpectralError::WrongBlockKind { expected: "complex" }.into());
        }
        let period = block.period.ok_or(BoundError::IrrationalAngle)? as usize;
        Self::explicit(block.rho, block.theta, period, block.phi[0].clone(), block.phi[1].clone())
    }

    /// Any frame, including `θ = 0` with period 1.
    pub fn explicit(rho: f64, theta: f64, period: usize, phi1: DVector<f64>, phi2: DVector<f64>) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(BoundError::ZeroModulus);
        }
        if period == 0 {
            return Err(BoundError::IrrationalAngle);
        }
        Ok(Self { rho, theta, period, phi1, phi2 })
    }

    pub fn psi(&self, j: usize, l: usize) -> Result<DVector<f64>> {
        Ok(rotate_pair(&self.phi1, &self.phi2, self.theta, j, l % self.period)?)
    }
}

/// Supports of `X`, `-BU`, `W̄` along `±ψ^l_j` for one period.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatingSupports {
    pub rho: f64,
    pub period: usize,
    /// `[j-1][sign][l]`, sign 0 for `+ψ`, 1 for `-ψ`.
    hx: [[Vec<f64>; 2]; 2],
    hbu: [[Vec<f64>; 2]; 2],
    hw: [[Vec<f64>; 2]; 2],
}

impl RotatingSupports {
    pub fn new(sys: &LinearSystem, frame: &RotatingFrame) -> Result<Self> {
        let m = frame.period;
        let mut hx: [[Vec<f64>; 2]; 2] = Default::default();
        let mut hbu: [[Vec<f64>; 2]; 2] = Default::default();
        let mut hw: [[Vec<f64>; 2]; 2] = Default::default();
        for j in 0..2 {
            for sign in 0..2 {
                for l in 0..m {
                    let mut z = frame.psi(j + 1, l)?;
                    if sign == 1 {
                        z = -z;
                    }
                    hx[j][sign].push(sys.h_x(&z)?);
                    hbu[j][sign].push(sys.h_neg_bu(&z)?);
                    hw[j][sign].push(sys.h_w(&z)?);
                }
            }
        }
        Ok(Self { rho: frame.rho, period: m, hx, hbu, hw })
    }

    /// `α^c_k(±ψ^{l0}_j)`; `None` where `h_W̄` vanishes.
    fn value(&self, j: usize, sign: usize, l0: usize, k: usize) -> Option<f64> {
        let hw = self.hw[j][sign][l0];
        if !(hw > 0.0) {
            return None;
        }
        let hx = self.hx[j][sign][(l0 + k) % self.period];
        Some(growth_ratio(self.rho, hx, self.hbu[j][sign][l0], hw, k))
    }

    fn limit(&self, j: usize, sign: usize, l0: usize, l: usize) -> Option<f64> {
        let hw = self.hw[j][sign][l0];
        if !(hw > 0.0) {
            return None;
        }
        let hbu = self.hbu[j][sign][l0];
        Some(if self.rho >= 1.0 {
            hbu / (self.rho * hw)
        } else {
            (1.0 - self.rho) * self.hx[j][sign][l] / hw + hbu / hw
        })
    }

    /// `min_l ρ h_X(±ψ^l_j) > max_l h_{-BU}(±ψ^l_j)` for both `j` and signs.
    pub fn limit_hypothesis(&self) -> bool {
        (0..2).all(|j| {
            (0..2).all(|s| {
                let lo = self.hx[j][s].iter().copied().fold(f64::INFINITY, f64::min) * self.rho;
                let hi = self.hbu[j][s].iter().copied().fold(f64::NEG_INFINITY, f64::max);
                lo > hi
            })
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexValue {
    pub bar: f64,
    pub plus: f64,
    pub minus: f64,
    pub j: usize,
    pub l0: usize,
}

impl ComplexValue {
    pub fn direction(&self) -> Direction {
        Direction::Rotating { j: self.j, l0: self.l0 }
    }
}

/// `ᾱ^c_k = min_{j, l0} max{α^c_k(+ψ^{l0}_j), α^c_k(-ψ^{l0}_j)}` with the
/// minimizing `(j, l0)`.
pub fn alpha_c_k(s: &RotatingSupports, k: usize) -> Result<ComplexValue> {
    check_k(k)?;
    let mut best: Option<ComplexValue> = None;
    for j in 0..2 {
        for l0 in 0..s.period {
            let (Some(p), Some(m)) = (s.value(j, 0, l0, k), s.value(j, 1, l0, k)) else {
                continue;
            };
            let bar = p.max(m);
            if best.is_none_or(|b| bar < b.bar) {
                best = Some(ComplexValue { bar, plus: p, minus: m, j: j + 1, l0 });
            }
        }
    }
    best.ok_or(BoundError::DegenerateDirection)
}

/// `inf_k ᾱ^c_k` from the limit formula when the hypothesis holds.
/// Otherwise `HypothesisViolated` with the minimum over `k <= 10 M`.
pub fn alpha_c_inf(s: &RotatingSupports) -> Result<f64> {
    if !s.limit_hypothesis() {
        let mut fallback = f64::INFINITY;
        for k in 1..=10 * s.period {
            fallback = fallback.min(alpha_c_k(s, k)?.bar);
        }
        return Err(BoundError::HypothesisViolated { fallback: Some(fallback) });
    }
    let mut best = f64::INFINITY;
    for j in 0..2 {
        for l0 in 0..s.period {
            for l in 0..s.period {
                if let (Some(p), Some(m)) = (s.limit(j, 0, l0, l), s.limit(j, 1, l0, l)) {
                    best = best.min(p.max(m));
                }
            }
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(BoundError::DegenerateDirection)
    }
}
