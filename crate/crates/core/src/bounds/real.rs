//! Bounds along eigenvectors of real positive eigenvalues and along the
//! first generalized eigenvector of a Jordan chain.

use nalgebra::DVector;
use serde::Serialize;

use super::series::{geom_sum_deriv_scaled, geom_sum_scaled, scale_exponent};
use super::{check_k, compare, non_increasing, BoundError, Classification, PairValue, Result, SupportTriple, SERIES_TOL};
use crate::system::LinearSystem;

fn check_positive(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(BoundError::NonPositiveEigenvalue(lambda))
    }
}

/// `(h_X + s_{0,k-2}(x) h_{-BU}) / (s_{0,k-1}(x) h_W)`, numerator and
/// denominator rescaled by `x^{-(k-1)}` when `x > 1`.
pub(crate) fn growth_ratio(x: f64, hx: f64, hbu: f64, hw: f64, k: usize) -> f64 {
    let k = k as i64;
    let r = scale_exponent(x, k - 1);
    let num = hx * (1.0 / x).powi(r as i32) + geom_sum_scaled(k - 2, x, r) * hbu;
    let den = geom_sum_scaled(k - 1, x, r) * hw;
    num / den
}

/// `α⁺_k(±φ)` and their maximum.
pub fn alpha_plus_k(lambda: f64, t: &SupportTriple, k: usize) -> Result<PairValue> {
    check_positive(lambda)?;
    check_k(k)?;
    t.check_w()?;
    Ok(PairValue::new(
        growth_ratio(lambda, t.hx_plus, t.hbu_plus, t.hw_plus, k),
        growth_ratio(lambda, t.hx_minus, t.hbu_minus, t.hw_minus, k),
    ))
}

/// Monotonicity of `α⁺_k(+φ)` and `α⁺_k(-φ)` in `k`, from `λ h_X` versus
/// `h_{-BU}`.
pub fn alpha_plus_classify(lambda: f64, t: &SupportTriple) -> (Classification, Classification) {
    (compare(lambda * t.hx_plus, t.hbu_plus), compare(lambda * t.hx_minus, t.hbu_minus))
}

fn plus_limit(lambda: f64, hx: f64, hbu: f64, hw: f64) -> f64 {
    if lambda >= 1.0 {
        hbu / (lambda * hw)
    } else {
        (1.0 - lambda) * hx / hw + hbu / hw
    }
}

/// `inf_k ᾱ⁺_k` when both directions are non-increasing.
///
/// Otherwise `HypothesisViolated`, with `ᾱ⁺_1` as fallback when both
/// directions are non-decreasing (the infimum is then attained at `k = 1`).
pub fn alpha_plus_inf(lambda: f64, t: &SupportTriple) -> Result<f64> {
    check_positive(lambda)?;
    t.check_w()?;
    let (cp, cm) = alpha_plus_classify(lambda, t);
    if non_increasing(cp) && non_increasing(cm) {
        return Ok(plus_limit(lambda, t.hx_plus, t.hbu_plus, t.hw_plus)
            .max(plus_limit(lambda, t.hx_minus, t.hbu_minus, t.hw_minus)));
    }
    let non_decreasing = |c| matches!(c, Classification::Increasing | Classification::Constant);
    let fallback = if non_decreasing(cp) && non_decreasing(cm) { Some(alpha_plus_k(lambda, t, 1)?.bar) } else { None };
    Err(BoundError::HypothesisViolated { fallback })
}

/// Lower bound `max_i { h_Y(z_i) - Σ_{j≠i} h_{-Y}(z_j) }` on `h_Y(Σ z_i)`,
/// from pairs `(h_Y(z_i), h_{-Y}(z_i))`.
pub fn support_sum_lower_bound(values: &[(f64, f64)]) -> f64 {
    let total: f64 = values.iter().map(|v| v.1).sum();
    values.iter().map(|&(h, hneg)| h - (total - hneg)).fold(f64::NEG_INFINITY, f64::max)
}

/// `f(l) = λ^l h_W(φ_2) - l λ^{l-1} h_W(φ_1)` and its root `l*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossover {
    pub lambda: f64,
    pub hw_phi2: f64,
    pub hw_phi1: f64,
    pub l_star: f64,
}

impl Crossover {
    pub fn f(&self, l: f64) -> f64 {
        self.lambda.powf(l) * self.hw_phi2 - l * self.lambda.powf(l - 1.0) * self.hw_phi1
    }

    /// `f(l) λ^{-r}`, finite for large `l` and `r`.
    fn f_scaled(&self, l: i64, r: i64) -> f64 {
        let lam = self.lambda;
        let p = lam.powi((l - r) as i32);
        let q = if l == 0 { 0.0 } else { l as f64 * lam.powi((l - 1 - r) as i32) };
        p * self.hw_phi2 - q * self.hw_phi1
    }

    /// `⌊l*⌋ + 1`: the number of leading nonnegative terms of `f`.
    pub fn split(&self) -> i64 {
        self.l_star.floor() as i64 + 1
    }
}

pub fn f_crossover(lambda: f64, hw_phi2: f64, hw_phi1: f64) -> Crossover {
    Crossover { lambda, hw_phi2, hw_phi1, l_star: lambda * hw_phi2 / hw_phi1 }
}

/// Supports along `±φ_2` and `±φ_1` of a chain with symmetric `W̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainSupports {
    pub hx2_plus: f64,
    pub hx2_minus: f64,
    pub hbu2_plus: f64,
    pub hbu2_minus: f64,
    pub hbu1_plus: f64,
    pub hbu1_minus: f64,
    pub hw2: f64,
    pub hw1: f64,
}

impl ChainSupports {
    /// Requires `W̄` symmetric; checked on the two chain directions and on
    /// the set itself.
    pub fn along(sys: &LinearSystem, phi1: &DVector<f64>, phi2: &DVector<f64>) -> Result<Self> {
        if !sys.wbar.is_symmetric(1e-9)? {
            return Err(BoundError::AsymmetricW);
        }
        let (n1, n2) = (-phi1, -phi2);
        Ok(Self {
            hx2_plus: sys.h_x(phi2)?,
            hx2_minus: sys.h_x(&n2)?,
            hbu2_plus: sys.h_neg_bu(phi2)?,
            hbu2_minus: sys.h_neg_bu(&n2)?,
            hbu1_plus: sys.h_neg_bu(phi1)?,
            hbu1_minus: sys.h_neg_bu(&n1)?,
            hw2: sys.h_w(phi2)?,
            hw1: sys.h_w(phi1)?,
        })
    }

    pub fn symmetric(hx2: f64, hbu2: f64, hbu1: f64, hw2: f64, hw1: f64) -> Self {
        Self { hx2_plus: hx2, hx2_minus: hx2, hbu2_plus: hbu2, hbu2_minus: hbu2, hbu1_plus: hbu1, hbu1_minus: hbu1, hw2, hw1 }
    }

    fn sides(&self) -> [(f64, f64, f64); 2] {
        [(self.hx2_plus, self.hbu2_plus, self.hbu1_plus), (self.hx2_minus, self.hbu2_minus, self.hbu1_minus)]
    }
}

/// Numerator and denominator, both scaled by `λ^{-r}`, via closed forms.
fn beta_closed(lambda: f64, hx2: f64, hbu2: f64, hbu1: f64, c: &Crossover, k: i64, r: i64) -> (f64, f64) {
    let num = hx2 * (1.0 / lambda).powi(r as i32)
        + geom_sum_scaled(k - 2, lambda, r) * hbu2
        + geom_sum_deriv_scaled(k - 2, lambda, r) * hbu1;
    let m = c.split();
    let full = geom_sum_scaled(k - 1, lambda, r) * c.hw_phi2 - geom_sum_deriv_scaled(k - 1, lambda, r) * c.hw_phi1;
    let den = if k <= m {
        full
    } else {
        let head = geom_sum_scaled(m - 1, lambda, r) * c.hw_phi2 - geom_sum_deriv_scaled(m - 1, lambda, r) * c.hw_phi1;
        2.0 * head - full
    };
    (num, den)
}

/// Numerator and denominator by summing the defining series term by term.
fn beta_series(lambda: f64, hx2: f64, hbu2: f64, hbu1: f64, c: &Crossover, k: i64, r: i64) -> (f64, f64) {
    let mut num = hx2 * (1.0 / lambda).powi(r as i32);
    for l in 0..=k - 2 {
        let p = lambda.powi((l - r) as i32);
        let q = if l == 0 { 0.0 } else { l as f64 * lambda.powi((l - 1 - r) as i32) };
        num += p * hbu2 + q * hbu1;
    }
    let den: f64 = (0..k).map(|l| c.f_scaled(l, r).abs()).sum();
    (num, den)
}

fn beta_generic(
    lambda: f64,
    s: &ChainSupports,
    k: usize,
    eval: fn(f64, f64, f64, f64, &Crossover, i64, i64) -> (f64, f64),
) -> Result<PairValue> {
    check_positive(lambda)?;
    check_k(k)?;
    if !(s.hw1 > 0.0 && s.hw2 > 0.0) {
        return Err(BoundError::DegenerateDirection);
    }
    let c = f_crossover(lambda, s.hw2, s.hw1);
    let k = k as i64;
    let r = scale_exponent(lambda, k - 1);
    let mut out = [0.0; 2];
    for (o, (hx2, hbu2, hbu1)) in out.iter_mut().zip(s.sides()) {
        let (num, den) = eval(lambda, hx2, hbu2, hbu1, &c, k, r);
        if !(den > 0.0) {
            return Err(BoundError::NonPositiveDenominator(den));
        }
        *o = num / den;
    }
    Ok(PairValue::new(out[0], out[1]))
}

/// `β⁺_k(±φ_2)` and their maximum, by the piecewise closed form. The
/// result is checked against direct series summation.
pub fn beta_plus_k(lambda: f64, s: &ChainSupports, k: usize) -> Result<PairValue> {
    let closed = beta_generic(lambda, s, k, beta_closed)?;
    let direct = beta_generic(lambda, s, k, beta_series)?;
    for (a, b) in [(closed.plus, direct.plus), (closed.minus, direct.minus)] {
        if (a - b).abs() > SERIES_TOL * a.abs().max(b.abs()) {
            return Err(BoundError::SeriesMismatch { closed: a, direct: b });
        }
    }
    Ok(closed)
}

/// `β⁺_k(±φ_2)` by direct series summation only.
pub fn beta_plus_k_direct(lambda: f64, s: &ChainSupports, k: usize) -> Result<PairValue> {
    beta_generic(lambda, s, k, beta_series)
}
