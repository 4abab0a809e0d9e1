//! Greedy disturbance attack along a real eigenvector of `Aᵀ`.
//!
//! With `ξ = φᵀx` the dynamics collapse to `ξ⁺ = λξ + υ + ω`, where the
//! defender controls `υ ∈ Υ = φᵀBU` and the attacker `ω ∈ αΩ̄ = αφᵀW̄`.
//! The attacker always plays the extreme `ω` that pushes `ξ` further from
//! zero.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::sets::{SetError, FEAS_TOL};
use crate::spectral::{JordanBlock, SpectralDecomposition};
use crate::system::LinearSystem;

/// Slack of the admissibility checks on emitted `u` and `w`.
pub const ADMISSIBLE_TOL: f64 = 1e-9;
/// Step budget when no analytic exit estimate exists.
pub const DEFAULT_MAX_STEPS: usize = 500;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AttackError {
    #[error("real block required")]
    RealBlockRequired,
    #[error("block index {0} out of range")]
    NoSuchBlock(usize),
    #[error("projection onto φ is degenerate: Ω̄ has zero width")]
    DegenerateProjection,
    #[error("ω = {omega} is outside αΩ̄ = [{lo}, {hi}]")]
    InfeasibleOmega { omega: f64, lo: f64, hi: f64 },
    #[error("alpha must be finite and nonnegative, got {0}")]
    InvalidAlpha(f64),
    #[error("x0 has length {got}, expected {expected}")]
    BadInitialState { expected: usize, got: usize },
    #[error("x0 is not in X")]
    InitialStateOutside,
    #[error(transparent)]
    Set(#[from] SetError),
}

pub type Result<T> = std::result::Result<T, AttackError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Scalar model of the dynamics along `φ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectedSystem {
    pub lambda: f64,
    pub phi: Vec<f64>,
    pub xi: Interval,
    pub upsilon: Interval,
    /// `Ω̄ = φᵀW̄`, before scaling by `α`.
    pub omega_bar: Interval,
    pub alpha: f64,
}

/// Builds `Ξ`, `Υ` and `Ω̄` from six support evaluations along `±φ`.
pub fn project(sys: &LinearSystem, block: &JordanBlock, alpha: f64) -> Result<ProjectedSystem> {
    if !block.kind.is_real() {
        return Err(AttackError::RealBlockRequired);
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(AttackError::InvalidAlpha(alpha));
    }
    let phi = &block.phi[0];
    let neg = -phi;
    let xi = Interval { lo: -sys.h_x(&neg)?, hi: sys.h_x(phi)? };
    let upsilon = Interval { lo: -sys.h_bu(&neg)?, hi: sys.h_bu(phi)? };
    let omega_bar = Interval { lo: -sys.h_w(&neg)?, hi: sys.h_w(phi)? };
    if omega_bar.width() <= 0.0 {
        return Err(AttackError::DegenerateProjection);
    }
    Ok(ProjectedSystem { lambda: block.lambda, phi: phi.iter().copied().collect(), xi, upsilon, omega_bar, alpha })
}

pub fn project_block(sys: &LinearSystem, spec: &SpectralDecomposition, block: usize, alpha: f64) -> Result<ProjectedSystem> {
    let b = spec.blocks.get(block).ok_or(AttackError::NoSuchBlock(block))?;
    project(sys, b, alpha)
}

impl ProjectedSystem {
    pub fn phi_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.phi)
    }

    /// `true` when the attacker pushes `ξ` upwards. For `λ < 0` the sign
    /// of `λξ` decides, since that is where `ξ` lands before `υ + ω` act.
    fn pushes_up(&self, xi: f64) -> bool {
        self.lambda * xi >= 0.0 || xi == 0.0
    }

    /// Attacker move and the defender's best reply.
    pub fn greedy_step(&self, xi: f64) -> GreedyStep {
        let (omega, upsilon) = if self.pushes_up(xi) {
            (self.alpha * self.omega_bar.hi, self.upsilon.lo)
        } else {
            (self.alpha * self.omega_bar.lo, self.upsilon.hi)
        };
        GreedyStep { omega, upsilon, xi_next: self.lambda * xi + upsilon + omega }
    }

    /// Net push per step against the worst-case defender, upwards and
    /// downwards.
    pub fn drift(&self) -> (f64, f64) {
        (self.alpha * self.omega_bar.hi + self.upsilon.lo, self.alpha * self.omega_bar.lo + self.upsilon.hi)
    }

    /// Step at which the worst-case recurrence from `xi0 >= 0` crosses
    /// `Ξ.hi`, if it ever does. Only for `λ > 0`.
    pub fn analytic_exit(&self, xi0: f64) -> Option<usize> {
        let l = self.lambda;
        let (d, _) = self.drift();
        if l <= 0.0 || xi0 < 0.0 {
            return None;
        }
        let h = self.xi.hi;
        if (l - 1.0).abs() < 1e-12 {
            if d <= 0.0 {
                return None;
            }
            return Some(((h - xi0) / d).floor() as usize + 1);
        }
        // ξ_k = λ^k (ξ0 + c) - c with c = d / (λ - 1)
        let c = d / (l - 1.0);
        let base = xi0 + c;
        if l < 1.0 || base <= 0.0 {
            return None;
        }
        let mut k = ((h + c) / base).ln() / l.ln();
        k = k.max(0.0);
        let mut k = k.floor() as usize;
        while l.powi(k as i32) * base - c <= h {
            k += 1;
        }
        Some(k)
    }

    /// `10·(analytic exit)` when `λ > 1`, otherwise [`DEFAULT_MAX_STEPS`].
    pub fn default_max_steps(&self, xi0: f64) -> usize {
        match self.analytic_exit(xi0) {
            Some(k) if self.lambda > 1.0 => 10 * k.max(1),
            _ => DEFAULT_MAX_STEPS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreedyStep {
    pub omega: f64,
    pub upsilon: f64,
    pub xi_next: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Scalar,
    FullState,
}

/// Moves applied at step `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Applied {
    pub u: Vec<f64>,
    pub w: Vec<f64>,
    pub upsilon: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackStep {
    pub k: usize,
    /// `x_k` in full-state mode, `[ξ_k]` in scalar mode.
    pub state: Vec<f64>,
    pub xi: f64,
    pub in_x: bool,
    /// `None` on the last recorded step.
    pub applied: Option<Applied>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackTrace {
    pub mode: Mode,
    pub steps: Vec<AttackStep>,
    /// First `k` with `ξ_k ∉ Ξ`.
    pub exit_step: Option<usize>,
    /// First `k` with `x_k ∉ X`. Equals `exit_step` in scalar mode.
    pub first_violation: Option<usize>,
}

impl AttackTrace {
    pub fn xi(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.xi).collect()
    }

    pub fn summary(&self, max_steps: usize) -> String {
        match (self.exit_step, self.first_violation) {
            (Some(e), Some(v)) if v < e => format!("exit at k={e} (x leaves X at k={v})"),
            (Some(e), _) => format!("exit at k={e}"),
            (None, Some(v)) => format!("no exit within {max_steps} (x leaves X at k={v})"),
            (None, None) => format!("no exit within {max_steps}"),
        }
    }
}

/// Greedy attacker against the worst-case defender on the scalar model.
/// Stops at the first `ξ ∉ Ξ`.
pub fn simulate_scalar(p: &ProjectedSystem, xi0: f64, max_steps: usize) -> AttackTrace {
    let mut steps = Vec::new();
    let mut xi = xi0;
    let mut exit = None;
    for k in 0..=max_steps {
        let inside = p.xi.contains(xi);
        if !inside {
            exit = Some(k);
        }
        let applied = if inside && k < max_steps {
            let g = p.greedy_step(xi);
            Some((g, Applied { u: vec![g.upsilon], w: vec![g.omega], upsilon: g.upsilon, omega: g.omega }))
        } else {
            None
        };
        steps.push(AttackStep { k, state: vec![xi], xi, in_x: inside, applied: applied.as_ref().map(|a| a.1.clone()) });
        match applied {
            Some((g, _)) => xi = g.xi_next,
            None => break,
        }
    }
    AttackTrace { mode: Mode::Scalar, steps, exit_step: exit, first_violation: exit }
}

/// A full-state disturbance `w ∈ αW̄` with `φᵀw = ω`: the vertex of `W̄`
/// maximizing `sign(ω)·φᵀw`, scaled along its ray.
pub fn lift_disturbance(sys: &LinearSystem, phi: &DVector<f64>, omega: f64, alpha: f64) -> Result<DVector<f64>> {
    let n = sys.n();
    if omega == 0.0 {
        return Ok(DVector::zeros(n));
    }
    let dir = if omega > 0.0 { phi.clone() } else { -phi };
    let verts = sys.wbar.vertices()?;
    let best = verts
        .iter()
        .max_by(|a, b| dir.dot(a).total_cmp(&dir.dot(b)))
        .expect("W̄ has vertices");
    let reach = alpha * phi.dot(best);
    let lo = -alpha * sys.h_w(&-phi)?;
    let hi = alpha * sys.h_w(phi)?;
    let tol = ADMISSIBLE_TOL * 1.0f64.max(hi.abs()).max(lo.abs());
    if omega > hi + tol || omega < lo - tol || reach == 0.0 {
        return Err(AttackError::InfeasibleOmega { omega, lo, hi });
    }
    let t = (omega / reach).min(1.0);
    Ok(best * (alpha * t))
}

/// Input policy of the defender in full-state simulation.
pub trait Defender {
    fn input(&mut self, sys: &LinearSystem, p: &ProjectedSystem, k: usize, x: &DVector<f64>) -> Result<DVector<f64>>;

    fn name(&self) -> &'static str;
}

/// Vertex of `U` that realizes the scalar defender reply `υ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ProjectedWorstCase;

impl Defender for ProjectedWorstCase {
    fn input(&mut self, sys: &LinearSystem, p: &ProjectedSystem, _k: usize, x: &DVector<f64>) -> Result<DVector<f64>> {
        let phi = p.phi_vector();
        let xi = phi.dot(x);
        let btphi = sys.b.transpose() * &phi;
        let dir = if p.pushes_up(xi) { -btphi } else { btphi };
        let verts = sys.u.vertices()?;
        Ok(verts.iter().max_by(|a, b| dir.dot(a).total_cmp(&dir.dot(b))).expect("U has vertices").clone())
    }

    fn name(&self) -> &'static str {
        "worst-case"
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroInput;

impl Defender for ZeroInput {
    fn input(&mut self, sys: &LinearSystem, _p: &ProjectedSystem, _k: usize, _x: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(DVector::zeros(sys.m()))
    }

    fn name(&self) -> &'static str {
        "zero"
    }
}

/// `u = Kx`, pulled back onto `U` along its ray when outside.
#[derive(Debug, Clone)]
pub struct SaturatingFeedback {
    pub gain: DMatrix<f64>,
}

impl SaturatingFeedback {
    /// Least-squares deadbeat gain `K = -(BᵀB)⁺BᵀA`.
    pub fn deadbeat(sys: &LinearSystem) -> Self {
        let bt = sys.b.transpose();
        let btb = &bt * &sys.b;
        let inv = btb.pseudo_inverse(1e-12).expect("pseudo-inverse");
        Self { gain: -(inv * bt * &sys.a) }
    }
}

impl Defender for SaturatingFeedback {
    fn input(&mut self, sys: &LinearSystem, _p: &ProjectedSystem, _k: usize, x: &DVector<f64>) -> Result<DVector<f64>> {
        let u = &self.gain * x;
        match sys.u.gauge(&u)? {
            Some(g) if g <= 1.0 => Ok(u),
            Some(g) => Ok(u / g),
            None => Ok(DVector::zeros(sys.m())),
        }
    }

    fn name(&self) -> &'static str {
        "saturating"
    }
}

/// Full-state rollout: the attacker lifts the greedy `ω` to `w ∈ αW̄`,
/// the defender picks `u ∈ U`. Runs until `ξ` leaves `Ξ` or `max_steps`.
pub fn simulate_fullstate(
    sys: &LinearSystem,
    p: &ProjectedSystem,
    x0: &DVector<f64>,
    max_steps: usize,
    defender: &mut dyn Defender,
) -> Result<AttackTrace> {
    if x0.len() != sys.n() {
        return Err(AttackError::BadInitialState { expected: sys.n(), got: x0.len() });
    }
    if !sys.x.contains(x0, FEAS_TOL)? {
        return Err(AttackError::InitialStateOutside);
    }
    let phi = p.phi_vector();
    let btphi = sys.b.transpose() * &phi;
    let mut x = x0.clone();
    let mut steps = Vec::new();
    let mut exit = None;
    let mut violation = None;
    for k in 0..=max_steps {
        let xi = phi.dot(&x);
        let in_x = sys.x.contains(&x, ADMISSIBLE_TOL)?;
        if !in_x && violation.is_none() {
            violation = Some(k);
        }
        let inside = p.xi.contains(xi);
        if !inside {
            exit = Some(k);
        }
        if !inside || k == max_steps {
            steps.push(AttackStep { k, state: x.iter().copied().collect(), xi, in_x, applied: None });
            break;
        }
        let g = p.greedy_step(xi);
        let w = lift_disturbance(sys, &phi, g.omega, p.alpha)?;
        let u = defender.input(sys, p, k, &x)?;
        let upsilon = btphi.dot(&u);
        steps.push(AttackStep {
            k,
            state: x.iter().copied().collect(),
            xi,
            in_x,
            applied: Some(Applied { u: u.iter().copied().collect(), w: w.iter().copied().collect(), upsilon, omega: phi.dot(&w) }),
        });
        x = &sys.a * &x + &sys.b * &u + &w;
    }
    Ok(AttackTrace { mode: Mode::FullState, steps, exit_step: exit, first_violation: violation })
}

/// Every emitted `u ∈ U` and `w ∈ αW̄`.
pub fn trace_admissible(sys: &LinearSystem, alpha: f64, trace: &AttackTrace) -> Result<bool> {
    let scaled = sys.wbar.scale(alpha)?;
    for s in &trace.steps {
        if let Some(a) = &s.applied {
            if trace.mode == Mode::Scalar {
                continue;
            }
            let u = DVector::from_column_slice(&a.u);
            let w = DVector::from_column_slice(&a.w);
            if !sys.u.contains(&u, ADMISSIBLE_TOL)? || !scaled.contains(&w, ADMISSIBLE_TOL)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `w = -Bu` is always available, i.e. `-BU ⊆ αW̄`, tested on the
/// vertices of `U`.
pub fn dos_feasible(sys: &LinearSystem, alpha: f64) -> Result<bool> {
    let scaled = sys.wbar.scale(alpha)?;
    for v in sys.u.vertices()? {
        if !scaled.contains(&-(&sys.b * v), ADMISSIBLE_TOL)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `α` with `-BU ⊆ αW̄`: the largest gauge of `-Bv` over the
/// vertices `v` of `U`. `None` if no scaling of `W̄` covers `-BU`.
pub fn dos_threshold(sys: &LinearSystem) -> Result<Option<f64>> {
    let mut t: f64 = 0.0;
    for v in sys.u.vertices()? {
        match sys.wbar.gauge(&-(&sys.b * v))? {
            Some(g) => t = t.max(g),
            None => return Ok(None),
        }
    }
    Ok(Some(t))
}
