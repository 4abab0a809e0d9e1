//! Real Jordan structure of `Aᵀ`.
//!
//! Each eigenvalue cluster of `A` becomes one or more [`JordanBlock`]s
//! carrying the left eigenvector chain `φ_1, φ_2, ...` that the bound
//! formulas evaluate supports along. Repeated eigenvalues need a declared
//! block structure; detecting it numerically is ill-posed.

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Eigenvalues closer than this are treated as one repeated eigenvalue.
pub const CLUSTER_TOL: f64 = 1e-7;
/// Residual accepted on the chain equations.
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const MAX_DIM: usize = 8;
pub const DEFAULT_MAX_DENOMINATOR: u32 = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix must be square and nonempty, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix dimension {0} exceeds the supported maximum of {MAX_DIM}")]
    UnsupportedSize(usize),
    #[error("eigenvalue {eig} has multiplicity {multiplicity}; declare its Jordan structure")]
    StructureRequired { eig: f64, multiplicity: usize },
    #[error("declared structure does not match the spectrum: {0}")]
    BadDeclaration(String),
    #[error("chain residual {residual:e} exceeds {RESIDUAL_TOL:e} for eigenvalue {eig}")]
    ResidualTooLarge { eig: f64, residual: f64 },
    #[error("index {index} out of range for block of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("operation needs a {expected} block")]
    WrongBlockKind { expected: &'static str },
    #[error("eigenvalue 0 is not supported by the bound formulas")]
    ZeroEigenvalueUnsupported,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    RealPositive,
    RealNegative,
    /// λ = 0. Kept so every eigenvalue has a block; no bound applies.
    RealZero,
    ComplexPair,
}

impl BlockKind {
    pub fn is_real(self) -> bool {
        !matches!(self, BlockKind::ComplexPair)
    }
}

/// `(eigenvalue, block size)` entry of a declared Jordan structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeclaredBlock {
    pub eig: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JordanBlock {
    pub kind: BlockKind,
    /// Real eigenvalue; for a complex pair the real part `ρ cos θ`.
    pub lambda: f64,
    /// Modulus of the eigenvalue.
    pub rho: f64,
    /// Argument in `(0, π)` for a complex pair, otherwise 0 or π.
    pub theta: f64,
    /// Block size; 2 for a complex pair.
    pub size: usize,
    /// Real kinds: the chain `φ_1..φ_size`. Complex kind: the pair `φ_1, φ_2`.
    pub phi: Vec<DVector<f64>>,
    pub angle_rational: Option<(u32, u32)>,
    pub period: Option<u32>,
}

impl JordanBlock {
    pub fn phi(&self, j: usize) -> Result<&DVector<f64>, SpectralError> {
        if j == 0 || j > self.phi.len() {
            return Err(SpectralError::IndexOutOfRange { index: j, size: self.phi.len() });
        }
        Ok(&self.phi[j - 1])
    }

    /// Eigenvalue as a complex number.
    pub fn eigenvalue(&self) -> Complex<f64> {
        match self.kind {
            BlockKind::ComplexPair => Complex::from_polar(self.rho, self.theta),
            _ => Complex::new(self.lambda, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub blocks: Vec<JordanBlock>,
    pub a: DMatrix<f64>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Reduced `(a, b)` with `|θ − aπ/b| < 1e-9`, found among the
/// continued-fraction convergents of `θ/π` with `b <= max_denominator`.
pub fn detect_rational_angle(theta: f64, max_denominator: u32) -> Option<(u32, u32)> {
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return None;
    }
    let x = theta / std::f64::consts::PI;
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let q = r.floor();
        let qi = q as u64;
        let h2 = qi * h1 + h0;
        let k2 = qi * k1 + k0;
        if k2 > max_denominator as u64 {
            break;
        }
        if h2 > 0 && (theta - h2 as f64 * std::f64::consts::PI / k2 as f64).abs() < 1e-9 {
            let g = gcd(h2 as u32, k2 as u32);
            return Some((h2 as u32 / g, k2 as u32 / g));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - q;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Period `M = 2b / gcd(a, 2b)` of the rotation by `aπ/b`.
pub fn rotation_period(a: u32, b: u32) -> u32 {
    2 * b / gcd(a, 2 * b)
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `(A^l)ᵀ φ_j = Σ_p C(l, p) λ^{l−p} φ_{j−p}`, with `j` 1-based.
pub fn power_direction(block: &JordanBlock, j: usize, l: usize) -> Result<DVector<f64>, SpectralError> {
    if !block.kind.is_real() {
        return Err(SpectralError::WrongBlockKind { expected: "real" });
    }
    block.phi(j)?;
    let mut out = DVector::zeros(block.phi[0].len());
    for p in 0..j.min(l + 1) {
        out += &block.phi[j - 1 - p] * (binom(l, p) * block.lambda.powi((l - p) as i32));
    }
    Ok(out)
}

/// `ψ^l_1 = cos(lθ)φ_1 − sin(lθ)φ_2`, `ψ^l_2 = cos(lθ)φ_2 + sin(lθ)φ_1`.
///
/// With a known period, `l` is reduced modulo it first so the result is
/// exactly periodic.
pub fn rotating_direction(block: &JordanBlock, j: usize, l: usize) -> Result<DVector<f64>, SpectralError> {
    if block.kind != BlockKind::ComplexPair {
        return Err(SpectralError::WrongBlockKind { expected: "complex" });
    }
    let l = block.period.map_or(l, |m| l % m as usize);
    rotate_pair(&block.phi[0], &block.phi[1], block.theta, j, l)
}

pub(crate) fn rotate_pair(
    phi1: &DVector<f64>,
    phi2: &DVector<f64>,
    theta: f64,
    j: usize,
    l: usize,
) -> Result<DVector<f64>, SpectralError> {
    let (s, c) = (l as f64 * theta).sin_cos();
    match j {
        1 => Ok(denoise(phi1 * c - phi2 * s)),
        2 => Ok(denoise(phi2 * c + phi1 * s)),
        _ => Err(SpectralError::IndexOutOfRange { index: j, size: 2 }),
    }
}

/// Orthonormal basis of the null space of `m` (relative singular-value cut).
fn null_space(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.max().max(1.0);
    let mut out = Vec::new();
    for i in 0..n {
        let sigma = if i < svd.singular_values.len() { svd.singular_values[i] } else { 0.0 };
        if sigma <= 1e-9 * smax {
            out.push(v_t.row(i).transpose());
        }
    }
    out
}

/// Orthonormal basis of the column space of `m`.
fn range_space(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return Vec::new();
    }
    (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > 1e-9 * smax.max(1.0))
        .map(|i| u.column(i).into_owned())
        .collect()
}

/// Normalize to unit length with the largest-magnitude component positive
/// (first index wins ties).
/// Zeroes components at roundoff level and snaps those within a few ulps of
/// a multiple of 2^-30, so that exact inputs give exact directions.
pub(crate) fn denoise(mut v: DVector<f64>) -> DVector<f64> {
    let m = v.amax();
    let grid = (1u64 << 30) as f64;
    for x in v.iter_mut() {
        if x.abs() <= 64.0 * f64::EPSILON * m {
            *x = 0.0;
        } else {
            let g = (*x * grid).round() / grid;
            if (g - *x).abs() <= 8.0 * f64::EPSILON * x.abs() {
                *x = g;
            }
        }
    }
    v
}

fn fix_sign(v: DVector<f64>) -> DVector<f64> {
    let v = v.normalize();
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    if v[best] < 0.0 {
        -v
    } else {
        v
    }
}

struct Cluster {
    value: Complex<f64>,
    multiplicity: usize,
}

fn cluster(eigs: &[Complex<f64>]) -> Vec<Cluster> {
    let mut out: Vec<(Complex<f64>, usize)> = Vec::new();
    for &e in eigs {
        if let Some(c) = out.iter_mut().find(|(v, m)| ((*v / *m as f64) - e).norm() < CLUSTER_TOL) {
            c.0 += e;
            c.1 += 1;
        } else {
            out.push((e, 1));
        }
    }
    out.into_iter()
        .map(|(sum, m)| {
            let mut value = sum / m as f64;
            if value.im.abs() < CLUSTER_TOL {
                value.im = 0.0;
            }
            Cluster { value, multiplicity: m }
        })
        .collect()
}

fn real_kind(lambda: f64) -> BlockKind {
    if lambda > 0.0 {
        BlockKind::RealPositive
    } else if lambda < 0.0 {
        BlockKind::RealNegative
    } else {
        BlockKind::RealZero
    }
}

/// Chains for one real eigenvalue with declared block sizes.
fn real_chains(at: &DMatrix<f64>, lambda: f64, sizes: &[usize]) -> Result<Vec<JordanBlock>, SpectralError> {
    let n = at.nrows();
    let nmat = at - DMatrix::identity(n, n) * lambda;
    let mut picked: Vec<DVector<f64>> = Vec::new();
    let mut blocks = Vec::new();
    let mut order: Vec<usize> = sizes.to_vec();
    order.sort_unstable_by(|a, b| b.cmp(a));
    for s in order {
        let mut power = DMatrix::identity(n, n);
        for _ in 1..s {
            power = &nmat * power;
        }
        let range = range_space(&power);
        if range.is_empty() {
            return Err(SpectralError::BadDeclaration(format!("no chain of length {s} for eigenvalue {lambda}")));
        }
        let q = DMatrix::from_columns(&range);
        let coeffs = null_space(&(&nmat * &q));
        // candidates for φ_1, made orthogonal to chains already chosen
        let mut head: Option<DVector<f64>> = None;
        for c in coeffs {
            let mut v = &q * c;
            for p in &picked {
                v -= p * p.dot(&v);
            }
            if v.norm() > 1e-6 {
                head = Some(denoise(fix_sign(v)));
                break;
            }
        }
        let Some(phi1) = head else {
            return Err(SpectralError::BadDeclaration(format!(
                "eigenvalue {lambda} has no independent chain of length {s}"
            )));
        };
        picked.push(phi1.clone());
        let mut chain = vec![phi1];
        let pinv = nmat.clone().pseudo_inverse(1e-10).map_err(|e| SpectralError::BadDeclaration(e.to_string()))?;
        for _ in 1..s {
            let prev = chain.last().unwrap();
            chain.push(denoise(&pinv * prev));
        }
        let mut residual = (&nmat * &chain[0]).norm();
        for j in 1..s {
            residual = residual.max((&nmat * &chain[j] - &chain[j - 1]).norm());
        }
        if residual > RESIDUAL_TOL {
            return Err(SpectralError::ResidualTooLarge { eig: lambda, residual });
        }
        blocks.push(JordanBlock {
            kind: real_kind(lambda),
            lambda,
            rho: lambda.abs(),
            theta: if lambda < 0.0 { std::f64::consts::PI } else { 0.0 },
            size: s,
            phi: chain,
            angle_rational: None,
            period: None,
        });
    }
    Ok(blocks)
}

fn complex_block(at: &DMatrix<f64>, mu: Complex<f64>) -> Result<JordanBlock, SpectralError> {
    let n = at.nrows();
    let cm = DMatrix::from_fn(n, n, |i, j| {
        Complex::new(at[(i, j)], 0.0) - if i == j { mu } else { Complex::new(0.0, 0.0) }
    });
    let svd = cm.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    // row of Vᴴ is the conjugate of the right singular vector
    let mut v: DVector<Complex<f64>> = v_t.row(imin).transpose().map(|c| c.conj());
    let mut best = 0;
    for i in 1..n {
        if v[i].norm() > v[best].norm() + 1e-12 {
            best = i;
        }
    }
    let phase = v[best].conj() / v[best].norm();
    v *= phase;
    let phi1 = v.map(|c| c.re);
    let phi2 = v.map(|c| -c.im);
    let scale = phi1.norm();
    let phi1 = denoise(phi1 / scale);
    let phi2 = denoise(phi2 / scale);
    let rho = mu.norm();
    let theta = mu.arg();
    let angle_rational = detect_rational_angle(theta, DEFAULT_MAX_DENOMINATOR);
    let period = angle_rational.map(|(a, b)| rotation_period(a, b));
    // (A^l)ᵀ[φ1 φ2] = ρ^l [φ1 φ2] R(lθ)
    let mut residual: f64 = 0.0;
    let mut p1 = phi1.clone();
    let mut p2 = phi2.clone();
    for l in 1..=3usize {
        p1 = at * &p1;
        p2 = at * &p2;
        let (s, c) = (l as f64 * theta).sin_cos();
        let rl = rho.powi(l as i32);
        let e1 = &p1 - (&phi1 * c + &phi2 * s) * rl;
        let e2 = &p2 - (&phi2 * c - &phi1 * s) * rl;
        residual = residual.max(e1.norm()).max(e2.norm());
    }
    if residual > RESIDUAL_TOL * rho.max(1.0).powi(3) {
        return Err(SpectralError::ResidualTooLarge { eig: rho, residual });
    }
    Ok(JordanBlock {
        kind: BlockKind::ComplexPair,
        lambda: mu.re,
        rho,
        theta,
        size: 2,
        phi: vec![phi1, phi2],
        angle_rational,
        period,
    })
}

/// Real Jordan blocks of `Aᵀ`.
///
/// Real blocks come first in decreasing eigenvalue order, then complex
/// pairs in decreasing modulus.
pub fn decompose(a: &DMatrix<f64>, declared: Option<&[DeclaredBlock]>) -> Result<SpectralDecomposition, SpectralError> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(SpectralError::NotSquare(a.nrows(), a.ncols()));
    }
    let n = a.nrows();
    if n > MAX_DIM {
        return Err(SpectralError::UnsupportedSize(n));
    }
    let at = a.transpose();
    let eigs: Vec<Complex<f64>> = a.complex_eigenvalues().iter().copied().collect();
    let mut clusters = cluster(&eigs);
    clusters.sort_by(|x, y| {
        let xr = (x.value.im == 0.0) as u8;
        let yr = (y.value.im == 0.0) as u8;
        yr.cmp(&xr)
            .then(y.value.re.total_cmp(&x.value.re).then(y.value.norm().total_cmp(&x.value.norm())))
    });
    let declared = declared.unwrap_or(&[]);
    let mut used = vec![false; declared.len()];
    let mut blocks = Vec::new();
    for c in &clusters {
        if c.value.im < 0.0 {
            continue;
        }
        if c.value.im > 0.0 {
            if c.multiplicity > 1 {
                return Err(SpectralError::StructureRequired { eig: c.value.norm(), multiplicity: c.multiplicity });
            }
            blocks.push(complex_block(&at, c.value)?);
            continue;
        }
        let mut sizes = Vec::new();
        let mut lambda = c.value.re;
        for (d, u) in declared.iter().zip(used.iter_mut()) {
            if (d.eig - c.value.re).abs() < CLUSTER_TOL.sqrt() {
                sizes.push(d.size);
                lambda = d.eig;
                *u = true;
            }
        }
        if sizes.is_empty() {
            if c.multiplicity > 1 {
                return Err(SpectralError::StructureRequired { eig: c.value.re, multiplicity: c.multiplicity });
            }
            sizes.push(1);
        }
        let total: usize = sizes.iter().sum();
        if total != c.multiplicity || sizes.contains(&0) {
            return Err(SpectralError::BadDeclaration(format!(
                "eigenvalue {} has multiplicity {}, declared sizes {:?}",
                c.value.re, c.multiplicity, sizes
            )));
        }
        blocks.extend(real_chains(&at, lambda, &sizes)?);
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(SpectralError::BadDeclaration(format!("declared eigenvalue {} not in spectrum", declared[i].eig)));
    }
    Ok(SpectralDecomposition { blocks, a: a.clone() })
}
