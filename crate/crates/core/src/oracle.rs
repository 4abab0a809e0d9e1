//! Exact backwards reachability in the plane.
//!
//! The iterates `C_k`, the outer sets `T_k` and `S_k`, and the critical
//! scaling `α*_k` found by bisection on the emptiness of `C_k`. Everything
//! here runs on [`Polygon`]s, so only `n = 2` is supported.

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::Serialize;
use thiserror::Error;

use crate::sets::{probe_directions, ConvexSet, Point, Polygon, SetError, VPolytope, FEAS_TOL};
use crate::system::LinearSystem;

/// Vertex budget per iterate.
pub const COMPLEXITY_CAP: usize = 512;
/// Slack of the vertex containment checks.
pub const NEST_TOL: f64 = 1e-9;
pub const DEFAULT_ALPHA_TOL: f64 = 1e-4;
/// Number of monotonicity spot checks per bisection.
pub const SPOT_CHECKS: usize = 10;
/// Support agreement required by [`autonomous_equality_check`].
pub const EQUALITY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("reachability oracle needs n = 2, got n = {0}")]
    DimensionUnsupported(usize),
    #[error("A is singular (|det| = {0:e})")]
    SingularMatrix(f64),
    #[error("C_{k} has {vertices} vertices, more than the cap of {COMPLEXITY_CAP}")]
    ComplexityCap { k: usize, vertices: usize },
    #[error("C_{k} is not empty at alpha_hi = {alpha_hi}")]
    UpperBoundNotEmpty { k: usize, alpha_hi: f64 },
    #[error("emptiness of C_{k} is not monotone: empty at alpha = {empty}, nonempty at alpha = {nonempty}")]
    MonotonicityViolation { k: usize, empty: f64, nonempty: f64 },
    #[error("alpha must be finite and nonnegative, got {0}")]
    InvalidAlpha(f64),
    #[error("bisection tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("U must be {{0}}")]
    NotAutonomous,
    #[error(transparent)]
    Set(#[from] SetError),
}

pub type Result<T> = std::result::Result<T, OracleError>;

fn pt(v: &DVector<f64>) -> Point {
    Point::new(v[0], v[1])
}

fn to_set(p: &Polygon) -> ConvexSet {
    VPolytope::from_polygon(p).into()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(OracleError::InvalidAlpha(alpha))
    }
}

/// Planar data of a system, computed once per run.
#[derive(Debug, Clone)]
struct Plane {
    a: Matrix2<f64>,
    x_normals: Vec<Point>,
    x_offsets: Vec<f64>,
    x: Polygon,
    neg_bu: Polygon,
    wbar: Polygon,
}

impl Plane {
    fn new(sys: &LinearSystem) -> Result<Self> {
        let n = sys.n();
        if n != 2 {
            return Err(OracleError::DimensionUnsupported(n));
        }
        let a = Matrix2::new(sys.a[(0, 0)], sys.a[(0, 1)], sys.a[(1, 0)], sys.a[(1, 1)]);
        let det = a.determinant();
        if det.abs() < 1e-12 {
            return Err(OracleError::SingularMatrix(det));
        }
        let x = sys.x.polygon()?.ok_or(SetError::EmptySet)?;
        let (x_normals, x_offsets) = x.halfplanes();
        let neg_bu = sys.neg_bu()?.polygon()?.ok_or(SetError::EmptySet)?;
        let wbar = sys.wbar.polygon()?.ok_or(SetError::EmptySet)?;
        Ok(Self { a, x_normals, x_offsets, x, neg_bu, wbar })
    }

    /// `h_{M W̄}(z) = h_W̄(Mᵀz)`.
    fn h_w_image(&self, m: &Matrix2<f64>, z: &Point) -> f64 {
        self.wbar.support(&(m.transpose() * z))
    }

    fn image(p: &Polygon, m: &Matrix2<f64>) -> Polygon {
        let pts: Vec<Point> = p.vertices().iter().map(|v| m * v).collect();
        Polygon::hull(&pts).expect("nonempty polygon")
    }

    /// `P ⊖ αMW̄`, exact because erosion acts row by row on any
    /// half-plane description of `P`.
    fn erode(&self, p: &Polygon, m: &Matrix2<f64>, alpha: f64) -> Option<Polygon> {
        let (normals, mut offsets) = p.halfplanes();
        if alpha > 0.0 {
            for (n, g) in normals.iter().zip(offsets.iter_mut()) {
                *g -= alpha * self.h_w_image(m, n);
            }
        }
        Polygon::from_halfplanes(&normals, &offsets, FEAS_TOL).expect("erosion of a bounded set is bounded")
    }

    fn step(&self, c: &Polygon, alpha: f64) -> Option<Polygon> {
        let eroded = self.erode(c, &Matrix2::identity(), alpha)?;
        let sum = eroded.minkowski_sum(&self.neg_bu);
        let (normals, offsets) = sum.halfplanes();
        let at = self.a.transpose();
        let mut all_n: Vec<Point> = normals.iter().map(|n| at * n).collect();
        let mut all_g = offsets;
        all_n.extend_from_slice(&self.x_normals);
        all_g.extend_from_slice(&self.x_offsets);
        Polygon::from_halfplanes(&all_n, &all_g, FEAS_TOL).expect("intersection with X is bounded")
    }
}

/// One step `C ↦ A⁻¹([C ⊖ αW̄] ⊕ (−BU)) ∩ X`; `None` when the result is empty.
pub fn c_step(sys: &LinearSystem, current: &ConvexSet, alpha: f64) -> Result<Option<ConvexSet>> {
    check_alpha(alpha)?;
    let plane = Plane::new(sys)?;
    let Some(c) = current.polygon()? else {
        return Ok(None);
    };
    Ok(plane.step(&c, alpha).map(|p| to_set(&p)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReachResult {
    /// `C_0 = X, C_1, …` up to the last nonempty iterate.
    pub sets: Vec<ConvexSet>,
    pub first_empty: Option<usize>,
    pub alpha: f64,
    /// Indices `k` where a vertex of `C_k` was found outside `C_{k-1}`.
    pub nesting_violations: Vec<usize>,
}

impl ReachResult {
    pub fn is_empty_at(&self, k: usize) -> bool {
        self.first_empty.is_some_and(|e| e <= k)
    }

    pub fn nested(&self) -> bool {
        self.nesting_violations.is_empty()
    }
}

fn nested_in(inner: &Polygon, outer: &Polygon) -> bool {
    let scale = outer.vertices().iter().map(|v| v.amax()).fold(1.0, f64::max);
    inner.vertices().iter().all(|v| outer.contains(v, NEST_TOL * scale))
}

fn run(plane: &Plane, alpha: f64, k_max: usize) -> Result<(Vec<Polygon>, Option<usize>, Vec<usize>)> {
    let mut sets = vec![plane.x.clone()];
    let mut violations = Vec::new();
    for k in 1..=k_max {
        let prev = sets.last().expect("C_0 present");
        let Some(next) = plane.step(prev, alpha) else {
            return Ok((sets, Some(k), violations));
        };
        if next.len() > COMPLEXITY_CAP {
            return Err(OracleError::ComplexityCap { k, vertices: next.len() });
        }
        if !nested_in(&next, prev) {
            violations.push(k);
        }
        sets.push(next);
    }
    Ok((sets, None, violations))
}

/// Iterates from `C_0 = X` until the first empty set or `k_max`.
pub fn c_sequence(sys: &LinearSystem, alpha: f64, k_max: usize) -> Result<ReachResult> {
    check_alpha(alpha)?;
    let plane = Plane::new(sys)?;
    let (polys, first_empty, nesting_violations) = run(&plane, alpha, k_max)?;
    Ok(ReachResult { sets: polys.iter().map(to_set).collect(), first_empty, alpha, nesting_violations })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TSequence {
    /// `T_0 = X, T_1, …`; `None` once empty.
    pub sets: Vec<Option<ConvexSet>>,
    pub first_empty: Option<usize>,
}

/// `T_{k+1} = (T_k ⊖ A^k αW̄) ⊕ A^k(−BU)` from `T_0 = X`.
pub fn t_sequence(sys: &LinearSystem, alpha: f64, k_max: usize) -> Result<TSequence> {
    check_alpha(alpha)?;
    let plane = Plane::new(sys)?;
    let mut sets = vec![Some(to_set(&plane.x))];
    let mut t = Some(plane.x.clone());
    let mut ak = Matrix2::identity();
    let mut first_empty = None;
    for k in 0..k_max {
        t = t.and_then(|p| plane.erode(&p, &ak, alpha)).map(|e| e.minkowski_sum(&Plane::image(&plane.neg_bu, &ak)));
        if t.is_none() && first_empty.is_none() {
            first_empty = Some(k + 1);
        }
        sets.push(t.as_ref().map(to_set));
        ak = plane.a * ak;
    }
    Ok(TSequence { sets, first_empty })
}

/// Checks `C_k ⊆ ∩_{l<=k} A^{-l} T_l` on the vertices of `C_k`, i.e.
/// `A^l v ∈ T_l`. Returns the first `(k, l)` that fails.
pub fn t_inclusion_check(sys: &LinearSystem, alpha: f64, k_max: usize) -> Result<Option<(usize, usize)>> {
    let c = c_sequence(sys, alpha, k_max)?;
    let t = t_sequence(sys, alpha, k_max)?;
    for (k, ck) in c.sets.iter().enumerate() {
        let verts = ck.vertices()?;
        let mut ak = DMatrix::identity(2, 2);
        for l in 0..=k {
            let Some(tl) = &t.sets[l] else {
                return Ok(Some((k, l)));
            };
            let poly = tl.polygon()?.expect("nonempty");
            let scale = poly.vertices().iter().map(|v| v.amax()).fold(1.0, f64::max);
            if !verts.iter().all(|v| poly.contains(&pt(&(&ak * v)), NEST_TOL * scale)) {
                return Ok(Some((k, l)));
            }
            ak = &sys.a * ak;
        }
    }
    Ok(None)
}

/// `S_k = X ⊕ [⊕_{l<=k-2} A^l(−BU)] ⊖ [⊕_{l<=k-1} A^l αW̄]` built
/// explicitly; `None` when empty.
pub fn s_set(sys: &LinearSystem, alpha: f64, k: usize) -> Result<Option<ConvexSet>> {
    check_alpha(alpha)?;
    let plane = Plane::new(sys)?;
    let mut sum = plane.x.clone();
    let mut ak = Matrix2::identity();
    for _ in 0..k.saturating_sub(1) {
        sum = sum.minkowski_sum(&Plane::image(&plane.neg_bu, &ak));
        ak = plane.a * ak;
    }
    let (normals, mut offsets) = sum.halfplanes();
    let mut ak = Matrix2::identity();
    for _ in 0..k {
        for (n, g) in normals.iter().zip(offsets.iter_mut()) {
            *g -= alpha * plane.h_w_image(&ak, n);
        }
        ak = plane.a * ak;
    }
    let s = Polygon::from_halfplanes(&normals, &offsets, FEAS_TOL).expect("bounded");
    Ok(s.as_ref().map(to_set))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SEmptiness {
    /// Upper bounds on `h_{S_k}(z)` and `h_{S_k}(-z)`.
    pub plus: f64,
    pub minus: f64,
    pub certified_empty: bool,
}

/// Upper bound `h_X(z) + Σ_{l<=k-2} h_{−BU}((A^l)ᵀz) − α Σ_{l<=k-1} h_W̄((A^l)ᵀz)`
/// on the support of `S_k`, for `z` and `-z`. Works in any dimension.
pub fn s_emptiness(sys: &LinearSystem, alpha: f64, k: usize, z: &DVector<f64>) -> Result<SEmptiness> {
    let bound = |z: &DVector<f64>| -> Result<f64> {
        let mut h = sys.h_x(z)?;
        let mut y = z.clone();
        for l in 0..k {
            if l + 1 < k {
                h += sys.h_neg_bu(&y)?;
            }
            h -= alpha * sys.h_w(&y)?;
            y = sys.a.transpose() * y;
        }
        Ok(h)
    };
    let plus = bound(z)?;
    let minus = bound(&-z)?;
    Ok(SEmptiness { plus, minus, certified_empty: plus < 0.0 && minus < 0.0 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalAlpha {
    pub k: usize,
    /// Midpoint of the final bracket.
    pub estimate: f64,
    /// Largest `α` seen with `C_k ≠ ∅`.
    pub lo: f64,
    /// Smallest `α` seen with `C_k = ∅`.
    pub hi: f64,
    pub iterations: usize,
}

fn empties(plane: &Plane, alpha: f64, k: usize) -> Result<bool> {
    Ok(run(plane, alpha, k)?.1.is_some())
}

/// `α*_k = inf{α >= 0 : C^α_k = ∅}` by bisection to width `tol`, starting
/// from `[0, alpha_hi]`. Monotonicity of emptiness in `α` is spot-checked
/// on [`SPOT_CHECKS`] sample points.
pub fn critical_alpha(sys: &LinearSystem, k: usize, tol: f64, alpha_hi: f64) -> Result<CriticalAlpha> {
    check_alpha(alpha_hi)?;
    if !(tol > 0.0) {
        return Err(OracleError::InvalidTolerance(tol));
    }
    let plane = Plane::new(sys)?;
    if !empties(&plane, alpha_hi, k)? {
        return Err(OracleError::UpperBoundNotEmpty { k, alpha_hi });
    }
    if empties(&plane, 0.0, k)? {
        return Ok(CriticalAlpha { k, estimate: 0.0, lo: 0.0, hi: 0.0, iterations: 0 });
    }
    let (mut lo, mut hi) = (0.0, alpha_hi);
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if empties(&plane, mid, k)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    let mut last: Option<(f64, bool)> = None;
    for i in 0..SPOT_CHECKS {
        let a = alpha_hi * (i as f64 + 0.5) / SPOT_CHECKS as f64;
        let e = empties(&plane, a, k)?;
        if (a <= lo && e) || (a >= hi && !e) {
            return Err(if e {
                OracleError::MonotonicityViolation { k, empty: a, nonempty: lo }
            } else {
                OracleError::MonotonicityViolation { k, empty: hi, nonempty: a }
            });
        }
        if let Some((pa, true)) = last {
            if !e {
                return Err(OracleError::MonotonicityViolation { k, empty: pa, nonempty: a });
            }
        }
        last = Some((a, e));
    }
    Ok(CriticalAlpha { k, estimate: 0.5 * (lo + hi), lo, hi, iterations })
}

/// Doubles `start` until `C_k` is empty; fails past `limit`.
pub fn find_upper_bracket(sys: &LinearSystem, k: usize, start: f64, limit: f64) -> Result<f64> {
    check_alpha(start)?;
    let plane = Plane::new(sys)?;
    let mut a = start.max(1e-3);
    while a <= limit {
        if empties(&plane, a, k)? {
            return Ok(a);
        }
        a *= 2.0;
    }
    Err(OracleError::UpperBoundNotEmpty { k, alpha_hi: limit })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaStarLimit {
    pub value: f64,
    /// The `α*_k` that were computed, `k = 1, 2, …`.
    pub per_k: Vec<f64>,
    /// First `k` of three consecutive changes below `tol`, if any.
    pub plateau_at: Option<usize>,
}

/// `α*_∞` estimated as `α*_{k_max}` with plateau detection.
pub fn alpha_star_inf(sys: &LinearSystem, k_max: usize, tol: f64, alpha_hi: f64) -> Result<AlphaStarLimit> {
    let mut per_k = Vec::with_capacity(k_max);
    let mut run_len = 0;
    let mut plateau_at = None;
    for k in 1..=k_max {
        let v = critical_alpha(sys, k, tol, alpha_hi)?.estimate;
        if let Some(&prev) = per_k.last() {
            let d: f64 = v - prev;
            run_len = if d.abs() < tol { run_len + 1 } else { 0 };
            if run_len == 3 && plateau_at.is_none() {
                plateau_at = Some(k - 3);
            }
        }
        per_k.push(v);
    }
    Ok(AlphaStarLimit { value: *per_k.last().unwrap_or(&f64::NAN), per_k, plateau_at })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityCheck {
    pub k: usize,
    pub equal: bool,
    pub both_empty: bool,
    pub max_deviation: f64,
}

/// With `U = {0}`, compares `C_k` against
/// `∩_{l=0..k} A^{-l}(X ⊖ ⊕_{j<l} A^j αW̄)` in 64 probe directions.
pub fn autonomous_equality_check(sys: &LinearSystem, alpha: f64, k: usize) -> Result<EqualityCheck> {
    if !sys.is_autonomous()? {
        return Err(OracleError::NotAutonomous);
    }
    let plane = Plane::new(sys)?;
    let (polys, first_empty, _) = run(&plane, alpha, k)?;
    let lhs = if first_empty.is_some() { None } else { polys.last().cloned() };

    let mut powers = vec![Matrix2::identity()];
    for l in 0..k {
        powers.push(plane.a * powers[l]);
    }
    let mut normals = Vec::new();
    let mut offsets = Vec::new();
    for (l, al) in powers.iter().enumerate() {
        for (n, g) in plane.x_normals.iter().zip(&plane.x_offsets) {
            let eroded: f64 = powers[..l].iter().map(|aj| alpha * plane.h_w_image(aj, n)).sum();
            normals.push(al.transpose() * n);
            offsets.push(g - eroded);
        }
    }
    let rhs = Polygon::from_halfplanes(&normals, &offsets, FEAS_TOL).expect("bounded");

    let probes = (0..64).map(|i| {
        let t = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
        Point::new(t.cos(), t.sin())
    });
    Ok(match (lhs, rhs) {
        (None, None) => EqualityCheck { k, equal: true, both_empty: true, max_deviation: 0.0 },
        (Some(l), Some(r)) => {
            let dev = probes.map(|z| (l.support(&z) - r.support(&z)).abs()).fold(0.0, f64::max);
            EqualityCheck { k, equal: dev <= EQUALITY_TOL, both_empty: false, max_deviation: dev }
        }
        _ => EqualityCheck { k, equal: false, both_empty: false, max_deviation: f64::INFINITY },
    })
}

/// Support-function distance between two nonempty planar sets over
/// [`probe_directions`].
pub fn support_distance(p: &ConvexSet, q: &ConvexSet) -> Result<f64> {
    let mut d: f64 = 0.0;
    for z in probe_directions(2) {
        d = d.max((p.support(&z)? - q.support(&z)?).abs());
    }
    Ok(d)
}
