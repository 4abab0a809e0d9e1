//! Compact convex sets and the support-function calculus on them.
//!
//! Three exact representations are supported: half-space polytopes
//! `{x : Fx <= g}`, vertex polytopes and axis-aligned boxes. Support
//! functions are evaluated exactly. Box and vertex form work in any
//! dimension; half-space form is converted to vertices, which is only
//! implemented in the plane.

pub mod polygon;

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, Vector2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use polygon::{Point, Polygon, HULL_TOL};
use polygon::ClipError;

/// Constraint slack accepted as feasible by emptiness tests.
pub const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SetError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("set is unbounded")]
    UnboundedSet,
    #[error("set is empty")]
    EmptySet,
    #[error("operation on half-space polytopes needs n = 2, got n = {0}")]
    UnsupportedDimension(usize),
    #[error("matrix is singular (|det| = {0:e})")]
    SingularMatrix(f64),
    #[error("invalid set: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, SetError>;

/// Half-space polytope `{x : Fx <= g}`.
#[derive(Debug, Clone)]
pub struct HPolytope {
    normals: DMatrix<f64>,
    offsets: DVector<f64>,
    planar: OnceLock<std::result::Result<Option<Polygon>, ClipError>>,
}

impl PartialEq for HPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.normals == other.normals && self.offsets == other.offsets
    }
}

impl HPolytope {
    pub fn new(normals: DMatrix<f64>, offsets: DVector<f64>) -> Result<Self> {
        if normals.nrows() != offsets.len() {
            return Err(SetError::DimensionMismatch { expected: normals.nrows(), got: offsets.len() });
        }
        if normals.iter().chain(offsets.iter()).any(|v| !v.is_finite()) {
            return Err(SetError::Invalid("non-finite constraint data".into()));
        }
        Ok(Self { normals, offsets, planar: OnceLock::new() })
    }

    pub fn from_rows(rows: &[Vec<f64>], offsets: &[f64]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(SetError::DimensionMismatch { expected: n, got: bad.len() });
        }
        let normals = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
        Self::new(normals, DVector::from_column_slice(offsets))
    }

    pub(crate) fn from_polygon(poly: &Polygon) -> Self {
        let (normals, offsets) = poly.halfplanes();
        let f = DMatrix::from_fn(normals.len(), 2, |i, j| normals[i][j]);
        let out = Self {
            normals: f,
            offsets: DVector::from_vec(offsets),
            planar: OnceLock::new(),
        };
        let _ = out.planar.set(Ok(Some(poly.clone())));
        out
    }

    pub fn dim(&self) -> usize {
        self.normals.ncols()
    }

    pub fn nrows(&self) -> usize {
        self.normals.nrows()
    }

    pub fn normals(&self) -> &DMatrix<f64> {
        &self.normals
    }

    pub fn offsets(&self) -> &DVector<f64> {
        &self.offsets
    }

    pub fn row(&self, i: usize) -> DVector<f64> {
        self.normals.row(i).transpose()
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        (0..self.nrows()).all(|i| self.normals.row(i).dot(&x.transpose()) <= self.offsets[i] + tol)
    }

    /// Vertex enumeration in the plane. `Ok(None)` when empty.
    pub fn polygon(&self) -> Result<Option<&Polygon>> {
        if self.dim() != 2 {
            return Err(SetError::UnsupportedDimension(self.dim()));
        }
        let cached = self.planar.get_or_init(|| {
            let normals: Vec<Point> = (0..self.nrows())
                .map(|i| Vector2::new(self.normals[(i, 0)], self.normals[(i, 1)]))
                .collect();
            let offsets: Vec<f64> = self.offsets.iter().copied().collect();
            Polygon::from_halfplanes(&normals, &offsets, FEAS_TOL)
        });
        match cached {
            Ok(p) => Ok(p.as_ref()),
            Err(ClipError::Unbounded) => Err(SetError::UnboundedSet),
        }
    }
}

/// Vertex polytope: convex hull of a nonempty finite point set.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    vertices: Vec<DVector<f64>>,
}

impl VPolytope {
    pub fn new(points: Vec<DVector<f64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(SetError::Invalid("vertex list is empty".into()));
        };
        let n = first.len();
        let mut vertices: Vec<DVector<f64>> = Vec::with_capacity(points.len());
        for p in points {
            if p.len() != n {
                return Err(SetError::DimensionMismatch { expected: n, got: p.len() });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(SetError::Invalid("non-finite vertex".into()));
            }
            if !vertices.iter().any(|q| (q - &p).amax() <= HULL_TOL) {
                vertices.push(p);
            }
        }
        Ok(Self { vertices })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| DVector::from_column_slice(r)).collect())
    }

    pub(crate) fn from_polygon(poly: &Polygon) -> Self {
        Self {
            vertices: poly.vertices().iter().map(|v| DVector::from_column_slice(v.as_slice())).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }
}

/// Axis-aligned box `{x : lower <= x <= upper}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSet {
    lower: DVector<f64>,
    upper: DVector<f64>,
}

impl BoxSet {
    pub fn new(lower: DVector<f64>, upper: DVector<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(SetError::DimensionMismatch { expected: lower.len(), got: upper.len() });
        }
        if lower.iter().zip(upper.iter()).any(|(l, u)| !(l.is_finite() && u.is_finite() && l <= u)) {
            return Err(SetError::Invalid("box bounds must be finite with lower <= upper".into()));
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> &DVector<f64> {
        &self.lower
    }

    pub fn upper(&self) -> &DVector<f64> {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn corners(&self) -> Vec<DVector<f64>> {
        let n = self.dim();
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0..(1usize << n) {
            out.push(DVector::from_fn(n, |j, _| if mask >> j & 1 == 1 { self.upper[j] } else { self.lower[j] }));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet {
    HPolytope(HPolytope),
    VPolytope(VPolytope),
    Box(BoxSet),
}

impl From<HPolytope> for ConvexSet {
    fn from(p: HPolytope) -> Self {
        ConvexSet::HPolytope(p)
    }
}

impl From<VPolytope> for ConvexSet {
    fn from(p: VPolytope) -> Self {
        ConvexSet::VPolytope(p)
    }
}

impl From<BoxSet> for ConvexSet {
    fn from(b: BoxSet) -> Self {
        ConvexSet::Box(b)
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(SetError::DimensionMismatch { expected, got })
    }
}

impl ConvexSet {
    /// Box from slices; convenient for fixtures.
    pub fn boxed(lower: &[f64], upper: &[f64]) -> Result<Self> {
        Ok(BoxSet::new(DVector::from_column_slice(lower), DVector::from_column_slice(upper))?.into())
    }

    /// Symmetric box `[-r, r]^n`.
    pub fn cube(n: usize, r: f64) -> Self {
        ConvexSet::Box(BoxSet { lower: DVector::from_element(n, -r), upper: DVector::from_element(n, r) })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::HPolytope(p) => p.dim(),
            ConvexSet::VPolytope(p) => p.dim(),
            ConvexSet::Box(b) => b.dim(),
        }
    }

    /// `h(z) = max { z·x : x in self }`.
    pub fn support(&self, z: &DVector<f64>) -> Result<f64> {
        check_dim(self.dim(), z.len())?;
        match self {
            ConvexSet::Box(b) => Ok(z
                .iter()
                .zip(b.lower.iter().zip(b.upper.iter()))
                .map(|(zj, (l, u))| (zj * l).max(zj * u))
                .sum()),
            ConvexSet::VPolytope(p) => {
                Ok(p.vertices.iter().map(|v| v.dot(z)).fold(f64::NEG_INFINITY, f64::max))
            }
            ConvexSet::HPolytope(p) => {
                let poly = p.polygon()?.ok_or(SetError::EmptySet)?;
                Ok(poly.support(&Vector2::new(z[0], z[1])))
            }
        }
    }

    /// Support of the linear image `M·self` in direction `z`, i.e.
    /// `h(Mᵀz)`; the image is never formed.
    pub fn support_of_image(&self, m: &DMatrix<f64>, z: &DVector<f64>) -> Result<f64> {
        check_dim(m.ncols(), self.dim())?;
        check_dim(m.nrows(), z.len())?;
        self.support(&(m.transpose() * z))
    }

    /// A point list whose hull is the set.
    pub fn vertices(&self) -> Result<Vec<DVector<f64>>> {
        match self {
            ConvexSet::Box(b) => Ok(b.corners()),
            ConvexSet::VPolytope(p) => Ok(p.vertices.clone()),
            ConvexSet::HPolytope(p) => {
                let poly = p.polygon()?.ok_or(SetError::EmptySet)?;
                Ok(poly.vertices().iter().map(|v| DVector::from_column_slice(v.as_slice())).collect())
            }
        }
    }

    /// Exact linear image `M·self` in vertex form.
    pub fn linear_image(&self, m: &DMatrix<f64>) -> Result<VPolytope> {
        check_dim(m.ncols(), self.dim())?;
        VPolytope::new(self.vertices()?.iter().map(|v| m * v).collect())
    }

    /// Half-space form. Boxes convert in any dimension, vertex polytopes
    /// only in the plane.
    pub fn to_hpolytope(&self) -> Result<HPolytope> {
        match self {
            ConvexSet::HPolytope(p) => Ok(p.clone()),
            ConvexSet::Box(b) => {
                let n = b.dim();
                let f = DMatrix::from_fn(2 * n, n, |i, j| {
                    if i / 2 != j {
                        0.0
                    } else if i % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                });
                let g = DVector::from_fn(2 * n, |i, _| if i % 2 == 0 { b.upper[i / 2] } else { -b.lower[i / 2] });
                HPolytope::new(f, g)
            }
            ConvexSet::VPolytope(p) => {
                if p.dim() != 2 {
                    return Err(SetError::UnsupportedDimension(p.dim()));
                }
                let poly = to_polygon_points(&p.vertices);
                Ok(HPolytope::from_polygon(&poly))
            }
        }
    }

    /// Planar vertex hull; `None` if the set is empty.
    pub fn polygon(&self) -> Result<Option<Polygon>> {
        if self.dim() != 2 {
            return Err(SetError::UnsupportedDimension(self.dim()));
        }
        match self {
            ConvexSet::HPolytope(p) => Ok(p.polygon()?.cloned()),
            _ => Ok(Some(to_polygon_points(&self.vertices()?))),
        }
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        match self {
            ConvexSet::Box(b) => Ok(x
                .iter()
                .zip(b.lower.iter().zip(b.upper.iter()))
                .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol)),
            ConvexSet::HPolytope(p) => Ok(p.contains(x, tol)),
            ConvexSet::VPolytope(p) => {
                if p.vertices.len() == 1 {
                    return Ok((&p.vertices[0] - x).amax() <= tol);
                }
                if p.vertices.len() == 2 {
                    return Ok(on_segment(&p.vertices[0], &p.vertices[1], x, tol));
                }
                if p.dim() != 2 {
                    return Err(SetError::UnsupportedDimension(p.dim()));
                }
                Ok(to_polygon_points(&p.vertices).contains(&Vector2::new(x[0], x[1]), tol))
            }
        }
    }

    /// Minkowski gauge `min { t >= 0 : x in t·self }`; `None` if no such
    /// finite `t` exists. Requires the origin in the set.
    pub fn gauge(&self, x: &DVector<f64>) -> Result<Option<f64>> {
        check_dim(self.dim(), x.len())?;
        if x.amax() <= HULL_TOL {
            return Ok(Some(0.0));
        }
        if let ConvexSet::VPolytope(p) = self {
            if p.vertices.len() <= 2 || p.dim() != 2 {
                return Ok(gauge_on_low_rank(p, x));
            }
            if let Some(poly) = self.polygon()? {
                if poly.len() <= 2 {
                    return Ok(gauge_on_low_rank(&VPolytope::from_polygon(&poly), x));
                }
            }
        }
        let h = self.to_hpolytope()?;
        let mut t: f64 = 0.0;
        for i in 0..h.nrows() {
            let fx = h.normals.row(i).transpose().dot(x);
            let g = h.offsets[i];
            if fx > HULL_TOL {
                if g <= HULL_TOL {
                    return Ok(None);
                }
                t = t.max(fx / g);
            }
        }
        Ok(Some(t))
    }

    /// Nonemptiness test. Boxes and vertex polytopes are never empty;
    /// half-space polytopes are tested in the plane with slack
    /// tolerance [`FEAS_TOL`].
    pub fn is_empty(&self) -> Result<bool> {
        match self {
            ConvexSet::HPolytope(p) => match p.polygon() {
                Ok(poly) => Ok(poly.is_none()),
                Err(SetError::UnboundedSet) => Ok(false),
                Err(e) => Err(e),
            },
            _ => Ok(false),
        }
    }

    /// Whether the set equals its reflection through the origin, probed
    /// on a fixed direction family.
    pub fn is_symmetric(&self, tol: f64) -> Result<bool> {
        if let ConvexSet::Box(b) = self {
            return Ok(b.lower.iter().zip(b.upper.iter()).all(|(l, u)| (l + u).abs() <= tol));
        }
        for z in probe_directions(self.dim()) {
            let neg = -&z;
            if (self.support(&z)? - self.support(&neg)?).abs() > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the origin is strictly interior (PC-set), probed on a fixed
    /// direction family for vertex form.
    pub fn contains_origin_in_interior(&self) -> Result<bool> {
        match self {
            ConvexSet::Box(b) => Ok(b.lower.iter().zip(b.upper.iter()).all(|(l, u)| *l < 0.0 && *u > 0.0)),
            ConvexSet::HPolytope(p) => {
                if p.dim() == 2 {
                    if p.polygon()?.is_none() {
                        return Ok(false);
                    }
                }
                Ok(p.offsets.iter().all(|g| *g > FEAS_TOL))
            }
            ConvexSet::VPolytope(p) => {
                if p.dim() == 2 {
                    let poly = to_polygon_points(&p.vertices);
                    return Ok(poly.len() >= 3 && poly.halfplanes().1.iter().all(|g| *g > FEAS_TOL));
                }
                let n = p.dim();
                let diffs = DMatrix::from_fn(n, p.vertices.len(), |i, j| p.vertices[j][i] - p.vertices[0][i]);
                if diffs.rank(1e-9) < n {
                    return Ok(false);
                }
                for z in probe_directions(self.dim()) {
                    if self.support(&z)? <= FEAS_TOL {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn contains_origin(&self) -> Result<bool> {
        self.contains(&DVector::zeros(self.dim()), FEAS_TOL)
    }

    /// Reflection `-self`.
    pub fn reflect(&self) -> Result<ConvexSet> {
        Ok(match self {
            ConvexSet::Box(b) => ConvexSet::Box(BoxSet { lower: -&b.upper, upper: -&b.lower }),
            ConvexSet::VPolytope(p) => {
                ConvexSet::VPolytope(VPolytope { vertices: p.vertices.iter().map(|v| -v).collect() })
            }
            ConvexSet::HPolytope(p) => {
                let f = -p.normals.clone();
                ConvexSet::HPolytope(HPolytope::new(f, p.offsets.clone())?)
            }
        })
    }

    /// `a·self` for `a >= 0`.
    pub fn scale(&self, a: f64) -> Result<ConvexSet> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(SetError::Invalid(format!("scale factor must be finite and >= 0, got {a}")));
        }
        Ok(match self {
            ConvexSet::Box(b) => ConvexSet::Box(BoxSet { lower: &b.lower * a, upper: &b.upper * a }),
            ConvexSet::VPolytope(p) => VPolytope::new(p.vertices.iter().map(|v| v * a).collect())?.into(),
            ConvexSet::HPolytope(p) => {
                if a == 0.0 {
                    VPolytope::new(vec![DVector::zeros(p.dim())])?.into()
                } else {
                    HPolytope::new(p.normals.clone(), &p.offsets * a)?.into()
                }
            }
        })
    }
}

fn to_polygon_points(points: &[DVector<f64>]) -> Polygon {
    let pts: Vec<Point> = points.iter().map(|v| Vector2::new(v[0], v[1])).collect();
    Polygon::hull(&pts).expect("nonempty point list")
}

fn on_segment(a: &DVector<f64>, b: &DVector<f64>, x: &DVector<f64>, tol: f64) -> bool {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 <= HULL_TOL * HULL_TOL {
        return (a - x).amax() <= tol;
    }
    let t = ((x - a).dot(&d) / len2).clamp(0.0, 1.0);
    (a + d * t - x).norm() <= tol
}

/// Gauge for a point or segment hull containing the origin.
fn gauge_on_low_rank(p: &VPolytope, x: &DVector<f64>) -> Option<f64> {
    match p.vertices.len() {
        1 => None,
        2 => {
            let (a, b) = (&p.vertices[0], &p.vertices[1]);
            // x must be a nonnegative multiple of a or b (origin lies on [a, b])
            let mut best: Option<f64> = None;
            for v in [a, b] {
                let vv = v.norm_squared();
                if vv <= HULL_TOL {
                    continue;
                }
                let t = x.dot(v) / vv;
                if t > 0.0 && (v * t - x).norm() <= 1e-9 * (1.0 + x.norm()) {
                    best = Some(best.map_or(t, |s: f64| s.min(t)));
                }
            }
            best
        }
        _ => None,
    }
}

/// Deterministic probe directions: dense angles in the plane, the
/// nonzero `{-1, 0, 1}^n` lattice otherwise.
pub fn probe_directions(n: usize) -> Vec<DVector<f64>> {
    if n == 2 {
        return (0..360)
            .map(|i| {
                let t = (i as f64) * std::f64::consts::PI / 180.0;
                DVector::from_vec(vec![t.cos(), t.sin()])
            })
            .collect();
    }
    let total = 3usize.pow(n as u32);
    (1..total)
        .map(|mut code| {
            DVector::from_fn(n, |_, _| {
                let d = (code % 3) as f64 - 1.0;
                code /= 3;
                d
            })
        })
        .filter(|z| z.amax() > 0.0)
        .collect()
}

/// Anything that can bound its own support function from above.
pub trait SupportBound {
    fn support_bound(&self, z: &DVector<f64>) -> Result<f64>;
}

impl SupportBound for ConvexSet {
    fn support_bound(&self, z: &DVector<f64>) -> Result<f64> {
        self.support(z)
    }
}

impl<F> SupportBound for F
where
    F: Fn(&DVector<f64>) -> f64,
{
    fn support_bound(&self, z: &DVector<f64>) -> Result<f64> {
        Ok(self(z))
    }
}

/// Sufficient emptiness certificate: both `h(z) < 0` and `h(-z) < 0`.
pub fn support_pair_negativity<S: SupportBound + ?Sized>(s: &S, z: &DVector<f64>) -> Result<bool> {
    let plus = s.support_bound(z)?;
    let minus = s.support_bound(&(-z))?;
    Ok(plus < 0.0 && minus < 0.0)
}

/// Erosion `p ⊖ w = {x : Fx <= g - h_w(F_i)}`. Rows are not pruned and the
/// result may be empty.
pub fn minkowski_diff(p: &HPolytope, w: &ConvexSet) -> Result<HPolytope> {
    check_dim(p.dim(), w.dim())?;
    let g = DVector::from_fn(p.nrows(), |i, _| 0.0 + p.offsets[i]);
    let mut g = g;
    for i in 0..p.nrows() {
        g[i] -= w.support(&p.row(i))?;
    }
    HPolytope::new(p.normals.clone(), g)
}

/// Planar Minkowski sum as the hull of all pairwise vertex sums.
pub fn minkowski_sum_2d(p: &ConvexSet, q: &ConvexSet) -> Result<VPolytope> {
    check_dim(2, p.dim())?;
    check_dim(2, q.dim())?;
    let a = p.polygon()?.ok_or(SetError::EmptySet)?;
    let b = q.polygon()?.ok_or(SetError::EmptySet)?;
    Ok(VPolytope::from_polygon(&a.minkowski_sum(&b)))
}

/// Preimage `A⁻¹(p) = {x : (F A) x <= g}` for invertible `A`.
pub fn preimage(a: &DMatrix<f64>, p: &HPolytope) -> Result<HPolytope> {
    if !a.is_square() {
        return Err(SetError::DimensionMismatch { expected: a.nrows(), got: a.ncols() });
    }
    check_dim(p.dim(), a.nrows())?;
    let det = a.determinant();
    if det.abs() < 1e-12 {
        return Err(SetError::SingularMatrix(det));
    }
    HPolytope::new(&p.normals * a, p.offsets.clone())
}

/// Intersection by row concatenation; in the plane, redundant rows are
/// removed through vertex enumeration.
pub fn intersect(p: &HPolytope, q: &HPolytope) -> Result<HPolytope> {
    check_dim(p.dim(), q.dim())?;
    let n = p.dim();
    let rows = p.nrows() + q.nrows();
    let f = DMatrix::from_fn(rows, n, |i, j| if i < p.nrows() { p.normals[(i, j)] } else { q.normals[(i - p.nrows(), j)] });
    let g = DVector::from_fn(rows, |i, _| if i < p.nrows() { p.offsets[i] } else { q.offsets[i - p.nrows()] });
    let raw = HPolytope::new(f, g)?;
    if n != 2 {
        return Ok(raw);
    }
    match raw.polygon() {
        Ok(Some(poly)) => Ok(HPolytope::from_polygon(poly)),
        Ok(None) | Err(SetError::UnboundedSet) => Ok(raw),
        Err(e) => Err(e),
    }
}

/// Serializable set descriptor used by configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SetSpec {
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Hpoly {
        #[serde(rename = "F")]
        f: Vec<Vec<f64>>,
        g: Vec<f64>,
    },
    Vpoly { vertices: Vec<Vec<f64>> },
}

impl SetSpec {
    pub fn build(&self) -> Result<ConvexSet> {
        match self {
            SetSpec::Box { lower, upper } => ConvexSet::boxed(lower, upper),
            SetSpec::Hpoly { f, g } => Ok(HPolytope::from_rows(f, g)?.into()),
            SetSpec::Vpoly { vertices } => Ok(VPolytope::from_rows(vertices)?.into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    fn unstable_x() -> ConvexSet {
        ConvexSet::boxed(&[-5.0, -2.0], &[5.0, 2.0]).unwrap()
    }

    #[test]
    fn box_support_closed_form() {
        let b = ConvexSet::cube(2, 1.0);
        assert_eq!(b.support(&v(&[2.0, 0.0])).unwrap(), 2.0);
    }

    #[test]
    fn support_of_state_set_along_eigenvector() {
        // unit eigenvector of Aᵀ for λ = 1.2 is (2.7, 1)/‖·‖
        let phi = v(&[2.7, 1.0]).normalize();
        let h = unstable_x().support(&phi).unwrap();
        assert!((h - 5.383).abs() < 5e-4, "{h}");
    }

    #[test]
    fn triangle_support_matches_vertex_scan() {
        let t = ConvexSet::from(VPolytope::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap());
        assert_eq!(t.support(&v(&[1.0, 1.0])).unwrap(), 2.0);
        let h = t.to_hpolytope().unwrap();
        assert_abs_diff_eq!(ConvexSet::from(h).support(&v(&[1.0, 1.0])).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn hpolytope_support_rejects_higher_dimension() {
        let h = ConvexSet::cube(3, 1.0).to_hpolytope().unwrap();
        assert_eq!(ConvexSet::from(h).support(&v(&[1.0, 0.0, 0.0])), Err(SetError::UnsupportedDimension(3)));
    }

    #[test]
    fn unbounded_hpolytope_support_errors() {
        let h = HPolytope::from_rows(&[vec![1.0, 0.0], vec![-1.0, 0.0]], &[1.0, 1.0]).unwrap();
        assert_eq!(ConvexSet::from(h).support(&v(&[0.0, 1.0])), Err(SetError::UnboundedSet));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let b = ConvexSet::cube(2, 1.0);
        assert!(matches!(b.support(&v(&[1.0])), Err(SetError::DimensionMismatch { .. })));
    }

    #[test]
    fn support_of_image_examples() {
        let b = ConvexSet::cube(2, 1.0);
        let z = v(&[1.0, 0.0]);
        assert_eq!(b.support_of_image(&DMatrix::identity(2, 2), &z).unwrap(), b.support(&z).unwrap());
        assert_eq!(b.support_of_image(&(DMatrix::identity(2, 2) * 2.0), &z).unwrap(), 2.0);
    }

    #[test]
    fn support_of_image_of_input_segment() {
        // BU with B = (0.1, 1), U = [-0.5, 1], mapped by A; along φ₁,₁ the
        // image support is λ₁ times the support of BU
        let bu = ConvexSet::from(VPolytope::from_rows(&[vec![-0.05, -0.5], vec![0.1, 1.0]]).unwrap());
        let a = DMatrix::from_row_slice(2, 2, &[1.2, 1.0, 0.0, -1.5]);
        let phi = v(&[2.7, 1.0]).normalize();
        let via_transpose = bu.support_of_image(&a, &phi).unwrap();
        let image = ConvexSet::from(bu.linear_image(&a).unwrap());
        assert_abs_diff_eq!(via_transpose, image.support(&phi).unwrap(), epsilon = 1e-12);
        assert_abs_diff_eq!(via_transpose, 1.2 * bu.support(&phi).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn erosion_examples() {
        let big = ConvexSet::cube(2, 2.0).to_hpolytope().unwrap();
        let small = ConvexSet::cube(2, 1.0);
        let d = ConvexSet::from(minkowski_diff(&big, &small).unwrap());
        for z in probe_directions(2) {
            assert_abs_diff_eq!(d.support(&z).unwrap(), small.support(&z).unwrap(), epsilon = 1e-9);
        }
        let e = minkowski_diff(&small.to_hpolytope().unwrap(), &ConvexSet::cube(2, 2.0)).unwrap();
        assert!(ConvexSet::from(e).is_empty().unwrap());

        let x = unstable_x().to_hpolytope().unwrap();
        let shrunk = minkowski_diff(&x, &ConvexSet::cube(2, 0.5)).unwrap();
        let expect = ConvexSet::boxed(&[-4.5, -1.5], &[4.5, 1.5]).unwrap().to_hpolytope().unwrap();
        assert_eq!(shrunk.offsets(), expect.offsets());
    }

    #[test]
    fn minkowski_sum_examples() {
        let sq = ConvexSet::boxed(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let origin = ConvexSet::from(VPolytope::from_rows(&[vec![0.0, 0.0]]).unwrap());
        let s = ConvexSet::from(minkowski_sum_2d(&sq, &origin).unwrap());
        assert_eq!(s.vertices().unwrap().len(), 4);
        let b = ConvexSet::cube(2, 1.0);
        let bb = ConvexSet::from(minkowski_sum_2d(&b, &b).unwrap());
        for z in probe_directions(2) {
            assert_abs_diff_eq!(bb.support(&z).unwrap(), 2.0 * b.support(&z).unwrap(), epsilon = 1e-12);
        }
        let seg = ConvexSet::from(VPolytope::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap());
        let r = ConvexSet::from(minkowski_sum_2d(&sq, &seg).unwrap());
        let expect = ConvexSet::boxed(&[0.0, 0.0], &[2.0, 1.0]).unwrap();
        for z in probe_directions(2) {
            assert_abs_diff_eq!(r.support(&z).unwrap(), expect.support(&z).unwrap(), epsilon = 1e-12);
        }
        let three = ConvexSet::cube(3, 1.0);
        assert!(matches!(minkowski_sum_2d(&three, &three), Err(SetError::DimensionMismatch { .. })));
    }

    #[test]
    fn preimage_examples() {
        let p = ConvexSet::cube(2, 2.0).to_hpolytope().unwrap();
        assert_eq!(preimage(&DMatrix::identity(2, 2), &p).unwrap(), p);
        let shrunk = ConvexSet::from(preimage(&(DMatrix::identity(2, 2) * 2.0), &p).unwrap());
        for z in probe_directions(2) {
            assert_abs_diff_eq!(shrunk.support(&z).unwrap(), ConvexSet::cube(2, 1.0).support(&z).unwrap(), epsilon = 1e-12);
        }
        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(preimage(&singular, &p), Err(SetError::SingularMatrix(_))));
    }

    #[test]
    fn preimage_under_unstable_dynamics_maps_into_state_set() {
        let a = DMatrix::from_row_slice(2, 2, &[1.2, 1.0, 0.0, -1.5]);
        let x = unstable_x();
        let pre = ConvexSet::from(preimage(&a, &x.to_hpolytope().unwrap()).unwrap());
        for vtx in pre.vertices().unwrap() {
            assert!(x.contains(&(&a * &vtx), 1e-9).unwrap());
        }
        // points just outside the preimage boundary map outside X
        let poly = pre.polygon().unwrap().unwrap();
        let c: Point = poly.vertices().iter().sum::<Point>() / poly.len() as f64;
        for vtx in poly.vertices() {
            let out = c + (vtx - c) * 1.01;
            assert!(!x.contains(&(&a * v(&[out.x, out.y])), 1e-9).unwrap());
        }
    }

    #[test]
    fn intersection_examples() {
        let p = ConvexSet::cube(2, 1.0).to_hpolytope().unwrap();
        let pp = ConvexSet::from(intersect(&p, &p).unwrap());
        assert_eq!(pp.vertices().unwrap().len(), 4);
        let q = ConvexSet::boxed(&[0.0, 0.0], &[2.0, 2.0]).unwrap().to_hpolytope().unwrap();
        let pq = ConvexSet::from(intersect(&p, &q).unwrap());
        let expect = ConvexSet::boxed(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        for z in probe_directions(2) {
            assert_abs_diff_eq!(pq.support(&z).unwrap(), expect.support(&z).unwrap(), epsilon = 1e-12);
        }
        // square rotated by 45° with the same inradius: regular octagon
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rot = HPolytope::from_rows(&[vec![s, s], vec![-s, s], vec![-s, -s], vec![s, -s]], &[1.0; 4]).unwrap();
        let oct = ConvexSet::from(intersect(&p, &rot).unwrap());
        assert_eq!(oct.vertices().unwrap().len(), 8);
    }

    #[test]
    fn emptiness_examples() {
        assert!(!ConvexSet::boxed(&[0.0, 0.0], &[1.0, 1.0]).unwrap().is_empty().unwrap());
        let contradiction =
            HPolytope::from_rows(&[vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]], &[-1.0, -1.0, 1.0, 1.0])
                .unwrap();
        assert!(ConvexSet::from(contradiction).is_empty().unwrap());
        let eroded = minkowski_diff(&unstable_x().to_hpolytope().unwrap(), &ConvexSet::cube(2, 10.0)).unwrap();
        assert!(ConvexSet::from(eroded).is_empty().unwrap());
    }

    #[test]
    fn pair_negativity_examples() {
        let shifted = ConvexSet::boxed(&[9.0, -1.0], &[11.0, 1.0]).unwrap();
        assert!(!support_pair_negativity(&shifted, &v(&[-1.0, 0.0])).unwrap());
        let abstract_set =
            |z: &DVector<f64>| if z[0] > 0.0 { -0.1 } else { -0.2 };
        assert!(support_pair_negativity(&abstract_set, &v(&[1.0, 0.0])).unwrap());
    }

    #[test]
    fn symmetry_and_interior_checks() {
        assert!(unstable_x().is_symmetric(1e-9).unwrap());
        let u = ConvexSet::boxed(&[-0.5], &[1.0]).unwrap();
        assert!(!u.is_symmetric(1e-9).unwrap());
        assert!(u.contains_origin_in_interior().unwrap());
        let seg = ConvexSet::from(VPolytope::from_rows(&[vec![-0.5, -1.0], vec![0.5, 1.0]]).unwrap());
        assert!(seg.is_symmetric(1e-9).unwrap());
        assert!(!seg.contains_origin_in_interior().unwrap());
        assert!(seg.contains_origin().unwrap());
    }

    #[test]
    fn gauge_of_points() {
        let w = ConvexSet::cube(2, 1.0);
        assert_abs_diff_eq!(w.gauge(&v(&[-0.1, -1.0])).unwrap().unwrap(), 1.0, epsilon = 1e-12);
        let seg = ConvexSet::from(VPolytope::from_rows(&[vec![-0.5, -1.0], vec![0.5, 1.0]]).unwrap());
        assert_abs_diff_eq!(seg.gauge(&v(&[0.25, 0.5])).unwrap().unwrap(), 0.5, epsilon = 1e-12);
        assert_eq!(seg.gauge(&v(&[1.0, 0.0])).unwrap(), None);
    }

    #[test]
    fn set_spec_builds_each_kind() {
        let json = r#"[{"type":"box","lower":[-1,-1],"upper":[1,1]},
                       {"type":"hpoly","F":[[1,0],[-1,0],[0,1],[0,-1]],"g":[1,1,1,1]},
                       {"type":"vpoly","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]]}]"#;
        let specs: Vec<SetSpec> = serde_json::from_str(json).unwrap();
        let z = v(&[0.3, -0.7]);
        for s in &specs {
            assert_abs_diff_eq!(s.build().unwrap().support(&z).unwrap(), 1.0, epsilon = 1e-12);
        }
    }
}
