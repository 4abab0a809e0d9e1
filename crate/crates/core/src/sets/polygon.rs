//! Planar convex polygons: hulls, half-plane clipping and the conversions
//! between vertex and half-plane form used by the set calculus.
//!
//! A [`Polygon`] always stores the vertices of a convex hull in
//! counter-clockwise order. Degenerate hulls (a single point or a segment)
//! are valid values; they arise when an erosion leaves a set with empty
//! interior.

use nalgebra::Vector2;

/// Absolute tolerance for vertex deduplication and hull collinearity.
pub const HULL_TOL: f64 = 1e-12;

/// Half-width of the clipping window used to seed half-plane intersection.
/// Any edge of the window surviving all clips means the input is unbounded.
const WINDOW: f64 = 1e6;

pub type Point = Vector2<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

/// A line `normal · x = offset`, used as an edge label during clipping.
#[derive(Debug, Clone, Copy)]
struct Line {
    normal: Point,
    offset: f64,
    window: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClipError {
    Unbounded,
}

fn cross(o: &Point, a: &Point, b: &Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

impl Polygon {
    /// Convex hull of an arbitrary point cloud (Andrew's monotone chain).
    /// Returns `None` for an empty input.
    pub fn hull(points: &[Point]) -> Option<Self> {
        if points.is_empty() {
            return None;
        }
        let mut pts: Vec<Point> = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup_by(|a, b| (*a - *b).norm() <= HULL_TOL);
        // sorting only groups exact-x ties; a second pass catches near ties
        let mut uniq: Vec<Point> = Vec::with_capacity(pts.len());
        for p in pts {
            if !uniq.iter().any(|q| (p - q).norm() <= HULL_TOL) {
                uniq.push(p);
            }
        }
        if uniq.len() <= 2 {
            return Some(Self { vertices: uniq });
        }
        let mut lower: Vec<Point> = Vec::new();
        for p in &uniq {
            while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= HULL_TOL {
                lower.pop();
            }
            lower.push(*p);
        }
        let mut upper: Vec<Point> = Vec::new();
        for p in uniq.iter().rev() {
            while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= HULL_TOL {
                upper.pop();
            }
            upper.push(*p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() < 2 {
            // all points (numerically) identical after chain filtering
            lower.truncate(1);
        }
        Some(Self { vertices: lower })
    }

    /// Intersection of the half-planes `normals[i] · x <= offsets[i] + tol`.
    ///
    /// `Ok(None)` means the intersection is empty, `Err(Unbounded)` that it is
    /// nonempty but not bounded.
    pub fn from_halfplanes(normals: &[Point], offsets: &[f64], tol: f64) -> Result<Option<Self>, ClipError> {
        let mut lines: Vec<Line> = vec![
            Line { normal: Point::new(1.0, 0.0), offset: WINDOW, window: true },
            Line { normal: Point::new(0.0, 1.0), offset: WINDOW, window: true },
            Line { normal: Point::new(-1.0, 0.0), offset: WINDOW, window: true },
            Line { normal: Point::new(0.0, -1.0), offset: WINDOW, window: true },
        ];
        // (vertex, index of the line carrying the edge that leaves the vertex)
        let mut poly: Vec<(Point, usize)> = vec![
            (Point::new(WINDOW, -WINDOW), 0),
            (Point::new(WINDOW, WINDOW), 1),
            (Point::new(-WINDOW, WINDOW), 2),
            (Point::new(-WINDOW, -WINDOW), 3),
        ];
        for (n, &c) in normals.iter().zip(offsets) {
            let scale = n.norm();
            if scale <= HULL_TOL {
                if c < -tol {
                    return Ok(None);
                }
                continue;
            }
            let line = Line { normal: n / scale, offset: c / scale, window: false };
            let tol_n = tol / scale;
            let idx = lines.len();
            lines.push(line);
            poly = clip(&poly, &lines, idx, tol_n);
            if poly.is_empty() {
                return Ok(None);
            }
        }
        if poly.iter().any(|&(_, l)| lines[l].window) {
            return Err(ClipError::Unbounded);
        }
        let pts: Vec<Point> = poly.iter().map(|&(p, _)| p).collect();
        Ok(Self::hull(&pts))
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn support(&self, z: &Point) -> f64 {
        self.vertices.iter().map(|v| v.dot(z)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Half-plane description `(normals, offsets)` with unit outward normals.
    /// Degenerate hulls get a closed description (a segment gets four rows,
    /// a point four axis-aligned rows).
    pub fn halfplanes(&self) -> (Vec<Point>, Vec<f64>) {
        let v = &self.vertices;
        match v.len() {
            0 => (Vec::new(), Vec::new()),
            1 => {
                let p = v[0];
                let normals = vec![
                    Point::new(1.0, 0.0),
                    Point::new(-1.0, 0.0),
                    Point::new(0.0, 1.0),
                    Point::new(0.0, -1.0),
                ];
                let offsets = vec![p.x, -p.x, p.y, -p.y];
                (normals, offsets)
            }
            2 => {
                let (p, q) = (v[0], v[1]);
                let d = (q - p).normalize();
                let m = Point::new(d.y, -d.x);
                let normals = vec![m, -m, d, -d];
                let offsets = vec![m.dot(&p), -m.dot(&p), d.dot(&q), -d.dot(&p)];
                (normals, offsets)
            }
            k => {
                let mut normals = Vec::with_capacity(k);
                let mut offsets = Vec::with_capacity(k);
                for i in 0..k {
                    let a = v[i];
                    let b = v[(i + 1) % k];
                    let e = b - a;
                    let n = Point::new(e.y, -e.x).normalize();
                    normals.push(n);
                    offsets.push(n.dot(&a));
                }
                (normals, offsets)
            }
        }
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let (normals, offsets) = self.halfplanes();
        normals.iter().zip(&offsets).all(|(n, &c)| n.dot(p) <= c + tol)
    }

    pub fn minkowski_sum(&self, other: &Polygon) -> Polygon {
        let mut pts = Vec::with_capacity(self.len() * other.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a + b);
            }
        }
        Polygon::hull(&pts).unwrap_or(Polygon { vertices: Vec::new() })
    }
}

fn intersect_lines(a: &Line, b: &Line) -> Option<Point> {
    let det = a.normal.x * b.normal.y - a.normal.y * b.normal.x;
    if det.abs() <= 1e-12 {
        return None;
    }
    let x = (a.offset * b.normal.y - a.normal.y * b.offset) / det;
    let y = (a.normal.x * b.offset - a.offset * b.normal.x) / det;
    Some(Point::new(x, y))
}

/// One Sutherland–Hodgman pass against `lines[idx]`, carrying edge labels.
fn clip(poly: &[(Point, usize)], lines: &[Line], idx: usize, tol: f64) -> Vec<(Point, usize)> {
    let line = lines[idx];
    let slack = |p: &Point| line.normal.dot(p) - line.offset;
    let k = poly.len();
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..k {
        let (p, label) = poly[i];
        let (q, _) = poly[(i + 1) % k];
        let sp = slack(&p);
        let sq = slack(&q);
        let p_in = sp <= tol;
        let q_in = sq <= tol;
        let crossing = || {
            intersect_lines(&lines[label], &line).unwrap_or_else(|| {
                let t = if (sp - sq).abs() > 0.0 { (sp / (sp - sq)).clamp(0.0, 1.0) } else { 0.0 };
                p + (q - p) * t
            })
        };
        match (p_in, q_in) {
            (true, true) => out.push((p, label)),
            (true, false) => {
                out.push((p, label));
                // the crossing coincides with p when p sits inside the tolerance band
                if sp < 0.0 {
                    out.push((crossing(), idx));
                } else if let Some(last) = out.last_mut() {
                    last.1 = idx;
                }
            }
            (false, true) => {
                if sq < 0.0 {
                    out.push((crossing(), label));
                }
            }
            (false, false) => {}
        }
    }
    out
}
