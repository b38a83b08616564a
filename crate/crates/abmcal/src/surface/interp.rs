//! Scattered-data cubic interpolation onto a regular grid.
//!
//! The sample points are triangulated (Bowyer-Watson Delaunay) and each
//! triangle carries a Clough-Tocher C1 cubic: the triangle splits at its
//! centroid into three Bezier patches whose control points come from vertex
//! values, vertex gradients, and a linear cross-boundary derivative rule
//! along the outer edges. Vertex gradients are estimated by local
//! least-squares quadratic fits over triangulation neighbors, so linear and
//! quadratic surfaces are reproduced (nearly) exactly. Grid nodes outside
//! the convex hull are reported as missing.

#![allow(clippy::needless_range_loop)] // index loops mirror the matrix algebra

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum InterpError {
    #[error("need at least {needed} sample points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("sample locations are collinear")]
    Collinear,
    #[error("duplicate sample location at ({0}, {1})")]
    DuplicatePoint(f64, f64),
    #[error("grid resolution must be at least 2")]
    BadResolution,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    x: f64,
    y: f64,
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// A Delaunay triangulation over normalized sample coordinates.
#[derive(Debug, Clone)]
pub struct Triangulation {
    points: Vec<Point>,
    triangles: Vec<[usize; 3]>,
}

impl Triangulation {
    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Total triangulated area (equals the convex hull area for a valid
    /// triangulation).
    pub fn total_area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| 0.5 * cross(self.points[t[0]], self.points[t[1]], self.points[t[2]]).abs())
            .sum()
    }
}

fn in_circumcircle(a: Point, b: Point, c: Point, p: Point) -> bool {
    // Assumes (a, b, c) counter-clockwise.
    let (ax, ay) = (a.x - p.x, a.y - p.y);
    let (bx, by) = (b.x - p.x, b.y - p.y);
    let (cx, cy) = (c.x - p.x, c.y - p.y);
    let det = (ax * ax + ay * ay) * (bx * cy - cx * by)
        - (bx * bx + by * by) * (ax * cy - cx * ay)
        + (cx * cx + cy * cy) * (ax * by - bx * ay);
    det > 0.0
}

/// Bowyer-Watson incremental Delaunay triangulation. Points must be
/// normalized into roughly the unit square and pairwise distinct.
fn delaunay(points: &[Point]) -> Result<Triangulation, InterpError> {
    let n = points.len();
    // Super-triangle comfortably containing the unit square and all
    // circumcircles that matter.
    let big = 64.0;
    let mut all = points.to_vec();
    all.push(Point { x: -big, y: -big });
    all.push(Point { x: big, y: -big });
    all.push(Point { x: 0.5, y: big });
    let (s0, s1, s2) = (n, n + 1, n + 2);

    let mut triangles: Vec<[usize; 3]> = vec![[s0, s1, s2]];

    // Deterministic insertion order, shuffled to avoid adversarial
    // incremental states on structured inputs.
    let mut order: Vec<usize> = (0..n).collect();
    let mut state = 0x9E3779B97F4A7C15u64;
    for i in (1..n).rev() {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let j = (state >> 33) as usize % (i + 1);
        order.swap(i, j);
    }

    for &pi in &order {
        let p = all[pi];
        let mut bad: Vec<usize> = Vec::new();
        for (ti, t) in triangles.iter().enumerate() {
            if in_circumcircle(all[t[0]], all[t[1]], all[t[2]], p) {
                bad.push(ti);
            }
        }
        // Boundary of the cavity: edges of bad triangles not shared by two
        // bad triangles.
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &ti in &bad {
            let t = triangles[ti];
            for (u, v) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                if let Some(pos) = edges.iter().position(|&(a, b)| (a, b) == (v, u) || (a, b) == (u, v)) {
                    edges.swap_remove(pos);
                } else {
                    edges.push((u, v));
                }
            }
        }
        for &ti in bad.iter().rev() {
            triangles.swap_remove(ti);
        }
        for (u, v) in edges {
            // Keep counter-clockwise orientation.
            let t = if cross(all[u], all[v], p) > 0.0 { [u, v, pi] } else { [v, u, pi] };
            if cross(all[t[0]], all[t[1]], all[t[2]]) > 0.0 {
                triangles.push(t);
            }
        }
    }

    triangles.retain(|t| t.iter().all(|&i| i < n));
    if triangles.is_empty() {
        return Err(InterpError::Collinear);
    }
    Ok(Triangulation { points: points.to_vec(), triangles })
}

/// Solve a small dense linear system in place by Gaussian elimination with
/// partial pivoting. Returns `None` if effectively singular.
fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Least-squares gradient estimates at every sample point from
/// triangulation neighbors: quadratic fit where possible, linear fallback,
/// zero gradient as a last resort.
fn estimate_gradients(tri: &Triangulation, values: &[f64]) -> Vec<(f64, f64)> {
    let n = tri.points.len();
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for t in &tri.triangles {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            if !neighbors[a].contains(&b) {
                neighbors[a].push(b);
            }
            if !neighbors[b].contains(&a) {
                neighbors[b].push(a);
            }
        }
    }
    // Grow to the two-ring where the one-ring is too small for a quadratic.
    for i in 0..n {
        if neighbors[i].len() < 6 {
            let ring: Vec<usize> = neighbors[i].clone();
            for j in ring {
                for &k in &neighbors[j].clone() {
                    if k != i && !neighbors[i].contains(&k) {
                        neighbors[i].push(k);
                    }
                }
            }
        }
    }

    (0..n)
        .map(|i| {
            let p = tri.points[i];
            let nbrs = &neighbors[i];
            // Quadratic fit: f(p + d) - f(p) = gx dx + gy dy + a dx^2 + b dx dy + c dy^2
            if nbrs.len() >= 5 {
                let mut ata = vec![vec![0.0; 5]; 5];
                let mut atb = vec![0.0; 5];
                for &j in nbrs {
                    let dx = tri.points[j].x - p.x;
                    let dy = tri.points[j].y - p.y;
                    let df = values[j] - values[i];
                    let row = [dx, dy, dx * dx, dx * dy, dy * dy];
                    for r in 0..5 {
                        for c in 0..5 {
                            ata[r][c] += row[r] * row[c];
                        }
                        atb[r] += row[r] * df;
                    }
                }
                if let Some(sol) = solve_dense(&mut ata, &mut atb) {
                    return (sol[0], sol[1]);
                }
            }
            // Linear fallback.
            let mut ata = vec![vec![0.0; 2]; 2];
            let mut atb = vec![0.0; 2];
            for &j in nbrs {
                let dx = tri.points[j].x - p.x;
                let dy = tri.points[j].y - p.y;
                let df = values[j] - values[i];
                ata[0][0] += dx * dx;
                ata[0][1] += dx * dy;
                ata[1][0] += dx * dy;
                ata[1][1] += dy * dy;
                atb[0] += dx * df;
                atb[1] += dy * df;
            }
            solve_dense(&mut ata, &mut atb)
                .map(|s| (s[0], s[1]))
                .unwrap_or((0.0, 0.0))
        })
        .collect()
}

/// One Clough-Tocher macro-triangle: three cubic Bezier subpatches around
/// the centroid.
struct CtPatch {
    corners: [Point; 3],
    centroid: Point,
    /// Control nets for subtriangles (V1,V2,C), (V2,V3,C), (V3,V1,C), each
    /// as [c300, c030, c003, c210, c120, c021, c012, c102, c201, c111].
    nets: [[f64; 10]; 3],
}

fn barycentric_gradients(p1: Point, p2: Point, p3: Point) -> [(f64, f64); 3] {
    let d = cross(p1, p2, p3);
    [
        ((p2.y - p3.y) / d, (p3.x - p2.x) / d),
        ((p3.y - p1.y) / d, (p1.x - p3.x) / d),
        ((p1.y - p2.y) / d, (p2.x - p1.x) / d),
    ]
}

fn build_patch(corners: [Point; 3], f: [f64; 3], g: [(f64, f64); 3]) -> CtPatch {
    let c = Point {
        x: (corners[0].x + corners[1].x + corners[2].x) / 3.0,
        y: (corners[0].y + corners[1].y + corners[2].y) / 3.0,
    };
    let dot = |g: (f64, f64), from: Point, to: Point| g.0 * (to.x - from.x) + g.1 * (to.y - from.y);

    // Outer-edge control points and the c111 point of each subtriangle
    // (V_a, V_b, C).
    let edge = |a: usize, b: usize| -> [f64; 7] {
        let (va, vb) = (corners[a], corners[b]);
        let c300 = f[a];
        let c030 = f[b];
        let c210 = f[a] + dot(g[a], va, vb) / 3.0;
        let c120 = f[b] + dot(g[b], vb, va) / 3.0;
        let c201 = f[a] + dot(g[a], va, c) / 3.0;
        let c021 = f[b] + dot(g[b], vb, c) / 3.0;
        // Linear cross-boundary derivative along the outer edge: expressed in
        // the subtriangle's barycentric direction of the edge normal.
        let grads = barycentric_gradients(va, vb, c);
        let (ex, ey) = (vb.x - va.x, vb.y - va.y);
        let len = (ex * ex + ey * ey).sqrt();
        let nrm = (-ey / len, ex / len);
        let d: Vec<f64> = grads.iter().map(|&(gx, gy)| gx * nrm.0 + gy * nrm.1).collect();
        let end_a = d[0] * c300 + d[1] * c210 + d[2] * c201;
        let end_b = d[0] * c120 + d[1] * c030 + d[2] * c021;
        let c111 = (0.5 * (end_a + end_b) - d[0] * c210 - d[1] * c120) / d[2];
        [c300, c030, c210, c120, c201, c021, c111]
    };

    let ab = edge(0, 1);
    let bc = edge(1, 2);
    let ca = edge(2, 0);

    // Interior ring: one shared point per internal edge (at each corner's
    // spoke toward the centroid), then the common center.
    let spoke = |f_b: f64, g_b: (f64, f64), vb: Point, c111_left: f64, c111_right: f64| {
        let c021 = f_b + dot(g_b, vb, c) / 3.0;
        (c111_left + c111_right + c021) / 3.0
    };
    let s1 = spoke(f[0], g[0], corners[0], ca[6], ab[6]);
    let s2 = spoke(f[1], g[1], corners[1], ab[6], bc[6]);
    let s3 = spoke(f[2], g[2], corners[2], bc[6], ca[6]);
    let z = (s1 + s2 + s3) / 3.0;

    // Assemble nets: [c300, c030, c003, c210, c120, c021, c012, c102, c201, c111]
    let net = |e: [f64; 7], s_a: f64, s_b: f64| -> [f64; 10] {
        [e[0], e[1], z, e[2], e[3], e[5], s_b, s_a, e[4], e[6]]
    };
    CtPatch {
        corners,
        centroid: c,
        nets: [net(ab, s1, s2), net(bc, s2, s3), net(ca, s3, s1)],
    }
}

impl CtPatch {
    /// Evaluate at a point known to lie inside (or on) the macro-triangle.
    fn eval(&self, p: Point) -> f64 {
        // Pick the subtriangle containing p.
        let subs = [
            (self.corners[0], self.corners[1]),
            (self.corners[1], self.corners[2]),
            (self.corners[2], self.corners[0]),
        ];
        let mut best = (0usize, f64::NEG_INFINITY, (0.0, 0.0, 0.0));
        for (k, &(va, vb)) in subs.iter().enumerate() {
            let d = cross(va, vb, self.centroid);
            let u = cross(p, vb, self.centroid) / d;
            let v = cross(va, p, self.centroid) / d;
            let w = 1.0 - u - v;
            let worst = u.min(v).min(w);
            if worst > best.1 {
                best = (k, worst, (u, v, w));
            }
        }
        let (k, _, (u, v, w)) = best;
        let n = &self.nets[k];
        let (c300, c030, c003) = (n[0], n[1], n[2]);
        let (c210, c120, c021, c012, c102, c201, c111) =
            (n[3], n[4], n[5], n[6], n[7], n[8], n[9]);
        c300 * u * u * u
            + c030 * v * v * v
            + c003 * w * w * w
            + 3.0 * c210 * u * u * v
            + 3.0 * c201 * u * u * w
            + 3.0 * c120 * u * v * v
            + 3.0 * c021 * v * v * w
            + 3.0 * c102 * u * w * w
            + 3.0 * c012 * v * w * w
            + 6.0 * c111 * u * v * w
    }
}

/// A Clough-Tocher interpolant over scattered samples.
pub struct CubicInterpolant {
    tri: Triangulation,
    patches: Vec<CtPatch>,
    scale: ((f64, f64), (f64, f64)),
}

impl CubicInterpolant {
    /// Build from `(x, y, f)` samples.
    pub fn new(samples: &[(f64, f64, f64)]) -> Result<Self, InterpError> {
        if samples.len() < 4 {
            return Err(InterpError::TooFewPoints { needed: 4, got: samples.len() });
        }
        let (min_x, max_x) = min_max(samples.iter().map(|s| s.0));
        let (min_y, max_y) = min_max(samples.iter().map(|s| s.1));
        let span_x = (max_x - min_x).max(f64::MIN_POSITIVE);
        let span_y = (max_y - min_y).max(f64::MIN_POSITIVE);
        let scale = ((min_x, span_x), (min_y, span_y));

        let points: Vec<Point> = samples
            .iter()
            .map(|s| Point { x: (s.0 - min_x) / span_x, y: (s.1 - min_y) / span_y })
            .collect();
        for (i, p) in points.iter().enumerate() {
            for q in &points[..i] {
                if p == q {
                    return Err(InterpError::DuplicatePoint(samples[i].0, samples[i].1));
                }
            }
        }
        let values: Vec<f64> = samples.iter().map(|s| s.2).collect();
        let tri = delaunay(&points)?;
        let gradients = estimate_gradients(&tri, &values);
        let patches = tri
            .triangles
            .iter()
            .map(|t| {
                build_patch(
                    [tri.points[t[0]], tri.points[t[1]], tri.points[t[2]]],
                    [values[t[0]], values[t[1]], values[t[2]]],
                    [gradients[t[0]], gradients[t[1]], gradients[t[2]]],
                )
            })
            .collect();
        Ok(CubicInterpolant { tri, patches, scale })
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    /// Interpolate at `(x, y)`; `None` outside the convex hull.
    pub fn eval(&self, x: f64, y: f64) -> Option<f64> {
        let p = Point {
            x: (x - self.scale.0 .0) / self.scale.0 .1,
            y: (y - self.scale.1 .0) / self.scale.1 .1,
        };
        const EPS: f64 = 1e-9;
        for (t, patch) in self.tri.triangles.iter().zip(&self.patches) {
            let (a, b, c) = (self.tri.points[t[0]], self.tri.points[t[1]], self.tri.points[t[2]]);
            let d = cross(a, b, c);
            let u = cross(p, b, c) / d;
            let v = cross(a, p, c) / d;
            let w = 1.0 - u - v;
            if u >= -EPS && v >= -EPS && w >= -EPS {
                return Some(patch.eval(p));
            }
        }
        None
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// An interpolated regular grid over the samples' bounding box.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major `[y][x]`; `None` outside the convex hull.
    pub values: Vec<Option<f64>>,
}

impl SurfaceGrid {
    pub fn get(&self, ix: usize, iy: usize) -> Option<f64> {
        self.values[iy * self.xs.len() + ix]
    }

    /// CSV with columns `x,y,f_interp,in_hull`; out-of-hull nodes carry an
    /// empty value and flag 0.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,f_interp,in_hull\n");
        for (iy, y) in self.ys.iter().enumerate() {
            for (ix, x) in self.xs.iter().enumerate() {
                match self.values[iy * self.xs.len() + ix] {
                    Some(f) => out.push_str(&format!("{x},{y},{f},1\n")),
                    None => out.push_str(&format!("{x},{y},,0\n")),
                }
            }
        }
        out
    }
}

/// Interpolate scattered `(x, y, f)` samples onto a `resolution` by
/// `resolution` grid over their bounding box.
pub fn interpolate_grid(
    samples: &[(f64, f64, f64)],
    resolution: usize,
) -> Result<SurfaceGrid, InterpError> {
    if resolution < 2 {
        return Err(InterpError::BadResolution);
    }
    let interp = CubicInterpolant::new(samples)?;
    let (min_x, max_x) = min_max(samples.iter().map(|s| s.0));
    let (min_y, max_y) = min_max(samples.iter().map(|s| s.1));
    let xs: Vec<f64> = (0..resolution)
        .map(|i| min_x + (max_x - min_x) * i as f64 / (resolution - 1) as f64)
        .collect();
    let ys: Vec<f64> = (0..resolution)
        .map(|i| min_y + (max_y - min_y) * i as f64 / (resolution - 1) as f64)
        .collect();
    let mut values = Vec::with_capacity(resolution * resolution);
    for &y in &ys {
        for &x in &xs {
            values.push(interp.eval(x, y));
        }
    }
    Ok(SurfaceGrid { xs, ys, values })
}
