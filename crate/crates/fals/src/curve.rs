//! Parametrized self-similar fractal curves in the plane.
//!
//! A curve is described by an iterated-function-system motif: an ordered list
//! of affine contractions that map a base segment onto the pieces of the
//! next recursion stage. The stage-`n` prefractal is the broken line obtained
//! by applying the motif `n` times, and it is what every other module
//! operates on. Each motif map owns a share of the parameter interval, so a
//! parameter value selects a piece at every recursion level.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum recursion depth accepted by the curve builders.
pub const MAX_DEPTH: u32 = 14;

/// Deepest stage whose polyline is materialized in memory. Beyond this,
/// evaluation composes motif maps on the fly instead of storing 4^n vertices.
pub const MATERIALIZE_DEPTH_CAP: u32 = 12;

/// A point in the embedding plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }

    pub fn lerp(a: Point2, b: Point2, t: f64) -> Point2 {
        Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
    }

    pub fn midpoint(a: Point2, b: Point2) -> Point2 {
        Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))
    }
}

/// An affine map on the plane, stored as the row-major 2x3 matrix
/// `[[a, b, tx], [c, d, ty]]` acting by `p -> (a x + b y + tx, c x + d y + ty)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Affine2 {
    pub a: f64,
    pub b: f64,
    pub tx: f64,
    pub c: f64,
    pub d: f64,
    pub ty: f64,
}

impl Affine2 {
    pub const IDENTITY: Affine2 = Affine2 {
        a: 1.0,
        b: 0.0,
        tx: 0.0,
        c: 0.0,
        d: 1.0,
        ty: 0.0,
    };

    pub const fn new(a: f64, b: f64, tx: f64, c: f64, d: f64, ty: f64) -> Self {
        Self { a, b, tx, c, d, ty }
    }

    /// Build from a row-major 2x3 matrix, as used in IFS motif files.
    pub fn from_rows(rows: [[f64; 3]; 2]) -> Self {
        Self::new(
            rows[0][0], rows[0][1], rows[0][2], rows[1][0], rows[1][1], rows[1][2],
        )
    }

    pub fn rows(&self) -> [[f64; 3]; 2] {
        [[self.a, self.b, self.tx], [self.c, self.d, self.ty]]
    }

    /// Similarity with scale `r`, rotation `theta` (radians) and translation.
    pub fn similarity(r: f64, theta: f64, tx: f64, ty: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(r * c, -r * s, tx, r * s, r * c, ty)
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.a * p.x + self.b * p.y + self.tx,
            self.c * p.x + self.d * p.y + self.ty,
        )
    }

    /// `self ∘ inner`: the map applying `inner` first.
    pub fn compose(&self, inner: &Affine2) -> Affine2 {
        Affine2::new(
            self.a * inner.a + self.b * inner.c,
            self.a * inner.b + self.b * inner.d,
            self.a * inner.tx + self.b * inner.ty + self.tx,
            self.c * inner.a + self.d * inner.c,
            self.c * inner.b + self.d * inner.d,
            self.c * inner.tx + self.d * inner.ty + self.ty,
        )
    }

    /// Contraction ratio: the spectral norm of the linear part.
    pub fn contraction_ratio(&self) -> f64 {
        let p = self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d;
        let det = self.a * self.d - self.b * self.c;
        let q = det * det;
        let disc = (p * p - 4.0 * q).max(0.0);
        (0.5 * (p + disc.sqrt())).sqrt()
    }

    /// Fixed point of the map, if the linear part has no eigenvalue 1.
    pub fn fixed_point(&self) -> Option<Point2> {
        // Solve (I - A) p = t.
        let m00 = 1.0 - self.a;
        let m01 = -self.b;
        let m10 = -self.c;
        let m11 = 1.0 - self.d;
        let det = m00 * m11 - m01 * m10;
        if det.abs() < 1e-14 {
            return None;
        }
        Some(Point2::new(
            (self.tx * m11 - m01 * self.ty) / det,
            (m00 * self.ty - m10 * self.tx) / det,
        ))
    }
}

/// A self-similar curve at a finite recursion stage.
///
/// The curve is exactly the stage-`depth` broken line; finer structure is
/// reached by building a deeper curve, not by on-demand refinement.
#[derive(Clone, Debug)]
pub struct FractalCurve {
    generator: Vec<Affine2>,
    /// Parameter break fractions: `m + 1` values `0 = b_0 < ... < b_m = 1`.
    param_breaks: Vec<f64>,
    uniform_breaks: bool,
    depth: u32,
    param_domain: (f64, f64),
    alpha: f64,
    start: Point2,
    end: Point2,
    /// Stage-`depth` vertices, present when `depth <= MATERIALIZE_DEPTH_CAP`.
    polyline: Option<Vec<Point2>>,
}

impl FractalCurve {
    /// The standard von Koch curve on `[0, 1]` at the given stage.
    ///
    /// The four motif maps each own a parameter quarter, and the similarity
    /// dimension is `ln 4 / ln 3`.
    pub fn build_koch(depth: u32) -> Result<FractalCurve> {
        let third = 1.0 / 3.0;
        let s3_6 = 3.0_f64.sqrt() / 6.0;
        // Segment (0,0)-(1,0) mapped onto the four Koch pieces.
        let generator = vec![
            Affine2::new(third, 0.0, 0.0, 0.0, third, 0.0),
            Affine2::new(1.0 / 6.0, -s3_6, third, s3_6, 1.0 / 6.0, 0.0),
            Affine2::new(1.0 / 6.0, s3_6, 0.5, -s3_6, 1.0 / 6.0, s3_6),
            Affine2::new(third, 0.0, 2.0 / 3.0, 0.0, third, 0.0),
        ];
        let alpha = 4.0_f64.ln() / 3.0_f64.ln();
        Self::assemble(generator, uniform_breaks(4), depth, alpha)
    }

    /// A straight segment on `[0, 1]` presented as a two-map motif with
    /// contraction ratio 1/2, so that the Moran equation gives alpha = 1.
    pub fn build_line(depth: u32) -> Result<FractalCurve> {
        let generator = vec![
            Affine2::new(0.5, 0.0, 0.0, 0.0, 0.5, 0.0),
            Affine2::new(0.5, 0.0, 0.5, 0.0, 0.5, 0.0),
        ];
        Self::build_ifs(generator, None, depth)
    }

    /// Build from a user-supplied motif.
    ///
    /// The maps must chain end-to-start and each must be a contraction (a
    /// single map of ratio 1 is accepted as the degenerate straight line).
    /// `param_breaks`, when given, lists the `m - 1` interior parameter
    /// fractions in `(0, 1)`; omitted, each map owns an equal share.
    pub fn build_ifs(
        maps: Vec<Affine2>,
        param_breaks: Option<Vec<f64>>,
        depth: u32,
    ) -> Result<FractalCurve> {
        if maps.is_empty() {
            return Err(Error::Geometry("motif has no maps".into()));
        }
        let m = maps.len();
        let breaks = match param_breaks {
            Some(interior) => {
                if interior.len() + 1 != m {
                    return Err(Error::Argument(format!(
                        "expected {} interior param breaks for {} maps, got {}",
                        m - 1,
                        m,
                        interior.len()
                    )));
                }
                let mut full = Vec::with_capacity(m + 1);
                full.push(0.0);
                full.extend_from_slice(&interior);
                full.push(1.0);
                for w in full.windows(2) {
                    if !(w[0] < w[1]) {
                        return Err(Error::Argument(
                            "param breaks must be strictly increasing in (0, 1)".into(),
                        ));
                    }
                }
                full
            }
            None => uniform_breaks(m),
        };

        let ratios: Vec<f64> = maps.iter().map(|t| t.contraction_ratio()).collect();
        let alpha = solve_moran(&ratios)?;
        Self::assemble(maps, breaks, depth, alpha)
    }

    fn assemble(
        generator: Vec<Affine2>,
        param_breaks: Vec<f64>,
        depth: u32,
        alpha: f64,
    ) -> Result<FractalCurve> {
        if depth > MAX_DEPTH {
            return Err(Error::Capacity {
                what: "curve depth",
                requested: depth as u64,
                limit: MAX_DEPTH as u64,
            });
        }
        let m = generator.len();
        let (start, end) = endpoints(&generator)?;
        let scale = start.dist(end).max(1.0);
        // Chaining: image end of map i must meet image start of map i+1.
        for i in 0..m.saturating_sub(1) {
            let tail = generator[i].apply(end);
            let head = generator[i + 1].apply(start);
            if tail.dist(head) > 1e-9 * scale {
                return Err(Error::Geometry(format!(
                    "map {} ends at ({}, {}) but map {} starts at ({}, {})",
                    i,
                    tail.x,
                    tail.y,
                    i + 1,
                    head.x,
                    head.y
                )));
            }
        }

        let uniform = is_uniform(&param_breaks);
        let polyline = if depth <= MATERIALIZE_DEPTH_CAP {
            Some(materialize(&generator, depth, start, end))
        } else {
            None
        };
        Ok(FractalCurve {
            generator,
            param_breaks,
            uniform_breaks: uniform,
            depth,
            param_domain: (0.0, 1.0),
            alpha,
            start,
            end,
            polyline,
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Similarity dimension solving the Moran equation for the motif ratios.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn param_domain(&self) -> (f64, f64) {
        self.param_domain
    }

    pub fn generator(&self) -> &[Affine2] {
        &self.generator
    }

    /// Full break fractions, including the 0 and 1 endpoints.
    pub fn param_breaks(&self) -> &[f64] {
        &self.param_breaks
    }

    pub fn map_count(&self) -> usize {
        self.generator.len()
    }

    /// Number of stage-`depth` vertices: `m^depth + 1`.
    pub fn vertex_count(&self) -> u64 {
        (self.map_count() as u64).pow(self.depth) + 1
    }

    pub fn segment_count(&self) -> u64 {
        self.vertex_count() - 1
    }

    pub fn is_materialized(&self) -> bool {
        self.polyline.is_some()
    }

    pub fn polyline(&self) -> Option<&[Point2]> {
        self.polyline.as_deref()
    }

    pub fn start_point(&self) -> Point2 {
        self.start
    }

    pub fn end_point(&self) -> Point2 {
        self.end
    }

    /// Residual of the Moran equation at the stored alpha.
    pub fn moran_residual(&self) -> f64 {
        let sum: f64 = self
            .generator
            .iter()
            .map(|t| t.contraction_ratio().powf(self.alpha))
            .sum();
        sum - 1.0
    }

    /// Parameter value of stage-`depth` vertex `i`, `0 <= i <= m^depth`.
    pub fn vertex_param(&self, i: u64) -> f64 {
        self.vertex_param_at_level(i, self.depth)
    }

    /// Parameter value of vertex `i` of the stage-`level` subdivision.
    pub fn vertex_param_at_level(&self, i: u64, level: u32) -> f64 {
        let m = self.map_count() as u64;
        let n_seg = m.pow(level);
        debug_assert!(i <= n_seg);
        let (a0, b0) = self.param_domain;
        if i == n_seg {
            return b0;
        }
        if self.uniform_breaks {
            return a0 + (b0 - a0) * (i as f64 / n_seg as f64);
        }
        // Nest the break intervals along the base-m digits of i (MSB first).
        let mut lo = 0.0;
        let mut width = 1.0;
        let mut scale = n_seg / m;
        let mut rem = i;
        for _ in 0..level {
            let d = (rem / scale) as usize;
            rem %= scale;
            lo += width * self.param_breaks[d];
            width *= self.param_breaks[d + 1] - self.param_breaks[d];
            scale = (scale / m).max(1);
        }
        a0 + (b0 - a0) * lo
    }

    /// Coordinates of stage-`depth` vertex `i`, computed by composing motif
    /// maps along the base-m digits of `i` when no polyline is stored.
    pub fn vertex_point(&self, i: u64) -> Point2 {
        if let Some(poly) = &self.polyline {
            return poly[i as usize];
        }
        let m = self.map_count() as u64;
        let n_seg = m.pow(self.depth);
        debug_assert!(i <= n_seg);
        if i == n_seg {
            // Last vertex is the motif's terminal fixed point chain.
            let mut p = self.end;
            for _ in 0..self.depth {
                p = self.generator[m as usize - 1].apply(p);
            }
            return p;
        }
        // Digits least-significant first apply the innermost map first.
        let mut p = self.start;
        let mut rem = i;
        for _ in 0..self.depth {
            let d = (rem % m) as usize;
            rem /= m;
            p = self.generator[d].apply(p);
        }
        p
    }

    /// Locate `u` in the stage-`level` subdivision: returns the segment index
    /// and the local fraction within that segment.
    pub(crate) fn locate(&self, u: f64, level: u32) -> Result<(u64, f64)> {
        let (a0, b0) = self.param_domain;
        if !(u >= a0 && u <= b0) {
            return Err(Error::Domain {
                value: u,
                lo: a0,
                hi: b0,
            });
        }
        let m = self.map_count() as u64;
        let mut s = (u - a0) / (b0 - a0);
        let mut index: u64 = 0;
        for _ in 0..level {
            let d = self.digit(&mut s);
            index = index * m + d as u64;
        }
        Ok((index, s))
    }

    /// One descent step: pick the break interval containing `s` and rescale
    /// `s` to local coordinates in it.
    #[inline]
    fn digit(&self, s: &mut f64) -> usize {
        let m = self.map_count();
        let d = if self.uniform_breaks {
            let scaled = *s * m as f64;
            let d = (scaled as usize).min(m - 1);
            *s = scaled - d as f64;
            return d;
        } else {
            let mut d = m - 1;
            for j in 0..m - 1 {
                if *s < self.param_breaks[j + 1] {
                    d = j;
                    break;
                }
            }
            d
        };
        let lo = self.param_breaks[d];
        let hi = self.param_breaks[d + 1];
        *s = ((*s - lo) / (hi - lo)).clamp(0.0, 1.0);
        d
    }

    /// Point of the stage-`depth` broken line at parameter `u`.
    ///
    /// Piecewise-linear between stage vertices and exact at them.
    pub fn evaluate(&self, u: f64) -> Result<Point2> {
        let (index, frac) = self.locate(u, self.depth)?;
        if let Some(poly) = &self.polyline {
            let i = index as usize;
            if frac == 0.0 {
                return Ok(poly[i]);
            }
            return Ok(Point2::lerp(poly[i], poly[i + 1], frac));
        }
        // Deep curve: accumulate the affine composition along the descent.
        let mut acc = Affine2::IDENTITY;
        let (a0, b0) = self.param_domain;
        let mut s = (u - a0) / (b0 - a0);
        for _ in 0..self.depth {
            let d = self.digit(&mut s);
            acc = acc.compose(&self.generator[d]);
        }
        Ok(acc.apply(Point2::lerp(self.start, self.end, s)))
    }
}

fn uniform_breaks(m: usize) -> Vec<f64> {
    (0..=m).map(|i| i as f64 / m as f64).collect()
}

fn is_uniform(breaks: &[f64]) -> bool {
    let m = breaks.len() - 1;
    breaks
        .iter()
        .enumerate()
        .all(|(i, &b)| b == i as f64 / m as f64)
}

/// Initiator endpoints: fixed points of the first and last motif maps.
fn endpoints(generator: &[Affine2]) -> Result<(Point2, Point2)> {
    let first = generator.first().unwrap();
    let last = generator.last().unwrap();
    if generator.len() == 1 {
        // Degenerate single-map motif: the base segment must be supplied by
        // the map itself being (close to) the identity; use its action on a
        // unit segment.
        let start = first.apply(Point2::new(0.0, 0.0));
        let end = first.apply(Point2::new(1.0, 0.0));
        return Ok((start, end));
    }
    let start = first
        .fixed_point()
        .ok_or_else(|| Error::Geometry("first map has no fixed point".into()))?;
    let end = last
        .fixed_point()
        .ok_or_else(|| Error::Geometry("last map has no fixed point".into()))?;
    if start.dist(end) < 1e-14 {
        return Err(Error::Geometry(
            "motif endpoints coincide; the initiator segment is degenerate".into(),
        ));
    }
    Ok((start, end))
}

/// Iteratively refine the initiator segment `depth` times.
///
/// Piece boundaries are stored from the right-hand piece, which keeps every
/// vertex identical to the digit-composition formula used for deep curves.
fn materialize(generator: &[Affine2], depth: u32, start: Point2, end: Point2) -> Vec<Point2> {
    let m = generator.len();
    let mut pts = vec![start, end];
    for _ in 0..depth {
        let n = pts.len();
        let mut next = Vec::with_capacity((n - 1) * m + 1);
        for map in generator.iter() {
            for p in &pts[..n - 1] {
                next.push(map.apply(*p));
            }
        }
        next.push(generator[m - 1].apply(pts[n - 1]));
        pts = next;
    }
    pts
}

/// Solve `sum r_i^alpha = 1` for `alpha` in `[1, 2]` by bisection.
///
/// A single ratio-1 map is the degenerate straight line and returns 1.
pub fn solve_moran(ratios: &[f64]) -> Result<f64> {
    if ratios.is_empty() {
        return Err(Error::Argument("no contraction ratios".into()));
    }
    if ratios.len() == 1 {
        let r = ratios[0];
        if (r - 1.0).abs() <= 1e-12 {
            return Ok(1.0);
        }
        return Err(Error::Dimension(format!(
            "single map of ratio {r} cannot satisfy the Moran equation"
        )));
    }
    for &r in ratios {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Geometry(format!(
                "contraction ratio {r} outside (0, 1)"
            )));
        }
    }
    let moran = |alpha: f64| -> f64 { ratios.iter().map(|r| r.powf(alpha)).sum::<f64>() - 1.0 };
    let f1 = moran(1.0);
    let f2 = moran(2.0);
    if f1.abs() <= 1e-14 {
        return Ok(1.0);
    }
    if f2.abs() <= 1e-14 {
        return Ok(2.0);
    }
    if f1 < 0.0 {
        return Err(Error::Dimension(format!(
            "ratio powers sum to {} < 1 already at alpha = 1",
            f1 + 1.0
        )));
    }
    if f2 > 0.0 {
        return Err(Error::Dimension(format!(
            "ratio powers sum to {} > 1 still at alpha = 2",
            f2 + 1.0
        )));
    }
    // moran is strictly decreasing in alpha for ratios in (0, 1).
    let mut lo = 1.0;
    let mut hi = 2.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = moran(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Shared handle used by the staircase and simulation modules.
pub type CurveRef = Arc<FractalCurve>;

#[cfg(test)]
mod tests {
    use super::*;

    const KOCH_ALPHA: f64 = 1.2618595071429148;
    const SQRT3_OVER_6: f64 = 0.288_675_134_594_812_88;

    fn close(p: Point2, x: f64, y: f64, tol: f64) {
        assert!(
            (p.x - x).abs() <= tol && (p.y - y).abs() <= tol,
            "({}, {}) != ({}, {})",
            p.x,
            p.y,
            x,
            y
        );
    }

    #[test]
    fn koch_depth0_is_unit_segment() {
        let c = FractalCurve::build_koch(0).unwrap();
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.polyline().unwrap().len(), 2);
        close(c.evaluate(0.0).unwrap(), 0.0, 0.0, 0.0);
        close(c.evaluate(1.0).unwrap(), 1.0, 0.0, 0.0);
        close(c.evaluate(0.5).unwrap(), 0.5, 0.0, 1e-15);
    }

    #[test]
    fn koch_depth1_quarter_points() {
        let c = FractalCurve::build_koch(1).unwrap();
        // First motif copy ends at 1/3 of the base segment.
        close(c.evaluate(0.25).unwrap(), 1.0 / 3.0, 0.0, 1e-12);
        // Apex of the equilateral bump over the middle third; verified by
        // composing the two middle maps: T1(end) = (1/2, sqrt(3)/6).
        close(c.evaluate(0.5).unwrap(), 0.5, SQRT3_OVER_6, 1e-12);
        close(c.evaluate(0.75).unwrap(), 2.0 / 3.0, 0.0, 1e-12);
    }

    #[test]
    fn koch_depth2_first_copy_vertex() {
        let c = FractalCurve::build_koch(2).unwrap();
        // Composing the first map with itself sends (1, 0) to (1/9, 0).
        close(c.evaluate(1.0 / 16.0).unwrap(), 1.0 / 9.0, 0.0, 1e-12);
        assert_eq!(c.vertex_count(), 17);
    }

    #[test]
    fn koch_alpha_and_moran_residual() {
        let c = FractalCurve::build_koch(3).unwrap();
        assert!((c.alpha() - KOCH_ALPHA).abs() < 1e-15);
        assert!(c.moran_residual().abs() < 1e-12);
    }

    #[test]
    fn endpoints_pinned_at_every_depth() {
        for depth in 0..=6 {
            let c = FractalCurve::build_koch(depth).unwrap();
            close(c.evaluate(0.0).unwrap(), 0.0, 0.0, 1e-12);
            close(c.evaluate(1.0).unwrap(), 1.0, 0.0, 1e-12);
        }
    }

    #[test]
    fn depth_above_limit_is_capacity_error() {
        let err = FractalCurve::build_koch(MAX_DEPTH + 1).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("14"), "error must name the limit: {msg}");
    }

    #[test]
    fn out_of_domain_parameter_is_domain_error() {
        let c = FractalCurve::build_koch(2).unwrap();
        assert!(matches!(c.evaluate(-0.1), Err(Error::Domain { .. })));
        assert!(matches!(c.evaluate(1.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn refinement_keeps_coarse_vertices() {
        for depth in 0..5u32 {
            let coarse = FractalCurve::build_koch(depth).unwrap();
            let fine = FractalCurve::build_koch(depth + 1).unwrap();
            let n = coarse.vertex_count();
            for i in 0..=n - 1 {
                let p = coarse.vertex_point(i);
                let q = fine.vertex_point(i * 4);
                assert!(p.dist(q) <= 1e-12, "vertex {i} moved between depths");
            }
        }
    }

    #[test]
    fn koch_self_similarity_of_first_copy() {
        let fine = FractalCurve::build_koch(6).unwrap();
        let coarse = FractalCurve::build_koch(5).unwrap();
        for k in 0..=40 {
            let u = k as f64 / 40.0;
            let p = fine.evaluate(u / 4.0).unwrap();
            let q = coarse.evaluate(u).unwrap();
            assert!((3.0 * p.x - q.x).abs() <= 1e-10);
            assert!((3.0 * p.y - q.y).abs() <= 1e-10);
        }
    }

    #[test]
    fn ifs_koch_motif_matches_builtin() {
        let koch = FractalCurve::build_koch(3).unwrap();
        let ifs =
            FractalCurve::build_ifs(koch.generator().to_vec(), None, 3).unwrap();
        assert!((ifs.alpha() - KOCH_ALPHA).abs() < 1e-12);
        for i in 0..=ifs.vertex_count() - 1 {
            assert_eq!(ifs.vertex_point(i), koch.vertex_point(i));
        }
    }

    #[test]
    fn ifs_single_identity_map_degenerates_to_line() {
        let maps = vec![Affine2::IDENTITY];
        let c = FractalCurve::build_ifs(maps, None, 0).unwrap();
        assert_eq!(c.alpha(), 1.0);
    }

    #[test]
    fn ifs_mixed_ratios_summing_to_one_give_alpha_one() {
        // Ratios (1/2, 1/4, 1/4) on a straight segment: the Moran sum is
        // exactly 1 at alpha = 1.
        let maps = vec![
            Affine2::new(0.5, 0.0, 0.0, 0.0, 0.5, 0.0),
            Affine2::new(0.25, 0.0, 0.5, 0.0, 0.25, 0.0),
            Affine2::new(0.25, 0.0, 0.75, 0.0, 0.25, 0.0),
        ];
        let c = FractalCurve::build_ifs(maps, None, 4).unwrap();
        assert!((c.alpha() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn ifs_non_chaining_maps_rejected() {
        let maps = vec![
            Affine2::new(0.4, 0.0, 0.0, 0.0, 0.4, 0.0),
            Affine2::new(0.4, 0.0, 0.6, 0.0, 0.4, 0.0),
        ];
        assert!(matches!(
            FractalCurve::build_ifs(maps, None, 1),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn moran_without_root_is_dimension_error() {
        // Ratio powers sum to less than 1 already at alpha = 1.
        assert!(matches!(
            solve_moran(&[0.4, 0.4]),
            Err(Error::Dimension(_))
        ));
        // Still above 1 at alpha = 2.
        assert!(matches!(
            solve_moran(&[0.5, 0.5, 0.5, 0.5, 0.5]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn line_has_alpha_one_and_identity_geometry() {
        let c = FractalCurve::build_line(5).unwrap();
        assert_eq!(c.alpha(), 1.0);
        for k in 0..=10 {
            let u = k as f64 / 10.0;
            close(c.evaluate(u).unwrap(), u, 0.0, 1e-12);
        }
    }

    #[test]
    fn deep_curve_evaluates_by_composition() {
        let deep = FractalCurve::build_koch(13).unwrap();
        assert!(!deep.is_materialized());
        let shallow = FractalCurve::build_koch(10).unwrap();
        // Coarse vertices agree between the two representations.
        for i in [0u64, 1, 5, 17, 4u64.pow(10) - 1, 4u64.pow(10)] {
            let u = shallow.vertex_param(i);
            let p = deep.evaluate(u).unwrap();
            let q = shallow.evaluate(u).unwrap();
            assert!(p.dist(q) <= 1e-10, "mismatch at coarse vertex {i}");
        }
        // Endpoints still pinned.
        close(deep.evaluate(0.0).unwrap(), 0.0, 0.0, 1e-12);
        close(deep.evaluate(1.0).unwrap(), 1.0, 0.0, 1e-9);
    }

    #[test]
    fn vertex_param_uniform_quarters() {
        let c = FractalCurve::build_koch(2).unwrap();
        assert_eq!(c.vertex_param(0), 0.0);
        assert_eq!(c.vertex_param(4), 0.25);
        assert_eq!(c.vertex_param(8), 0.5);
        assert_eq!(c.vertex_param(16), 1.0);
    }

    #[test]
    fn nonuniform_breaks_locate_consistently() {
        let maps = vec![
            Affine2::new(0.5, 0.0, 0.0, 0.0, 0.5, 0.0),
            Affine2::new(0.25, 0.0, 0.5, 0.0, 0.25, 0.0),
            Affine2::new(0.25, 0.0, 0.75, 0.0, 0.25, 0.0),
        ];
        let c = FractalCurve::build_ifs(maps, Some(vec![0.5, 0.75]), 3).unwrap();
        for i in 0..=c.vertex_count() - 1 {
            let u = c.vertex_param(i);
            let p = c.evaluate(u).unwrap();
            let q = c.vertex_point(i);
            assert!(p.dist(q) <= 1e-12, "vertex {i}: {p:?} vs {q:?}");
        }
    }
}
