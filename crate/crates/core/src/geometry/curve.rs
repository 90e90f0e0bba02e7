use serde::{Deserialize, Serialize};

use super::spline::PeriodicSpline;
use super::vec2::{segments_intersect, Vec2};
use crate::error::{Error, Result};

pub const MIN_MARKERS: usize = 8;

/// How the last marker connects back to the first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Topology {
    /// The last marker joins the first.
    Closed,
    /// The curve repeats every `period` in x. The successor of the last
    /// marker is the first marker shifted by one period in the traversal
    /// direction.
    Periodic { period: f64 },
}

/// Ordered chain of interface markers with cumulative chord arclength.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceCurve {
    markers: Vec<Vec2>,
    topology: Topology,
    cumulative: Vec<f64>,
    total: f64,
    shift: Vec2,
}

impl InterfaceCurve {
    pub fn new(markers: Vec<Vec2>, topology: Topology) -> Result<Self> {
        let n = markers.len();
        if n < MIN_MARKERS {
            return Err(Error::InvalidInput(format!(
                "interface needs at least {MIN_MARKERS} markers, got {n}"
            )));
        }
        if markers.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidInput("non-finite marker position".into()));
        }
        let shift = match topology {
            Topology::Closed => Vec2::ZERO,
            Topology::Periodic { period } => {
                if !(period > 0.0) {
                    return Err(Error::InvalidInput("period must be positive".into()));
                }
                let dir = markers[n - 1].x - markers[0].x;
                if dir == 0.0 {
                    return Err(Error::DegenerateCurve(
                        "periodic curve has no net x traversal".into(),
                    ));
                }
                Vec2::new(period * dir.signum(), 0.0)
            }
        };
        let mut cumulative = Vec::with_capacity(n);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for i in 1..n {
            let d = markers[i].distance(markers[i - 1]);
            if d == 0.0 {
                return Err(Error::DegenerateCurve(format!(
                    "markers {} and {} coincide",
                    i - 1,
                    i
                )));
            }
            acc += d;
            cumulative.push(acc);
        }
        let closing = (markers[0] + shift).distance(markers[n - 1]);
        if closing == 0.0 {
            return Err(Error::DegenerateCurve(
                "last marker coincides with the first".into(),
            ));
        }
        let total = acc + closing;
        Ok(Self {
            markers,
            topology,
            cumulative,
            total,
            shift,
        })
    }

    /// Closed curve from a parametric function sampled at `n` equal steps.
    pub fn closed_from_fn(n: usize, f: impl Fn(f64) -> Vec2) -> Result<Self> {
        let pts = (0..n)
            .map(|i| f(2.0 * std::f64::consts::PI * i as f64 / n as f64))
            .collect();
        Self::new(pts, Topology::Closed)
    }

    /// Left-to-right x-periodic graph y = f(x) sampled at `n` equal steps of
    /// one period.
    pub fn periodic_graph(n: usize, period: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let pts = (0..n)
            .map(|i| {
                let x = period * i as f64 / n as f64;
                Vec2::new(x, f(x))
            })
            .collect();
        Self::new(pts, Topology::Periodic { period })
    }

    pub fn len(&self) -> usize {
        self.markers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markers.is_empty()
    }

    pub fn markers(&self) -> &[Vec2] {
        &self.markers
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn cumulative_arclength(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn total_arclength(&self) -> f64 {
        self.total
    }

    pub fn is_closed(&self) -> bool {
        matches!(self.topology, Topology::Closed)
    }

    /// Offset added to a marker when indexing one lap forward.
    pub fn lap_shift(&self) -> Vec2 {
        self.shift
    }

    /// Marker at an extended index: `point(n)` is marker 0 shifted one lap.
    pub fn point(&self, i: isize) -> Vec2 {
        let n = self.markers.len() as isize;
        let lap = i.div_euclid(n);
        let k = i.rem_euclid(n) as usize;
        self.markers[k] + self.shift * lap as f64
    }

    /// Chord length from marker i to marker i+1 (wrapping).
    pub fn segment_length(&self, i: usize) -> f64 {
        let i = i as isize;
        self.point(i + 1).distance(self.point(i))
    }

    pub fn segment_lengths(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.segment_length(i)).collect()
    }

    /// Local arclength weight Δsᵢ, the mean of the two adjacent chords.
    pub fn arclength_weights(&self) -> Vec<f64> {
        let n = self.len();
        let seg = self.segment_lengths();
        (0..n)
            .map(|i| 0.5 * (seg[(i + n - 1) % n] + seg[i]))
            .collect()
    }

    pub fn spacing_ratio(&self) -> f64 {
        let seg = self.segment_lengths();
        let max = seg.iter().cloned().fold(f64::MIN, f64::max);
        let min = seg.iter().cloned().fold(f64::MAX, f64::min);
        max / min
    }

    pub fn min_spacing(&self) -> f64 {
        self.segment_lengths()
            .into_iter()
            .fold(f64::MAX, f64::min)
    }

    /// Unit tangent at each marker from the three-point derivative on the
    /// non-uniform chord parametrization.
    pub fn tangents(&self) -> Vec<Vec2> {
        (0..self.len() as isize)
            .map(|i| {
                let (pm, p0, pp) = (self.point(i - 1), self.point(i), self.point(i + 1));
                let hm = p0.distance(pm);
                let hp = pp.distance(p0);
                let d = (pp - p0) * (hm / (hp * (hm + hp))) + (p0 - pm) * (hp / (hm * (hm + hp)));
                d.normalized()
            })
            .collect()
    }

    /// Unit normal pointing to the right of the traversal direction.
    pub fn normals(&self) -> Vec<Vec2> {
        self.tangents().into_iter().map(|t| Vec2::new(t.y, -t.x)).collect()
    }

    /// Signed curvature per marker from the circle through each marker and
    /// its two neighbours. Positive when the curve turns left, so a
    /// counterclockwise circle of radius R gives 1/R.
    pub fn curvature(&self) -> Result<Vec<f64>> {
        (0..self.len() as isize)
            .map(|i| {
                let (pm, p0, pp) = (self.point(i - 1), self.point(i), self.point(i + 1));
                let a = p0 - pm;
                let b = pp - p0;
                let c = pp - pm;
                let denom = a.norm() * b.norm() * c.norm();
                if denom == 0.0 {
                    return Err(Error::DegenerateCurve(format!(
                        "markers around {i} are degenerate"
                    )));
                }
                Ok(2.0 * a.cross(b) / denom)
            })
            .collect()
    }

    /// Signed enclosed area (closed: shoelace, positive counterclockwise).
    /// For periodic curves: the signed area between the curve and y = 0 over
    /// one period.
    pub fn area(&self) -> f64 {
        let n = self.len() as isize;
        let mut acc = 0.0;
        match self.topology {
            Topology::Closed => {
                for i in 0..n {
                    acc += self.point(i).cross(self.point(i + 1));
                }
                0.5 * acc
            }
            Topology::Periodic { .. } => {
                for i in 0..n {
                    let (p, q) = (self.point(i), self.point(i + 1));
                    acc += 0.5 * (p.y + q.y) * (q.x - p.x);
                }
                acc
            }
        }
    }

    pub fn centroid(&self) -> Vec2 {
        let n = self.len() as f64;
        let s = self.markers.iter().fold(Vec2::ZERO, |acc, p| acc + *p);
        s * (1.0 / n)
    }

    /// Same geometry traversed in the opposite direction, starting from the
    /// same first marker.
    pub fn reversed(&self) -> Self {
        let mut pts = Vec::with_capacity(self.len());
        pts.push(self.markers[0]);
        pts.extend(self.markers[1..].iter().rev().map(|p| *p - self.shift));
        // keep coordinates of the periodic chain within one lap of marker 0
        Self::new(pts, self.topology).expect("reversal preserves validity")
    }

    pub fn map_points(&self, f: impl Fn(Vec2) -> Vec2) -> Result<Self> {
        Self::new(self.markers.iter().map(|p| f(*p)).collect(), self.topology)
    }

    /// Piecewise-linear position at chord arclength `s` (wrapping by laps).
    pub fn position_at(&self, s: f64) -> Vec2 {
        let laps = (s / self.total).floor();
        let ss = s - laps * self.total;
        let n = self.len();
        let i = match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&ss).unwrap())
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let s0 = self.cumulative[i];
        let seg = if i + 1 < n {
            self.cumulative[i + 1] - s0
        } else {
            self.total - s0
        };
        let t = ((ss - s0) / seg).clamp(0.0, 1.0);
        let p0 = self.point(i as isize);
        let p1 = self.point(i as isize + 1);
        p0 + (p1 - p0) * t + self.shift * laps
    }

    /// Spline representation (x(s), y(s)) in the chord parametrization; the
    /// periodic lap shift is carried by a linear trend.
    pub fn spline(&self) -> CurveSpline {
        let n = self.len();
        let total = self.total;
        let shift = self.shift;
        let knots = self.cumulative.clone();
        let xs: Vec<f64> = (0..n)
            .map(|i| self.markers[i].x - shift.x * knots[i] / total)
            .collect();
        let ys: Vec<f64> = (0..n)
            .map(|i| self.markers[i].y - shift.y * knots[i] / total)
            .collect();
        CurveSpline {
            x: PeriodicSpline::new(&knots, &xs, total),
            y: PeriodicSpline::new(&knots, &ys, total),
            total,
            shift,
        }
    }

    /// Resamples the curve at uniform chord-parameter spacing close to
    /// `target_spacing`, keeping the first marker in place.
    pub fn redistribute(&self, target_spacing: f64) -> Result<Self> {
        if !(target_spacing > 0.0) || target_spacing >= self.total / MIN_MARKERS as f64 {
            return Err(Error::InvalidInput(format!(
                "target spacing {target_spacing} must lie in (0, {})",
                self.total / MIN_MARKERS as f64
            )));
        }
        let count = ((self.total / target_spacing).round() as usize).max(MIN_MARKERS);
        self.resample(count)
    }

    /// Resamples to exactly `count` markers at uniform parameter spacing.
    pub fn resample(&self, count: usize) -> Result<Self> {
        if count < MIN_MARKERS {
            return Err(Error::InvalidInput(format!(
                "resample needs at least {MIN_MARKERS} markers"
            )));
        }
        let spline = self.spline();
        let pts = (0..count)
            .map(|k| spline.eval(self.total * k as f64 / count as f64))
            .collect();
        let out = Self::new(pts, self.topology)?;
        if let Some((i, j)) = out.find_self_intersection() {
            return Err(Error::SelfIntersection(i, j));
        }
        Ok(out)
    }

    /// First pair of non-adjacent intersecting segments, if any. Periodic
    /// curves are also checked against their neighbouring laps.
    pub fn find_self_intersection(&self) -> Option<(usize, usize)> {
        let n = self.len();
        let seg = |i: usize, lap: f64| {
            (
                self.point(i as isize) + self.shift * lap,
                self.point(i as isize + 1) + self.shift * lap,
            )
        };
        let laps: &[f64] = match self.topology {
            Topology::Closed => &[0.0],
            Topology::Periodic { .. } => &[-1.0, 0.0, 1.0],
        };
        for i in 0..n {
            let (p1, p2) = seg(i, 0.0);
            let (minx, maxx) = (p1.x.min(p2.x), p1.x.max(p2.x));
            let (miny, maxy) = (p1.y.min(p2.y), p1.y.max(p2.y));
            for &lap in laps {
                for j in 0..n {
                    let adjacent = j == i || (j + 1) % n == i || (i + 1) % n == j;
                    if lap == 0.0 && (adjacent || j < i) {
                        continue;
                    }
                    if lap != 0.0 && adjacent && self.is_closed() {
                        continue;
                    }
                    if lap != 0.0 {
                        // neighbouring lap shares an endpoint with the wrap segments
                        let wrap_touch = (lap > 0.0 && i == n - 1 && j == 0)
                            || (lap < 0.0 && i == 0 && j == n - 1);
                        if wrap_touch {
                            continue;
                        }
                    }
                    let (q1, q2) = seg(j, lap);
                    if q1.x.max(q2.x) < minx
                        || q1.x.min(q2.x) > maxx
                        || q1.y.max(q2.y) < miny
                        || q1.y.min(q2.y) > maxy
                    {
                        continue;
                    }
                    if segments_intersect(p1, p2, q1, q2) {
                        return Some((i, j));
                    }
                }
            }
        }
        None
    }
}

/// Cubic-spline view of an interface curve.
#[derive(Debug, Clone)]
pub struct CurveSpline {
    x: PeriodicSpline,
    y: PeriodicSpline,
    total: f64,
    shift: Vec2,
}

impl CurveSpline {
    pub fn eval(&self, s: f64) -> Vec2 {
        Vec2::new(self.x.eval(s), self.y.eval(s)) + self.shift * (s / self.total)
    }

    pub fn derivative(&self, s: f64) -> Vec2 {
        Vec2::new(self.x.derivative(s), self.y.derivative(s)) + self.shift * (1.0 / self.total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle(n: usize, r: f64) -> InterfaceCurve {
        InterfaceCurve::closed_from_fn(n, |t| Vec2::new(r * t.cos(), r * t.sin())).unwrap()
    }

    #[test]
    fn rejects_too_few_or_coincident_markers() {
        let pts: Vec<Vec2> = (0..5).map(|i| Vec2::new(i as f64, 0.0)).collect();
        assert!(InterfaceCurve::new(pts, Topology::Closed).is_err());
        let mut pts: Vec<Vec2> = (0..10).map(|i| Vec2::new(i as f64, (i as f64).sin())).collect();
        pts[4] = pts[3];
        assert!(matches!(
            InterfaceCurve::new(pts, Topology::Closed),
            Err(Error::DegenerateCurve(_))
        ));
    }

    #[test]
    fn circle_curvature() {
        let c = circle(256, 2.0);
        for k in c.curvature().unwrap() {
            assert!((k - 0.5).abs() < 1e-3);
        }
        assert!((c.area() - 4.0 * PI).abs() < 1e-2);
    }

    #[test]
    fn flat_periodic_line_has_zero_curvature() {
        let c = InterfaceCurve::periodic_graph(64, 1.0, |_| 0.3).unwrap();
        assert!(c.curvature().unwrap().iter().all(|k| *k == 0.0));
        assert!((c.total_arclength() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ellipse_curvature_at_vertex() {
        // closed form ab/(a² sin² t + b² cos² t)^{3/2} at t = 0 is a/b² = 2
        let c = InterfaceCurve::closed_from_fn(512, |t| Vec2::new(2.0 * t.cos(), t.sin())).unwrap();
        let k = c.curvature().unwrap();
        assert!((k[0] - 2.0).abs() < 1e-2, "{}", k[0]);
    }

    #[test]
    fn reversal_negates_curvature() {
        let c = InterfaceCurve::closed_from_fn(100, |t| Vec2::new(2.0 * t.cos(), t.sin() + 0.2 * (3.0 * t).cos()))
            .unwrap();
        let r = c.reversed();
        let k = c.curvature().unwrap();
        let kr = r.curvature().unwrap();
        let n = k.len();
        assert!((k[0] + kr[0]).abs() < 1e-12);
        for i in 1..n {
            assert!((k[i] + kr[n - i]).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_reversal_keeps_wrap() {
        let c = InterfaceCurve::periodic_graph(32, 1.0, |x| 0.1 * (2.0 * PI * x).sin()).unwrap();
        let r = c.reversed();
        assert!((r.total_arclength() - c.total_arclength()).abs() < 1e-12);
        assert_eq!(r.lap_shift(), Vec2::new(-1.0, 0.0));
        assert!((r.area() + c.area()).abs() < 1e-12);
    }

    #[test]
    fn redistribute_idempotent_on_uniform_circle() {
        let c = circle(128, 1.0);
        let spacing = c.segment_length(0);
        let r = c.redistribute(spacing).unwrap();
        assert_eq!(r.len(), c.len());
        for (a, b) in r.markers().iter().zip(c.markers()) {
            assert!(a.distance(*b) < 1e-12);
        }
    }

    #[test]
    fn redistribute_clustered_circle() {
        // markers clustered near t = 0
        let c = InterfaceCurve::closed_from_fn(200, |t| {
            let s = t - 0.6 * t.sin();
            Vec2::new(s.cos(), s.sin())
        })
        .unwrap();
        assert!(c.spacing_ratio() > 3.0);
        let target = 2.0 * PI / 200.0;
        let r = c.redistribute(target).unwrap();
        assert!(r.spacing_ratio() < 1.1);
        let h_old = c.segment_lengths().into_iter().fold(0.0, f64::max);
        let dev = r
            .markers()
            .iter()
            .map(|p| (p.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        // interpolation error bound ~ h⁴ for cubic splines, well under h²
        assert!(dev < h_old * h_old, "{dev} vs {h_old}");
    }

    #[test]
    fn halving_spacing_doubles_count() {
        let c = circle(100, 1.0);
        let a = c.redistribute(0.1).unwrap();
        let b = c.redistribute(0.05).unwrap();
        let diff = b.len() as i64 - 2 * a.len() as i64;
        assert!(diff.abs() <= 1, "{} {}", a.len(), b.len());
    }

    #[test]
    fn redistribute_periodic_keeps_topology() {
        let c = InterfaceCurve::periodic_graph(50, 1.0, |x| 0.1 * (2.0 * PI * x).sin()).unwrap();
        let r = c.redistribute(c.total_arclength() / 80.0).unwrap();
        assert_eq!(r.topology(), c.topology());
        assert_eq!(r.len(), 80);
        assert!((r.total_arclength() - c.total_arclength()).abs() < 1e-4);
        assert!((r.area() - c.area()).abs() < 1e-6);
    }

    #[test]
    fn detects_figure_eight() {
        let c = InterfaceCurve::closed_from_fn(64, |t| Vec2::new(t.sin(), (2.0 * t).sin() * 0.5)).unwrap();
        assert!(c.find_self_intersection().is_some());
        assert!(circle(64, 1.0).find_self_intersection().is_none());
        let p = InterfaceCurve::periodic_graph(64, 1.0, |x| 0.2 * (2.0 * PI * x).sin()).unwrap();
        assert!(p.find_self_intersection().is_none());
    }
}
