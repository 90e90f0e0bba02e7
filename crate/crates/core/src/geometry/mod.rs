//! Planar curve geometry shared by both solvers.

mod curve;
mod spline;
mod vec2;

pub use curve::{CurveSpline, InterfaceCurve, Topology, MIN_MARKERS};
pub use spline::{solve_cyclic_tridiagonal, solve_tridiagonal, PeriodicSpline};
pub use vec2::{point_segment_distance, segments_intersect, Vec2};

/// Distance from `p` to the polyline of `curve`, including the closing
/// segment and, for periodic curves, the neighbouring laps.
pub fn distance_to_curve(p: Vec2, curve: &InterfaceCurve) -> (f64, Vec2) {
    let n = curve.len() as isize;
    let laps: &[f64] = if curve.is_closed() { &[0.0] } else { &[-1.0, 0.0, 1.0] };
    let mut best = (f64::INFINITY, Vec2::ZERO);
    for &lap in laps {
        let off = curve.lap_shift() * lap;
        for i in 0..n {
            let (d, q) = point_segment_distance(p, curve.point(i) + off, curve.point(i + 1) + off);
            if d < best.0 {
                best = (d, q);
            }
        }
    }
    best
}
