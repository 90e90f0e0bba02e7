//! Zero-contour extraction by marching squares with linear edge
//! interpolation.
//!
//! Chains are oriented with φ > 0 on the right of the traversal direction, so
//! the core curvature of an extracted contour is the divergence of the unit
//! normal pointing into the φ > 0 phase.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{BoundaryY, ScalarField2D};
use crate::geometry::{InterfaceCurve, Topology, Vec2};

/// Extracted interface plus the contours that were discarded.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub curve: InterfaceCurve,
    /// Arclengths of the other closed or periodic contours found. A
    /// non-empty list means the topology was ambiguous.
    pub discarded: Vec<f64>,
}

impl Extraction {
    pub fn is_ambiguous(&self) -> bool {
        !self.discarded.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

struct Grid<'a> {
    f: &'a ScalarField2D,
    nx: usize,
    ny: usize,
    hx: f64,
    hy: f64,
}

impl Grid<'_> {
    fn value(&self, i: usize, j: usize) -> f64 {
        self.f.at(i % self.nx, j % self.ny)
    }

    /// Crossing point on an edge, in coordinates within one lap of the grid.
    fn point(&self, e: Edge) -> Vec2 {
        match e {
            Edge::H(i, j) => {
                let (a, b) = (self.value(i, j), self.value(i + 1, j));
                let t = a / (a - b);
                Vec2::new((i as f64 + t) * self.hx, j as f64 * self.hy)
            }
            Edge::V(i, j) => {
                let (a, b) = (self.value(i, j), self.value(i, j + 1));
                let t = a / (a - b);
                Vec2::new(i as f64 * self.hx, (j as f64 + t) * self.hy)
            }
        }
    }
}

fn positive(v: f64) -> bool {
    v >= 0.0
}

/// Marching-squares segments keyed by entry edge.
fn segments(g: &Grid) -> HashMap<Edge, Edge> {
    let cells_y = match g.f.boundary() {
        BoundaryY::Periodic => g.ny,
        BoundaryY::Fixed => g.ny - 1,
    };
    let mut map = HashMap::new();
    for j in 0..cells_y {
        let jn = (j + 1) % g.ny;
        for i in 0..g.nx {
            let inx = (i + 1) % g.nx;
            // CCW corners and edges: bottom, right, top, left
            let c = [
                g.value(i, j),
                g.value(inx, j),
                g.value(inx, jn),
                g.value(i, jn),
            ];
            let edges = [Edge::H(i, j), Edge::V(inx, j), Edge::H(i, jn), Edge::V(i, j)];
            let mut entries = Vec::with_capacity(2);
            let mut exits = Vec::with_capacity(2);
            for k in 0..4 {
                let (a, b) = (positive(c[k]), positive(c[(k + 1) % 4]));
                if !a && b {
                    entries.push(k);
                } else if a && !b {
                    exits.push(k);
                }
            }
            match entries.len() {
                0 => {}
                1 => {
                    map.insert(edges[entries[0]], edges[exits[0]]);
                }
                _ => {
                    let centre = 0.25 * (c[0] + c[1] + c[2] + c[3]);
                    for &e in &entries {
                        let x = if positive(centre) { (e + 3) % 4 } else { (e + 1) % 4 };
                        map.insert(edges[e], edges[x]);
                    }
                }
            }
        }
    }
    map
}

struct Chain {
    points: Vec<Vec2>,
    wrap_x: i64,
    wrap_y: i64,
}

fn follow_chains(g: &Grid, mut map: HashMap<Edge, Edge>) -> Result<Vec<Chain>> {
    let lx = g.f.lx();
    let ly = g.f.ly();
    let mut chains = Vec::new();
    // deterministic start order
    let mut starts: Vec<Edge> = map.keys().copied().collect();
    starts.sort_by_key(|e| match *e {
        Edge::H(i, j) => (j, i, 0),
        Edge::V(i, j) => (j, i, 1),
    });
    for start in starts {
        if !map.contains_key(&start) {
            continue;
        }
        let first = g.point(start);
        let mut points = vec![first];
        let mut offset = Vec2::ZERO;
        let mut prev = first;
        let mut edge = start;
        loop {
            let next = map.remove(&edge).ok_or_else(|| {
                Error::UnsupportedTopology("open contour reaches the domain boundary".into())
            })?;
            let raw = g.point(next);
            let mut p = raw + offset;
            let d = p - prev;
            if d.x > 0.5 * lx {
                offset.x -= lx;
            } else if d.x < -0.5 * lx {
                offset.x += lx;
            }
            if d.y > 0.5 * ly {
                offset.y -= ly;
            } else if d.y < -0.5 * ly {
                offset.y += ly;
            }
            p = raw + offset;
            if next == start {
                let wrap = p - first;
                chains.push(Chain {
                    points,
                    wrap_x: (wrap.x / lx).round() as i64,
                    wrap_y: (wrap.y / ly).round() as i64,
                });
                break;
            }
            points.push(p);
            prev = p;
            edge = next;
        }
    }
    Ok(chains)
}

fn dedupe(points: Vec<Vec2>, shift: Vec2, tol: f64) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = Vec::with_capacity(points.len());
    for p in points {
        if out.last().is_none_or(|q| q.distance(p) > tol) {
            out.push(p);
        }
    }
    while out.len() > 1 && (out[0] + shift).distance(*out.last().unwrap()) <= tol {
        out.pop();
    }
    out
}

fn chain_length(points: &[Vec2], shift: Vec2) -> f64 {
    let n = points.len();
    let mut acc: f64 = points.windows(2).map(|w| w[0].distance(w[1])).sum();
    if n > 1 {
        acc += (points[0] + shift).distance(points[n - 1]);
    }
    acc
}

/// Extracts the φ = 0 contour. The longest closed or x-periodic chain is
/// returned; any others are listed in [`Extraction::discarded`].
pub fn extract_interface(phi: &ScalarField2D) -> Result<Extraction> {
    let (lo, hi) = phi.min_max();
    if !(lo < 0.0 && hi >= 0.0) {
        return Err(Error::NoInterface);
    }
    let g = Grid {
        f: phi,
        nx: phi.nx(),
        ny: phi.ny(),
        hx: phi.hx(),
        hy: phi.hy(),
    };
    let chains = follow_chains(&g, segments(&g))?;
    let tol = 1e-10 * g.hx.min(g.hy);
    let mut candidates: Vec<(f64, Vec<Vec2>, Topology)> = Vec::new();
    for c in chains {
        let topology = match (c.wrap_x, c.wrap_y) {
            (0, 0) => Topology::Closed,
            (wx, 0) if wx.abs() == 1 => Topology::Periodic { period: phi.lx() },
            _ => {
                return Err(Error::UnsupportedTopology(format!(
                    "contour wraps ({}, {}) times",
                    c.wrap_x, c.wrap_y
                )))
            }
        };
        let shift = Vec2::new(c.wrap_x as f64 * phi.lx(), 0.0);
        let pts = dedupe(c.points, shift, tol);
        let len = chain_length(&pts, shift);
        candidates.push((len, pts, topology));
    }
    candidates.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut iter = candidates.into_iter();
    let (_, pts, topology) = iter.next().ok_or(Error::NoInterface)?;
    let curve = InterfaceCurve::new(pts, topology)?;
    let discarded = iter.map(|(len, _, _)| len).collect();
    Ok(Extraction { curve, discarded })
}
