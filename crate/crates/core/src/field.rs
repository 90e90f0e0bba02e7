//! Uniform 2D grid samples with periodic x and periodic or fixed-value y.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;

pub const MIN_GRID: usize = 8;

/// Boundary treatment in y. `Fixed` keeps the first and last rows at their
/// values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryY {
    #[default]
    Periodic,
    Fixed,
}

/// Node-centred samples `values[j * nx + i]` at `(i·hx, j·hy)`.
///
/// With periodic y the nodes cover `[0, Ly)`; with fixed y they cover
/// `[0, Ly]` so that `hy = Ly / (ny - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2D {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    boundary: BoundaryY,
    values: Vec<f64>,
}

impl ScalarField2D {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64, boundary: BoundaryY) -> Result<Self> {
        if nx < MIN_GRID || ny < MIN_GRID {
            return Err(Error::InvalidInput(format!(
                "grid {nx}x{ny} is smaller than {MIN_GRID}x{MIN_GRID}"
            )));
        }
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return Err(Error::InvalidInput("domain extents must be positive".into()));
        }
        Ok(Self {
            nx,
            ny,
            lx,
            ly,
            boundary,
            values: vec![0.0; nx * ny],
        })
    }

    pub fn from_fn(
        nx: usize,
        ny: usize,
        lx: f64,
        ly: f64,
        boundary: BoundaryY,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let mut field = Self::new(nx, ny, lx, ly, boundary)?;
        let (hx, hy) = (field.hx(), field.hy());
        for j in 0..ny {
            for i in 0..nx {
                field.values[j * nx + i] = f(i as f64 * hx, j as f64 * hy);
            }
        }
        Ok(field)
    }

    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.nx * self.ny {
            return Err(Error::InvalidInput("value count does not match grid".into()));
        }
        Ok(Self {
            values,
            ..self.clone()
        })
    }

    pub fn filled(&self, v: f64) -> Self {
        Self {
            values: vec![v; self.values.len()],
            ..self.clone()
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn lx(&self) -> f64 {
        self.lx
    }
    pub fn ly(&self) -> f64 {
        self.ly
    }
    pub fn boundary(&self) -> BoundaryY {
        self.boundary
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn hx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        match self.boundary {
            BoundaryY::Periodic => self.ly / self.ny as f64,
            BoundaryY::Fixed => self.ly / (self.ny - 1) as f64,
        }
    }

    pub fn same_grid(&self, o: &Self) -> bool {
        self.nx == o.nx
            && self.ny == o.ny
            && self.lx == o.lx
            && self.ly == o.ly
            && self.boundary == o.boundary
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[j * self.nx + i] = v;
    }

    pub fn node(&self, i: usize, j: usize) -> Vec2 {
        Vec2::new(i as f64 * self.hx(), j as f64 * self.hy())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), v| (lo.min(*v), hi.max(*v)))
    }

    /// Trapezoid-rule integral (the periodic sum in periodic directions).
    pub fn integral(&self) -> f64 {
        let (hx, hy) = (self.hx(), self.hy());
        let mut acc = 0.0;
        for j in 0..self.ny {
            let w = match self.boundary {
                BoundaryY::Fixed if j == 0 || j == self.ny - 1 => 0.5,
                _ => 1.0,
            };
            let row: f64 = self.values[j * self.nx..(j + 1) * self.nx].iter().sum();
            acc += w * row;
        }
        acc * hx * hy
    }

    /// Five-point Laplacian at node (i, j). Fixed boundary rows return 0.
    pub fn laplacian_at(&self, i: usize, j: usize) -> f64 {
        let nx = self.nx;
        let ny = self.ny;
        let (ip, im) = ((i + 1) % nx, (i + nx - 1) % nx);
        let (jp, jm) = match self.boundary {
            BoundaryY::Periodic => ((j + 1) % ny, (j + ny - 1) % ny),
            BoundaryY::Fixed => {
                if j == 0 || j == ny - 1 {
                    return 0.0;
                }
                (j + 1, j - 1)
            }
        };
        let c = self.at(i, j);
        let (hx, hy) = (self.hx(), self.hy());
        (self.at(ip, j) - 2.0 * c + self.at(im, j)) / (hx * hx)
            + (self.at(i, jp) - 2.0 * c + self.at(i, jm)) / (hy * hy)
    }

    pub fn laplacian(&self) -> Self {
        let mut out = self.filled(0.0);
        for j in 0..self.ny {
            for i in 0..self.nx {
                out.values[j * self.nx + i] = self.laplacian_at(i, j);
            }
        }
        out
    }

    /// Bilinear interpolation; periodic in x, periodic or clamped in y.
    pub fn sample(&self, p: Vec2) -> f64 {
        let (hx, hy) = (self.hx(), self.hy());
        let fx = (p.x / hx).rem_euclid(self.nx as f64);
        let mut i0 = fx.floor() as usize;
        let mut tx = fx - i0 as f64;
        if i0 >= self.nx {
            i0 = 0;
            tx = 0.0;
        }
        let i1 = (i0 + 1) % self.nx;
        let (j0, j1, ty) = match self.boundary {
            BoundaryY::Periodic => {
                let fy = (p.y / hy).rem_euclid(self.ny as f64);
                let mut j0 = fy.floor() as usize;
                let mut ty = fy - j0 as f64;
                if j0 >= self.ny {
                    j0 = 0;
                    ty = 0.0;
                }
                (j0, (j0 + 1) % self.ny, ty)
            }
            BoundaryY::Fixed => {
                let fy = (p.y / hy).clamp(0.0, (self.ny - 1) as f64);
                let j0 = (fy.floor() as usize).min(self.ny - 2);
                (j0, j0 + 1, fy - j0 as f64)
            }
        };
        let v00 = self.at(i0, j0);
        let v10 = self.at(i1, j0);
        let v01 = self.at(i0, j1);
        let v11 = self.at(i1, j1);
        (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11)
    }

    /// Cyclic shift by whole cells in x and (periodic y only) y.
    pub fn shifted(&self, di: isize, dj: isize) -> Self {
        let mut out = self.clone();
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        for j in 0..ny {
            for i in 0..nx {
                let si = (i + di).rem_euclid(nx) as usize;
                let sj = match self.boundary {
                    BoundaryY::Periodic => (j + dj).rem_euclid(ny) as usize,
                    BoundaryY::Fixed => j as usize,
                };
                out.values[sj * self.nx + si] = self.values[(j * nx + i) as usize];
            }
        }
        out
    }
}
