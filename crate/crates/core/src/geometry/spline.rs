//! Periodic cubic spline interpolation on non-uniform knots.

/// Solves a cyclic tridiagonal system in place using the Sherman–Morrison
/// correction. `lower[i]` couples row i to i-1 (wrapping), `upper[i]` to i+1.
pub fn solve_cyclic_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert!(n >= 3);
    let alpha = upper[n - 1]; // row n-1 couples to 0
    let beta = lower[0]; // row 0 couples to n-1
    let gamma = -diag[0];

    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;

    let x = solve_tridiagonal(lower, &d, upper, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(lower, &d, upper, &u);

    let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

/// Thomas algorithm; `lower[0]` and `upper[n-1]` are ignored.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = if i + 1 < n { upper[i] / m } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Periodic cubic spline y(t) with y(t + period) = y(t).
#[derive(Debug, Clone)]
pub struct PeriodicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
    period: f64,
}

impl PeriodicSpline {
    /// `knots` must be strictly increasing with `knots[n-1] < knots[0] + period`.
    pub fn new(knots: &[f64], values: &[f64], period: f64) -> Self {
        let n = knots.len();
        assert_eq!(n, values.len());
        let h: Vec<f64> = (0..n)
            .map(|i| {
                if i + 1 < n {
                    knots[i + 1] - knots[i]
                } else {
                    knots[0] + period - knots[n - 1]
                }
            })
            .collect();
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let hp = h[(i + n - 1) % n];
            let hn = h[i];
            lower[i] = hp;
            diag[i] = 2.0 * (hp + hn);
            upper[i] = hn;
            let yp = values[(i + n - 1) % n];
            let yn = values[(i + 1) % n];
            rhs[i] = 6.0 * ((yn - values[i]) / hn - (values[i] - yp) / hp);
        }
        let second = solve_cyclic_tridiagonal(&lower, &diag, &upper, &rhs);
        Self {
            knots: knots.to_vec(),
            values: values.to_vec(),
            second,
            period,
        }
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let t0 = self.knots[0];
        let mut tt = (t - t0).rem_euclid(self.period) + t0;
        if tt >= t0 + self.period {
            tt = t0;
        }
        // last knot with knots[i] <= tt
        let i = match self.knots.binary_search_by(|k| k.partial_cmp(&tt).unwrap()) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        (i, tt)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.knots.len();
        let (i, tt) = self.locate(t);
        let j = (i + 1) % n;
        let ti = self.knots[i];
        let h = if i + 1 < n {
            self.knots[i + 1] - ti
        } else {
            self.knots[0] + self.period - ti
        };
        let a = (ti + h - tt) / h;
        let b = (tt - ti) / h;
        let (mi, mj) = (self.second[i], self.second[j]);
        a * self.values[i]
            + b * self.values[j]
            + ((a * a * a - a) * mi + (b * b * b - b) * mj) * h * h / 6.0
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let n = self.knots.len();
        let (i, tt) = self.locate(t);
        let j = (i + 1) % n;
        let ti = self.knots[i];
        let h = if i + 1 < n {
            self.knots[i + 1] - ti
        } else {
            self.knots[0] + self.period - ti
        };
        let a = (ti + h - tt) / h;
        let b = (tt - ti) / h;
        let (mi, mj) = (self.second[i], self.second[j]);
        (self.values[j] - self.values[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * mi
            + (3.0 * b * b - 1.0) / 6.0 * h * mj
    }
}
