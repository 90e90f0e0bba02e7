use crate::error::{Error, Result};

/// One driven run: measured flux jump [∂u/∂n]₊₋ and normal velocity v.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpSample {
    pub flux_jump: f64,
    pub velocity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingReport {
    /// Least-squares slope of −flux_jump against v through the origin.
    pub slope: f64,
    /// Slope and intercept of the unconstrained line fit.
    pub free_slope: f64,
    pub free_intercept: f64,
    pub configured: f64,
    /// |slope − configured| / |configured|.
    pub relative_deviation: f64,
    pub runs: usize,
}

/// Regresses −[∂u/∂n] on v and compares the slope with the configured c₂².
pub fn verify_matching_constant(runs: &[JumpSample], configured: f64) -> Result<MatchingReport> {
    if runs.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} runs, need at least 3",
            runs.len()
        )));
    }
    let vmax = runs.iter().fold(0.0f64, |m, r| m.max(r.velocity.abs()));
    let (lo, hi) = runs
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), r| (lo.min(r.velocity), hi.max(r.velocity)));
    if hi - lo <= 1e-9 * vmax.max(1.0) {
        return Err(Error::InsufficientData(
            "velocity spread below the noise floor".into(),
        ));
    }
    let n = runs.len() as f64;
    let (mut sxx, mut sxy, mut sx, mut sy) = (0.0, 0.0, 0.0, 0.0);
    for r in runs {
        let (x, y) = (r.velocity, -r.flux_jump);
        sxx += x * x;
        sxy += x * y;
        sx += x;
        sy += y;
    }
    let slope = sxy / sxx;
    let (mx, my) = (sx / n, sy / n);
    let var = sxx / n - mx * mx;
    let cov = sxy / n - mx * my;
    let free_slope = cov / var;
    let free_intercept = my - free_slope * mx;
    Ok(MatchingReport {
        slope,
        free_slope,
        free_intercept,
        configured,
        relative_deviation: ((slope - configured) / configured).abs(),
        runs: runs.len(),
    })
}
