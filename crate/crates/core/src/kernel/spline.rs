//! Natural cubic interpolating splines with chord-length parameterization.

use thiserror::Error;

use super::geom::Vec2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SplineError {
    #[error("spline needs at least 3 points")]
    TooFewPoints,
    #[error("consecutive spline points must be distinct (point {0})")]
    DuplicatePoint(usize),
}

/// Piecewise-cubic planar curve through an ordered point list, parameterized
/// over [0,1] by normalized cumulative chord length. The second derivative
/// vanishes at both ends (natural boundary).
#[derive(Debug, Clone, PartialEq)]
pub struct Spline2 {
    points: Vec<Vec2>,
    knots: Vec<f64>,
    ddx: Vec<f64>,
    ddy: Vec<f64>,
}

impl Spline2 {
    pub fn fit(points: &[Vec2]) -> Result<Spline2, SplineError> {
        if points.len() < 3 {
            return Err(SplineError::TooFewPoints);
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[0].dist(w[1]) == 0.0 {
                return Err(SplineError::DuplicatePoint(i + 1));
            }
        }
        let n = points.len();
        let mut knots = Vec::with_capacity(n);
        let mut acc = 0.0;
        knots.push(0.0);
        for w in points.windows(2) {
            acc += w[0].dist(w[1]);
            knots.push(acc);
        }
        for k in knots.iter_mut() {
            *k /= acc;
        }
        let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.y).collect();
        let ddx = natural_second_derivatives(&knots, &xs);
        let ddy = natural_second_derivatives(&knots, &ys);
        Ok(Spline2 { points: points.to_vec(), knots, ddx, ddy })
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    /// Exact piecewise-polynomial evaluation at `t ∈ [0,1]` (clamped).
    pub fn eval(&self, t: f64) -> Vec2 {
        let t = t.clamp(0.0, 1.0);
        let i = match self.knots.binary_search_by(|k| k.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(self.knots.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.knots.len() - 2),
        };
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - t) / h;
        let b = (t - self.knots[i]) / h;
        let cubic = |vals: &[f64], dd: &[f64]| {
            a * vals[i]
                + b * vals[i + 1]
                + ((a * a * a - a) * dd[i] + (b * b * b - b) * dd[i + 1]) * h * h / 6.0
        };
        let xs: Vec<f64> = self.points.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p.y).collect();
        Vec2::new(cubic(&xs, &self.ddx), cubic(&ys, &self.ddy))
    }
}

/// Solves for second derivatives of the natural cubic spline through
/// `(knots[i], vals[i])` via the Thomas algorithm.
fn natural_second_derivatives(knots: &[f64], vals: &[f64]) -> Vec<f64> {
    let n = knots.len();
    let mut dd = vec![0.0; n];
    if n < 3 {
        return dd;
    }
    let m = n - 2; // interior unknowns
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        let h0 = knots[i + 1] - knots[i];
        let h1 = knots[i + 2] - knots[i + 1];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((vals[i + 2] - vals[i + 1]) / h1 - (vals[i + 1] - vals[i]) / h0);
    }
    // forward sweep (the sub-diagonal entry equals the previous upper)
    for i in 1..m {
        let lower = knots[i + 1] - knots[i];
        let w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut sol = vec![0.0; m];
    sol[m - 1] = rhs[m - 1] / diag[m - 1];
    for i in (0..m - 1).rev() {
        sol[i] = (rhs[i] - upper[i] * sol[i + 1]) / diag[i];
    }
    dd[1..=m].copy_from_slice(&sol);
    dd
}
