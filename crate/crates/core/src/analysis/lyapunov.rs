//! The absolute-difference Lyapunov function and its decay along trajectory
//! pairs.

use crate::error::{Error, Result};
use crate::model::State;
use crate::solver::Trajectory;

/// Relative slack on the integrated envelope.
pub const ENVELOPE_SLACK: f64 = 1e-6;
/// Per-step tolerance, relative to `V(t0)`.
pub const STEP_TOLERANCE: f64 = 1e-9;

/// `V = sum |x_i - xhat_i|`.
pub fn lyapunov_v(z: &State, zhat: &State) -> f64 {
    z.as_array().iter().zip(zhat.as_array()).map(|(a, b)| (a - b).abs()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayPoint {
    pub t: f64,
    pub v: f64,
    /// `V(t0) e_{-psi}(t, t0)`.
    pub envelope: f64,
    /// One-step check from the previous sample; `true` at the first sample.
    pub step_ok: bool,
    pub envelope_ok: bool,
}

impl DecayPoint {
    pub fn ok(&self) -> bool {
        self.step_ok && self.envelope_ok
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub psi: f64,
    pub points: Vec<DecayPoint>,
    /// Smallest `bound - V` seen over all checks; negative means a violation.
    pub worst_margin: f64,
}

impl DecayReport {
    pub fn passed(&self) -> bool {
        self.points.iter().all(DecayPoint::ok)
    }

    pub fn violations(&self) -> usize {
        self.points.iter().filter(|p| !p.ok()).count()
    }
}

/// Checks `V(sigma) <= (1 - psi mu) V` at scattered points,
/// `V(t + h) <= exp(-psi h) V(t)` along dense runs, and the integrated
/// envelope `V(t) <= V(t0) e_{-psi}(t, t0) (1 + 1e-6)`. Violations are
/// reported, never raised.
pub fn lyapunov_decay_check(a: &Trajectory, b: &Trajectory, psi: f64) -> Result<DecayReport> {
    if a.scale != b.scale || a.len() != b.len() {
        return Err(Error::InvalidArgument("trajectories live on different time scales".into()));
    }
    if a.samples.iter().zip(&b.samples).any(|(x, y)| x.t != y.t) {
        return Err(Error::InvalidArgument("trajectory sample times differ".into()));
    }
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty trajectories".into()));
    }

    let v0 = lyapunov_v(&a.first().state, &b.first().state);
    let tol = STEP_TOLERANCE * v0;
    let mut points = Vec::with_capacity(a.len());
    let mut worst = f64::INFINITY;
    let mut envelope = v0;
    let mut prev: Option<(f64, f64, f64)> = None; // (t, mu, V)

    for (sa, sb) in a.samples.iter().zip(&b.samples) {
        let v = lyapunov_v(&sa.state, &sb.state);
        let mut step_ok = true;
        if let Some((t_prev, mu_prev, v_prev)) = prev {
            let factor = if mu_prev > 0.0 { 1.0 - psi * mu_prev } else { (-psi * (sa.t - t_prev)).exp() };
            envelope *= factor;
            let bound = v_prev * factor + tol;
            worst = worst.min(bound - v);
            step_ok = v <= bound;
        }
        let env_bound = envelope * (1.0 + ENVELOPE_SLACK);
        worst = worst.min(env_bound - v);
        points.push(DecayPoint { t: sa.t, v, envelope, step_ok, envelope_ok: v <= env_bound });
        prev = Some((sa.t, sa.mu, v));
    }

    Ok(DecayReport { psi, points, worst_margin: worst })
}
