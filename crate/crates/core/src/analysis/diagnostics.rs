//! Empirical checks run against simulated trajectories.

use crate::analysis::bounds::PermanenceBounds;
use crate::error::{Error, Result};
use crate::model::{State, COMPARTMENTS};
use crate::solver::{Sample, Trajectory};

/// Samples after the first `transient_fraction` of the run.
pub fn post_transient(traj: &Trajectory, transient_fraction: f64) -> Result<&[Sample]> {
    if !(0.0..1.0).contains(&transient_fraction) {
        return Err(Error::InvalidArgument(format!("transient_fraction must lie in [0, 1), got {transient_fraction}")));
    }
    let start = (transient_fraction * traj.len() as f64).floor() as usize;
    let window = &traj.samples[start.min(traj.len())..];
    if window.is_empty() {
        return Err(Error::InvalidArgument("post-transient window is empty".into()));
    }
    Ok(window)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaRange {
    pub lower: f64,
    pub upper: f64,
}

impl LambdaRange {
    /// Whether the pair can serve as `0 < lambdaL <= lambdaU`.
    pub fn satisfies_h1(&self) -> bool {
        self.lower > 0.0 && self.lower <= self.upper
    }

    pub fn merge(self, other: LambdaRange) -> LambdaRange {
        LambdaRange { lower: self.lower.min(other.lower), upper: self.upper.max(other.upper) }
    }
}

/// Min and max of the force of infection over the post-transient window.
pub fn empirical_lambda_bounds(traj: &Trajectory, transient_fraction: f64) -> Result<LambdaRange> {
    let window = post_transient(traj, transient_fraction)?;
    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    for s in window {
        let l = traj.params.force_of_infection(&s.state).map_err(|e| e.at(s.t))?;
        lower = lower.min(l);
        upper = upper.max(l);
    }
    Ok(LambdaRange { lower, upper })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompartmentRange {
    pub min: f64,
    pub max: f64,
    /// `min - (m - eps)`; negative when the lower bound is broken.
    pub lower_margin: f64,
    /// `(M + eps) - max`; negative when the upper bound is broken.
    pub upper_margin: f64,
}

impl CompartmentRange {
    pub fn ok(&self) -> bool {
        self.lower_margin >= 0.0 && self.upper_margin >= 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PermanenceReport {
    pub compartments: [CompartmentRange; COMPARTMENTS],
    pub epsilon: f64,
    pub window_len: usize,
}

impl PermanenceReport {
    pub fn passed(&self) -> bool {
        self.compartments.iter().all(CompartmentRange::ok)
    }

    /// Names (`x1`..`x6`) of compartments leaving the band.
    pub fn failing(&self) -> Vec<String> {
        self.compartments.iter().enumerate().filter(|(_, c)| !c.ok()).map(|(i, _)| format!("x{}", i + 1)).collect()
    }
}

/// Checks `m - eps <= x_i(t) <= M + eps` after the transient, `eps = 1e-6 M`.
pub fn permanence_check(
    traj: &Trajectory,
    bounds: &PermanenceBounds,
    transient_fraction: f64,
) -> Result<PermanenceReport> {
    let window = post_transient(traj, transient_fraction)?;
    let epsilon = 1e-6 * bounds.big_m;
    let compartments = std::array::from_fn(|i| {
        let (min, max) = window
            .iter()
            .map(|s| s.state.get(i))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        CompartmentRange {
            min,
            max,
            lower_margin: min - (bounds.m - epsilon),
            upper_margin: (bounds.big_m + epsilon) - max,
        }
    });
    Ok(PermanenceReport { compartments, epsilon, window_len: window.len() })
}

fn same_time(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// State at `t`: an exact sample, or a linear interpolation between two
/// samples of a dense run. `None` when `t` is not on the sampled scale.
fn state_at(samples: &[Sample], t: f64) -> Option<[f64; COMPARTMENTS]> {
    let k = samples.partition_point(|s| s.t < t);
    for j in [k.wrapping_sub(1), k] {
        if let Some(s) = samples.get(j) {
            if same_time(s.t, t) {
                return Some(*s.state.as_array());
            }
        }
    }
    let (lo, hi) = (samples.get(k.checked_sub(1)?)?, samples.get(k)?);
    if lo.mu > 0.0 {
        // t falls inside a gap
        return None;
    }
    let w = (t - lo.t) / (hi.t - lo.t);
    let (a, b) = (lo.state.as_array(), hi.state.as_array());
    Some(std::array::from_fn(|i| a[i] + w * (b[i] - a[i])))
}

fn max_abs_diff(a: &[f64; COMPARTMENTS], b: &State) -> f64 {
    a.iter().zip(b.as_array()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `sup_t max_i |x_i(t + tau) - x_i(t)|` over samples `t >= t_start` whose
/// shift lands on the scale.
pub fn translation_defect_from(traj: &Trajectory, tau: f64, t_start: f64) -> Result<f64> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidArgument(format!("tau must be nonnegative, got {tau}")));
    }
    let mut sup: Option<f64> = None;
    for s in traj.samples.iter().filter(|s| s.t >= t_start) {
        if let Some(shifted) = state_at(&traj.samples, s.t + tau) {
            let d = max_abs_diff(&shifted, &s.state);
            sup = Some(sup.map_or(d, |m: f64| m.max(d)));
        }
    }
    sup.ok_or_else(|| Error::InvalidArgument(format!("no sample pair (t, t + {tau}) lies on the time scale")))
}

pub fn translation_defect(traj: &Trajectory, tau: f64) -> Result<f64> {
    translation_defect_from(traj, tau, f64::NEG_INFINITY)
}
