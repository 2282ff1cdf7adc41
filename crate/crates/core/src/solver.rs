//! Integration of the sigma-form system along a time scale.
//!
//! On a right-scattered point each equation contains only its own forward
//! value, so `x_i(sigma) = (x_i + mu inflow_i) / (1 + mu outflow_i)` solves the
//! system exactly. Dense runs reduce to the classical ODE and are stepped
//! with RK4.

use crate::error::{Error, Result};
use crate::model::{SaiqhParams, State, COMPARTMENTS};
use crate::timescale::TimeScale;

/// Deepest number of step halvings before giving up on a negative RK4 step.
pub const MAX_HALVINGS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub mu: f64,
    pub state: State,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub scale: TimeScale,
    pub params: SaiqhParams,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        &self.samples[self.samples.len() - 1]
    }
}

/// Exact update across a right-scattered point of graininess `mu`.
pub fn step_scattered(params: &SaiqhParams, s: &State, mu: f64) -> Result<State> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidArgument(format!("graininess must be positive, got {mu}")));
    }
    let x = s.as_array();
    let lambda = params.lambda_of(x)?;
    let inflow = params.inflow(x, lambda);
    let outflow = params.outflow(lambda);
    State::new(std::array::from_fn(|i| (x[i] + mu * inflow[i]) / (1.0 + mu * outflow[i])))
}

fn field(params: &SaiqhParams, x: &[f64; COMPARTMENTS]) -> Result<[f64; COMPARTMENTS]> {
    params.rhs_raw(x, x)
}

fn axpy(x: &[f64; COMPARTMENTS], a: f64, k: &[f64; COMPARTMENTS]) -> [f64; COMPARTMENTS] {
    std::array::from_fn(|i| x[i] + a * k[i])
}

fn rk4(params: &SaiqhParams, x: &[f64; COMPARTMENTS], h: f64) -> Result<[f64; COMPARTMENTS]> {
    let k1 = field(params, x)?;
    let k2 = field(params, &axpy(x, h / 2.0, &k1))?;
    let k3 = field(params, &axpy(x, h / 2.0, &k2))?;
    let k4 = field(params, &axpy(x, h, &k3))?;
    Ok(std::array::from_fn(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])))
}

fn rk4_nonnegative(params: &SaiqhParams, x: &[f64; COMPARTMENTS], h: f64, depth: u32) -> Result<[f64; COMPARTMENTS]> {
    // an intermediate stage with N <= 0 is treated like a negative result
    let attempt = rk4(params, x, h);
    let bad = match &attempt {
        Ok(y) => y.iter().position(|v| *v < 0.0 || !v.is_finite()),
        Err(Error::Domain(_)) => Some(0),
        Err(e) => return Err(e.clone()),
    };
    match bad {
        None => attempt,
        Some(component) if depth >= MAX_HALVINGS => Err(Error::SolverNegativity { component: component + 1, h }),
        Some(_) => {
            let mid = rk4_nonnegative(params, x, h / 2.0, depth + 1)?;
            rk4_nonnegative(params, &mid, h / 2.0, depth + 1)
        }
    }
}

/// One RK4 step of size `h` on the continuous system, halving on negativity.
pub fn step_dense(params: &SaiqhParams, s: &State, h: f64) -> Result<State> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    params.lambda_of(s.as_array())?;
    State::new(rk4_nonnegative(params, s.as_array(), h, 0)?)
}

/// Walks [`TimeScale::points`], jumping exactly over scattered points and
/// stepping dense runs with RK4 at the sampling resolution.
pub fn simulate(params: &SaiqhParams, scale: &TimeScale, initial: State) -> Result<Trajectory> {
    let violations = params.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidParams(violations));
    }
    if !(initial.total() > 0.0) {
        return Err(Error::Domain("initial total population must be positive".into()));
    }

    let points = scale.points();
    let mut samples = Vec::with_capacity(points.len());
    let mut state = initial;
    for (i, gp) in points.iter().enumerate() {
        samples.push(Sample { t: gp.t, mu: gp.mu, state });
        let Some(next) = points.get(i + 1) else { break };
        state =
            if gp.mu > 0.0 { step_scattered(params, &state, gp.mu) } else { step_dense(params, &state, next.t - gp.t) }
                .map_err(|e| e.at(gp.t))?;
    }
    Ok(Trajectory { scale: scale.clone(), params: params.clone(), samples })
}
