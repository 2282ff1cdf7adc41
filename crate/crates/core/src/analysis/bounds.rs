//! Eventual lower and upper bounds on every compartment.

use crate::error::{Error, Result};
use crate::model::{SaiqhParams, COMPARTMENTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsSource {
    Supplied,
    Empirical,
}

impl BoundsSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundsSource::Supplied => "supplied",
            BoundsSource::Empirical => "empirical",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBounds {
    pub m: [f64; COMPARTMENTS],
    pub min: f64,
    /// Compartments whose bound collapsed to zero.
    pub degenerate: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpperBounds {
    pub m: [f64; COMPARTMENTS],
    pub max: f64,
}

/// Both bound sets and the band `[m, M]` they imply.
#[derive(Debug, Clone, PartialEq)]
pub struct PermanenceBounds {
    pub lower: [f64; COMPARTMENTS],
    pub upper: [f64; COMPARTMENTS],
    pub m: f64,
    pub big_m: f64,
    pub lambda_lower: f64,
    pub lambda_upper: f64,
    pub source: BoundsSource,
    pub warnings: Vec<String>,
}

fn check_lambda_pair(lambda_lower: f64, lambda_upper: f64) -> Result<()> {
    if !lambda_lower.is_finite() || !lambda_upper.is_finite() || lambda_lower < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "lambda bounds must be finite and nonnegative, got [{lambda_lower}, {lambda_upper}]"
        )));
    }
    if lambda_lower > lambda_upper {
        return Err(Error::InvalidArgument(format!("lambdaL = {lambda_lower} exceeds lambdaU = {lambda_upper}")));
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::DegenerateParameter(format!("{name} = {v} must be positive")))
    }
}

/// Outflow rates of compartments 2..6, which do not involve lambda.
fn fixed_outflows(p: &SaiqhParams) -> Result<[f64; 5]> {
    Ok([
        positive("q*nu + gamma", p.q * p.nu + p.gamma)?,
        positive("delta1 + gamma", p.delta1 + p.gamma)?,
        positive("omega*n + gamma", p.omega * p.n + p.gamma)?,
        positive(
            "delta2*(1-f3) + alpha1*f3 + gamma",
            p.delta2 * (1.0 - p.f2 - p.f3) + p.delta2 * p.f2 + p.alpha1 * p.f3 + p.gamma,
        )?,
        positive("eta*(1-k) + alpha2*k + gamma", p.eta * (1.0 - p.k) + p.alpha2 * p.k + p.gamma)?,
    ])
}

/// Eventual lower bounds `m1..m6`. Note that `m1` uses the upper lambda bound
/// and `m2` the lower one.
pub fn lower_bounds(p: &SaiqhParams, lambda_lower: f64, lambda_upper: f64) -> Result<LowerBounds> {
    check_lambda_pair(lambda_lower, lambda_upper)?;
    let s_out = positive("lambdaU*(1-p) + phi*p + gamma", lambda_upper * (1.0 - p.p) + p.phi * p.p + p.gamma)?;
    let [a_out, i_out, q_out, h_out, ic_out] = fixed_outflows(p)?;

    let m1 = p.recruitment / s_out;
    let m2 = lambda_lower * (1.0 - p.p) * m1 / a_out;
    let m3 = p.q * p.nu * m2 / i_out;
    let m4 = (p.phi * p.p * m1 + p.delta1 * p.f1 * m3) / q_out;
    let m5 = p.delta1 * (1.0 - p.f1) * m3 / h_out;
    let m6 = p.delta2 * p.f2 * m5 / ic_out;
    let m = [m1, m2, m3, m4, m5, m6];
    let degenerate = (0..COMPARTMENTS).filter(|&i| !(m[i] > 0.0)).map(|i| i + 1).collect();
    Ok(LowerBounds { m, min: m.iter().copied().fold(f64::INFINITY, f64::min), degenerate })
}

/// Eventual upper bounds `M1..M6`; requires `gamma > 0` and `lambdaL > 0`.
pub fn upper_bounds(p: &SaiqhParams, lambda_lower: f64, lambda_upper: f64) -> Result<UpperBounds> {
    check_lambda_pair(lambda_lower, lambda_upper)?;
    if !(lambda_lower > 0.0) {
        return Err(Error::InvalidArgument("upper bounds need lambdaL > 0".into()));
    }
    if !(p.gamma > 0.0) {
        return Err(Error::DegenerateParameter("gamma".into()));
    }
    let ceiling = p.recruitment / p.gamma;
    let s_out = positive("lambdaL*(1-p) + phi*p + gamma", lambda_lower * (1.0 - p.p) + p.phi * p.p + p.gamma)?;
    let [a_out, i_out, q_out, h_out, ic_out] = fixed_outflows(p)?;

    let m1 = (p.recruitment + p.omega * p.n * ceiling) / s_out;
    let m2 = lambda_upper * (1.0 - p.p) * m1 / a_out;
    let m3 = p.q * p.nu * m2 / i_out;
    let m4 = (p.phi * p.p * m1 + p.delta1 * p.f1 * m3 + p.delta2 * (1.0 - p.f2 - p.f3) * ceiling) / q_out;
    let m5 = (p.delta1 * (1.0 - p.f1) * m3 + p.eta * (1.0 - p.k) * ceiling) / h_out;
    let m6 = p.delta2 * p.f2 * m5 / ic_out;
    let m = [m1, m2, m3, m4, m5, m6];
    Ok(UpperBounds { m, max: m.iter().copied().fold(f64::NEG_INFINITY, f64::max) })
}

pub fn permanence_bounds(
    p: &SaiqhParams,
    lambda_lower: f64,
    lambda_upper: f64,
    source: BoundsSource,
) -> Result<PermanenceBounds> {
    let lo = lower_bounds(p, lambda_lower, lambda_upper)?;
    let hi = upper_bounds(p, lambda_lower, lambda_upper)?;
    let mut warnings: Vec<String> =
        lo.degenerate.iter().map(|i| format!("m{i} = 0: the band [m, M] is not strictly positive")).collect();
    if lo.min > hi.max {
        warnings.push(format!("m = {} exceeds M = {}", lo.min, hi.max));
    }
    Ok(PermanenceBounds {
        lower: lo.m,
        upper: hi.m,
        m: lo.min,
        big_m: hi.max,
        lambda_lower,
        lambda_upper,
        source,
        warnings,
    })
}
