//! Stability constants and the uniform asymptotic stability certificate.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{SaiqhParams, COMPARTMENTS};
use crate::timescale::TimeScale;

/// Contraction (`a`) and coupling (`b`) constants of the absolute-difference
/// Lyapunov function.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityConstants {
    pub a: [f64; COMPARTMENTS],
    pub b: [f64; COMPARTMENTS],
    pub a_min: f64,
    pub b_max: f64,
}

pub fn stability_constants(
    p: &SaiqhParams,
    lambda_lower: f64,
    lambda_upper: f64,
    big_m: f64,
) -> Result<StabilityConstants> {
    if !(p.recruitment > 0.0) {
        return Err(Error::DegenerateParameter("Lambda".into()));
    }
    let coupling = 2.0 * p.gamma * p.beta * (1.0 - p.p) * big_m / p.recruitment;
    let a = [
        lambda_lower * (1.0 - p.p) + p.phi * p.p + p.gamma,
        p.q * p.nu + p.gamma,
        p.delta1 + p.gamma,
        p.omega * p.n + p.gamma,
        p.delta2 * (1.0 - p.f3) + p.alpha1 * p.f3 + p.gamma,
        p.eta * (1.0 - p.k) + p.alpha2 * p.k + p.gamma,
    ];
    let b = [
        lambda_upper * (1.0 - p.p) + p.phi * p.p,
        p.q * p.nu + p.l_a * coupling,
        p.delta1 + coupling,
        p.omega * p.n,
        p.delta2 * (1.0 - p.f3) + p.l_h * coupling,
        p.eta * (1.0 - p.k),
    ];
    Ok(StabilityConstants {
        a,
        b,
        a_min: a.iter().copied().fold(f64::INFINITY, f64::min),
        b_max: b.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Decay rate `(A - B) / (1 + A mu_sup)`.
pub fn decay_rate(a_min: f64, b_max: f64, mu_sup: f64) -> f64 {
    (a_min - b_max) / (1.0 + a_min * mu_sup)
}

/// `1 - psi mu`, the one-step contraction factor at a point of graininess `mu`.
pub fn contraction_factor(psi: f64, mu: f64) -> f64 {
    1.0 - psi * mu
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Certified,
    Rejected(String),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Certified => f.write_str("certified"),
            Verdict::Rejected(_) => f.write_str("rejected"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityCertificate {
    pub constants: StabilityConstants,
    pub lambda_lower: f64,
    pub lambda_upper: f64,
    pub big_m: f64,
    pub h1_holds: bool,
    pub h2_holds: bool,
    pub psi: f64,
    pub mu_sup: f64,
    pub regressive_ok: bool,
    pub verdict: Verdict,
}

impl StabilityCertificate {
    pub fn a_min(&self) -> f64 {
        self.constants.a_min
    }

    pub fn b_max(&self) -> f64 {
        self.constants.b_max
    }
}

/// Evaluates both hypotheses, the decay rate and its regressivity on `scale`.
/// Failed hypotheses produce a rejected verdict; only a degenerate
/// recruitment rate is an error.
pub fn certify(
    p: &SaiqhParams,
    scale: &TimeScale,
    lambda_lower: f64,
    lambda_upper: f64,
    big_m: f64,
) -> Result<StabilityCertificate> {
    let constants = stability_constants(p, lambda_lower, lambda_upper, big_m)?;
    let h1_holds = lambda_lower > 0.0 && lambda_lower <= lambda_upper && lambda_upper.is_finite();
    let h2_holds = constants.b_max < constants.a_min;
    let mu_sup = scale.mu_sup();
    let psi = decay_rate(constants.a_min, constants.b_max, mu_sup);
    let regressive_ok = psi.is_finite() && scale.regressive_positive(-psi);

    let verdict = if !h1_holds {
        Verdict::Rejected("(H1) 0<lambdaL<=lambdaU fails".into())
    } else if !h2_holds {
        Verdict::Rejected("(H2) B<A fails".into())
    } else if !(psi > 0.0) {
        Verdict::Rejected("psi <= 0".into())
    } else if !regressive_ok {
        Verdict::Rejected("-psi is not positively regressive on the time scale".into())
    } else {
        Verdict::Certified
    };

    Ok(StabilityCertificate {
        constants,
        lambda_lower,
        lambda_upper,
        big_m,
        h1_holds,
        h2_holds,
        psi,
        mu_sup,
        regressive_ok,
        verdict,
    })
}
