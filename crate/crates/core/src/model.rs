//! SAIQH parameters, compartment state and the delta-form right-hand side.
//!
//! Compartments are indexed `x1..x6 = (S, A, I, Q, H, H_IC)`. Every equation
//! has the shape `x_i^Delta = inflow_i(x) - outflow_i * x_i^sigma`, where the
//! inflow is evaluated at the current state and only the compartment's own
//! outflow sees the forward-shifted value.

use std::fmt;

use crate::error::{Error, Result};

pub const COMPARTMENTS: usize = 6;

/// Model rates and fractions. Rates are per unit time.
#[derive(Debug, Clone, PartialEq)]
pub struct SaiqhParams {
    /// Recruitment into the susceptible class (individuals per unit time).
    pub recruitment: f64,
    pub omega: f64,
    pub n: f64,
    pub phi: f64,
    /// Fraction of susceptibles sent to quarantine; `1 - p` remain exposed.
    pub p: f64,
    /// Removal rate shared by every compartment.
    pub gamma: f64,
    pub q: f64,
    pub nu: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub eta: f64,
    pub k: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    /// Effective contact rate.
    pub beta: f64,
    /// Relative transmissibility of asymptomatic carriers.
    pub l_a: f64,
    /// Relative transmissibility of hospitalized individuals.
    pub l_h: f64,
    pub lambda_lower: Option<f64>,
    pub lambda_upper: Option<f64>,
}

impl Default for SaiqhParams {
    /// Every rate zero with the mandatory positive scalings set to one.
    fn default() -> Self {
        SaiqhParams {
            recruitment: 0.0,
            omega: 0.0,
            n: 0.0,
            phi: 0.0,
            p: 0.0,
            gamma: 0.0,
            q: 0.0,
            nu: 0.0,
            delta1: 0.0,
            delta2: 0.0,
            f1: 0.0,
            f2: 0.0,
            f3: 0.0,
            eta: 0.0,
            k: 0.0,
            alpha1: 0.0,
            alpha2: 0.0,
            beta: 1.0,
            l_a: 1.0,
            l_h: 1.0,
            lambda_lower: None,
            lambda_upper: None,
        }
    }
}

/// A broken parameter constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub constraint: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.constraint)
    }
}

impl SaiqhParams {
    fn rates(&self) -> [(&'static str, f64); 12] {
        [
            ("Lambda", self.recruitment),
            ("omega", self.omega),
            ("n", self.n),
            ("phi", self.phi),
            ("gamma", self.gamma),
            ("q", self.q),
            ("nu", self.nu),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("eta", self.eta),
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
        ]
    }

    /// Lists every violated constraint; empty means the set is admissible.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push =
            |field: &'static str, constraint: &str| out.push(Violation { field, constraint: constraint.to_string() });

        for (name, v) in self.rates() {
            if !v.is_finite() {
                push(name, &format!("{name} must be finite"));
            } else if v < 0.0 {
                push(name, &format!("{name} >= 0"));
            }
        }
        for (name, v) in [("p", self.p), ("k", self.k), ("f1", self.f1), ("f2", self.f2), ("f3", self.f3)] {
            if !v.is_finite() {
                push(name, &format!("{name} must be finite"));
            }
        }
        for (name, v) in [("beta", self.beta), ("lA", self.l_a), ("lH", self.l_h)] {
            if !(v > 0.0) || !v.is_finite() {
                push(name, &format!("{name} > 0"));
            }
        }

        let unit = |v: f64| (0.0..=1.0).contains(&v);
        let fractions = [
            ("p", "p in [0,1]", self.p),
            ("p", "1-p in [0,1]", 1.0 - self.p),
            ("k", "k in [0,1]", self.k),
            ("k", "1-k in [0,1]", 1.0 - self.k),
            ("q", "q in [0,1]", self.q),
            ("f1", "f1 in [0,1]", self.f1),
            ("f1", "1-f1 in [0,1]", 1.0 - self.f1),
            ("f2", "f2 in [0,1]", self.f2),
            ("f3", "f3 in [0,1]", self.f3),
            ("f2", "1-f2-f3 in [0,1]", 1.0 - self.f2 - self.f3),
        ];
        for (field, constraint, v) in fractions {
            if v.is_finite() && !unit(v) {
                push(field, constraint);
            }
        }

        match (self.lambda_lower, self.lambda_upper) {
            (Some(lo), Some(hi)) if !(lo > 0.0 && lo <= hi && hi.is_finite()) => {
                push("lambdaL", "0 < lambdaL <= lambdaU")
            }
            (Some(lo), None) if !(lo > 0.0 && lo.is_finite()) => push("lambdaL", "lambdaL > 0"),
            (None, Some(hi)) if !(hi > 0.0 && hi.is_finite()) => push("lambdaU", "lambdaU > 0"),
            _ => {}
        }
        out
    }

    /// Outflow coefficient multiplying `x_i^sigma` in each equation, given the
    /// current force of infection.
    pub fn outflow(&self, lambda: f64) -> [f64; COMPARTMENTS] {
        [
            lambda * (1.0 - self.p) + self.phi * self.p + self.gamma,
            self.q * self.nu + self.gamma,
            self.delta1 + self.gamma,
            self.omega * self.n + self.gamma,
            self.delta2 * (1.0 - self.f2 - self.f3) + self.delta2 * self.f2 + self.alpha1 * self.f3 + self.gamma,
            self.eta * (1.0 - self.k) + self.alpha2 * self.k + self.gamma,
        ]
    }

    /// Inflow terms, all evaluated at the current state `x`.
    pub fn inflow(&self, x: &[f64; COMPARTMENTS], lambda: f64) -> [f64; COMPARTMENTS] {
        let [x1, x2, x3, x4, x5, x6] = *x;
        [
            self.recruitment + self.omega * self.n * x4,
            lambda * (1.0 - self.p) * x1,
            self.q * self.nu * x2,
            self.phi * self.p * x1 + self.delta1 * self.f1 * x3 + self.delta2 * (1.0 - self.f2 - self.f3) * x5,
            self.delta1 * (1.0 - self.f1) * x3 + self.eta * (1.0 - self.k) * x6,
            self.delta2 * self.f2 * x5,
        ]
    }

    /// Force of infection on a raw component vector.
    pub(crate) fn lambda_of(&self, x: &[f64; COMPARTMENTS]) -> Result<f64> {
        let total: f64 = x.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Domain(format!("total population must be positive to evaluate lambda, got {total}")));
        }
        Ok(self.beta * (self.l_a * x[1] + x[2] + self.l_h * x[4]) / total)
    }

    /// `lambda = beta (lA A + I + lH H) / N`.
    pub fn force_of_infection(&self, s: &State) -> Result<f64> {
        self.lambda_of(&s.0)
    }

    /// Delta derivative of every compartment, inflows at `s` and each
    /// outflow applied to `s_sigma`.
    pub fn rhs_delta(&self, s: &State, s_sigma: &State) -> Result<[f64; COMPARTMENTS]> {
        self.rhs_raw(&s.0, &s_sigma.0)
    }

    pub(crate) fn rhs_raw(
        &self,
        x: &[f64; COMPARTMENTS],
        x_sigma: &[f64; COMPARTMENTS],
    ) -> Result<[f64; COMPARTMENTS]> {
        let lambda = self.lambda_of(x)?;
        let inflow = self.inflow(x, lambda);
        let outflow = self.outflow(lambda);
        Ok(std::array::from_fn(|i| inflow[i] - outflow[i] * x_sigma[i]))
    }
}

/// Compartment sizes `(S, A, I, Q, H, H_IC)`, all nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State([f64; COMPARTMENTS]);

impl State {
    pub fn new(x: [f64; COMPARTMENTS]) -> Result<Self> {
        for (i, v) in x.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "compartment x{} must be finite and nonnegative, got {v}",
                    i + 1
                )));
            }
        }
        Ok(State(x))
    }

    pub fn zero() -> Self {
        State([0.0; COMPARTMENTS])
    }

    pub fn as_array(&self) -> &[f64; COMPARTMENTS] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    /// `N = S + A + I + Q + H + H_IC`.
    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        State::new(self.0.map(|v| v * c))
    }
}

pub fn total_population(s: &State) -> f64 {
    s.total()
}
