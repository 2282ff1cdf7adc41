use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// `1 + mu(s) p` vanished at the scattered point `s`.
    #[error("regressivity error: 1 + mu*p = {factor} at t = {t}")]
    Regressivity { t: f64, factor: f64 },

    #[error("degenerate-parameter: {0}")]
    DegenerateParameter(String),

    #[error("solver-negativity: component {component} stayed negative after maximal step halving (h = {h})")]
    SolverNegativity { component: usize, h: f64 },

    #[error("invalid parameters: {}", join_violations(.0))]
    InvalidParams(Vec<Violation>),

    #[error("at t = {t}: {source}")]
    AtTime {
        t: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, t: f64) -> Error {
        Error::AtTime { t, source: Box::new(self) }
    }

    /// Strips any time annotation.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtTime { source, .. } => source.root(),
            other => other,
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
