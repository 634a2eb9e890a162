use thiserror::Error;

/// Errors surfaced by the evaluation and quadrature routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("result overflows binary64 ({context})")]
    Overflow { context: &'static str },

    #[error("denominator parameter vanishes at term {term} of a terminating series")]
    DenominatorPole { term: usize },

    #[error("series has no nonpositive-integer numerator parameter equal to -{order}")]
    NotTerminating { order: usize },

    #[error("point outside the domain: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integrand is not finite at node {node}")]
    NonFiniteIntegrand { node: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
