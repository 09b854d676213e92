use thiserror::Error;

use crate::coeffring::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("`{0}` is not a space variable of chart `{1}`")]
    NotASpaceVariable(Var, String),
    #[error("operators live on different charts (`{0}` vs `{1}`)")]
    SpecMismatch(String, String),
    #[error("gauge log-gradient is not closed: d_{0} w_{1} != d_{1} w_{0}")]
    NonClosedGauge(Var, Var),
    #[error("change of variables is not invertible (Jacobian determinant vanishes)")]
    SingularJacobian,
    #[error("result still depends on `{0}` after {1}")]
    ResidualDependence(Var, &'static str),
    #[error("angular projection left a nonzero imaginary part")]
    ImaginaryResidual,
    #[error("coefficient is not polynomial: {0}")]
    NotPolynomial(String),
    #[error("subspace P_{n} is not invariant: {witness}")]
    NotInvariant { n: usize, witness: String },
    #[error("singular matrix")]
    Singular,
    #[error("eigenvalue collision at the chosen parameter point; re-specialize")]
    EigenvalueCollision,
    #[error("{0}")]
    Invalid(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
