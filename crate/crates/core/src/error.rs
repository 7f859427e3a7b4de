use thiserror::Error;

/// Failure modes of the transducer model and its linear algebra.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature convention violated: imaginary residue {residue:e} exceeds {threshold:e}")]
    Convention { residue: f64, threshold: f64 },

    #[error("resolvent is near singular (condition number {condition:e})")]
    Singular { condition: f64 },

    #[error("closed form is singular: denominator {value} is not positive")]
    DegenerateDenominator { value: f64 },

    #[error("parameters are outside the stable region: C_nu = {c_nu} >= (1 + C_g)^2 / 4 with C_g = {c_g}")]
    Unstable { c_g: f64, c_nu: f64 },

    #[error("unphysical covariance block for port {port}: V + i*Omega is not positive semidefinite")]
    Unphysical { port: usize },

    #[error("channel is not completely positive (min eigenvalue {min_eigenvalue:e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("Bogoliubov transformation requires beta < 1, got beta = {beta}")]
    OutOfRegime { beta: f64 },

    #[error("decomposition failed: {0}")]
    Decomposition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
