use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),
    #[error("amplitude vector is zero")]
    ZeroState,
    #[error("matrix is not Hermitian: defect {0}")]
    NotHermitian(f64),
    #[error("density matrix trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("density matrix has negative eigenvalue {0}")]
    NegativeEigenvalue(f64),
    #[error("mixing weight {0} outside [0, 1]")]
    MixingWeight(f64),
    #[error("probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("coupler coefficients t2={t2}, r2={r2} must lie in [0, 1] with t2 + r2 <= 1")]
    Coupler { t2: f64, r2: f64 },
    #[error("phase spread {0} must be finite and non-negative")]
    PhaseSpread(f64),
    #[error("non-finite phase setting")]
    NonFinitePhase,
    #[error("no photons were counted")]
    NoCounts,
    #[error("shot count must be positive")]
    ZeroShots,
    #[error("epsilon {0} outside (0, 1]")]
    Epsilon(f64),
}

pub type Result<T> = std::result::Result<T, SimError>;
