use thiserror::Error;
use tpms_contour::ContourError;
use tpms_weierstrass::WeierstrassError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PeriodError {
    #[error("no convergence after {iterations} iterations (max residual {residual:.3e})")]
    Diverged { iterations: usize, residual: f64 },
    #[error("iterate left the parameter domain (delta {delta}, eta {eta})")]
    DomainExit { delta: f64, eta: f64 },
    #[error("vertical period estimates disagree: {c} vs {c_check} (unsolved parameters?)")]
    InconsistentPeriod { c: f64, c_check: f64 },
    #[error("parameters do not close the periods (max residual {0:.3e})")]
    Unsolved(f64),
    #[error("non-positive lattice constant (c {c}, a {a})")]
    NonPositiveLattice { c: f64, a: f64 },
    #[error("pitch {rho} is outside the range reached by the family ({low}..{high})")]
    PitchOutOfRange { rho: f64, low: f64, high: f64 },
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}
