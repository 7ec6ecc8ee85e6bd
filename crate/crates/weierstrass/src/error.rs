use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeierstrassError {
    #[error("delta = {0} is outside (0, 1)")]
    DeltaOutOfRange(f64),
    #[error("eta = {0} is outside (-pi/6, pi/6)")]
    EtaOutOfRange(f64),
    #[error("xi = {xi} lies {distance:.3e} from branch point {index}")]
    NearBranchPoint {
        index: usize,
        xi: Complex64,
        distance: f64,
    },
    #[error("branch point index {0} is out of range (0..12)")]
    IndexOutOfRange(usize),
    #[error("the Weierstrass function never vanishes; got R = 0")]
    ZeroValue,
    #[error("xi = {0} is a pole of the Scherk limit function")]
    ScherkPole(Complex64),
}
