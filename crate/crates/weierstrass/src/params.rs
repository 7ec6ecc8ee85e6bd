use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::WeierstrassError;

/// Parameters of one family member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub delta: f64,
    pub eta: f64,
    /// Bonnet angle.
    pub theta: f64,
}

impl FamilyParams {
    /// Checked constructor for the open parameter domain.
    pub fn new(delta: f64, eta: f64, theta: f64) -> Result<Self, WeierstrassError> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(WeierstrassError::DeltaOutOfRange(delta));
        }
        if !(eta > -PI / 6.0 && eta < PI / 6.0) {
            return Err(WeierstrassError::EtaOutOfRange(eta));
        }
        Ok(Self { delta, eta, theta })
    }

    /// Like [`FamilyParams::new`] but admits the closed boundary `delta = 0`,
    /// `|eta| = pi/6` where the family degenerates to the Scherk surfaces.
    pub fn limit(delta: f64, eta: f64, theta: f64) -> Result<Self, WeierstrassError> {
        if !(0.0..1.0).contains(&delta) {
            return Err(WeierstrassError::DeltaOutOfRange(delta));
        }
        if eta.abs() > PI / 6.0 + 1e-15 || eta.is_nan() {
            return Err(WeierstrassError::EtaOutOfRange(eta));
        }
        Ok(Self { delta, eta, theta })
    }

    /// The Scherk limit `A = -1` at Bonnet angle `theta`.
    pub fn scherk(theta: f64) -> Self {
        Self {
            delta: 0.0,
            eta: PI / 6.0,
            theta,
        }
    }

    pub fn with_theta(self, theta: f64) -> Self {
        Self { theta, ..self }
    }

    /// `A = (1 - delta)^6 e^{6 i eta}`.
    pub fn a(&self) -> Complex64 {
        Complex64::from_polar((1.0 - self.delta).powi(6), 6.0 * self.eta)
    }

    /// `zeta = e^{i theta}`.
    pub fn zeta(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    /// The m = 1 inner branch point, used to order the family.
    pub fn omega1(&self) -> Complex64 {
        Complex64::from_polar(1.0 - self.delta, PI / 2.0 + self.eta)
    }
}
