//! Space parameters: the exponent p, the weight power a and the kind of
//! function space the operator acts on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which weighted space a computation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    /// L^p of the real line with weight |x|^a.
    LebesgueLine,
    /// Hardy space of the upper half-plane, norm taken on the boundary
    /// with weight |x|^a.
    HardyBoundary,
    /// Bergman space of the upper half-plane with area weight y^(a-1).
    BergmanPlane,
}

/// Exponent/weight pair identifying a weighted space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    /// Integrability exponent p, 1 <= p < infinity.
    #[serde(rename = "p")]
    pub exponent: f64,
    /// Weight power a in |x|^a (line/boundary) or y^(a-1) (plane).
    #[serde(rename = "a")]
    pub weight_power: f64,
    pub kind: SpaceKind,
}

impl SpaceParams {
    pub fn new(exponent: f64, weight_power: f64, kind: SpaceKind) -> Result<Self> {
        let sp = SpaceParams {
            exponent,
            weight_power,
            kind,
        };
        sp.validate()?;
        Ok(sp)
    }

    pub fn lebesgue(exponent: f64, weight_power: f64) -> Result<Self> {
        Self::new(exponent, weight_power, SpaceKind::LebesgueLine)
    }

    pub fn hardy(exponent: f64, weight_power: f64) -> Result<Self> {
        Self::new(exponent, weight_power, SpaceKind::HardyBoundary)
    }

    pub fn bergman(exponent: f64, weight_power: f64) -> Result<Self> {
        Self::new(exponent, weight_power, SpaceKind::BergmanPlane)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.exponent.is_finite() || self.exponent < 1.0 {
            return Err(Error::InvalidSpace(format!(
                "exponent p must satisfy 1 <= p < inf, got {}",
                self.exponent
            )));
        }
        let min_weight_ok = match self.kind {
            SpaceKind::LebesgueLine | SpaceKind::HardyBoundary => self.weight_power > -1.0,
            SpaceKind::BergmanPlane => self.weight_power > 0.0,
        };
        if !self.weight_power.is_finite() || !min_weight_ok {
            return Err(Error::InvalidSpace(format!(
                "weight power a = {} out of range for {:?}",
                self.weight_power, self.kind
            )));
        }
        let d = self.dilation_exponent();
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidSpace(format!(
                "(a+1)/p must be finite and positive, got {d}"
            )));
        }
        Ok(())
    }

    /// The dilation exponent (a+1)/p: dilating by t scales the space norm
    /// by t to this power.  It is the power weighting every kernel moment.
    #[inline]
    pub fn dilation_exponent(&self) -> f64 {
        (self.weight_power + 1.0) / self.exponent
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_standard_parameters() {
        let sp = SpaceParams::hardy(2.0, 0.0).unwrap();
        assert_eq!(sp.dilation_exponent(), 0.5);
        let sp = SpaceParams::lebesgue(1.0, -0.5).unwrap();
        assert_eq!(sp.dilation_exponent(), 0.5);
        let sp = SpaceParams::bergman(2.0, 1.0).unwrap();
        assert_eq!(sp.dilation_exponent(), 1.0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(SpaceParams::lebesgue(0.5, 0.0).is_err());
        assert!(SpaceParams::lebesgue(2.0, -1.0).is_err());
        assert!(SpaceParams::bergman(2.0, 0.0).is_err());
        assert!(SpaceParams::hardy(f64::INFINITY, 0.0).is_err());
    }
}
