//! Homogeneous isotropic elastic media and their wave speeds.

use crate::{Error, Result};

/// P- and S-wave speeds derived from density and Lamé parameters.
///
/// `cp = sqrt((lambda + 2 mu) / rho)`, `cs = sqrt(mu / rho)`. Unlike
/// [`ElasticMedium`], this helper accepts `lambda = 0` (it only needs
/// `lambda + 2 mu > 0`).
pub fn wave_speeds(rho: f64, lambda: f64, mu: f64) -> Result<(f64, f64)> {
    if !(rho > 0.0) {
        return Err(Error::Medium(format!("density must be positive, got {rho}")));
    }
    if !(mu > 0.0) {
        return Err(Error::Medium(format!("shear modulus must be positive, got {mu}")));
    }
    if !(lambda + 2.0 * mu > 0.0) {
        return Err(Error::Medium(format!(
            "lambda + 2 mu must be positive, got {}",
            lambda + 2.0 * mu
        )));
    }
    Ok((((lambda + 2.0 * mu) / rho).sqrt(), (mu / rho).sqrt()))
}

/// A homogeneous isotropic elastic medium.
///
/// Stores both the Lamé parameters `(lambda, mu)` and the derived wave speeds
/// `(cp, cs)`; the two parameterizations are kept consistent by construction.
/// The invariant `cp^2 > 2 cs^2` (equivalently `lambda > 0`) is enforced, as
/// the overlap-threshold analysis requires it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticMedium {
    /// Mass density.
    pub rho: f64,
    /// First Lamé parameter.
    pub lambda: f64,
    /// Shear modulus (second Lamé parameter).
    pub mu: f64,
    /// P-wave (pressure) speed.
    pub cp: f64,
    /// S-wave (shear) speed.
    pub cs: f64,
}

impl ElasticMedium {
    /// Builds a medium from density and Lamé parameters.
    pub fn from_lame(rho: f64, lambda: f64, mu: f64) -> Result<Self> {
        let (cp, cs) = wave_speeds(rho, lambda, mu)?;
        if !(lambda > 0.0) {
            return Err(Error::Medium(format!(
                "lambda must be positive (cp^2 > 2 cs^2), got {lambda}"
            )));
        }
        Ok(Self { rho, lambda, mu, cp, cs })
    }

    /// Builds a medium from density and wave speeds, inverting
    /// `lambda = rho (cp^2 - 2 cs^2)`, `mu = rho cs^2`.
    pub fn from_speeds(rho: f64, cp: f64, cs: f64) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::Medium(format!("density must be positive, got {rho}")));
        }
        if !(cs > 0.0) || !(cp > cs) {
            return Err(Error::Medium(format!(
                "wave speeds must satisfy cp > cs > 0, got cp = {cp}, cs = {cs}"
            )));
        }
        let lambda = rho * (cp * cp - 2.0 * cs * cs);
        let mu = rho * cs * cs;
        if !(lambda > 0.0) {
            return Err(Error::Medium(format!(
                "cp^2 > 2 cs^2 required, got cp = {cp}, cs = {cs}"
            )));
        }
        Ok(Self { rho, lambda, mu, cp, cs })
    }
}
