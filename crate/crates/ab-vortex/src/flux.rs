//! Flux decomposition, kinematics, and extension parameters.
//!
//! The flux through the tube, in units of the flux quantum Phi_0 = hc/|e|,
//! is split as alpha = n + eta with integer n and eta in [0, 1). The two
//! angular-momentum channels that admit nonstandard boundary conditions are
//! l = -n and l = -n-1; everything downstream keys off this split.

use crate::error::{AbError, Result};
use serde::{Deserialize, Serialize};

/// Largest |alpha| for which the integer/fraction split is exact in f64.
const MAX_ALPHA: f64 = 9_007_199_254_740_992.0; // 2^53

/// Total flux alpha split into its integer part n and fractional part eta.
///
/// Invariants: alpha = n + eta to representation precision, 0 <= eta < 1,
/// and the modified channels are exactly l = -n and l = -n-1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxDecomposition {
    alpha: f64,
    n: i64,
    eta: f64,
}

impl FluxDecomposition {
    /// Split a flux value into integer and fractional parts.
    ///
    /// Negative alpha is accepted and decomposed with eta in [0, 1),
    /// e.g. -0.75 -> (n = -1, eta = 0.25). The extension channels are
    /// always l = -n and l = -n-1 of this decomposition.
    pub fn decompose(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(AbError::NonFiniteFlux(alpha));
        }
        if alpha.abs() > MAX_ALPHA {
            return Err(AbError::FluxOutOfRange(alpha));
        }
        let mut floor = alpha.floor();
        let mut eta = alpha - floor;
        // alpha just below zero can round eta up to exactly 1.0
        if eta >= 1.0 {
            floor += 1.0;
            eta = 0.0;
        }
        Ok(Self {
            alpha,
            n: floor as i64,
            eta,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Integer part n of alpha.
    pub fn n(&self) -> i64 {
        self.n
    }

    /// Fractional part eta of alpha, in [0, 1).
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// The modified channel l = -n.
    pub fn channel_n(&self) -> i64 {
        -self.n
    }

    /// The modified channel l = -n-1.
    pub fn channel_n1(&self) -> i64 {
        -self.n - 1
    }

    /// Integer flux carries no fractional part; both modified channels are
    /// then forced to the conventional boundary condition.
    pub fn is_integer(&self) -> bool {
        self.eta == 0.0
    }

    /// |l + alpha| for the two modified channels, computed exactly from eta:
    /// eta for l = -n and 1 - eta for l = -n-1. This is the exponent of the
    /// bound-state factor and the angle (times pi) inside the correction.
    pub fn channel_exponent(&self, l: i64) -> Result<f64> {
        if l == self.channel_n() {
            Ok(self.eta)
        } else if l == self.channel_n1() {
            Ok(1.0 - self.eta)
        } else {
            Err(AbError::WrongChannel {
                l,
                minus_n: self.channel_n(),
                minus_n1: self.channel_n1(),
            })
        }
    }
}

/// Unit conventions for kinematics.
///
/// Natural units set hbar = 2m = 1 so that k = sqrt(E); explicit units carry
/// user-supplied mass and hbar for dimensional output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum UnitSystem {
    Natural,
    Explicit,
}

/// Scattering energy together with the constants needed for k = sqrt(2mE)/hbar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kinematics {
    energy: f64,
    mass: f64,
    hbar: f64,
    units: UnitSystem,
}

impl Kinematics {
    /// Natural units hbar = 2m = 1, so k = sqrt(E).
    pub fn natural(energy: f64) -> Result<Self> {
        if !energy.is_finite() || energy <= 0.0 {
            return Err(AbError::NonpositiveEnergy(energy));
        }
        Ok(Self {
            energy,
            mass: 0.5,
            hbar: 1.0,
            units: UnitSystem::Natural,
        })
    }

    /// Explicit units with user-supplied mass and hbar.
    pub fn explicit(energy: f64, mass: f64, hbar: f64) -> Result<Self> {
        if !energy.is_finite() || energy <= 0.0 {
            return Err(AbError::NonpositiveEnergy(energy));
        }
        if !mass.is_finite() || mass <= 0.0 {
            return Err(AbError::NonpositiveMass(mass));
        }
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(AbError::NonpositiveHbar(hbar));
        }
        Ok(Self {
            energy,
            mass,
            hbar,
            units: UnitSystem::Explicit,
        })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn unit_system(&self) -> UnitSystem {
        self.units
    }

    /// Wavenumber k = sqrt(2 m E) / hbar.
    pub fn wavenumber(&self) -> f64 {
        (2.0 * self.mass * self.energy).sqrt() / self.hbar
    }
}

/// Wavenumber of a kinematic state; k = sqrt(2mE/hbar^2).
pub fn wavenumber(kin: &Kinematics) -> f64 {
    kin.wavenumber()
}

/// Bound-state energy magnitudes |E_-n| and |E_-n-1| parameterizing the
/// rotationally invariant self-adjoint extension.
///
/// An absent value means the conventional boundary condition in that channel
/// (correction identically zero). Stored magnitudes are strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ExtensionSpec {
    e_bound_n: Option<f64>,
    e_bound_n1: Option<f64>,
}

impl ExtensionSpec {
    /// Both channels conventional.
    pub fn conventional() -> Self {
        Self::default()
    }

    /// Validating constructor; rejects nonpositive or non-finite magnitudes.
    pub fn new(e_bound_n: Option<f64>, e_bound_n1: Option<f64>) -> Result<Self> {
        for e in [e_bound_n, e_bound_n1].into_iter().flatten() {
            if !e.is_finite() || e <= 0.0 {
                return Err(AbError::InvalidExtension(e));
            }
        }
        Ok(Self {
            e_bound_n,
            e_bound_n1,
        })
    }

    /// |E_-n|, the bound-state magnitude attached to channel l = -n.
    pub fn e_bound_n(&self) -> Option<f64> {
        self.e_bound_n
    }

    /// |E_-n-1|, the bound-state magnitude attached to channel l = -n-1.
    pub fn e_bound_n1(&self) -> Option<f64> {
        self.e_bound_n1
    }

    pub fn is_conventional(&self) -> bool {
        self.e_bound_n.is_none() && self.e_bound_n1.is_none()
    }

    /// The same magnitudes with the channel roles exchanged. Under
    /// alpha -> -alpha the physical channels relabel this way.
    pub fn swapped(&self) -> Self {
        Self {
            e_bound_n: self.e_bound_n1,
            e_bound_n1: self.e_bound_n,
        }
    }
}

/// An extension spec checked against a particular flux decomposition.
///
/// At integer flux (eta = 0) the correction formula degenerates to 0/0, so
/// both channels are forced conventional and flagged; supplied magnitudes
/// are dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckedExtension {
    spec: ExtensionSpec,
    forced_conventional: bool,
}

impl CheckedExtension {
    pub fn spec(&self) -> &ExtensionSpec {
        &self.spec
    }

    /// True when integer flux forced both channels conventional even though
    /// bound energies were supplied.
    pub fn forced_conventional(&self) -> bool {
        self.forced_conventional
    }
}

/// Check an extension against a flux value.
///
/// Magnitudes must be positive or absent; at eta = 0 the extension is
/// replaced by the conventional one and the forced flag is set.
pub fn validate_extension(spec: &ExtensionSpec, flux: &FluxDecomposition) -> CheckedExtension {
    if flux.is_integer() && !spec.is_conventional() {
        CheckedExtension {
            spec: ExtensionSpec::conventional(),
            forced_conventional: true,
        }
    } else {
        CheckedExtension {
            spec: *spec,
            forced_conventional: false,
        }
    }
}

/// Convenience wrapper around [`FluxDecomposition::decompose`].
pub fn decompose_flux(alpha: f64) -> Result<FluxDecomposition> {
    FluxDecomposition::decompose(alpha)
}
