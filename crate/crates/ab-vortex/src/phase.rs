//! Partial-wave phase shifts, extension corrections, and resonances.
//!
//! The conventional shift is delta_l^0 = (pi/2)(|l| - |l + alpha|). A bound
//! state of magnitude |E_l| in channel l = -n or l = -n-1 adds the
//! energy-dependent correction
//!
//!   Delta_l = arg[ (cos(|l+alpha| pi) - 1/A_l) + i sin(|l+alpha| pi) ]
//!
//! with A_-n = (E/|E_-n|)^eta and A_-n-1 = (E/|E_-n-1|)^(1-eta). The
//! two-argument angle is taken in (-pi, pi], which runs continuously through
//! the resonance where the real part crosses zero (Delta passing pi/2).
//! Observables only ever see Delta through pi-periodic combinations, so the
//! branch choice is free of physical consequence.

use crate::error::{AbError, Result};
use crate::flux::{validate_extension, ExtensionSpec, FluxDecomposition};
use crate::numeric::bisect_root;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Per-channel phase data: conventional shift, correction, total, and the
/// unit-modulus S-matrix element exp(2 i delta_l).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPhase {
    pub l: i64,
    pub delta0: f64,
    pub correction: f64,
    pub total: f64,
    pub s_element: Complex64,
}

/// Conventional Aharonov-Bohm phase shift (pi/2)(|l| - |l + alpha|).
pub fn standard_phase_shift(l: i64, alpha: f64) -> f64 {
    0.5 * PI * (l.abs() as f64 - (l as f64 + alpha).abs())
}

/// Conventional shift evaluated with the channel exponent taken exactly from
/// the flux decomposition: |l + alpha| = eta for l = -n and 1 - eta for
/// l = -n-1. Bit-identical across alpha -> alpha + 1 relabelings.
fn standard_phase_shift_in_channel(l: i64, exponent: f64) -> f64 {
    0.5 * PI * (l.abs() as f64 - exponent)
}

/// Energy-dependent bound-state factor A_l.
///
/// Returns `None` when the channel has no bound state (conventional
/// boundary condition), including the forced-conventional case at integer
/// flux. Errors if `l` is not one of the two modified channels.
pub fn bound_state_factor(
    l: i64,
    flux: &FluxDecomposition,
    energy: f64,
    spec: &ExtensionSpec,
) -> Result<Option<f64>> {
    if !energy.is_finite() || energy <= 0.0 {
        return Err(AbError::NonpositiveEnergy(energy));
    }
    let exponent = flux.channel_exponent(l)?;
    let checked = validate_extension(spec, flux);
    let e_bound = if l == flux.channel_n() {
        checked.spec().e_bound_n()
    } else {
        checked.spec().e_bound_n1()
    };
    Ok(e_bound.map(|eb| (energy / eb).powf(exponent)))
}

/// Correction Delta_l to the conventional phase shift.
///
/// Zero for channels outside {-n, -n-1}, for channels without a bound
/// state, and at integer flux (forced-conventional convention).
pub fn delta_correction(
    l: i64,
    flux: &FluxDecomposition,
    energy: f64,
    spec: &ExtensionSpec,
) -> Result<f64> {
    if !energy.is_finite() || energy <= 0.0 {
        return Err(AbError::NonpositiveEnergy(energy));
    }
    if l != flux.channel_n() && l != flux.channel_n1() {
        return Ok(0.0);
    }
    match bound_state_factor(l, flux, energy, spec)? {
        None => Ok(0.0),
        Some(factor) => {
            let exponent = flux.channel_exponent(l)?;
            Ok(correction_angle(exponent, factor))
        }
    }
}

/// Continuous-branch angle of (cos(p pi) - 1/A, sin(p pi)).
fn correction_angle(exponent: f64, factor: f64) -> f64 {
    let theta = exponent * PI;
    theta.sin().atan2(theta.cos() - factor.recip())
}

/// The correction pair (Delta_-n, Delta_-n-1) for a given flux, energy, and
/// extension. This is the quantity every observable is built from; tests
/// and branch checks may also construct it directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelCorrections {
    pub delta_n: f64,
    pub delta_n1: f64,
}

impl ChannelCorrections {
    pub fn zero() -> Self {
        Self {
            delta_n: 0.0,
            delta_n1: 0.0,
        }
    }

    pub fn compute(flux: &FluxDecomposition, energy: f64, spec: &ExtensionSpec) -> Result<Self> {
        Ok(Self {
            delta_n: delta_correction(flux.channel_n(), flux, energy, spec)?,
            delta_n1: delta_correction(flux.channel_n1(), flux, energy, spec)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.delta_n == 0.0 && self.delta_n1 == 0.0
    }
}

/// Assemble the total phase shift delta_l = delta_l^0 + Delta_l and its
/// S-matrix element.
pub fn total_phase_shift(
    l: i64,
    flux: &FluxDecomposition,
    energy: f64,
    spec: &ExtensionSpec,
) -> Result<ChannelPhase> {
    let correction = delta_correction(l, flux, energy, spec)?;
    let delta0 = match flux.channel_exponent(l) {
        Ok(exponent) => standard_phase_shift_in_channel(l, exponent),
        Err(_) => standard_phase_shift(l, flux.alpha()),
    };
    let total = delta0 + correction;
    Ok(ChannelPhase {
        l,
        delta0,
        correction,
        total,
        s_element: Complex64::from_polar(1.0, 2.0 * total),
    })
}

/// Closed-form resonance prediction.
#[derive(Debug, Clone, PartialEq)]
pub enum ResonancePrediction {
    /// E_res = |E_-n| cos(eta pi)^(-1/eta), valid for 0 < eta < 1/2 with a
    /// bound state in channel l = -n.
    Energy(f64),
    /// Outside the documented validity region; carries the reason.
    Unsupported { reason: String },
}

impl ResonancePrediction {
    pub fn energy(&self) -> Option<f64> {
        match self {
            Self::Energy(e) => Some(*e),
            Self::Unsupported { .. } => None,
        }
    }
}

/// Closed-form resonance energy in channel l = -n.
///
/// Documented only for 0 < eta < 1/2; other parameter regions come back as
/// an explicit `Unsupported` with the reason, never silently.
pub fn resonance_energy(flux: &FluxDecomposition, spec: &ExtensionSpec) -> ResonancePrediction {
    let eta = flux.eta();
    if eta == 0.0 {
        return ResonancePrediction::Unsupported {
            reason: "integer flux (eta = 0) is forced conventional".into(),
        };
    }
    if eta >= 0.5 {
        return ResonancePrediction::Unsupported {
            reason: format!("closed form covers 0 < eta < 1/2 only (eta = {eta})"),
        };
    }
    match spec.e_bound_n() {
        None => ResonancePrediction::Unsupported {
            reason: "no bound state in channel l = -n".into(),
        },
        Some(eb) => ResonancePrediction::Energy(eb * (eta * PI).cos().powf(-1.0 / eta)),
    }
}

/// Numerically locate the resonance in one modified channel by bracketing
/// the zero of the correction denominator cos(|l+alpha| pi) - 1/A_l.
///
/// Independent of the closed form; serves as its oracle. At the returned
/// energy, Delta_channel = pi/2 (mod pi) to better than 1e-10.
pub fn find_resonance_numeric(
    flux: &FluxDecomposition,
    spec: &ExtensionSpec,
    channel: i64,
    bracket: (f64, f64),
) -> Result<f64> {
    let exponent = flux.channel_exponent(channel)?;
    let checked = validate_extension(spec, flux);
    let e_bound = if channel == flux.channel_n() {
        checked.spec().e_bound_n()
    } else {
        checked.spec().e_bound_n1()
    };
    let Some(eb) = e_bound else {
        return Err(AbError::MissingBoundState(channel));
    };
    let cos_theta = (exponent * PI).cos();
    let denominator = |energy: f64| cos_theta - (energy / eb).powf(exponent).recip();
    bisect_root(denominator, bracket.0, bracket.1)
}

/// Distance of an angle from pi/2 modulo pi; used to verify resonances.
pub fn half_pi_residue(delta: f64) -> f64 {
    let r = (delta - FRAC_PI_2).rem_euclid(PI);
    r.min(PI - r)
}
