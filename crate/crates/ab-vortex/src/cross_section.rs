//! Differential cross sections: the conventional form, the modified
//! closed-form expression, and an independent amplitude-level oracle.
//!
//! The modified closed form evaluates, term by term,
//!
//!   dsigma/dphi = dsigma0/dphi
//!     + (8 pi / k) [sin^2 D_n + sin^2 D_m]
//!     + (4 / k) sin(pi alpha)/sin(phi/2)
//!       * [sin D_n cos(D_n - pi alpha + phi/2)
//!          + sin D_m cos(D_m + pi alpha - phi/2)]
//!
//! with D_n, D_m the corrections in channels l = -n, -n-1. The oracle builds
//! the 2D scattering amplitude from the same phase shifts,
//! f = f_standard + f_correction with
//! f_correction = (2 pi i k)^(-1/2) sum_l exp(2 i delta_l^0)
//! (exp(2 i D_l) - 1) exp(i l phi) over the two modified channels, and
//! squares it. The two routes are kept as separate code paths; their
//! relation is established by the reconciliation report, never patched.

use crate::error::{AbError, Result};
use crate::flux::{ExtensionSpec, FluxDecomposition, Kinematics};
use crate::numeric::simpson_uniform;
use crate::phase::ChannelCorrections;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

/// Conventional Aharonov-Bohm differential cross section
/// sin^2(pi alpha) / (2 pi k sin^2(phi/2)).
pub fn standard_cross_section(k: f64, phi: f64, alpha: f64) -> Result<f64> {
    if !k.is_finite() || k <= 0.0 {
        return Err(AbError::NonpositiveWavenumber(k));
    }
    let sin_half = (0.5 * phi).sin();
    if sin_half == 0.0 {
        return Err(AbError::ForwardSingularity);
    }
    let s = (PI * alpha).sin();
    Ok(s * s / (2.0 * PI * k * sin_half * sin_half))
}

/// The bracket sin D_n cos(D_n - pi alpha) + sin D_m cos(D_m + pi alpha)
/// shared by the Hall resistivity and the transverse cross section. It is
/// the coefficient of the odd (skew) part of the modified cross section:
/// dsigma(phi) - dsigma(-phi) = (8/k) sin(pi alpha) cot(phi/2) * bracket.
pub fn skew_bracket(alpha: f64, corr: &ChannelCorrections) -> f64 {
    let pa = PI * alpha;
    corr.delta_n.sin() * (corr.delta_n - pa).cos()
        + corr.delta_n1.sin() * (corr.delta_n1 + pa).cos()
}

/// Modified cross section evaluated from an explicit correction pair.
///
/// This is the closed-form expression as a function of (k, phi, alpha,
/// D_n, D_m); branch shifts D -> D + pi leave it unchanged up to rounding.
pub fn modified_cross_section_from_corrections(
    k: f64,
    phi: f64,
    alpha: f64,
    corr: &ChannelCorrections,
) -> Result<f64> {
    let d0 = standard_cross_section(k, phi, alpha)?;
    if corr.is_zero() {
        return Ok(d0);
    }
    let sin_half = (0.5 * phi).sin();
    let pa = PI * alpha;
    let (sn, sm) = (corr.delta_n.sin(), corr.delta_n1.sin());
    let isotropic = (8.0 * PI / k) * (sn * sn + sm * sm);
    let interference = (4.0 / k) * pa.sin() / sin_half
        * (sn * (corr.delta_n - pa + 0.5 * phi).cos()
            + sm * (corr.delta_n1 + pa - 0.5 * phi).cos());
    Ok(d0 + isotropic + interference)
}

/// Modified cross section with the corrections computed from the extension.
pub fn modified_cross_section(
    kin: &Kinematics,
    phi: f64,
    flux: &FluxDecomposition,
    spec: &ExtensionSpec,
) -> Result<f64> {
    let corr = ChannelCorrections::compute(flux, kin.energy(), spec)?;
    modified_cross_section_from_corrections(kin.wavenumber(), phi, flux.alpha(), &corr)
}

/// Scattering amplitude at one angle, decomposed into the conventional part
/// and the extension-induced correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSample {
    pub phi: f64,
    pub f: Complex64,
    pub f_standard: Complex64,
    pub f_correction: Complex64,
}

impl AmplitudeSample {
    /// |f|^2, the oracle differential cross section.
    pub fn cross_section(&self) -> f64 {
        self.f.norm_sqr()
    }
}

/// Amplitude-level oracle built from the phase shifts alone.
///
/// f_standard is the closed-form conventional amplitude
/// (2 pi i k)^(-1/2) sin(pi alpha) exp(-i (n + 1/2) phi) / sin(phi/2),
/// whose modulus squared reproduces the conventional cross section. The
/// correction is the exact two-term partial-wave sum over the modified
/// channels; no truncation is involved.
pub fn amplitude_oracle(
    kin: &Kinematics,
    phi: f64,
    flux: &FluxDecomposition,
    spec: &ExtensionSpec,
) -> Result<AmplitudeSample> {
    let corr = ChannelCorrections::compute(flux, kin.energy(), spec)?;
    amplitude_oracle_from_corrections(kin.wavenumber(), phi, flux, &corr)
}

/// Oracle amplitude from an explicit correction pair.
pub fn amplitude_oracle_from_corrections(
    k: f64,
    phi: f64,
    flux: &FluxDecomposition,
    corr: &ChannelCorrections,
) -> Result<AmplitudeSample> {
    if !k.is_finite() || k <= 0.0 {
        return Err(AbError::NonpositiveWavenumber(k));
    }
    let sin_half = (0.5 * phi).sin();
    if sin_half == 0.0 {
        return Err(AbError::ForwardSingularity);
    }
    // (2 pi i k)^(-1/2) = exp(-i pi/4) / sqrt(2 pi k)
    let prefactor = Complex64::from_polar((2.0 * PI * k).sqrt().recip(), -FRAC_PI_4);
    let n = flux.n() as f64;
    let alpha = flux.alpha();

    let f_standard = prefactor
        * (PI * alpha).sin()
        * Complex64::from_polar(1.0, -(n + 0.5) * phi)
        / sin_half;

    let mut partial_sum = Complex64::new(0.0, 0.0);
    for (l, delta) in [
        (flux.channel_n(), corr.delta_n),
        (flux.channel_n1(), corr.delta_n1),
    ] {
        if delta == 0.0 {
            continue;
        }
        let exponent = flux.channel_exponent(l)?;
        let delta0 = 0.5 * PI * (l.abs() as f64 - exponent);
        let term = Complex64::from_polar(1.0, 2.0 * delta0)
            * (Complex64::from_polar(1.0, 2.0 * delta) - 1.0)
            * Complex64::from_polar(1.0, l as f64 * phi);
        partial_sum += term;
    }
    let f_correction = prefactor * partial_sum;

    Ok(AmplitudeSample {
        phi,
        f: f_standard + f_correction,
        f_standard,
        f_correction,
    })
}

/// Interference between the two modified channels,
/// (4 / pi k) sin D_n sin D_m cos(D_n - D_m - 2 pi alpha + phi).
///
/// This term appears in |f|^2 but not in the closed-form expression; the
/// reconciliation report quantifies its role.
pub fn cross_channel_interference(
    k: f64,
    phi: f64,
    alpha: f64,
    corr: &ChannelCorrections,
) -> f64 {
    4.0 / (PI * k)
        * corr.delta_n.sin()
        * corr.delta_n1.sin()
        * (corr.delta_n - corr.delta_n1 - 2.0 * PI * alpha + phi).cos()
}

/// dsigma/dphi(phi) - dsigma/dphi(-phi) of the modified cross section.
pub fn asymmetry(
    kin: &Kinematics,
    phi: f64,
    flux: &FluxDecomposition,
    spec: &ExtensionSpec,
) -> Result<f64> {
    let corr = ChannelCorrections::compute(flux, kin.energy(), spec)?;
    asymmetry_from_corrections(kin.wavenumber(), phi, flux.alpha(), &corr)
}

/// Asymmetry from an explicit correction pair.
pub fn asymmetry_from_corrections(
    k: f64,
    phi: f64,
    alpha: f64,
    corr: &ChannelCorrections,
) -> Result<f64> {
    let forward = modified_cross_section_from_corrections(k, phi, alpha, corr)?;
    let backward = modified_cross_section_from_corrections(k, -phi, alpha, corr)?;
    Ok(forward - backward)
}

/// Minimum number of quadrature steps accepted by the transverse integral.
pub const MIN_QUADRATURE_STEPS: usize = 64;

/// Transverse (skew) cross section sigma_perp = integral of
/// sin(phi) dsigma/dphi over (-pi, pi), by composite Simpson on a uniform
/// grid mirrored around phi = 0.
///
/// The integrand's odd singular part cancels across the symmetric grid; the
/// phi = 0 node takes the continuous limit of the even part,
/// (8/k) sin(pi alpha) * skew bracket.
pub fn transverse_cross_section(
    kin: &Kinematics,
    flux: &FluxDecomposition,
    spec: &ExtensionSpec,
    quadrature_steps: usize,
) -> Result<f64> {
    let corr = ChannelCorrections::compute(flux, kin.energy(), spec)?;
    transverse_from_corrections(kin.wavenumber(), flux.alpha(), &corr, quadrature_steps)
}

/// Transverse cross section from an explicit correction pair.
pub fn transverse_from_corrections(
    k: f64,
    alpha: f64,
    corr: &ChannelCorrections,
    quadrature_steps: usize,
) -> Result<f64> {
    if quadrature_steps < MIN_QUADRATURE_STEPS {
        return Err(AbError::TooFewQuadratureSteps {
            min: MIN_QUADRATURE_STEPS,
            got: quadrature_steps,
        });
    }
    let half = quadrature_steps.div_ceil(2);
    let h = PI / half as f64;
    let center = 8.0 / k * (PI * alpha).sin() * skew_bracket(alpha, corr);
    let values: Vec<f64> = (0..=2 * half)
        .map(|j| {
            let idx = j as i64 - half as i64;
            if idx == 0 {
                center
            } else {
                // nodes are exact mirror pairs, so odd parts cancel exactly
                let phi = idx as f64 * h;
                phi.sin()
                    * modified_cross_section_from_corrections(k, phi, alpha, corr)
                        .expect("nonzero node")
            }
        })
        .collect();
    Ok(simpson_uniform(&values, h))
}

/// Transverse cross section of the oracle |f|^2, for the reconciliation
/// report. Same grid treatment; the phi = 0 node takes the continuous limit
/// of the even part of sin(phi) |f|^2.
pub fn transverse_oracle(
    kin: &Kinematics,
    flux: &FluxDecomposition,
    spec: &ExtensionSpec,
    quadrature_steps: usize,
) -> Result<f64> {
    if quadrature_steps < MIN_QUADRATURE_STEPS {
        return Err(AbError::TooFewQuadratureSteps {
            min: MIN_QUADRATURE_STEPS,
            got: quadrature_steps,
        });
    }
    let corr = ChannelCorrections::compute(flux, kin.energy(), spec)?;
    let k = kin.wavenumber();
    let alpha = flux.alpha();
    let pa = PI * alpha;
    let center = -4.0 / (PI * k)
        * pa.sin()
        * (corr.delta_n.sin() * (corr.delta_n - pa).sin()
            + corr.delta_n1.sin() * (corr.delta_n1 + pa).sin());
    let half = quadrature_steps.div_ceil(2);
    let h = PI / half as f64;
    let values: Vec<f64> = (0..=2 * half)
        .map(|j| {
            let idx = j as i64 - half as i64;
            if idx == 0 {
                center
            } else {
                let phi = idx as f64 * h;
                phi.sin()
                    * amplitude_oracle_from_corrections(k, phi, flux, &corr)
                        .expect("nonzero node")
                        .cross_section()
            }
        })
        .collect();
    Ok(simpson_uniform(&values, h))
}

/// Angular grid specification: symmetric around zero, excluding the window
/// |phi| < phi_min around the forward singularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiGrid {
    pub phi_min: f64,
    pub phi_max: f64,
    pub steps: usize,
}

impl PhiGrid {
    /// Default grid: 720 points over pi/180 <= |phi| <= pi.
    pub fn default_grid() -> Self {
        Self {
            phi_min: PI / 180.0,
            phi_max: PI,
            steps: 720,
        }
    }

    /// Grid points in ascending order: -phi_max..-phi_min, phi_min..phi_max,
    /// half the points on each side, negative side an exact mirror. Odd
    /// `steps` are rounded down to the even count below.
    pub fn points(&self) -> Vec<f64> {
        let per_side = (self.steps / 2).max(1);
        let dx = if per_side > 1 {
            (self.phi_max - self.phi_min) / (per_side - 1) as f64
        } else {
            0.0
        };
        let positive: Vec<f64> = (0..per_side)
            .map(|i| {
                if i + 1 == per_side {
                    self.phi_max
                } else {
                    self.phi_min + i as f64 * dx
                }
            })
            .collect();
        let mut all: Vec<f64> = positive.iter().rev().map(|p| -p).collect();
        all.extend_from_slice(&positive);
        all
    }
}

/// Where the closed-form expression went negative, if anywhere on the grid.
/// Negativity is a property of the printed formula, not of |f|^2; it is
/// flagged for the reconciliation record rather than clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityFlag {
    pub phi: f64,
    pub value: f64,
}

/// Parameter echo attached to a sampled profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileParams {
    pub k: f64,
    pub alpha: f64,
    pub energy: f64,
    pub e_bound_n: Option<f64>,
    pub e_bound_n1: Option<f64>,
}

/// Sampled dsigma/dphi over a phi grid, with the conventional part alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularProfile {
    pub phi: Vec<f64>,
    pub dsigma_total: Vec<f64>,
    pub dsigma_standard: Vec<f64>,
    pub params: ProfileParams,
    pub negativity: Option<NegativityFlag>,
}

impl AngularProfile {
    pub fn compute(
        kin: &Kinematics,
        flux: &FluxDecomposition,
        spec: &ExtensionSpec,
        grid: &PhiGrid,
    ) -> Result<Self> {
        let corr = ChannelCorrections::compute(flux, kin.energy(), spec)?;
        let k = kin.wavenumber();
        let alpha = flux.alpha();
        let phi = grid.points();
        let mut dsigma_total = Vec::with_capacity(phi.len());
        let mut dsigma_standard = Vec::with_capacity(phi.len());
        let mut negativity: Option<NegativityFlag> = None;
        for &p in &phi {
            let total = modified_cross_section_from_corrections(k, p, alpha, &corr)?;
            if total < 0.0 && negativity.is_none_or(|flag| total < flag.value) {
                negativity = Some(NegativityFlag { phi: p, value: total });
            }
            dsigma_total.push(total);
            dsigma_standard.push(standard_cross_section(k, p, alpha)?);
        }
        Ok(Self {
            phi,
            dsigma_total,
            dsigma_standard,
            params: ProfileParams {
                k,
                alpha,
                energy: kin.energy(),
                e_bound_n: spec.e_bound_n(),
                e_bound_n1: spec.e_bound_n1(),
            },
            negativity,
        })
    }
}
