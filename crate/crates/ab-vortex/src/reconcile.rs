//! Reconciliation of the closed-form cross section against the amplitude
//! oracle, recorded as a committed report.
//!
//! The two routes are evaluated over a fixed parameter set and angle grid.
//! Where they disagree, the report pins the exact structure of the
//! disagreement instead of patching either side:
//!
//!   closed_form(phi) = |f_standard(phi) - 2 pi i f_correction(phi)|^2
//!                      - (2 pi)^2 * cross_channel_interference(phi)
//!
//! i.e. the closed form corresponds to a correction amplitude scaled by
//! 2 pi and rotated by -90 degrees, with the interference between the two
//! modified channels dropped. The identity is verified pointwise here; the
//! `verify` front end fails when this file no longer reproduces the
//! committed report byte for byte.

use crate::cross_section::{
    amplitude_oracle_from_corrections, cross_channel_interference,
    modified_cross_section_from_corrections, skew_bracket, transverse_from_corrections,
    transverse_oracle, PhiGrid,
};
use crate::error::Result;
use crate::flux::{decompose_flux, ExtensionSpec, FluxDecomposition, Kinematics};
use crate::hall::{hall_resistivity_from_corrections, DEFAULT_QUADRATURE_STEPS};
use crate::numeric::simpson_uniform;
use crate::phase::ChannelCorrections;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

/// Relative agreement threshold below which the two routes would count as
/// identical.
pub const AGREEMENT_TOLERANCE: f64 = 1e-10;

/// Densities used for the Hall-relation section.
const HALL_NV: f64 = 0.01;
const HALL_NE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub alpha: f64,
    pub energy: f64,
    pub e_bound_n: Option<f64>,
    pub e_bound_n1: Option<f64>,
    /// max over the grid of |closed - oracle| / max(1, |closed|, |oracle|)
    pub max_rel_discrepancy: f64,
    /// max over the grid of the reconstruction-identity residual,
    /// same normalization
    pub max_identity_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyStructure {
    /// modulus applied to f_correction inside the closed form
    pub correction_amplitude_scale: f64,
    /// phase applied to f_correction inside the closed form (radians)
    pub correction_phase_rotation: f64,
    /// the |f|^2 term absent from the closed form
    pub omitted_term: String,
    /// the pointwise identity the numbers above were checked against
    pub identity: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HallRelationCase {
    pub alpha: f64,
    pub energy: f64,
    pub e_bound_n: Option<f64>,
    pub e_bound_n1: Option<f64>,
    pub rho_closed_form: f64,
    pub rho_from_closed_form_quadrature: f64,
    pub rho_from_oracle_quadrature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaNegation {
    pub mapping: String,
    pub max_rel_deviation_closed_form: f64,
    pub max_rel_deviation_oracle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativityExample {
    pub alpha: f64,
    pub energy: f64,
    pub e_bound_n: f64,
    pub e_bound_n1: f64,
    pub phi: f64,
    pub closed_form_value: f64,
    pub oracle_value: f64,
}

/// Frozen generic-case observables, all generated through the amplitude
/// oracle and its reconstruction identity; tests pin library output to
/// these numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenObservables {
    pub alpha: f64,
    pub energy: f64,
    pub e_bound_n: f64,
    pub phi: f64,
    pub oracle_dsigma: f64,
    pub closed_form_dsigma_reconstructed: f64,
    pub asymmetry_reconstructed: f64,
    pub vortex_density: f64,
    pub electron_density: f64,
    pub rho_xy_from_reconstructed_quadrature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconciliationReport {
    pub tool_version: String,
    pub phi_points: usize,
    pub agreement_tolerance: f64,
    pub closed_form_matches_oracle: bool,
    pub cases: Vec<CaseReport>,
    pub discrepancy: DiscrepancyStructure,
    pub hall_relation: Vec<HallRelationCase>,
    pub hall_summary: String,
    pub alpha_negation: AlphaNegation,
    pub negativity_example: NegativityExample,
    pub golden: GoldenObservables,
    pub notes: Vec<String>,
}

struct Case {
    alpha: f64,
    energy: f64,
    e_bound_n: Option<f64>,
    e_bound_n1: Option<f64>,
}

const CASES: [Case; 3] = [
    Case {
        alpha: 0.25,
        energy: 2.0,
        e_bound_n: Some(1.0),
        e_bound_n1: Some(0.5),
    },
    Case {
        alpha: 0.6,
        energy: 1.5,
        e_bound_n: Some(0.7),
        e_bound_n1: Some(2.0),
    },
    Case {
        alpha: -0.75,
        energy: 3.0,
        e_bound_n: Some(1.2),
        e_bound_n1: None,
    },
];

fn mixed_rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// The closed form rebuilt from oracle amplitudes: scale the correction by
/// -2 pi i and drop the cross-channel interference.
pub fn reconstructed_closed_form(
    k: f64,
    phi: f64,
    flux: &FluxDecomposition,
    corr: &ChannelCorrections,
) -> Result<f64> {
    let sample = amplitude_oracle_from_corrections(k, phi, flux, corr)?;
    let twisted = sample.f_standard - Complex64::new(0.0, 2.0 * PI) * sample.f_correction;
    Ok(twisted.norm_sqr()
        - 4.0 * PI * PI * cross_channel_interference(k, phi, flux.alpha(), corr))
}

fn sigma_perp_of_reconstruction(
    k: f64,
    flux: &FluxDecomposition,
    corr: &ChannelCorrections,
    steps: usize,
) -> Result<f64> {
    let alpha = flux.alpha();
    let half = steps.div_ceil(2);
    let h = PI / half as f64;
    let center = 8.0 / k * (PI * alpha).sin() * skew_bracket(alpha, corr);
    let mut values = Vec::with_capacity(2 * half + 1);
    for j in 0..=2 * half {
        let idx = j as i64 - half as i64;
        if idx == 0 {
            values.push(center);
        } else {
            let phi = idx as f64 * h;
            values.push(phi.sin() * reconstructed_closed_form(k, phi, flux, corr)?);
        }
    }
    Ok(simpson_uniform(&values, h))
}

/// Run the full comparison and assemble the report.
pub fn generate_report() -> ReconciliationReport {
    let grid = PhiGrid::default_grid();
    let points = grid.points();

    let mut cases = Vec::new();
    let mut hall_relation = Vec::new();
    let mut worst_discrepancy: f64 = 0.0;
    let mut worst_identity: f64 = 0.0;

    for case in &CASES {
        let flux = decompose_flux(case.alpha).expect("finite alpha");
        let kin = Kinematics::natural(case.energy).expect("positive energy");
        let spec = ExtensionSpec::new(case.e_bound_n, case.e_bound_n1).expect("positive bounds");
        let corr = ChannelCorrections::compute(&flux, case.energy, &spec).expect("valid spec");
        let k = kin.wavenumber();

        let mut max_rel = 0.0_f64;
        let mut max_identity = 0.0_f64;
        for &phi in &points {
            let closed =
                modified_cross_section_from_corrections(k, phi, case.alpha, &corr).unwrap();
            let oracle = amplitude_oracle_from_corrections(k, phi, &flux, &corr)
                .unwrap()
                .cross_section();
            let rebuilt = reconstructed_closed_form(k, phi, &flux, &corr).unwrap();
            max_rel = max_rel.max(mixed_rel(closed, oracle));
            max_identity = max_identity.max(mixed_rel(closed, rebuilt));
        }
        worst_discrepancy = worst_discrepancy.max(max_rel);
        worst_identity = worst_identity.max(max_identity);
        cases.push(CaseReport {
            alpha: case.alpha,
            energy: case.energy,
            e_bound_n: case.e_bound_n,
            e_bound_n1: case.e_bound_n1,
            max_rel_discrepancy: max_rel,
            max_identity_residual: max_identity,
        });

        let rho_closed =
            hall_resistivity_from_corrections(HALL_NV, HALL_NE, case.alpha, &corr).unwrap();
        let sigma_closed =
            transverse_from_corrections(k, case.alpha, &corr, DEFAULT_QUADRATURE_STEPS).unwrap();
        let sigma_oracle =
            transverse_oracle(&kin, &flux, &spec, DEFAULT_QUADRATURE_STEPS).unwrap();
        let to_rho = HALL_NV * k / (2.0 * PI * HALL_NE);
        hall_relation.push(HallRelationCase {
            alpha: case.alpha,
            energy: case.energy,
            e_bound_n: case.e_bound_n,
            e_bound_n1: case.e_bound_n1,
            rho_closed_form: rho_closed,
            rho_from_closed_form_quadrature: to_rho * sigma_closed,
            rho_from_oracle_quadrature: to_rho * sigma_oracle,
        });
    }

    // alpha -> -alpha: swap the bound energies between the channels
    let mut neg_closed = 0.0_f64;
    let mut neg_oracle = 0.0_f64;
    for case in &CASES {
        let flux = decompose_flux(case.alpha).unwrap();
        let flux_neg = decompose_flux(-case.alpha).unwrap();
        let kin = Kinematics::natural(case.energy).unwrap();
        let spec = ExtensionSpec::new(case.e_bound_n, case.e_bound_n1).unwrap();
        let spec_neg = spec.swapped();
        let corr = ChannelCorrections::compute(&flux, case.energy, &spec).unwrap();
        let corr_neg = ChannelCorrections::compute(&flux_neg, case.energy, &spec_neg).unwrap();
        let k = kin.wavenumber();
        for &phi in &points {
            let direct =
                modified_cross_section_from_corrections(k, -phi, case.alpha, &corr).unwrap();
            let mapped =
                modified_cross_section_from_corrections(k, phi, -case.alpha, &corr_neg).unwrap();
            neg_closed = neg_closed.max(mixed_rel(direct, mapped));

            let direct_o = amplitude_oracle_from_corrections(k, -phi, &flux, &corr)
                .unwrap()
                .cross_section();
            let mapped_o = amplitude_oracle_from_corrections(k, phi, &flux_neg, &corr_neg)
                .unwrap()
                .cross_section();
            neg_oracle = neg_oracle.max(mixed_rel(direct_o, mapped_o));
        }
    }

    // realizable parameter point where the closed form dips negative
    let neg_flux = decompose_flux(0.05).unwrap();
    let neg_spec = ExtensionSpec::new(Some(1.28e6), Some(0.0381)).unwrap();
    let neg_corr = ChannelCorrections::compute(&neg_flux, 1.0, &neg_spec).unwrap();
    let neg_kin = Kinematics::natural(1.0).unwrap();
    let mut neg_value = f64::INFINITY;
    let mut neg_phi = 0.0;
    for j in 0..=400 {
        let phi = 0.02 + j as f64 * (0.3 - 0.02) / 400.0;
        let v = modified_cross_section_from_corrections(neg_kin.wavenumber(), phi, 0.05, &neg_corr)
            .unwrap();
        if v < neg_value {
            neg_value = v;
            neg_phi = phi;
        }
    }
    let neg_oracle_value = amplitude_oracle_from_corrections(
        neg_kin.wavenumber(),
        neg_phi,
        &neg_flux,
        &neg_corr,
    )
    .unwrap()
    .cross_section();

    // golden observables, all through the oracle reconstruction
    let golden_flux = decompose_flux(0.25).unwrap();
    let golden_kin = Kinematics::natural(2.0).unwrap();
    let golden_spec = ExtensionSpec::new(Some(1.0), None).unwrap();
    let golden_corr = ChannelCorrections::compute(&golden_flux, 2.0, &golden_spec).unwrap();
    let gk = golden_kin.wavenumber();
    let golden_oracle = amplitude_oracle_from_corrections(gk, FRAC_PI_2, &golden_flux, &golden_corr)
        .unwrap()
        .cross_section();
    let golden_closed =
        reconstructed_closed_form(gk, FRAC_PI_2, &golden_flux, &golden_corr).unwrap();
    let golden_asym = reconstructed_closed_form(gk, FRAC_PI_2, &golden_flux, &golden_corr)
        .unwrap()
        - reconstructed_closed_form(gk, -FRAC_PI_2, &golden_flux, &golden_corr).unwrap();
    let golden_sigma =
        sigma_perp_of_reconstruction(gk, &golden_flux, &golden_corr, DEFAULT_QUADRATURE_STEPS)
            .unwrap();
    let golden_rho = HALL_NV * gk / (2.0 * PI * HALL_NE) * golden_sigma;

    let agreement = worst_discrepancy <= AGREEMENT_TOLERANCE;

    ReconciliationReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        phi_points: points.len(),
        agreement_tolerance: AGREEMENT_TOLERANCE,
        closed_form_matches_oracle: agreement,
        cases,
        discrepancy: DiscrepancyStructure {
            correction_amplitude_scale: 2.0 * PI,
            correction_phase_rotation: -FRAC_PI_2,
            omitted_term: "(4/(pi k)) sin(D_n) sin(D_m) cos(D_n - D_m - 2 pi alpha + phi)"
                .to_string(),
            identity: "closed_form(phi) = |f_standard(phi) - 2 pi i f_correction(phi)|^2 \
                       - (2 pi)^2 (4/(pi k)) sin(D_n) sin(D_m) cos(D_n - D_m - 2 pi alpha + phi)"
                .to_string(),
        },
        hall_relation,
        hall_summary: "the closed-form Hall resistivity equals \
                       (n_v k / 2 pi n_e) (hc^2/e^2) sigma_perp exactly when sigma_perp \
                       integrates the closed-form cross section; sigma_perp of the oracle \
                       |f|^2 differs through the omitted cross-channel term"
            .to_string(),
        alpha_negation: AlphaNegation {
            mapping: "dsigma(-alpha, phi) with the bound energies swapped between the \
                      channels equals dsigma(alpha, -phi), for both routes"
                .to_string(),
            max_rel_deviation_closed_form: neg_closed,
            max_rel_deviation_oracle: neg_oracle,
        },
        negativity_example: NegativityExample {
            alpha: 0.05,
            energy: 1.0,
            e_bound_n: 1.28e6,
            e_bound_n1: 0.0381,
            phi: neg_phi,
            closed_form_value: neg_value,
            oracle_value: neg_oracle_value,
        },
        golden: GoldenObservables {
            alpha: 0.25,
            energy: 2.0,
            e_bound_n: 1.0,
            phi: FRAC_PI_2,
            oracle_dsigma: golden_oracle,
            closed_form_dsigma_reconstructed: golden_closed,
            asymmetry_reconstructed: golden_asym,
            vortex_density: HALL_NV,
            electron_density: HALL_NE,
            rho_xy_from_reconstructed_quadrature: golden_rho,
        },
        notes: vec![
            "the closed-form cross section and |f|^2 disagree far beyond the agreement \
             tolerance; the disagreement is fully accounted for by the recorded identity"
                .to_string(),
            "the closed-form expression can go negative at strongly modified parameters; \
             |f|^2 cannot (see negativity_example)"
                .to_string(),
        ],
    }
}

/// Deterministic serialization of the report.
pub fn report_json(report: &ReconciliationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Regenerate the report and compare byte-for-byte with the committed file.
pub fn check_freshness(path: &Path) -> std::result::Result<ReconciliationReport, String> {
    let committed = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let fresh = generate_report();
    let expected = report_json(&fresh);
    if committed == expected {
        Ok(fresh)
    } else {
        Err(format!(
            "{} is stale: regenerate it with `ab-vortex verify --write-report`",
            path.display()
        ))
    }
}

/// Write (or refresh) the committed report.
pub fn write_report(path: &Path) -> std::io::Result<ReconciliationReport> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let report = generate_report();
    std::fs::write(path, report_json(&report))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn routes_disagree_but_identity_holds() {
        let report = generate_report();
        assert!(!report.closed_form_matches_oracle);
        for case in &report.cases {
            assert!(
                case.max_rel_discrepancy > 1e-3,
                "alpha={}: discrepancy {:e} suspiciously small",
                case.alpha,
                case.max_rel_discrepancy
            );
            assert!(
                case.max_identity_residual <= 1e-12,
                "alpha={}: identity residual {:e}",
                case.alpha,
                case.max_identity_residual
            );
        }
    }

    #[test]
    fn hall_closed_form_tracks_its_own_quadrature_only() {
        let report = generate_report();
        for case in &report.hall_relation {
            let rel = mixed_rel(case.rho_closed_form, case.rho_from_closed_form_quadrature);
            assert!(rel <= 1e-9, "alpha={}: rel={rel:e}", case.alpha);
            let gap = mixed_rel(case.rho_closed_form, case.rho_from_oracle_quadrature);
            assert!(
                gap > 1e-6,
                "alpha={}: oracle quadrature unexpectedly agrees ({gap:e})",
                case.alpha
            );
        }
    }

    #[test]
    fn alpha_negation_mapping_is_exact() {
        let report = generate_report();
        assert!(report.alpha_negation.max_rel_deviation_closed_form <= 1e-12);
        assert!(report.alpha_negation.max_rel_deviation_oracle <= 1e-12);
    }

    #[test]
    fn serialization_round_trips() {
        let report = generate_report();
        let json = report_json(&report);
        let parsed: ReconciliationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, report);
        // byte determinism across repeated generation
        assert_eq!(json, report_json(&generate_report()));
    }
}
