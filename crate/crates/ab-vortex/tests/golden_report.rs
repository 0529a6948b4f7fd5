//! Pins library output to the committed reconciliation report: the report
//! must be reproducible byte for byte, and the frozen observables in its
//! golden block must come back out of the public API.

use ab_vortex::cross_section::transverse_oracle;
use ab_vortex::{
    amplitude_oracle, asymmetry, decompose_flux, hall_resistivity, modified_cross_section,
    reconcile, ExtensionSpec, Kinematics,
};
use std::path::PathBuf;

fn report_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../reports/reconciliation.json")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn committed_report_is_fresh() {
    reconcile::check_freshness(&report_path()).unwrap();
}

#[test]
fn committed_report_records_the_discrepancy_structure() {
    let text = std::fs::read_to_string(report_path()).unwrap();
    let report: reconcile::ReconciliationReport = serde_json::from_str(&text).unwrap();
    assert!(!report.closed_form_matches_oracle);
    assert_eq!(report.cases.len(), 3);
    assert_eq!(report.phi_points, 720);
    for case in &report.cases {
        assert!(case.max_rel_discrepancy > 1e-3);
        assert!(case.max_identity_residual <= 1e-10);
    }
    assert_eq!(
        report.discrepancy.correction_amplitude_scale,
        2.0 * std::f64::consts::PI
    );
}

#[test]
fn golden_observables_come_back_from_the_api() {
    let text = std::fs::read_to_string(report_path()).unwrap();
    let report: reconcile::ReconciliationReport = serde_json::from_str(&text).unwrap();
    let g = &report.golden;

    let flux = decompose_flux(g.alpha).unwrap();
    let kin = Kinematics::natural(g.energy).unwrap();
    let spec = ExtensionSpec::new(Some(g.e_bound_n), None).unwrap();

    let oracle = amplitude_oracle(&kin, g.phi, &flux, &spec)
        .unwrap()
        .cross_section();
    assert!(
        rel(oracle, g.oracle_dsigma) <= 1e-12,
        "oracle {oracle:e} vs golden {:e}",
        g.oracle_dsigma
    );

    let closed = modified_cross_section(&kin, g.phi, &flux, &spec).unwrap();
    assert!(
        rel(closed, g.closed_form_dsigma_reconstructed) <= 1e-12,
        "closed form {closed:e} vs golden {:e}",
        g.closed_form_dsigma_reconstructed
    );

    let asym = asymmetry(&kin, g.phi, &flux, &spec).unwrap();
    assert!(
        rel(asym, g.asymmetry_reconstructed) <= 1e-12,
        "asymmetry {asym:e} vs golden {:e}",
        g.asymmetry_reconstructed
    );

    let hall = hall_resistivity(g.vortex_density, g.electron_density, &flux, &kin, &spec).unwrap();
    assert!(
        rel(hall.rho_xy, g.rho_xy_from_reconstructed_quadrature) <= 1e-9,
        "rho_xy {:e} vs golden {:e}",
        hall.rho_xy,
        g.rho_xy_from_reconstructed_quadrature
    );
}

#[test]
fn hall_relation_separates_the_two_quadratures() {
    let text = std::fs::read_to_string(report_path()).unwrap();
    let report: reconcile::ReconciliationReport = serde_json::from_str(&text).unwrap();
    for case in &report.hall_relation {
        assert!(
            rel(case.rho_closed_form, case.rho_from_closed_form_quadrature) <= 1e-9,
            "alpha={}: closed form should match its own quadrature",
            case.alpha
        );
        assert!(
            (case.rho_closed_form - case.rho_from_oracle_quadrature).abs()
                > 1e-4 * case.rho_closed_form.abs().max(1e-6),
            "alpha={}: oracle quadrature should differ",
            case.alpha
        );
    }
}

#[test]
fn negativity_example_reproduces() {
    let text = std::fs::read_to_string(report_path()).unwrap();
    let report: reconcile::ReconciliationReport = serde_json::from_str(&text).unwrap();
    let n = &report.negativity_example;
    let flux = decompose_flux(n.alpha).unwrap();
    let kin = Kinematics::natural(n.energy).unwrap();
    let spec = ExtensionSpec::new(Some(n.e_bound_n), Some(n.e_bound_n1)).unwrap();
    let closed = modified_cross_section(&kin, n.phi, &flux, &spec).unwrap();
    assert!(closed < 0.0, "closed form should be negative, got {closed:e}");
    assert!(rel(closed, n.closed_form_value) <= 1e-12);
    let oracle = amplitude_oracle(&kin, n.phi, &flux, &spec)
        .unwrap()
        .cross_section();
    assert!(oracle >= 0.0);
}

#[test]
fn oracle_transverse_cross_section_converges_too() {
    // the oracle sigma_perp backs the hall_relation numbers; check its grid
    // treatment converges like the closed-form one
    let flux = decompose_flux(0.25).unwrap();
    let kin = Kinematics::natural(2.0).unwrap();
    let spec = ExtensionSpec::new(Some(1.0), Some(0.5)).unwrap();
    let coarse = transverse_oracle(&kin, &flux, &spec, 1 << 14).unwrap();
    let fine = transverse_oracle(&kin, &flux, &spec, 1 << 15).unwrap();
    assert!(
        (fine - coarse).abs() <= 1e-8 * coarse.abs().max(1e-30),
        "coarse={coarse:e} fine={fine:e}"
    );
}
