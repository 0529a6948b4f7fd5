//! Subcommand drivers: table construction and the verification suite.

use crate::config::{RunConfig, Subcmd};
use crate::table::{ColumnSpec, ResultTable};
use crate::threads::{ordered_parallel_map, thread_cap};
use ab_vortex::cross_section::{
    asymmetry_from_corrections, modified_cross_section_from_corrections, PhiGrid,
};
use ab_vortex::phase::ChannelCorrections;
use ab_vortex::{
    amplitude_oracle, decompose_flux, find_resonance_numeric, hall_resistivity,
    resonance_energy, standard_cross_section, total_phase_shift, AbError, ExtensionSpec,
    Kinematics, ResonancePrediction,
};

/// Build the result table for any table-emitting subcommand.
pub fn build_table(config: &RunConfig) -> Result<ResultTable, AbError> {
    match config.subcommand {
        Subcmd::PhaseShift => phase_shift_table(config),
        Subcmd::CrossSection => cross_section_table(config),
        Subcmd::Resonance => resonance_table(config),
        Subcmd::Hall => hall_table(config),
        Subcmd::Sweep => sweep_table(config),
    }
}

fn spec_of(config: &RunConfig) -> Result<ExtensionSpec, AbError> {
    ExtensionSpec::new(config.e_bound_n, config.e_bound_n1)
}

fn phase_shift_table(config: &RunConfig) -> Result<ResultTable, AbError> {
    let flux = decompose_flux(config.alpha)?;
    let spec = spec_of(config)?;
    let mut table = ResultTable::new(
        config.clone(),
        vec![
            ColumnSpec { name: "l", unit: "1" },
            ColumnSpec { name: "delta0", unit: "rad" },
            ColumnSpec { name: "correction", unit: "rad" },
            ColumnSpec { name: "total", unit: "rad" },
        ],
    );
    // ten channels centered on the modified pair
    let lo = flux.channel_n1() - 4;
    let hi = flux.channel_n() + 4;
    for l in lo..=hi {
        let phase = total_phase_shift(l, &flux, config.energy, &spec)?;
        table.push_row(vec![l as f64, phase.delta0, phase.correction, phase.total]);
    }
    Ok(table)
}

fn cross_section_table(config: &RunConfig) -> Result<ResultTable, AbError> {
    let flux = decompose_flux(config.alpha)?;
    let spec = spec_of(config)?;
    let kin = config.kinematics()?;
    let corr = ChannelCorrections::compute(&flux, kin.energy(), &spec)?;
    let k = kin.wavenumber();
    let grid = PhiGrid {
        phi_min: config.phi_min,
        phi_max: config.phi_max,
        steps: config.phi_steps,
    };
    let points = grid.points();
    let rows: Vec<Result<Vec<f64>, AbError>> =
        ordered_parallel_map(&points, thread_cap(), |&phi| -> Result<Vec<f64>, AbError> {
            let total = modified_cross_section_from_corrections(k, phi, config.alpha, &corr)?;
            let standard = standard_cross_section(k, phi, config.alpha)?;
            let oracle = amplitude_oracle(&kin, phi, &flux, &spec)?.cross_section();
            let asym = asymmetry_from_corrections(k, phi, config.alpha, &corr)?;
            Ok(vec![phi, total, standard, oracle, asym])
        });
    let mut table = ResultTable::new(
        config.clone(),
        vec![
            ColumnSpec { name: "phi", unit: "rad" },
            ColumnSpec { name: "dsigma_total", unit: "length/rad" },
            ColumnSpec { name: "dsigma_standard", unit: "length/rad" },
            ColumnSpec { name: "dsigma_oracle", unit: "length/rad" },
            ColumnSpec { name: "asymmetry", unit: "length/rad" },
        ],
    );
    for row in rows {
        table.push_row(row?);
    }
    Ok(table)
}

const RESONANCE_STATUS_LEGEND: &str =
    "status: 0=ok, 1=closed form outside validity, 2=numeric root not found, 3=both";

fn resonance_table(config: &RunConfig) -> Result<ResultTable, AbError> {
    let flux = decompose_flux(config.alpha)?;
    let spec = spec_of(config)?;
    let eta = flux.eta();
    let mut status = 0.0;

    let closed = match resonance_energy(&flux, &spec) {
        ResonancePrediction::Energy(e) => e,
        ResonancePrediction::Unsupported { .. } => {
            status += 1.0;
            f64::NAN
        }
    };

    // the channel whose denominator can cross zero, and its bound magnitude
    let (channel, e_bound) = if eta > 0.0 && eta < 0.5 {
        (flux.channel_n(), spec.e_bound_n())
    } else if eta > 0.5 {
        (flux.channel_n1(), spec.e_bound_n1())
    } else {
        (flux.channel_n(), None)
    };
    let numeric = match e_bound {
        Some(eb) => {
            match find_resonance_numeric(&flux, &spec, channel, (1e-3 * eb, 1e9 * eb)) {
                Ok(e) => e,
                Err(_) => {
                    status += 2.0;
                    f64::NAN
                }
            }
        }
        None => {
            status += 2.0;
            f64::NAN
        }
    };

    let mut table = ResultTable::new(
        config.clone(),
        vec![
            ColumnSpec { name: "eta", unit: "1" },
            ColumnSpec { name: "e_bound", unit: "energy" },
            ColumnSpec { name: "e_res_closed", unit: "energy" },
            ColumnSpec { name: "e_res_numeric", unit: "energy" },
            ColumnSpec { name: "status", unit: "code" },
        ],
    );
    table.annotations.push(RESONANCE_STATUS_LEGEND.to_string());
    table.push_row(vec![
        eta,
        e_bound.unwrap_or(f64::NAN),
        closed,
        numeric,
        status,
    ]);
    Ok(table)
}

fn hall_table(config: &RunConfig) -> Result<ResultTable, AbError> {
    let flux = decompose_flux(config.alpha)?;
    let spec = spec_of(config)?;
    let kin = config.kinematics()?;
    let (n_v, n_e) = (config.n_v.unwrap_or(1.0), config.n_e.unwrap_or(1.0));
    let result = hall_resistivity(n_v, n_e, &flux, &kin, &spec)?;
    let mut table = ResultTable::new(
        config.clone(),
        vec![
            ColumnSpec { name: "alpha", unit: "1" },
            ColumnSpec { name: "rho_xy", unit: "hc^2/e^2" },
            ColumnSpec { name: "rho_xy_quadrature", unit: "hc^2/e^2" },
        ],
    );
    table.push_row(vec![config.alpha, result.rho_xy, result.rho_xy_quadrature]);
    Ok(table)
}

fn sweep_table(config: &RunConfig) -> Result<ResultTable, AbError> {
    let start = config.alpha_start.unwrap_or(0.0);
    let stop = config.alpha_stop.unwrap_or(1.0);
    let steps = config.alpha_steps.unwrap_or(101).max(1);
    let kin = config.kinematics()?;
    let spec = spec_of(config)?;
    let (n_v, n_e) = (config.n_v.unwrap_or(1.0), config.n_e.unwrap_or(1.0));
    let alphas: Vec<f64> = (0..steps)
        .map(|i| {
            if steps == 1 {
                start
            } else {
                start + (stop - start) * i as f64 / (steps - 1) as f64
            }
        })
        .collect();
    let rows: Vec<Result<Vec<f64>, AbError>> =
        ordered_parallel_map(&alphas, thread_cap(), |&alpha| -> Result<Vec<f64>, AbError> {
            let flux = decompose_flux(alpha)?;
            let result = hall_resistivity(n_v, n_e, &flux, &kin, &spec)?;
            Ok(vec![
                alpha,
                flux.eta(),
                result.rho_xy,
                result.rho_xy_quadrature,
                0.0,
            ])
        });
    let mut table = ResultTable::new(
        config.clone(),
        vec![
            ColumnSpec { name: "alpha", unit: "1" },
            ColumnSpec { name: "eta", unit: "1" },
            ColumnSpec { name: "rho_xy", unit: "hc^2/e^2" },
            ColumnSpec { name: "rho_xy_quadrature", unit: "hc^2/e^2" },
            ColumnSpec { name: "status", unit: "code" },
        ],
    );
    table.annotations.push("status: 0=ok".to_string());
    for row in rows {
        table.push_row(row?);
    }
    Ok(table)
}

pub mod verify {
    //! The `verify` subcommand: reconciliation staleness, golden values, and
    //! the invariant suite. Two checks are expected-fail by construction:
    //! the published limit tolerances for conventional reduction at
    //! |E_l| = 1e8 E and the phase-shift flip at |E_l| = 1e-12 E are set for
    //! a linear approach in E/|E_l|, while the correction decays with the
    //! fractional channel exponents eta and 1 - eta. The suite reports the
    //! measured values and fails only if those checks unexpectedly pass.

    use super::*;
    use ab_vortex::cross_section::skew_bracket;
    use ab_vortex::hall::hall_resistivity_from_corrections;
    use ab_vortex::reconcile;
    use std::f64::consts::{FRAC_PI_2, PI};
    use std::path::Path;

    enum Outcome {
        Pass(String),
        Fail(String),
        ExpectedFail(String),
        UnexpectedPass(String),
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    fn mixed_rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1.0)
    }

    pub fn run(report_path: &Path, write_report: bool) -> i32 {
        if write_report {
            match reconcile::write_report(report_path) {
                Ok(_) => {
                    println!("wrote {}", report_path.display());
                    return 0;
                }
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", report_path.display());
                    return 3;
                }
            }
        }

        let mut failed = false;
        let mut emit = |name: &str, outcome: Outcome| match outcome {
            Outcome::Pass(detail) => println!("ok {name} ({detail})"),
            Outcome::Fail(detail) => {
                failed = true;
                println!("FAIL {name}: {detail}");
            }
            Outcome::ExpectedFail(detail) => {
                println!("expected-fail {name}: {detail} (documented formula-scale limit)");
            }
            Outcome::UnexpectedPass(detail) => {
                failed = true;
                println!("FAIL {name}: unexpectedly passed, formulas may have changed ({detail})");
            }
        };

        let report = match reconcile::check_freshness(report_path) {
            Ok(report) => {
                emit("reconciliation-report-fresh", Outcome::Pass("byte-identical".into()));
                Some(report)
            }
            Err(msg) => {
                emit("reconciliation-report-fresh", Outcome::Fail(msg));
                None
            }
        };

        if let Some(report) = &report {
            emit("reconciliation-identity", check_identity(report));
            emit("golden-observables", check_golden(report));
        }
        emit("resonance-closed-vs-numeric", check_resonances());
        emit("periodicity", check_periodicity());
        emit("branch-invariance", check_branch_invariance());
        emit("asymmetry-cases", check_asymmetry());
        emit("hall-quadrature-identity", check_hall_identity());
        emit("conventional-reduction-absent", check_reduction_absent());
        emit("conventional-reduction-1e8", check_reduction_1e8());
        emit("phase-flip-1e12", check_flip_1e12());

        if failed {
            3
        } else {
            0
        }
    }

    fn check_identity(report: &reconcile::ReconciliationReport) -> Outcome {
        if report.closed_form_matches_oracle {
            return Outcome::Fail(
                "report claims route agreement; the recorded discrepancy structure \
                 should exist instead"
                    .into(),
            );
        }
        let worst = report
            .cases
            .iter()
            .map(|c| c.max_identity_residual)
            .fold(0.0, f64::max);
        if worst <= 1e-10 {
            Outcome::Pass(format!("identity residual {worst:.2e}"))
        } else {
            Outcome::Fail(format!("identity residual {worst:.2e} > 1e-10"))
        }
    }

    fn check_golden(report: &reconcile::ReconciliationReport) -> Outcome {
        let g = &report.golden;
        let flux = decompose_flux(g.alpha).unwrap();
        let kin = Kinematics::natural(g.energy).unwrap();
        let spec = ExtensionSpec::new(Some(g.e_bound_n), None).unwrap();

        let oracle = match amplitude_oracle(&kin, g.phi, &flux, &spec) {
            Ok(sample) => sample.cross_section(),
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        if rel(oracle, g.oracle_dsigma) > 1e-12 {
            return Outcome::Fail(format!(
                "oracle dsigma {oracle:e} vs golden {:e}",
                g.oracle_dsigma
            ));
        }
        let closed =
            ab_vortex::modified_cross_section(&kin, g.phi, &flux, &spec).unwrap();
        if rel(closed, g.closed_form_dsigma_reconstructed) > 1e-12 {
            return Outcome::Fail(format!(
                "closed-form dsigma {closed:e} vs golden {:e}",
                g.closed_form_dsigma_reconstructed
            ));
        }
        let asym = ab_vortex::asymmetry(&kin, g.phi, &flux, &spec).unwrap();
        if rel(asym, g.asymmetry_reconstructed) > 1e-12 {
            return Outcome::Fail(format!(
                "asymmetry {asym:e} vs golden {:e}",
                g.asymmetry_reconstructed
            ));
        }
        let hall = hall_resistivity(g.vortex_density, g.electron_density, &flux, &kin, &spec)
            .unwrap();
        if rel(hall.rho_xy, g.rho_xy_from_reconstructed_quadrature) > 1e-9 {
            return Outcome::Fail(format!(
                "rho_xy {:e} vs golden quadrature {:e}",
                hall.rho_xy, g.rho_xy_from_reconstructed_quadrature
            ));
        }
        Outcome::Pass("library output reproduces the committed golden values".into())
    }

    fn check_resonances() -> Outcome {
        let mut worst = 0.0_f64;
        for eta in [0.1, 0.2, 0.25, 1.0 / 3.0, 0.45] {
            for eb in [0.5, 1.0, 2.0] {
                let flux = decompose_flux(eta).unwrap();
                let spec = ExtensionSpec::new(Some(eb), None).unwrap();
                let Some(closed) = resonance_energy(&flux, &spec).energy() else {
                    return Outcome::Fail(format!("closed form missing at eta={eta}"));
                };
                let numeric = match find_resonance_numeric(
                    &flux,
                    &spec,
                    flux.channel_n(),
                    (1e-3 * eb, 1e6 * eb),
                ) {
                    Ok(e) => e,
                    Err(e) => return Outcome::Fail(format!("eta={eta} eb={eb}: {e}")),
                };
                worst = worst.max((closed - numeric).abs() / closed);
            }
        }
        // pinned values
        let f4 = decompose_flux(0.25).unwrap();
        let s4 = ExtensionSpec::new(Some(1.0), None).unwrap();
        let e4 = resonance_energy(&f4, &s4).energy().unwrap();
        let f16 = decompose_flux(1.0 / 3.0).unwrap();
        let s16 = ExtensionSpec::new(Some(2.0), None).unwrap();
        let e16 = resonance_energy(&f16, &s16).energy().unwrap();
        if worst <= 1e-8 && (e4 - 4.0).abs() < 1e-11 && (e16 - 16.0).abs() < 1e-10 {
            Outcome::Pass(format!("worst relative gap {worst:.2e}; pinned 4.0 and 16.0"))
        } else {
            Outcome::Fail(format!(
                "worst {worst:.2e}, e(1/4,1)={e4}, e(1/3,2)={e16}"
            ))
        }
    }

    fn periodicity_points() -> [(f64, f64, Option<f64>, Option<f64>); 3] {
        [
            (0.25, 2.0, Some(1.0), Some(0.5)),
            (1.6, 1.5, Some(0.7), Some(2.0)),
            (-0.75, 3.0, Some(1.2), Some(0.6)),
        ]
    }

    fn check_periodicity() -> Outcome {
        let grid = PhiGrid::default_grid();
        let mut worst = 0.0_f64;
        for (alpha, energy, ebn, ebm) in periodicity_points() {
            let kin = Kinematics::natural(energy).unwrap();
            let spec = ExtensionSpec::new(ebn, ebm).unwrap();
            let base = decompose_flux(alpha).unwrap();
            let shifted = decompose_flux(alpha + 1.0).unwrap();
            let corr_base = ChannelCorrections::compute(&base, energy, &spec).unwrap();
            let corr_shift = ChannelCorrections::compute(&shifted, energy, &spec).unwrap();
            let k = kin.wavenumber();
            for phi in grid.points() {
                let a =
                    modified_cross_section_from_corrections(k, phi, alpha, &corr_base).unwrap();
                let b =
                    modified_cross_section_from_corrections(k, phi, alpha + 1.0, &corr_shift)
                        .unwrap();
                worst = worst.max(rel(a, b));
            }
            let rho_a =
                hall_resistivity_from_corrections(0.01, 1.0, alpha, &corr_base).unwrap();
            let rho_b =
                hall_resistivity_from_corrections(0.01, 1.0, alpha + 1.0, &corr_shift).unwrap();
            worst = worst.max(rel(rho_a, rho_b));
        }
        if worst <= 1e-12 {
            Outcome::Pass(format!("worst relative gap {worst:.2e}"))
        } else {
            Outcome::Fail(format!("worst relative gap {worst:.2e} > 1e-12"))
        }
    }

    fn check_branch_invariance() -> Outcome {
        let mut worst = 0.0_f64;
        for (dn, dm) in [(0.3, 1.1), (2.0, 0.4), (1.57, 2.9)] {
            let base = ChannelCorrections { delta_n: dn, delta_n1: dm };
            for (sn, sm) in [(PI, 0.0), (0.0, PI), (PI, PI)] {
                let shifted = ChannelCorrections {
                    delta_n: dn + sn,
                    delta_n1: dm + sm,
                };
                for alpha in [0.25, 1.6] {
                    for phi in [0.2, 1.0, 2.5] {
                        let a = modified_cross_section_from_corrections(1.3, phi, alpha, &base)
                            .unwrap();
                        let b =
                            modified_cross_section_from_corrections(1.3, phi, alpha, &shifted)
                                .unwrap();
                        worst = worst.max(mixed_rel(a, b));
                    }
                    let ra = hall_resistivity_from_corrections(0.01, 1.0, alpha, &base).unwrap();
                    let rb =
                        hall_resistivity_from_corrections(0.01, 1.0, alpha, &shifted).unwrap();
                    worst = worst.max(mixed_rel(ra, rb));
                }
            }
        }
        if worst <= 1e-12 {
            Outcome::Pass(format!("worst relative change {worst:.2e}"))
        } else {
            Outcome::Fail(format!("worst relative change {worst:.2e} > 1e-12"))
        }
    }

    fn check_asymmetry() -> Outcome {
        let kin = Kinematics::natural(2.0).unwrap();
        let flux = decompose_flux(0.25).unwrap();
        // both corrections zero
        let zero = ab_vortex::asymmetry(&kin, FRAC_PI_2, &flux, &ExtensionSpec::conventional())
            .unwrap();
        if zero.abs() > 1e-12 {
            return Outcome::Fail(format!("conventional asymmetry {zero:e}"));
        }
        // generic point
        let spec = ExtensionSpec::new(Some(1.0), None).unwrap();
        let generic = ab_vortex::asymmetry(&kin, FRAC_PI_2, &flux, &spec).unwrap();
        if generic.abs() < 1e-3 {
            return Outcome::Fail(format!("generic asymmetry too small: {generic:e}"));
        }
        // constructed zero: equal bound magnitudes at eta = 1/4 kill the bracket
        let constructed = ExtensionSpec::new(Some(2.0), Some(2.0)).unwrap();
        let corr = ChannelCorrections::compute(&flux, 2.0, &constructed).unwrap();
        if skew_bracket(0.25, &corr).abs() > 1e-12 {
            return Outcome::Fail("constructed point no longer kills the bracket".into());
        }
        let symmetric = ab_vortex::asymmetry(&kin, FRAC_PI_2, &flux, &constructed).unwrap();
        if symmetric.abs() > 1e-10 {
            return Outcome::Fail(format!("constructed asymmetry {symmetric:e}"));
        }
        Outcome::Pass(format!(
            "zero / generic {generic:.3e} / constructed {symmetric:.1e}"
        ))
    }

    fn check_hall_identity() -> Outcome {
        let mut worst = 0.0_f64;
        for eta in [0.1, 0.25, 0.4, 0.6, 0.8] {
            for energy in [0.5, 1.0, 2.0, 4.0, 8.0] {
                let flux = decompose_flux(eta).unwrap();
                let kin = Kinematics::natural(energy).unwrap();
                let spec = ExtensionSpec::new(Some(1.0), Some(0.7)).unwrap();
                let r = hall_resistivity(0.01, 1.0, &flux, &kin, &spec).unwrap();
                worst = worst.max(rel(r.rho_xy, r.rho_xy_quadrature));
            }
        }
        if worst <= 1e-6 {
            Outcome::Pass(format!("worst relative gap {worst:.2e} on the 5x5 grid"))
        } else {
            Outcome::Fail(format!("worst relative gap {worst:.2e} > 1e-6"))
        }
    }

    fn reduction_deviation(bound_ratio: Option<f64>) -> f64 {
        let alpha = 0.25;
        let energy = 2.0;
        let kin = Kinematics::natural(energy).unwrap();
        let flux = decompose_flux(alpha).unwrap();
        let spec = match bound_ratio {
            Some(r) => ExtensionSpec::new(Some(r * energy), Some(r * energy)).unwrap(),
            None => ExtensionSpec::conventional(),
        };
        let corr = ChannelCorrections::compute(&flux, energy, &spec).unwrap();
        let k = kin.wavenumber();
        let mut worst = 0.0_f64;
        for phi in PhiGrid::default_grid().points() {
            let modified =
                modified_cross_section_from_corrections(k, phi, alpha, &corr).unwrap();
            let standard = standard_cross_section(k, phi, alpha).unwrap();
            worst = worst.max((modified - standard).abs() / standard);
        }
        worst
    }

    fn check_reduction_absent() -> Outcome {
        let worst = reduction_deviation(None);
        if worst <= 1e-14 {
            Outcome::Pass(format!("max relative deviation {worst:.2e}"))
        } else {
            Outcome::Fail(format!("max relative deviation {worst:.2e} > 1e-14"))
        }
    }

    fn check_reduction_1e8() -> Outcome {
        let worst = reduction_deviation(Some(1e8));
        if worst <= 1e-5 {
            Outcome::UnexpectedPass(format!("max relative deviation {worst:.2e}"))
        } else {
            Outcome::ExpectedFail(format!(
                "max relative deviation {worst:.3e} > 1e-5; the slow channel decays as \
                 (E/|E_l|)^min(eta,1-eta), reaching 1e-5 only near |E_l| ~ 1e26 E"
            ))
        }
    }

    fn check_flip_1e12() -> Outcome {
        let energy = 1.0;
        let ratio = 1e-12;
        let mut worst = 0.0_f64;
        for alpha in [0.25, 0.5, 0.75] {
            let flux = decompose_flux(alpha).unwrap();
            let spec =
                ExtensionSpec::new(Some(ratio * energy), Some(ratio * energy)).unwrap();
            for l in [flux.channel_n(), flux.channel_n1()] {
                let phase = total_phase_shift(l, &flux, energy, &spec).unwrap();
                // |exp(2 i delta) - exp(-2 i delta0)| = 2 |sin(delta + delta0)|
                worst = worst.max(2.0 * (phase.total + phase.delta0).sin().abs());
            }
        }
        if worst <= 1e-4 {
            Outcome::UnexpectedPass(format!("max |S - S_flip| {worst:.2e}"))
        } else {
            Outcome::ExpectedFail(format!(
                "max |S - S_flip| {worst:.3e} > 1e-4; the gap scales as \
                 2 sin(p pi) (|E_l|/E)^p with p = min(eta, 1-eta)"
            ))
        }
    }

}
