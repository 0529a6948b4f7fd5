//! Aharonov-Bohm scattering off an idealized flux tube with nonstandard
//! (self-adjoint-extension) boundary conditions.
//!
//! The flux alpha = n + eta fixes two special angular-momentum channels,
//! l = -n and l = -n-1, where a bound state of magnitude |E_l| may sit.
//! Its presence adds an energy-dependent correction to the conventional
//! phase shift, produces a resonance at positive energy, breaks the
//! phi -> -phi symmetry of the differential cross section, and drives a
//! Hall response of a dilute gas of such vortices.
//!
//! The crate computes all of these observables twice where a closed form
//! exists: once from the closed form and once from an independent
//! amplitude-level oracle, with the relation between the two recorded in a
//! committed reconciliation report (see [`reconcile`]).

pub mod cross_section;
pub mod error;
pub mod flux;
pub mod hall;
pub mod numeric;
pub mod phase;
pub mod reconcile;

pub use cross_section::{
    amplitude_oracle, asymmetry, modified_cross_section, standard_cross_section,
    transverse_cross_section, AmplitudeSample, AngularProfile, PhiGrid,
};
pub use error::{AbError, Result};
pub use flux::{
    decompose_flux, validate_extension, wavenumber, ExtensionSpec, FluxDecomposition, Kinematics,
    UnitSystem,
};
pub use hall::{hall_resistivity, hall_sweep, HallResult};
pub use phase::{
    bound_state_factor, delta_correction, find_resonance_numeric, resonance_energy,
    standard_phase_shift, total_phase_shift, ChannelCorrections, ChannelPhase,
    ResonancePrediction,
};
