//! Correlation dynamics of two-qubit states under one-sided phase damping.
//!
//! The crate computes total, classical and quantum correlations (mutual
//! information, Henderson–Vedral classical correlation, discord) together
//! with concurrence-based entanglement measures for two-qubit density
//! matrices, sweeps them over a calibrated dephasing channel, detects the
//! dynamical landmarks of those curves, and simulates 16-setting
//! polarization tomography with Poisson counting noise.

pub mod channel;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod search;
pub mod states;
pub mod tomography;

pub use channel::{
    apply_dephasing_a, evolve, kappa_of_thickness, ChannelStrength, DephasingModel, SpectralProfile,
};
pub use dynamics::{
    emit, esd_point, qc_cross_intervals, sudden_change_point, sweep, EventMarkers, OutputFormat,
    SweepRow, SweepTable,
};
pub use error::{Error, Result};
pub use linalg::{
    hermitian_eig, partial_trace, tensor, trace_distance, vn_entropy, ComplexMatrix, Spectrum,
    Subsystem, C64,
};
pub use measures::{
    classical_correlation_analytic, classical_correlation_numeric, concurrence,
    conditional_entropy_after_b, entanglement_of_formation, full_report, mutual_information,
    quantum_discord, ree_bell_diagonal, CorrelationReport, MeasurementDirection, OptimizerSettings,
    OutcomeMode,
};
pub use states::{
    bell_state, four_mix_state, from_mixture, interference_state, to_mixture, BellMixture,
    BellState, StateFamilySpec,
};
pub use tomography::{
    bootstrap_report, linear_inversion, project_physical, projectors, simulate_counts,
    BootstrapReport, CountRecord, CountSet, Setting,
};
