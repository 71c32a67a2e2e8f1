//! Simulation of two-level-atom excitation by uncoded and spectrally
//! phase-encoded single-photon wave packets, with the link-budget analysis
//! that turns the microscopic model into quantum-network design rules.
//!
//! The crate is organized around four concerns:
//!
//! * [`signal`] — spectral/temporal mode construction, chip-phase encoding,
//!   and the Fourier transform between the two pictures;
//! * [`atom`] — the single-excitation amplitude dynamics, the excitation
//!   probability, and its overlap cap against the time-reversed
//!   spontaneous-emission mode;
//! * [`overlap`] — the frequency-domain overlap functional against the
//!   Lorentzian atomic response, bandwidth matching, and the coded-comb
//!   overlap used in code-length and parity studies;
//! * [`network`] — phase-noise and chip-flip budgets, multiuser cross-talk
//!   statistics, signal-to-interference ratio, and aggregated design rules.
//!
//! All operations are pure functions over immutable values; Monte-Carlo
//! ensembles derive one random stream per `(seed, stream, trial)` so that
//! seeded results are reproducible at any parallelism level.

pub mod atom;
pub mod error;
pub mod export;
pub mod grid;
pub mod network;
pub mod overlap;
pub mod rng;
pub mod signal;

pub use atom::{
    codelength_peak_sweep, ensemble_peaks, excitation_bound, excite, optimal_mode,
    peak_excitation, temporal_overlap, AtomParams, ExcitationTrace, SweepPoint,
};
pub use error::{Error, Result};
pub use grid::{FrequencyGrid, TimeGrid};
pub use network::{
    chip_flip_factor, chip_flip_power, code_correlation_stats, crosstalk_scaling, design_report,
    design_report_with_rules, interference_power, phase_noise_factor, sir, BudgetInput,
    ChipAmplitudes, CrosstalkStats, DesignRules, LinkBudget, NoiseModel, ScalingPoint,
    ScalingResult,
};
pub use overlap::{
    bandwidth_match, coded_overlap, lorentzian_chi, lorentzian_chip_amplitudes,
    optimal_bandwidth, optimal_bandwidth_residual, parity_comparison, spectral_overlap,
    OverlapResult, Susceptibility,
};
pub use signal::{
    apply_spectral_phase, chip_phase_mask, encode_spectrum, encoded_temporal_closed_form,
    encoded_temporal_unit, intensity_trace, normalize, rect_spectrum, sinc, sinc_temporal,
    sinc_temporal_unit, to_time, unit_peak_power, PhaseCode, SpectralAmplitude, TemporalMode,
};
