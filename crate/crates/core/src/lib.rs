//! Triple-Helix synergy analytics for categorical panel data.
//!
//! Counts of firms over three dimensions (geography, organization size,
//! technology) are turned into Shannon entropies and the signed three-way
//! mutual information T (the synergy). The crate decomposes T into additive
//! per-group contributions and computes transmission power. It also
//! follows T over time with a finite Fourier decomposition and rescaled-range
//! (Hurst) analysis.

pub mod cli;
pub mod decomposition;
pub mod error;
pub mod hurst;
pub mod ingest;
pub mod plot;
pub mod polyfit;
pub mod report;
pub mod spectral;
pub mod tensor;

pub use decomposition::{
    decompose, decompose_panel, deviations, percent_deviations, transmission_power, DecompositionResult,
    DeviationReport, PowerBranch, TransmissionPower,
};
pub use error::{Error, Result};
pub use hurst::{hurst_exponent, hurst_exponent_with, rescaled_range, HurstResult, MeanMode};
pub use ingest::{
    apply_crosswalk, read_panel, validate_panel, ColumnMapping, Crosswalk, PanelSeries,
    RevisionSchedule,
};
pub use polyfit::{polyfit, PolyFit};
pub use spectral::{dft, group_spectra, inverse_dft, line_specter, SpectrumResult, TimeSeries};
pub use tensor::{
    entropy, entropy_set, mutual_info_2d, probabilities, synergy_3d, Axis, ContingencyTensor,
    EntropySet, ProbabilityModel,
};

/// Bits to millibits.
pub const MBITS_PER_BIT: f64 = 1000.0;
