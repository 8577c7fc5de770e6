//! Harmonic-balance response curves and electrical-output sweeps.

mod hb;
mod sweep;

pub use hb::{
    amplitude_curve, amplitude_roots, hb_coefficients, AmplitudeCurve, AmplitudePoint,
    HbCoefficients, HbMode, Source, A_MAX, MIN_GRID, SCAN_SAMPLES,
};
pub use sweep::{
    electrical_outputs, simulate_stats, sweep, Case, ElectricalSeries, SimConfig, SweepResult,
    SweepRow, SweepSpec, SweepVariable,
};
