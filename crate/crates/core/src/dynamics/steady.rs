//! Steady-state electrical statistics over the tail of a trajectory.

use std::f64::consts::TAU;

use super::integrator::{State, Trajectory};
use crate::error::{Error, Result};

/// Window length used when there is no forcing period to align to.
pub const UNFORCED_WINDOW: f64 = 50.0;

/// Part of the trajectory the statistics are taken over. The window always
/// ends at the last sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalysisWindow {
    /// The final fraction of the run, shortened to whole forcing periods.
    LastFraction(f64),
    /// The final `n` forcing periods.
    Periods(usize),
}

impl Default for AnalysisWindow {
    fn default() -> Self {
        AnalysisWindow::LastFraction(0.25)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStats {
    pub q_rms: f64,
    pub i_rms: f64,
    pub u_rms: f64,
    pub p_avg: f64,
    /// Half the peak-to-peak displacement.
    pub x_amp: f64,
}

fn window_length(samples: &[State], f0: f64, omega0: f64, window: AnalysisWindow) -> Result<f64> {
    let duration = samples.last().map_or(0.0, |s| s.t) - samples.first().map_or(0.0, |s| s.t);
    let forced = f0 != 0.0 && omega0 > 0.0;
    let length = if !forced {
        UNFORCED_WINDOW
    } else {
        let period = TAU / omega0;
        let n = match window {
            AnalysisWindow::LastFraction(f) => {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(Error::InvalidParameter {
                        name: "window",
                        reason: format!("fraction must lie in (0, 1], got {f}"),
                    });
                }
                (f * duration / period + 1e-9).floor() as usize
            }
            AnalysisWindow::Periods(n) => n,
        };
        if n == 0 {
            return Err(Error::Window {
                window: duration,
                reason: "shorter than one forcing period",
            });
        }
        n as f64 * period
    };
    if length > duration * (1.0 + 1e-12) {
        return Err(Error::Window {
            window: length,
            reason: "longer than the trajectory",
        });
    }
    Ok(length)
}

/// RMS of charge, current and voltage, mean power and displacement amplitude
/// over the analysis window, by the trapezoidal rule. Voltage is
/// `U = xi_q I` and power `P = xi_q I^2`.
pub fn steady_state(traj: &Trajectory, xi_q: f64, window: AnalysisWindow) -> Result<SteadyStats> {
    let samples = &traj.samples;
    if samples.len() < 2 {
        return Err(Error::Empty("trajectory"));
    }
    let length = window_length(samples, traj.params.f0, traj.params.omega0, window)?;
    let t_end = samples[samples.len() - 1].t;
    let t_start = t_end - length;
    let slack = 1e-9 * t_end.abs().max(1.0);
    let first = samples.partition_point(|s| s.t < t_start - slack);
    let tail = &samples[first..];
    if tail.len() < 2 {
        return Err(Error::Window {
            window: length,
            reason: "covering fewer than two samples",
        });
    }
    let mut q2 = 0.0;
    let mut i2 = 0.0;
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    for s in tail {
        x_min = x_min.min(s.x);
        x_max = x_max.max(s.x);
    }
    for w in tail.windows(2) {
        let h = w[1].t - w[0].t;
        q2 += 0.5 * h * (w[0].q * w[0].q + w[1].q * w[1].q);
        i2 += 0.5 * h * (w[0].i * w[0].i + w[1].i * w[1].i);
    }
    let span = tail[tail.len() - 1].t - tail[0].t;
    let q_ms = q2 / span;
    let i_ms = i2 / span;
    Ok(SteadyStats {
        q_rms: q_ms.sqrt(),
        i_rms: i_ms.sqrt(),
        u_rms: xi_q.abs() * i_ms.sqrt(),
        p_avg: xi_q * i_ms,
        x_amp: 0.5 * (x_max - x_min),
    })
}
