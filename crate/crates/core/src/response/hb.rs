//! Single-harmonic balance of the quintic-stiffness, Rayleigh-friction model.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Params, TaylorCoeffs};
use crate::roots::scan_roots;

/// Upper end of the amplitude scan.
pub const A_MAX: f64 = 5.0;
/// Number of scan intervals on `[0, A_MAX]`.
pub const SCAN_SAMPLES: usize = 2048;
/// Smallest accepted frequency grid.
pub const MIN_GRID: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HbMode {
    /// Coefficients as originally derived, without describing-function factors.
    #[default]
    Verbatim,
    /// Standard describing-function factors 3/4 and 5/8 on the odd terms.
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// `a1 a4 - a2 a5 + a3^2 = 0`
    RealPart,
    /// `a1 a5 + a2 a4 = 0`
    ImagPart,
}

impl fmt::Display for HbMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HbMode::Verbatim => "verbatim",
            HbMode::Corrected => "corrected",
        })
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::RealPart => "real",
            Source::ImagPart => "imag",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
}

impl HbCoefficients {
    pub fn residual(&self, source: Source) -> f64 {
        match source {
            Source::RealPart => self.a1 * self.a4 - self.a2 * self.a5 + self.a3 * self.a3,
            Source::ImagPart => self.a1 * self.a5 + self.a2 * self.a4,
        }
    }
}

pub fn hb_coefficients(
    a_x: f64,
    omega: f64,
    p: &Params,
    tc: &TaylorCoeffs,
    mode: HbMode,
) -> HbCoefficients {
    let a2x = a_x * a_x;
    let w2 = omega * omega;
    let (a1, a2) = match mode {
        HbMode::Verbatim => (
            tc.a1 + tc.a3 * a2x + tc.a5 * a2x * a2x - w2,
            omega * (p.xi - p.eta * a2x),
        ),
        HbMode::Corrected => (
            tc.a1 + 0.75 * tc.a3 * a2x + 0.625 * tc.a5 * a2x * a2x - w2,
            omega * (p.xi - 0.75 * p.eta * w2 * a2x),
        ),
    };
    HbCoefficients {
        a1,
        a2,
        a3: -omega * p.theta,
        a4: 1.0 - p.gamma * w2,
        a5: omega,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePoint {
    pub omega: f64,
    pub a_x: f64,
    pub branch: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeCurve {
    pub source: Source,
    pub mode: HbMode,
    /// Frequency grid, including frequencies without any root.
    pub omegas: Vec<f64>,
    /// Points ordered by frequency, then amplitude.
    pub points: Vec<AmplitudePoint>,
}

impl AmplitudeCurve {
    /// Amplitudes found at grid frequency index `k`, ascending.
    pub fn amplitudes_at(&self, k: usize) -> Vec<f64> {
        let w = self.omegas[k];
        self.points
            .iter()
            .filter(|pt| pt.omega == w)
            .map(|pt| pt.a_x)
            .collect()
    }

    pub fn branch_count(&self) -> usize {
        self.points
            .iter()
            .map(|pt| pt.branch + 1)
            .max()
            .unwrap_or(0)
    }
}

/// All roots `A_X` in `[0, A_MAX]` of the selected residual at one frequency.
pub fn amplitude_roots(
    omega: f64,
    p: &Params,
    tc: &TaylorCoeffs,
    source: Source,
    mode: HbMode,
) -> Vec<f64> {
    scan_roots(
        |a| hb_coefficients(a, omega, p, tc, mode).residual(source),
        0.0,
        A_MAX,
        SCAN_SAMPLES,
        0.0,
    )
}

/// Assigns branch ids to `current` by greedy nearest-neighbour matching with
/// `previous`; unmatched roots open new branches.
fn chain(previous: &[(f64, usize)], current: &[f64], next_id: &mut usize) -> Vec<(f64, usize)> {
    let mut pairs: Vec<(f64, usize, usize)> = current
        .iter()
        .enumerate()
        .flat_map(|(i, a)| {
            previous
                .iter()
                .enumerate()
                .map(move |(j, (b, _))| ((a - b).abs(), i, j))
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut assigned: Vec<Option<usize>> = vec![None; current.len()];
    let mut taken = vec![false; previous.len()];
    for (_, i, j) in pairs {
        if assigned[i].is_none() && !taken[j] {
            assigned[i] = Some(previous[j].1);
            taken[j] = true;
        }
    }
    current
        .iter()
        .zip(assigned)
        .map(|(&a, id)| {
            let id = id.unwrap_or_else(|| {
                *next_id += 1;
                *next_id - 1
            });
            (a, id)
        })
        .collect()
}

/// Amplitude–frequency curve on `grid_n` equally spaced frequencies spanning
/// `omega_range` inclusive.
pub fn amplitude_curve(
    p: &Params,
    tc: &TaylorCoeffs,
    omega_range: (f64, f64),
    grid_n: usize,
    source: Source,
    mode: HbMode,
) -> Result<AmplitudeCurve> {
    let (lo, hi) = omega_range;
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
        return Err(Error::InvalidParameter {
            name: "omega_range",
            reason: format!("need 0 < omega_min < omega_max, got ({lo}, {hi})"),
        });
    }
    if grid_n < MIN_GRID {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: format!("need at least {MIN_GRID} frequencies, got {grid_n}"),
        });
    }
    let omegas: Vec<f64> = (0..grid_n)
        .map(|k| {
            if k == grid_n - 1 {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (grid_n - 1) as f64
            }
        })
        .collect();
    let columns: Vec<Vec<f64>> = omegas
        .par_iter()
        .map(|&w| amplitude_roots(w, p, tc, source, mode))
        .collect();
    let mut points = Vec::new();
    let mut previous: Vec<(f64, usize)> = Vec::new();
    let mut next_id = 0;
    for (&w, roots) in omegas.iter().zip(&columns) {
        previous = chain(&previous, roots, &mut next_id);
        points.extend(previous.iter().map(|&(a_x, branch)| AmplitudePoint {
            omega: w,
            a_x,
            branch,
        }));
    }
    Ok(AmplitudeCurve {
        source,
        mode,
        omegas,
        points,
    })
}
