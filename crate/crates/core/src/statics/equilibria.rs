use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Geometry, Stribeck};
use crate::roots::scan_roots;

/// Zero-stiffness detection threshold on |A1| and |A3|.
pub const TOL_QZS: f64 = 1e-6;
/// Default half-width of the equilibrium scan.
pub const DEFAULT_X_MAX: f64 = 3.0;

const SCAN_INTERVALS: usize = 4096;
const BISECTION_WIDTH: f64 = 1e-14;
const DEDUP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    Center,
    Saddle,
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Center => "center",
            Stability::Saddle => "saddle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub x: f64,
    pub stability: Stability,
    /// `dF_s/dX` at the equilibrium.
    pub local_stiffness: f64,
    /// Stiffness vanishes to within [`TOL_QZS`]; stability was read from a
    /// higher-order term.
    pub degenerate: bool,
}

/// Equilibria ordered by position.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSet {
    pub points: Vec<Equilibrium>,
}

impl EquilibriumSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.points.iter().map(|e| e.x).collect()
    }

    pub fn centers(&self) -> impl Iterator<Item = &Equilibrium> {
        self.points
            .iter()
            .filter(|e| e.stability == Stability::Center)
    }
}

fn classify(x: f64, stiffness: f64) -> Equilibrium {
    Equilibrium {
        x,
        stability: if stiffness > 0.0 {
            Stability::Center
        } else {
            Stability::Saddle
        },
        local_stiffness: stiffness,
        degenerate: false,
    }
}

fn classify_origin(geo: &Geometry) -> Equilibrium {
    let tc = geo.taylor();
    let k = geo.stiffness(0.0);
    if tc.a1.abs() >= TOL_QZS {
        return classify(0.0, k);
    }
    let leading = if tc.a3.abs() >= TOL_QZS { tc.a3 } else { tc.a5 };
    Equilibrium {
        degenerate: true,
        ..classify(0.0, leading)
    }
}

/// All equilibria of the free spring system on `[-x_max, x_max]`.
///
/// The origin is always an equilibrium. Positive roots come from sign changes
/// on a uniform grid (the half-range carries `SCAN_INTERVALS / 2` cells) and
/// are mirrored, so the set is exactly symmetric.
pub fn find_equilibria(alpha: f64, beta: f64, x_max: f64) -> Result<EquilibriumSet> {
    let geo = Geometry::new(alpha, beta)?;
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "x_max",
            reason: format!("must be > 0, got {x_max}"),
        });
    }
    let half = SCAN_INTERVALS / 2;
    let h = x_max / half as f64;
    let mut positive = scan_roots(
        |x| geo.restoring_force(x),
        h,
        x_max,
        half - 1,
        BISECTION_WIDTH,
    );
    positive.dedup_by(|a, b| (*a - *b).abs() < DEDUP);

    let mut points = Vec::with_capacity(2 * positive.len() + 1);
    for &x in positive.iter().rev() {
        points.push(classify(-x, geo.stiffness(-x)));
    }
    points.push(classify_origin(&geo));
    for &x in &positive {
        points.push(classify(x, geo.stiffness(x)));
    }

    let count = points.len();
    if !matches!(count, 1 | 3 | 5) {
        return Err(Error::UnexpectedEquilibriumCount {
            count,
            roots: points.iter().map(|e| e.x).collect(),
        });
    }
    Ok(EquilibriumSet { points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WellLabel {
    SW,
    QZS3,
    QZS5,
    DW,
    TW,
}

impl fmt::Display for WellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WellLabel::SW => "SW",
            WellLabel::QZS3 => "QZS3",
            WellLabel::QZS5 => "QZS5",
            WellLabel::DW => "DW",
            WellLabel::TW => "TW",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WellTopology {
    pub label: WellLabel,
    pub equilibrium_count: usize,
}

pub fn classify_wells(alpha: f64, beta: f64) -> Result<WellTopology> {
    let set = find_equilibria(alpha, beta, DEFAULT_X_MAX)?;
    let count = set.len();
    let label = match count {
        1 => {
            let tc = Geometry::new(alpha, beta)?.taylor();
            if tc.a1.abs() < TOL_QZS && tc.a3.abs() < TOL_QZS {
                WellLabel::QZS5
            } else if tc.a1.abs() < TOL_QZS {
                WellLabel::QZS3
            } else {
                WellLabel::SW
            }
        }
        3 => WellLabel::DW,
        _ => WellLabel::TW,
    };
    Ok(WellTopology {
        label,
        equilibrium_count: count,
    })
}

/// Rest positions of the mass when the belt drags it with friction `F_d(-V0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedEquilibria {
    /// Slip-branch friction at the resting relative velocity `-V0`.
    pub belt_friction: f64,
    pub points: Vec<Equilibrium>,
}

impl ShiftedEquilibria {
    /// Relative friction `F_dr(V_r) = F_d(V_r) + F_d(-V0)`, both on the slip branch.
    pub fn relative_friction(&self, friction: &Stribeck, v_r: f64) -> f64 {
        friction.slip(v_r, 0.0) + self.belt_friction
    }
}

/// Solves `F_s(X) = -F_d(-V0)` for the dragged rest positions.
///
/// The friction is evaluated on the slip branch; at `V0 = 0` the sign is the
/// left limit `sgn(0^-) = -1`.
pub fn shifted_equilibrium(
    alpha: f64,
    beta: f64,
    v0: f64,
    friction: &Stribeck,
) -> Result<ShiftedEquilibria> {
    let geo = Geometry::new(alpha, beta)?;
    let v_r = -v0;
    let direction = if v0 >= 0.0 { -1.0 } else { 1.0 };
    let belt_friction = friction.slip(v_r, direction);
    let target = -belt_friction;
    let x_max = DEFAULT_X_MAX;
    let mut roots = scan_roots(
        |x| geo.restoring_force(x) - target,
        -x_max,
        x_max,
        SCAN_INTERVALS,
        BISECTION_WIDTH,
    );
    roots.dedup_by(|a, b| (*a - *b).abs() < DEDUP);
    if roots.is_empty() {
        return Err(Error::NoEquilibrium { x_max });
    }
    Ok(ShiftedEquilibria {
        belt_friction,
        points: roots
            .into_iter()
            .map(|x| classify(x, geo.stiffness(x)))
            .collect(),
    })
}
