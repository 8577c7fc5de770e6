//! Bifurcation sets of the static spring system in the `(alpha, beta)` plane.
//!
//! Pitchfork sets (B_B supercritical, B_H subcritical) are where the origin
//! loses or regains stiffness: `A1(alpha, beta) = 0`. The saddle-node set B_D
//! is where a pair of off-origin equilibria merges: `F_s(X_c) = 0` and
//! `F_s'(X_c) = 0` with `X_c != 0`. All three meet at the codimension-two
//! point O.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::Geometry;

/// Coordinates of the higher-codimension point O, `(4 sqrt(5) / 25, 8 sqrt(5) / 25)`.
pub fn point_o() -> (f64, f64) {
    let s5 = 5f64.sqrt();
    (4.0 * s5 / 25.0, 8.0 * s5 / 25.0)
}

/// Names of every bifurcation set handled by the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetName {
    BB,
    BH,
    BD,
    BB1,
    BH1,
    BD1,
    BB2,
    BH2,
    BD2,
    /// Hopf.
    Bh,
    /// Saddle connection.
    Bsc,
    /// Periodic-orbit fold.
    Bpo,
}

impl fmt::Display for SetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetName::BB => "B_B",
            SetName::BH => "B_H",
            SetName::BD => "B_D",
            SetName::BB1 => "B_B1",
            SetName::BH1 => "B_H1",
            SetName::BD1 => "B_D1",
            SetName::BB2 => "B_B2",
            SetName::BH2 => "B_H2",
            SetName::BD2 => "B_D2",
            SetName::Bh => "B_h",
            SetName::Bsc => "B_sc",
            SetName::Bpo => "B_po",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub alpha: f64,
    pub beta: f64,
    /// Displacement at which the equilibria merge (0 for pitchforks).
    pub x_critical: f64,
}

impl CurvePoint {
    /// `|F_s(X_c)| + |F_s'(X_c)|`.
    pub fn residual(&self) -> f64 {
        let geo = Geometry {
            alpha: self.alpha,
            beta: self.beta,
        };
        geo.restoring_force(self.x_critical).abs() + geo.stiffness(self.x_critical).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationCurve {
    pub name: SetName,
    pub points: Vec<CurvePoint>,
    /// Continuation parameters at which the solver failed; no point was emitted.
    pub skipped: Vec<f64>,
}

impl BifurcationCurve {
    /// Smallest Euclidean distance from `(alpha, beta)` to the polyline.
    pub fn distance_to(&self, alpha: f64, beta: f64) -> f64 {
        let seg = |p: &CurvePoint, q: &CurvePoint| {
            let (dx, dy) = (q.alpha - p.alpha, q.beta - p.beta);
            let len2 = dx * dx + dy * dy;
            let t = if len2 == 0.0 {
                0.0
            } else {
                (((alpha - p.alpha) * dx + (beta - p.beta) * dy) / len2).clamp(0.0, 1.0)
            };
            (p.alpha + t * dx - alpha).hypot(p.beta + t * dy - beta)
        };
        match self.points.len() {
            0 => f64::INFINITY,
            1 => (self.points[0].alpha - alpha).hypot(self.points[0].beta - beta),
            _ => self
                .points
                .windows(2)
                .map(|w| seg(&w[0], &w[1]))
                .fold(f64::INFINITY, f64::min),
        }
    }
}

const RESIDUAL_TOL: f64 = 1e-8;
const BETA_MIN: f64 = 1e-3;

/// Newton on `A1 = 0` in `s = alpha^2` at fixed `beta`.
fn pitchfork_alpha(beta: f64, seed: f64) -> Option<f64> {
    let mut s = seed * seed;
    let b2 = beta * beta;
    for _ in 0..60 {
        let r2 = s + b2;
        let r = r2.sqrt();
        let a1 = 2.0 - 2.0 / r + 2.0 * s / (r2 * r);
        if a1.abs() < 1e-15 {
            break;
        }
        let da1_ds = 3.0 * b2 / (r2 * r2 * r);
        let next = (s - a1 / da1_ds).max(0.0);
        let step = s - next;
        s = next;
        if step.abs() < 1e-17 {
            break;
        }
    }
    let alpha = s.max(0.0).sqrt();
    let geo = Geometry { alpha, beta };
    (geo.stiffness(0.0).abs() < RESIDUAL_TOL).then_some(alpha)
}

fn saddle_node_residual(x_c: f64, alpha: f64, beta: f64) -> [f64; 2] {
    let geo = Geometry { alpha, beta };
    [geo.restoring_force(x_c) / x_c, geo.stiffness(x_c)]
}

/// Damped Newton for the saddle-node pair `(alpha, beta)` at fixed `x_c`.
fn saddle_node(x_c: f64, seed: (f64, f64)) -> Option<(f64, f64)> {
    let (mut a, mut b) = seed;
    let norm = |r: [f64; 2]| r[0].abs() + r[1].abs();
    let mut res = saddle_node_residual(x_c, a, b);
    for _ in 0..100 {
        if norm(res) < 1e-14 {
            break;
        }
        let h = 1e-7;
        let ra = saddle_node_residual(x_c, a + h, b);
        let rb = saddle_node_residual(x_c, a, b + h);
        let j = [
            [(ra[0] - res[0]) / h, (rb[0] - res[0]) / h],
            [(ra[1] - res[1]) / h, (rb[1] - res[1]) / h],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let da = (res[0] * j[1][1] - res[1] * j[0][1]) / det;
        let db = (j[0][0] * res[1] - j[1][0] * res[0]) / det;
        let mut lambda = 1.0;
        loop {
            let (na, nb) = (a - lambda * da, b - lambda * db);
            if na >= 0.0 && nb > 0.0 {
                let nr = saddle_node_residual(x_c, na, nb);
                if norm(nr) < norm(res) || lambda < 1e-6 {
                    a = na;
                    b = nb;
                    res = nr;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-9 {
                return None;
            }
        }
    }
    let p = CurvePoint {
        alpha: a,
        beta: b,
        x_critical: x_c,
    };
    (p.residual() < RESIDUAL_TOL).then_some((a, b))
}

/// Traces B_B, B_H and B_D with `resolution` continuation steps each.
pub fn trace_geometric_bifurcation_sets(resolution: usize) -> Result<Vec<BifurcationCurve>> {
    if resolution < 16 {
        return Err(Error::InvalidParameter {
            name: "resolution",
            reason: format!("must be >= 16, got {resolution}"),
        });
    }
    let (alpha0, beta0) = point_o();

    // B_B: beta from 1 down to beta0, B_H: beta0 down to BETA_MIN.
    let pitchfork = |name: SetName, from: f64, to: f64, seed: f64| {
        let mut curve = BifurcationCurve {
            name,
            points: Vec::with_capacity(resolution + 1),
            skipped: Vec::new(),
        };
        let mut alpha = seed;
        for j in 0..=resolution {
            let beta = from + (to - from) * j as f64 / resolution as f64;
            match pitchfork_alpha(beta, alpha.max(1e-3)) {
                Some(a) => {
                    alpha = a;
                    curve.points.push(CurvePoint {
                        alpha: a,
                        beta,
                        x_critical: 0.0,
                    });
                }
                None => curve.skipped.push(beta),
            }
        }
        curve
    };
    let bb = pitchfork(SetName::BB, 1.0, beta0, 0.0);
    let bh = pitchfork(SetName::BH, beta0, BETA_MIN, alpha0);

    // B_D: continuation in the merge displacement, starting next to O.
    let mut bd = BifurcationCurve {
        name: SetName::BD,
        points: Vec::with_capacity(resolution + 1),
        skipped: Vec::new(),
    };
    let (x_first, x_last) = (2e-3, 0.995);
    let mut seed = (alpha0, beta0);
    for j in 0..=resolution {
        let x_c = x_first + (x_last - x_first) * j as f64 / resolution as f64;
        match saddle_node(x_c, seed) {
            Some((a, b)) if b >= BETA_MIN => {
                seed = (a, b);
                bd.points.push(CurvePoint {
                    alpha: a,
                    beta: b,
                    x_critical: x_c,
                });
            }
            _ => bd.skipped.push(x_c),
        }
    }
    Ok(vec![bb, bh, bd])
}

/// Regions of the `(alpha, beta)` plane cut out by the bifurcation sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometricRegion {
    /// Monostable.
    I,
    /// Bistable.
    II,
    /// Tristable.
    III,
}

/// Region classifier driven by the sign of `A1` and the traced B_D curve.
#[derive(Debug, Clone)]
pub struct RegionMap {
    /// `(beta, alpha)` along B_D, ascending in beta.
    saddle_node: Vec<(f64, f64)>,
}

impl RegionMap {
    pub fn new(curves: &[BifurcationCurve]) -> Result<Self> {
        let bd = curves
            .iter()
            .find(|c| c.name == SetName::BD)
            .ok_or(Error::Empty("B_D curve"))?;
        let mut saddle_node: Vec<_> = bd.points.iter().map(|p| (p.beta, p.alpha)).collect();
        saddle_node.sort_by(|a, b| a.0.total_cmp(&b.0));
        if saddle_node.len() < 2 {
            return Err(Error::Empty("B_D curve"));
        }
        Ok(Self { saddle_node })
    }

    /// `alpha` on B_D at the given `beta`, if `beta` is inside the traced range.
    pub fn saddle_node_alpha(&self, beta: f64) -> Option<f64> {
        let pts = &self.saddle_node;
        if beta < pts[0].0 || beta > pts[pts.len() - 1].0 {
            return None;
        }
        let i = pts.partition_point(|p| p.0 < beta).clamp(1, pts.len() - 1);
        let (b0, a0) = pts[i - 1];
        let (b1, a1) = pts[i];
        let t = if b1 == b0 {
            0.0
        } else {
            (beta - b0) / (b1 - b0)
        };
        Some(a0 + t * (a1 - a0))
    }

    pub fn classify(&self, alpha: f64, beta: f64) -> Result<GeometricRegion> {
        let a1 = Geometry::new(alpha, beta)?.taylor().a1;
        if a1 < 0.0 {
            return Ok(GeometricRegion::II);
        }
        match self.saddle_node_alpha(beta) {
            Some(alpha_d) if alpha < alpha_d => Ok(GeometricRegion::III),
            _ => Ok(GeometricRegion::I),
        }
    }
}
