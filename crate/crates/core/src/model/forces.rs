//! Closed-form forces and energies of the V-spring / belt model.
//!
//! Every function here is total over finite inputs. The only singular points
//! of the raw expressions sit at `beta = 0, X = ±alpha`; they are resolved to
//! the values documented on [`Geometry::restoring_force`] and
//! [`Geometry::damping_force`].

use super::params::{sign, DimensionalParams, Stribeck};
use crate::error::{Error, Result};

/// Spring geometry `(alpha, beta)` with at least one of the two nonzero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub alpha: f64,
    pub beta: f64,
}

/// `u / sqrt(u^2 + beta^2)`, taking 0/0 as 0.
fn unit_ratio(u: f64, beta: f64) -> f64 {
    let r = u.hypot(beta);
    if r == 0.0 {
        0.0
    } else {
        u / r
    }
}

impl Geometry {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("must be >= 0, got {alpha}"),
            });
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: format!("must be >= 0, got {beta}"),
            });
        }
        if alpha == 0.0 && beta == 0.0 {
            return Err(Error::DegenerateGeometry);
        }
        Ok(Self { alpha, beta })
    }

    /// Horizontal spring force `F_s(X)`.
    ///
    /// Each spring contributes `u (1 - 1/sqrt(u^2 + beta^2))` with `u = X ± alpha`.
    /// For `beta = 0` the contribution jumps by 2 at `u = 0`; the value there is 0.
    pub fn restoring_force(&self, x: f64) -> f64 {
        let up = x + self.alpha;
        let um = x - self.alpha;
        (up - unit_ratio(up, self.beta)) + (um - unit_ratio(um, self.beta))
    }

    /// Local stiffness `dF_s/dX`.
    pub fn stiffness(&self, x: f64) -> f64 {
        let b2 = self.beta * self.beta;
        let term = |u: f64| {
            let r2 = u * u + b2;
            if r2 == 0.0 {
                1.0
            } else {
                1.0 - b2 / (r2 * r2.sqrt())
            }
        };
        term(x + self.alpha) + term(x - self.alpha)
    }

    /// Elastic potential energy, zero when both springs sit at free length.
    pub fn potential_energy(&self, x: f64) -> f64 {
        let sp = (x + self.alpha).hypot(self.beta) - 1.0;
        let sm = (x - self.alpha).hypot(self.beta) - 1.0;
        0.5 * sp * sp + 0.5 * sm * sm
    }

    /// Geometric factor of the damper force, in `[0, 2]`.
    ///
    /// At `beta = 0, X = ±alpha` the 0/0 quotient is taken as its limit, 1.
    pub fn damping_factor(&self, x: f64) -> f64 {
        let b2 = self.beta * self.beta;
        let q = |u: f64| {
            let u2 = u * u;
            if u2 + b2 == 0.0 {
                1.0
            } else {
                u2 / (u2 + b2)
            }
        };
        q(x + self.alpha) + q(x - self.alpha)
    }

    /// Nonlinear viscous damper force `F_m`.
    pub fn damping_force(&self, x: f64, v: f64, xi_x: f64) -> f64 {
        xi_x * self.damping_factor(x) * v
    }

    /// Undamped energy `H = V^2 / 2 + PEN(X)`.
    pub fn hamiltonian(&self, x: f64, v: f64) -> f64 {
        0.5 * v * v + self.potential_energy(x)
    }

    /// Linear, cubic and quintic Taylor coefficients of `F_s` at the origin.
    pub fn taylor(&self) -> TaylorCoeffs {
        let a2 = self.alpha * self.alpha;
        let r2 = a2 + self.beta * self.beta;
        let r = r2.sqrt();
        // odd powers r^{-(2n+1)}
        let p1 = 1.0 / r;
        let p3 = p1 / r2;
        let p5 = p3 / r2;
        let p7 = p5 / r2;
        let p9 = p7 / r2;
        let p11 = p9 / r2;
        TaylorCoeffs {
            a1: 2.0 - 2.0 * p1 + 2.0 * a2 * p3,
            a3: p3 - 6.0 * a2 * p5 + 5.0 * a2 * a2 * p7,
            a5: -0.75 * p5 + 11.25 * a2 * p7 - 26.25 * a2 * a2 * p9 + 15.75 * a2 * a2 * a2 * p11,
        }
    }
}

/// Taylor coefficients of the restoring force, `F_s ≈ A1 X + A3 X^3 + A5 X^5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorCoeffs {
    pub a1: f64,
    pub a3: f64,
    pub a5: f64,
}

impl TaylorCoeffs {
    /// Quintic approximation of the restoring force.
    pub fn force(&self, x: f64) -> f64 {
        let x2 = x * x;
        x * (self.a1 + x2 * (self.a3 + x2 * self.a5))
    }
}

pub fn taylor_coefficients(alpha: f64, beta: f64) -> Result<TaylorCoeffs> {
    Ok(Geometry::new(alpha, beta)?.taylor())
}

/// Friction force at a given relative velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrictionValue {
    Determinate(f64),
    /// Sticking contact: any force in `[lo, hi]` is admissible.
    SetValued {
        lo: f64,
        hi: f64,
    },
}

impl Stribeck {
    /// Set-valued Stribeck law.
    pub fn evaluate(&self, v_r: f64) -> FrictionValue {
        if v_r == 0.0 {
            FrictionValue::SetValued {
                lo: -self.mu,
                hi: self.mu,
            }
        } else {
            FrictionValue::Determinate(self.slip(v_r, sign(v_r)))
        }
    }

    /// Slip-branch force with an explicit sliding direction, used when `v_r`
    /// is exactly zero but the contact is known to be slipping.
    pub fn slip(&self, v_r: f64, direction: f64) -> f64 {
        let s = if v_r == 0.0 { direction } else { sign(v_r) };
        self.mu * s - self.xi * v_r + self.eta * v_r * v_r * v_r
    }
}

pub fn stribeck_friction(v_r: f64, mu: f64, xi: f64, eta: f64) -> FrictionValue {
    Stribeck { mu, xi, eta }.evaluate(v_r)
}

/// Dimensional spring force `f_s(x)` (N) for a physical parameter set.
pub fn dimensional_restoring_force(p: &DimensionalParams, x: f64) -> f64 {
    let term = |u: f64| {
        let r = u.hypot(p.b);
        if r == 0.0 {
            0.0
        } else {
            p.k * u * (1.0 - p.l0 / r)
        }
    };
    term(x + p.a) + term(x - p.a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(alpha: f64, beta: f64) -> Geometry {
        Geometry::new(alpha, beta).unwrap()
    }

    #[test]
    fn restoring_force_values() {
        assert_eq!(g(0.3, 0.7).restoring_force(0.0), 0.0);
        let f = g(0.0, 1.0).restoring_force(1.0);
        assert!((f - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        // TW geometry: origin is stable, small positive displacement pushes back
        let f = g(0.5, 0.25).restoring_force(0.1);
        assert!(f > 0.0 && f < 0.2);
        assert!(g(0.5, 0.25).taylor().a1 > 0.0);
    }

    #[test]
    fn beta_zero_is_total() {
        let geo = g(1.0, 0.0);
        for x in [-1.0, 1.0, 0.0, 2.0] {
            assert!(geo.restoring_force(x).is_finite());
            assert!(geo.damping_factor(x).is_finite());
            assert!(geo.stiffness(x).is_finite());
        }
        assert_eq!(geo.damping_factor(1.0), 2.0);
        assert_eq!(geo.potential_energy(0.0), 0.0);
    }

    #[test]
    fn potential_zeros() {
        assert_eq!(g(0.0, 1.0).potential_energy(0.0), 0.0);
        assert_eq!(g(1.0, 0.0).potential_energy(0.0), 0.0);
    }

    #[test]
    fn damping_asymptote_and_zero() {
        assert_eq!(g(0.5, 1.0).damping_force(0.3, 0.0, 1.0), 0.0);
        let f = g(0.5, 1.0).damping_force(1e3, 1.0, 1.0);
        assert!((f - 2.0).abs() < 1e-5);
    }

    #[test]
    fn friction_branches() {
        assert_eq!(
            stribeck_friction(0.0, 0.2, 0.1, 1.0),
            FrictionValue::SetValued { lo: -0.2, hi: 0.2 }
        );
        match stribeck_friction(1e-300, 0.2, 0.1, 1.0) {
            FrictionValue::Determinate(f) => assert!((f - 0.2).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        let s = Stribeck {
            mu: 0.2,
            xi: 0.1,
            eta: 1.0,
        };
        assert_eq!(s.slip(0.0, -1.0), -0.2);
    }

    #[test]
    fn taylor_closed_forms() {
        let t = taylor_coefficients(0.0, 1.0).unwrap();
        assert_eq!((t.a1, t.a3, t.a5), (0.0, 1.0, -0.75));
        let s5 = 5f64.sqrt();
        let t = taylor_coefficients(4.0 * s5 / 25.0, 8.0 * s5 / 25.0).unwrap();
        assert!(t.a1.abs() < 1e-12, "{t:?}");
        assert!(t.a3.abs() < 1e-12, "{t:?}");
        // exact value 225/128 from symbolic differentiation of F_s
        assert!((t.a5 - 225.0 / 128.0).abs() < 1e-12, "{t:?}");
        assert_eq!(
            taylor_coefficients(0.0, 0.0),
            Err(Error::DegenerateGeometry)
        );
    }

    #[test]
    fn hamiltonian_reduces_to_potential() {
        let geo = g(0.25, 0.5);
        assert_eq!(g(0.0, 1.0).hamiltonian(0.0, 0.0), 0.0);
        assert_eq!(geo.hamiltonian(0.7, 0.0), geo.potential_energy(0.7));
    }

    proptest! {
        #[test]
        fn restoring_force_is_odd(x in -3.0f64..3.0, a in 0.0f64..2.0, b in 0.0f64..2.0) {
            prop_assume!(a > 0.0 || b > 0.0);
            let geo = g(a, b);
            prop_assert_eq!(geo.restoring_force(-x), -geo.restoring_force(x));
        }

        #[test]
        fn potential_even_nonnegative(x in -3.0f64..3.0, a in 0.0f64..2.0, b in 0.0f64..2.0) {
            prop_assume!(a > 0.0 || b > 0.0);
            let geo = g(a, b);
            prop_assert!(geo.potential_energy(x) >= 0.0);
            prop_assert_eq!(geo.potential_energy(-x), geo.potential_energy(x));
        }

        #[test]
        fn damping_bounded(x in -5.0f64..5.0, v in -3.0f64..3.0, a in 0.0f64..2.0, b in 0.0f64..2.0, xi_x in 0.0f64..2.0) {
            prop_assume!(a > 0.0 || b > 0.0);
            let f = g(a, b).damping_force(x, v, xi_x);
            prop_assert!(f.abs() <= 2.0 * xi_x * v.abs() * (1.0 + 1e-15));
        }

        #[test]
        fn stiffness_matches_central_difference(x in -2.5f64..2.5, a in 0.0f64..1.5, b in 0.05f64..2.0) {
            let geo = g(a, b);
            let h = 1e-6;
            let fd = (geo.restoring_force(x + h) - geo.restoring_force(x - h)) / (2.0 * h);
            prop_assert!((fd - geo.stiffness(x)).abs() < 1e-6 * (1.0 + fd.abs()));
        }

        #[test]
        fn slip_branch_is_odd(v in 1e-6f64..3.0, mu in 0.0f64..1.0, xi in -1.0f64..1.0, eta in 0.0f64..2.0) {
            let s = Stribeck { mu, xi, eta };
            prop_assert_eq!(s.slip(-v, -1.0), -s.slip(v, 1.0));
        }
    }
}
