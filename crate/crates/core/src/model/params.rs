use crate::error::{Error, Result};

/// Physical parameters of the belt-driven harvester, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalParams {
    /// Lumped mass (kg).
    pub m: f64,
    /// Stiffness of each oblique spring (N/m).
    pub k: f64,
    /// Viscous damping coefficient (N·s/m).
    pub c: f64,
    /// Free length of the oblique springs (m).
    pub l0: f64,
    /// Coil length (m).
    pub le: f64,
    /// Half distance between the spring supports (m).
    pub a: f64,
    /// Height between the mass and the supports (m).
    pub b: f64,
    /// Static friction level.
    pub mu_s: f64,
    /// Minimum dynamic friction level.
    pub mu_m: f64,
    /// Relative velocity at which the dynamic friction is minimal (m/s).
    pub v_m: f64,
    /// Belt velocity (m/s).
    pub v0: f64,
    /// Coil inductance (H).
    pub inductance: f64,
    /// Capacitance (F).
    pub capacitance: f64,
    /// Resistance (Ω).
    pub resistance: f64,
    /// Magnetic flux density (T).
    pub flux_density: f64,
    /// Excitation force amplitude (N).
    pub f0: f64,
    /// Excitation frequency (rad/s).
    pub omega0: f64,
}

impl DimensionalParams {
    pub fn validate(&self) -> Result<()> {
        positive("m", self.m)?;
        positive("k", self.k)?;
        positive("l0", self.l0)?;
        positive("C", self.capacitance)?;
        positive("L", self.inductance)?;
        positive("v_m", self.v_m)?;
        for (name, value) in [
            ("c", self.c),
            ("le", self.le),
            ("a", self.a),
            ("b", self.b),
            ("mu_m", self.mu_m),
            ("v0", self.v0),
            ("R", self.resistance),
            ("B", self.flux_density),
            ("f0", self.f0),
            ("omega0", self.omega0),
        ] {
            non_negative(name, value)?;
        }
        if self.a == 0.0 && self.b == 0.0 {
            return Err(Error::DegenerateGeometry);
        }
        if self.mu_s < self.mu_m {
            return Err(Error::FrictionOrdering {
                mu_s: self.mu_s,
                mu_m: self.mu_m,
            });
        }
        Ok(())
    }

    /// Natural circular frequency √(k/m).
    pub fn natural_frequency(&self) -> f64 {
        (self.k / self.m).sqrt()
    }

    pub fn stribeck(&self) -> StribeckCoefficients {
        StribeckCoefficients::new(self.mu_s, self.mu_m, self.v_m)
    }
}

/// Coefficients of the dimensional Stribeck law
/// `f_d(v_r) = mu_s sgn(v_r) - d1 v_r + d3 v_r^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StribeckCoefficients {
    pub mu_s: f64,
    pub d1: f64,
    pub d3: f64,
}

impl StribeckCoefficients {
    pub fn new(mu_s: f64, mu_m: f64, v_m: f64) -> Self {
        let drop = mu_s - mu_m;
        Self {
            mu_s,
            d1: 3.0 * drop / (2.0 * v_m),
            d3: drop / (2.0 * v_m.powi(3)),
        }
    }

    /// Slip-branch friction force; `v_r = 0` uses `sgn(0) = 0`.
    pub fn slip_force(&self, v_r: f64) -> f64 {
        self.mu_s * sign(v_r) - self.d1 * v_r + self.d3 * v_r.powi(3)
    }

    /// Location and value of the friction minimum on `v_r > 0`.
    ///
    /// Returns `None` when the law has no interior minimum (`d1 <= 0` or `d3 <= 0`).
    pub fn minimum(&self) -> Option<(f64, f64)> {
        if self.d1 <= 0.0 || self.d3 <= 0.0 {
            return None;
        }
        let v = (self.d1 / (3.0 * self.d3)).sqrt();
        Some((v, self.slip_force(v)))
    }
}

/// Dimensionless parameter vector driving every computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// Horizontal geometric ratio a/l0.
    pub alpha: f64,
    /// Vertical geometric ratio b/l0.
    pub beta: f64,
    /// Inertia ratio of the circuit.
    pub gamma: f64,
    /// Electromechanical coupling ratio.
    pub theta: f64,
    /// Mechanical damping ratio.
    pub xi_x: f64,
    /// Electrical resistance ratio.
    pub xi_q: f64,
    /// Static friction ratio.
    pub mu: f64,
    /// Linear (velocity-weakening) Stribeck ratio.
    pub xi: f64,
    /// Cubic Stribeck ratio.
    pub eta: f64,
    /// Belt velocity.
    pub v0: f64,
    /// Excitation amplitude.
    pub f0: f64,
    /// Excitation frequency.
    pub omega0: f64,
}

impl Default for Params {
    /// Reference values with the QZS3 geometry, belt velocity 0.3 and a
    /// moderate harmonic excitation (F0 = 0.5, Omega0 = 1.5).
    fn default() -> Self {
        Self {
            alpha: 0.0,
            beta: 1.0,
            gamma: 1.0,
            theta: 0.1,
            xi_x: 0.1,
            xi_q: 0.1,
            mu: 0.1,
            xi: 0.1,
            eta: 1.0,
            v0: 0.3,
            f0: 0.5,
            omega0: 1.5,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("theta", self.theta),
            ("xi_x", self.xi_x),
            ("xi_q", self.xi_q),
            ("mu", self.mu),
            ("xi", self.xi),
            ("eta", self.eta),
            ("v0", self.v0),
            ("f0", self.f0),
            ("omega0", self.omega0),
        ];
        for (name, value) in all {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("{value} is not finite"),
                });
            }
        }
        non_negative("alpha", self.alpha)?;
        non_negative("beta", self.beta)?;
        positive("gamma", self.gamma)?;
        non_negative("eta", self.eta)?;
        non_negative("mu", self.mu)?;
        non_negative("xi_q", self.xi_q)?;
        non_negative("xi_x", self.xi_x)?;
        if self.alpha == 0.0 && self.beta == 0.0 {
            return Err(Error::DegenerateGeometry);
        }
        Ok(())
    }

    pub fn with_geometry(mut self, alpha: f64, beta: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    /// Friction ratios as a standalone law.
    pub fn friction(&self) -> Stribeck {
        Stribeck {
            mu: self.mu,
            xi: self.xi,
            eta: self.eta,
        }
    }
}

/// Dimensionless Stribeck friction ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stribeck {
    pub mu: f64,
    pub xi: f64,
    pub eta: f64,
}

/// Scales a physical parameter set to the dimensionless form used everywhere else.
pub fn nondimensionalize(p: &DimensionalParams) -> Result<Params> {
    p.validate()?;
    let omega_n = p.natural_frequency();
    let sqrt_mk = (p.m * p.k).sqrt();
    let q0 = p.l0 * (p.k * p.capacitance).sqrt();
    let StribeckCoefficients { d1, d3, .. } = p.stribeck();
    let params = Params {
        alpha: p.a / p.l0,
        beta: p.b / p.l0,
        gamma: p.inductance * q0 * q0 / (p.m * p.l0 * p.l0),
        theta: p.flux_density * p.le * (p.capacitance / p.m).sqrt(),
        xi_x: p.c / (2.0 * sqrt_mk),
        xi_q: p.capacitance * p.resistance * omega_n,
        mu: p.mu_s / (p.k * p.l0),
        xi: d1 / (2.0 * sqrt_mk),
        eta: d3 / sqrt_mk,
        v0: p.v0 / (p.l0 * omega_n),
        f0: p.f0 / (p.k * p.l0),
        omega0: p.omega0 / omega_n,
    };
    params.validate()?;
    Ok(params)
}

pub(crate) fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be > 0, got {value}"),
        })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be >= 0, got {value}"),
        })
    }
}
