//! Fixed-step RK4 with Karnopp-style stick–slip switching.

use crate::error::{Error, Result};
use crate::model::{sign, Geometry, Params};

/// Contact state of the mass on the belt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Slip,
    Stick,
}

/// Phase-space sample `(T, X, V, Q, I)` with its contact mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub t: f64,
    pub x: f64,
    pub v: f64,
    pub q: f64,
    pub i: f64,
    pub mode: Mode,
}

impl State {
    /// Slip-mode state at `T = 0`. The integrator decides the actual initial
    /// mode from the holding force when `v` equals the belt velocity.
    pub fn initial(x: f64, v: f64, q: f64, i: f64) -> Self {
        Self {
            t: 0.0,
            x,
            v,
            q,
            i,
            mode: Mode::Slip,
        }
    }

    fn vector(&self) -> [f64; 4] {
        [self.x, self.v, self.q, self.i]
    }

    fn is_finite(&self) -> bool {
        self.t.is_finite() && self.vector().iter().all(|c| c.is_finite())
    }
}

/// Time derivative of `(X, V, Q, I)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rate {
    pub x: f64,
    pub v: f64,
    pub q: f64,
    pub i: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transition {
    StickToSlip,
    SlipToStick,
}

/// Mode switch with the holding force evaluated at the switching instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub transition: Transition,
    pub holding_force: f64,
}

/// Zero crossing of the relative velocity `V - V0` during slip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub t: f64,
    pub x: f64,
    /// Sign of `V - V0` before the crossing.
    pub from: f64,
    /// Whether the contact stuck at the crossing.
    pub stuck: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<State>,
    pub events: Vec<Event>,
    pub params: Params,
}

/// Parameters with the geometry resolved once.
#[derive(Debug, Clone, Copy)]
pub(crate) struct System {
    pub p: Params,
    pub g: Geometry,
}

impl System {
    pub fn new(p: &Params) -> Self {
        Self {
            p: *p,
            g: Geometry {
                alpha: p.alpha,
                beta: p.beta,
            },
        }
    }

    fn forcing(&self, t: f64) -> f64 {
        if self.p.f0 == 0.0 {
            0.0
        } else {
            self.p.f0 * (self.p.omega0 * t).sin()
        }
    }

    /// Net non-friction force on the mass when it moves with the belt.
    pub fn holding_force(&self, t: f64, x: f64, i: f64) -> f64 {
        let p = &self.p;
        -p.theta * i - self.g.damping_force(x, p.v0, p.xi_x) - self.g.restoring_force(x)
            + self.forcing(t)
    }

    fn circuit(&self, v: f64, q: f64, i: f64) -> f64 {
        (-self.p.xi_q * i - self.p.theta * v - q) / self.p.gamma
    }

    /// Slip-branch rate with the friction sign held at `direction`.
    fn slip_rate(&self, t: f64, y: &[f64; 4], direction: f64) -> [f64; 4] {
        let p = &self.p;
        let [x, v, q, i] = *y;
        let v_r = v - p.v0;
        let friction = p.mu * direction - p.xi * v_r + p.eta * v_r * v_r * v_r;
        let dv = -p.theta * i
            - friction
            - self.g.damping_force(x, v, p.xi_x)
            - self.g.restoring_force(x)
            + self.forcing(t);
        [v, dv, i, self.circuit(v, q, i)]
    }

    fn stick_rate(&self, y: &[f64; 4]) -> [f64; 4] {
        let v0 = self.p.v0;
        [v0, 0.0, y[3], self.circuit(v0, y[2], y[3])]
    }

    fn rk4<F: Fn(f64, &[f64; 4]) -> [f64; 4]>(f: F, t: f64, y: &[f64; 4], h: f64) -> [f64; 4] {
        let add = |a: &[f64; 4], k: &[f64; 4], s: f64| {
            [
                a[0] + s * k[0],
                a[1] + s * k[1],
                a[2] + s * k[2],
                a[3] + s * k[3],
            ]
        };
        let k1 = f(t, y);
        let k2 = f(t + 0.5 * h, &add(y, &k1, 0.5 * h));
        let k3 = f(t + 0.5 * h, &add(y, &k2, 0.5 * h));
        let k4 = f(t + h, &add(y, &k3, h));
        let mut out = *y;
        for n in 0..4 {
            out[n] += h / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
        }
        out
    }

    fn slip_step(&self, t: f64, y: &[f64; 4], h: f64, direction: f64) -> [f64; 4] {
        Self::rk4(|tt, yy| self.slip_rate(tt, yy, direction), t, y, h)
    }

    fn stick_step(&self, t: f64, y: &[f64; 4], h: f64) -> [f64; 4] {
        let mut out = Self::rk4(|_, yy| self.stick_rate(yy), t, y, h);
        out[1] = self.p.v0;
        out
    }
}

/// Right-hand side of the coupled equations of motion.
///
/// In slip at `V = V0` exactly, the friction takes the sign of the holding force.
pub fn derivative(s: &State, p: &Params) -> Rate {
    let sys = System::new(p);
    let y = s.vector();
    let r = match s.mode {
        Mode::Stick => sys.stick_rate(&y),
        Mode::Slip => {
            let v_r = s.v - p.v0;
            let direction = if v_r != 0.0 {
                sign(v_r)
            } else {
                sign(sys.holding_force(s.t, s.x, s.i))
            };
            sys.slip_rate(s.t, &y, direction)
        }
    };
    Rate {
        x: r[0],
        v: r[1],
        q: r[2],
        i: r[3],
    }
}

/// Net non-friction force required to keep the mass moving with the belt.
/// In stick the friction force equals this value.
pub fn holding_force(s: &State, p: &Params) -> f64 {
    System::new(p).holding_force(s.t, s.x, s.i)
}

/// Stepping integrator. Each call to [`Integrator::step`] advances one `dt`,
/// subdividing internally at mode switches.
#[derive(Debug, Clone)]
pub struct Integrator {
    sys: System,
    state: State,
    direction: f64,
    dt: f64,
    t0: f64,
    steps: u64,
    events: Vec<Event>,
    crossings: Vec<Crossing>,
}

impl Integrator {
    pub fn new(p: &Params, s0: State, dt: f64) -> Result<Self> {
        p.validate()?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!("must be > 0, got {dt}"),
            });
        }
        if !s0.is_finite() {
            return Err(Error::NonFinite {
                t: s0.t,
                last_good: s0,
            });
        }
        let sys = System::new(p);
        let mut it = Self {
            sys,
            state: s0,
            direction: 1.0,
            dt,
            t0: s0.t,
            steps: 0,
            events: Vec::new(),
            crossings: Vec::new(),
        };
        let v_r = s0.v - p.v0;
        if v_r == 0.0 {
            it.resolve_contact(s0.t);
        } else {
            it.state.mode = Mode::Slip;
            it.direction = sign(v_r);
        }
        Ok(it)
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    /// Mode switches recorded since the last call to [`Integrator::take_events`].
    pub fn take_events(&mut self) -> Vec<Event> {
        std::mem::take(&mut self.events)
    }

    /// Relative-velocity zero crossings found during the most recent step.
    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Decides stick or slip for a state with `V = V0` exactly.
    /// Returns the holding force and whether the contact sticks.
    fn resolve_contact(&mut self, t: f64) -> (f64, bool) {
        let s = &self.state;
        let f = self.sys.holding_force(t, s.x, s.i);
        if f.abs() <= self.sys.p.mu {
            self.state.mode = Mode::Stick;
            (f, true)
        } else {
            self.state.mode = Mode::Slip;
            self.direction = sign(f);
            (f, false)
        }
    }

    fn set(&mut self, t: f64, y: [f64; 4]) {
        self.state.t = t;
        self.state.x = y[0];
        self.state.v = y[1];
        self.state.q = y[2];
        self.state.i = y[3];
    }

    /// Bisection for the first instant in `(0, h]` where `crossed` holds.
    fn localize<F: Fn(f64) -> bool>(&self, crossed: F, h: f64) -> f64 {
        let width = self.dt * 1e-6;
        let (mut lo, mut hi) = (0.0, h);
        while hi - lo > width {
            let mid = 0.5 * (lo + hi);
            if crossed(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    pub fn step(&mut self) -> Result<&State> {
        self.crossings.clear();
        let last_good = self.state;
        let target = self.t0 + (self.steps + 1) as f64 * self.dt;
        let v0 = self.sys.p.v0;
        let mu = self.sys.p.mu;
        let mut switches = 0usize;
        loop {
            let t = self.state.t;
            let rem = target - t;
            if rem <= self.dt * 1e-9 {
                break;
            }
            let y = self.state.vector();
            match self.state.mode {
                Mode::Stick => {
                    let next = self.sys.stick_step(t, &y, rem);
                    let breaks = |yy: &[f64; 4], tt: f64| {
                        self.sys.holding_force(tt, yy[0], yy[3]).abs() > mu
                    };
                    if !breaks(&next, t + rem) || switches > 16 {
                        self.set(target, next);
                        break;
                    }
                    let h = self.localize(|h| breaks(&self.sys.stick_step(t, &y, h), t + h), rem);
                    let yy = self.sys.stick_step(t, &y, h);
                    self.set(t + h, yy);
                    let (f, stuck) = self.resolve_contact(t + h);
                    if !stuck {
                        self.events.push(Event {
                            t: t + h,
                            transition: Transition::StickToSlip,
                            holding_force: f,
                        });
                    }
                    switches += 1;
                }
                Mode::Slip => {
                    let dir = self.direction;
                    let next = self.sys.slip_step(t, &y, rem, dir);
                    let crossed = |yy: &[f64; 4]| (yy[1] - v0) * dir < 0.0;
                    if !crossed(&next) || switches > 16 {
                        self.set(target, next);
                        break;
                    }
                    let h = self.localize(|h| crossed(&self.sys.slip_step(t, &y, h, dir)), rem);
                    let mut yy = self.sys.slip_step(t, &y, h, dir);
                    yy[1] = v0;
                    self.set(t + h, yy);
                    let (f, stuck) = self.resolve_contact(t + h);
                    self.crossings.push(Crossing {
                        t: t + h,
                        x: yy[0],
                        from: dir,
                        stuck,
                    });
                    if stuck {
                        self.events.push(Event {
                            t: t + h,
                            transition: Transition::SlipToStick,
                            holding_force: f,
                        });
                    }
                    switches += 1;
                }
            }
        }
        self.steps += 1;
        self.state.t = target;
        if !self.state.is_finite() {
            return Err(Error::NonFinite {
                t: target,
                last_good,
            });
        }
        Ok(&self.state)
    }
}

/// Integrates from `s0` to `t_end` with fixed step `dt`, recording every sample.
pub fn integrate(p: &Params, s0: State, t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(t_end.is_finite() && t_end > s0.t) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: format!("must exceed the initial time {}, got {t_end}", s0.t),
        });
    }
    let mut it = Integrator::new(p, s0, dt)?;
    let n = ((t_end - s0.t) / dt).round() as usize;
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(*it.state());
    for _ in 0..n {
        samples.push(*it.step()?);
    }
    Ok(Trajectory {
        samples,
        events: it.take_events(),
        params: *p,
    })
}
