use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fiv_core::dynamics::{
    detect_limit_cycles, ic_grid, integrate, self_excited, CycleSearch, Exclusion, Mode,
};
use fiv_core::model::{FrictionValue, Geometry};
use fiv_core::response::{
    amplitude_curve, electrical_outputs, sweep, SimConfig, Source, SweepSpec,
};
use fiv_core::statics::{
    classify_wells, codim2_region, find_equilibria, trace_geometric_bifurcation_sets, Codim2Plane,
    DEFAULT_X_MAX,
};

use crate::config::{parse_config, RunConfig, SourceChoice};
use crate::error::CliError;
use crate::table::{write_csv, Cell, CsvTable, Schema};

#[derive(Debug, Parser)]
#[command(
    name = "fiv",
    version,
    about = "Friction-induced vibration energy harvester"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand. Flags override the config file.
#[derive(Debug, Args)]
struct Common {
    /// `key = value` configuration file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    xi_x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    xi_q: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    xi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Belt velocity
    #[arg(long, allow_negative_numbers = true)]
    v0: Option<f64>,
    /// Excitation amplitude
    #[arg(long, allow_negative_numbers = true)]
    f0: Option<f64>,
    /// Excitation frequency
    #[arg(long, allow_negative_numbers = true)]
    omega0: Option<f64>,
    /// Integration step
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    /// Integration horizon
    #[arg(long, allow_negative_numbers = true)]
    t_end: Option<f64>,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = -3.0)]
    min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 3.0)]
    max: f64,
    #[arg(long, default_value_t = 601)]
    points: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlaneArg {
    /// `(A1, xi)`
    A1,
    /// `(beta, xi)` at the configured alpha
    Beta,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Restoring force, stiffness and its quintic approximation on an X grid
    Force {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Set-valued Stribeck friction on a relative-velocity grid
    Friction {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true, default_value_t = -1.0)]
        min: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        max: f64,
        #[arg(long, default_value_t = 401)]
        points: usize,
    },
    /// Potential energy on an X grid
    Potential {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Equilibria of the unforced spring
    Equilibria {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_X_MAX)]
        x_max: f64,
    },
    /// Print the well topology label
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Pitchfork and saddle-node sets in the (alpha, beta) plane
    Bifurcation {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
    },
    /// Limit-cycle regions of the damping-stiffness plane
    Codim2 {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = PlaneArg::A1)]
        plane: PlaneArg,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.1)]
        from: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 2.0)]
        to: f64,
        #[arg(long, default_value_t = 40)]
        steps: usize,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        xi_min: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 2.0)]
        xi_max: f64,
        #[arg(long, default_value_t = 41)]
        xi_steps: usize,
    },
    /// Time series from the configured initial state
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        init_x: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        init_v: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        init_q: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        init_i: Option<f64>,
    },
    /// Distinct limit cycles over a grid of initial states
    Cycles {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5)]
        grid_n: usize,
        #[arg(long, default_value_t = 200.0)]
        t_settle: f64,
        #[arg(long, default_value_t = 100.0)]
        t_observe: f64,
        /// Use the autonomous stick-slip preset at the configured geometry
        #[arg(long)]
        stick_slip: bool,
    },
    /// Harmonic-balance amplitude-frequency curves
    Amplitude {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        omega_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        omega_max: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_name = "verbatim|corrected")]
        hb_mode: Option<String>,
        #[arg(long, value_name = "real|imag|both")]
        source: Option<String>,
    },
    /// Steady-state electrical outputs over a parameter range
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "v0|theta|xi_x|xi_q")]
        vary: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        from: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// Comma-separated list of QZS3, QZS5, BS, TS
        #[arg(long)]
        cases: Option<String>,
    },
    /// Hamiltonian of the conservative spring on an (X, V) grid
    Portrait {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.5)]
        x_max: f64,
        #[arg(long, default_value_t = 1.5)]
        v_max: f64,
        #[arg(long, default_value_t = 61)]
        points: usize,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Force { common, .. }
            | Command::Friction { common, .. }
            | Command::Potential { common, .. }
            | Command::Equilibria { common, .. }
            | Command::Classify { common }
            | Command::Bifurcation { common, .. }
            | Command::Codim2 { common, .. }
            | Command::Simulate { common, .. }
            | Command::Cycles { common, .. }
            | Command::Amplitude { common, .. }
            | Command::Sweep { common, .. }
            | Command::Portrait { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Force { .. } => "force",
            Command::Friction { .. } => "friction",
            Command::Potential { .. } => "potential",
            Command::Equilibria { .. } => "equilibria",
            Command::Classify { .. } => "classify",
            Command::Bifurcation { .. } => "bifurcation",
            Command::Codim2 { .. } => "codim2",
            Command::Simulate { .. } => "simulate",
            Command::Cycles { .. } => "cycles",
            Command::Amplitude { .. } => "amplitude",
            Command::Sweep { .. } => "sweep",
            Command::Portrait { .. } => "portrait",
        }
    }

    /// `(config key, value)` pairs given on the command line.
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let c = self.common();
        let mut out: Vec<(&'static str, String)> = [
            ("alpha", c.alpha),
            ("beta", c.beta),
            ("gamma", c.gamma),
            ("theta", c.theta),
            ("xi_x", c.xi_x),
            ("xi_q", c.xi_q),
            ("mu", c.mu),
            ("xi", c.xi),
            ("eta", c.eta),
            ("v0", c.v0),
            ("f0", c.f0),
            ("omega0", c.omega0),
            ("dt", c.dt),
            ("t_end", c.t_end),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v.to_string())))
        .collect();
        if let Some(out_dir) = &c.out {
            out.push(("out", out_dir.display().to_string()));
        }
        let num = |k: &'static str, v: &Option<f64>| v.map(|v| (k, v.to_string()));
        let count = |k: &'static str, v: &Option<usize>| v.map(|v| (k, v.to_string()));
        let text = |k: &'static str, v: &Option<String>| v.clone().map(|v| (k, v));
        match self {
            Command::Simulate {
                init_x,
                init_v,
                init_q,
                init_i,
                ..
            } => out.extend(
                [
                    num("init_x", init_x),
                    num("init_v", init_v),
                    num("init_q", init_q),
                    num("init_i", init_i),
                ]
                .into_iter()
                .flatten(),
            ),
            Command::Amplitude {
                omega_min,
                omega_max,
                grid,
                hb_mode,
                source,
                ..
            } => out.extend(
                [
                    num("omega_min", omega_min),
                    num("omega_max", omega_max),
                    count("grid", grid),
                    text("hb_mode", hb_mode),
                    text("source", source),
                ]
                .into_iter()
                .flatten(),
            ),
            Command::Sweep {
                vary,
                from,
                to,
                steps,
                cases,
                ..
            } => out.extend(
                [
                    text("vary", vary),
                    num("from", from),
                    num("to", to),
                    count("steps", steps),
                    text("cases", cases),
                ]
                .into_iter()
                .flatten(),
            ),
            _ => {}
        }
        out
    }
}

fn load_config(cmd: &Command) -> Result<RunConfig, CliError> {
    let mut cfg = match &cmd.common().config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    for (key, value) in cmd.overrides() {
        cfg.set(key, &value).map_err(|reason| CliError::Invalid {
            key: format!("--{}", key.replace('_', "-")),
            reason,
        })?;
    }
    cfg.check().map_err(|(key, reason)| CliError::Invalid {
        key: key.to_string(),
        reason,
    })?;
    Ok(cfg)
}

/// `n` equally spaced values spanning `[lo, hi]` with both ends exact.
fn linspace(key: &str, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, CliError> {
    if n < 2 || !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(CliError::Invalid {
            key: key.to_string(),
            reason: format!("need at least 2 points on a range lo < hi, got {n} on [{lo}, {hi}]"),
        });
    }
    Ok((0..n)
        .map(|k| {
            if k == n - 1 {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        })
        .collect())
}

/// Writes the subcommand's table, or prints the label for `classify`.
fn execute(
    cmd: &Command,
    cfg: &RunConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let p = &cfg.params;
    let geo = Geometry::new(p.alpha, p.beta)?;
    let table = match cmd {
        Command::Classify { .. } => {
            let topo = classify_wells(p.alpha, p.beta)?;
            let _ = writeln!(stdout, "{}", topo.label);
            return Ok(());
        }
        Command::Force { grid, .. } => {
            let tc = geo.taylor();
            let mut t = CsvTable::new(Schema::Force);
            for x in linspace("points", grid.min, grid.max, grid.points)? {
                t.push(vec![
                    x.into(),
                    geo.restoring_force(x).into(),
                    geo.stiffness(x).into(),
                    tc.force(x).into(),
                ])?;
            }
            t
        }
        Command::Friction {
            min, max, points, ..
        } => {
            let law = p.friction();
            let mut t = CsvTable::new(Schema::Friction);
            for v in linspace("points", *min, *max, *points)? {
                let (lo, hi) = match law.evaluate(v) {
                    FrictionValue::Determinate(f) => (f, f),
                    FrictionValue::SetValued { lo, hi } => (lo, hi),
                };
                t.push(vec![v.into(), lo.into(), hi.into()])?;
            }
            t
        }
        Command::Potential { grid, .. } => {
            let mut t = CsvTable::new(Schema::Potential);
            for x in linspace("points", grid.min, grid.max, grid.points)? {
                t.push(vec![x.into(), geo.potential_energy(x).into()])?;
            }
            t
        }
        Command::Equilibria { x_max, .. } => {
            let mut t = CsvTable::new(Schema::Equilibria);
            for e in find_equilibria(p.alpha, p.beta, *x_max)?.points {
                t.push(vec![
                    e.x.into(),
                    e.stability.to_string().into(),
                    e.local_stiffness.into(),
                ])?;
            }
            t
        }
        Command::Bifurcation { resolution, .. } => {
            let mut t = CsvTable::new(Schema::Bifurcation);
            for curve in trace_geometric_bifurcation_sets(*resolution)? {
                for s in &curve.skipped {
                    let _ = writeln!(stderr, "warning: {} skipped at parameter {s}", curve.name);
                }
                for pt in &curve.points {
                    t.push(vec![
                        curve.name.to_string().into(),
                        pt.alpha.into(),
                        pt.beta.into(),
                    ])?;
                }
            }
            t
        }
        Command::Codim2 {
            plane,
            from,
            to,
            steps,
            xi_min,
            xi_max,
            xi_steps,
            ..
        } => {
            let coords = linspace("steps", *from, *to, *steps)?;
            let xis = linspace("xi-steps", *xi_min, *xi_max, *xi_steps)?;
            let mut t = CsvTable::new(Schema::Codim2);
            for &c in &coords {
                let plane = match plane {
                    PlaneArg::A1 => Codim2Plane::Stiffness(c),
                    PlaneArg::Beta => Codim2Plane::Beta {
                        beta: c,
                        alpha: p.alpha,
                    },
                };
                for &xi in &xis {
                    let region = codim2_region(plane, xi)?;
                    t.push(vec![c.into(), xi.into(), region.to_string().into()])?;
                }
            }
            t
        }
        Command::Simulate { .. } => {
            let s = &cfg.simulation;
            let traj = integrate(p, s.initial, s.t_end, s.dt)?;
            let elec = electrical_outputs(&traj, p.xi_q);
            let mut t = CsvTable::new(Schema::Timeseries);
            for (k, st) in traj.samples.iter().enumerate() {
                let mode = match st.mode {
                    Mode::Slip => 0usize,
                    Mode::Stick => 1,
                };
                t.push(vec![
                    st.t.into(),
                    st.x.into(),
                    st.v.into(),
                    st.q.into(),
                    st.i.into(),
                    mode.into(),
                    elec.u[k].into(),
                    elec.p[k].into(),
                ])?;
            }
            t
        }
        Command::Cycles {
            grid_n,
            t_settle,
            t_observe,
            stick_slip,
            ..
        } => {
            let params = if *stick_slip {
                self_excited(p.alpha, p.beta)
            } else {
                *p
            };
            let search = CycleSearch {
                dt: cfg.simulation.dt,
                t_settle: *t_settle,
                t_observe: *t_observe,
            };
            let grid = ic_grid(*grid_n);
            let report = detect_limit_cycles(&params, &grid, &search)?;
            for ex in &report.excluded {
                let why = match &ex.reason {
                    Exclusion::Equilibrium { x } => format!("came to rest at X = {x}"),
                    Exclusion::NoRecurrence => "no periodic return".to_string(),
                    Exclusion::Diverged(e) => e.to_string(),
                };
                let _ = writeln!(
                    stderr,
                    "excluded initial state {} (X = {}, V = {}): {why}",
                    ex.index, ex.initial.x, ex.initial.v
                );
            }
            let mut t = CsvTable::new(Schema::Cycles);
            for (k, c) in report.cycles.iter().enumerate() {
                t.push(vec![
                    k.into(),
                    c.period.into(),
                    c.amplitude.into(),
                    c.mean_x.into(),
                    c.x_min.into(),
                    c.x_max.into(),
                    c.members.len().into(),
                ])?;
            }
            t
        }
        Command::Amplitude { .. } => {
            let a = &cfg.amplitude;
            let sources: &[Source] = match a.source {
                SourceChoice::Real => &[Source::RealPart],
                SourceChoice::Imag => &[Source::ImagPart],
                SourceChoice::Both => &[Source::RealPart, Source::ImagPart],
            };
            let tc = geo.taylor();
            let mut t = CsvTable::new(Schema::Amplitude);
            for &src in sources {
                let curve =
                    amplitude_curve(p, &tc, (a.omega_min, a.omega_max), a.grid, src, a.mode)?;
                for pt in &curve.points {
                    t.push(vec![
                        pt.omega.into(),
                        pt.branch.into(),
                        pt.a_x.into(),
                        src.to_string().into(),
                    ])?;
                }
            }
            t
        }
        Command::Sweep { .. } => {
            let w = &cfg.sweep;
            let spec = SweepSpec {
                variable: w.variable,
                from: w.from,
                to: w.to,
                steps: w.steps,
                cases: w.cases.clone(),
                sim: SimConfig {
                    dt: cfg.simulation.dt,
                    t_end: cfg.simulation.t_end,
                    ..SimConfig::default()
                },
            };
            let mut t = CsvTable::new(Schema::Sweep);
            for result in sweep(p, &spec)? {
                for row in &result.rows {
                    let metrics = match &row.stats {
                        Ok(s) => [s.q_rms, s.i_rms, s.u_rms, s.p_avg],
                        Err(e) => {
                            let _ = writeln!(
                                stderr,
                                "warning: {} {} = {}: {e}",
                                result.case, result.variable, row.value
                            );
                            [f64::NAN; 4]
                        }
                    };
                    let mut cells: Vec<Cell> = vec![
                        result.case.to_string().into(),
                        result.variable.name().into(),
                        row.value.into(),
                    ];
                    cells.extend(metrics.map(Cell::from));
                    t.push(cells)?;
                }
            }
            t
        }
        Command::Portrait {
            x_max,
            v_max,
            points,
            ..
        } => {
            let xs = linspace("points", -x_max, *x_max, *points)?;
            let vs = linspace("points", -v_max, *v_max, *points)?;
            let mut t = CsvTable::new(Schema::Portrait);
            for &x in &xs {
                for &v in &vs {
                    t.push(vec![x.into(), v.into(), geo.hamiltonian(x, v).into()])?;
                }
            }
            t
        }
    };
    let path = cfg.out.join(format!("{}.csv", cmd.name()));
    write_csv(&table, &path)?;
    let _ = writeln!(stdout, "wrote {}", path.display());
    Ok(())
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit status: 0 on success, 1 on a computation or I/O failure, 2 on bad usage.
pub fn run_command<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return e.exit_code();
        }
    };
    let result =
        load_config(&cli.command).and_then(|cfg| execute(&cli.command, &cfg, stdout, stderr));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
