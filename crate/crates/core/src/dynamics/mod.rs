//! Time integration of the coupled harvester, limit cycles and steady-state statistics.

mod cycles;
mod integrator;
mod steady;

pub use cycles::{
    detect_limit_cycles, ic_grid, self_excited, CycleReport, CycleSearch, Excluded, Exclusion,
    LimitCycle, CLOSURE_TOL, CLUSTER_TOL,
};
pub use integrator::{
    derivative, holding_force, integrate, Crossing, Event, Integrator, Mode, Rate, State,
    Trajectory, Transition,
};
pub use steady::{steady_state, AnalysisWindow, SteadyStats, UNFORCED_WINDOW};
