//! Equilibria, well topology and bifurcation sets of the restoring force.

mod bifurcation;
mod equilibria;
mod regions;

pub use bifurcation::{
    point_o, trace_geometric_bifurcation_sets, BifurcationCurve, CurvePoint, GeometricRegion,
    RegionMap, SetName,
};
pub use equilibria::{
    classify_wells, find_equilibria, shifted_equilibrium, Equilibrium, EquilibriumSet,
    ShiftedEquilibria, Stability, WellLabel, WellTopology, DEFAULT_X_MAX, TOL_QZS,
};
pub use regions::{
    codim2_region, polynomial_region, Codim2Plane, Codim2Region, PolyRegion, CODIM2_LINES,
};
