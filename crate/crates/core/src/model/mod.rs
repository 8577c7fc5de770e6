//! Dimensionless parameterization and the closed-form force laws.

mod forces;
mod params;

pub use forces::{
    dimensional_restoring_force, stribeck_friction, taylor_coefficients, FrictionValue, Geometry,
    TaylorCoeffs,
};
pub(crate) use params::sign;
pub use params::{nondimensionalize, DimensionalParams, Params, Stribeck, StribeckCoefficients};
