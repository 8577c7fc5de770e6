//! Friction-induced vibration energy harvester: a mass on a moving belt held
//! by two oblique springs and coupled to an electromagnetic circuit.

pub mod dynamics;
mod error;
pub mod model;
pub mod response;
pub(crate) mod roots;
pub mod statics;

pub use error::{Error, Result};
