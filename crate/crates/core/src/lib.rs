//! Relativistic wave mechanics from the Hamilton-Jacobi equation: closed-form
//! kinematics, the logarithmic transform of first-order PDEs, finite
//! difference solvers and numerical checks of the resulting identities.

pub mod convergence;
pub mod error;
pub mod grid;
pub mod kinematics;
pub mod limits;
pub mod mechanics;
pub mod pde;
pub mod report;
pub mod solvers;
pub mod vec3;

pub use error::{Error, Result};
pub use grid::{Grid, Region, ScalarField};
pub use kinematics::PhysicalConstants;
