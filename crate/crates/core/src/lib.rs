//! Discrete-time quantum walks for the Dirac equation in `1+1` and `2+1`
//! dimensions, their momentum-space geometry, and the nonlinear Lorentz
//! symmetry that preserves the walk's eigen-equation.

pub mod bench;
pub mod cli;
pub mod error;
pub mod fixed_mu;
pub mod geometry;
pub mod io;
pub mod lattice;
pub mod spectral;
pub mod verify;
pub mod symmetry;

pub use error::{Error, Result};
pub use geometry::{n_inverse, n_map, nbar, nbar_jacobian, region_of, Cone, ConePoint, NVector, RadialMap, Region};
pub use lattice::{
    build_fixed_mass_walk, build_variable_mass_walk, evolve, step, Band, Coin, Packet, Representation,
    SpinorField, WalkMode, WalkOperator,
};
pub use spectral::{dispersion, eigensystem, walk_matrix, CliffordBasis, CoinMatrix, KPoint, Spinor};
