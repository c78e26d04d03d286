//! Exact computations for Gromov–Witten generating series of anticanonical
//! pencils on del Pezzo surfaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`ring`]: exact rationals and cyclotomic fields;
//! * [`series`]: truncated Puiseux series and first-order linear ODEs;
//! * [`lattice`]: the homology of the rational elliptic surface and its E8 sublattice;
//! * [`modular`]: eta products, Eisenstein series, lattice and Jacobi theta series;
//! * [`gw`]: section-counting series, the bulk-term equation and its solvers;
//! * [`connection`]: the 2×2 connection, its fundamental solution and the mirror map;
//! * [`fukaya`]: theta-function checks of the cubic-pencil Floer products;
//! * [`verify`]: the numbered acceptance checks, shared by the tests and the CLI.

pub mod connection;
pub mod error;
pub mod fukaya;
pub mod gw;
pub mod lattice;
pub mod modular;
pub mod ring;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
