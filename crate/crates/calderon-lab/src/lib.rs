//! A numerical laboratory for complex interpolation of finite-dimensional
//! Köthe sequence spaces.
//!
//! The crate computes, at finite dimension, the objects that drive the
//! stability theory of interpolation scales: Calderón-product norms and
//! their optimal factorizations, the induced derivations (centralizers),
//! twisted-sum quasi-norms, interpolation families on arcs of the circle,
//! indicator functionals, and scale sweeps that check the differential and
//! convexity estimates governing all of the above.
//!
//! Everything is plain `f64`/`Complex64` arithmetic on vectors; no global
//! state. See the `examples/` directory for one runnable tour per
//! capability, and the `verify` module (or the `calderon-lab verify`
//! subcommand) for the full invariant suite.

pub mod calderon;
pub mod complex_plane;
pub mod derivations;
pub mod error;
pub mod families;
pub mod indicators;
pub mod lab_cli;
pub mod scale_harness;
pub mod spaces;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
