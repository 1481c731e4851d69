//! Globally optimal rate and fidelity allocation for entanglement
//! distribution networks.
//!
//! A network hands each route a generation rate `x_i` and, through the link
//! Werner parameters, an end-to-end entanglement quality `u_i`; the utility
//! of a route is `x_i f_i(u_i)` for an application-specific entanglement
//! measure `f_i`, and the network utility is the product over routes. This
//! crate formulates the allocation problem in log-rate space, certifies when
//! that formulation is convex, and solves it with a self-contained
//! log-barrier Newton method:
//!
//! - [`network`] — links, routes, incidence structure, rate constants;
//! - [`measures`] — the four builtin entanglement measures and their
//!   derivative/threshold machinery;
//! - [`convexity`] — certificates, curvature-condition checks, eigenvalue
//!   probes;
//! - [`reformulation`] — objective, analytic gradient and Hessian,
//!   feasibility;
//! - [`solver`] — interior-point solve, KKT residuals, multistart;
//! - [`oracle`] — brute-force grid search for small instances;
//! - [`scenario`] — JSON scenario files.

pub mod convexity;
pub mod error;
pub mod measures;
pub mod network;
pub mod oracle;
pub mod reformulation;
pub mod scenario;
pub mod solver;

pub use error::{Error, Result};

// Callers of the matrix-valued APIs need the same nalgebra version.
pub use nalgebra;
