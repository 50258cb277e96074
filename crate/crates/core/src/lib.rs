//! Numerical toolkit for harmonic curves into the first Heisenberg group.
//!
//! A harmonic curve is a map `f = (x, y, t) : Omega -> H^1` whose horizontal
//! components trace a planar curve `x = H(y)` and whose vertical component `t`
//! is recovered from the contact structure of the group.  The scalar component
//! `y` solves the quasilinear Dirichlet problem
//!
//! ```text
//!     div(grad y) = -r(y) |grad y|^2,      r = H'' H' / (1 + H'^2),
//! ```
//!
//! which an arclength reparametrisation `v = F(y)`, `F' = sqrt(1 + H'^2)`,
//! turns into the ordinary Laplace equation.  The crate provides:
//!
//! * [`hgroup`]: the group operations, Koranyi gauge and contact form of
//!   `H^m` (exact, coordinate-level).
//! * [`profile`]: curve profiles `H` with derivatives, the arclength
//!   transform and analytic hypothesis checks (sign and growth conditions).
//! * [`grid`]: structured finite-difference grids in 1-3 dimensions with
//!   masked domains (rectangles, balls, annuli, half-balls), stencils and
//!   quadrature.
//! * [`solver`]: the Newton and substitution solvers for `y`, vertical
//!   component recovery by path integration, energies and Euler-Lagrange
//!   residuals.
//! * [`verify`]: a posteriori checks (Caccioppoli, maximum principles,
//!   comparison, monotonicity, three-spheres, Harnack, Phragmen-Lindelof,
//!   superharmonicity, isotropy) aggregated into serialisable reports.
//! * [`config`]: a JSON problem description shared by the library tests and
//!   the command-line front end.

pub mod config;
pub mod error;
pub mod grid;
pub mod hgroup;
pub mod linalg;
pub mod numeric;
pub mod profile;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
