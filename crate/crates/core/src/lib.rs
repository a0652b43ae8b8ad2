//! Three-term trace asymptotics `tr h(A_{P_L}) = L^2 c2 + L c1 + c0` for
//! truncated Wiener-Hopf operators on scaled polygons, together with the
//! brute-force integral oracles used to check every coefficient.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure
//! numerics over immutable inputs; file formats, the CLI and thread pools
//! live in the `polytrace` companion crate.
//!
//! Module map:
//!
//! * [`geometry`]: polygons, corners, edge frames, triangulation and the
//!   exact set covariogram.
//! * [`symbols`]: radial symbols, their Hankel-transformed kernels, 1-D
//!   slices and kernel moments.
//! * [`coeffs_radial`]: closed-form coefficients for radial symbols and
//!   quadratic test functions.
//! * [`coeffs_general`]: the 1-D Wiener-Hopf route (half-line traces and
//!   the principal-value formula for the strip coefficient).
//! * [`oracle`]: direct trace evaluation, sector brute force and the grid
//!   estimator.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod coeffs_general;
pub mod coeffs_radial;
mod error;
pub mod geometry;
pub mod oracle;
pub mod poly;
pub mod quadrature;
pub mod symbols;

pub use error::{Error, Result};
pub use geometry::{EdgeFrame, Polygon, Triangle, Vec2, VertexCorner, VertexKind};
pub use poly::TestFunction;
pub use quadrature::QuadratureSpec;
pub use symbols::{KernelMoments, RadialKernel, RadialSymbol, Slice1D};
