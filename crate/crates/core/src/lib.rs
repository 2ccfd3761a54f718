//! Koshliakov zeta functions and their Watson-type and Epstein-type relatives.
//!
//! The crate is organised bottom-up:
//!
//! * [`sequence`]: the roots of `p sin(pi y) + y cos(pi y) = 0` and their weights,
//! * [`specfun`]: gamma, Riemann zeta, Bessel `K` and `J`, incomplete gamma and quadrature,
//! * [`koshzeta`]: the Koshliakov zeta `zeta_p`, its companion `eta_p` and their constants,
//! * [`kernels`]: the kernels `B_p`, `G_p`, `sigma_p` and the Watson-type series,
//! * [`epstein`]: the two Epstein zeta analogues with Laurent data and central values,
//! * [`registry`]: named identities evaluated on parameter grids,
//! * [`driver`]: report serialization and the command line front end.

pub mod config;
pub mod driver;
pub mod epstein;
pub mod error;
pub mod kernels;
pub mod koshzeta;
pub mod registry;
pub mod sequence;
pub mod specfun;

pub use config::{EvalConfig, QuadratureSpec};
pub use error::{KoshError, Result};
pub use num_complex::Complex64 as C64;
pub use sequence::{KoshSequence, ShapeParam};
