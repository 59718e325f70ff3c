//! Numerical laboratory for Kakeya–Nikodym tube norms of Laplace eigenfunctions.
//!
//! The crate works on four closed-form model surfaces (the round sphere, the
//! flat torus, the hyperbolic plane and a compact hyperbolic quotient) and
//! provides:
//!
//! * [`manifolds`]: points, geodesics, distances and distances to geodesics;
//! * [`eigenbasis`]: explicit L²-normalized eigenfunctions and quasimodes;
//! * [`tubes`]: tube masses, Kakeya–Nikodym norms over geodesic families,
//!   geodesic restriction masses and ball escape times;
//! * [`toponogov`]: cone apertures, hyperbolic hinges and cone-in-tube
//!   certification;
//! * [`deckgroup`]: enumeration of the Bolza surface group and the dyadic
//!   counting of deck transformations meeting a tube;
//! * [`spectral`]: spectral filters, window projectors and Gram-matrix
//!   operator norms on the torus;
//! * [`norms_nodal`]: Lᵖ norms, the Hölder chain and nodal-set lengths.
//!
//! ```
//! use knlab::toponogov::cone_half_angle;
//!
//! let theta = cone_half_angle(3.0, 1.0, 1.0).unwrap();
//! assert!((theta - 0.104_080_07_f64).abs() < 1e-8);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod deckgroup;
pub mod eigenbasis;
mod error;
pub mod manifolds;
pub mod norms_nodal;
pub mod quadrature;
pub mod spectral;
pub mod toponogov;
pub mod tubes;

pub use error::{Error, Result};
pub use num_complex::Complex64;
