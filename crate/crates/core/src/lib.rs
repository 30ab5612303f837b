//! Exact and numeric reconstruction of the octonionic construction of an
//! almost complex structure on the six-sphere: octonions, the Lie algebra
//! g2 as 7×7 matrices, the Samelson operators J on g2, the map f: S⁶ → G2,
//! chart frames, the induced tensor on S⁶ and its symbolic matrix elements.
//!
//! Most routines are generic over [`Scalar`], so the same code runs exactly
//! over ℚ(√2, √3) ([`QuadScalar`]) or numerically over `f64`.

pub mod charts;
pub mod error;
pub mod g2_algebra;
pub mod j_sphere;
pub mod linalg;
pub mod octonion;
pub mod orbit_analysis;
pub mod poly_engine;
pub mod rng;
pub mod samelson;
pub mod scalars;
pub mod sphere_map;
pub mod verify;

pub use error::{Error, Result};
pub use scalars::{QuadScalar, Scalar};
