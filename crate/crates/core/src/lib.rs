//! Evaluation and numerical verification of elliptic hypergeometric
//! functions: theta functions, elliptic, modified elliptic and hyperbolic
//! gamma functions, totally elliptic hypergeometric terms, and the
//! elliptic beta and type-I integrals over the torus.

pub mod error;
pub mod gamma;
pub mod integrals;
pub mod params;
pub mod quad;
pub mod sample;
pub mod suite;
pub mod terms;
mod product;
pub mod theta;

pub use error::{ErrorKind, EvalError, Result};
pub use params::{BasePair, OmegaTriple, Regime, TruncationPolicy, C64};
