//! Reflexivity, the integer decomposition property and `h*`-polynomials for
//! the simplices `Δ(1,q) = conv{e_1, ..., e_n, -Σ q_i e_i}`.
//!
//! All arithmetic is exact on `u128`; overflow is an error, never a wrap.

pub(crate) mod arith;
pub mod census;
pub mod cone_oracle;
pub mod ehrhart;
pub mod error;
pub mod families;
pub mod reflexive_idp;
pub mod stabilization;
pub mod weights;

pub use error::{Error, Result};
pub use weights::{parse_weights, SupportForm, WeightVector};
