//! Genes, combinatorial weights and Serre weight sets attached to a tame
//! inertial type and an irreducible two-dimensional mod p representation.

pub mod basep;
pub mod count;
pub mod enriched;
pub mod error;
pub mod gene;
pub mod kisin;
pub mod serre;
pub mod triple;
pub mod weights;

pub use count::{Card, Count};
pub use error::{Error, Result};
