//! Integer types usable for weight counts.

use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// An unsigned count. Fixed-width types overflow for long fragments
/// (u64 past length 90 or so); [`BigUint`] never does.
pub trait Count: Clone + Ord + Zero + One + Add<Output = Self> + Mul<Output = Self> {}

impl<T> Count for T where T: Clone + Ord + Zero + One + Add<Output = T> + Mul<Output = T> {}

/// The default count type.
pub type Card = BigUint;
