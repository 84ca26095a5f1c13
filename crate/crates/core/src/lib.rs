//! Exact computer algebra for the degree-n divided-powers algebra of a free
//! associative algebra over the integers: canonical basis and star product,
//! generator decompositions, symmetric-function identities, the norm map
//! onto generic-matrix invariants, and desk-scale evaluation of the
//! Hilbert-Chow map on tuples of rational matrices.
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals);
//! every value is immutable after construction and safe to share across
//! threads. Randomized checks take explicit seeds and replay exactly.

pub mod error;
pub mod exact;
pub mod decomp;
pub mod gamma;
pub mod hilb;
pub mod norm;
pub mod symfun;
pub mod tensor;
pub mod text;
pub mod words;

pub use error::{Error, Result};
