//! Counting 3-part compositions of `n` whose parts are pairwise coprime.
//!
//! Three independent routes are provided:
//!
//! - [`counter::count_t3_oracle`] enumerates every composition.
//! - [`counter::count_t3_mobius`] evaluates an exact Möbius-inversion sum over
//!   a poset of divisibility patterns, with each term a closed-form lattice
//!   point count from [`diophantine`].
//! - [`asymptotic`] evaluates the density constant `f(n)` and the main term
//!   `f(n) n^2 / 2`, and tabulates how far the exact counts are from it.

pub mod arith;
pub mod asymptotic;
pub mod counter;
pub mod diophantine;
pub mod error;
pub mod poset;
pub mod table;

pub use arith::{PrimeTable, Triple};
pub use asymptotic::{ErrorRow, SingularSeries};
pub use counter::{CountResult, Method, ScanConfig};
pub use diophantine::{SolutionCount, TripleDecomposition};
pub use error::{Error, Result};
pub use poset::{LocalElement, Poset, PosetElement};
pub use table::Format;
