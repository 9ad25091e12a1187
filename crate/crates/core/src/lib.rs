//! Exact-arithmetic computational algebra for equivariant Frobenius
//! structures over wreath products.
//!
//! The crate builds three kinds of objects and verifies, by bit-exact
//! structure-constant comparison against brute-force oracles, how they fit
//! together:
//!
//! - [`frobenius`]: ℚ-graded commutative Frobenius algebras given by sparse
//!   structure constants, with products, dual bases, comultiplication,
//!   pullback/pushforward along surjections, and Euler classes;
//! - [`gfrob`]: group-equivariant Frobenius algebras with the eleven-axiom
//!   checker and the coinvariant construction along `Γ = K ⋊ L`;
//! - [`lehnsorger`]: the Lehn-Sorger algebra `A{Σ_n}` over any Frobenius
//!   base, with the graph-defect/Euler-class product;
//! - [`wreathpt`]: the comparison pipeline matching `A{Σ_n}` over the
//!   center of `Q[G]` with the `G^n`-coinvariants of `Q[G^n ⋊ Σ_n]`.
//!
//! Everything is exact rational; there is no floating point in the crate.

pub mod error;
pub mod fixtures;
pub mod frobenius;
pub mod gfrob;
pub mod groups;
pub mod io;
pub mod lehnsorger;
pub mod linalg;
pub mod perm;
pub mod rat;
pub mod report;
pub mod sparse;
pub mod wreathpt;

pub use error::{Error, DEFAULT_CAP};
pub use rat::Rat;
pub use sparse::{SparseVec, Tensor};
