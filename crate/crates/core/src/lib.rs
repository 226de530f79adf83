//! Finite partial lattices, distributive-lattice-valued measured partial
//! lattices, affine functions, term quotients, pushouts and gadgets.

pub mod affine;
pub mod amalgam;
pub mod bitrel;
pub mod error;
pub mod gadgets;
pub mod gen;
pub mod measured;
pub mod order;
pub mod partial;
pub mod terms;

pub use error::{Error, Result};

/// The guide's snippets, run as doc-tests.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/partial-lattices.md")]
    struct PartialLattices;
    #[doc = include_str!("../../../book/src/measured.md")]
    struct Measured;
    #[doc = include_str!("../../../book/src/terms.md")]
    struct Terms;
    #[doc = include_str!("../../../book/src/amalgamation.md")]
    struct Amalgamation;
    #[doc = include_str!("../../../book/src/gadgets.md")]
    struct Gadgets;
}
