//! Hamilton cycle search by rotations, with checkers for the expansion
//! properties behind it.
//!
//! ```
//! use hamlab::closing::{find_hamilton_cycle, HamiltonOptions};
//! use hamlab::generate::{generate, Family};
//!
//! let g = generate(&Family::Gnp { n: 200, p: 0.06 }, 1).unwrap();
//! let out = find_hamilton_cycle(&g, &HamiltonOptions::default()).unwrap();
//! assert_eq!(out.cycle.len(), 200);
//! ```
//!
//! [`rotation`] holds the path moves and endpoint families, [`closing`]
//! the two closers, [`conditions`] the checkers and [`applications`] the
//! searches built on top. The guide in `book/` walks through each.

pub mod closing;
pub mod conditions;
pub mod edgelist;
pub mod generate;
pub mod graph;
pub mod rng;
pub mod rotation;
pub mod pivots;
pub mod applications;

// the guide's snippets run as doctests
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/rotations.md")]
    mod rotations {}
    #[doc = include_str!("../../../book/src/conditions.md")]
    mod conditions {}
    #[doc = include_str!("../../../book/src/pivots.md")]
    mod pivots {}
    #[doc = include_str!("../../../book/src/closing.md")]
    mod closing {}
    #[doc = include_str!("../../../book/src/applications.md")]
    mod applications {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
