//! A finite realizability workbench.
//!
//! PERs over a coded combinatory algebra, tracked morphisms, realizable
//! endofunctors and their monotone repair, least fixpoints, initial algebras
//! relative to a finite family of algebras, and the Yoneda monotonization
//! `F*X = nat(hom(X, -), F)`. Everything that quantifies over "all numbers"
//! is relativized to a [`Budget`].

pub mod algebra;
pub mod budget;
pub mod category;
pub mod error;
pub mod fixpoint;
pub mod functor;
pub mod kernel;
pub mod per;
pub mod verdict;
pub mod workbench;
pub mod yoneda;

/// Natural numbers used as codes.
pub type Nat = num_bigint::BigUint;

pub use budget::Budget;
pub use error::{Error, KernelError, Result};
pub use kernel::{apply, Code, Fuel, Outcome, Term, UniverseSpec};
pub use per::{exponential, includes, intersect, product, quotient, same_relation, Per};
pub use verdict::Verdict;
