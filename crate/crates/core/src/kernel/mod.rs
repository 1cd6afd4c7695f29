//! The applicative substrate: coded combinatory logic.
//!
//! A natural number `n` is read as the code of a closed term over `K`, `S`,
//! `I`; juxtaposition `n m` is weak reduction of `App(n, m)` under a fuel
//! budget. Code `2` is `I`, which realizes the identity on every number.

mod abstraction;
mod code;
pub mod nat;
mod reduce;
mod stdlib;
mod term;
mod universe;

pub use abstraction::{bracket_abstract, lambda, OpenTerm};
pub use code::{decode, encode, Code};
pub use reduce::{apply, apply_all, eval, run, Fuel, Outcome, Realizer, MAX_TERM_NODES};
pub use stdlib::{stdlib, Stdlib};
pub use term::{Shape, Term};
pub use universe::{enumerate_codes, UniverseSpec};
