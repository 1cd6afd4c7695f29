//! The workbench: a small s-expression language for declaring PERs,
//! functors and algebras, asserting properties and running constructions.
//!
//! ```text
//! (per R (carrier 0 1) (classes (0) (1)))
//! (functor F (exp R id))
//! (assert (realizable F))
//! (run fixpoint F)
//! ```

mod doc;
mod exec;
mod report;
pub mod sexp;

pub use doc::{code_literal, parse_workbench, AlgebraDecl, Assertion, Family, Form, FunctorRef, PerExpr, RunCmd, WorkbenchDoc};
pub use exec::{run_checks, run_command, RunOptions, DEFAULT_UNIVERSE};
pub use report::{emit_report, BudgetStamp, CheckReport, Format, Report, Status, REPORT_VERSION};
pub use sexp::{Pos, SyntaxError};
