//! Bracket abstraction: compiling λ-notation into `S`/`K`/`I`.
//!
//! Only the three textbook clauses are used, so the compiled terms are
//! predictable (and large). No η or `B`/`C` optimizations.

use crate::error::KernelError;

use super::code::Code;
use super::term::Term;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpenTerm {
    Closed(Term),
    Var(String),
    App(Box<OpenTerm>, Box<OpenTerm>),
}

impl OpenTerm {
    pub fn var(name: &str) -> OpenTerm {
        OpenTerm::Var(name.to_owned())
    }

    pub fn code(code: &Code) -> OpenTerm {
        OpenTerm::Closed(code.term().clone())
    }

    pub fn app(f: OpenTerm, a: OpenTerm) -> OpenTerm {
        OpenTerm::App(Box::new(f), Box::new(a))
    }

    /// `f a1 a2 ...`, associating to the left.
    pub fn apply<I: IntoIterator<Item = OpenTerm>>(f: OpenTerm, args: I) -> OpenTerm {
        args.into_iter().fold(f, OpenTerm::app)
    }

    pub fn occurs(&self, name: &str) -> bool {
        match self {
            OpenTerm::Closed(_) => false,
            OpenTerm::Var(v) => v == name,
            OpenTerm::App(f, a) => f.occurs(name) || a.occurs(name),
        }
    }

    fn first_var(&self) -> Option<&str> {
        match self {
            OpenTerm::Closed(_) => None,
            OpenTerm::Var(v) => Some(v),
            OpenTerm::App(f, a) => f.first_var().or_else(|| a.first_var()),
        }
    }

    /// The closed term, or the first free variable as an error.
    pub fn close(self) -> Result<Term, KernelError> {
        if let Some(v) = self.first_var() {
            return Err(KernelError::UnboundVariable(v.to_owned()));
        }
        fn go(t: OpenTerm) -> Term {
            match t {
                OpenTerm::Closed(t) => t,
                OpenTerm::App(f, a) => Term::app(go(*f), go(*a)),
                OpenTerm::Var(_) => unreachable!("checked closed"),
            }
        }
        Ok(go(self))
    }
}

impl From<Term> for OpenTerm {
    fn from(t: Term) -> Self {
        OpenTerm::Closed(t)
    }
}

/// `[x] body`.
pub fn bracket_abstract(var: &str, body: OpenTerm) -> OpenTerm {
    if !body.occurs(var) {
        return OpenTerm::app(Term::K.into(), body);
    }
    match body {
        OpenTerm::Var(_) => Term::I.into(),
        OpenTerm::App(f, a) => OpenTerm::apply(
            Term::S.into(),
            [bracket_abstract(var, *f), bracket_abstract(var, *a)],
        ),
        OpenTerm::Closed(_) => unreachable!("closed terms have no free variables"),
    }
}

/// `λ v1 v2 ... . body`, which must be closed afterwards.
pub fn lambda(vars: &[&str], body: OpenTerm) -> Result<Code, KernelError> {
    let abstracted = vars
        .iter()
        .rev()
        .fold(body, |acc, v| bracket_abstract(v, acc));
    abstracted.close().map(Code::from_term)
}
