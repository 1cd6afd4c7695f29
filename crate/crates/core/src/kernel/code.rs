use std::cmp::Ordering;
use std::fmt;

use crate::Nat;

use super::nat;
use super::term::Term;

/// A natural number read as the code of a closed combinatory term.
///
/// The decoded term is kept alongside the number, which is computed lazily:
/// normal forms produced by reduction can have codes far too large to write
/// down, and most of them are only ever compared structurally. Equality and
/// hashing are structural, which coincides with numeric equality because the
/// coding is a bijection. Ordering is numeric.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Code(Term);

impl Code {
    pub const K: Code = Code(Term::K);
    pub const S: Code = Code(Term::S);
    /// The identity realizer `i`.
    pub const I: Code = Code(Term::I);

    pub fn from_nat(n: &Nat) -> Code {
        Code(nat::decode_from(n))
    }

    pub fn from_term(term: Term) -> Code {
        Code(term)
    }

    pub fn term(&self) -> &Term {
        &self.0
    }

    pub fn into_term(self) -> Term {
        self.0
    }

    pub fn nat(&self) -> Nat {
        self.0.nat()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.small_code()
    }

    /// Code of `App(self, arg)`, without reducing.
    pub fn app(&self, arg: &Code) -> Code {
        Code(Term::app(self.0.clone(), arg.0.clone()))
    }
}

impl From<u64> for Code {
    fn from(n: u64) -> Code {
        Code(nat::decode_from(&n))
    }
}

impl From<Term> for Code {
    fn from(t: Term) -> Code {
        Code(t)
    }
}

impl Ord for Code {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match (self.0.small_code(), other.0.small_code()) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => self.0.with_nat(|a| other.0.with_nat(|b| a.cmp(b))),
        }
    }
}

impl PartialOrd for Code {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.with_nat(|n| write!(f, "{n}"))
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.small_code() {
            Some(n) => write!(f, "#{n}"),
            None => write!(f, "#{}", self.0),
        }
    }
}

/// `encode(t)`.
pub fn encode(term: &Term) -> Nat {
    term.nat()
}

/// `decode(n)`.
pub fn decode(n: &Nat) -> Term {
    nat::decode_from(n)
}
