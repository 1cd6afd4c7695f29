use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::KernelError;

use super::code::Code;
use super::term::Term;

/// A finite set of candidate codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UniverseSpec {
    /// All codes `0..=n`.
    Codes(u64),
    /// Codes of all terms with at most `k` application nodes.
    Terms(u32),
    /// An explicit list.
    Explicit(Vec<u64>),
}

impl fmt::Display for UniverseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniverseSpec::Codes(n) => write!(f, "codes:{n}"),
            UniverseSpec::Terms(k) => write!(f, "terms:{k}"),
            UniverseSpec::Explicit(v) => {
                let items: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "explicit:{}", items.join(","))
            }
        }
    }
}

impl FromStr for UniverseSpec {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || KernelError::BadUniverse(s.to_owned());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "codes" => rest.parse().map(UniverseSpec::Codes).map_err(|_| bad()),
            "terms" => rest.parse().map(UniverseSpec::Terms).map_err(|_| bad()),
            "explicit" => rest
                .split(',')
                .map(|p| p.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map(UniverseSpec::Explicit)
                .map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

/// Sorted, duplicate-free list of the codes in `spec`.
pub fn enumerate_codes(spec: &UniverseSpec) -> Vec<Code> {
    let mut codes: Vec<Code> = match spec {
        UniverseSpec::Codes(n) => (0..=*n).map(Code::from).collect(),
        UniverseSpec::Explicit(v) => v.iter().copied().map(Code::from).collect(),
        UniverseSpec::Terms(k) => {
            let mut by_size: Vec<Vec<Term>> = vec![vec![Term::K, Term::S, Term::I]];
            for n in 1..=*k as usize {
                let mut level = Vec::new();
                for left in 0..n {
                    let right = n - 1 - left;
                    for a in &by_size[left] {
                        for b in &by_size[right] {
                            level.push(Term::app(a.clone(), b.clone()));
                        }
                    }
                }
                by_size.push(level);
            }
            by_size.into_iter().flatten().map(Code::from_term).collect()
        }
    };
    codes.sort();
    codes.dedup();
    codes
}
