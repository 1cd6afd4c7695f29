use std::fmt;

/// Three-valued outcome of a budget-relative check. `Undecided` means some
/// evaluation ran out of fuel before a counterexample was found; it is never
/// folded into `Holds`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(String),
    Undecided(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn undecided(&self) -> bool {
        matches!(self, Verdict::Undecided(_))
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) | Verdict::Undecided(w) => Some(w),
        }
    }

    pub fn from_bool(ok: bool, witness: impl FnOnce() -> String) -> Verdict {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails(witness())
        }
    }

    /// Conjunction: the first failure, else the first undecided, else holds.
    /// Stops at the first failure.
    pub fn all<I: IntoIterator<Item = Verdict>>(checks: I) -> Verdict {
        let mut undecided = None;
        for v in checks {
            match v {
                Verdict::Holds => {}
                Verdict::Fails(_) => return v,
                Verdict::Undecided(_) => {
                    undecided.get_or_insert(v);
                }
            }
        }
        undecided.unwrap_or(Verdict::Holds)
    }

    /// Prefix the witness with some context.
    pub fn context(self, ctx: impl fmt::Display) -> Verdict {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(format!("{ctx}: {w}")),
            Verdict::Undecided(w) => Verdict::Undecided(format!("{ctx}: {w}")),
        }
    }

    /// Run a check written with `?` on early exits.
    pub fn catch(check: impl FnOnce() -> Result<Verdict, Verdict>) -> Verdict {
        check().unwrap_or_else(|v| v)
    }

    pub fn negate(self) -> Verdict {
        match self {
            Verdict::Holds => Verdict::Fails("negated check holds".into()),
            Verdict::Fails(_) => Verdict::Holds,
            u @ Verdict::Undecided(_) => u,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("holds"),
            Verdict::Fails(w) => write!(f, "fails: {w}"),
            Verdict::Undecided(w) => write!(f, "undecided: {w}"),
        }
    }
}

/// Running count of checks with their failures and undecided cases.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub checked: usize,
    pub failures: Vec<String>,
    pub undecided: Vec<String>,
}

impl Tally {
    pub fn record(&mut self, v: Verdict, ctx: impl fmt::Display) {
        self.checked += 1;
        match v {
            Verdict::Holds => {}
            Verdict::Fails(w) => self.failures.push(format!("{ctx}: {w}")),
            Verdict::Undecided(w) => self.undecided.push(format!("{ctx}: {w}")),
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self.undecided.extend(other.undecided);
    }

    pub fn verdict(&self) -> Verdict {
        if let Some(f) = self.failures.first() {
            Verdict::Fails(f.clone())
        } else if let Some(u) = self.undecided.first() {
            Verdict::Undecided(u.clone())
        } else {
            Verdict::Holds
        }
    }
}
