use std::fmt;
use std::sync::Arc;

use crate::error::KernelError;
use crate::kernel::{enumerate_codes, Code, Fuel, UniverseSpec};

/// The finite universe of candidate codes and the evaluation fuel that every
/// "for all numbers" quantifier is relativized to.
#[derive(Clone)]
pub struct Budget {
    spec: UniverseSpec,
    universe: Arc<[Code]>,
    fuel: Fuel,
}

impl Budget {
    pub fn new(spec: UniverseSpec, fuel: Fuel) -> Result<Budget, KernelError> {
        let universe = enumerate_codes(&spec);
        if universe.is_empty() {
            return Err(KernelError::EmptyUniverse);
        }
        Ok(Budget {
            spec,
            universe: universe.into(),
            fuel,
        })
    }

    pub fn spec(&self) -> &UniverseSpec {
        &self.spec
    }

    pub fn universe(&self) -> &[Code] {
        &self.universe
    }

    pub fn fuel(&self) -> Fuel {
        self.fuel
    }

    /// Same universe, different fuel.
    pub fn with_fuel(&self, fuel: Fuel) -> Budget {
        Budget {
            spec: self.spec.clone(),
            universe: self.universe.clone(),
            fuel,
        }
    }
}

impl PartialEq for Budget {
    fn eq(&self, other: &Self) -> bool {
        self.fuel == other.fuel
            && (Arc::ptr_eq(&self.universe, &other.universe) || self.universe == other.universe)
    }
}

impl Eq for Budget {}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fuel {}", self.spec, self.fuel)
    }
}

impl fmt::Debug for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Budget({self})")
    }
}
