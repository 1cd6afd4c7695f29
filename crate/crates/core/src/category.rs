//! The category of PERs at desk scale.

use std::fmt;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::kernel::{stdlib, Code, Fuel, Outcome, Realizer};
use crate::per::{exponential, same_relation, track, Per};
use crate::verdict::Verdict;

/// `[tracker]_{src → tgt}`, checked on construction.
#[derive(Clone)]
pub struct Morphism {
    src: Per,
    tgt: Per,
    tracker: Code,
    budget: Budget,
}

impl Morphism {
    pub fn new(src: Per, tgt: Per, tracker: Code, budget: &Budget) -> Result<Morphism> {
        match check_tracker(&src, &tgt, &tracker, budget) {
            Verdict::Holds => Ok(Morphism {
                src,
                tgt,
                tracker,
                budget: budget.clone(),
            }),
            Verdict::Fails(w) | Verdict::Undecided(w) => Err(Error::NotATracker(tracker, w)),
        }
    }

    /// For trackers already known to be valid (e.g. drawn from an
    /// exponential's carrier).
    pub(crate) fn trusted(src: Per, tgt: Per, tracker: Code, budget: &Budget) -> Morphism {
        Morphism {
            src,
            tgt,
            tracker,
            budget: budget.clone(),
        }
    }

    pub fn src(&self) -> &Per {
        &self.src
    }

    pub fn tgt(&self) -> &Per {
        &self.tgt
    }

    pub fn tracker(&self) -> &Code {
        &self.tracker
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// Image of `a`, i.e. `tracker · a`.
    pub fn at(&self, a: &Code) -> Outcome {
        self.tracker.realize(a, self.budget.fuel())
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}]: {:?} → {:?}", self.tracker, self.src, self.tgt)
    }
}

/// Definition check for trackers: `n·a` converges into `dom S` for every
/// `a ∈ dom R`, and `a R b` implies `(n·a) S (n·b)`.
pub fn check_tracker(r: &Per, s: &Per, n: &dyn Realizer, budget: &Budget) -> Verdict {
    track(r, s, n, budget.fuel()).verdict()
}

/// `f` and `g` send every `a ∈ dom src` to related images in `tgt`.
pub fn agree_on(src: &Per, tgt: &Per, f: &dyn Realizer, g: &dyn Realizer, fuel: Fuel) -> Verdict {
    Verdict::all(src.carrier().iter().map(|a| {
        let fa = match f.realize(a, fuel) {
            Outcome::Converged { value, .. } => value,
            Outcome::OutOfFuel => return Verdict::Undecided(format!("{f:?}·{a:?} out of fuel")),
        };
        let ga = match g.realize(a, fuel) {
            Outcome::Converged { value, .. } => value,
            Outcome::OutOfFuel => return Verdict::Undecided(format!("{g:?}·{a:?} out of fuel")),
        };
        tgt.relate(&fa, &ga).context(format_args!("at {a:?}"))
    }))
}

/// [`agree_on`] for maps already known to track `src → tgt`: both respect
/// classes, so one representative per class decides.
pub fn agree_on_classes(src: &Per, tgt: &Per, f: &dyn Realizer, g: &dyn Realizer, fuel: Fuel) -> Verdict {
    Verdict::all(src.representatives().map(|a| {
        Verdict::catch(|| {
            let fa = crate::kernel::run(f, a, fuel)?;
            let ga = crate::kernel::run(g, a, fuel)?;
            Ok(tgt.relate(&fa, &ga).context(format_args!("at {a:?}")))
        })
    }))
}

/// The identity, tracked by `I` (code 2).
pub fn identity(r: &Per, budget: &Budget) -> Result<Morphism> {
    Morphism::new(r.clone(), r.clone(), Code::I, budget)
}

/// `g ∘ f`, tracked by `B g f`.
pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism> {
    if g.budget != f.budget {
        return Err(Error::BudgetMismatch(g.budget.to_string(), f.budget.to_string()));
    }
    match same_relation(f.tgt(), g.src()) {
        Verdict::Holds => {}
        v => {
            return Err(Error::EndpointMismatch(format!(
                "target of f is not the source of g ({v})"
            )))
        }
    }
    let tracker = stdlib().comp(&g.tracker, &f.tracker);
    Morphism::new(f.src.clone(), g.tgt.clone(), tracker, &g.budget)
}

/// Extensional equality of parallel morphisms.
pub fn equal_morphisms(f: &Morphism, g: &Morphism) -> Verdict {
    let endpoints = Verdict::all([
        same_relation(f.src(), g.src()).context("sources differ"),
        same_relation(f.tgt(), g.tgt()).context("targets differ"),
    ]);
    if !endpoints.holds() {
        return endpoints;
    }
    agree_on(f.src(), f.tgt(), &f.tracker, &g.tracker, f.budget.fuel())
}

/// Least code `g` in the universe with `g ∘ f = id` and `f ∘ g = id`.
pub fn is_iso(f: &Morphism, budget: &Budget) -> Option<Morphism> {
    if f.src().class_count() != f.tgt().class_count() {
        return None;
    }
    let fuel = budget.fuel();
    let comp = |outer: &Code, inner: &Code| stdlib().comp(outer, inner);
    budget.universe().iter().find_map(|g| {
        if !check_tracker(f.tgt(), f.src(), g, budget).holds() {
            return None;
        }
        let back_forth = agree_on(f.src(), f.src(), &comp(g, &f.tracker), &Code::I, fuel);
        let forth_back = agree_on(f.tgt(), f.tgt(), &comp(&f.tracker, g), &Code::I, fuel);
        (back_forth.holds() && forth_back.holds())
            .then(|| Morphism::trusted(f.tgt.clone(), f.src.clone(), g.clone(), budget))
    })
}

/// One morphism per extensional class of `[R → S]`, represented by its least
/// code.
pub fn enumerate_homs(r: &Per, s: &Per, budget: &Budget) -> Result<Vec<Morphism>> {
    let hom = exponential(r, s, budget)?;
    Ok(hom
        .representatives()
        .map(|n| Morphism::trusted(r.clone(), s.clone(), n.clone(), budget))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::UniverseSpec;
    use crate::per::includes;

    fn budget() -> Budget {
        Budget::new(UniverseSpec::Terms(2), Fuel::new(200).unwrap()).unwrap()
    }

    fn per(classes: &[&[u64]]) -> Per {
        Per::of(classes).unwrap()
    }

    #[test]
    fn identity_tracks_exactly_the_inclusions() {
        let b = budget();
        let pers = [
            Per::empty(),
            per(&[&[0]]),
            per(&[&[0], &[1]]),
            per(&[&[0, 1]]),
        ];
        for r in &pers {
            for s in &pers {
                assert_eq!(check_tracker(r, s, &Code::I, &b).holds(), includes(r, s).holds());
            }
        }
    }

    #[test]
    fn constant_k_examples() {
        let b = budget();
        let kk = Code::from(3);
        assert!(check_tracker(&per(&[&[0]]), &per(&[&[0]]), &kk, &b).holds());
        let two = per(&[&[0], &[1]]);
        assert!(check_tracker(&two, &two, &kk, &b).holds());
        let v = check_tracker(&two, &per(&[&[1]]), &kk, &b);
        assert!(v.fails(), "{v}");
        assert!(v.witness().unwrap().contains("not in the target domain"));
    }

    #[test]
    fn identity_laws() {
        let b = budget();
        let two = per(&[&[0], &[1]]);
        let f = Morphism::new(two.clone(), two.clone(), Code::from(3), &b).unwrap();
        let id = identity(&two, &b).unwrap();
        assert!(equal_morphisms(&compose(&id, &f).unwrap(), &f).holds());
        assert!(equal_morphisms(&compose(&f, &id).unwrap(), &f).holds());
        assert!(identity(&Per::empty(), &b).is_ok());
    }

    #[test]
    fn compose_rejects_mismatched_endpoints() {
        let b = budget();
        let one = per(&[&[0]]);
        let two = per(&[&[0], &[1]]);
        let f = identity(&one, &b).unwrap();
        let g = identity(&two, &b).unwrap();
        assert!(matches!(compose(&g, &f), Err(Error::EndpointMismatch(_))));
    }

    #[test]
    fn equality_is_extensional() {
        let b = budget();
        let one = per(&[&[0]]);
        let f = Morphism::new(one.clone(), one.clone(), Code::I, &b).unwrap();
        let g = Morphism::new(one.clone(), one.clone(), Code::from(3), &b).unwrap();
        assert!(equal_morphisms(&f, &g).holds());

        let two = per(&[&[0], &[1]]);
        let k0 = Morphism::new(two.clone(), two.clone(), Code::from(3), &b).unwrap();
        // K S sends everything to S = 1.
        let k1 = Morphism::new(two.clone(), two.clone(), Code::from(5), &b).unwrap();
        assert!(equal_morphisms(&k0, &k1).fails());
    }

    #[test]
    fn homs_and_isos() {
        let b = budget();
        let one = per(&[&[0]]);
        assert_eq!(enumerate_homs(&Per::empty(), &one, &b).unwrap().len(), 1);
        assert_eq!(enumerate_homs(&one, &one, &b).unwrap().len(), 1);
        let id = identity(&one, &b).unwrap();
        assert_eq!(is_iso(&id, &b).unwrap().tracker(), &Code::I);
        let two = per(&[&[0], &[1]]);
        let f = Morphism::new(one.clone(), two, Code::I, &b).unwrap();
        assert!(is_iso(&f, &b).is_none());
    }
}
