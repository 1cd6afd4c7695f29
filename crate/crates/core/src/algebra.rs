//! Algebras of realizable functors and initial algebras relative to a finite
//! family.
//!
//! `R0` collects the codes `f` that, given any family algebra's structure
//! `a`, produce an element `f a` of its carrier, uniformly: every algebra
//! morphism `m: (R, a) → (T, t)` sends `f a` to `f t`. Projections
//! `π_a = S I (K a)` evaluate at a structure, and the structure map
//! `c = λx a. a (F(π_a) x)` makes `(R0, c)` weakly initial in the family.

use std::fmt;
use std::sync::Arc;

use crate::budget::Budget;
use crate::category::{enumerate_homs, Morphism};
use crate::error::{Error, Result};
use crate::functor::RealizableFunctor;
use crate::kernel::{lambda, run, Code, Fuel, OpenTerm, Realizer, Term};
use crate::per::{exponential, includes, intersect, same_relation, track, Classifier, Membership, Per, Sig};
use crate::verdict::{Tally, Verdict};

/// `(R, a)` with `a` tracking `FR → R`.
#[derive(Clone)]
pub struct Algebra {
    functor: RealizableFunctor,
    carrier: Per,
    structure: Code,
}

impl Algebra {
    pub fn new(functor: &RealizableFunctor, carrier: Per, structure: Code, budget: &Budget) -> Result<Algebra> {
        let fr = functor.object(&carrier, budget)?;
        match track(&fr, &carrier, &structure, budget.fuel()).verdict() {
            Verdict::Holds => Ok(Algebra {
                functor: functor.clone(),
                carrier,
                structure,
            }),
            Verdict::Fails(w) | Verdict::Undecided(w) => Err(Error::NotATracker(structure, w)),
        }
    }

    pub fn carrier(&self) -> &Per {
        &self.carrier
    }

    pub fn structure(&self) -> &Code {
        &self.structure
    }

    pub fn functor(&self) -> &RealizableFunctor {
        &self.functor
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.carrier, self.structure)
    }
}

/// An algebra morphism: a tracked map whose square commutes.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    pub src: Algebra,
    pub tgt: Algebra,
    pub morphism: Morphism,
}

impl AlgebraMorphism {
    pub fn new(src: &Algebra, tgt: &Algebra, tracker: Code, budget: &Budget) -> Result<AlgebraMorphism> {
        let morphism = Morphism::new(src.carrier.clone(), tgt.carrier.clone(), tracker, budget)?;
        match square(src, tgt, morphism.tracker(), budget)? {
            Verdict::Holds => Ok(AlgebraMorphism {
                src: src.clone(),
                tgt: tgt.clone(),
                morphism,
            }),
            Verdict::Fails(w) | Verdict::Undecided(w) => Err(Error::NotATracker(morphism.tracker().clone(), w)),
        }
    }
}

/// `m ∘ a = b ∘ F(m)` on `FR`, where `a`, `b` are the structures of `src`,
/// `tgt` and `m` tracks `R → S`.
pub fn square(src: &Algebra, tgt: &Algebra, m: &Code, budget: &Budget) -> Result<Verdict> {
    square_with(&src.functor, src, tgt, m, budget)
}

fn square_with(f: &RealizableFunctor, src: &Algebra, tgt: &Algebra, m: &Code, budget: &Budget) -> Result<Verdict> {
    let fuel = budget.fuel();
    let fr = f.object(&src.carrier, budget)?;
    let Some(fm) = f.map(m, fuel).into_value() else {
        return Ok(Verdict::Undecided(format!("φ·{m:?} out of fuel")));
    };
    Ok(Verdict::all(fr.carrier().iter().map(|x| {
        Verdict::catch(|| {
            let lhs = run(m, &run(&src.structure, x, fuel)?, fuel)?;
            let rhs = run(&tgt.structure, &run(&fm, x, fuel)?, fuel)?;
            Ok(tgt.carrier.relate(&lhs, &rhs).context(format_args!("square at {x:?}")))
        })
    })))
}

/// One algebra per carrier and class of `[FR → R]`.
pub fn enumerate_algebras(f: &RealizableFunctor, carriers: &[Per], budget: &Budget) -> Result<Vec<Algebra>> {
    let mut out = Vec::new();
    for r in carriers {
        let fr = f.object(r, budget)?;
        for a in exponential(&fr, r, budget)?.representatives() {
            out.push(Algebra {
                functor: f.clone(),
                carrier: r.clone(),
                structure: a.clone(),
            });
        }
    }
    Ok(out)
}

/// Hom class representatives `R → S` whose square commutes.
pub fn enumerate_algebra_morphisms(src: &Algebra, tgt: &Algebra, budget: &Budget) -> Result<Vec<AlgebraMorphism>> {
    let mut out = Vec::new();
    for m in enumerate_homs(&src.carrier, &tgt.carrier, budget)? {
        if square(src, tgt, m.tracker(), budget)?.holds() {
            out.push(AlgebraMorphism {
                src: src.clone(),
                tgt: tgt.clone(),
                morphism: m,
            });
        }
    }
    Ok(out)
}

/// `π_a = S I (K a)`, so `π_a f = f a`.
pub fn projection(a: &Code) -> Code {
    Code::from_term(Term::spine(
        Term::S,
        [Term::I, Term::app(Term::K, a.term().clone())],
    ))
}

/// `λx a. a (φ (S I (K a)) x)`.
pub fn structure_map_c(phi: &Code) -> Code {
    let v = OpenTerm::var;
    let c = OpenTerm::code;
    let pi = OpenTerm::apply(c(&Code::S), [c(&Code::I), OpenTerm::app(c(&Code::K), v("a"))]);
    let body = OpenTerm::app(v("a"), OpenTerm::apply(c(phi), [pi, v("x")]));
    lambda(&["x", "a"], body).expect("closed")
}

struct Mediator {
    target: usize,
    hom: Code,
}

struct R0Classifier {
    family: Vec<Algebra>,
    /// For each source algebra, its algebra morphisms into family members.
    out_maps: Vec<Vec<Mediator>>,
    fuel: Fuel,
}

impl Classifier for R0Classifier {
    fn classify(&self, f: &Code) -> Membership {
        let mut images = Vec::with_capacity(self.family.len());
        let mut sigs = Vec::with_capacity(self.family.len());
        for alg in &self.family {
            let v = match f.realize(&alg.structure, self.fuel).into_value() {
                Some(v) => v,
                None => return Membership::Undecided(format!("{f:?}·{:?} out of fuel", alg.structure)),
            };
            match alg.carrier.classify(&v) {
                Membership::In(s) => sigs.push(s),
                other => return other,
            }
            images.push(v);
        }
        for (i, maps) in self.out_maps.iter().enumerate() {
            for m in maps {
                let moved = match m.hom.realize(&images[i], self.fuel).into_value() {
                    Some(v) => v,
                    None => return Membership::Undecided(format!("{:?}·{:?} out of fuel", m.hom, images[i])),
                };
                match self.family[m.target].carrier.relate(&moved, &images[m.target]) {
                    Verdict::Holds => {}
                    Verdict::Fails(w) => {
                        return Membership::Out(format!(
                            "[{:?}]: family[{i}] → family[{}] does not carry {f:?}·a: {w}",
                            m.hom, m.target
                        ))
                    }
                    Verdict::Undecided(w) => return Membership::Undecided(w),
                }
            }
        }
        Membership::In(Sig::tuple(sigs))
    }
}

#[derive(Clone)]
pub struct R0Approx {
    pub per: Per,
    pub family: Vec<Algebra>,
    /// Candidates discarded because some condition ran out of fuel.
    pub excluded_by_fuel: usize,
}

impl fmt::Debug for R0Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R0 {:?} over {} algebras", self.per, self.family.len())
    }
}

/// `R0` relative to `family`, enumerated over the budget's universe.
pub fn r0_approx(f: &RealizableFunctor, family: &[Algebra], budget: &Budget) -> Result<R0Approx> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut out_maps = Vec::with_capacity(family.len());
    for src in family {
        let mut maps = Vec::new();
        for (j, tgt) in family.iter().enumerate() {
            for m in enumerate_homs(&src.carrier, &tgt.carrier, budget)? {
                if square_with(f, src, tgt, m.tracker(), budget)?.holds() {
                    maps.push(Mediator {
                        target: j,
                        hom: m.tracker().clone(),
                    });
                }
            }
        }
        out_maps.push(maps);
    }
    let classifier = R0Classifier {
        family: family.to_vec(),
        out_maps,
        fuel: budget.fuel(),
    };
    let mut members = Vec::new();
    let mut excluded = Vec::new();
    for n in budget.universe() {
        match classifier.classify(n) {
            Membership::In(sig) => members.push((n.clone(), sig)),
            Membership::Out(_) => {}
            Membership::Undecided(_) => excluded.push(n.clone()),
        }
    }
    let excluded_by_fuel = excluded.len();
    let per = Per::from_classified(members, Some(Arc::new(classifier)), Some(budget.clone()), excluded);
    Ok(R0Approx {
        per,
        family: family.to_vec(),
        excluded_by_fuel,
    })
}

fn phi_code(f: &RealizableFunctor) -> Result<Code> {
    f.tracker()
        .as_code()
        .cloned()
        .ok_or_else(|| Error::Unsupported("structure map needs a code tracker".into()))
}

/// `c` tracks `F R0 → R0`, and for every family algebra `(R, a)` and
/// `x F R0 y`: `(c x a) R (a (F(π_a) y))`.
pub fn check_structure_map(f: &RealizableFunctor, r0: &R0Approx, budget: &Budget) -> Result<Tally> {
    let fuel = budget.fuel();
    let phi = phi_code(f)?;
    let c = structure_map_c(&phi);
    let fr0 = f.object(&r0.per, budget)?;
    let mut tally = Tally::default();
    tally.record(track(&fr0, &r0.per, &c, fuel).verdict(), "c: F R0 → R0");
    for (i, alg) in r0.family.iter().enumerate() {
        let a = &alg.structure;
        let fr = f.object(&alg.carrier, budget)?;
        let v = Verdict::catch(|| {
            let f_pi = run(&phi, &projection(a), fuel)?;
            // When both sides respect classes the diagonal decides every pair.
            let respects = track(&r0.per, &alg.carrier, &projection(a), fuel).verdict().holds()
                && track(&fr0, &fr, &f_pi, fuel).verdict().holds()
                && track(&fr0, &r0.per, &c, fuel).verdict().holds();
            let pairs: Vec<(&Code, &Code)> = if respects {
                fr0.classes().iter().flatten().map(|x| (x, x)).collect()
            } else {
                fr0.classes()
                    .iter()
                    .flat_map(|block| block.iter().flat_map(move |x| block.iter().map(move |y| (x, y))))
                    .collect()
            };
            Ok(Verdict::all(pairs.into_iter().map(|(x, y)| {
                Verdict::catch(|| {
                    let lhs = run(&run(&c, x, fuel)?, a, fuel)?;
                    let rhs = run(a, &run(&f_pi, y, fuel)?, fuel)?;
                    Ok(alg.carrier.relate(&lhs, &rhs).context(format_args!("at ({x:?}, {y:?})")))
                })
            })))
        });
        tally.record(v, format_args!("square for family[{i}]"));
    }
    Ok(tally)
}

/// `(R0, c)` as an algebra.
pub fn r0_algebra(f: &RealizableFunctor, r0: &R0Approx, budget: &Budget) -> Result<Algebra> {
    Algebra::new(f, r0.per.clone(), structure_map_c(&phi_code(f)?), budget)
}

/// For each family algebra, `π_a` is an algebra morphism from `(R0, c)` and
/// it is the only hom class `R0 → R` that is one.
pub fn check_initiality(f: &RealizableFunctor, r0: &R0Approx, budget: &Budget) -> Result<Tally> {
    let init = r0_algebra(f, r0, budget)?;
    let mut tally = Tally::default();
    for (i, alg) in r0.family.iter().enumerate() {
        let pi = projection(&alg.structure);
        let tracks = track(&r0.per, &alg.carrier, &pi, budget.fuel()).verdict();
        let is_morphism = match tracks {
            Verdict::Holds => square(&init, alg, &pi, budget)?,
            v => v,
        };
        tally.record(is_morphism.clone(), format_args!("π_a into family[{i}]"));
        if !is_morphism.holds() {
            continue;
        }
        let mediators = enumerate_algebra_morphisms(&init, alg, budget)?;
        let unique = Verdict::all(mediators.iter().map(|m| {
            crate::category::agree_on(&r0.per, &alg.carrier, m.morphism.tracker(), &pi, budget.fuel())
                .context(format_args!("[{:?}] differs from π_a", m.morphism.tracker()))
        }));
        // π_a itself may lie outside the universe; then nothing is compared.
        let unique = if mediators.is_empty() {
            Verdict::Undecided("no algebra morphism inside the universe".into())
        } else {
            unique
        };
        tally.record(unique, format_args!("uniqueness into family[{i}]"));
    }
    Ok(tally)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DinReport {
    pub equal: bool,
    pub witness: Option<String>,
}

/// Compare `R0` with the unconstrained `⋂ ((R ^ FR) ⇒ R)` over the family's
/// carriers.
pub fn din_experiment(f: &RealizableFunctor, r0: &R0Approx, budget: &Budget) -> Result<DinReport> {
    let mut parts = Vec::new();
    let mut seen: Vec<&Per> = Vec::new();
    for alg in &r0.family {
        if seen.iter().any(|p| same_relation(p, &alg.carrier).holds()) {
            continue;
        }
        seen.push(&alg.carrier);
        let fr = f.object(&alg.carrier, budget)?;
        let alg_per = exponential(&fr, &alg.carrier, budget)?;
        parts.push(exponential(&alg_per, &alg.carrier, budget)?);
    }
    let din = intersect(&parts)?;
    let (fwd, back) = (includes(&din, &r0.per), includes(&r0.per, &din));
    let witness = match (&fwd, &back) {
        (Verdict::Holds, Verdict::Holds) => None,
        (v, Verdict::Holds) | (Verdict::Holds, v) | (v, _) => v.witness().map(str::to_owned),
    };
    Ok(DinReport {
        equal: witness.is_none(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::FunctorExpr;
    use crate::kernel::{apply_all, UniverseSpec};

    fn budget() -> Budget {
        Budget::new(UniverseSpec::Terms(3), Fuel::new(2_000).unwrap()).unwrap()
    }

    fn per(classes: &[&[u64]]) -> Per {
        Per::of(classes).unwrap()
    }

    #[test]
    fn projection_evaluates_at_its_argument() {
        let fuel = Fuel::default();
        for (a, f) in [(0u64, 2u64), (7, 3), (1, 11)] {
            let (a, f) = (Code::from(a), Code::from(f));
            let lhs = apply_all(&projection(&a), &[&f], fuel).into_value();
            let rhs = apply_all(&f, &[&a], fuel).into_value();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn constant_functor_r0_is_the_constant() {
        let b = budget();
        let a = per(&[&[0], &[1]]);
        let f = RealizableFunctor::from_expr(FunctorExpr::constant(a.clone()));
        let alg = Algebra::new(&f, a.clone(), Code::I, &b).unwrap();
        let r0 = r0_approx(&f, &[alg], &b).unwrap();
        assert_eq!(r0.per.class_count(), a.class_count());
        assert!(check_structure_map(&f, &r0, &b).unwrap().verdict().holds());
        let t = check_initiality(&f, &r0, &b).unwrap();
        assert!(t.verdict().holds(), "{:?}", t.verdict());
    }

    #[test]
    fn identity_functor_r0_is_empty() {
        let b = budget();
        let f = RealizableFunctor::from_expr(FunctorExpr::Id);
        let family = [
            Algebra::new(&f, per(&[&[0]]), Code::I, &b).unwrap(),
            Algebra::new(&f, per(&[&[0], &[1]]), Code::I, &b).unwrap(),
        ];
        let r0 = r0_approx(&f, &family, &b).unwrap();
        assert!(r0.per.is_empty(), "{r0:?}");
        assert!(check_initiality(&f, &r0, &b).unwrap().verdict().holds());
    }

    #[test]
    fn structures_must_track() {
        let b = budget();
        let f = RealizableFunctor::from_expr(FunctorExpr::Id);
        // K S is constantly 1, which is not in {{0}}.
        assert!(Algebra::new(&f, per(&[&[0]]), Code::from(5), &b).is_err());
    }

    #[test]
    fn larger_families_shrink_r0() {
        let b = budget();
        let f = RealizableFunctor::from_expr(FunctorExpr::exp_from(per(&[&[0]]), FunctorExpr::Id));
        let all = enumerate_algebras(&f, &[per(&[&[0]]), per(&[&[0], &[1]])], &b).unwrap();
        assert!(all.len() >= 2);
        let small = r0_approx(&f, &all[..1], &b).unwrap();
        let large = r0_approx(&f, &all, &b).unwrap();
        assert!(!includes(&large.per, &small.per).fails());
    }
}
