//! Execute a workbench document into check reports.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::doc::{Assertion, Family, Form, FunctorRef, PerExpr, RunCmd, WorkbenchDoc};
use super::report::{CheckReport, Report};
use crate::algebra::{check_initiality, check_structure_map, din_experiment, r0_approx, Algebra};
use crate::budget::Budget;
use crate::category::{check_tracker, enumerate_homs, equal_morphisms, is_iso, Morphism};
use crate::error::{Error, Result};
use crate::fixpoint::{kleene_lfp, verify_fixmap, DEFAULT_MAX_ITER};
use crate::functor::{
    check_identity_realizer, check_monotone, check_realizable, psi_repair, RealizableFunctor, Tracker,
};
use crate::kernel::{apply, decode, eval, Code, Fuel, Outcome as Reduction, Realizer, UniverseSpec};
use crate::per::{exponential, includes, intersect, product, same_relation, Membership, Per};
use crate::verdict::{Tally, Verdict};
use crate::yoneda::{hom_functor, nat_per, star_functor, Yoneda};

/// Settings from the command line. Pinned universe and fuel override the
/// document's own `(universe ...)` and `(fuel ...)` forms.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub universe: Option<UniverseSpec>,
    pub fuel: Option<Fuel>,
    pub max_iter: usize,
    pub seed: u64,
    pub timings: bool,
    pub din_experiment: bool,
    /// Record each Kleene stage of `fixpoint` runs.
    pub trace: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            universe: None,
            fuel: None,
            max_iter: DEFAULT_MAX_ITER,
            seed: 0,
            timings: false,
            din_experiment: false,
            trace: false,
        }
    }
}

pub const DEFAULT_UNIVERSE: UniverseSpec = UniverseSpec::Terms(4);

/// Result of one check before it is named and timed.
struct Outcome {
    verdict: Verdict,
    checked: usize,
    excluded: usize,
    /// Evidence attached to a passing, non-gating record.
    note: Option<String>,
}

impl Outcome {
    fn single(verdict: Verdict) -> Outcome {
        Outcome {
            verdict,
            checked: 1,
            excluded: 0,
            note: None,
        }
    }

    fn tally(t: &Tally) -> Outcome {
        Outcome {
            verdict: t.verdict(),
            checked: t.checked,
            excluded: 0,
            note: None,
        }
    }

    fn excluding(mut self, pers: &[&Per]) -> Outcome {
        self.excluded += pers.iter().map(|p| p.excluded_by_fuel().len()).sum::<usize>();
        self
    }
}

enum Functor {
    Real(RealizableFunctor),
    Raw(Per),
}

struct Env<'a> {
    doc: &'a WorkbenchDoc,
    budget: Budget,
    opts: &'a RunOptions,
}

impl Env<'_> {
    fn per(&self, e: &PerExpr) -> Result<Per> {
        let b = &self.budget;
        match e {
            PerExpr::Named(_, p) => Ok(p.clone()),
            PerExpr::Exp(x, y) => exponential(&self.per(x)?, &self.per(y)?, b),
            PerExpr::Prod(x, y) => product(&self.per(x)?, &self.per(y)?, b),
            PerExpr::Meet(xs) => intersect(&xs.iter().map(|x| self.per(x)).collect::<Result<Vec<_>>>()?),
            PerExpr::Apply(f, r) => self.object(&self.functor(f)?, &self.per(r)?),
            PerExpr::Lfp(f) => Ok(kleene_lfp(&self.real(f)?, b, self.opts.max_iter)?.per),
            PerExpr::R0(f, fam) => {
                let f = self.real(f)?;
                Ok(r0_approx(&f, &self.algebras(&f, fam)?, b)?.per)
            }
            PerExpr::Nat(f, g, fam) => Ok(nat_per(&self.real(f)?, &self.real(g)?, &self.pers(fam), b)?.per),
        }
    }

    fn functor(&self, f: &FunctorRef) -> Result<Functor> {
        Ok(match f {
            FunctorRef::Expr(e) => Functor::Real(RealizableFunctor::from_expr(e.clone())),
            FunctorRef::Hom(x) => Functor::Real(hom_functor(&self.per(x)?)),
            FunctorRef::Star(inner, fam) => Functor::Real(star_functor(&self.real(inner)?, &self.pers(fam))),
            FunctorRef::Contra(a) => Functor::Raw(self.per(a)?),
        })
    }

    fn real(&self, f: &FunctorRef) -> Result<RealizableFunctor> {
        match self.functor(f)? {
            Functor::Real(r) => Ok(r),
            Functor::Raw(_) => Err(Error::Unsupported(
                "(contra A) is an object map without a morphism action".into(),
            )),
        }
    }

    fn object(&self, f: &Functor, r: &Per) -> Result<Per> {
        match f {
            Functor::Real(f) => f.object(r, &self.budget),
            Functor::Raw(a) => exponential(r, a, &self.budget),
        }
    }

    fn pers(&self, family: &str) -> Vec<Per> {
        match self.doc.family(family) {
            Some(Family::Pers(ps)) => ps.iter().map(|(_, p)| p.clone()).collect(),
            _ => Vec::new(),
        }
    }

    fn lattice(&self, family: &Option<String>) -> Vec<Per> {
        match family {
            Some(f) => self.pers(f),
            None => self.doc.pers.iter().map(|(_, p)| p.clone()).collect(),
        }
    }

    fn algebras(&self, f: &RealizableFunctor, family: &str) -> Result<Vec<Algebra>> {
        let Some(Family::Algebras(names)) = self.doc.family(family) else {
            return Err(Error::Unsupported(format!("`{family}` is not an algebra family")));
        };
        names
            .iter()
            .map(|n| {
                let decl = self.doc.algebra(n).expect("resolved at parse time");
                let carrier = self.doc.per(&decl.carrier).cloned().unwrap_or_else(Per::empty);
                Algebra::new(f, carrier, decl.structure.clone(), &self.budget)
            })
            .collect()
    }

    fn declared_algebra(&self, name: &str) -> Result<Algebra> {
        let decl = self.doc.algebra(name).expect("resolved at parse time");
        let f = RealizableFunctor::from_expr(self.doc.functor(&decl.functor).expect("resolved").clone());
        let carrier = self.doc.per(&decl.carrier).cloned().unwrap_or_else(Per::empty);
        Algebra::new(&f, carrier, decl.structure.clone(), &self.budget)
    }

    fn phi_code(f: &RealizableFunctor) -> Result<Code> {
        f.tracker()
            .as_code()
            .cloned()
            .ok_or_else(|| Error::Unsupported("tracker is not a code".into()))
    }

    fn assertion(&self, a: &Assertion) -> Result<Outcome> {
        let b = &self.budget;
        let fuel = b.fuel();
        Ok(match a {
            Assertion::Subper(x, y) => {
                let (x, y) = (self.per(x)?, self.per(y)?);
                Outcome::single(includes(&x, &y)).excluding(&[&x, &y])
            }
            Assertion::Equal(x, y) => {
                let (x, y) = (self.per(x)?, self.per(y)?);
                Outcome::single(same_relation(&x, &y)).excluding(&[&x, &y])
            }
            Assertion::Related(p, m, n) => {
                let p = self.per(p)?;
                Outcome::single(p.relate(m, n)).excluding(&[&p])
            }
            Assertion::Member(n, p) => {
                let p = self.per(p)?;
                let v = match p.classify(n) {
                    Membership::In(_) => Verdict::Holds,
                    Membership::Out(w) => Verdict::Fails(w),
                    Membership::Undecided(w) => Verdict::Undecided(w),
                };
                Outcome::single(v).excluding(&[&p])
            }
            Assertion::Classes(p, n) => {
                let p = self.per(p)?;
                let k = p.class_count();
                Outcome::single(Verdict::from_bool(k == *n, || format!("{k} classes"))).excluding(&[&p])
            }
            Assertion::Size(p, n) => {
                let p = self.per(p)?;
                let k = p.carrier_len();
                Outcome::single(Verdict::from_bool(k == *n, || format!("{k} codes"))).excluding(&[&p])
            }
            Assertion::Morphism(n, x, y) => Outcome::single(check_tracker(&self.per(x)?, &self.per(y)?, n, b)),
            Assertion::SameMorphism(m, n, x, y) => {
                let (x, y) = (self.per(x)?, self.per(y)?);
                let f = Morphism::new(x.clone(), y.clone(), m.clone(), b)?;
                let g = Morphism::new(x, y, n.clone(), b)?;
                Outcome::single(equal_morphisms(&f, &g))
            }
            Assertion::Iso(n, x, y) => {
                let f = Morphism::new(self.per(x)?, self.per(y)?, n.clone(), b)?;
                Outcome::single(match is_iso(&f, b) {
                    Some(_) => Verdict::Holds,
                    None => Verdict::Fails(format!("no inverse of {n:?} in the universe")),
                })
            }
            Assertion::Homs(x, y, n) => {
                let k = enumerate_homs(&self.per(x)?, &self.per(y)?, b)?.len();
                Outcome::single(Verdict::from_bool(k == *n, || format!("{k} hom classes")))
            }
            Assertion::Encode(t, n) => {
                let got = t.nat();
                let back = decode(n);
                Outcome::single(Verdict::all([
                    Verdict::from_bool(got == *n, || format!("encodes to {got}")),
                    Verdict::from_bool(back == *t.term(), || format!("{n} decodes to {back}")),
                ]))
            }
            Assertion::Reduces(x, y) => {
                let nx = eval(x, fuel);
                let ny = eval(y, fuel);
                Outcome::single(match (nx, ny) {
                    (Reduction::Converged { value: vx, .. }, Reduction::Converged { value: vy, .. }) => {
                        Verdict::from_bool(vx == vy, || format!("normal forms {vx:?} and {vy:?} differ"))
                    }
                    _ => Verdict::Undecided("out of fuel".into()),
                })
            }
            Assertion::Diverges(x) => Outcome::single(match eval(x, fuel) {
                Reduction::OutOfFuel => Verdict::Holds,
                Reduction::Converged { value, .. } => Verdict::Fails(format!("converges to {value:?}")),
            }),
            Assertion::Monotone(f, fam) => {
                let f = self.functor(f)?;
                let report = check_monotone(|x| self.object(&f, x), &self.lattice(fam))?;
                Outcome {
                    verdict: report.verdict,
                    checked: report.pairs_checked,
                    excluded: 0,
                    note: None,
                }
            }
            Assertion::Realizable(f, fam) => Outcome::tally(&check_realizable(&self.real(f)?, &self.lattice(fam), b)?),
            Assertion::IdentityRealizer(f, fam) => {
                let rows = check_identity_realizer(&self.real(f)?, &self.lattice(fam), b)?;
                Outcome {
                    checked: rows.len(),
                    verdict: Verdict::all(
                        rows.into_iter()
                            .enumerate()
                            .map(|(i, r)| r.extensional.context(format_args!("lattice[{i}]"))),
                    ),
                    excluded: 0,
                    note: None,
                }
            }
            Assertion::StrictIdentity(f) => {
                let f = self.real(f)?;
                Outcome::single(match f.map(&Code::I, fuel).into_value() {
                    None => Verdict::Undecided("φ·i out of fuel".into()),
                    Some(y) => Verdict::from_bool(y == Code::I, || format!("φ·i = {y:?}")),
                })
            }
            Assertion::Psi(f, fam) => {
                let f = self.real(f)?;
                let repaired = f.with_tracker(psi_repair(&Self::phi_code(&f)?));
                Outcome::tally(&check_realizable(&repaired, &self.lattice(fam), b)?)
            }
            Assertion::Fixpoint(f, p) => {
                let f = self.real(f)?;
                let p = self.per(p)?;
                let lfp = kleene_lfp(&f, b, self.opts.max_iter)?;
                Outcome {
                    verdict: Verdict::all([
                        same_relation(&lfp.per, &p).context("least fixpoint"),
                        verify_fixmap(&f, &p, b)?,
                    ]),
                    checked: lfp.iterations,
                    excluded: 0,
                    note: None,
                }
            }
            Assertion::Fixmap(f, p) => Outcome::single(verify_fixmap(&self.real(f)?, &self.per(p)?, b)?),
            Assertion::Iterations(f, n) => {
                let lfp = kleene_lfp(&self.real(f)?, b, self.opts.max_iter)?;
                let k = lfp.iterations;
                Outcome::single(Verdict::from_bool(k == *n, || format!("{k} iterations")))
            }
            Assertion::Algebra(name) => Outcome::single(match self.declared_algebra(name) {
                Ok(_) => Verdict::Holds,
                Err(e) => Verdict::Fails(e.to_string()),
            }),
            Assertion::Initial(f, fam) => {
                let f = self.real(f)?;
                let r0 = r0_approx(&f, &self.algebras(&f, fam)?, b)?;
                let mut t = check_structure_map(&f, &r0, b)?;
                t.merge(check_initiality(&f, &r0, b)?);
                let mut o = Outcome::tally(&t);
                o.excluded = r0.excluded_by_fuel;
                o
            }
            Assertion::Yoneda(f, fam, x) => {
                let rep = Yoneda::new(&self.real(f)?, &self.pers(fam))?.iso(&self.per(x)?, b)?;
                Outcome {
                    verdict: rep.verdict(),
                    checked: 4,
                    excluded: 0,
                    note: None,
                }
            }
            Assertion::Not(inner) => {
                let o = self.assertion(inner).unwrap_or_else(|e| Outcome::single(Verdict::Fails(e.to_string())));
                Outcome {
                    verdict: o.verdict.negate(),
                    ..o
                }
            }
        })
    }
}

struct Runner<'a> {
    env: Env<'a>,
    report: Report,
    stamp: Option<Budget>,
}

impl<'a> Runner<'a> {
    fn check(&mut self, name: String, run: impl FnOnce(&Env) -> Result<Outcome>) {
        let start = Instant::now();
        let o = run(&self.env).unwrap_or_else(|e| Outcome::single(Verdict::Fails(e.to_string())));
        let ms = if self.env.opts.timings {
            start.elapsed().as_millis() as u64
        } else {
            0
        };
        let stamp = self.stamp.get_or_insert_with(|| self.env.budget.clone());
        let name = if *stamp == self.env.budget {
            name
        } else {
            format!("{name} [{}]", self.env.budget)
        };
        self.report.checks.push(CheckReport::new(name, o.verdict, o.note, o.checked, o.excluded, ms));
    }

    fn run_fixpoint(&mut self, name: &str) {
        let expr = self.env.doc.functor(name).expect("resolved").clone();
        let f = RealizableFunctor::from_expr(expr);
        let lfp = kleene_lfp(&f, &self.env.budget, self.env.opts.max_iter);
        match lfp {
            Ok(r) => {
                let summary = format!(
                    "fixpoint {name}: {} iterations, {} classes over {} codes",
                    r.iterations,
                    r.per.class_count(),
                    r.per.carrier_len()
                );
                let iterations = r.iterations;
                if self.env.opts.trace {
                    for (k, x) in r.trace.iter().enumerate() {
                        let stage = format!(
                            "fixpoint {name}: X_{k} has {} classes over {} codes",
                            x.class_count(),
                            x.carrier_len()
                        );
                        self.check(stage, |_| Ok(Outcome::single(Verdict::Holds)));
                    }
                }
                self.check(summary, |_| {
                    Ok(Outcome {
                        verdict: Verdict::Holds,
                        checked: iterations,
                        excluded: r.per.excluded_by_fuel().len(),
                        note: None,
                    })
                });
                self.check(format!("fixmap {name}"), |env| {
                    Ok(Outcome::single(verify_fixmap(&f, &r.per, &env.budget)?))
                });
            }
            Err(e) => self.check(format!("fixpoint {name}"), |_| Err(e)),
        }
    }

    fn run_initial(&mut self, functor: &str, family: &str) {
        let f = RealizableFunctor::from_expr(self.env.doc.functor(functor).expect("resolved").clone());
        let base = format!("initial-algebra {functor} {family}");
        let r0 = self
            .env
            .algebras(&f, family)
            .and_then(|algs| r0_approx(&f, &algs, &self.env.budget));
        let r0 = match r0 {
            Ok(r0) => r0,
            Err(e) => return self.check(base, |_| Err(e)),
        };
        let summary = format!(
            "{base}: R0 has {} classes over {} codes",
            r0.per.class_count(),
            r0.per.carrier_len()
        );
        let excluded = r0.excluded_by_fuel;
        self.check(summary, |_| {
            Ok(Outcome {
                verdict: Verdict::Holds,
                checked: 1,
                excluded,
                note: None,
            })
        });
        self.check(format!("{base}: structure map"), |env| {
            Ok(Outcome::tally(&check_structure_map(&f, &r0, &env.budget)?))
        });
        self.check(format!("{base}: initiality"), |env| {
            Ok(Outcome::tally(&check_initiality(&f, &r0, &env.budget)?))
        });
        if self.env.opts.din_experiment {
            let din = din_experiment(&f, &r0, &self.env.budget);
            let name = match &din {
                Ok(d) if d.equal => format!("{base}: din-experiment (recorded, non-gating): equal"),
                Ok(_) => format!("{base}: din-experiment (recorded, non-gating): different"),
                Err(_) => format!("{base}: din-experiment"),
            };
            self.check(name, |_| {
                let d = din?;
                Ok(Outcome {
                    note: d.witness,
                    ..Outcome::single(Verdict::Holds)
                })
            });
        }
    }

    fn run_monotonize(&mut self, functor: &str, family: &str) {
        let f = RealizableFunctor::from_expr(self.env.doc.functor(functor).expect("resolved").clone());
        let fam = self.env.pers(family);
        let yoneda = Yoneda::new(&f, &fam).expect("expression functors have code trackers");
        let star = yoneda.star();
        let names: Vec<String> = match self.env.doc.family(family) {
            Some(Family::Pers(ps)) => ps.iter().map(|(n, _)| n.clone()).collect(),
            _ => Vec::new(),
        };
        for (label, g) in [(functor.to_owned(), &f), (format!("{functor}*"), star)] {
            self.check(format!("monotonize {functor} {family}: {label} monotone"), |env| {
                let r = check_monotone(|x| g.object(x, &env.budget), &fam)?;
                Ok(Outcome {
                    verdict: r.verdict,
                    checked: r.pairs_checked,
                    excluded: 0,
                    note: None,
                })
            });
        }
        for (i, x) in fam.iter().enumerate() {
            self.check(format!("monotonize {functor} {family}: iso at {}", names[i]), |env| {
                let rep = yoneda.iso(x, &env.budget)?;
                Ok(Outcome {
                    verdict: rep.verdict(),
                    checked: 4,
                    excluded: 0,
                    note: None,
                })
            });
        }
        for (i, x) in fam.iter().enumerate() {
            for (j, y) in fam.iter().enumerate() {
                self.check(
                    format!("monotonize {functor} {family}: naturality {} → {}", names[i], names[j]),
                    |env| Ok(Outcome::single(yoneda.natural(x, y, &env.budget)?)),
                );
            }
        }
    }

    fn run_check_all(&mut self) {
        let doc = self.env.doc;
        let lattice: Vec<Per> = doc.pers.iter().map(|(_, p)| p.clone()).collect();
        for (name, expr) in &doc.functors {
            let f = RealizableFunctor::from_expr(expr.clone());
            self.check(format!("check-all {name}: realizable"), |env| {
                Ok(Outcome::tally(&check_realizable(&f, &lattice, &env.budget)?))
            });
            let mut monotone = false;
            self.check(format!("check-all {name}: monotone"), |env| {
                let r = check_monotone(|x| f.object(x, &env.budget), &lattice)?;
                monotone = r.verdict.holds();
                Ok(Outcome {
                    verdict: r.verdict,
                    checked: r.pairs_checked,
                    excluded: 0,
                    note: None,
                })
            });
            self.check(format!("check-all {name}: identity realizer"), |env| {
                let rows = check_identity_realizer(&f, &lattice, &env.budget)?;
                Ok(Outcome {
                    checked: rows.len(),
                    verdict: Verdict::all(rows.into_iter().map(|r| r.extensional)),
                    excluded: 0,
                    note: None,
                })
            });
            self.check(format!("check-all {name}: psi agrees with phi off i (sampled)"), |env| {
                let phi = Env::phi_code(&f)?;
                let psi = psi_repair(&phi);
                Ok(sampled_psi(&psi, &phi, &env.budget, env.opts.seed))
            });
            if monotone {
                self.check(format!("check-all {name}: psi realizable"), |env| {
                    let psi = f.with_tracker(psi_repair(&Env::phi_code(&f)?));
                    Ok(Outcome::tally(&check_realizable(&psi, &lattice, &env.budget)?))
                });
                self.run_fixpoint(name);
            }
        }
        for alg in &doc.algebras {
            let name = alg.name.clone();
            self.check(format!("check-all algebra {name}"), |env| {
                Ok(Outcome::single(match env.declared_algebra(&name) {
                    Ok(_) => Verdict::Holds,
                    Err(e) => Verdict::Fails(e.to_string()),
                }))
            });
        }
        for (fam, family) in &doc.families {
            let Family::Algebras(names) = family else { continue };
            let functors: Vec<&str> = names
                .iter()
                .map(|n| doc.algebra(n).expect("resolved").functor.as_str())
                .collect();
            if functors.iter().all(|f| *f == functors[0]) {
                self.run_initial(functors[0], fam);
            }
        }
    }
}

const PSI_SAMPLES: usize = 50;

fn sampled_psi(psi: &Tracker, phi: &Code, budget: &Budget, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<&Code> = budget.universe().iter().filter(|c| **c != Code::I).collect();
    let fuel = budget.fuel();
    let mut checks = Vec::with_capacity(PSI_SAMPLES);
    if let Ok(i) = psi.realize(&Code::I, fuel).into_value().ok_or(()) {
        checks.push(Verdict::from_bool(i == Code::I, || format!("ψ·i = {i:?}")));
    }
    for _ in 0..PSI_SAMPLES {
        let Some(x) = pool.choose(&mut rng) else { break };
        let a = psi.realize(x, fuel);
        let b = apply(phi, x, fuel);
        checks.push(Verdict::from_bool(a == b, || format!("ψ·{x:?} ≠ φ·{x:?}")));
    }
    Outcome {
        checked: checks.len(),
        verdict: Verdict::all(checks),
        excluded: 0,
        note: None,
    }
}

/// Execute every form in order.
pub fn run_checks(doc: &WorkbenchDoc, opts: &RunOptions) -> Result<Report> {
    let mut universe = opts.universe.clone().unwrap_or(DEFAULT_UNIVERSE);
    let mut fuel = opts.fuel.unwrap_or_default();
    let budget = Budget::new(universe.clone(), fuel)?;
    let mut runner = Runner {
        env: Env { doc, budget, opts },
        report: Report::default(),
        stamp: None,
    };
    for (form, _, text) in &doc.forms {
        match form {
            Form::Universe(u) => {
                if opts.universe.is_none() && *u != universe {
                    universe = u.clone();
                    runner.env.budget = Budget::new(universe.clone(), fuel)?;
                }
            }
            Form::Fuel(f) => {
                if opts.fuel.is_none() {
                    fuel = *f;
                    runner.env.budget = runner.env.budget.with_fuel(fuel);
                }
            }
            Form::Assert(a) => {
                let name = text.clone();
                runner.check(name, |env| env.assertion(a));
            }
            Form::Run(RunCmd::Fixpoint(f)) => runner.run_fixpoint(f),
            Form::Run(RunCmd::InitialAlgebra(f, fam)) => runner.run_initial(f, fam),
            Form::Run(RunCmd::Monotonize(f, fam)) => runner.run_monotonize(f, fam),
            Form::Run(RunCmd::CheckAll) => runner.run_check_all(),
        }
    }
    let stamp = runner.stamp.unwrap_or(runner.env.budget);
    runner.report.set_budget(&stamp);
    Ok(runner.report)
}

/// The subcommand entry points share the document's budget handling but run
/// a single construction after it.
pub fn run_command(doc: &WorkbenchDoc, cmd: &RunCmd, opts: &RunOptions) -> Result<Report> {
    let mut doc = doc.clone();
    doc.forms.retain(|(f, _, _)| matches!(f, Form::Universe(_) | Form::Fuel(_)));
    let text = match cmd {
        RunCmd::Fixpoint(f) => format!("(run fixpoint {f})"),
        RunCmd::InitialAlgebra(f, fam) => format!("(run initial-algebra {f} {fam})"),
        RunCmd::Monotonize(f, fam) => format!("(run monotonize {f} {fam})"),
        RunCmd::CheckAll => "(run check-all)".into(),
    };
    doc.forms.push((Form::Run(cmd.clone()), Default::default(), text));
    run_checks(&doc, opts)
}
