//! Realizable endofunctors.
//!
//! A functor is an object map on PERs together with one uniform tracker `φ`:
//! for every morphism `[x]: R → S`, `φ·x` must track `F([x]): FR → FS`. The
//! covariant expression language ([`FunctorExpr`]) gets synthesized
//! trackers; hom functors and the Yoneda monotonization are built in
//! [`crate::yoneda`].
//!
//! [`check_realizable`] compares `φ·x` against the morphism action computed
//! directly from the functor's structure, which never consults `φ`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, Mutex};

use crate::budget::Budget;
use crate::category::{agree_on, enumerate_homs};
use crate::error::Result;
use crate::kernel::{lambda, run, stdlib, Code, Fuel, OpenTerm, Outcome, Realizer, UniverseSpec};
use crate::per::{exponential, includes, product, track, Per};
use crate::verdict::{Tally, Verdict};
use crate::yoneda::{self, StarBody};

/// Covariant functor expressions.
#[derive(Clone)]
pub enum FunctorExpr {
    Id,
    Const(Per),
    Prod(Box<FunctorExpr>, Box<FunctorExpr>),
    /// `A ⇒ F(-)` for a fixed domain `A`.
    ExpFrom(Per, Box<FunctorExpr>),
}

impl FunctorExpr {
    pub fn constant(a: Per) -> FunctorExpr {
        FunctorExpr::Const(a)
    }

    pub fn prod(f: FunctorExpr, g: FunctorExpr) -> FunctorExpr {
        FunctorExpr::Prod(Box::new(f), Box::new(g))
    }

    pub fn exp_from(a: Per, f: FunctorExpr) -> FunctorExpr {
        FunctorExpr::ExpFrom(a, Box::new(f))
    }

    pub fn depth(&self) -> usize {
        match self {
            FunctorExpr::Id | FunctorExpr::Const(_) => 0,
            FunctorExpr::Prod(f, g) => 1 + f.depth().max(g.depth()),
            FunctorExpr::ExpFrom(_, f) => 1 + f.depth(),
        }
    }
}

impl fmt::Debug for FunctorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorExpr::Id => f.write_str("id"),
            FunctorExpr::Const(a) => write!(f, "(const {a:?})"),
            FunctorExpr::Prod(l, r) => write!(f, "(prod {l:?} {r:?})"),
            FunctorExpr::ExpFrom(a, r) => write!(f, "(exp {a:?} {r:?})"),
        }
    }
}

/// The uniform tracker of a functor's morphism map: a code, or the
/// identity-preserving repair of one, which is a host-level function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tracker {
    Code(Code),
    Psi(PsiRepair),
}

impl Tracker {
    pub fn as_code(&self) -> Option<&Code> {
        match self {
            Tracker::Code(c) => Some(c),
            Tracker::Psi(_) => None,
        }
    }
}

impl Realizer for Tracker {
    fn realize(&self, arg: &Code, fuel: Fuel) -> Outcome {
        match self {
            Tracker::Code(c) => c.realize(arg, fuel),
            Tracker::Psi(p) => p.realize(arg, fuel),
        }
    }
}

/// `ψ i = i`, `ψ x = φ x` for `x ≠ i`.
///
/// Combinatory logic has no decidable test for code equality, so `ψ` cannot
/// be a code; it is the case split itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiRepair {
    phi: Code,
}

impl PsiRepair {
    pub fn phi(&self) -> &Code {
        &self.phi
    }
}

impl Realizer for PsiRepair {
    fn realize(&self, arg: &Code, fuel: Fuel) -> Outcome {
        if *arg == Code::I {
            Outcome::Converged {
                value: Code::I,
                steps: 0,
            }
        } else {
            self.phi.realize(arg, fuel)
        }
    }
}

pub fn psi_repair(phi: &Code) -> Tracker {
    Tracker::Psi(PsiRepair { phi: phi.clone() })
}

/// An object map evaluated at one PER, keeping the intermediate PERs the
/// morphism action needs.
#[derive(Clone)]
pub struct Evaluated {
    pub per: Per,
    pub(crate) parts: Vec<Evaluated>,
}

impl Evaluated {
    pub(crate) fn leaf(per: Per) -> Evaluated {
        Evaluated {
            per,
            parts: Vec::new(),
        }
    }
}

#[derive(Clone)]
pub(crate) enum Body {
    Expr(FunctorExpr),
    /// `hom(X, -)`
    Hom(Per),
    /// `F*X = nat(hom(X, -), F)`
    Star(Arc<StarBody>),
}

#[derive(Clone)]
pub struct RealizableFunctor {
    body: Body,
    phi: Tracker,
}

impl fmt::Debug for RealizableFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Body::Expr(e) => write!(f, "{e:?}"),
            Body::Hom(x) => write!(f, "hom({x:?}, -)"),
            Body::Star(s) => write!(f, "star({:?})", s.base()),
        }
    }
}

impl RealizableFunctor {
    pub fn from_expr(expr: FunctorExpr) -> RealizableFunctor {
        let phi = Tracker::Code(synthesize_tracker(&expr));
        RealizableFunctor {
            body: Body::Expr(expr),
            phi,
        }
    }

    pub(crate) fn from_body(body: Body, phi: Tracker) -> RealizableFunctor {
        RealizableFunctor { body, phi }
    }

    /// Same object map, different tracker.
    pub fn with_tracker(&self, phi: Tracker) -> RealizableFunctor {
        RealizableFunctor {
            body: self.body.clone(),
            phi,
        }
    }

    pub fn tracker(&self) -> &Tracker {
        &self.phi
    }

    pub fn expr(&self) -> Option<&FunctorExpr> {
        match &self.body {
            Body::Expr(e) => Some(e),
            _ => None,
        }
    }

    pub fn object(&self, r: &Per, budget: &Budget) -> Result<Per> {
        Ok(self.evaluate(r, budget)?.per)
    }

    pub fn evaluate(&self, r: &Per, budget: &Budget) -> Result<Evaluated> {
        match &self.body {
            Body::Expr(e) => evaluate_expr(e, r, budget),
            Body::Hom(x) => Ok(Evaluated {
                per: hom_object(x, r, budget)?,
                parts: vec![Evaluated::leaf(r.clone())],
            }),
            Body::Star(s) => yoneda::evaluate_star(s, r, budget),
        }
    }

    /// `φ·x`, a tracker of `F([x])`.
    pub fn map(&self, x: &Code, fuel: Fuel) -> Outcome {
        self.phi.realize(x, fuel)
    }

    /// Is `out` related in `FS` to `F([x])(z)`, with the action computed from
    /// the functor's structure rather than from `φ`.
    pub(crate) fn action_agrees(
        &self,
        x: &Code,
        src: &Evaluated,
        tgt: &Evaluated,
        z: &Code,
        out: &Code,
        fuel: Fuel,
    ) -> Verdict {
        match &self.body {
            Body::Expr(e) => expr_action(e, x, src, tgt, z, out, fuel),
            Body::Hom(xper) => Verdict::all(xper.carrier().iter().map(|a| {
                Verdict::catch(|| {
                    let lhs = run(out, a, fuel)?;
                    let za = run(z, a, fuel)?;
                    let rhs = run(x, &za, fuel)?;
                    Ok(tgt.parts[0].per.relate(&lhs, &rhs))
                })
            })),
            Body::Star(s) => yoneda::star_action(s, x, src, tgt, z, out, fuel),
        }
    }
}

/// Object map of an expression.
pub fn eval_object(f: &FunctorExpr, r: &Per, budget: &Budget) -> Result<Per> {
    Ok(evaluate_expr(f, r, budget)?.per)
}

type HomKey = (UniverseSpec, u64, Vec<Vec<Code>>, Vec<Vec<Code>>);

/// `hom(X, R)` for declared `X` and `R` is shared process-wide: every `F*`
/// over the same family rebuilds the same exponentials.
fn hom_object(x: &Per, r: &Per, budget: &Budget) -> Result<Per> {
    static HOMS: LazyLock<Mutex<HashMap<HomKey, Per>>> = LazyLock::new(Mutex::default);
    if !(x.is_declared() && r.is_declared()) {
        return exponential(x, r, budget);
    }
    let key = (
        budget.spec().clone(),
        budget.fuel().max_steps(),
        x.classes().to_vec(),
        r.classes().to_vec(),
    );
    if let Some(p) = HOMS.lock().expect("hom memo").get(&key) {
        return Ok(p.clone());
    }
    let p = exponential(x, r, budget)?;
    HOMS.lock().expect("hom memo").insert(key, p.clone());
    Ok(p)
}

fn evaluate_expr(f: &FunctorExpr, r: &Per, budget: &Budget) -> Result<Evaluated> {
    Ok(match f {
        FunctorExpr::Id => Evaluated::leaf(r.clone()),
        FunctorExpr::Const(a) => Evaluated::leaf(a.clone()),
        FunctorExpr::Prod(l, rr) => {
            let el = evaluate_expr(l, r, budget)?;
            let er = evaluate_expr(rr, r, budget)?;
            Evaluated {
                per: product(&el.per, &er.per, budget)?,
                parts: vec![el, er],
            }
        }
        FunctorExpr::ExpFrom(a, inner) => {
            let e = evaluate_expr(inner, r, budget)?;
            Evaluated {
                per: exponential(a, &e.per, budget)?,
                parts: vec![e],
            }
        }
    })
}

fn expr_action(
    f: &FunctorExpr,
    x: &Code,
    src: &Evaluated,
    tgt: &Evaluated,
    z: &Code,
    out: &Code,
    fuel: Fuel,
) -> Verdict {
    match f {
        FunctorExpr::Id => Verdict::catch(|| {
            let image = run(x, z, fuel)?;
            Ok(tgt.per.relate(out, &image))
        }),
        FunctorExpr::Const(a) => a.relate(out, z),
        FunctorExpr::Prod(l, r) => {
            let lib = stdlib();
            Verdict::catch(|| {
                let (z1, z2) = (run(&lib.fst, z, fuel)?, run(&lib.snd, z, fuel)?);
                let (o1, o2) = (run(&lib.fst, out, fuel)?, run(&lib.snd, out, fuel)?);
                Ok(Verdict::all([
                    expr_action(l, x, &src.parts[0], &tgt.parts[0], &z1, &o1, fuel),
                    expr_action(r, x, &src.parts[1], &tgt.parts[1], &z2, &o2, fuel),
                ]))
            })
        }
        FunctorExpr::ExpFrom(a, inner) => Verdict::all(a.carrier().iter().map(|c| {
            Verdict::catch(|| {
                let zc = run(z, c, fuel)?;
                let oc = run(out, c, fuel)?;
                Ok(expr_action(inner, x, &src.parts[0], &tgt.parts[0], &zc, &oc, fuel))
            })
        })),
    }
}

/// Uniform tracker for an expression:
/// `Id ↦ I`, `Const ↦ λx. I`,
/// `Prod(F, G) ↦ λx p. PAIR (φF x (FST p)) (φG x (SND p))`,
/// `ExpFrom(A, F) ↦ λx. B (φF x)`.
pub fn synthesize_tracker(f: &FunctorExpr) -> Code {
    let lib = stdlib();
    let v = OpenTerm::var;
    let c = OpenTerm::code;
    match f {
        FunctorExpr::Id => Code::I,
        FunctorExpr::Const(_) => lambda(&["x"], c(&Code::I)).expect("closed"),
        FunctorExpr::Prod(l, r) => {
            let (pl, pr) = (synthesize_tracker(l), synthesize_tracker(r));
            let side = |phi: &Code, proj: &Code| {
                OpenTerm::apply(c(phi), [v("x"), OpenTerm::app(c(proj), v("p"))])
            };
            let body = OpenTerm::apply(c(&lib.pair), [side(&pl, &lib.fst), side(&pr, &lib.snd)]);
            lambda(&["x", "p"], body).expect("closed")
        }
        FunctorExpr::ExpFrom(_, inner) => {
            let pi = synthesize_tracker(inner);
            let body = OpenTerm::app(c(&lib.b), OpenTerm::app(c(&pi), v("x")));
            lambda(&["x"], body).expect("closed")
        }
    }
}

/// Trackers to test at each ordered pair: one per hom class, plus `I`
/// whenever it tracks (the inclusion cases).
pub(crate) fn test_trackers(r: &Per, s: &Per, budget: &Budget) -> Result<Vec<Code>> {
    let mut codes: Vec<Code> = enumerate_homs(r, s, budget)?
        .into_iter()
        .map(|m| m.tracker().clone())
        .collect();
    if !codes.contains(&Code::I) && track(r, s, &Code::I, budget.fuel()).verdict().holds() {
        codes.push(Code::I);
    }
    Ok(codes)
}

/// Check the realizability equation and the functor laws over `lattice`:
/// for every ordered pair and every tested tracker `x`, `φ·x` tracks
/// `FR → FS` and agrees with `F([x])`; `F(id) = id`; and
/// `F(g ∘ f) = F(g) ∘ F(f)` on every composable pair of hom classes.
pub fn check_realizable(f: &RealizableFunctor, lattice: &[Per], budget: &Budget) -> Result<Tally> {
    let fuel = budget.fuel();
    let lib = stdlib();
    let evals: Vec<Evaluated> = lattice
        .iter()
        .map(|r| f.evaluate(r, budget))
        .collect::<Result<_>>()?;
    let mut homs = Vec::with_capacity(lattice.len());
    for r in lattice {
        let row: Vec<Vec<Code>> = lattice
            .iter()
            .map(|s| test_trackers(r, s, budget))
            .collect::<Result<_>>()?;
        homs.push(row);
    }
    let mut tally = Tally::default();

    for (i, e) in evals.iter().enumerate() {
        let v = Verdict::catch(|| {
            let y = run(&f.phi, &Code::I, fuel)?;
            Ok(Verdict::all([
                track(&e.per, &e.per, &y, fuel).verdict(),
                agree_on(&e.per, &e.per, &y, &Code::I, fuel),
            ]))
        });
        tally.record(v, format_args!("F(id) = id at lattice[{i}]"));
    }

    for (i, ei) in evals.iter().enumerate() {
        for (j, ej) in evals.iter().enumerate() {
            for x in &homs[i][j] {
                let v = Verdict::catch(|| {
                    let y = run(&f.phi, x, fuel)?;
                    let tracks = track(&ei.per, &ej.per, &y, fuel).verdict();
                    if !tracks.holds() {
                        return Ok(tracks);
                    }
                    Ok(Verdict::all(ei.per.carrier().iter().map(|z| {
                        Verdict::catch(|| {
                            let out = run(&y, z, fuel)?;
                            Ok(f.action_agrees(x, ei, ej, z, &out, fuel).context(format_args!("at {z:?}")))
                        })
                    })))
                });
                tally.record(v, format_args!("F([{x:?}]) on lattice[{i}] → lattice[{j}]"));
            }
        }
    }

    for (i, ei) in evals.iter().enumerate() {
        for j in 0..lattice.len() {
            for (k, ek) in evals.iter().enumerate() {
                for fx in &homs[i][j] {
                    for gx in &homs[j][k] {
                        let v = Verdict::catch(|| {
                            let lhs = run(&f.phi, &lib.comp(gx, fx), fuel)?;
                            let ff = run(&f.phi, fx, fuel)?;
                            let fg = run(&f.phi, gx, fuel)?;
                            Ok(agree_on(&ei.per, &ek.per, &lhs, &lib.comp(&fg, &ff), fuel))
                        });
                        tally.record(
                            v,
                            format_args!("F({gx:?} ∘ {fx:?}) on lattice[{i}] → [{j}] → [{k}]"),
                        );
                    }
                }
            }
        }
    }
    Ok(tally)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneReport {
    pub verdict: Verdict,
    /// Lattice indices `(i, j)` with `R_i ⊆ R_j` but `F R_i ⊄ F R_j`.
    pub witness: Option<(usize, usize)>,
    pub pairs_checked: usize,
}

/// `R ⊆ S ⇒ F R ⊆ F S` over every pair of `lattice`. Works for any object
/// map, functorial or not.
pub fn check_monotone<M>(obj_map: M, lattice: &[Per]) -> Result<MonotoneReport>
where
    M: Fn(&Per) -> Result<Per>,
{
    let images: Vec<Per> = lattice.iter().map(&obj_map).collect::<Result<_>>()?;
    let mut pairs_checked = 0;
    let mut undecided = None;
    for (i, r) in lattice.iter().enumerate() {
        for (j, s) in lattice.iter().enumerate() {
            match includes(r, s) {
                Verdict::Holds => {}
                Verdict::Fails(_) => continue,
                Verdict::Undecided(w) => {
                    undecided.get_or_insert(w);
                    continue;
                }
            }
            pairs_checked += 1;
            match includes(&images[i], &images[j]) {
                Verdict::Holds => {}
                Verdict::Fails(w) => {
                    return Ok(MonotoneReport {
                        verdict: Verdict::Fails(format!("lattice[{i}] ⊆ lattice[{j}] but {w}")),
                        witness: Some((i, j)),
                        pairs_checked,
                    })
                }
                Verdict::Undecided(w) => {
                    undecided.get_or_insert(w);
                }
            }
        }
    }
    Ok(MonotoneReport {
        verdict: undecided.map_or(Verdict::Holds, Verdict::Undecided),
        witness: None,
        pairs_checked,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRealizerRow {
    /// `φ·i` tracks the identity on `FR` extensionally.
    pub extensional: Verdict,
    /// `φ·i = i` as codes.
    pub strict: bool,
    pub phi_i: Option<Code>,
}

/// `i ∈ ⋂_R F([i]_{R→R})`: `φ·i` is extensionally the identity on each `FR`.
/// Also reports the stronger, not automatic, code equation `φ·i = i`.
pub fn check_identity_realizer(
    f: &RealizableFunctor,
    lattice: &[Per],
    budget: &Budget,
) -> Result<Vec<IdentityRealizerRow>> {
    let fuel = budget.fuel();
    let phi_i = f.map(&Code::I, fuel).into_value();
    lattice
        .iter()
        .map(|r| {
            let fr = f.object(r, budget)?;
            let extensional = match &phi_i {
                None => Verdict::Undecided("φ·i out of fuel".into()),
                Some(y) => Verdict::all([
                    track(&fr, &fr, y, fuel).verdict(),
                    agree_on(&fr, &fr, y, &Code::I, fuel),
                ]),
            };
            Ok(IdentityRealizerRow {
                extensional,
                strict: phi_i.as_ref() == Some(&Code::I),
                phi_i: phi_i.clone(),
            })
        })
        .collect()
}

/// The obligation the repaired tracker meets at `x = i` for `R ⊆ S`: `ψ·i = i`
/// must track `FR → FS`, which holds exactly when `FR ⊆ FS`.
pub fn check_psi_at_identity<M>(obj_map: M, r: &Per, s: &Per, budget: &Budget) -> Result<Verdict>
where
    M: Fn(&Per) -> Result<Per>,
{
    let (fr, fs) = (obj_map(r)?, obj_map(s)?);
    let psi_i = PsiRepair { phi: Code::I }.realize(&Code::I, budget.fuel());
    let psi_i = psi_i.into_value().expect("ψ i = i");
    Ok(track(&fr, &fs, &psi_i, budget.fuel()).verdict())
}
