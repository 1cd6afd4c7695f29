//! Natural transformations, hom functors and the Yoneda monotonization.
//!
//! `F*X = nat(hom(X, -), F)` is monotone in `X` for any realizable `F`, and
//! the Yoneda maps make it isomorphic to `F`. Naturality and the components
//! range over a finite family of PERs.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::budget::Budget;
use crate::category::{agree_on, agree_on_classes, check_tracker, enumerate_homs};
use crate::error::{Error, Result};
use crate::functor::{Body, Evaluated, RealizableFunctor, Tracker};
use crate::kernel::{lambda, run, stdlib, Code, Fuel, OpenTerm, UniverseSpec};
use crate::per::{exponential, track, Classifier, Membership, Per, Sig, Track};
use crate::verdict::Verdict;

/// `nat(F, G)` restricted to a family.
#[derive(Clone)]
pub struct NatPer {
    pub per: Per,
    /// `F R` and `G R` for each family member `R`.
    components: Vec<Component>,
    budget: Budget,
}

#[derive(Clone)]
struct Component {
    f_obj: Evaluated,
    g_obj: Evaluated,
    /// `G R ^ F R`, enumerated on demand; membership goes through `track`.
    exp: OnceLock<Per>,
}

impl Component {
    fn exp(&self, budget: &Budget) -> Result<&Per> {
        if let Some(p) = self.exp.get() {
            return Ok(p);
        }
        let p = exponential(&self.f_obj.per, &self.g_obj.per, budget)?;
        Ok(self.exp.get_or_init(|| p))
    }
}

impl NatPer {
    /// `G R ^ F R` for the `i`-th family member.
    pub fn component(&self, i: usize) -> Result<&Per> {
        self.components[i].exp(&self.budget)
    }
}

struct Square {
    src: usize,
    tgt: usize,
    f_map: Code,
    g_map: Code,
    hom: Code,
    /// `F(m)` and `G(m)` both track, so for a tracking `e` both sides of the
    /// square respect classes and representatives decide it.
    by_class: bool,
}

struct NatClassifier {
    components: Vec<Component>,
    squares: Vec<Square>,
    fuel: Fuel,
}

impl NatClassifier {
    fn natural_at(&self, sq: &Square, e: &Code) -> Verdict {
        let fr = &self.components[sq.src].f_obj.per;
        let gs = &self.components[sq.tgt].g_obj.per;
        let fuel = self.fuel;
        let points: Vec<Code> = if sq.by_class {
            fr.representatives().cloned().collect()
        } else {
            fr.carrier()
        };
        Verdict::all(points.iter().map(|a| {
            Verdict::catch(|| {
                let lhs = run(&sq.g_map, &run(e, a, fuel)?, fuel)?;
                let rhs = run(e, &run(&sq.f_map, a, fuel)?, fuel)?;
                Ok(gs.relate(&lhs, &rhs).context(format_args!(
                    "naturality at [{:?}]: family[{}] → family[{}], {a:?}",
                    sq.hom, sq.src, sq.tgt
                )))
            })
        }))
    }
}

impl Classifier for NatClassifier {
    fn classify(&self, e: &Code) -> Membership {
        let mut sigs = Vec::with_capacity(self.components.len());
        for c in &self.components {
            match track(&c.f_obj.per, &c.g_obj.per, e, self.fuel) {
                Track::Tracks(s) => sigs.push(s),
                Track::Fails(w) => return Membership::Out(w),
                Track::Undecided(w) => return Membership::Undecided(w),
            }
        }
        for sq in &self.squares {
            match self.natural_at(sq, e) {
                Verdict::Holds => {}
                Verdict::Fails(w) => return Membership::Out(w),
                Verdict::Undecided(w) => return Membership::Undecided(w),
            }
        }
        Membership::In(Sig::tuple(sigs))
    }
}

/// Uniform realizers `e` of a natural transformation `F → G`: `e` tracks
/// `FR → GR` for each `R` in `family` and commutes with every hom class
/// between family members. Two realizers are related when all their
/// components are.
pub fn nat_per(
    f: &RealizableFunctor,
    g: &RealizableFunctor,
    family: &[Per],
    budget: &Budget,
) -> Result<NatPer> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let fuel = budget.fuel();
    let components: Vec<Component> = family
        .iter()
        .map(|r| {
            Ok(Component {
                f_obj: f.evaluate(r, budget)?,
                g_obj: g.evaluate(r, budget)?,
                exp: OnceLock::new(),
            })
        })
        .collect::<Result<_>>()?;
    let mut squares = Vec::new();
    for (i, r) in family.iter().enumerate() {
        for (j, s) in family.iter().enumerate() {
            for m in enumerate_homs(r, s, budget)? {
                let hom = m.tracker().clone();
                let f_map = f.map(&hom, fuel).into_value();
                let g_map = g.map(&hom, fuel).into_value();
                let (Some(f_map), Some(g_map)) = (f_map, g_map) else {
                    return Err(Error::Unsupported(format!(
                        "functor tracker at {hom:?} out of fuel"
                    )));
                };
                let by_class = track(&components[i].f_obj.per, &components[j].f_obj.per, &f_map, fuel)
                    .verdict()
                    .holds()
                    && track(&components[i].g_obj.per, &components[j].g_obj.per, &g_map, fuel)
                        .verdict()
                        .holds();
                squares.push(Square {
                    src: i,
                    tgt: j,
                    f_map,
                    g_map,
                    hom,
                    by_class,
                });
            }
        }
    }
    let classifier = NatClassifier {
        components: components.clone(),
        squares,
        fuel,
    };
    // Members lie in every component's exponential, so the first one
    // supplies the candidates.
    let first = components[0].exp(budget)?;
    let mut members = Vec::new();
    let mut excluded = first.excluded_by_fuel().to_vec();
    for e in first.carrier() {
        match classifier.classify(&e) {
            Membership::In(sig) => members.push((e, sig)),
            Membership::Out(_) => {}
            Membership::Undecided(_) => excluded.push(e),
        }
    }
    let per = Per::from_classified(members, Some(Arc::new(classifier)), Some(budget.clone()), excluded);
    Ok(NatPer {
        per,
        components,
        budget: budget.clone(),
    })
}

/// `hom(X, -)`, tracked by `B`: `[m] ↦ [m ∘ -]`.
pub fn hom_functor(x: &Per) -> RealizableFunctor {
    RealizableFunctor::from_body(Body::Hom(x.clone()), Tracker::Code(stdlib().b.clone()))
}

/// `F*X` depends on `X` only through its enumerated classes.
type StarKey = (UniverseSpec, u64, Vec<Vec<Code>>);

pub(crate) struct StarBody {
    base: RealizableFunctor,
    family: Vec<Per>,
    objects: Mutex<HashMap<StarKey, Evaluated>>,
}

impl StarBody {
    pub(crate) fn base(&self) -> &RealizableFunctor {
        &self.base
    }
}

/// `λn e g. e (B g n)`: the action of `F*` on `[n]: X → Y` precomposes
/// with `n`.
pub fn star_tracker() -> Code {
    let v = OpenTerm::var;
    let b = OpenTerm::code(&stdlib().b);
    let body = OpenTerm::app(v("e"), OpenTerm::apply(b, [v("g"), v("n")]));
    lambda(&["n", "e", "g"], body).expect("closed")
}

/// `F*X = nat(hom(X, -), F)` over `family`.
pub fn star_functor(f: &RealizableFunctor, family: &[Per]) -> RealizableFunctor {
    let body = StarBody {
        base: f.clone(),
        family: family.to_vec(),
        objects: Mutex::default(),
    };
    RealizableFunctor::from_body(Body::Star(Arc::new(body)), Tracker::Code(star_tracker()))
}

pub(crate) fn evaluate_star(s: &StarBody, x: &Per, budget: &Budget) -> Result<Evaluated> {
    let key = (budget.spec().clone(), budget.fuel().max_steps(), x.classes().to_vec());
    if let Some(e) = s.objects.lock().expect("star memo").get(&key) {
        return Ok(e.clone());
    }
    let nat = nat_per(&hom_functor(x), &s.base, &s.family, budget)?;
    // After `X`, one part per family member: `hom(X, R)` over `F R`.
    let mut parts = vec![Evaluated::leaf(x.clone())];
    parts.extend(nat.components.into_iter().map(|c| Evaluated {
        per: c.f_obj.per,
        parts: vec![c.g_obj],
    }));
    let e = Evaluated { per: nat.per, parts };
    s.objects.lock().expect("star memo").insert(key, e.clone());
    Ok(e)
}

/// `out ≈ λg. z (g ∘ x)` in `F*Y`, componentwise.
pub(crate) fn star_action(
    _s: &StarBody,
    x: &Code,
    _src: &Evaluated,
    tgt: &Evaluated,
    z: &Code,
    out: &Code,
    fuel: Fuel,
) -> Verdict {
    let lib = stdlib();
    Verdict::all(tgt.parts[1..].iter().enumerate().map(|(i, comp)| {
        let (hom_y, fr) = (&comp.per, &comp.parts[0].per);
        Verdict::all(hom_y.carrier().iter().map(|g| {
            Verdict::catch(|| {
                let lhs = run(out, g, fuel)?;
                let rhs = run(z, &lib.comp(g, x), fuel)?;
                Ok(fr.relate(&lhs, &rhs).context(format_args!("component {i}, at {g:?}")))
            })
        }))
    }))
}

/// `λx g. φ g x`: `FX → F*X`.
pub fn yoneda_forward(phi: &Code) -> Code {
    let v = OpenTerm::var;
    let body = OpenTerm::apply(OpenTerm::code(phi), [v("g"), v("x")]);
    lambda(&["x", "g"], body).expect("closed")
}

/// `λe. e i`: `F*X → FX`.
pub fn yoneda_back() -> Code {
    lambda(&["e"], OpenTerm::app(OpenTerm::var("e"), OpenTerm::code(&Code::I))).expect("closed")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YonedaReport {
    pub forward_tracks: Verdict,
    pub back_tracks: Verdict,
    /// `back ∘ forward = id` on `FX`.
    pub back_forward: Verdict,
    /// `forward ∘ back = id` on `F*X`.
    pub forward_back: Verdict,
}

impl YonedaReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::all([
            self.forward_tracks.clone().context("forward"),
            self.back_tracks.clone().context("back"),
            self.back_forward.clone().context("back ∘ forward"),
            self.forward_back.clone().context("forward ∘ back"),
        ])
    }
}

fn code_tracker(f: &RealizableFunctor) -> Result<Code> {
    f.tracker()
        .as_code()
        .cloned()
        .ok_or_else(|| Error::Unsupported("Yoneda maps need a code tracker".into()))
}

/// `F` together with `F*` over a fixed family. Objects of `F*` are cached,
/// so build one of these per `(F, family)` and reuse it across objects.
pub struct Yoneda {
    f: RealizableFunctor,
    phi: Code,
    star: RealizableFunctor,
}

impl Yoneda {
    pub fn new(f: &RealizableFunctor, family: &[Per]) -> Result<Yoneda> {
        Ok(Yoneda {
            phi: code_tracker(f)?,
            f: f.clone(),
            star: star_functor(f, family),
        })
    }

    pub fn star(&self) -> &RealizableFunctor {
        &self.star
    }

    /// The isomorphism `FX ≅ F*X` at one object.
    pub fn iso(&self, x: &Per, budget: &Budget) -> Result<YonedaReport> {
        let fuel = budget.fuel();
        let fwd = yoneda_forward(&self.phi);
        let back = yoneda_back();
        let fx = self.f.object(x, budget)?;
        let star = self.star.object(x, budget)?;
        let lib = stdlib();
        let forward_tracks = check_tracker(&fx, &star, &fwd, budget);
        let back_tracks = check_tracker(&star, &fx, &back, budget);
        // With both directions tracking, the round trips respect classes.
        let agree = if forward_tracks.holds() && back_tracks.holds() {
            agree_on_classes
        } else {
            agree_on
        };
        Ok(YonedaReport {
            back_forward: agree(&fx, &fx, &lib.comp(&back, &fwd), &Code::I, fuel),
            forward_back: agree(&star, &star, &lib.comp(&fwd, &back), &Code::I, fuel),
            forward_tracks,
            back_tracks,
        })
    }

    /// Naturality of the forward map in `X`: for `[n]: X → Y`,
    /// `F*(n) ∘ fwd_X = fwd_Y ∘ F(n)` on `FX → F*Y`.
    pub fn natural(&self, x: &Per, y: &Per, budget: &Budget) -> Result<Verdict> {
        let fuel = budget.fuel();
        let lib = stdlib();
        let fwd = yoneda_forward(&self.phi);
        let fx = self.f.object(x, budget)?;
        let star_y = self.star.object(y, budget)?;
        let mut checks = Vec::new();
        for n in enumerate_homs(x, y, budget)? {
            let n = n.tracker();
            let v = Verdict::catch(|| {
                let star_n = run(self.star.tracker(), n, fuel)?;
                let f_n = run(&self.phi, n, fuel)?;
                let lhs = lib.comp(&star_n, &fwd);
                let rhs = lib.comp(&fwd, &f_n);
                Ok(agree_on(&fx, &star_y, &lhs, &rhs, fuel).context(format_args!("at [{n:?}]")))
            });
            checks.push(v);
        }
        Ok(Verdict::all(checks))
    }
}
