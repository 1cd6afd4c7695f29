//! Acceptance suite at the default budget: terms of size at most 4, fuel
//! 10^4, over the standard lattice. Prints one line per criterion and exits
//! non-zero when any of them fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::rc::Rc;
use std::time::Instant;

use perlab::algebra::{
    check_initiality, check_structure_map, din_experiment, enumerate_algebra_morphisms, projection, r0_approx,
    Algebra,
};
use perlab::category::agree_on;
use perlab::fixpoint::{all_pers, brute_lfp, kleene_lfp, verify_fixmap, DEFAULT_MAX_ITER};
use perlab::functor::{check_monotone, check_psi_at_identity, check_realizable, psi_repair, FunctorExpr, RealizableFunctor};
use perlab::kernel::{apply, apply_all, decode, encode, stdlib, Code, Fuel, Shape, Term, UniverseSpec};
use perlab::per::track;
use perlab::verdict::{Tally, Verdict};
use perlab::yoneda::{hom_functor, Yoneda};
use perlab::{exponential, includes, same_relation, Budget, Nat, Per};

type Outcome = Result<String, String>;

fn budget() -> Budget {
    Budget::new(UniverseSpec::Terms(4), Fuel::new(10_000).unwrap()).unwrap()
}

fn per(classes: &[&[u64]]) -> Per {
    Per::of(classes).unwrap()
}

fn lattice() -> Vec<Per> {
    vec![
        Per::empty(),
        per(&[&[0]]),
        per(&[&[1]]),
        per(&[&[0], &[1]]),
        per(&[&[0, 1]]),
        per(&[&[0, 1], &[2, 3]]),
    ]
}

fn suite() -> Vec<(&'static str, FunctorExpr)> {
    use FunctorExpr::Id;
    let bit = per(&[&[0], &[1]]);
    let z = per(&[&[0]]);
    vec![
        ("id", Id),
        ("const bit", FunctorExpr::constant(bit.clone())),
        ("const blocks", FunctorExpr::constant(per(&[&[0, 1], &[2, 3]]))),
        ("id × id", FunctorExpr::prod(Id, Id)),
        ("id × const z", FunctorExpr::prod(Id, FunctorExpr::constant(z.clone()))),
        ("z ⇒ id", FunctorExpr::exp_from(z.clone(), Id)),
        ("z ⇒ (id × id)", FunctorExpr::exp_from(z.clone(), FunctorExpr::prod(Id, Id))),
        ("(z ⇒ id) × const bit", FunctorExpr::prod(FunctorExpr::exp_from(z, Id), FunctorExpr::constant(bit))),
    ]
}

fn require(v: Verdict, what: impl std::fmt::Display) -> Result<(), String> {
    match v {
        Verdict::Holds => Ok(()),
        other => Err(format!("{what}: {other}")),
    }
}

fn require_tally(t: &Tally, what: impl std::fmt::Display) -> Result<(), String> {
    require(t.verdict(), what)
}

// ---- criterion 1 ------------------------------------------------------------

/// Combinator trees for the oracle, independent of the library's terms.
#[derive(Clone, Debug, PartialEq, Eq)]
enum T {
    K,
    S,
    I,
    A(Rc<T>, Rc<T>),
}

fn app(f: T, a: T) -> T {
    T::A(Rc::new(f), Rc::new(a))
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Inverse of `(x, y) ↦ (x+y)(x+y+1)/2 + y` by the closed form.
fn unpair(z: u64) -> (u64, u64) {
    let w = (isqrt(8 * z + 1) - 1) / 2;
    let y = z - w * (w + 1) / 2;
    (w - y, y)
}

fn oracle_decode(n: u64) -> T {
    match n {
        0 => T::K,
        1 => T::S,
        2 => T::I,
        _ => {
            let (x, y) = unpair(n - 3);
            app(oracle_decode(x), oracle_decode(y))
        }
    }
}

fn from_term(t: &Term) -> T {
    match t.shape() {
        Shape::K => T::K,
        Shape::S => T::S,
        Shape::I => T::I,
        Shape::App(l, r) => app(from_term(l), from_term(r)),
    }
}

/// Normal-order normalization: contract the head redex until the head is
/// stuck, then normalize the arguments left to right.
fn oracle_nf(t: &T, fuel: &mut u64) -> Option<T> {
    let mut head = t.clone();
    let mut args: Vec<T> = Vec::new();
    loop {
        match head {
            T::A(l, r) => {
                args.push((*r).clone());
                head = (*l).clone();
            }
            T::I if !args.is_empty() => {
                *fuel = fuel.checked_sub(1)?;
                head = args.pop().unwrap();
            }
            T::K if args.len() >= 2 => {
                *fuel = fuel.checked_sub(1)?;
                let x = args.pop().unwrap();
                args.pop();
                head = x;
            }
            T::S if args.len() >= 3 => {
                *fuel = fuel.checked_sub(1)?;
                let (x, y, z) = (args.pop().unwrap(), args.pop().unwrap(), args.pop().unwrap());
                args.push(app(y, z.clone()));
                args.push(z);
                head = x;
            }
            stuck => {
                let mut out = stuck;
                while let Some(a) = args.pop() {
                    out = app(out, oracle_nf(&a, fuel)?);
                }
                return Some(out);
            }
        }
    }
}

fn nf(t: T) -> Option<T> {
    oracle_nf(&t, &mut 10_000)
}

#[derive(Default)]
struct LawCount {
    instances: u64,
    excluded: u64,
    mismatches: Vec<String>,
}

impl LawCount {
    fn merge(&mut self, o: LawCount) {
        self.instances += o.instances;
        self.excluded += o.excluded;
        self.mismatches.extend(o.mismatches);
    }

    fn compare(&mut self, law: &str, lhs: Option<Code>, rhs: impl FnOnce() -> Option<T>, args: &[u64]) {
        let Some(lhs) = lhs else {
            self.excluded += 1;
            return;
        };
        let Some(rhs) = rhs() else {
            self.excluded += 1;
            return;
        };
        self.instances += 1;
        if from_term(lhs.term()) != rhs && self.mismatches.len() < 5 {
            self.mismatches.push(format!("{law} at {args:?}"));
        }
    }
}

/// Ternary laws split over the first argument, one chunk per core.
fn ternary_sweep(n: u64, law: fn(&[Code], &[T], u64, &mut LawCount)) -> LawCount {
    let codes: Vec<Code> = (0..=n).map(Code::from).collect();
    let threads = std::thread::available_parallelism().map_or(1, |p| p.get()) as u64;
    let mut total = LawCount::default();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|k| {
                let codes = &codes;
                s.spawn(move || {
                    let trees: Vec<T> = (0..=n).map(oracle_decode).collect();
                    let mut c = LawCount::default();
                    for a in (k..=n).step_by(threads as usize) {
                        law(codes, &trees, a, &mut c);
                    }
                    c
                })
            })
            .collect();
        for h in handles {
            total.merge(h.join().expect("sweep thread"));
        }
    });
    total
}

const LAW_MAX: u64 = 200;

fn criterion_1() -> Outcome {
    for n in 0..=100_000u64 {
        let term = decode(&Nat::from(n));
        if from_term(&term) != oracle_decode(n) {
            return Err(format!("decode({n}) disagrees with the closed-form inverse"));
        }
        if encode(&term) != Nat::from(n) {
            return Err(format!("encode(decode({n})) ≠ {n}"));
        }
    }
    let fuel = Fuel::new(10_000).unwrap();
    let lib = stdlib();
    let codes: Vec<Code> = (0..=LAW_MAX).map(Code::from).collect();
    let trees: Vec<T> = (0..=LAW_MAX).map(oracle_decode).collect();
    let mut laws = LawCount::default();
    for (a, ca) in codes.iter().enumerate() {
        let ta = &trees[a];
        laws.compare("I a = a", apply(&lib.i, ca, fuel).into_value(), || nf(ta.clone()), &[a as u64]);
        for (b, cb) in codes.iter().enumerate() {
            let args = [a as u64, b as u64];
            laws.compare("K a b = a", apply_all(&lib.k, &[ca, cb], fuel).into_value(), || nf(ta.clone()), &args);
            let pair = lib.pair_of(ca, cb, fuel).into_value();
            let fst = pair.as_ref().and_then(|p| lib.fst_of(p, fuel).into_value());
            let snd = pair.as_ref().and_then(|p| lib.snd_of(p, fuel).into_value());
            laws.compare("FST (PAIR a b) = a", fst, || nf(ta.clone()), &args);
            laws.compare("SND (PAIR a b) = b", snd, || nf(trees[b].clone()), &args);
        }
    }
    laws.merge(ternary_sweep(LAW_MAX, |codes, trees, a, c| {
        let fuel = Fuel::new(10_000).unwrap();
        let ca = &codes[a as usize];
        let b_comb = &stdlib().b;
        for (b, cb) in codes.iter().enumerate() {
            // `S a b` and `B a b` are shared by every third argument.
            let sab = apply_all(&Code::S, &[ca, cb], fuel).into_value();
            let bab = apply_all(b_comb, &[ca, cb], fuel).into_value();
            for (x, cx) in codes.iter().enumerate() {
                let args = [a, b as u64, x as u64];
                let (ta, tb, tx) = (&trees[a as usize], &trees[b], &trees[x]);
                c.compare(
                    "S a b c = a c (b c)",
                    sab.as_ref().and_then(|f| apply(f, cx, fuel).into_value()),
                    || nf(app(app(ta.clone(), tx.clone()), app(tb.clone(), tx.clone()))),
                    &args,
                );
                c.compare(
                    "B f g x = f (g x)",
                    bab.as_ref().and_then(|f| apply(f, cx, fuel).into_value()),
                    || nf(app(ta.clone(), app(tb.clone(), tx.clone()))),
                    &args,
                );
            }
        }
    }));
    if !laws.mismatches.is_empty() {
        return Err(laws.mismatches.join("; "));
    }
    Ok(format!(
        "codes 0..=100000 round-trip; {} law instances over codes ≤ {LAW_MAX} agree with the oracle reducer, {} skipped as non-converging",
        laws.instances, laws.excluded
    ))
}

// ---- criterion 2 ------------------------------------------------------------

fn brute_includes(r: &Per, s: &Per) -> bool {
    let carrier = r.carrier();
    carrier
        .iter()
        .all(|a| carrier.iter().all(|b| !r.related(a, b) || s.related(a, b)))
}

fn criterion_2() -> Outcome {
    let fuel = Fuel::new(10_000).unwrap();
    let l = lattice();
    let mut agree = 0;
    for (i, r) in l.iter().enumerate() {
        for (j, s) in l.iter().enumerate() {
            let oracle = brute_includes(r, s);
            let inc = includes(r, s);
            let tracks = track(r, s, &Code::I, fuel).verdict();
            if inc.undecided() || tracks.undecided() {
                return Err(format!("undecided at ({i}, {j})"));
            }
            if inc.holds() != oracle || tracks.holds() != oracle {
                return Err(format!("({i}, {j}): oracle {oracle}, includes {inc}, [i] {tracks}"));
            }
            agree += 1;
        }
    }
    Ok(format!("{agree} ordered pairs: [i]: R → S exactly when R ⊆ S"))
}

// ---- criterion 3 ------------------------------------------------------------

fn criterion_3() -> Outcome {
    let b = budget();
    let l = lattice();
    let suite = suite();
    let deep = suite.iter().filter(|(_, e)| e.depth() >= 2).count();
    if suite.len() < 8 || deep < 2 {
        return Err(format!("suite has {} functors, {deep} of depth ≥ 2", suite.len()));
    }
    let mut checked = 0;
    for (name, e) in &suite {
        let t = check_realizable(&RealizableFunctor::from_expr(e.clone()), &l, &b).map_err(|e| e.to_string())?;
        require_tally(&t, name)?;
        checked += t.checked;
    }
    Ok(format!("{} functors ({deep} of depth ≥ 2), {checked} checks", suite.len()))
}

// ---- criterion 4 ------------------------------------------------------------

fn criterion_4() -> Outcome {
    let b = budget();
    let l = lattice();
    let mut pairs = 0;
    for (name, e) in suite() {
        let f = RealizableFunctor::from_expr(e);
        let m = check_monotone(|x| f.object(x, &b), &l).map_err(|e| e.to_string())?;
        require(m.verdict, format_args!("{name} monotone"))?;
        let phi = f.tracker().as_code().cloned().ok_or("suite functor without a code tracker")?;
        let repaired = f.with_tracker(psi_repair(&phi));
        let t = check_realizable(&repaired, &l, &b).map_err(|e| e.to_string())?;
        require_tally(&t, format_args!("ψ-repaired {name}"))?;
        for r in &l {
            for s in &l {
                if includes(r, s).holds() {
                    let v = check_psi_at_identity(|x| f.object(x, &b), r, s, &b).map_err(|e| e.to_string())?;
                    require(v, format_args!("{name}: ψ·i at {r:?} ⊆ {s:?}"))?;
                    pairs += 1;
                }
            }
        }
    }
    let a = per(&[&[0]]);
    let contra = check_monotone(|x| exponential(x, &a, &b), &l).map_err(|e| e.to_string())?;
    if !contra.verdict.fails() || contra.witness != Some((0, 1)) {
        return Err(format!("X ↦ [X → A] gave {:?} with witness {:?}", contra.verdict, contra.witness));
    }
    Ok(format!(
        "suite monotone and ψ-repaired trackers realizable; {pairs} inclusion pairs at x = i; X ↦ [X → A] refuted at (∅, {{{{0}}}})"
    ))
}

// ---- criterion 5 ------------------------------------------------------------

fn criterion_5() -> Outcome {
    let fuel = Fuel::new(10_000).unwrap();
    let z = per(&[&[0]]);
    let mut universes = 0;
    let mut runs = 0;
    for mask in 1u32..16 {
        if mask.count_ones() > 3 {
            continue;
        }
        let codes: Vec<u64> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
        let b = Budget::new(UniverseSpec::Explicit(codes.clone()), fuel).unwrap();
        let expected = [1, 2, 5, 15][codes.len()];
        let n = all_pers(b.universe()).len();
        if n != expected {
            return Err(format!("{n} sub-PERs over {codes:?}"));
        }
        let discrete = Per::new(codes.iter().map(|&c| vec![Code::from(c)]).collect()).unwrap();
        use FunctorExpr::Id;
        let functors = [
            Id,
            FunctorExpr::constant(discrete.clone()),
            FunctorExpr::exp_from(Per::empty(), Id),
            FunctorExpr::exp_from(z.clone(), Id),
            FunctorExpr::exp_from(discrete.clone(), Id),
            FunctorExpr::prod(Id, Id),
            FunctorExpr::prod(Id, FunctorExpr::constant(discrete.clone())),
            FunctorExpr::exp_from(z.clone(), FunctorExpr::prod(Id, FunctorExpr::constant(discrete))),
        ];
        for e in functors {
            let label = format!("{e:?} over {codes:?}");
            let f = RealizableFunctor::from_expr(e);
            let k = kleene_lfp(&f, &b, DEFAULT_MAX_ITER).map_err(|e| format!("{label}: {e}"))?;
            let brute = brute_lfp(&f, &b).map_err(|e| format!("{label}: {e}"))?;
            require(same_relation(&k.per, &brute), format_args!("{label}: Kleene vs brute force"))?;
            require(verify_fixmap(&f, &k.per, &b).map_err(|e| e.to_string())?, format_args!("{label}: fixmap"))?;
            runs += 1;
        }
        universes += 1;
    }
    Ok(format!("{runs} fixpoints over {universes} tiny universes match brute force, i tracks FX = X"))
}

// ---- criterion 6 ------------------------------------------------------------

struct AlgebraConfig {
    name: &'static str,
    functor: FunctorExpr,
    algebras: Vec<(Per, Code)>,
}

fn configs() -> Vec<AlgebraConfig> {
    let z = per(&[&[0]]);
    let bit = per(&[&[0], &[1]]);
    let blocks = per(&[&[0, 1], &[2, 3]]);
    let eval_at_0 = Code::from_term(Term::spine(Term::S, [Term::I, Term::app(Term::K, Term::K)]));
    vec![
        AlgebraConfig {
            name: "const bit, {(bit, i)}",
            functor: FunctorExpr::constant(bit.clone()),
            algebras: vec![(bit.clone(), Code::I)],
        },
        AlgebraConfig {
            name: "id, {(z, i), (bit, i)}",
            functor: FunctorExpr::Id,
            algebras: vec![(z.clone(), Code::I), (bit.clone(), Code::I)],
        },
        AlgebraConfig {
            name: "z ⇒ id, evaluation at 0 on z, bit, blocks",
            functor: FunctorExpr::exp_from(z.clone(), FunctorExpr::Id),
            algebras: vec![(z.clone(), eval_at_0.clone()), (bit.clone(), eval_at_0.clone()), (blocks, eval_at_0)],
        },
        AlgebraConfig {
            name: "∅ ⇒ id, constants on z and bit",
            functor: FunctorExpr::exp_from(Per::empty(), FunctorExpr::Id),
            algebras: vec![(z, Code::from(3u64)), (bit.clone(), Code::from(3u64)), (bit, Code::from(5u64))],
        },
    ]
}

fn criterion_6() -> Outcome {
    let b = budget();
    let fuel = b.fuel();
    let lib = stdlib();
    let mut notes = Vec::new();
    for cfg in configs() {
        let f = RealizableFunctor::from_expr(cfg.functor);
        let family = cfg
            .algebras
            .into_iter()
            .map(|(c, s)| Algebra::new(&f, c, s, &b))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("{}: {e}", cfg.name))?;
        let r0 = r0_approx(&f, &family, &b).map_err(|e| e.to_string())?;
        let mut cones = 0;
        for (i, src) in family.iter().enumerate() {
            let pi_src = projection(src.structure());
            require(track(&r0.per, src.carrier(), &pi_src, fuel).verdict(), format_args!("{}: π_{i}", cfg.name))?;
            for (j, tgt) in family.iter().enumerate() {
                let pi_tgt = projection(tgt.structure());
                for m in enumerate_algebra_morphisms(src, tgt, &b).map_err(|e| e.to_string())? {
                    let composed = lib.comp(m.morphism.tracker(), &pi_src);
                    require(
                        agree_on(&r0.per, tgt.carrier(), &composed, &pi_tgt, fuel),
                        format_args!("{}: cone {i} → {j} at {:?}", cfg.name, m.morphism.tracker()),
                    )?;
                    cones += 1;
                }
            }
        }
        require_tally(&check_structure_map(&f, &r0, &b).map_err(|e| e.to_string())?, format_args!("{}: square", cfg.name))?;
        require_tally(&check_initiality(&f, &r0, &b).map_err(|e| e.to_string())?, format_args!("{}: initiality", cfg.name))?;
        let din = din_experiment(&f, &r0, &b).map_err(|e| e.to_string())?;
        notes.push(format!(
            "[{}: R0 {} classes/{} codes, {cones} cone squares, din {}]",
            cfg.name,
            r0.per.class_count(),
            r0.per.carrier_len(),
            if din.equal { "equal" } else { "different" }
        ));
    }
    Ok(notes.join(" "))
}

// ---- criterion 7 ------------------------------------------------------------

fn yoneda_sweep(name: &str, e: FunctorExpr, l: &[Per], b: &Budget, inclusions: &[(usize, usize)]) -> Result<usize, String> {
    let f = RealizableFunctor::from_expr(e);
    let yoneda = Yoneda::new(&f, l).map_err(|e| e.to_string())?;
    let objects = l
        .iter()
        .map(|x| yoneda.star().object(x, b))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    for &(i, j) in inclusions {
        require(includes(&objects[i], &objects[j]), format_args!("{name}* at ({i}, {j})"))?;
    }
    let mut natural = 0;
    for (i, x) in l.iter().enumerate() {
        let rep = yoneda.iso(x, b).map_err(|e| e.to_string())?;
        require(rep.verdict(), format_args!("{name}: iso at lattice[{i}]"))?;
        for (j, y) in l.iter().enumerate() {
            let v = yoneda.natural(x, y, b).map_err(|e| e.to_string())?;
            require(v, format_args!("{name}: natural at ({i}, {j})"))?;
            natural += 1;
        }
    }
    Ok(natural)
}

fn criterion_7() -> Outcome {
    let b = budget();
    let l = lattice();
    let inclusions: Vec<(usize, usize)> = (0..l.len())
        .flat_map(|i| (0..l.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| includes(&l[i], &l[j]).holds())
        .collect();
    for &(i, j) in &inclusions {
        let (hx, hy) = (hom_functor(&l[i]), hom_functor(&l[j]));
        for r in &l {
            let (a, c) = (hy.object(r, &b).map_err(|e| e.to_string())?, hx.object(r, &b).map_err(|e| e.to_string())?);
            require(includes(&a, &c), format_args!("hom anti-monotone at ({i}, {j})"))?;
        }
    }
    // One thread per functor; each sweep is independent.
    let sweeps: Vec<Result<usize, String>> = std::thread::scope(|s| {
        let handles: Vec<_> = suite()
            .into_iter()
            .map(|(name, e)| {
                let (l, b, inclusions) = (&l, &b, &inclusions);
                s.spawn(move || yoneda_sweep(name, e, l, b, inclusions))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep thread")).collect()
    });
    let mut natural = 0;
    for r in sweeps {
        natural += r?;
    }
    Ok(format!(
        "{} inclusion pairs; F* monotone, hom anti-monotone, iso and {natural} naturality sweeps hold for every suite functor",
        inclusions.len()
    ))
}

// ---- criterion 8 ------------------------------------------------------------

fn criterion_8() -> Outcome {
    let tutorial = concat!(env!("CARGO_MANIFEST_DIR"), "/tutorial.perlab");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_perlab"))
            .args(["--format", "json", "check-all", tutorial])
            .env_remove("PERLAB_FUEL")
            .output()
            .map_err(|e| e.to_string())
    };
    let (first, second) = (run()?, run()?);
    if !first.status.success() {
        return Err(format!("check-all exited with {}", first.status));
    }
    if first.stdout.is_empty() || first.stdout != second.stdout {
        return Err("check-all reports differ between runs".into());
    }
    Ok(format!("two check-all runs produced the same {} bytes", first.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("PCA soundness", criterion_1),
        ("[i]: R → S iff R ⊆ S", criterion_2),
        ("realizability of the functor suite", criterion_3),
        ("monotonicity and ψ repair", criterion_4),
        ("Kleene fixpoints against brute force", criterion_5),
        ("initial algebras", criterion_6),
        ("Yoneda monotone replacement", criterion_7),
        ("deterministic reports", criterion_8),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let n = k + 1;
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {n} PASS  {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} FAIL  {name} ({secs:.1}s): {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
