//! Finitely presented partial equivalence relations.
//!
//! A [`Per`] is an explicit carrier (its domain) partitioned into classes.
//! Constructed PERs (products, exponentials, intersections, ...) also carry a
//! [`Classifier`] that decides membership of codes outside the enumerated
//! carrier: an exponential contains every code that tracks, including normal
//! forms that fall outside the budget's universe. The enumerated carrier is
//! the budget-relative approximant used for inclusion, equality and
//! quotients.
//!
//! Every code in the domain has a [`Sig`], a canonical description of its
//! class: two codes are related exactly when both are in the domain with
//! equal signatures.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::kernel::{stdlib, Code, Fuel, Outcome, Realizer};
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sig {
    Block(u32),
    Tuple(Arc<[Sig]>),
}

impl Sig {
    pub fn tuple<I: IntoIterator<Item = Sig>>(parts: I) -> Sig {
        Sig::Tuple(parts.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    In(Sig),
    Out(String),
    Undecided(String),
}

impl Membership {
    pub fn sig(&self) -> Option<&Sig> {
        match self {
            Membership::In(s) => Some(s),
            _ => None,
        }
    }
}

pub trait Classifier: Send + Sync {
    fn classify(&self, code: &Code) -> Membership;
}

#[derive(Clone)]
pub struct Per(Arc<PerData>);

struct PerData {
    classes: Vec<Vec<Code>>,
    index: HashMap<Code, Sig>,
    ext: Option<Arc<dyn Classifier>>,
    memo: Mutex<HashMap<Code, Membership>>,
    budget: Option<Budget>,
    excluded_by_fuel: Vec<Code>,
}

/// Memoized classifications kept per PER before the memo is reset.
const MEMO_LIMIT: usize = 1 << 16;

impl Per {
    pub fn empty() -> Per {
        Per::new(Vec::new()).expect("empty partition")
    }

    /// A hand-declared PER given by its classes.
    pub fn new(classes: Vec<Vec<Code>>) -> Result<Per> {
        let mut seen = HashMap::new();
        for (i, block) in classes.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPer(format!("class {i} is empty")));
            }
            for c in block {
                if let Some(j) = seen.insert(c.clone(), i) {
                    return Err(Error::InvalidPer(format!(
                        "code {c:?} appears in classes {j} and {i}"
                    )));
                }
            }
        }
        let mut classes: Vec<Vec<Code>> = classes
            .into_iter()
            .map(|mut b| {
                b.sort();
                b
            })
            .collect();
        classes.sort_by(|a, b| a[0].cmp(&b[0]));
        let index = classes
            .iter()
            .enumerate()
            .flat_map(|(i, b)| b.iter().map(move |c| (c.clone(), Sig::Block(i as u32))))
            .collect();
        Ok(Per(Arc::new(PerData {
            classes,
            index,
            ext: None,
            memo: Mutex::default(),
            budget: None,
            excluded_by_fuel: Vec::new(),
        })))
    }

    /// No classifier: membership is exactly the listed classes.
    pub(crate) fn is_declared(&self) -> bool {
        self.0.ext.is_none()
    }

    /// Shorthand for small hand-declared PERs: `Per::of(&[&[4, 7], &[9]])`.
    pub fn of(classes: &[&[u64]]) -> Result<Per> {
        Per::new(
            classes
                .iter()
                .map(|b| b.iter().copied().map(Code::from).collect())
                .collect(),
        )
    }

    /// A constructed PER from classified members.
    pub fn from_classified(
        members: Vec<(Code, Sig)>,
        ext: Option<Arc<dyn Classifier>>,
        budget: Option<Budget>,
        mut excluded_by_fuel: Vec<Code>,
    ) -> Per {
        let mut order: Vec<Sig> = Vec::new();
        let mut groups: HashMap<Sig, Vec<Code>> = HashMap::new();
        let mut index = HashMap::with_capacity(members.len());
        for (code, sig) in members {
            if index.contains_key(&code) {
                continue;
            }
            index.insert(code.clone(), sig.clone());
            groups
                .entry(sig.clone())
                .or_insert_with(|| {
                    order.push(sig);
                    Vec::new()
                })
                .push(code);
        }
        let mut classes: Vec<Vec<Code>> = order
            .into_iter()
            .map(|s| {
                let mut b = groups.remove(&s).expect("group");
                b.sort();
                b
            })
            .collect();
        classes.sort_by(|a, b| a[0].cmp(&b[0]));
        excluded_by_fuel.sort();
        excluded_by_fuel.dedup();
        Per(Arc::new(PerData {
            classes,
            index,
            ext,
            memo: Mutex::default(),
            budget,
            excluded_by_fuel,
        }))
    }

    pub fn classes(&self) -> &[Vec<Code>] {
        &self.0.classes
    }

    pub fn carrier(&self) -> Vec<Code> {
        let mut c: Vec<Code> = self.0.classes.iter().flatten().cloned().collect();
        c.sort();
        c
    }

    pub fn carrier_len(&self) -> usize {
        self.0.index.len()
    }

    pub fn class_count(&self) -> usize {
        self.0.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.classes.is_empty()
    }

    /// One representative per class (the least code).
    pub fn representatives(&self) -> impl Iterator<Item = &Code> {
        self.0.classes.iter().map(|b| &b[0])
    }

    /// Whether `code` is in the enumerated carrier.
    pub fn lists(&self, code: &Code) -> bool {
        self.0.index.contains_key(code)
    }

    pub fn budget(&self) -> Option<&Budget> {
        self.0.budget.as_ref()
    }

    /// Candidates whose membership could not be decided at the budget's fuel.
    pub fn excluded_by_fuel(&self) -> &[Code] {
        &self.0.excluded_by_fuel
    }

    pub fn classify(&self, code: &Code) -> Membership {
        if let Some(sig) = self.0.index.get(code) {
            return Membership::In(sig.clone());
        }
        let Some(ext) = &self.0.ext else {
            return Membership::Out(format!("{code:?} not in carrier"));
        };
        if let Some(m) = self.0.memo.lock().expect("memo lock").get(code) {
            return m.clone();
        }
        let m = ext.classify(code);
        let mut memo = self.0.memo.lock().expect("memo lock");
        if memo.len() >= MEMO_LIMIT {
            memo.clear();
        }
        memo.insert(code.clone(), m.clone());
        m
    }

    /// `(a, b) ∈ R`, three-valued.
    pub fn relate(&self, a: &Code, b: &Code) -> Verdict {
        let sa = match self.classify(a) {
            Membership::In(s) => s,
            Membership::Out(w) => return Verdict::Fails(w),
            Membership::Undecided(w) => return Verdict::Undecided(w),
        };
        if a == b {
            return Verdict::Holds;
        }
        match self.classify(b) {
            Membership::In(sb) => Verdict::from_bool(sa == sb, || format!("{a:?} and {b:?} in different classes")),
            Membership::Out(w) => Verdict::Fails(w),
            Membership::Undecided(w) => Verdict::Undecided(w),
        }
    }

    pub fn related(&self, a: &Code, b: &Code) -> bool {
        self.relate(a, b).holds()
    }

    fn ptr_eq(&self, other: &Per) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl fmt::Debug for Per {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, block) in self.0.classes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (j, c) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c:?}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// Fails when two stamped inputs disagree, or disagree with `budget`.
pub fn check_budgets<'a, I: IntoIterator<Item = &'a Per>>(
    pers: I,
    budget: Option<&Budget>,
) -> Result<()> {
    let mut seen = budget.cloned();
    for p in pers {
        if let Some(b) = p.budget() {
            match &seen {
                Some(s) if s != b => return Err(Error::BudgetMismatch(s.to_string(), b.to_string())),
                Some(_) => {}
                None => seen = Some(b.clone()),
            }
        }
    }
    Ok(())
}

fn common_budget<'a, I: IntoIterator<Item = &'a Per>>(pers: I) -> Option<Budget> {
    pers.into_iter().find_map(|p| p.budget().cloned())
}

/// `R ⊆ S` as relations: every related pair of `R`'s carrier is related in `S`.
pub fn includes(r: &Per, s: &Per) -> Verdict {
    if r.ptr_eq(s) {
        return Verdict::Holds;
    }
    let mut undecided = None;
    for block in r.classes() {
        let mut first: Option<(&Code, Sig)> = None;
        for a in block {
            match s.classify(a) {
                Membership::In(sig) => match &first {
                    None => first = Some((a, sig)),
                    Some((b, sb)) if *sb != sig => {
                        return Verdict::Fails(format!(
                            "{b:?} ~ {a:?} in the smaller PER but not in the larger"
                        ))
                    }
                    Some(_) => {}
                },
                Membership::Out(_) => {
                    return Verdict::Fails(format!("{a:?} is in the domain of the smaller PER only"))
                }
                Membership::Undecided(w) => {
                    undecided.get_or_insert(w);
                }
            }
        }
    }
    match undecided {
        Some(w) => Verdict::Undecided(w),
        None => Verdict::Holds,
    }
}

/// Equality as relations (mutual inclusion).
pub fn same_relation(r: &Per, s: &Per) -> Verdict {
    Verdict::all([includes(r, s).context("⊆"), includes(s, r).context("⊇")])
}

struct IntersectionClassifier {
    members: Vec<Per>,
}

impl Classifier for IntersectionClassifier {
    fn classify(&self, code: &Code) -> Membership {
        let mut sigs = Vec::with_capacity(self.members.len());
        for m in &self.members {
            match m.classify(code) {
                Membership::In(s) => sigs.push(s),
                other => return other,
            }
        }
        Membership::In(Sig::tuple(sigs))
    }
}

/// Intersection of a nonempty family; it is also the family's product in the
/// category of PERs.
pub fn intersect(family: &[Per]) -> Result<Per> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    check_budgets(family, None)?;
    if family.len() == 1 {
        return Ok(family[0].clone());
    }
    let classifier = IntersectionClassifier {
        members: family.to_vec(),
    };
    let mut candidates: Vec<Code> = family.iter().flat_map(|p| p.carrier()).collect();
    candidates.sort();
    candidates.dedup();
    let mut members = Vec::new();
    let mut excluded = Vec::new();
    for c in candidates {
        match classifier.classify(&c) {
            Membership::In(sig) => members.push((c, sig)),
            Membership::Out(_) => {}
            Membership::Undecided(_) => excluded.push(c),
        }
    }
    Ok(Per::from_classified(
        members,
        Some(Arc::new(classifier)),
        common_budget(family),
        excluded,
    ))
}

struct ProductClassifier {
    left: Per,
    right: Per,
    fuel: Fuel,
}

impl Classifier for ProductClassifier {
    fn classify(&self, code: &Code) -> Membership {
        let lib = stdlib();
        let mut sigs = Vec::with_capacity(2);
        for (proj, per, name) in [(&lib.fst, &self.left, "FST"), (&lib.snd, &self.right, "SND")] {
            match proj.realize(code, self.fuel) {
                Outcome::Converged { value, .. } => match per.classify(&value) {
                    Membership::In(s) => sigs.push(s),
                    other => return other,
                },
                Outcome::OutOfFuel => {
                    return Membership::Undecided(format!("{name} {code:?} out of fuel"))
                }
            }
        }
        Membership::In(Sig::tuple(sigs))
    }
}

/// `R × S`, carried by `PAIR a x` for `a ∈ dom R`, `x ∈ dom S`.
pub fn product(r: &Per, s: &Per, budget: &Budget) -> Result<Per> {
    check_budgets([r, s], Some(budget))?;
    let lib = stdlib();
    let fuel = budget.fuel();
    let mut members = Vec::with_capacity(r.carrier_len() * s.carrier_len());
    for a in r.carrier() {
        let sa = r.classify(&a).sig().cloned().expect("carrier member");
        for x in s.carrier() {
            let sx = s.classify(&x).sig().cloned().expect("carrier member");
            let p = lib
                .pair_of(&a, &x, fuel)
                .into_value()
                .ok_or_else(|| Error::PairingOutOfFuel {
                    left: a.clone(),
                    right: x.clone(),
                })?;
            members.push((p, Sig::tuple([sa.clone(), sx])));
        }
    }
    let ext = ProductClassifier {
        left: r.clone(),
        right: s.clone(),
        fuel,
    };
    Ok(Per::from_classified(
        members,
        Some(Arc::new(ext)),
        Some(budget.clone()),
        Vec::new(),
    ))
}

/// Result of running a candidate tracker over a source PER.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Track {
    /// Tracks; the signature lists the image class of each source class.
    Tracks(Sig),
    Fails(String),
    Undecided(String),
}

impl Track {
    pub fn verdict(self) -> Verdict {
        match self {
            Track::Tracks(_) => Verdict::Holds,
            Track::Fails(w) => Verdict::Fails(w),
            Track::Undecided(w) => Verdict::Undecided(w),
        }
    }
}

/// Does `n` track a morphism `src → tgt`: `n·a` defined and in `dom tgt` for
/// every `a ∈ dom src`, and related inputs go to related outputs.
pub fn track(src: &Per, tgt: &Per, n: &dyn Realizer, fuel: Fuel) -> Track {
    let mut undecided: Option<String> = None;
    let mut image = Vec::with_capacity(src.class_count());
    for block in src.classes() {
        let mut block_sig: Option<(&Code, Sig)> = None;
        for a in block {
            let out = match n.realize(a, fuel) {
                Outcome::Converged { value, .. } => value,
                Outcome::OutOfFuel => {
                    undecided.get_or_insert_with(|| format!("{n:?}·{a:?} out of fuel"));
                    continue;
                }
            };
            match tgt.classify(&out) {
                Membership::In(sig) => match &block_sig {
                    None => block_sig = Some((a, sig)),
                    Some((b, sb)) if *sb != sig => {
                        return Track::Fails(format!(
                            "{b:?} ~ {a:?} but {n:?}·{b:?} and {n:?}·{a:?} are unrelated"
                        ))
                    }
                    Some(_) => {}
                },
                Membership::Out(_) => {
                    return Track::Fails(format!("{n:?}·{a:?} = {out:?} is not in the target domain"))
                }
                Membership::Undecided(w) => {
                    undecided.get_or_insert(w);
                }
            }
        }
        if let Some((_, s)) = block_sig {
            image.push(s);
        }
    }
    match undecided {
        Some(w) => Track::Undecided(w),
        None => Track::Tracks(Sig::tuple(image)),
    }
}

struct ExponentialClassifier {
    src: Per,
    tgt: Per,
    fuel: Fuel,
}

impl Classifier for ExponentialClassifier {
    fn classify(&self, code: &Code) -> Membership {
        match track(&self.src, &self.tgt, code, self.fuel) {
            Track::Tracks(sig) => Membership::In(sig),
            Track::Fails(w) => Membership::Out(w),
            Track::Undecided(w) => Membership::Undecided(w),
        }
    }
}

/// `S^R`, the PER of trackers `R → S`, enumerated over the budget's universe.
pub fn exponential(r: &Per, s: &Per, budget: &Budget) -> Result<Per> {
    check_budgets([r, s], Some(budget))?;
    let ext = ExponentialClassifier {
        src: r.clone(),
        tgt: s.clone(),
        fuel: budget.fuel(),
    };
    let mut members = Vec::new();
    let mut excluded = Vec::new();
    for n in budget.universe() {
        match ext.classify(n) {
            Membership::In(sig) => members.push((n.clone(), sig)),
            Membership::Out(_) => {}
            Membership::Undecided(_) => excluded.push(n.clone()),
        }
    }
    Ok(Per::from_classified(
        members,
        Some(Arc::new(ext)),
        Some(budget.clone()),
        excluded,
    ))
}

/// `dom R / R`: the classes, each sorted, ordered by least element.
pub fn quotient(r: &Per) -> Vec<Vec<Code>> {
    r.classes().to_vec()
}
