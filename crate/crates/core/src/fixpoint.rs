//! Least fixpoints of monotone object maps.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::functor::RealizableFunctor;
use crate::kernel::Code;
use crate::per::{includes, intersect, same_relation, track, Per};
use crate::verdict::Verdict;

pub const DEFAULT_MAX_ITER: usize = 64;

#[derive(Clone, Debug)]
pub struct FixpointResult {
    pub per: Per,
    /// Applications of `F` until the chain stabilized.
    pub iterations: usize,
    /// `X_0 = ∅, X_1, ..., X_iterations`.
    pub trace: Vec<Per>,
}

/// Kleene iteration `X_0 = ∅`, `X_{k+1} = F X_k`, stopping when two
/// consecutive stages are equal as relations. Each step must ascend; a
/// descent means the map is not monotone and is reported as an error.
pub fn kleene_lfp(f: &RealizableFunctor, budget: &Budget, max_iter: usize) -> Result<FixpointResult> {
    kleene_with(|x| f.object(x, budget), max_iter)
}

/// [`kleene_lfp`] for a bare object map.
pub fn kleene_with<M>(obj_map: M, max_iter: usize) -> Result<FixpointResult>
where
    M: Fn(&Per) -> Result<Per>,
{
    let mut trace = vec![Per::empty()];
    for k in 1..=max_iter {
        let prev = trace.last().expect("nonempty trace");
        let next = obj_map(prev)?;
        match includes(prev, &next) {
            Verdict::Holds => {}
            v => {
                return Err(Error::NotMonotone(format!(
                    "X_{} ⊄ X_{k}: {v}",
                    k - 1
                )))
            }
        }
        let stable = same_relation(prev, &next).holds();
        trace.push(next);
        if stable {
            let per = trace.last().expect("nonempty trace").clone();
            return Ok(FixpointResult {
                per,
                iterations: k,
                trace,
            });
        }
    }
    Err(Error::NoFixpoint(max_iter))
}

/// Every PER on a subset of `codes`: a set partition of each subset.
pub fn all_pers(codes: &[Code]) -> Vec<Per> {
    fn partitions(items: &[Code]) -> Vec<Vec<Vec<Code>>> {
        let Some((first, rest)) = items.split_first() else {
            return vec![Vec::new()];
        };
        let mut out = Vec::new();
        for p in partitions(rest) {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].push(first.clone());
                out.push(q);
            }
            let mut q = p;
            q.push(vec![first.clone()]);
            out.push(q);
        }
        out
    }
    let n = codes.len();
    let mut pers = Vec::new();
    for mask in 0u32..(1 << n) {
        let subset: Vec<Code> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| codes[i].clone())
            .collect();
        for p in partitions(&subset) {
            pers.push(Per::new(p).expect("set partition"));
        }
    }
    pers
}

/// Largest universe [`brute_lfp`] accepts.
pub const BRUTE_MAX_UNIVERSE: usize = 3;

/// The least fixpoint as the intersection of all pre-fixed PERs over the
/// budget's universe (at most [`BRUTE_MAX_UNIVERSE`] codes).
pub fn brute_lfp(f: &RealizableFunctor, budget: &Budget) -> Result<Per> {
    let universe = budget.universe();
    if universe.len() > BRUTE_MAX_UNIVERSE {
        return Err(Error::Unsupported(format!(
            "brute force needs at most {BRUTE_MAX_UNIVERSE} codes, universe has {}",
            universe.len()
        )));
    }
    let mut prefixed = Vec::new();
    for x in all_pers(universe) {
        let fx = f.object(&x, budget)?;
        match includes(&fx, &x) {
            Verdict::Holds => prefixed.push(x),
            Verdict::Fails(_) => {}
            Verdict::Undecided(w) => {
                return Err(Error::Unsupported(format!("pre-fixed test undecided: {w}")))
            }
        }
    }
    if prefixed.is_empty() {
        return Err(Error::Unsupported("no pre-fixed PER over this universe".into()));
    }
    intersect(&prefixed)
}

/// `FX = X`, with `I` tracking both directions.
pub fn verify_fixmap(f: &RealizableFunctor, x: &Per, budget: &Budget) -> Result<Verdict> {
    let fx = f.object(x, budget)?;
    let fuel = budget.fuel();
    Ok(Verdict::all([
        same_relation(&fx, x).context("FX = X"),
        track(&fx, x, &Code::I, fuel).verdict().context("i: FX → X"),
        track(x, &fx, &Code::I, fuel).verdict().context("i: X → FX"),
    ]))
}
