//! Normal-order reduction to full normal form with a step budget.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::code::Code;
use super::term::Term;
use crate::error::KernelError;

/// Intermediate terms larger than this many nodes abort reduction.
pub const MAX_TERM_NODES: u64 = 1_000_000;

/// Maximum number of reduction steps for one application.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fuel(u64);

impl Fuel {
    pub fn new(max_steps: u64) -> Result<Fuel, KernelError> {
        if max_steps == 0 {
            Err(KernelError::ZeroFuel)
        } else {
            Ok(Fuel(max_steps))
        }
    }

    pub fn max_steps(self) -> u64 {
        self.0
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel(10_000)
    }
}

impl fmt::Display for Fuel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Converged { value: Code, steps: u64 },
    OutOfFuel,
}

impl Outcome {
    pub fn value(&self) -> Option<&Code> {
        match self {
            Outcome::Converged { value, .. } => Some(value),
            Outcome::OutOfFuel => None,
        }
    }

    pub fn into_value(self) -> Option<Code> {
        match self {
            Outcome::Converged { value, .. } => Some(value),
            Outcome::OutOfFuel => None,
        }
    }

    pub fn converged(&self) -> bool {
        matches!(self, Outcome::Converged { .. })
    }
}

/// Anything that can be applied to a code: a code itself, or a host-level
/// tracker function.
pub trait Realizer: fmt::Debug + Send + Sync {
    fn realize(&self, arg: &Code, fuel: Fuel) -> Outcome;
}

impl Realizer for Code {
    fn realize(&self, arg: &Code, fuel: Fuel) -> Outcome {
        apply(self, arg, fuel)
    }
}

/// `n m`: reduce `App(decode n, decode m)` to normal form.
pub fn apply(n: &Code, m: &Code, fuel: Fuel) -> Outcome {
    normalize(Term::app(n.term().clone(), m.term().clone()), fuel)
}

/// Reduce the term `t` itself to normal form.
pub fn eval(t: &Code, fuel: Fuel) -> Outcome {
    normalize(t.term().clone(), fuel)
}

/// Apply `f` to each argument in turn, `f a1 a2 ...`, normalizing after each.
pub fn apply_all(f: &Code, args: &[&Code], fuel: Fuel) -> Outcome {
    let mut acc = f.clone();
    let mut steps = 0;
    for a in args {
        match apply(&acc, a, fuel) {
            Outcome::Converged { value, steps: s } => {
                acc = value;
                steps += s;
            }
            Outcome::OutOfFuel => return Outcome::OutOfFuel,
        }
    }
    Outcome::Converged { value: acc, steps }
}

/// `f·a`, with running out of fuel reported as an undecided verdict.
pub fn run(f: &dyn Realizer, a: &Code, fuel: Fuel) -> Result<Code, crate::verdict::Verdict> {
    f.realize(a, fuel)
        .into_value()
        .ok_or_else(|| crate::verdict::Verdict::Undecided(format!("{f:?}·{a:?} out of fuel")))
}

struct OutOfFuel;

struct Machine {
    steps: u64,
    max_steps: u64,
    nodes: u64,
    /// Largest `nodes` since the innermost open memo entry began.
    peak: u64,
}

impl Machine {
    fn tick(&mut self) -> Result<(), OutOfFuel> {
        if self.steps >= self.max_steps {
            return Err(OutOfFuel);
        }
        self.steps += 1;
        Ok(())
    }

    /// Contract the head redex of `head args...` until the head is a
    /// combinator short of arguments. `args` is a stack whose top is the
    /// first argument.
    fn head_normalize(&mut self, mut head: Term, args: &mut Vec<Term>) -> Result<Term, OutOfFuel> {
        loop {
            match head {
                Term::App(_) => {
                    let (l, r) = head.into_children().expect("application");
                    args.push(r);
                    head = l;
                }
                Term::I if !args.is_empty() => {
                    self.tick()?;
                    self.nodes -= 2;
                    head = args.pop().expect("I argument");
                }
                Term::K if args.len() >= 2 => {
                    self.tick()?;
                    let x = args.pop().expect("K first argument");
                    let y = args.pop().expect("K second argument");
                    self.nodes -= 3 + y.node_count();
                    head = x;
                }
                Term::S if args.len() >= 3 => {
                    self.tick()?;
                    let x = args.pop().expect("S first argument");
                    let y = args.pop().expect("S second argument");
                    let z = args.pop().expect("S third argument");
                    self.nodes = self.nodes.saturating_add(z.node_count()) - 1;
                    if self.nodes > MAX_TERM_NODES {
                        return Err(OutOfFuel);
                    }
                    self.peak = self.peak.max(self.nodes);
                    args.push(Term::app(y, z.clone()));
                    args.push(z);
                    head = x;
                }
                stuck => return Ok(stuck),
            }
        }
    }
}

struct Frame {
    head: Term,
    /// Arguments still to normalize; top is the next one.
    pending: Vec<Term>,
    done: Vec<Term>,
}

/// A shared argument whose normalization is in progress.
struct Open {
    key: Term,
    ptr: usize,
    depth: usize,
    steps: u64,
    nodes: u64,
    saved_peak: u64,
}

/// The normal form of a shared argument, with what computing it cost.
struct Memo {
    _key: Term,
    result: Term,
    steps: u64,
    delta: i64,
    peak: u64,
}

/// Normal order: head-normalize, then normalize the arguments left to right.
///
/// `S` duplicates its third argument unevaluated, so the same node is often
/// normalized several times. Those repeats are replayed from a memo that
/// charges the recorded steps and checks the recorded node growth, so fuel
/// and the size cap behave exactly as if the work were redone.
fn normalize(term: Term, fuel: Fuel) -> Outcome {
    let nodes = term.node_count();
    let mut m = Machine {
        steps: 0,
        max_steps: fuel.max_steps(),
        nodes,
        peak: nodes,
    };
    if m.nodes > MAX_TERM_NODES {
        return Outcome::OutOfFuel;
    }
    let mut frames: Vec<Frame> = Vec::new();
    // Argument stacks of finished frames, reused.
    let mut spare: Vec<Vec<Term>> = Vec::new();
    let mut open: Vec<Open> = Vec::new();
    let mut memo: HashMap<usize, Memo> = HashMap::new();
    let mut current = term;
    let mut is_arg = false;
    loop {
        let shared = if is_arg { current.shared_ptr() } else { None };
        let mut result = if current.is_normal() {
            current
        } else if let Some(hit) = shared.and_then(|p| memo.get(&p)) {
            if m.steps + hit.steps > m.max_steps || m.nodes + hit.peak > MAX_TERM_NODES {
                return Outcome::OutOfFuel;
            }
            m.peak = m.peak.max(m.nodes + hit.peak);
            m.steps += hit.steps;
            m.nodes = m.nodes.saturating_add_signed(hit.delta);
            hit.result.clone()
        } else {
            if let Some(ptr) = shared {
                open.push(Open {
                    key: current.clone(),
                    ptr,
                    depth: frames.len(),
                    steps: m.steps,
                    nodes: m.nodes,
                    saved_peak: m.peak,
                });
                m.peak = m.nodes;
            }
            let mut args = spare.pop().unwrap_or_default();
            let head = match m.head_normalize(current, &mut args) {
                Ok(h) => h,
                Err(OutOfFuel) => return Outcome::OutOfFuel,
            };
            if args.is_empty() {
                spare.push(args);
                head
            } else {
                let next = args.pop().expect("nonempty");
                frames.push(Frame {
                    head,
                    pending: args,
                    done: spare.pop().unwrap_or_default(),
                });
                current = next;
                is_arg = true;
                continue;
            }
        };
        // `result` is the normal form of the term begun at this depth.
        loop {
            while open.last().is_some_and(|o| o.depth == frames.len()) {
                let o = open.pop().expect("open entry");
                memo.insert(
                    o.ptr,
                    Memo {
                        _key: o.key,
                        result: result.clone(),
                        steps: m.steps - o.steps,
                        delta: m.nodes as i64 - o.nodes as i64,
                        peak: m.peak - o.nodes,
                    },
                );
                m.peak = m.peak.max(o.saved_peak);
            }
            let Some(frame) = frames.last_mut() else {
                return Outcome::Converged {
                    value: Code::from_term(result),
                    steps: m.steps,
                };
            };
            frame.done.push(result);
            if let Some(next) = frame.pending.pop() {
                current = next;
                is_arg = true;
                break;
            }
            let Frame { head, pending, mut done } = frames.pop().expect("frame");
            result = Term::spine(head, done.drain(..));
            spare.push(pending);
            spare.push(done);
        }
    }
}
