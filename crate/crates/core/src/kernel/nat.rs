//! Cantor pairing and the Gödel coding of combinatory terms, generic over the
//! natural-number representation.
//!
//! Fixed width types (`u64`, `u128`) go through checked arithmetic and report
//! overflow as `None`; [`Nat`](crate::Nat) never overflows.

use num_integer::{Integer, Roots};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Unsigned};

use super::term::{Shape, Term};

/// Natural-number carrier usable for codes.
pub trait Natural:
    Clone + Ord + Unsigned + Integer + Roots + CheckedAdd + CheckedMul + CheckedSub + From<u8>
{
}

impl<T> Natural for T where
    T: Clone + Ord + Unsigned + Integer + Roots + CheckedAdd + CheckedMul + CheckedSub + From<u8>
{
}

/// Number of reserved codes for the constants `K`, `S`, `I`.
pub const CONSTANT_CODES: u8 = 3;

/// `cantor(x, y) = (x + y)(x + y + 1) / 2 + y`.
pub fn cantor<N: Natural>(x: &N, y: &N) -> Option<N> {
    let w = x.checked_add(y)?;
    let w1 = w.checked_add(&N::one())?;
    // One of w, w + 1 is even; halve it before multiplying.
    let tri = if w.is_even() {
        (w.clone() / N::from(2)).checked_mul(&w1)?
    } else {
        w.checked_mul(&(w1 / N::from(2)))?
    };
    tri.checked_add(y)
}

/// Inverse of [`cantor`].
pub fn uncantor<N: Natural>(z: &N) -> (N, N) {
    let two = N::from(2);
    // Largest w with w(w+1)/2 <= z. The square root is computed in the
    // carrier type, so `8z + 1` may overflow a fixed-width type; fall back to
    // a search from the halved root estimate in that case.
    let w = match z
        .checked_mul(&N::from(8))
        .and_then(|v| v.checked_add(&N::one()))
    {
        Some(disc) => (disc.sqrt() - N::one()) / two.clone(),
        None => {
            let mut w = (z.clone() / two.clone()).sqrt() * two.clone();
            while triangle(&(w.clone() + N::one())).is_some_and(|t| t <= *z) {
                w = w + N::one();
            }
            while triangle(&w).is_none_or(|t| t > *z) {
                w = w - N::one();
            }
            w
        }
    };
    let t = triangle(&w).expect("triangle below z fits");
    let y = z.clone() - t;
    let x = w - y.clone();
    (x, y)
}

fn triangle<N: Natural>(w: &N) -> Option<N> {
    let w1 = w.checked_add(&N::one())?;
    if w.is_even() {
        (w.clone() / N::from(2)).checked_mul(&w1)
    } else {
        w.checked_mul(&(w1 / N::from(2)))
    }
}

/// Code of `term` in the carrier `N`, or `None` on overflow.
///
/// `K = 0`, `S = 1`, `I = 2`, `App(a, b) = cantor(code a, code b) + 3`.
pub fn encode_as<N: Natural>(term: &Term) -> Option<N> {
    enum Task<'a> {
        Visit(&'a Term),
        Combine,
    }
    let mut tasks = vec![Task::Visit(term)];
    let mut values: Vec<N> = Vec::new();
    while let Some(task) = tasks.pop() {
        match task {
            Task::Visit(t) => match t.shape() {
                Shape::K => values.push(N::zero()),
                Shape::S => values.push(N::one()),
                Shape::I => values.push(N::from(2)),
                Shape::App(l, r) => {
                    tasks.push(Task::Combine);
                    tasks.push(Task::Visit(r));
                    tasks.push(Task::Visit(l));
                }
            },
            Task::Combine => {
                let y = values.pop().expect("right operand");
                let x = values.pop().expect("left operand");
                values.push(cantor(&x, &y)?.checked_add(&N::from(CONSTANT_CODES))?);
            }
        }
    }
    values.pop()
}

/// Term whose code is `n`. Total: every natural decodes.
pub fn decode_from<N: Natural>(n: &N) -> Term {
    enum Task<N> {
        Visit(N),
        Combine,
    }
    let three = N::from(CONSTANT_CODES);
    let mut tasks = vec![Task::Visit(n.clone())];
    let mut terms: Vec<Term> = Vec::new();
    while let Some(task) = tasks.pop() {
        match task {
            Task::Visit(v) => {
                if v < three {
                    terms.push(if v.is_zero() {
                        Term::K
                    } else if v.is_one() {
                        Term::S
                    } else {
                        Term::I
                    });
                } else {
                    let (x, y) = uncantor(&(v - three.clone()));
                    tasks.push(Task::Combine);
                    tasks.push(Task::Visit(y));
                    tasks.push(Task::Visit(x));
                }
            }
            Task::Combine => {
                let r = terms.pop().expect("right subterm");
                let l = terms.pop().expect("left subterm");
                terms.push(Term::app(l, r));
            }
        }
    }
    terms.pop().expect("decoded term")
}
