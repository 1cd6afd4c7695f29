//! Closed combinatory terms over `K`, `S`, `I`.
//!
//! Application nodes are reference counted and carry their size and a
//! structural hash, so cloning, hashing and size queries are O(1). Equality,
//! dropping and coding are iterative: reduction can build very deep spines.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::Nat;

use super::nat;

#[derive(Clone)]
pub enum Term {
    K,
    S,
    I,
    App(Arc<AppNode>),
}

pub struct AppNode {
    left: Term,
    right: Term,
    apps: u64,
    hash: u64,
    code: OnceLock<Nat>,
    /// Head combinator of the spine and its argument count, capped at 3.
    head: Leaf,
    spine: u8,
    /// No redex anywhere inside.
    normal: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Leaf {
    K,
    S,
    I,
}

/// Borrowed view of a term's outermost constructor.
#[derive(Clone, Copy)]
pub enum Shape<'a> {
    K,
    S,
    I,
    App(&'a Term, &'a Term),
}

const fn mix(mut x: u64) -> u64 {
    x ^= x >> 33;
    x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
    x ^= x >> 33;
    x = x.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    x ^= x >> 33;
    x
}

impl Term {
    pub fn app(left: Term, right: Term) -> Term {
        let apps = left.apps().saturating_add(right.apps()).saturating_add(1);
        let hash = mix(left.structural_hash().rotate_left(17) ^ mix(right.structural_hash() ^ 0x9e37_79b9));
        let (head, spine, left_normal) = match &left {
            Term::K => (Leaf::K, 1, true),
            Term::S => (Leaf::S, 1, true),
            Term::I => (Leaf::I, 1, true),
            Term::App(n) => (n.head, (n.spine + 1).min(3), n.normal),
        };
        let stuck = match head {
            Leaf::I => false,
            Leaf::K => spine < 2,
            Leaf::S => spine < 3,
        };
        Term::App(Arc::new(AppNode {
            normal: stuck && left_normal && right.is_normal(),
            left,
            right,
            apps,
            hash,
            code: OnceLock::new(),
            head,
            spine,
        }))
    }

    /// The two sides of an application, moved out when this is the only
    /// reference.
    pub(crate) fn into_children(self) -> Option<(Term, Term)> {
        match self {
            Term::App(arc) => Some(match Arc::try_unwrap(arc) {
                Ok(mut node) => (
                    std::mem::replace(&mut node.left, Term::K),
                    std::mem::replace(&mut node.right, Term::K),
                ),
                Err(arc) => (arc.left.clone(), arc.right.clone()),
            }),
            _ => None,
        }
    }

    /// Identity of an application node that has other references.
    pub(crate) fn shared_ptr(&self) -> Option<usize> {
        match self {
            Term::App(arc) if Arc::strong_count(arc) > 1 => Some(Arc::as_ptr(arc) as usize),
            _ => None,
        }
    }

    /// Contains no redex.
    pub fn is_normal(&self) -> bool {
        match self {
            Term::App(node) => node.normal,
            _ => true,
        }
    }

    /// Left-associated application `head a1 a2 ...`.
    pub fn spine<I: IntoIterator<Item = Term>>(head: Term, args: I) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn shape(&self) -> Shape<'_> {
        match self {
            Term::K => Shape::K,
            Term::S => Shape::S,
            Term::I => Shape::I,
            Term::App(node) => Shape::App(&node.left, &node.right),
        }
    }

    /// Number of application nodes.
    pub fn apps(&self) -> u64 {
        match self {
            Term::App(node) => node.apps,
            _ => 0,
        }
    }

    /// Number of nodes, leaves included.
    pub fn node_count(&self) -> u64 {
        self.apps().saturating_mul(2).saturating_add(1)
    }

    pub(crate) fn structural_hash(&self) -> u64 {
        match self {
            Term::K => 0x4b,
            Term::S => 0x53,
            Term::I => 0x49,
            Term::App(node) => node.hash,
        }
    }

    /// Gödel code of this term, computed once per node and cached.
    pub fn nat(&self) -> Nat {
        match self {
            Term::K => Nat::from(0u8),
            Term::S => Nat::from(1u8),
            Term::I => Nat::from(2u8),
            Term::App(node) => node_code(node).clone(),
        }
    }

    pub(crate) fn with_nat<R>(&self, f: impl FnOnce(&Nat) -> R) -> R {
        match self {
            Term::App(node) => f(node_code(node)),
            _ => f(&self.nat()),
        }
    }

    /// Code as a `u64` when it fits.
    pub fn small_code(&self) -> Option<u64> {
        nat::encode_as::<u64>(self)
    }
}

fn leaf_code(t: &Term) -> Option<Nat> {
    match t {
        Term::K => Some(Nat::from(0u8)),
        Term::S => Some(Nat::from(1u8)),
        Term::I => Some(Nat::from(2u8)),
        Term::App(node) => node.code.get().cloned(),
    }
}

fn node_code(root: &Arc<AppNode>) -> &Nat {
    if let Some(c) = root.code.get() {
        return c;
    }
    let mut stack: Vec<&AppNode> = vec![root];
    while let Some(&node) = stack.last() {
        if node.code.get().is_some() {
            stack.pop();
            continue;
        }
        let mut ready = true;
        for child in [&node.left, &node.right] {
            if let Term::App(c) = child {
                if c.code.get().is_none() {
                    stack.push(c);
                    ready = false;
                }
            }
        }
        if ready {
            let x = leaf_code(&node.left).expect("left child coded");
            let y = leaf_code(&node.right).expect("right child coded");
            let z = nat::cantor(&x, &y).expect("bignum cantor") + Nat::from(nat::CONSTANT_CODES);
            let _ = node.code.set(z);
            stack.pop();
        }
    }
    root.code.get().expect("code computed")
}

/// Detach a child this node is the sole owner of.
fn take_unique(t: &mut Term) -> Option<Arc<AppNode>> {
    match t {
        Term::App(a) if Arc::strong_count(a) == 1 => match std::mem::replace(t, Term::K) {
            Term::App(a) => Some(a),
            _ => unreachable!(),
        },
        _ => None,
    }
}

impl Drop for AppNode {
    fn drop(&mut self) {
        // Follow one child in place and stack the other, so long spines are
        // freed without recursion and usually without allocating.
        let mut stack = Vec::new();
        let next = |node: &mut AppNode, stack: &mut Vec<Arc<AppNode>>| {
            match (take_unique(&mut node.left), take_unique(&mut node.right)) {
                (Some(l), Some(r)) => {
                    stack.push(r);
                    Some(l)
                }
                (l, r) => l.or(r),
            }
        };
        let mut cur = next(self, &mut stack);
        while let Some(arc) = cur.take().or_else(|| stack.pop()) {
            if let Ok(mut node) = Arc::try_unwrap(arc) {
                cur = next(&mut node, &mut stack);
            }
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        let mut stack = vec![(self, other)];
        while let Some((a, b)) = stack.pop() {
            match (a, b) {
                (Term::K, Term::K) | (Term::S, Term::S) | (Term::I, Term::I) => {}
                (Term::App(x), Term::App(y)) => {
                    if Arc::ptr_eq(x, y) {
                        continue;
                    }
                    if x.hash != y.hash || x.apps != y.apps {
                        return false;
                    }
                    stack.push((&x.right, &y.right));
                    stack.push((&x.left, &y.left));
                }
                _ => return false,
            }
        }
        true
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.structural_hash());
    }
}

/// Prints the literal syntax `K | S | I | (t u)`, with left-nested
/// applications flattened: `((S K) K)` prints as `(S K K)`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        enum Tok<'a> {
            Term(&'a Term),
            Text(&'static str),
        }
        let mut stack = vec![Tok::Term(self)];
        while let Some(tok) = stack.pop() {
            match tok {
                Tok::Text(s) => f.write_str(s)?,
                Tok::Term(t) => match t.shape() {
                    Shape::K => f.write_str("K")?,
                    Shape::S => f.write_str("S")?,
                    Shape::I => f.write_str("I")?,
                    Shape::App(..) => {
                        let mut args = Vec::new();
                        let mut head = t;
                        while let Shape::App(l, r) = head.shape() {
                            args.push(r);
                            head = l;
                        }
                        stack.push(Tok::Text(")"));
                        for a in args.iter() {
                            stack.push(Tok::Term(a));
                            stack.push(Tok::Text(" "));
                        }
                        stack.push(Tok::Term(head));
                        f.write_str("(")?;
                    }
                },
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_flattens_left_spines() {
        let t = Term::spine(Term::S, [Term::K, Term::app(Term::K, Term::I)]);
        assert_eq!(t.to_string(), "(S K (K I))");
    }

    #[test]
    fn deep_spines_do_not_overflow_the_stack() {
        let mut t = Term::I;
        for _ in 0..200_000 {
            t = Term::app(t, Term::K);
        }
        let u = t.clone();
        assert_eq!(t, u);
        assert_eq!(t.apps(), 200_000);
        drop(t);
        drop(u);
    }

    #[test]
    fn structural_equality_ignores_sharing() {
        let a = Term::app(Term::K, Term::S);
        let b = Term::app(Term::K, Term::S);
        assert_eq!(Term::app(a.clone(), a), Term::app(b.clone(), b));
        assert_ne!(Term::app(Term::K, Term::S), Term::app(Term::S, Term::K));
    }
}
