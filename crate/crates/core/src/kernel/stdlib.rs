//! Named combinators used by the constructions.

use std::sync::OnceLock;

use super::abstraction::{lambda, OpenTerm};
use super::code::Code;
use super::reduce::{apply_all, Fuel, Outcome};
use super::term::Term;

#[derive(Debug)]
pub struct Stdlib {
    pub i: Code,
    pub k: Code,
    pub s: Code,
    /// Composition, `B f g x = f (g x)`; `B = S (K S) K`.
    pub b: Code,
    /// `λx y z. z x y`
    pub pair: Code,
    /// `λp. p K`
    pub fst: Code,
    /// `λp. p (K I)`
    pub snd: Code,
}

impl Stdlib {
    fn build() -> Stdlib {
        let b = Term::spine(Term::S, [Term::app(Term::K, Term::S), Term::K]);
        let v = OpenTerm::var;
        let pair = lambda(
            &["x", "y", "z"],
            OpenTerm::apply(v("z"), [v("x"), v("y")]),
        )
        .expect("closed");
        let fst = lambda(&["p"], OpenTerm::app(v("p"), Term::K.into())).expect("closed");
        let snd = lambda(
            &["p"],
            OpenTerm::app(v("p"), Term::app(Term::K, Term::I).into()),
        )
        .expect("closed");
        Stdlib {
            i: Code::I,
            k: Code::K,
            s: Code::S,
            b: Code::from_term(b),
            pair,
            fst,
            snd,
        }
    }

    /// `COMP(n, m) = B n m`, unreduced; it tracks `n ∘ m`.
    pub fn comp(&self, n: &Code, m: &Code) -> Code {
        self.b.app(n).app(m)
    }

    /// Normal form of `PAIR a b`.
    pub fn pair_of(&self, a: &Code, b: &Code, fuel: Fuel) -> Outcome {
        apply_all(&self.pair, &[a, b], fuel)
    }

    pub fn fst_of(&self, p: &Code, fuel: Fuel) -> Outcome {
        super::reduce::apply(&self.fst, p, fuel)
    }

    pub fn snd_of(&self, p: &Code, fuel: Fuel) -> Outcome {
        super::reduce::apply(&self.snd, p, fuel)
    }
}

pub fn stdlib() -> &'static Stdlib {
    static LIB: OnceLock<Stdlib> = OnceLock::new();
    LIB.get_or_init(Stdlib::build)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::reduce::apply;

    #[test]
    fn named_codes() {
        let lib = stdlib();
        assert_eq!(lib.i, Code::from(2));
        assert_eq!(lib.k, Code::from(0));
        assert_eq!(lib.s, Code::from(1));
    }

    #[test]
    fn projections_of_small_pairs() {
        let lib = stdlib();
        let fuel = Fuel::default();
        for a in 0..=50u64 {
            for b in [0u64, 7, 50] {
                let (a, b) = (Code::from(a), Code::from(b));
                let p = lib.pair_of(&a, &b, fuel).into_value().unwrap();
                // Projections return normal forms: code 6 is `(I K)`.
                assert_eq!(lib.fst_of(&p, fuel).into_value(), apply(&lib.i, &a, fuel).into_value());
                assert_eq!(lib.snd_of(&p, fuel).into_value(), apply(&lib.i, &b, fuel).into_value());
            }
        }
    }

    #[test]
    fn comp_composes() {
        let lib = stdlib();
        let fuel = Fuel::default();
        // K 4 after I is K 4.
        let k4 = apply(&lib.k, &Code::from(4), fuel).into_value().unwrap();
        let c = lib.comp(&k4, &lib.i);
        assert_eq!(apply(&c, &Code::from(11), fuel).into_value(), Some(Code::from(4)));
    }
}
