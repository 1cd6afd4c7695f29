use perlab::fixpoint::all_pers;
use perlab::kernel::{apply, decode, encode, Code, Fuel, Term, UniverseSpec};
use perlab::{exponential, includes, intersect, quotient, same_relation, Budget, Nat, Per};
use proptest::prelude::*;

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::K), Just(Term::S), Just(Term::I)];
    leaf.prop_recursive(5, 40, 2, |inner| (inner.clone(), inner).prop_map(|(l, r)| Term::app(l, r)))
}

/// A PER on codes `0..6`: each code is left out or put in one of three blocks.
fn small_per() -> impl Strategy<Value = Per> {
    prop::collection::vec(prop::option::of(0..3usize), 6).prop_map(|slots| {
        let mut blocks = vec![Vec::new(); 3];
        for (code, slot) in slots.into_iter().enumerate() {
            if let Some(b) = slot {
                blocks[b].push(Code::from(code as u64));
            }
        }
        Per::new(blocks.into_iter().filter(|b| !b.is_empty()).collect()).unwrap()
    })
}

/// A PER on codes `0..3`, small enough for exponential oracles.
fn tiny_per() -> impl Strategy<Value = Per> {
    let codes: Vec<Code> = (0..3u64).map(Code::from).collect();
    let all = all_pers(&codes);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn pairs(r: &Per) -> Vec<(Code, Code)> {
    let c = r.carrier();
    let mut out = Vec::new();
    for a in &c {
        for b in &c {
            if r.related(a, b) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

fn brute_includes(r: &Per, s: &Per) -> bool {
    pairs(r).iter().all(|(a, b)| s.related(a, b))
}

fn tiny_budget() -> Budget {
    Budget::new(UniverseSpec::Terms(1), Fuel::new(100).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn decode_inverts_encode(t in term()) {
        prop_assert_eq!(decode(&encode(&t)), t);
    }

    #[test]
    fn encode_inverts_decode(n in any::<u64>()) {
        let n = Nat::from(n);
        prop_assert_eq!(encode(&decode(&n)), n);
    }

    #[test]
    fn includes_matches_pair_enumeration(r in small_per(), s in small_per()) {
        prop_assert_eq!(includes(&r, &s).holds(), brute_includes(&r, &s));
    }

    #[test]
    fn includes_is_a_partial_order(r in small_per(), s in small_per(), t in small_per()) {
        prop_assert!(includes(&r, &r).holds());
        if includes(&r, &s).holds() && includes(&s, &r).holds() {
            prop_assert!(same_relation(&r, &s).holds());
        }
        if includes(&r, &s).holds() && includes(&s, &t).holds() {
            prop_assert!(includes(&r, &t).holds());
        }
    }

    #[test]
    fn intersect_is_the_greatest_lower_bound(r in small_per(), s in small_per(), t in small_per()) {
        let meet = intersect(&[r.clone(), s.clone()]).unwrap();
        for a in 0..6u64 {
            for b in 0..6u64 {
                let (a, b) = (Code::from(a), Code::from(b));
                prop_assert_eq!(meet.related(&a, &b), r.related(&a, &b) && s.related(&a, &b));
            }
        }
        if includes(&t, &r).holds() && includes(&t, &s).holds() {
            prop_assert!(includes(&t, &meet).holds());
        }
    }

    #[test]
    fn larger_families_have_smaller_meets(r in small_per(), s in small_per(), t in small_per()) {
        let two = intersect(&[r.clone(), s.clone()]).unwrap();
        let three = intersect(&[r, s, t]).unwrap();
        prop_assert!(includes(&three, &two).holds());
    }

    #[test]
    fn quotient_partitions_the_carrier(r in small_per()) {
        let blocks = quotient(&r);
        let mut seen: Vec<Code> = blocks.iter().flatten().cloned().collect();
        let n = seen.len();
        seen.sort();
        seen.dedup();
        prop_assert_eq!(seen.len(), n);
        let mut carrier = r.carrier();
        carrier.sort();
        prop_assert_eq!(seen, carrier);
        for (i, x) in blocks.iter().enumerate() {
            for (j, y) in blocks.iter().enumerate() {
                prop_assert_eq!(r.related(&x[0], &y[0]), i == j);
            }
        }
    }

    #[test]
    fn exponential_matches_its_definition(r in tiny_per(), s in tiny_per()) {
        let b = tiny_budget();
        let fuel = b.fuel();
        let exp = exponential(&r, &s, &b).unwrap();
        let rel = pairs(&r);
        let image = |n: &Code, a: &Code| apply(n, a, fuel).into_value();
        for n in b.universe() {
            for m in b.universe() {
                let oracle = rel.iter().all(|(a, a2)| match (image(n, a), image(m, a2)) {
                    (Some(x), Some(y)) => s.related(&x, &y),
                    _ => false,
                });
                prop_assert_eq!(exp.related(n, m), oracle, "{:?} {:?}", n, m);
            }
        }
    }

    #[test]
    fn exponential_is_antitone_in_its_source(x in tiny_per(), y in tiny_per(), a in tiny_per()) {
        let b = tiny_budget();
        if includes(&x, &y).holds() {
            let ey = exponential(&y, &a, &b).unwrap();
            let ex = exponential(&x, &a, &b).unwrap();
            prop_assert!(includes(&ey, &ex).holds());
        }
    }
}
