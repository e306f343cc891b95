//! Field arithmetic and additive characters: axioms as property tests, plus
//! small hand-computed oracles.

use proptest::prelude::*;
use steinweil::ffield::*;

const FIELDS: &[(u32, u32)] = &[(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2), (13, 1), (2, 12)];

fn field(i: usize) -> Field {
    let (p, k) = FIELDS[i];
    FieldDescriptor::create(p, k, None).unwrap()
}

fn field_and_elements(count: usize) -> impl Strategy<Value = (Field, Vec<Fe>)> {
    (0..FIELDS.len()).prop_flat_map(move |i| {
        let f = field(i);
        let order = f.order();
        (Just(f), proptest::collection::vec((0..order).prop_map(Fe), count))
    })
}

proptest! {
    #[test]
    fn ring_axioms((f, xs) in field_and_elements(3)) {
        let (a, b, c) = (xs[0], xs[1], xs[2]);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
        prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
        prop_assert_eq!(f.mul(a, Fe::ONE), a);
    }

    #[test]
    fn inverses_and_powers((f, xs) in field_and_elements(2), e in -40i64..40) {
        let a = xs[0];
        if a.is_zero() {
            prop_assert!(f.inv(a).is_err());
        } else {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
            prop_assert_eq!(f.pow(a, f.order() as i64 - 1), Fe::ONE);
            prop_assert_eq!(f.mul(f.pow(a, e), f.pow(a, -e)), Fe::ONE);
            prop_assert_eq!(f.pow(a, e + 1), f.mul(f.pow(a, e), a));
        }
        prop_assert_eq!(f.pow(a, f.order() as i64), a);
    }

    #[test]
    fn frobenius_and_trace((f, xs) in field_and_elements(2)) {
        let (a, b) = (xs[0], xs[1]);
        let p = f.characteristic() as i64;
        prop_assert_eq!(f.frobenius(a), f.pow(a, p));
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        let tr = |x| f.trace_to_prime(x);
        prop_assert_eq!(tr(f.add(a, b)), (tr(a) + tr(b)) % f.characteristic());
    }

    #[test]
    fn coefficient_round_trip((f, xs) in field_and_elements(1)) {
        let a = xs[0];
        prop_assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
        prop_assert_eq!(f.parse_digits(&f.digits_string(a)).unwrap(), a);
    }
}

/// (q, coefficient field) pairs with p | l^m − 1.
fn character_pairs() -> Vec<(Field, Field)> {
    [(3, 1, 2, 2), (5, 1, 2, 4), (7, 1, 2, 3), (9, 2, 2, 6), (3, 1, 7, 1), (5, 1, 11, 1), (13, 1, 2, 12), (49, 2, 2, 3)]
        .iter()
        .map(|&(q, k, l, m)| {
            let p = if k == 1 { q } else { (2..q).find(|d| q % d == 0).unwrap() };
            (FieldDescriptor::create(p, k, None).unwrap(), FieldDescriptor::create_coefficient(l, m, None, p).unwrap())
        })
        .collect()
}

#[test]
fn characters_are_nontrivial_homomorphisms() {
    for (fq, f) in character_pairs() {
        let lam = AdditiveCharacter::standard(&fq, &f).unwrap();
        assert_eq!(f.pow(lam.zeta(), fq.characteristic() as i64), Fe::ONE);
        assert_ne!(lam.zeta(), Fe::ONE);
        let mut sum = Fe::ZERO;
        for a in fq.elements() {
            sum = f.add(sum, lam.eval(a));
            for b in fq.elements() {
                assert_eq!(lam.eval(fq.add(a, b)), f.mul(lam.eval(a), lam.eval(b)));
            }
        }
        assert_eq!(sum, Fe::ZERO, "Σ λ(α) over F_{}", fq.order());
        assert!(fq.elements().any(|a| lam.eval(a) != Fe::ONE));
        for k1 in fq.nonzero() {
            for k2 in fq.nonzero() {
                let twice = lam.twisted(k1).unwrap().twisted(k2).unwrap();
                let once = lam.twisted(fq.mul(k1, k2)).unwrap();
                for a in fq.elements() {
                    assert_eq!(twice.eval(a), once.eval(a));
                }
            }
        }
    }
}

#[test]
fn gauss_sum_by_expansion() {
    for (fq, f) in character_pairs() {
        let lam = AdditiveCharacter::standard(&fq, &f).unwrap();
        let mut g = Fe::ZERO;
        for a in fq.elements() {
            g = f.add(g, lam.eval(fq.mul(a, a)));
        }
        assert_eq!(lam.gauss_sum().unwrap(), g);
        if f.characteristic() == 2 {
            assert_eq!(g, Fe::ONE);
        }
    }
}

#[test]
fn squares_against_enumeration() {
    for i in 0..FIELDS.len() {
        let f = field(i);
        if f.characteristic() == 2 {
            continue;
        }
        let squares: std::collections::BTreeSet<u32> = f.nonzero().map(|b| f.mul(b, b).0).collect();
        assert_eq!(squares.len() as u32, (f.order() - 1) / 2);
        for a in f.nonzero() {
            assert_eq!(f.is_square(a).unwrap(), squares.contains(&a.0));
            for b in f.nonzero() {
                let (x, y) = (f.is_square(a).unwrap(), f.is_square(b).unwrap());
                assert_eq!(f.is_square(f.mul(a, b)).unwrap(), x == y);
            }
        }
        assert!(f.is_square(Fe::ZERO).is_err());
        let t = f.transversal();
        assert_eq!(t.len() as u32, (f.order() - 1) / 2);
        let mut all: Vec<u32> = t.iter().chain(t.iter().map(|&a| f.neg(a)).collect::<Vec<_>>().iter()).map(|a| a.0).collect();
        all.sort();
        all.dedup();
        assert_eq!(all, f.nonzero().map(|a| a.0).collect::<Vec<_>>());
    }
    let f7 = FieldDescriptor::create(7, 1, None).unwrap();
    assert!(f7.is_square(Fe(2)).unwrap());
    assert_eq!(f7.transversal(), vec![Fe(1), Fe(2), Fe(3)]);
}

/// GF(9) = F_3[g]/(g²+1) by hand: (a + b g) with g² = −1.
#[test]
fn gf9_trace_by_hand() {
    let f9 = FieldDescriptor::create(3, 2, Some(vec![1, 0, 1])).unwrap();
    let mul = |(a, b): (u32, u32), (c, d): (u32, u32)| ((a * c + 2 * b * d) % 3, (a * d + b * c) % 3);
    for a in 0..3 {
        for b in 0..3 {
            let x = (a, b);
            let x3 = mul(mul(x, x), x);
            let tr = ((x.0 + x3.0) % 3, (x.1 + x3.1) % 3);
            assert_eq!(tr.1, 0, "trace lies in the prime field");
            let code = f9.from_coeffs(&[a, b]).unwrap();
            assert_eq!(f9.trace_to_prime(code), tr.0);
        }
    }
    assert_eq!(f9.trace_to_prime(f9.from_coeffs(&[0, 1]).unwrap()), 0);
}

#[test]
fn field_creation_errors() {
    assert!(FieldDescriptor::create(4, 1, None).is_err());
    assert!(FieldDescriptor::create(2, 0, None).is_err());
    assert!(FieldDescriptor::create(2, 2, Some(vec![1, 0, 1])).is_err());
    assert!(FieldDescriptor::create_coefficient(3, 1, None, 3).is_err());
    assert!(FieldDescriptor::create_coefficient(2, 3, None, 3).is_err());
    let f4 = FieldDescriptor::create(2, 2, None).unwrap();
    assert_eq!(f4.modulus(), &[1, 1, 1]);
    let z = f4.generator();
    assert_eq!(f4.mul(z, f4.mul(z, z)), Fe::ONE);
    assert_eq!(f4.add(z, f4.mul(z, z)), Fe::ONE);
}
