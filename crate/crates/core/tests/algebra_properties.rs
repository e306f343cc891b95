//! Sparse group-algebra arithmetic, the cache format, coordinates in I and the
//! generic representation tools.

use proptest::prelude::*;
use steinweil::cli::cache::{decode, encode, CacheKey, CacheRead};
use steinweil::cli::run::random_words;
use steinweil::ffield::{AdditiveCharacter, Fe, Field, FieldDescriptor};
use steinweil::repcore::{commutant_dim, intertwiner_space, relation_certificate, spin, unit};
use steinweil::spgroup::SymplecticSpace;
use steinweil::steinberg::{GaVector, GroupAlgebra, SteinbergModule};
use steinweil::weilmod::{weil_representation, y_basis, Parity};

fn setup(n: usize, q: u32, m: u32) -> (SymplecticSpace, Field) {
    let fq = FieldDescriptor::create(q, 1, None).unwrap();
    (SymplecticSpace::new(n, &fq).unwrap(), FieldDescriptor::create(2, m, None).unwrap())
}

/// A random sparse vector: `len` terms on random group elements.
fn random_vector(ga: &GroupAlgebra, seed: u64, len: usize) -> GaVector {
    let s = ga.space();
    let gens = s.generators_sp();
    let order = ga.field().order();
    let elems = random_words(s, &gens, len, 9, seed);
    ga.accumulate(elems.iter().enumerate().map(|(i, g)| (s.key(g), Fe(1 + (i as u32 * 7 + seed as u32) % (order - 1)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn vector_space_laws(seed in any::<u64>(), c in 1u32..4) {
        let (s, f) = setup(2, 3, 2);
        let ga = GroupAlgebra::new(&s, &f);
        let (x, y, z) = (random_vector(&ga, seed, 30), random_vector(&ga, seed ^ 1, 30), random_vector(&ga, seed ^ 2, 30));
        let c = Fe(c);
        prop_assert_eq!(ga.add(&x, &y).unwrap(), ga.add(&y, &x).unwrap());
        prop_assert_eq!(ga.add(&ga.add(&x, &y).unwrap(), &z).unwrap(), ga.add(&x, &ga.add(&y, &z).unwrap()).unwrap());
        prop_assert!(ga.sub(&x, &x).unwrap().is_empty());
        let lhs = ga.scale(&ga.add(&x, &y).unwrap(), c).unwrap();
        let rhs = ga.add(&ga.scale(&x, c).unwrap(), &ga.scale(&y, c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(x.terms().windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(x.terms().iter().all(|(_, c)| !c.is_zero()));
    }

    #[test]
    fn multiplication_laws(seed in any::<u64>()) {
        let (s, f) = setup(1, 5, 4);
        let ga = GroupAlgebra::new(&s, &f);
        let gens = s.generators_sp();
        let w = random_words(&s, &gens, 2, 7, seed);
        let (g, h) = (w[0], w[1]);
        let x = random_vector(&ga, seed, 12);
        let y = random_vector(&ga, seed ^ 5, 12);
        let z = random_vector(&ga, seed ^ 9, 12);
        prop_assert_eq!(ga.left_mul(&g, &ga.left_mul(&h, &x).unwrap()).unwrap(), ga.left_mul(&s.mul(&g, &h), &x).unwrap());
        prop_assert_eq!(ga.left_mul(&g, &x).unwrap(), ga.product(&ga.basis_element(&g), &x).unwrap());
        prop_assert_eq!(ga.right_mul(&x, &g).unwrap(), ga.product(&x, &ga.basis_element(&g)).unwrap());
        let xy_z = ga.product(&ga.product(&x, &y).unwrap(), &z).unwrap();
        let x_yz = ga.product(&x, &ga.product(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        let bar = |v: &GaVector| ga.involution(v).unwrap();
        prop_assert_eq!(bar(&ga.product(&x, &y).unwrap()), ga.product(&bar(&y), &bar(&x)).unwrap());
        prop_assert_eq!(bar(&bar(&x)), x);
    }

    #[test]
    fn cache_encoding_round_trips(seed in any::<u64>(), len in 0usize..60) {
        let (s, f) = setup(2, 3, 2);
        let ga = GroupAlgebra::new(&s, &f);
        let x = random_vector(&ga, seed, len);
        let key = CacheKey::for_algebra(&ga, "x");
        let text = encode(&key, &ga, &x).unwrap();
        prop_assert_eq!(decode(&text, &key, &ga), CacheRead::Hit(x));
        let cut = (seed as usize) % text.len().max(1);
        prop_assert!(!matches!(decode(&text[..cut], &key, &ga), CacheRead::Hit(_)));
    }

    #[test]
    fn coordinates_round_trip_at_one_five(seed in any::<u64>()) {
        let (s, f) = setup(1, 5, 4);
        let sm = SteinbergModule::build(&s, &f, 1 << 24).unwrap();
        let coords: Vec<Fe> = (0..sm.dim()).map(|i| Fe(((seed >> (i % 60)) as u32 ^ i as u32) % f.order())).collect();
        let x = sm.recombine(&coords).unwrap();
        prop_assert_eq!(sm.coords_in_i(&x).unwrap(), coords);
    }
}

/// 100 random combinations of {u·e} at (2,3), each rebuilt independently as
/// Σ c_u·(u·e) with plain left multiplication.
#[test]
fn coordinates_round_trip_at_two_three() {
    let (s, f) = setup(2, 3, 2);
    let sm = SteinbergModule::build(&s, &f, 1 << 24).unwrap();
    let ga = sm.algebra();
    let u = sm.unipotent();
    for seed in 0..100u64 {
        let picks: Vec<(usize, Fe)> = (0..4).map(|k| (((seed * 31 + k * 17) as usize * 7919) % u.len(), Fe(1 + ((seed + k) % 3) as u32))).collect();
        let mut coords = vec![Fe::ZERO; sm.dim()];
        let mut parts = Vec::new();
        for &(i, c) in &picks {
            coords[i] = f.add(coords[i], c);
            parts.push((c, ga.left_mul(&u[i], sm.e()).unwrap()));
        }
        let refs: Vec<(Fe, &GaVector)> = parts.iter().map(|(c, x)| (*c, x)).collect();
        let x = ga.linear_combination(&refs).unwrap();
        assert_eq!(sm.recombine(&coords).unwrap(), x);
        assert_eq!(sm.coords_in_i(&x).unwrap(), coords);
    }
}

#[test]
fn representation_tools_on_the_weil_module() {
    for (n, q, m) in [(1, 3, 2), (1, 5, 4), (2, 3, 2)] {
        let (s, f) = setup(n, q, m);
        let lam = AdditiveCharacter::standard(s.field(), &f).unwrap();
        let gens = s.generators_sp();
        let y = weil_representation(&s, &lam, &gens).unwrap();
        let cert = relation_certificate(&y, &s, 200, 7, 2_000_000).unwrap();
        assert!(cert.is_pass(), "({n},{q}): {cert:?}");
        let plus = y.subrepresentation(&y_basis(&s, &f, Parity::Plus)).unwrap();
        assert_eq!(intertwiner_space(&plus, &plus).unwrap().len(), commutant_dim(&plus).unwrap());
        assert_eq!(intertwiner_space(&y, &y).unwrap().len(), commutant_dim(&y).unwrap());
        for k in 0..y.dim.min(4) {
            let once = spin(&y, &[unit(y.dim, k)]).unwrap();
            let twice = spin(&y, &once.basis()).unwrap();
            assert_eq!(once.dim(), twice.dim());
            assert!(once.basis().iter().all(|v| twice.contains(v)));
            let bigger = spin(&y, &[unit(y.dim, k), unit(y.dim, (k + 1) % y.dim)]).unwrap();
            assert!(once.basis().iter().all(|v| bigger.contains(v)));
        }
    }
}
