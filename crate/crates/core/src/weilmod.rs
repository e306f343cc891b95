//! The monomial Sp_M-module X on basis (E_v)_{v∈N}, its pieces X^±, X^±_{α,i},
//! X^±_i, the Heisenberg group H_0 with its representation J on Y, and the
//! Weil representation P of Sp on Y.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::characters::theta;
use crate::error::{Error, Result};
use crate::ffield::{AdditiveCharacter, Fe, Field};
use crate::outcome::{Tally, Verdict};
use crate::repcore::{
    certify_irreducible, commutant_dim, find_invertible, homomorphism_exhaustive, intertwiner_space, is_isomorphic,
    relation_certificate, unit, Matrix, Representation,
};
use crate::spgroup::{SympElement, SymplecticSpace};

// ---------------------------------------------------------------------------
// indexing of N
// ---------------------------------------------------------------------------

/// Index of v = Σ α_i v_i: base-q with α_1 most significant.
pub fn n_key(space: &SymplecticSpace, coords: &[Fe]) -> usize {
    let q = space.q() as usize;
    coords.iter().fold(0, |acc, x| acc * q + x.0 as usize)
}

pub fn n_coords(space: &SymplecticSpace, mut key: usize) -> Vec<Fe> {
    let q = space.q() as usize;
    let mut v = vec![Fe::ZERO; space.rank()];
    for x in v.iter_mut().rev() {
        *x = Fe((key % q) as u32);
        key /= q;
    }
    v
}

pub fn n_size(space: &SymplecticSpace) -> usize {
    (space.q() as usize).pow(space.rank() as u32)
}

pub fn neg_key(space: &SymplecticSpace, key: usize) -> usize {
    let f = space.field();
    let c: Vec<Fe> = n_coords(space, key).iter().map(|&x| f.neg(x)).collect();
    n_key(space, &c)
}

/// Canonical representative of {v, −v}: the smaller index, i.e. leading coefficient in T_q.
pub fn canonical_pm(space: &SymplecticSpace, key: usize) -> usize {
    key.min(neg_key(space, key))
}

pub fn pm_representatives(space: &SymplecticSpace) -> Vec<usize> {
    (1..n_size(space)).filter(|&k| canonical_pm(space, k) == k).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn symbol(self) -> &'static str {
        match self {
            Parity::Plus => "+",
            Parity::Minus => "-",
        }
    }
}

/// E^±_v = E_v ± E_{−v} as a vector of X (or ε^±_v in Y); E_v itself when p = 2.
pub fn pm_vector(space: &SymplecticSpace, target: &Field, key: usize, parity: Parity) -> Vec<Fe> {
    let mut x = vec![Fe::ZERO; n_size(space)];
    x[key] = Fe::ONE;
    if space.field().characteristic() == 2 {
        return x;
    }
    let nk = neg_key(space, key);
    let s = match parity {
        Parity::Plus => Fe::ONE,
        Parity::Minus => target.neg(Fe::ONE),
    };
    x[nk] = target.add(x[nk], s);
    x
}

// ---------------------------------------------------------------------------
// X
// ---------------------------------------------------------------------------

/// R(g)E_v = χ_{av}(s) E_{av} for g = s·a ∈ Sp_M. Since s fixes N modulo M,
/// av is the N-part of gv and χ_{av}(s) = λ(⟨gv, av⟩).
pub fn x_action(space: &SymplecticSpace, lambda: &AdditiveCharacter, g: &SympElement, coords: &[Fe]) -> Result<(Fe, Vec<Fe>)> {
    if !space.in_sp_m(g) {
        return Err(Error::Group("the module X is defined over Sp_M".into()));
    }
    let v = space.n_vector(coords);
    let gv = space.apply(g, &v);
    let av = space.n_vector(&gv[space.rank()..]);
    Ok((lambda.eval(space.form(&gv, &av)), gv[space.rank()..].to_vec()))
}

fn monomial_matrix(space: &SymplecticSpace, target: &Field, f: impl Fn(&[Fe]) -> Result<(Fe, Vec<Fe>)>) -> Result<Matrix> {
    let d = n_size(space);
    let mut m = Matrix::zeros(target, d, d);
    for k in 0..d {
        let (s, img) = f(&n_coords(space, k))?;
        m.set(n_key(space, &img), k, s);
    }
    Ok(m)
}

pub fn x_matrix(space: &SymplecticSpace, lambda: &AdditiveCharacter, g: &SympElement) -> Result<Matrix> {
    monomial_matrix(space, lambda.target(), |c| x_action(space, lambda, g, c))
}

/// X with basis (E_v)_{v∈N} in index order.
pub fn x_representation(space: &SymplecticSpace, lambda: &AdditiveCharacter, gens: &[(String, SympElement)]) -> Result<Representation> {
    let mats = gens.iter().map(|(_, g)| x_matrix(space, lambda, g)).collect::<Result<Vec<_>>>()?;
    Representation::new(
        lambda.target(),
        n_size(space),
        gens.iter().map(|(l, _)| l.clone()).collect(),
        Some(gens.iter().map(|(_, g)| *g).collect()),
        mats,
    )
}

pub fn x_pm_basis(space: &SymplecticSpace, target: &Field, parity: Parity) -> Vec<Vec<Fe>> {
    pm_representatives(space).into_iter().map(|k| pm_vector(space, target, k, parity)).collect()
}

/// Keys of α v_i + α_{i+1} v_{i+1} + … + α_n v_n.
pub fn alpha_i_keys(space: &SymplecticSpace, alpha: Fe, i: usize) -> Vec<usize> {
    (0..n_size(space))
        .filter(|&k| {
            let c = n_coords(space, k);
            c[..i - 1].iter().all(|x| x.is_zero()) && c[i - 1] == alpha
        })
        .collect()
}

pub fn x_alpha_i_basis(space: &SymplecticSpace, target: &Field, parity: Parity, alpha: Fe, i: usize) -> Result<Vec<Vec<Fe>>> {
    if alpha.is_zero() || i == 0 || i > space.rank() {
        return Err(Error::Group(format!("invalid (α, i) = ({}, {i})", alpha.0)));
    }
    Ok(alpha_i_keys(space, alpha, i).into_iter().map(|k| pm_vector(space, target, k, parity)).collect())
}

pub fn x_i_basis(space: &SymplecticSpace, target: &Field, parity: Parity, i: usize) -> Result<Vec<Vec<Fe>>> {
    let mut out = Vec::new();
    for a in space.field().transversal() {
        out.extend(x_alpha_i_basis(space, target, parity, a, i)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Heisenberg group and J
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeisenbergElement {
    pub alpha: Fe,
    pub v: Vec<Fe>,
}

pub fn heisenberg_mul(space: &SymplecticSpace, a: &HeisenbergElement, b: &HeisenbergElement) -> HeisenbergElement {
    let f = space.field();
    let alpha = f.add(f.add(a.alpha, b.alpha), space.form(&a.v, &b.v));
    let v = a.v.iter().zip(&b.v).map(|(&x, &y)| f.add(x, y)).collect();
    HeisenbergElement { alpha, v }
}

pub fn heisenberg_identity(space: &SymplecticSpace) -> HeisenbergElement {
    HeisenbergElement { alpha: Fe::ZERO, v: space.zero_vector() }
}

pub fn heisenberg_inverse(space: &SymplecticSpace, a: &HeisenbergElement) -> HeisenbergElement {
    let f = space.field();
    HeisenbergElement { alpha: f.neg(a.alpha), v: a.v.iter().map(|&x| f.neg(x)).collect() }
}

/// All q^{2n+1} elements.
pub fn heisenberg_elements(space: &SymplecticSpace) -> Vec<HeisenbergElement> {
    let q = space.q() as u64;
    let d = space.dim();
    let total = q.pow(d as u32 + 1);
    (0..total)
        .map(|mut code| {
            let alpha = Fe((code % q) as u32);
            code /= q;
            let v = (0..d)
                .map(|_| {
                    let x = Fe((code % q) as u32);
                    code /= q;
                    x
                })
                .collect();
            HeisenbergElement { alpha, v }
        })
        .collect()
}

/// ᵍ(α, v) = (α, gv).
pub fn heisenberg_conjugate(space: &SymplecticSpace, g: &SympElement, h: &HeisenbergElement) -> HeisenbergElement {
    HeisenbergElement { alpha: h.alpha, v: space.apply(g, &h.v) }
}

/// J(α, u+v) ε_w = λ(α + ⟨u, v+2w⟩) ε_{w+v}.
pub fn j_action(space: &SymplecticSpace, lambda: &AdditiveCharacter, h: &HeisenbergElement, w: &[Fe]) -> (Fe, Vec<Fe>) {
    let f = space.field();
    let n = space.rank();
    let u = space.m_vector(&h.v[..n]);
    let vn = &h.v[n..];
    let two = f.from_int(2);
    let arg: Vec<Fe> = (0..n).map(|i| f.add(vn[i], f.mul(two, w[i]))).collect();
    let s = lambda.eval(f.add(h.alpha, space.form(&u, &space.n_vector(&arg))));
    let img = (0..n).map(|i| f.add(w[i], vn[i])).collect();
    (s, img)
}

pub fn j_matrix(space: &SymplecticSpace, lambda: &AdditiveCharacter, h: &HeisenbergElement) -> Matrix {
    monomial_matrix(space, lambda.target(), |w| Ok(j_action(space, lambda, h, w))).expect("total")
}

// ---------------------------------------------------------------------------
// Weil representation
// ---------------------------------------------------------------------------

pub fn gauss_sum(lambda: &AdditiveCharacter) -> Result<Fe> {
    lambda.gauss_sum()
}

/// P(g) on (ε_v): the monomial formula on Sp_M and the Gauss-sum formula on ρ_{v_n,−1}.
pub fn weil_matrix(space: &SymplecticSpace, lambda: &AdditiveCharacter, g: &SympElement) -> Result<Matrix> {
    let fq = space.field();
    if fq.characteristic() == 2 {
        return Err(Error::Group("the Weil representation needs odd q".into()));
    }
    let target = lambda.target();
    if space.in_sp_m(g) {
        let th = target.pow(theta(space, target, g)?, space.rank() as i64);
        return monomial_matrix(space, target, |c| {
            let (s, img) = x_action(space, lambda, g, c)?;
            Ok((target.mul(th, s), img))
        });
    }
    if *g == space.rho_vn() {
        let gs = lambda.gauss_sum()?;
        let ginv = target.inv(gs).map_err(|_| Error::Field("Gauss sum vanishes in F".into()))?;
        let d = n_size(space);
        let n = space.rank();
        let mut m = Matrix::zeros(target, d, d);
        for k in 0..d {
            let c = n_coords(space, k);
            for a in fq.elements() {
                let mut t = c.clone();
                t[n - 1] = fq.add(t[n - 1], a);
                let r = n_key(space, &t);
                let val = target.mul(ginv, lambda.eval(fq.mul(a, a)));
                m.set(r, k, target.add(m.get(r, k), val));
            }
        }
        return Ok(m);
    }
    Err(Error::Group(format!("no Weil formula for generator {g:?}")))
}

pub fn weil_representation(space: &SymplecticSpace, lambda: &AdditiveCharacter, gens: &[(String, SympElement)]) -> Result<Representation> {
    let mats = gens.iter().map(|(_, g)| weil_matrix(space, lambda, g)).collect::<Result<Vec<_>>>()?;
    Representation::new(
        lambda.target(),
        n_size(space),
        gens.iter().map(|(l, _)| l.clone()).collect(),
        Some(gens.iter().map(|(_, g)| *g).collect()),
        mats,
    )
}

/// Basis of Y^− (ε^−_v), or of Y^+ (ε^+_v, with ε_0 adjoined when l is odd).
pub fn y_basis(space: &SymplecticSpace, target: &Field, parity: Parity) -> Vec<Vec<Fe>> {
    let mut out = Vec::new();
    if parity == Parity::Plus && target.characteristic() != 2 {
        out.push(unit(n_size(space), 0));
    }
    out.extend(x_pm_basis(space, target, parity));
    out
}

/// The Weil module of degree (q^n−1)/2: Y^− (which equals Y^+ when l = 2).
pub fn small_weil_module(space: &SymplecticSpace, lambda: &AdditiveCharacter, gens: &[(String, SympElement)]) -> Result<Representation> {
    let y = weil_representation(space, lambda, gens)?;
    y.subrepresentation(&y_basis(space, lambda.target(), Parity::Minus))
}

/// Indices of the generators lying in Sp_M.
pub fn sp_m_indices(space: &SymplecticSpace, gens: &[(String, SympElement)]) -> Vec<usize> {
    (0..gens.len()).filter(|&i| space.in_sp_m(&gens[i].1)).collect()
}

// ---------------------------------------------------------------------------
// checks
// ---------------------------------------------------------------------------

pub fn check_gauss_sum(lambda: &AdditiveCharacter) -> Result<Verdict> {
    let g = lambda.gauss_sum()?;
    if lambda.target().characteristic() == 2 {
        if g == Fe::ONE {
            Ok(Verdict::pass("G(λ) = 1"))
        } else {
            Ok(Verdict::fail("G(λ) ≠ 1 in characteristic 2", format!("G = {}", g.0)))
        }
    } else if g.is_zero() {
        Ok(Verdict::fail("G(λ) = 0", "0"))
    } else {
        Ok(Verdict::pass(format!("G(λ) = {} ≠ 0", g.0)))
    }
}

/// Group axioms of H_0: exhaustive identity/inverse, associativity exhaustive
/// when |H_0|³ is small and on random triples otherwise.
pub fn check_heisenberg_group(space: &SymplecticSpace, seed: u64) -> Verdict {
    let all = heisenberg_elements(space);
    let id = heisenberg_identity(space);
    let mut t = Tally::new();
    for h in &all {
        t.check(heisenberg_mul(space, &id, h) == *h && heisenberg_mul(space, h, &id) == *h, || format!("identity fails at {h:?}"));
        let inv = heisenberg_inverse(space, h);
        t.check(heisenberg_mul(space, h, &inv) == id, || format!("inverse fails at {h:?}"));
    }
    let assoc = |a: &HeisenbergElement, b: &HeisenbergElement, c: &HeisenbergElement| {
        heisenberg_mul(space, &heisenberg_mul(space, a, b), c) == heisenberg_mul(space, a, &heisenberg_mul(space, b, c))
    };
    if all.len() <= 32 {
        for a in &all {
            for b in &all {
                for c in &all {
                    t.check(assoc(a, b, c), || format!("associativity fails at {a:?} {b:?} {c:?}"));
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20_000 {
            let a = &all[rng.gen_range(0..all.len())];
            let b = &all[rng.gen_range(0..all.len())];
            let c = &all[rng.gen_range(0..all.len())];
            t.check(assoc(a, b, c), || format!("associativity fails at {a:?} {b:?} {c:?}"));
        }
    }
    t.verdict("H_0 group axioms")
}

/// J(h1)J(h2) = J(h1 h2) over all pairs of H_0, basis vector by basis vector.
pub fn check_j_homomorphism(space: &SymplecticSpace, lambda: &AdditiveCharacter) -> Verdict {
    let all = heisenberg_elements(space);
    let f = lambda.target();
    let ws: Vec<Vec<Fe>> = (0..n_size(space)).map(|k| n_coords(space, k)).collect();
    let mut t = Tally::new();
    for a in &all {
        for b in &all {
            let ab = heisenberg_mul(space, a, b);
            for w in &ws {
                let (s2, w2) = j_action(space, lambda, b, w);
                let (s1, w1) = j_action(space, lambda, a, &w2);
                let (s, wp) = j_action(space, lambda, &ab, w);
                t.check(wp == w1 && s == f.mul(s1, s2), || format!("h1={a:?} h2={b:?} w={w:?}"));
            }
        }
    }
    t.verdict("J multiplicative on H_0")
}

/// P(g) J(h) = J(ᵍh) P(g) for every generator g and every h ∈ H_0.
pub fn check_weil_intertwining(space: &SymplecticSpace, lambda: &AdditiveCharacter, gens: &[(String, SympElement)]) -> Result<Verdict> {
    let all = heisenberg_elements(space);
    let jm: Vec<Matrix> = all.iter().map(|h| j_matrix(space, lambda, h)).collect();
    let mut t = Tally::new();
    for (label, g) in gens {
        let p = weil_matrix(space, lambda, g)?;
        for (h, j) in all.iter().zip(&jm) {
            let conj = heisenberg_conjugate(space, g, h);
            let lhs = p.mul(j)?;
            let rhs = j_matrix(space, lambda, &conj).mul(&p)?;
            t.check(lhs == rhs, || format!("g={label} h=({}, {:?})", h.alpha.0, h.v));
        }
    }
    Ok(t.verdict("P(g)J(h)P(g)^{-1} = J(ᵍh)"))
}

/// P is a homomorphism: exhaustive Cayley-graph check when the group is small,
/// plus random word pairs with equal products.
pub fn check_weil_single_valued(space: &SymplecticSpace, lambda: &AdditiveCharacter, gens: &[(String, SympElement)], seed: u64, bfs_cap: usize) -> Result<Verdict> {
    let y = weil_representation(space, lambda, gens)?;
    let words = relation_certificate(&y, space, 100, seed, 2_000_000)?;
    let mut parts = vec![words];
    if space.order_sp() <= bfs_cap as u128 {
        parts.push(homomorphism_exhaustive(&y, space, bfs_cap)?);
    }
    Ok(Verdict::all(parts, "P single-valued on words"))
}

/// Y^± spans are Sp-stable (Y^+ ⊕ Y_0 for odd l).
pub fn check_y_stability(space: &SymplecticSpace, lambda: &AdditiveCharacter, gens: &[(String, SympElement)]) -> Result<Verdict> {
    let y = weil_representation(space, lambda, gens)?;
    let target = lambda.target();
    let mut parts = Vec::new();
    for parity in [Parity::Plus, Parity::Minus] {
        let basis = y_basis(space, target, parity);
        match y.subrepresentation(&basis) {
            Ok(sub) => {
                let expect = if parity == Parity::Plus && target.characteristic() != 2 {
                    (n_size(space) + 1) / 2
                } else {
                    (n_size(space) - 1) / 2
                };
                if sub.dim == expect {
                    parts.push(Verdict::pass(format!("Y{} stable, dim {}", parity.symbol(), sub.dim)));
                } else {
                    parts.push(Verdict::fail(format!("Y{} has dim {}", parity.symbol(), sub.dim), format!("expected {expect}")));
                }
            }
            Err(e) => parts.push(Verdict::fail(format!("Y{} not stable", parity.symbol()), e.to_string())),
        }
    }
    Ok(Verdict::all(parts, "Weil submodules stable"))
}

fn plus_vector(space: &SymplecticSpace, target: &Field, coords: &[Fe]) -> Vec<Fe> {
    pm_vector(space, target, n_key(space, coords), Parity::Plus)
}

fn vec_add_scaled(f: &Field, acc: &mut [Fe], s: Fe, x: &[Fe]) {
    for (a, &b) in acc.iter_mut().zip(x) {
        *a = f.add(*a, f.mul(s, b));
    }
}

/// c_n ε^+_{v_n} via c_n = ρ_{u_n,−1} ρ_{v_n,−1} ρ_{u_n,−1} against the closed form.
pub fn check_lum1(space: &SymplecticSpace, lambda: &AdditiveCharacter) -> Result<Verdict> {
    let target = lambda.target();
    if target.characteristic() != 2 {
        return Ok(Verdict::skipped("stated for l = 2"));
    }
    let n = space.rank();
    let fq = space.field();
    let m1 = fq.from_int(-1);
    let ru = space.transvection(&space.u(n), m1);
    let rv = space.rho_vn();
    if space.mul_all(&[&ru, &rv, &ru]) != space.c_gen(n)? {
        return Ok(Verdict::fail("c_n ≠ ρ_{u_n,−1}ρ_{v_n,−1}ρ_{u_n,−1}", "matrix identity"));
    }
    let pu = weil_matrix(space, lambda, &ru)?;
    let pv = weil_matrix(space, lambda, &rv)?;
    let mut vn = vec![Fe::ZERO; n];
    vn[n - 1] = Fe::ONE;
    let start = plus_vector(space, target, &vn);
    let lhs = pu.mul_vec(&pv.mul_vec(&pu.mul_vec(&start)));
    let two = fq.from_int(2);
    let mut rhs = vec![Fe::ZERO; n_size(space)];
    for a in fq.transversal() {
        let coeff = target.add(lambda.eval(fq.neg(fq.mul(two, a))), lambda.eval(fq.mul(two, a)));
        let mut c = vec![Fe::ZERO; n];
        c[n - 1] = a;
        vec_add_scaled(target, &mut rhs, coeff, &plus_vector(space, target, &c));
    }
    if lhs == rhs {
        Ok(Verdict::pass("c_n ε^+_{v_n} matches the closed form"))
    } else {
        Ok(Verdict::fail("c_n ε^+_{v_n} differs from the closed form", format!("lhs={:?} rhs={:?}", codes(&lhs), codes(&rhs))))
    }
}

/// c_{n−1} ε^+_{v_n} = Σ_α ε^+_{v_n + α v_{n−1}}, with c_{n−1} evaluated as a
/// product of generator images.
pub fn check_lum2(space: &SymplecticSpace, lambda: &AdditiveCharacter) -> Result<Verdict> {
    let target = lambda.target();
    if target.characteristic() != 2 {
        return Ok(Verdict::skipped("stated for l = 2"));
    }
    let n = space.rank();
    if n < 2 {
        return Ok(Verdict::vacuous("needs n ≥ 2"));
    }
    let fq = space.field();
    let m1 = fq.from_int(-1);
    let ru = space.transvection(&space.u(n - 1), m1);
    let w = space.w_gen(n - 1)?;
    let winv = space.inv(&w);
    let rv = space.rho_vn();
    let cn1 = space.mul_all(&[&ru, &w, &rv, &winv, &ru]);
    if cn1 != space.c_gen(n - 1)? {
        return Ok(Verdict::fail("c_{n−1} ≠ ρ_u·w·ρ_{v_n}·w^{-1}·ρ_u", "matrix identity"));
    }
    let mats = [&ru, &w, &rv, &winv, &ru].iter().map(|g| weil_matrix(space, lambda, g)).collect::<Result<Vec<_>>>()?;
    let mut vn = vec![Fe::ZERO; n];
    vn[n - 1] = Fe::ONE;
    let mut x = plus_vector(space, target, &vn);
    for m in mats.iter().rev() {
        x = m.mul_vec(&x);
    }
    let mut rhs = vec![Fe::ZERO; n_size(space)];
    for a in fq.elements() {
        let mut c = vn.clone();
        c[n - 2] = a;
        vec_add_scaled(target, &mut rhs, Fe::ONE, &plus_vector(space, target, &c));
    }
    if x == rhs {
        Ok(Verdict::pass("c_{n−1} ε^+_{v_n} matches the closed form"))
    } else {
        Ok(Verdict::fail("c_{n−1} ε^+_{v_n} differs", format!("lhs={:?} rhs={:?}", codes(&x), codes(&rhs))))
    }
}

fn codes(v: &[Fe]) -> Vec<u32> {
    v.iter().map(|x| x.0).collect()
}

/// Irreducibility certificate if the projective space is small enough.
fn certify(rep: &Representation, cap: u128) -> Result<Option<crate::repcore::IrreducibilityCertificate>> {
    match certify_irreducible(rep, cap) {
        Ok(c) => Ok(c),
        Err(Error::CapExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn iso(a: &Representation, b: &Representation, cap: u128, seed: u64) -> Result<bool> {
    let ca = certify(a, cap)?;
    let cb = certify(b, cap)?;
    match (ca, cb) {
        (Some(x), Some(y)) => is_isomorphic(a, b, Some((&x, &y)), seed),
        _ => is_isomorphic(a, b, None, seed),
    }
}

/// For all κ ∈ F_q^*: Y_λ ≅ Y_{λ[κ]} (degree (q^n−1)/2) exactly when κ is a
/// square; hence two isomorphism types.
pub fn check_weil_type_count(space: &SymplecticSpace, lambda: &AdditiveCharacter, gens: &[(String, SympElement)], cap: u128, seed: u64) -> Result<Verdict> {
    let fq = space.field();
    let base = small_weil_module(space, lambda, gens)?;
    let mut t = Tally::new();
    let mut classes: Vec<Representation> = vec![base.clone()];
    for kappa in fq.nonzero() {
        let other = small_weil_module(space, &lambda.twisted(kappa)?, gens)?;
        let same = iso(&base, &other, cap, seed)?;
        let square = fq.is_square(kappa)?;
        t.check(same == square, || format!("κ={}: isomorphic={same} square={square}", kappa.0));
        let mut new = true;
        for c in &classes {
            if iso(c, &other, cap, seed)? {
                new = false;
                break;
            }
        }
        if new {
            classes.push(other);
        }
    }
    t.check(classes.len() == 2, || format!("{} isomorphism types", classes.len()));
    Ok(t.verdict("Weil types indexed by square classes"))
}

/// l = 2: the image of ε_0 in Y/Y^+ is fixed by every generator. Also
/// reports whether Y/Y^+ ≅ Y^+ ⊕ F holds.
pub fn check_y_quotient(space: &SymplecticSpace, lambda: &AdditiveCharacter, gens: &[(String, SympElement)], seed: u64) -> Result<(Verdict, bool)> {
    let target = lambda.target();
    if target.characteristic() != 2 {
        return Ok((Verdict::skipped("stated for l = 2"), false));
    }
    let y = weil_representation(space, lambda, gens)?;
    let plus = y_basis(space, target, Parity::Plus);
    let (quot, map) = y.quotient(&plus)?;
    let y0 = map.project(&unit(n_size(space), 0));
    let mut t = Tally::new();
    t.check(y0.iter().any(|x| !x.is_zero()), || "ε_0 lies in Y^+".into());
    for (l, m) in quot.labels.iter().zip(&quot.matrices) {
        t.check(m.mul_vec(&y0) == y0, || format!("{l} moves the image of ε_0"));
    }
    let sub = y.subrepresentation(&plus)?;
    let triv = Representation::trivial(target, 1, sub.labels.clone(), sub.elements.clone());
    let sum = direct_sum(&sub, &triv)?;
    let splits = find_invertible(&intertwiner_space(&sum, &quot)?, seed).is_some();
    Ok((t.verdict("Y/Y^+ has an Sp-fixed vector"), splits))
}

/// Y^± restricted to Sp_M is isomorphic to θ^n X^±; for l = 2 directly to X^±.
pub fn check_y_restriction_x(space: &SymplecticSpace, lambda: &AdditiveCharacter, gens: &[(String, SympElement)], seed: u64) -> Result<Verdict> {
    let target = lambda.target();
    let idx = sp_m_indices(space, gens);
    let y = weil_representation(space, lambda, gens)?.restrict(&idx);
    let spm_gens: Vec<(String, SympElement)> = idx.iter().map(|&i| gens[i].clone()).collect();
    let x = x_representation(space, lambda, &spm_gens)?;
    let mut parts = Vec::new();
    for parity in [Parity::Plus, Parity::Minus] {
        let ys = y.subrepresentation(&x_pm_basis(space, target, parity))?;
        let mut xs = x.subrepresentation(&x_pm_basis(space, target, parity))?;
        // twist X by θ^n
        for (m, (_, g)) in xs.matrices.iter_mut().zip(&spm_gens) {
            let th = target.pow(theta(space, target, g)?, space.rank() as i64);
            *m = m.scale(th);
        }
        let ok = find_invertible(&intertwiner_space(&xs, &ys)?, seed).is_some();
        parts.push(if ok {
            Verdict::pass(format!("Y{0} ≅ θ^n X{0}", parity.symbol()))
        } else {
            Verdict::fail(format!("Y{0} and θ^n X{0} not isomorphic over Sp_M", parity.symbol()), "no invertible intertwiner")
        });
    }
    Ok(Verdict::all(parts, "restriction of Y to Sp_M"))
}

pub fn direct_sum(a: &Representation, b: &Representation) -> Result<Representation> {
    if a.labels != b.labels {
        return Err(Error::Dimension("direct sum of representations on different generators".into()));
    }
    let d = a.dim + b.dim;
    let mats = a
        .matrices
        .iter()
        .zip(&b.matrices)
        .map(|(x, y)| {
            let mut m = Matrix::zeros(&a.field, d, d);
            for r in 0..a.dim {
                for c in 0..a.dim {
                    m.set(r, c, x.get(r, c));
                }
            }
            for r in 0..b.dim {
                for c in 0..b.dim {
                    m.set(a.dim + r, a.dim + c, y.get(r, c));
                }
            }
            m
        })
        .collect();
    Representation::new(&a.field, d, a.labels.clone(), a.elements.clone(), mats)
}

/// R(g1 g2) = R(g1)R(g2) over Sp_M: random pairs of enumerated elements, and
/// the full Cayley-graph check on the generators.
pub fn check_x_homomorphism(space: &SymplecticSpace, lambda: &AdditiveCharacter, gens: &[(String, SympElement)], sample: &[SympElement], pairs: usize, seed: u64) -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..pairs {
        let a = &sample[rng.gen_range(0..sample.len())];
        let b = &sample[rng.gen_range(0..sample.len())];
        let lhs = x_matrix(space, lambda, &space.mul(a, b))?;
        let rhs = x_matrix(space, lambda, a)?.mul(&x_matrix(space, lambda, b)?)?;
        t.check(lhs == rhs, || format!("g1={a:?} g2={b:?}"));
    }
    let x = x_representation(space, lambda, gens)?;
    let cayley = homomorphism_exhaustive(&x, space, 2_000_000)?;
    Ok(Verdict::all(vec![t.verdict("R(g1 g2) = R(g1)R(g2)"), cayley], "X is a representation of Sp_M"))
}

pub struct IrreducibilityReport {
    pub label: String,
    pub dim: usize,
    pub irreducible: bool,
    pub commutant: usize,
}

fn irreducibility(rep: &Representation, label: String, cap: u128) -> Result<IrreducibilityReport> {
    let irreducible = certify_irreducible(rep, cap)?.is_some();
    Ok(IrreducibilityReport { label, dim: rep.dim, irreducible, commutant: commutant_dim(rep)? })
}

fn irreducibility_verdict(reports: &[IrreducibilityReport], expect_dim: impl Fn(&str) -> Option<usize>, what: &str) -> Verdict {
    let mut t = Tally::new();
    for r in reports {
        t.check(r.irreducible && r.commutant == 1, || format!("{}: irreducible={} commutant={}", r.label, r.irreducible, r.commutant));
        if let Some(d) = expect_dim(&r.label) {
            t.check(r.dim == d, || format!("{}: dimension {} ≠ {d}", r.label, r.dim));
        }
    }
    t.verdict(what)
}

/// X^±_{α,i} as U-modules: absolutely irreducible of dimension q^{n−i}
/// (irru), pairwise non-isomorphic across α-classes and across i (isu).
pub fn check_irru_isu(space: &SymplecticSpace, lambda: &AdditiveCharacter, cap: u128, seed: u64) -> Result<(Verdict, Verdict)> {
    let target = lambda.target();
    let gens = space.generators_u();
    let x = x_representation(space, lambda, &gens)?;
    let mut reports = Vec::new();
    let mut iso_t = Tally::new();
    let q = space.q() as usize;
    for parity in [Parity::Plus, Parity::Minus] {
        let mut reps = Vec::new();
        for i in 1..=space.rank() {
            for a in space.field().transversal() {
                let sub = x.subrepresentation(&x_alpha_i_basis(space, target, parity, a, i)?)?;
                let label = format!("X{}_({},{i})", parity.symbol(), a.0);
                reports.push(irreducibility(&sub, label, cap)?);
                reports.last_mut().unwrap().dim = sub.dim;
                reps.push((a, i, sub));
            }
        }
        // all pairs: different α-classes at the same i, and different i
        for (j, (a, i, ra)) in reps.iter().enumerate() {
            for (b, k, rb) in reps.iter().skip(j + 1) {
                let same = iso(ra, rb, cap, seed)?;
                iso_t.check(!same, || format!("X{0}_({1},{i}) ≅ X{0}_({2},{k})", parity.symbol(), a.0, b.0));
            }
        }
    }
    let n = space.rank();
    let irru = irreducibility_verdict(
        &reports,
        |label| {
            let i: usize = label.rsplit(',').next()?.trim_end_matches(')').parse().ok()?;
            Some(q.pow((n - i) as u32))
        },
        "X^±_{α,i} absolutely irreducible FU-modules",
    );
    Ok((irru, iso_t.verdict("X^±_{α,i} pairwise non-isomorphic")))
}

/// X^±_i as B-modules (irb) and their pairwise non-isomorphism (isb).
pub fn check_irb_isb(space: &SymplecticSpace, lambda: &AdditiveCharacter, cap: u128, seed: u64) -> Result<(Verdict, Verdict)> {
    let target = lambda.target();
    let gens = space.generators_b();
    let x = x_representation(space, lambda, &gens)?;
    let mut reports = Vec::new();
    let mut iso_t = Tally::new();
    for parity in [Parity::Plus, Parity::Minus] {
        let mut reps = Vec::new();
        for i in 1..=space.rank() {
            let sub = x.subrepresentation(&x_i_basis(space, target, parity, i)?)?;
            reports.push(irreducibility(&sub, format!("X{}_{i}", parity.symbol()), cap)?);
            reps.push((i, sub));
        }
        for (j, (a, ra)) in reps.iter().enumerate() {
            for (b, rb) in reps.iter().skip(j + 1) {
                iso_t.check(!iso(ra, rb, cap, seed)?, || format!("X{0}_{a} ≅ X{0}_{b}", parity.symbol()));
            }
        }
    }
    Ok((
        irreducibility_verdict(&reports, |_| None, "X^±_i absolutely irreducible FB-modules"),
        iso_t.verdict("X^±_i pairwise non-isomorphic"),
    ))
}

/// X^± as Sp_M-modules.
pub fn check_irrspm(space: &SymplecticSpace, lambda: &AdditiveCharacter, cap: u128) -> Result<Verdict> {
    let target = lambda.target();
    let gens = space.generators_sp_m();
    let x = x_representation(space, lambda, &gens)?;
    let d = if space.field().characteristic() == 2 { n_size(space) - 1 } else { (n_size(space) - 1) / 2 };
    let mut reports = Vec::new();
    for parity in [Parity::Plus, Parity::Minus] {
        let sub = x.subrepresentation(&x_pm_basis(space, target, parity))?;
        reports.push(irreducibility(&sub, format!("X{}", parity.symbol()), cap)?);
    }
    Ok(irreducibility_verdict(&reports, |_| Some(d), "X^± absolutely irreducible FSp_M-modules"))
}

/// X^±_λ ≅ X^±_{λ[κ]} over Sp_M ⇔ κ is a square, for every κ ∈ F_q^*.
pub fn check_kk(space: &SymplecticSpace, lambda: &AdditiveCharacter, cap: u128, seed: u64) -> Result<Verdict> {
    let fq = space.field();
    let target = lambda.target();
    let gens = space.generators_sp_m();
    let mut t = Tally::new();
    for parity in [Parity::Plus, Parity::Minus] {
        let base = x_representation(space, lambda, &gens)?.subrepresentation(&x_pm_basis(space, target, parity))?;
        for kappa in fq.nonzero() {
            let other = x_representation(space, &lambda.twisted(kappa)?, &gens)?.subrepresentation(&x_pm_basis(space, target, parity))?;
            let same = iso(&base, &other, cap, seed)?;
            let square = fq.is_square(kappa)?;
            t.check(same == square, || format!("X{} κ={}: isomorphic={same} square={square}", parity.symbol(), kappa.0));
        }
    }
    Ok(t.verdict("X^± twist classes follow squares"))
}

/// l = 2: E^+_v ↦ E_v + (X^+ ⊕ X_0) is an isomorphism X^+ → X/(X^+ ⊕ X_0).
pub fn check_x_quotient(space: &SymplecticSpace, lambda: &AdditiveCharacter) -> Result<Verdict> {
    let target = lambda.target();
    if target.characteristic() != 2 {
        return Ok(Verdict::skipped("stated for l = 2"));
    }
    if space.field().characteristic() == 2 {
        return Ok(Verdict::skipped("needs odd q"));
    }
    let gens = space.generators_sp_m();
    let x = x_representation(space, lambda, &gens)?;
    let plus = x_pm_basis(space, target, Parity::Plus);
    let xp = x.subrepresentation(&plus)?;
    let mut sub = plus.clone();
    sub.push(unit(n_size(space), 0));
    let (quot, map) = x.quotient(&sub)?;
    let cols: Vec<Vec<Fe>> = pm_representatives(space).into_iter().map(|k| map.project(&unit(n_size(space), k))).collect();
    let t_map = Matrix::from_columns(target, quot.dim, &cols)?;
    if !t_map.is_invertible() {
        return Ok(Verdict::fail("the map is not bijective", format!("{t_map:?}")));
    }
    let mut t = Tally::new();
    for ((l, a), b) in xp.labels.iter().zip(&xp.matrices).zip(&quot.matrices) {
        t.check(t_map.mul(a)? == b.mul(&t_map)?, || format!("fails to commute with {l}"));
    }
    Ok(t.verdict("X^+ ≅ X/(X^+ ⊕ X_0) via E^+_v ↦ E_v"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldDescriptor;

    fn setup(n: usize, q: u32, l: u32, m: u32) -> (SymplecticSpace, AdditiveCharacter) {
        let fq = FieldDescriptor::create(q, 1, None).unwrap();
        let f = FieldDescriptor::create(l, m, None).unwrap();
        (SymplecticSpace::new(n, &fq).unwrap(), AdditiveCharacter::standard(&fq, &f).unwrap())
    }

    #[test]
    fn indexing() {
        let (s, _) = setup(2, 3, 2, 2);
        for k in 0..9 {
            assert_eq!(n_key(&s, &n_coords(&s, k)), k);
        }
        assert_eq!(pm_representatives(&s), vec![1, 3, 4, 5]);
        assert_eq!(canonical_pm(&s, 2), 1);
    }

    #[test]
    fn x_action_examples() {
        let (s, lam) = setup(2, 3, 2, 2);
        let v = [Fe(1), Fe(2)];
        assert_eq!(x_action(&s, &lam, &s.identity(), &v).unwrap(), (Fe::ONE, v.to_vec()));
        let w = s.w_gen(1).unwrap();
        assert_eq!(x_action(&s, &lam, &w, &v).unwrap(), (Fe::ONE, vec![Fe(2), Fe(1)]));
        for sp in s.enumerate_sp_upper(1000).unwrap() {
            let chi = crate::characters::ChiV::on_n(&s, &v, &lam);
            assert_eq!(x_action(&s, &lam, &sp, &v).unwrap(), (chi.eval(&s, &sp), v.to_vec()));
        }
        assert!(x_action(&s, &lam, &s.rho_vn(), &v).is_err());
    }

    #[test]
    fn heisenberg_examples() {
        let (s, lam) = setup(1, 3, 2, 2);
        let a = HeisenbergElement { alpha: Fe(0), v: s.u(1) };
        let b = HeisenbergElement { alpha: Fe(0), v: s.v(1) };
        assert_eq!(heisenberg_mul(&s, &a, &b), HeisenbergElement { alpha: Fe(1), v: vec![Fe(1), Fe(1)] });
        let h = HeisenbergElement { alpha: Fe(2), v: vec![Fe(0), Fe(0)] };
        assert_eq!(j_action(&s, &lam, &h, &[Fe(1)]), (lam.eval(Fe(2)), vec![Fe(1)]));
        assert!(check_heisenberg_group(&s, 1).is_pass());
        assert!(check_j_homomorphism(&s, &lam).is_pass());
    }

    #[test]
    fn weil_small() {
        let (s, lam) = setup(1, 3, 2, 2);
        let gens = s.generators_sp();
        assert!(check_gauss_sum(&lam).unwrap().is_pass());
        assert!(check_weil_intertwining(&s, &lam, &gens).unwrap().is_pass());
        assert!(check_y_stability(&s, &lam, &gens).unwrap().is_pass());
        assert!(check_lum1(&s, &lam).unwrap().is_pass());
        assert_eq!(check_lum2(&s, &lam).unwrap().status, crate::outcome::Status::Vacuous);
        let p = weil_matrix(&s, &lam, &s.identity()).unwrap();
        assert_eq!(p, Matrix::identity(lam.target(), 3));
        // (s1): ρ ε_0 = ε_0 + Σ_T λ(α²) ε^+_{αv_n}
        let rho = weil_matrix(&s, &lam, &s.rho_vn()).unwrap();
        let img = rho.mul_vec(&unit(3, 0));
        let f = lam.target();
        let mut expect = unit(3, 0);
        vec_add_scaled(f, &mut expect, lam.eval(Fe(1)), &pm_vector(&s, f, 1, Parity::Plus));
        assert_eq!(img, expect);
    }
}
