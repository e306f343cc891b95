//! The characters χ_v(g) = λ(⟨gv, v⟩), their sign extensions to Ŝ_v, the
//! quadratic character θ of Sp_M, and linear characters of U.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ffield::{AdditiveCharacter, Fe, Field};
use crate::outcome::{Tally, Verdict};
use crate::spgroup::{block_det, SympElement, SymplecticSpace, DEFAULT_CAP};

/// χ_v for a vector v of V (usually in N).
#[derive(Clone, Debug)]
pub struct ChiV {
    v: Vec<Fe>,
    lambda: AdditiveCharacter,
}

impl ChiV {
    /// χ_v with v = Σ α_i v_i given by its N-coordinates.
    pub fn on_n(space: &SymplecticSpace, coords: &[Fe], lambda: &AdditiveCharacter) -> ChiV {
        ChiV { v: space.n_vector(coords), lambda: lambda.clone() }
    }

    pub fn on_vector(v: Vec<Fe>, lambda: &AdditiveCharacter) -> ChiV {
        ChiV { v, lambda: lambda.clone() }
    }

    pub fn vector(&self) -> &[Fe] {
        &self.v
    }

    pub fn lambda(&self) -> &AdditiveCharacter {
        &self.lambda
    }

    pub fn eval(&self, space: &SymplecticSpace, g: &SympElement) -> Fe {
        let gv = space.apply(g, &self.v);
        self.lambda.eval(space.form(&gv, &self.v))
    }

    /// χ_{g0 v}, so that χ_v(g0^{-1} g g0) = χ_{g0 v}(g).
    pub fn conjugate(&self, space: &SymplecticSpace, g0: &SympElement) -> ChiV {
        ChiV { v: space.apply(g0, &self.v), lambda: self.lambda.clone() }
    }
}

/// χ_v^± on Ŝ_v = S_v × {±1}.
#[derive(Clone, Debug)]
pub struct ChiVpm {
    pub base: ChiV,
    pub sign_at_minus_one: Fe,
}

impl ChiVpm {
    pub fn new(base: ChiV, plus: bool) -> ChiVpm {
        let f = base.lambda.target().clone();
        let sign = if plus { Fe::ONE } else { f.neg(Fe::ONE) };
        ChiVpm { base, sign_at_minus_one: sign }
    }

    pub fn eval(&self, space: &SymplecticSpace, g: &SympElement) -> Result<Fe> {
        let n = space.rank();
        let img = space.apply(g, &self.base.v);
        if img[n..] == self.base.v[n..] {
            return Ok(self.base.eval(space, g));
        }
        let negv: Vec<Fe> = self.base.v[n..].iter().map(|&x| space.field().neg(x)).collect();
        if img[n..] == negv[..] {
            let f = self.base.lambda.target();
            return Ok(f.mul(self.sign_at_minus_one, self.base.eval(space, &space.neg(g))));
        }
        Err(Error::Group("element outside the extended stabilizer".into()))
    }
}

/// Membership in S_v (gv ≡ v mod M) or Ŝ_v (gv ≡ ±v mod M) for g ∈ Sp_M.
pub fn stabilizer_membership(space: &SymplecticSpace, v: &[Fe], g: &SympElement, hat: bool) -> Result<bool> {
    if !space.in_sp_m(g) {
        return Err(Error::Group("stabilizer test needs an element of Sp_M".into()));
    }
    let n = space.rank();
    let img = space.apply(g, &space.n_vector(v));
    if img[n..] == *v {
        return Ok(true);
    }
    let neg: Vec<Fe> = v.iter().map(|&x| space.field().neg(x)).collect();
    Ok(hat && img[n..] == neg[..])
}

/// Splits g ∈ Sp_M as s·a with s ∈ Sp^M and a ∈ Sp_{M,N}.
pub fn split_sa(space: &SymplecticSpace, g: &SympElement) -> Result<(SympElement, SympElement)> {
    if !space.in_sp_m(g) {
        return Err(Error::Group("split requires an element of Sp_M".into()));
    }
    let a = space.sp_mn(&space.block(g, 0))?;
    let s = space.mul(g, &space.inv(&a));
    if !space.in_sp_upper(&s) || !space.in_sp_mn(&a) || space.mul(&s, &a) != *g {
        return Err(Error::Group("inconsistent factorisation".into()));
    }
    Ok((s, a))
}

/// θ(g) = Legendre symbol of det(g|_N) mapped into F; constantly 1 when l = 2.
pub fn theta(space: &SymplecticSpace, target: &Field, g: &SympElement) -> Result<Fe> {
    if !space.in_sp_m(g) {
        return Err(Error::Group("θ is defined on Sp_M".into()));
    }
    let fq = space.field();
    if fq.characteristic() == 2 {
        return Err(Error::Field("θ requires odd q".into()));
    }
    if target.characteristic() == 2 {
        return Ok(Fe::ONE);
    }
    let det = block_det(fq, &space.block(g, 3), space.rank());
    Ok(if fq.is_square(det)? { Fe::ONE } else { target.neg(Fe::ONE) })
}

/// A linear character of U.
#[derive(Clone, Debug)]
pub enum UCharacter {
    Trivial,
    Chi(ChiV),
    /// u ↦ λ(Σ_{i<n} c_i·A_{i,i+1} + c_n·S_{nn}), read off u = [[A, B],[0, A^{-T}]].
    Fundamental { coeffs: Vec<Fe>, lambda: AdditiveCharacter },
    /// u ↦ σ(h^{-1} u h).
    Conjugated { inner: Box<UCharacter>, by: SympElement },
}

impl UCharacter {
    pub fn eval(&self, space: &SymplecticSpace, u: &SympElement) -> Fe {
        match self {
            UCharacter::Trivial => Fe::ONE,
            UCharacter::Chi(chi) => chi.eval(space, u),
            UCharacter::Fundamental { coeffs, lambda } => {
                let f = space.field();
                let n = space.rank();
                let mut acc = Fe::ZERO;
                for i in 0..n - 1 {
                    acc = f.add(acc, f.mul(coeffs[i], u.get(i, i + 1)));
                }
                // with A upper unitriangular, S_nn = (B Aᵀ)_nn = B_nn
                acc = f.add(acc, f.mul(coeffs[n - 1], u.get(n - 1, 2 * n - 1)));
                lambda.eval(acc)
            }
            UCharacter::Conjugated { inner, by } => {
                let x = space.mul(&space.mul(&space.inv(by), u), by);
                inner.eval(space, &x)
            }
        }
    }

    /// σ^h := u ↦ σ(h^{-1} u h), the character for which h e_σ = e_{σ^h}.
    pub fn conjugated_by(&self, h: &SympElement) -> UCharacter {
        UCharacter::Conjugated { inner: Box::new(self.clone()), by: *h }
    }
}

// ---- checks ----

pub fn check_lemma_homo(space: &SymplecticSpace, lambda: &AdditiveCharacter, cap: u128) -> Result<Verdict> {
    let f = lambda.target();
    let mut t = Tally::new();
    for coords in nonzero_n_vectors(space) {
        // exhaustive over S_v only for v = v_n; others through a seeded sample
        let sv = space.enumerate_stabilizer(&coords, false, cap)?;
        let chi = ChiV::on_n(space, &coords, lambda);
        let vals: Vec<Fe> = sv.iter().map(|g| chi.eval(space, g)).collect();
        let is_vn = coords.iter().take(space.rank() - 1).all(|x| x.is_zero()) && coords[space.rank() - 1] == Fe::ONE;
        let limit = if is_vn { sv.len() } else { sv.len().min(12) };
        for i in 0..limit {
            for j in 0..sv.len() {
                let gh = space.mul(&sv[i], &sv[j]);
                let lhs = chi.eval(space, &gh);
                let rhs = f.mul(vals[i], vals[j]);
                t.check(lhs == rhs, || format!("v={:?} g={:?} h={:?}", coords, sv[i], sv[j]));
            }
        }
    }
    Ok(t.verdict("χ_v multiplicative on S_v"))
}

pub fn check_lemma_fp(space: &SymplecticSpace, lambda: &AdditiveCharacter, cap: u128) -> Result<Verdict> {
    let spm = space.enumerate_sp_upper(cap)?;
    let vs = all_n_vectors(space);
    let fq = space.field();
    let tables: Vec<Vec<Fe>> = vs
        .iter()
        .map(|v| {
            let chi = ChiV::on_n(space, v, lambda);
            spm.iter().map(|g| chi.eval(space, g)).collect()
        })
        .collect();
    let mut t = Tally::new();
    for (i, v) in vs.iter().enumerate() {
        for (j, w) in vs.iter().enumerate() {
            let same = tables[i] == tables[j];
            let negw: Vec<Fe> = w.iter().map(|&x| fq.neg(x)).collect();
            let pm = v == w || *v == negw;
            t.check(same == pm, || format!("v={v:?} w={w:?} equal_on_SpM={same} v=±w={pm}"));
        }
    }
    Ok(t.verdict("χ_v = χ_w on Sp^M ⇔ v = ±w"))
}

/// Lemma puo together with Corollary rooto.
pub fn check_lemma_puo(space: &SymplecticSpace, lambda: &AdditiveCharacter, cap: u128) -> Result<(Verdict, Verdict)> {
    let n = space.rank();
    let fq = space.field();
    let cn = space.c_gen(n)?;
    let plus = space.enumerate_uw_plus(&cn, cap)?;
    let minus = space.enumerate_uw_minus(&cn, cap)?;
    let root = space.enumerate_root(n, 2 * n)?;
    let mut puo = Tally::new();
    let mut rooto = Tally::new();
    puo.check(minus == root, || "U_{c_n}^- differs from X_{(n,2n)}".into());
    for alpha in fq.nonzero() {
        let mut coords = vec![Fe::ZERO; n];
        coords[n - 1] = alpha;
        let chi = ChiV::on_n(space, &coords, lambda);
        for u in &plus {
            puo.check(chi.eval(space, u) == Fe::ONE, || format!("α={} u={u:?} in U_cn^+", alpha.0));
        }
        let nontrivial = minus.iter().any(|u| chi.eval(space, u) != Fe::ONE);
        puo.check(nontrivial, || format!("α={}: trivial on U_cn^-", alpha.0));
        for beta in fq.elements() {
            let x = space.root_element(n, 2 * n, beta)?;
            let expect = lambda.eval(fq.mul(beta, fq.mul(alpha, alpha)));
            puo.check(chi.eval(space, &x) == expect, || format!("χ(x_n,2n({})) ≠ λ(βα²)", beta.0));
        }
        for i in 1..n {
            for beta in fq.elements() {
                let x = space.root_element(i, i + 1, beta)?;
                rooto.check(chi.eval(space, &x) == Fe::ONE, || format!("α={} nontrivial on X_({i},{})", alpha.0, i + 1));
            }
        }
        rooto.check(nontrivial, || format!("α={}: trivial on X_(n,2n)", alpha.0));
    }
    Ok((puo.verdict("χ_{αv_n} trivial on U_cn^+, nontrivial on U_cn^-"), rooto.verdict("unique nontrivial fundamental root subgroup")))
}

pub fn check_lemma_g0(space: &SymplecticSpace, lambda: &AdditiveCharacter, sample_g0: &[SympElement], cap: u128) -> Result<Verdict> {
    let u = space.enumerate_u(cap)?;
    let mut t = Tally::new();
    for v in all_n_vectors(space) {
        let chi = ChiV::on_n(space, &v, lambda);
        for g0 in sample_g0 {
            let conj = chi.conjugate(space, g0);
            let g0inv = space.inv(g0);
            for g in &u {
                let gg = space.mul(&space.mul(&g0inv, g), g0);
                t.check(chi.eval(space, &gg) == conj.eval(space, g), || format!("v={v:?} g0={g0:?} g={g:?}"));
            }
        }
    }
    Ok(t.verdict("χ_v(g^{g0}) = χ_{g0 v}(g)"))
}

pub fn check_theta_multiplicative(space: &SymplecticSpace, target: &Field, pairs: usize, seed: u64, cap: u128) -> Result<Verdict> {
    let spm = space.enumerate_sp_m(cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..pairs {
        let a = spm.choose(&mut rng).expect("nonempty");
        let b = spm.choose(&mut rng).expect("nonempty");
        let lhs = theta(space, target, &space.mul(a, b))?;
        let rhs = target.mul(theta(space, target, a)?, theta(space, target, b)?);
        t.check(lhs == rhs, || format!("g1={a:?} g2={b:?}"));
    }
    Ok(t.verdict("θ(g1 g2) = θ(g1) θ(g2)"))
}

pub fn check_theta_unipotent(space: &SymplecticSpace, target: &Field, cap: u128) -> Result<Verdict> {
    let mut t = Tally::new();
    for g in space.enumerate_sp_upper(cap)?.iter().chain(space.enumerate_t(cap)?.iter()) {
        t.check(theta(space, target, g)? == Fe::ONE, || format!("θ({g:?}) ≠ 1"));
    }
    Ok(t.verdict("θ trivial on Sp^M and T"))
}

/// For κ a non-square: no nonzero v, w with λ(⟨gv,v⟩) = λ(κ⟨gw,w⟩) on all of Sp^M.
pub fn check_kk_separation(space: &SymplecticSpace, lambda: &AdditiveCharacter, cap: u128) -> Result<Verdict> {
    let fq = space.field();
    let Some(kappa) = fq.least_non_square() else {
        return Ok(Verdict::skipped("no non-squares in characteristic 2"));
    };
    let twisted = lambda.twisted(kappa)?;
    let spm = space.enumerate_sp_upper(cap)?;
    let vs = nonzero_n_vectors(space);
    let table = |lam: &AdditiveCharacter, v: &[Fe]| -> Vec<Fe> {
        let chi = ChiV::on_n(space, v, lam);
        spm.iter().map(|g| chi.eval(space, g)).collect()
    };
    let base: Vec<Vec<Fe>> = vs.iter().map(|v| table(lambda, v)).collect();
    let tw: Vec<Vec<Fe>> = vs.iter().map(|v| table(&twisted, v)).collect();
    let mut t = Tally::new();
    for (i, v) in vs.iter().enumerate() {
        for (j, w) in vs.iter().enumerate() {
            t.check(base[i] != tw[j], || format!("κ={} v={v:?} w={w:?}", kappa.0));
        }
    }
    Ok(t.verdict("restrictions to Sp^M separate λ and λ[κ]"))
}

pub fn all_n_vectors(space: &SymplecticSpace) -> Vec<Vec<Fe>> {
    let n = space.rank();
    let q = space.q() as u64;
    (0..q.pow(n as u32))
        .map(|mut code| {
            let mut v = vec![Fe::ZERO; n];
            for x in v.iter_mut().rev() {
                *x = Fe((code % q) as u32);
                code /= q;
            }
            v
        })
        .collect()
}

pub fn nonzero_n_vectors(space: &SymplecticSpace) -> Vec<Vec<Fe>> {
    all_n_vectors(space).into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect()
}

/// Default sample of g0 for the conjugation identity: Weyl generators, w_0 and a torus element.
pub fn default_g0_sample(space: &SymplecticSpace) -> Vec<SympElement> {
    let n = space.rank();
    let mut out = vec![space.identity(), space.w0(), space.rho_vn()];
    for i in 1..n {
        out.push(space.w_gen(i).expect("valid"));
    }
    for j in 1..=n {
        out.push(space.c_gen(j).expect("valid"));
    }
    let mut t = vec![Fe::ONE; n];
    t[0] = space.field().generator();
    out.push(space.torus_element(&t).expect("nonzero"));
    out
}

pub const CHECK_CAP: u128 = DEFAULT_CAP;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldDescriptor;

    fn setup(n: usize, p: u32, l: u32, m: u32) -> (SymplecticSpace, AdditiveCharacter) {
        let fq = FieldDescriptor::create(p, 1, None).unwrap();
        let f = FieldDescriptor::create(l, m, None).unwrap();
        (SymplecticSpace::new(n, &fq).unwrap(), AdditiveCharacter::standard(&fq, &f).unwrap())
    }

    #[test]
    fn chi_values() {
        let (s, lam) = setup(2, 3, 2, 2);
        let fq = s.field().clone();
        let zero = ChiV::on_n(&s, &[Fe(0), Fe(0)], &lam);
        let chi = ChiV::on_n(&s, &[Fe(0), Fe(1)], &lam);
        for b in fq.elements() {
            let x = s.root_element(2, 4, b).unwrap();
            assert_eq!(zero.eval(&s, &x), Fe::ONE);
            assert_eq!(chi.eval(&s, &x), lam.eval(b));
            for a in fq.nonzero() {
                let c = ChiV::on_n(&s, &[Fe(0), a], &lam);
                assert_eq!(c.eval(&s, &x), lam.eval(fq.mul(b, fq.mul(a, a))));
            }
        }
    }

    #[test]
    fn stabilizers() {
        let (s, _) = setup(2, 3, 2, 2);
        let vn = [Fe(0), Fe(1)];
        let minus = s.neg(&s.identity());
        assert!(stabilizer_membership(&s, &vn, &s.identity(), false).unwrap());
        assert!(!stabilizer_membership(&s, &vn, &minus, false).unwrap());
        assert!(stabilizer_membership(&s, &vn, &minus, true).unwrap());
        for g in s.enumerate_sp_upper(CHECK_CAP).unwrap() {
            assert!(stabilizer_membership(&s, &[Fe(1), Fe(2)], &g, false).unwrap());
        }
        assert!(stabilizer_membership(&s, &vn, &s.rho_vn(), false).is_err());
    }

    #[test]
    fn theta_small() {
        let (s, lam) = setup(1, 3, 2, 2);
        let t = s.torus_element(&[Fe(2)]).unwrap();
        assert_eq!(theta(&s, lam.target(), &t).unwrap(), Fe::ONE);
        let f5 = FieldDescriptor::create(5, 1, None).unwrap();
        // over an odd-characteristic target the non-square gives −1
        assert_eq!(theta(&s, &f5, &t).unwrap(), Fe(4));
        assert_eq!(theta(&s, &f5, &s.identity()).unwrap(), Fe::ONE);
    }

    #[test]
    fn split_roundtrip() {
        let (s, _) = setup(2, 3, 2, 2);
        for g in s.enumerate_sp_m(CHECK_CAP).unwrap().iter().step_by(37) {
            let (a, b) = split_sa(&s, g).unwrap();
            assert_eq!(s.mul(&a, &b), *g);
        }
    }

    #[test]
    fn fundamental_character_matches_chi() {
        let (s, lam) = setup(2, 3, 2, 2);
        let chi = UCharacter::Chi(ChiV::on_n(&s, &[Fe(0), Fe(1)], &lam));
        let fun = UCharacter::Fundamental { coeffs: vec![Fe(0), Fe(1)], lambda: lam.clone() };
        let other = UCharacter::Fundamental { coeffs: vec![Fe(2), Fe(1)], lambda: lam.clone() };
        let u = s.enumerate_u(CHECK_CAP).unwrap();
        let f = lam.target();
        for x in &u {
            assert_eq!(chi.eval(&s, x), fun.eval(&s, x));
            for y in u.iter().step_by(7) {
                let xy = s.mul(x, y);
                assert_eq!(other.eval(&s, &xy), f.mul(other.eval(&s, x), other.eval(&s, y)));
            }
        }
    }

    #[test]
    fn lemmas_small() {
        let (s, lam) = setup(1, 3, 2, 2);
        assert!(check_lemma_homo(&s, &lam, CHECK_CAP).unwrap().is_pass());
        assert!(check_lemma_fp(&s, &lam, CHECK_CAP).unwrap().is_pass());
        let (a, b) = check_lemma_puo(&s, &lam, CHECK_CAP).unwrap();
        assert!(a.is_pass());
        assert!(b.is_pass());
        let g0 = default_g0_sample(&s);
        assert!(check_lemma_g0(&s, &lam, &g0, CHECK_CAP).unwrap().is_pass());
        assert!(check_kk_separation(&s, &lam, CHECK_CAP).unwrap().is_pass());
    }
}
