//! The submodules I_{α,i} and L of I, their identification with pieces of X,
//! the Weil-module test on L̃ = (L ⊕ S)/S, and the index arithmetic locating it.

use super::identities::e_chi_alpha;
use super::SteinbergModule;
use crate::error::{Error, Result};
use crate::ffield::{AdditiveCharacter, Fe};
use crate::outcome::{Tally, Verdict};
use crate::repcore::{find_invertible, intertwiner_space, relation_certificate, unit, Echelon, Representation, Subspace};
use crate::spgroup::{parabolic_order, sp_order, SympElement, SymplecticSpace};
use crate::weilmod::{self, Parity};

/// Basis vector u·w(i)·e_{χ_{αv_n}} of I_{α,i} with its I-coordinates.
#[derive(Clone, Debug)]
pub struct LVector {
    pub alpha: Fe,
    pub i: usize,
    pub u: SympElement,
    pub coords: Vec<Fe>,
}

/// L = ⊕_{α∈T, i} I_{α,i} for one additive character.
#[derive(Clone, Debug)]
pub struct LBasis {
    pub vectors: Vec<LVector>,
    pub socle: Vec<Fe>,
}

impl LBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn coordinates(&self) -> Vec<Vec<Fe>> {
        self.vectors.iter().map(|v| v.coords.clone()).collect()
    }

    /// The block I_{α,i}.
    pub fn block(&self, alpha: Fe, i: usize) -> Vec<Vec<Fe>> {
        self.vectors.iter().filter(|v| v.alpha == alpha && v.i == i).map(|v| v.coords.clone()).collect()
    }
}

/// U^−_{w(i)^{-1}}, the transversal indexing the basis of I_{α,i}.
pub fn i_block_transversal(space: &SymplecticSpace, i: usize) -> Result<Vec<SympElement>> {
    let w = space.inv(&space.w_cycle(i)?);
    space.enumerate_uw_minus(&w, u128::MAX)
}

/// Builds L for λ, certifies independence, dim (q^n−1)/2 and e_1 ∉ L.
pub fn build_l(module: &SteinbergModule, lambda: &AdditiveCharacter) -> Result<LBasis> {
    let s = module.space();
    let n = s.rank();
    let ga = module.algebra();
    let f = module.field();
    let mut vectors = Vec::new();
    let mut ech = Echelon::new(f, module.dim());
    for alpha in s.field().transversal() {
        let ec = e_chi_alpha(module, lambda, alpha)?;
        for i in 1..=n {
            let wi = s.w_cycle(i)?;
            let top = ga.left_mul(&wi, &ec)?;
            for u in i_block_transversal(s, i)? {
                let coords = module.coords_in_i(&ga.left_mul(&u, &top)?)?;
                if !ech.insert(coords.clone()) {
                    return Err(Error::Construction(format!("L basis dependent at α = {}, i = {i}, u = {u:?}", alpha.0)));
                }
                vectors.push(LVector { alpha, i, u, coords });
            }
        }
    }
    let expect = ((s.q() as usize).pow(n as u32) - 1) / 2;
    if vectors.len() != expect {
        return Err(Error::Construction(format!("dim L = {} ≠ (q^n−1)/2 = {expect}", vectors.len())));
    }
    let socle = vec![Fe::ONE; module.dim()];
    if ech.contains(&socle) {
        return Err(Error::Construction("e_1 lies in L".into()));
    }
    Ok(LBasis { vectors, socle })
}

/// (trian) h w(i) e_{χ_{αv_n}} = w(i) e_{χ_{αh_iv_n}} and (iH) h I_{α,i} = I_{h_iα,i}
/// for all h ∈ H, i, α ∈ F_q^*.
pub fn check_torus_blocks(module: &SteinbergModule, lambda: &AdditiveCharacter, cap: u128) -> Result<(Verdict, Verdict)> {
    let s = module.space();
    let n = s.rank();
    let ga = module.algebra();
    let fq = s.field();
    let hs = s.enumerate_h(cap)?;
    let alphas: Vec<Fe> = fq.nonzero().collect();
    let echis = alphas.iter().map(|&a| e_chi_alpha(module, lambda, a)).collect::<Result<Vec<_>>>()?;
    let pos = |a: Fe| alphas.iter().position(|&b| b == a).expect("nonzero");
    let mut trian = Tally::new();
    let mut ih = Tally::new();
    let blocks = |i: usize, a: Fe| -> Result<Vec<Vec<Fe>>> {
        let top = ga.left_mul(&s.w_cycle(i)?, &echis[pos(a)])?;
        let top_c = module.coords_in_i(&top)?;
        let mut out = Vec::new();
        for u in i_block_transversal(s, i)? {
            let m = module.action_matrix(&u);
            out.push(m.mul_vec(&top_c));
        }
        Ok(out)
    };
    for i in 1..=n {
        let wi = s.w_cycle(i)?;
        let mut spans = Vec::new();
        for &a in &alphas {
            spans.push(Subspace::span(module.field(), module.dim(), &blocks(i, a)?));
        }
        for h in &hs {
            let hi = s.apply(h, &s.v(i))[n + i - 1];
            let hm = module.action_matrix(h);
            for &a in &alphas {
                let lhs = ga.left_mul(&s.mul(h, &wi), &echis[pos(a)])?;
                let rhs = ga.left_mul(&wi, &echis[pos(fq.mul(a, hi))])?;
                trian.check(lhs == rhs, || format!("i = {i}, α = {}, h = {h:?}", a.0));
                let image: Vec<Vec<Fe>> = spans[pos(a)].basis().iter().map(|b| hm.mul_vec(b)).collect();
                let target = &spans[pos(fq.mul(hi, a))];
                ih.check(Subspace::span(module.field(), module.dim(), &image) == *target, || {
                    format!("h I_({},{i}) ≠ I_({},{i})", a.0, fq.mul(hi, a).0)
                });
            }
        }
    }
    Ok((trian.verdict("h w(i) e_χ = w(i) e_{χ^h}"), ih.verdict("h I_{α,i} = I_{h_i α,i}")))
}

fn isomorphic_by_intertwiner(a: &Representation, b: &Representation, seed: u64) -> Result<bool> {
    Ok(a.dim == b.dim && find_invertible(&intertwiner_space(a, b)?, seed).is_some())
}

/// (i) I_{α,i} ≅ X^+_{α,i} as U-modules for every α ∈ T, i; (ii) L ≅ X^+ as
/// Sp_M-modules, both by explicit invertible intertwiners.
pub fn check_impo1_and_cuatro(module: &SteinbergModule, lambda: &AdditiveCharacter, seed: u64) -> Result<(Verdict, Verdict)> {
    let s = module.space();
    let target = module.field();
    let l = build_l(module, lambda)?;
    let u_gens = s.generators_u();
    let i_u = module.representation(&u_gens)?;
    let x_u = weilmod::x_representation(s, lambda, &u_gens)?;
    let mut impo = Tally::new();
    for a in s.field().transversal() {
        for i in 1..=s.rank() {
            let lhs = i_u.subrepresentation(&l.block(a, i))?;
            let rhs = x_u.subrepresentation(&weilmod::x_alpha_i_basis(s, target, Parity::Plus, a, i)?)?;
            impo.check(isomorphic_by_intertwiner(&lhs, &rhs, seed)?, || format!("I_({},{i}) ≇ X+_({},{i})", a.0, a.0));
        }
    }
    let m_gens = s.generators_sp_m();
    let l_m = module.representation(&m_gens)?.subrepresentation(&l.coordinates())?;
    let x_m = weilmod::x_representation(s, lambda, &m_gens)?.subrepresentation(&weilmod::x_pm_basis(s, target, Parity::Plus))?;
    let cuatro = if isomorphic_by_intertwiner(&l_m, &x_m, seed)? {
        Verdict::pass(format!("L ≅ X^+ over Sp_M (dim {})", l.dim()))
    } else {
        Verdict::fail("L and X^+ are not isomorphic over Sp_M", format!("dim L = {}, dim X^+ = {}", l_m.dim, x_m.dim))
    };
    Ok((impo.verdict("I_{α,i} ≅ X^+_{α,i} over U"), cuatro))
}

/// One twist's pieces of the main check.
pub struct TwistResult {
    pub kappa: Fe,
    pub l_dim: usize,
    pub socle: Verdict,
    pub stability: Verdict,
    pub relations: Verdict,
    pub weil: Verdict,
    pub control: Verdict,
    quotient: Representation,
    coords: Vec<Vec<Fe>>,
}

pub struct MainTheoremReport {
    pub twists: Vec<TwistResult>,
    pub distinct: Verdict,
    pub joint_rank: Verdict,
    pub rank: usize,
}

impl MainTheoremReport {
    pub fn items(&self) -> Vec<(String, Verdict)> {
        let mut out = Vec::new();
        for t in &self.twists {
            let k = t.kappa.0;
            out.push((format!("socle[κ={k}]"), t.socle.clone()));
            out.push((format!("stability[κ={k}]"), t.stability.clone()));
            out.push((format!("relations[κ={k}]"), t.relations.clone()));
            out.push((format!("weil[κ={k}]"), t.weil.clone()));
            out.push((format!("control[κ={k}]"), t.control.clone()));
        }
        out.push(("distinct".into(), self.distinct.clone()));
        out.push(("joint_rank".into(), self.joint_rank.clone()));
        out
    }

    pub fn verdict(&self) -> Verdict {
        let parts = self.items().into_iter().map(|(_, v)| v).collect();
        Verdict::all(parts, "I contains both Weil modules of degree (q^n−1)/2")
    }
}

/// The twists used: 1 and the least non-square of F_q.
pub fn twists(space: &SymplecticSpace) -> Vec<Fe> {
    let mut out = vec![Fe::ONE];
    if let Some(k) = space.field().least_non_square() {
        out.push(k);
    }
    out
}

fn twist_check(
    module: &SteinbergModule,
    lambda: &AdditiveCharacter,
    kappa: Fe,
    gens: &[(String, crate::spgroup::SympElement)],
    rep: &Representation,
    seed: u64,
) -> Result<TwistResult> {
    let s = module.space();
    let f = module.field();
    let lk = lambda.twisted(kappa)?;
    let l = build_l(module, &lk)?;
    let d = module.dim();

    let mut socle = Tally::new();
    for ((label, _), m) in gens.iter().zip(&rep.matrices) {
        socle.check(m.mul_vec(&l.socle) == l.socle, || format!("{label} moves e_1"));
    }

    let mut hat = l.coordinates();
    hat.push(l.socle.clone());
    let span = Subspace::span(f, d, &hat);
    let mut stable = Tally::new();
    for ((label, _), m) in gens.iter().zip(&rep.matrices) {
        for (k, x) in l.vectors.iter().enumerate() {
            stable.check(span.contains(&m.mul_vec(&x.coords)), || format!("{label} moves L-vector {k} out of L ⊕ S"));
        }
    }
    let stability = stable.verdict("L ⊕ S stable under Sp");
    if !stability.is_pass() {
        return Err(Error::Evidence(format!("{}: {}", stability.detail, stability.counterexample.unwrap_or_default())));
    }
    let lhat = rep.subrepresentation(&hat)?;
    let (quotient, _) = lhat.quotient(&[unit(hat.len(), hat.len() - 1)])?;
    let relations = relation_certificate(&quotient, s, 40, seed, 400_000)?;

    let y = weilmod::weil_representation(s, &lk, gens)?;
    let y_plus = y.subrepresentation(&weilmod::y_basis(s, f, Parity::Plus))?;
    let homs = intertwiner_space(&quotient, &y_plus)?;
    let weil = if homs.len() == 1 && find_invertible(&homs, seed).is_some() {
        Verdict::pass(format!("Hom(L̃, Y^+) has dimension 1 with invertible basis (dim {})", quotient.dim))
    } else {
        Verdict::fail("L̃ is not isomorphic to Y^+", format!("intertwiner dimension {}, dim L̃ = {}, dim Y^+ = {}", homs.len(), quotient.dim, y_plus.dim))
    };
    let trivial = Representation::trivial(f, quotient.dim, quotient.labels.clone(), quotient.elements.clone());
    let control_dim = intertwiner_space(&quotient, &trivial)?.len();
    let control = if control_dim == 0 {
        Verdict::pass("Hom(L̃, trivial) = 0")
    } else {
        Verdict::fail("L̃ maps onto the trivial module", format!("intertwiner dimension {control_dim}"))
    };
    Ok(TwistResult {
        kappa,
        l_dim: l.dim(),
        socle: socle.verdict("g e_1 = e_1 for all generators"),
        stability,
        relations,
        weil,
        control,
        quotient,
        coords: l.coordinates(),
    })
}

/// Items (i)–(vi) for each twist, over the generators of Sp.
pub fn main_theorem_check(module: &SteinbergModule, lambda: &AdditiveCharacter, kappas: &[Fe], seed: u64) -> Result<MainTheoremReport> {
    let s = module.space();
    if module.field().characteristic() != 2 || s.q() % 2 == 0 {
        return Err(Error::Config("the main check needs l = 2 and odd q".into()));
    }
    if kappas.is_empty() {
        return Err(Error::Config("no twists given".into()));
    }
    let gens = s.generators_sp();
    let rep = module.representation(&gens)?;
    let twists = kappas
        .iter()
        .map(|&k| twist_check(module, lambda, k, &gens, &rep, seed))
        .collect::<Result<Vec<_>>>()?;
    let mut distinct = Tally::new();
    for (a, ta) in twists.iter().enumerate() {
        for tb in twists.iter().skip(a + 1) {
            let homs = intertwiner_space(&ta.quotient, &tb.quotient)?.len();
            distinct.check(homs == 0, || format!("Hom(L̃_{}, L̃_{}) has dimension {homs}", ta.kappa.0, tb.kappa.0));
        }
    }
    let mut all = Vec::new();
    for t in &twists {
        all.extend(t.coords.iter().cloned());
    }
    all.push(vec![Fe::ONE; module.dim()]);
    let rank = Subspace::span(module.field(), module.dim(), &all).dim();
    let half = ((s.q() as usize).pow(s.rank() as u32) - 1) / 2;
    let expect = twists.len() * half + 1;
    let joint_rank = if rank == expect {
        Verdict::pass(format!("rank of L_1 ∪ L_κ ∪ {{e_1}} = {rank}"))
    } else {
        Verdict::fail("L_1 + L_κ + S is not direct", format!("rank {rank} ≠ {expect}"))
    };
    Ok(MainTheoremReport { twists, distinct: distinct.verdict("L̃_1 ≇ L̃_κ"), joint_rank, rank })
}

/// Powers of 2 in |Sp : B| and |Sp : P_J|, by order formula and by enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GowLocation {
    pub n: usize,
    pub q: u32,
    pub index_b: u128,
    pub index_p: u128,
    pub v2_b: u32,
    pub v2_p: u32,
    pub enumerated: Option<bool>,
}

pub fn v2(x: u128) -> u32 {
    x.trailing_zeros()
}

/// Needs q ≡ 1 mod 4. Enumeration of P_J runs when |B| fits the cap.
pub fn gow_location_check(space: &SymplecticSpace, cap: Option<u128>) -> Result<(GowLocation, Verdict)> {
    let n = space.rank();
    let q = space.q();
    if q % 4 != 1 {
        return Err(Error::Config(format!("q = {q} is not 1 mod 4")));
    }
    let qq = q as u128;
    let order_b = qq.pow((n * n) as u32) * (qq - 1).pow(n as u32);
    let index_b = sp_order(n as u32, qq) / order_b;
    let index_p = index_b / (qq + 1);
    let enumerated = match cap {
        Some(c) => {
            let po = parabolic_order(space, c)?;
            Some(po.matches && po.order_b == order_b && po.order_p == (qq + 1) * order_b)
        }
        None => None,
    };
    let rec = GowLocation { n, q, index_b, index_p, v2_b: v2(index_b), v2_p: v2(index_p), enumerated };
    let mut t = Tally::new();
    t.check(index_b % (qq + 1) == 0, || format!("q+1 ∤ |Sp:B| = {index_b}"));
    t.check(rec.v2_p + 1 == rec.v2_b, || format!("v2(|Sp:P_J|) = {} ≠ {} − 1", rec.v2_p, rec.v2_b));
    if let Some(ok) = enumerated {
        t.check(ok, || "enumerated |P_J| ≠ (q+1)|B|".into());
    }
    let v = t.verdict(&format!("|Sp:B| = {index_b} (v2 {}), |Sp:P_J| = {index_p} (v2 {})", rec.v2_b, rec.v2_p));
    Ok((rec, v))
}
