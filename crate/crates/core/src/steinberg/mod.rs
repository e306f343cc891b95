//! The Steinberg module I = F·Sp·e with e = (Σ_w (−1)^{ℓ(w)} n_w)(Σ_{b∈B} b),
//! its U-eigenvectors e_σ, coordinates in the basis (u·e)_{u∈U}, and the
//! identities and submodules built on top of them.

pub mod algebra;
pub mod identities;
pub mod submodules;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::characters::UCharacter;
use crate::error::{Error, Result};
use crate::ffield::{Fe, Field};
use crate::outcome::{Tally, Verdict};
use crate::repcore::{Matrix, Representation};
use crate::spgroup::{project_weyl, SympElement, SymplecticSpace, WeylGroup};

pub use algebra::{GaVector, GroupAlgebra};

/// U = R_w · K_w with K_w = {u : n_w^{-1} u n_w ∈ U} and R_w its complement
/// U_{n_w^{-1}}^−; both as indices into the sorted list of U.
struct CellSplit {
    minus: Vec<usize>,
    plus: Vec<usize>,
}

/// Ordered basis data of I: the list of U and the big-cell coordinate functional.
pub struct SteinbergModule<'a> {
    ga: GroupAlgebra<'a>,
    weyl: WeylGroup,
    lifts: Vec<SympElement>,
    signs: Vec<Fe>,
    borel: Vec<SympElement>,
    unipotent: Vec<SympElement>,
    u_index: FxHashMap<u64, usize>,
    cells: Vec<CellSplit>,
    big_cell_lift: SympElement,
    coord_sign: Fe,
    e: GaVector,
}

impl<'a> SteinbergModule<'a> {
    /// Builds e from the deterministic Weyl lifts.
    pub fn build(space: &'a SymplecticSpace, field: &Field, cap: u128) -> Result<SteinbergModule<'a>> {
        let weyl = WeylGroup::new(space);
        let lifts = weyl.elements().iter().map(|w| weyl.lift(w)).collect();
        Self::with_lifts(space, field, weyl, lifts, cap)
    }

    /// Builds e from lifts n_w·h with h drawn at random from H.
    pub fn build_random_lifts(space: &'a SymplecticSpace, field: &Field, seed: u64, cap: u128) -> Result<SteinbergModule<'a>> {
        let weyl = WeylGroup::new(space);
        let torus = space.enumerate_h(cap)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lifts = weyl.elements().iter().map(|w| space.mul(&weyl.lift(w), &torus[rng.gen_range(0..torus.len())])).collect();
        Self::with_lifts(space, field, weyl, lifts, cap)
    }

    fn with_lifts(space: &'a SymplecticSpace, field: &Field, weyl: WeylGroup, lifts: Vec<SympElement>, cap: u128) -> Result<SteinbergModule<'a>> {
        let total = (weyl.order() as u128) * space.order_b();
        if total > cap {
            return Err(Error::CapExceeded { what: "support of e".into(), size: total, cap });
        }
        for (w, g) in weyl.elements().iter().zip(&lifts) {
            if project_weyl(space, g).as_ref() != Some(w) {
                return Err(Error::Construction(format!("lift {g:?} does not represent {w}")));
            }
        }
        let ga = GroupAlgebra::new(space, field);
        let m1 = field.neg(Fe::ONE);
        let signs: Vec<Fe> = weyl.elements().iter().map(|w| field.pow(m1, weyl.length(w) as i64)).collect();
        let borel = space.enumerate_b(cap)?;
        let unipotent = space.enumerate_u(cap)?;
        let u_index: FxHashMap<u64, usize> = unipotent.iter().enumerate().map(|(i, u)| (space.key(u), i)).collect();

        let mut cells = Vec::with_capacity(lifts.len());
        for nw in &lifts {
            let ninv = space.inv(nw);
            let mut minus = Vec::new();
            let mut plus = Vec::new();
            for (i, u) in unipotent.iter().enumerate() {
                let c = space.mul(&space.mul(&ninv, u), nw);
                if space.in_u(&c) {
                    plus.push(i);
                }
                if space.in_u_opposite(&c) {
                    minus.push(i);
                }
            }
            if minus.len() * plus.len() != unipotent.len() {
                return Err(Error::Construction(format!(
                    "U does not split as U^- U^+ for lift {nw:?}: {} × {} ≠ {}",
                    minus.len(),
                    plus.len(),
                    unipotent.len()
                )));
            }
            let mut seen = FxHashSet::default();
            for &r in &minus {
                for &k in &plus {
                    seen.insert(space.key(&space.mul(&unipotent[r], &unipotent[k])));
                }
            }
            if seen.len() != unipotent.len() {
                return Err(Error::Construction("U^- U^+ products are not distinct".into()));
            }
            cells.push(CellSplit { minus, plus });
        }

        let mut terms = Vec::with_capacity(total as usize);
        for (nw, &s) in lifts.iter().zip(&signs) {
            for b in &borel {
                terms.push((space.key(&space.mul(nw, b)), s));
            }
        }
        let e = ga.from_terms(terms);
        let big_cell_lift = lifts[weyl.position(&weyl.longest()).expect("w0 in W")];
        let n = space.rank() as i64;
        let coord_sign = field.pow(m1, n * n);
        let module = SteinbergModule { ga, weyl, lifts, signs, borel, unipotent, u_index, cells, big_cell_lift, coord_sign, e };
        module.post_build()?;
        Ok(module)
    }

    /// he = e for the generators of H and we = −e for w ∈ ℱ.
    fn post_build(&self) -> Result<()> {
        let s = self.space();
        let f = self.field();
        let minus_e = self.ga.scale(&self.e, f.neg(Fe::ONE))?;
        for (label, w) in self.weyl.generator_labels().iter().zip(self.weyl.generator_matrices()) {
            if self.ga.left_mul(w, &self.e)? != minus_e {
                return Err(Error::Construction(format!("{label}·e ≠ −e")));
            }
        }
        for (label, h) in s.generators_b().iter().filter(|(l, _)| l.starts_with('h')).map(|(l, h)| (l, h)) {
            if self.ga.left_mul(h, &self.e)? != self.e {
                return Err(Error::Construction(format!("{label}·e ≠ e")));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &GroupAlgebra<'a> {
        &self.ga
    }

    pub fn space(&self) -> &'a SymplecticSpace {
        self.ga.space()
    }

    pub fn field(&self) -> &Field {
        self.ga.field()
    }

    pub fn e(&self) -> &GaVector {
        &self.e
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn lifts(&self) -> &[SympElement] {
        &self.lifts
    }

    pub fn borel(&self) -> &[SympElement] {
        &self.borel
    }

    /// U sorted by key; the order of the coordinate vectors.
    pub fn unipotent(&self) -> &[SympElement] {
        &self.unipotent
    }

    pub fn dim(&self) -> usize {
        self.unipotent.len()
    }

    pub fn u_position(&self, u: &SympElement) -> Option<usize> {
        self.u_index.get(&self.space().key(u)).copied()
    }

    /// (−1)^{n²} as an element of F.
    pub fn coordinate_sign(&self) -> Fe {
        self.coord_sign
    }

    /// Σ_u c_u·(u·e), using u·n_w·ΣB = r·n_w·ΣB for u = r·k.
    pub fn recombine(&self, coords: &[Fe]) -> Result<GaVector> {
        if coords.len() != self.dim() {
            return Err(Error::Dimension(format!("{} coordinates for a module of dimension {}", coords.len(), self.dim())));
        }
        let s = self.space();
        let f = self.field();
        let mut terms = Vec::new();
        for ((nw, &sign), cell) in self.lifts.iter().zip(&self.signs).zip(&self.cells) {
            for &r in &cell.minus {
                let ru = &self.unipotent[r];
                let mut c = Fe::ZERO;
                for &k in &cell.plus {
                    let idx = self.u_index[&s.key(&s.mul(ru, &self.unipotent[k]))];
                    c = f.add(c, coords[idx]);
                }
                if c.is_zero() {
                    continue;
                }
                let c = f.mul(c, sign);
                let base = s.mul(ru, nw);
                for b in &self.borel {
                    terms.push((s.key(&s.mul(&base, b)), c));
                }
            }
        }
        Ok(self.ga.from_terms(terms))
    }

    /// c_u = (−1)^{n²}·(coefficient of u·n_{w0} in x), then a round-trip check.
    pub fn coords_in_i(&self, x: &GaVector) -> Result<Vec<Fe>> {
        let c = self.coords_unchecked(x);
        if self.recombine(&c)? != *x {
            return Err(Error::Evidence("vector is not in I: coordinates do not recombine to it".into()));
        }
        Ok(c)
    }

    fn coords_unchecked(&self, x: &GaVector) -> Vec<Fe> {
        let s = self.space();
        let f = self.field();
        self.unipotent.iter().map(|u| f.mul(self.coord_sign, x.coefficient(s.key(&s.mul(u, &self.big_cell_lift))))).collect()
    }

    /// e_σ = Σ_u σ(u)^{-1} u·e, with u·e_σ = σ(u)e_σ checked on the generators of U.
    pub fn e_sigma(&self, sigma: &UCharacter) -> Result<GaVector> {
        let s = self.space();
        let f = self.field();
        let coords: Vec<Fe> = self.unipotent.iter().map(|u| f.inv_nz(sigma.eval(s, u))).collect();
        let x = self.recombine(&coords)?;
        for (label, u) in s.generators_u() {
            if self.ga.left_mul(&u, &x)? != self.ga.scale(&x, sigma.eval(s, &u))? {
                return Err(Error::Construction(format!("u·e_σ ≠ σ(u)e_σ at {label}: σ is not a character of U")));
            }
        }
        Ok(x)
    }

    /// e_1 = Σ_u u·e.
    pub fn e_one(&self) -> Result<GaVector> {
        self.recombine(&vec![Fe::ONE; self.dim()])
    }

    /// Matrix of g on I in the basis (u·e): entry (u', u) = (−1)^{n²}·e[(gu)^{-1}·u'·n_{w0}].
    pub fn action_matrix(&self, g: &SympElement) -> Matrix {
        let s = self.space();
        let f = self.field();
        let d = self.dim();
        let right: Vec<SympElement> = self.unipotent.iter().map(|u| s.mul(u, &self.big_cell_lift)).collect();
        let mut m = Matrix::zeros(f, d, d);
        for (c, u) in self.unipotent.iter().enumerate() {
            let inv = s.inv(&s.mul(g, u));
            for (r, y) in right.iter().enumerate() {
                let x = self.e.coefficient(s.key(&s.mul(&inv, y)));
                if !x.is_zero() {
                    m.set(r, c, f.mul(self.coord_sign, x));
                }
            }
        }
        m
    }

    /// The representation of the given generators on I.
    pub fn representation(&self, gens: &[(String, SympElement)]) -> Result<Representation> {
        let mats = gens.iter().map(|(_, g)| self.action_matrix(g)).collect();
        Representation::new(
            self.field(),
            self.dim(),
            gens.iter().map(|(l, _)| l.clone()).collect(),
            Some(gens.iter().map(|(_, g)| *g).collect()),
            mats,
        )
    }

    /// Index of the fundamental reflection lifts in the Weyl data (w_1..w_{n−1}, c_n).
    pub fn fundamental(&self) -> Vec<(String, SympElement)> {
        self.weyl.generator_labels().iter().cloned().zip(self.weyl.generator_matrices().iter().copied()).collect()
    }
}

// ---------------------------------------------------------------------------
// structural checks
// ---------------------------------------------------------------------------

/// e rebuilt from randomized lifts n_w·h is bitwise identical.
pub fn check_lift_invariance(module: &SteinbergModule, seeds: &[u64], cap: u128) -> Result<Verdict> {
    let mut t = Tally::new();
    for &seed in seeds {
        let other = SteinbergModule::build_random_lifts(module.space(), module.field(), seed, cap)?;
        t.check(other.e().terms() == module.e().terms(), || format!("seed {seed} changes e"));
    }
    Ok(t.verdict("e independent of the Weyl lifts"))
}

/// |supp e| = |W|·|B| (disjoint cells), c_n e = −e, he = e on all of H.
pub fn check_e_basics(module: &SteinbergModule, cap: u128) -> Result<Verdict> {
    let s = module.space();
    let ga = module.algebra();
    let mut t = Tally::new();
    let expect = module.weyl().order() * module.borel().len();
    t.check(module.e().len() == expect, || format!("|supp e| = {} ≠ {expect}", module.e().len()));
    let cn = s.c_gen(s.rank())?;
    let minus = ga.scale(module.e(), module.field().neg(Fe::ONE))?;
    t.check(ga.left_mul(&cn, module.e())? == minus, || "c_n e ≠ −e".into());
    for h in s.enumerate_h(cap)? {
        t.check(ga.left_mul(&h, module.e())? == *module.e(), || format!("h e ≠ e for h = {h:?}"));
    }
    let neg = s.neg(&s.identity());
    t.check(ga.left_mul(&neg, module.e())? == *module.e(), || "−1 acts nontrivially on e".into());
    Ok(t.verdict("e: support size, c_n e = −e, he = e"))
}

/// U acts regularly: u0·(u e) = (u0 u) e, i.e. every U-matrix is the left-regular permutation.
pub fn check_regular_u(module: &SteinbergModule, exhaustive: bool) -> Result<Verdict> {
    let s = module.space();
    let mut t = Tally::new();
    let us: Vec<SympElement> = if exhaustive {
        module.unipotent().to_vec()
    } else {
        s.generators_u().into_iter().map(|(_, u)| u).collect()
    };
    for u0 in &us {
        let m = module.action_matrix(u0);
        for (c, u) in module.unipotent().iter().enumerate() {
            let target = module.u_position(&s.mul(u0, u)).expect("U closed");
            let col = m.column(c);
            let ok = col.iter().enumerate().all(|(r, x)| if r == target { *x == Fe::ONE } else { x.is_zero() });
            t.check(ok, || format!("u0={u0:?} u={u:?}"));
        }
    }
    Ok(t.verdict("U affords the regular representation on I"))
}

/// Random combinations of the u·e recover their coefficients, and generator
/// columns recombine to the group-algebra products.
pub fn check_coordinates(module: &SteinbergModule, samples: usize, seed: u64) -> Result<Verdict> {
    let s = module.space();
    let ga = module.algebra();
    let f = module.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for i in 0..samples {
        let c: Vec<Fe> = (0..module.dim()).map(|_| Fe(rng.gen_range(0..f.order()))).collect();
        let x = module.recombine(&c)?;
        let back = module.coords_in_i(&x)?;
        t.check(back == c, || format!("sample {i} does not round-trip"));
    }
    let d = module.dim();
    let mut unit = vec![Fe::ZERO; d];
    unit[0] = Fe::ONE;
    t.check(module.coords_in_i(module.e())? == unit, || "coords(e) is not the indicator of 1".into());
    t.check(module.coords_in_i(&module.e_one()?)? == vec![Fe::ONE; d], || "coords(e_1) ≠ all ones".into());
    for (label, g) in s.generators_sp() {
        let m = module.action_matrix(&g);
        let u = module.unipotent()[rng.gen_range(0..d)];
        let col = m.column(module.u_position(&u).expect("in U"));
        let direct = ga.left_mul(&s.mul(&g, &u), module.e())?;
        t.check(module.recombine(&col)? == direct, || format!("column of {label} at {u:?} disagrees with g·u·e"));
    }
    Ok(t.verdict("coordinate functional round-trips"))
}

/// bar(x·e) = ē·bar(x) for every group element x.
pub fn check_involution(module: &SteinbergModule, cap: u128) -> Result<Verdict> {
    let s = module.space();
    let ga = module.algebra();
    let ebar = ga.involution(module.e())?;
    let mut t = Tally::new();
    let all = s.closure(&s.generators_sp().into_iter().map(|(_, g)| g).collect::<Vec<_>>(), cap)?;
    for g in &all {
        let lhs = ga.involution(&ga.left_mul(g, module.e())?)?;
        let rhs = ga.right_mul(&ebar, &s.inv(g))?;
        t.check(lhs == rhs, || format!("g = {g:?}"));
    }
    Ok(t.verdict("x·e ↦ ē·x̄ compatible with left translation"))
}

/// (u): u e_σ = σ(u) e_σ for all u ∈ U, on the characters supplied.
pub fn check_eigen(module: &SteinbergModule, sigmas: &[(String, UCharacter)]) -> Result<Verdict> {
    let s = module.space();
    let ga = module.algebra();
    let mut t = Tally::new();
    for (label, sigma) in sigmas {
        let x = module.e_sigma(sigma)?;
        t.check(!x.is_empty(), || format!("e_σ = 0 for {label}"));
        for u in module.unipotent() {
            t.check(ga.left_mul(u, &x)? == ga.scale(&x, sigma.eval(s, u))?, || format!("{label}: u = {u:?}"));
        }
    }
    Ok(t.verdict("u e_σ = σ(u) e_σ"))
}

/// (hu): h e_σ = e_{σ^h} for all h ∈ H.
pub fn check_torus_eigen(module: &SteinbergModule, sigmas: &[(String, UCharacter)], cap: u128) -> Result<Verdict> {
    let s = module.space();
    let ga = module.algebra();
    let mut t = Tally::new();
    for (label, sigma) in sigmas {
        let x = module.e_sigma(sigma)?;
        for h in s.enumerate_h(cap)? {
            let y = module.e_sigma(&sigma.conjugated_by(&h))?;
            t.check(ga.left_mul(&h, &x)? == y, || format!("{label}: h = {h:?}"));
        }
    }
    Ok(t.verdict("h e_σ = e_{σ^h}"))
}
