//! Dense linear algebra over the coefficient field and a generic
//! representation container with spinning, commutants, intertwiners and
//! isomorphism tests.

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::ffield::{Fe, Field};
use crate::outcome::Verdict;
use crate::spgroup::{SympElement, SymplecticSpace};

pub const DEFAULT_SPIN_CAP: u128 = 1_000_000;

#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl PartialEq for Matrix {
    fn eq(&self, o: &Matrix) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data == o.data
    }
}
impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ";")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.0.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, d: usize) -> Matrix {
        let mut m = Matrix::zeros(field, d, d);
        for i in 0..d {
            m.data[i * d + i] = Fe::ONE;
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Fe>]) -> Result<Matrix> {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data: rows.concat() })
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, dim: usize, cols: &[Vec<Fe>]) -> Result<Matrix> {
        let mut m = Matrix::zeros(field, dim, cols.len());
        for (c, v) in cols.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::Dimension("column length".into()));
            }
            for r in 0..dim {
                m.data[r * cols.len() + c] = v[r];
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: Fe) {
        self.data[r * self.cols + c] = x;
    }
    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn column(&self, c: usize) -> Vec<Fe> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = o.get(k, c);
                    if !b.is_zero() {
                        let idx = r * o.cols + c;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = Fe::ZERO;
                for c in 0..self.cols {
                    let a = self.get(r, c);
                    if !a.is_zero() && !v[c].is_zero() {
                        acc = f.add(acc, f.mul(a, v[c]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: Fe) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(a, s)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(&self.field, self.cols);
        for r in 0..self.rows {
            e.insert(self.row(r).to_vec());
        }
        e.dim()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let d = self.rows;
        let cols: Vec<Vec<Fe>> = (0..d).map(|c| self.column(c)).collect();
        let solver = LinearSolver::new(&self.field, d, &cols)?;
        let mut inv = Matrix::zeros(&self.field, d, d);
        for c in 0..d {
            let e = unit(d, c);
            let x = solver.solve(&e).ok_or_else(|| Error::Dimension("singular matrix".into()))?;
            for r in 0..d {
                inv.set(r, c, x[r]);
            }
        }
        Ok(inv)
    }

    /// Basis of {x : M x = 0}.
    pub fn nullspace(&self) -> Vec<Vec<Fe>> {
        let mut e = Echelon::new(&self.field, self.cols);
        for r in 0..self.rows {
            e.insert(self.row(r).to_vec());
        }
        e.complement_kernel()
    }
}

pub fn unit(d: usize, i: usize) -> Vec<Fe> {
    let mut v = vec![Fe::ZERO; d];
    v[i] = Fe::ONE;
    v
}

/// Reduced row echelon form maintained incrementally, with optional
/// tracking of each row as a combination of the inserted vectors.
#[derive(Clone)]
pub struct Echelon {
    field: Field,
    dim: usize,
    /// (pivot column, normalized row, combination of inputs)
    rows: Vec<(usize, Vec<Fe>, Vec<Fe>)>,
    inputs: usize,
    track: bool,
}

impl Echelon {
    pub fn new(field: &Field, dim: usize) -> Echelon {
        Echelon { field: field.clone(), dim, rows: Vec::new(), inputs: 0, track: false }
    }

    pub fn tracking(field: &Field, dim: usize) -> Echelon {
        Echelon { track: true, ..Echelon::new(field, dim) }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn ambient(&self) -> usize {
        self.dim
    }

    fn axpy(&self, y: &mut [Fe], a: Fe, x: &[Fe]) {
        let f = &self.field;
        for (yi, &xi) in y.iter_mut().zip(x) {
            if !xi.is_zero() {
                *yi = f.sub(*yi, f.mul(a, xi));
            }
        }
    }

    /// Reduces v against the current rows; returns the coefficients t_i with
    /// v = Σ t_i row_i + residual.
    fn reduce_with(&self, v: &mut [Fe]) -> Vec<Fe> {
        let mut t = vec![Fe::ZERO; self.rows.len()];
        for (i, (p, row, _)) in self.rows.iter().enumerate() {
            let a = v[*p];
            if !a.is_zero() {
                self.axpy(v, a, row);
                t[i] = a;
            }
        }
        t
    }

    pub fn reduce(&self, v: &[Fe]) -> Vec<Fe> {
        let mut w = v.to_vec();
        self.reduce_with(&mut w);
        w
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Inserts v; returns true if it enlarged the span.
    pub fn insert(&mut self, v: Vec<Fe>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        let mut w = v;
        let t = self.reduce_with(&mut w);
        let k = self.inputs;
        self.inputs += 1;
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let f = self.field.clone();
        let mut combo = Vec::new();
        if self.track {
            combo = vec![Fe::ZERO; k + 1];
            combo[k] = Fe::ONE;
            for (i, (_, _, c)) in self.rows.iter().enumerate() {
                if !t[i].is_zero() {
                    for (j, &cj) in c.iter().enumerate() {
                        combo[j] = f.sub(combo[j], f.mul(t[i], cj));
                    }
                }
            }
        }
        let s = f.inv_nz(w[p]);
        for x in w.iter_mut() {
            *x = f.mul(*x, s);
        }
        for x in combo.iter_mut() {
            *x = f.mul(*x, s);
        }
        // back-substitute into existing rows
        for idx in 0..self.rows.len() {
            let a = self.rows[idx].1[p];
            if !a.is_zero() {
                let (_, row, c) = &mut self.rows[idx];
                for (ri, &wi) in row.iter_mut().zip(&w) {
                    if !wi.is_zero() {
                        *ri = f.sub(*ri, f.mul(a, wi));
                    }
                }
                if self.track {
                    c.resize(k + 1, Fe::ZERO);
                    for (ci, &wi) in c.iter_mut().zip(&combo) {
                        if !wi.is_zero() {
                            *ci = f.sub(*ci, f.mul(a, wi));
                        }
                    }
                }
            }
        }
        let pos = self.rows.partition_point(|(q, _, _)| *q < p);
        self.rows.insert(pos, (p, w, combo));
        true
    }

    /// Coefficients of v over the inserted vectors, if v lies in the span.
    pub fn express(&self, v: &[Fe]) -> Option<Vec<Fe>> {
        assert!(self.track, "express requires a tracking echelon");
        let f = &self.field;
        let mut w = v.to_vec();
        let t = self.reduce_with(&mut w);
        if w.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut out = vec![Fe::ZERO; self.inputs];
        for (i, (_, _, c)) in self.rows.iter().enumerate() {
            if !t[i].is_zero() {
                for (j, &cj) in c.iter().enumerate() {
                    out[j] = f.add(out[j], f.mul(t[i], cj));
                }
            }
        }
        Some(out)
    }

    pub fn basis(&self) -> Vec<Vec<Fe>> {
        self.rows.iter().map(|(_, r, _)| r.clone()).collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _, _)| *p).collect()
    }

    /// Basis of the kernel of the linear map whose rows are the stored rows.
    pub fn complement_kernel(&self) -> Vec<Vec<Fe>> {
        let f = &self.field;
        let pivots = self.pivots();
        let mut out = Vec::new();
        for free in 0..self.dim {
            if pivots.contains(&free) {
                continue;
            }
            let mut x = vec![Fe::ZERO; self.dim];
            x[free] = Fe::ONE;
            for (p, row, _) in &self.rows {
                x[*p] = f.neg(row[free]);
            }
            out.push(x);
        }
        out
    }
}

/// A subspace of F^d in canonical reduced echelon form.
#[derive(Clone)]
pub struct Subspace {
    ech: Echelon,
}

impl PartialEq for Subspace {
    fn eq(&self, o: &Subspace) -> bool {
        self.ech.dim == o.ech.dim && self.ech.basis() == o.ech.basis()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {})", self.dim(), self.ech.dim)
    }
}

impl Subspace {
    pub fn zero(field: &Field, d: usize) -> Subspace {
        Subspace { ech: Echelon::new(field, d) }
    }
    pub fn span(field: &Field, d: usize, vs: &[Vec<Fe>]) -> Subspace {
        let mut s = Subspace::zero(field, d);
        for v in vs {
            s.ech.insert(v.clone());
        }
        s
    }
    pub fn dim(&self) -> usize {
        self.ech.dim()
    }
    pub fn ambient(&self) -> usize {
        self.ech.dim
    }
    pub fn contains(&self, v: &[Fe]) -> bool {
        self.ech.contains(v)
    }
    pub fn insert(&mut self, v: Vec<Fe>) -> bool {
        self.ech.insert(v)
    }
    pub fn basis(&self) -> Vec<Vec<Fe>> {
        self.ech.basis()
    }
}

/// Expresses vectors in a fixed list of linearly independent vectors.
pub struct LinearSolver {
    ech: Echelon,
    count: usize,
}

impl LinearSolver {
    pub fn new(field: &Field, dim: usize, basis: &[Vec<Fe>]) -> Result<LinearSolver> {
        let mut ech = Echelon::tracking(field, dim);
        for (i, b) in basis.iter().enumerate() {
            if b.len() != dim {
                return Err(Error::Dimension("basis vector length".into()));
            }
            if !ech.insert(b.clone()) {
                return Err(Error::Dimension(format!("basis vector {i} is dependent on the previous ones")));
            }
        }
        Ok(LinearSolver { ech, count: basis.len() })
    }
    pub fn len(&self) -> usize {
        self.count
    }
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
    pub fn solve(&self, v: &[Fe]) -> Option<Vec<Fe>> {
        self.ech.express(v)
    }
}

/// Generator matrices for a representation of a finitely generated group.
#[derive(Clone, Debug)]
pub struct Representation {
    pub field: Field,
    pub dim: usize,
    pub labels: Vec<String>,
    pub elements: Option<Vec<SympElement>>,
    pub matrices: Vec<Matrix>,
}

impl Representation {
    pub fn new(field: &Field, dim: usize, labels: Vec<String>, elements: Option<Vec<SympElement>>, matrices: Vec<Matrix>) -> Result<Representation> {
        if labels.len() != matrices.len() || elements.as_ref().is_some_and(|e| e.len() != labels.len()) {
            return Err(Error::Dimension("generator label/matrix count mismatch".into()));
        }
        for (l, m) in labels.iter().zip(&matrices) {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Dimension(format!("generator {l} has the wrong shape")));
            }
            if !m.is_invertible() {
                return Err(Error::Dimension(format!("generator {l} is singular")));
            }
        }
        Ok(Representation { field: field.clone(), dim, labels, elements, matrices })
    }

    /// The trivial representation of dimension d on the given generator labels.
    pub fn trivial(field: &Field, dim: usize, labels: Vec<String>, elements: Option<Vec<SympElement>>) -> Representation {
        let matrices = labels.iter().map(|_| Matrix::identity(field, dim)).collect();
        Representation { field: field.clone(), dim, labels, elements, matrices }
    }

    pub fn word_matrix(&self, word: &[usize]) -> Matrix {
        let mut m = Matrix::identity(&self.field, self.dim);
        for &s in word {
            m = m.mul(&self.matrices[s]).expect("square");
        }
        m
    }

    /// Action on an invariant subspace, in the coordinates of `basis`.
    pub fn subrepresentation(&self, basis: &[Vec<Fe>]) -> Result<Representation> {
        let solver = LinearSolver::new(&self.field, self.dim, basis)?;
        let mut mats = Vec::new();
        for (l, m) in self.labels.iter().zip(&self.matrices) {
            let cols = basis
                .iter()
                .map(|b| solver.solve(&m.mul_vec(b)).ok_or_else(|| Error::Dimension(format!("subspace not stable under {l}"))))
                .collect::<Result<Vec<_>>>()?;
            mats.push(Matrix::from_columns(&self.field, basis.len(), &cols)?);
        }
        Representation::new(&self.field, basis.len(), self.labels.clone(), self.elements.clone(), mats)
    }

    /// Action on V / W where W = span(sub) is invariant; the quotient basis is
    /// the images of the standard vectors not among the pivots of W.
    pub fn quotient(&self, sub: &[Vec<Fe>]) -> Result<(Representation, QuotientMap)> {
        let w = Subspace::span(&self.field, self.dim, sub);
        let pivots = w.ech.pivots();
        let comp: Vec<Vec<Fe>> = (0..self.dim).filter(|c| !pivots.contains(c)).map(|c| unit(self.dim, c)).collect();
        let mut full = w.basis();
        full.extend(comp.iter().cloned());
        let map = QuotientMap { solver: LinearSolver::new(&self.field, self.dim, &full)?, sub_dim: w.dim() };
        let mut mats = Vec::new();
        for (l, m) in self.labels.iter().zip(&self.matrices) {
            for b in w.basis() {
                if !w.contains(&m.mul_vec(&b)) {
                    return Err(Error::Dimension(format!("submodule not stable under {l}")));
                }
            }
            let cols = comp.iter().map(|b| map.project(&m.mul_vec(b))).collect::<Vec<_>>();
            mats.push(Matrix::from_columns(&self.field, comp.len(), &cols)?);
        }
        let rep = Representation::new(&self.field, comp.len(), self.labels.clone(), self.elements.clone(), mats)?;
        Ok((rep, map))
    }

    /// The representation on a subset of the generators.
    pub fn restrict(&self, idx: &[usize]) -> Representation {
        Representation {
            field: self.field.clone(),
            dim: self.dim,
            labels: idx.iter().map(|&i| self.labels[i].clone()).collect(),
            elements: self.elements.as_ref().map(|e| idx.iter().map(|&i| e[i]).collect()),
            matrices: idx.iter().map(|&i| self.matrices[i].clone()).collect(),
        }
    }

    fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.dim.hash(&mut h);
        self.labels.hash(&mut h);
        for m in &self.matrices {
            for x in m.data() {
                x.0.hash(&mut h);
            }
        }
        h.finish()
    }
}

/// Coordinates in V / W with respect to the basis chosen by [`Representation::quotient`].
pub struct QuotientMap {
    solver: LinearSolver,
    sub_dim: usize,
}

impl QuotientMap {
    pub fn project(&self, v: &[Fe]) -> Vec<Fe> {
        self.solver.solve(v).expect("full basis")[self.sub_dim..].to_vec()
    }
}

/// Smallest invariant subspace containing the seeds.
pub fn spin(rep: &Representation, seeds: &[Vec<Fe>]) -> Result<Subspace> {
    let mut s = Subspace::zero(&rep.field, rep.dim);
    let mut queue = VecDeque::new();
    for v in seeds {
        if v.len() != rep.dim {
            return Err(Error::Dimension("seed length".into()));
        }
        if s.insert(v.clone()) {
            queue.push_back(v.clone());
        }
    }
    while let Some(v) = queue.pop_front() {
        if s.dim() == rep.dim {
            break;
        }
        for m in &rep.matrices {
            let w = m.mul_vec(&v);
            if s.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    Ok(s)
}

/// Proof that exhaustive spinning found no proper submodule, bound to the
/// exact generator matrices it was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityCertificate {
    fingerprint: u64,
    pub dim: usize,
    pub vectors_spun: u128,
}

/// Spins every projective point of F^d; None if some spin is proper.
pub fn certify_irreducible(rep: &Representation, cap: u128) -> Result<Option<IrreducibilityCertificate>> {
    let d = rep.dim;
    if d == 0 {
        return Ok(None);
    }
    let qf = rep.field.order() as u128;
    let points = (qf.pow(d as u32) - 1) / (qf - 1);
    if points > cap {
        return Err(Error::CapExceeded { what: "projective points for exhaustive spin".into(), size: points, cap });
    }
    let cert = IrreducibilityCertificate { fingerprint: rep.fingerprint(), dim: d, vectors_spun: points };
    let mut v = vec![Fe::ZERO; d];
    // projective representatives: leading nonzero coordinate equal to 1
    for lead in 0..d {
        for x in v.iter_mut() {
            *x = Fe::ZERO;
        }
        v[lead] = Fe::ONE;
        let tail = d - lead - 1;
        let total = qf.pow(tail as u32);
        for mut code in 0..total {
            for k in (lead + 1..d).rev() {
                v[k] = Fe((code % qf) as u32);
                code /= qf;
            }
            if spin(rep, std::slice::from_ref(&v))?.dim() < d {
                return Ok(None);
            }
        }
    }
    Ok(Some(cert))
}

pub fn irreducible_exhaustive(rep: &Representation, cap: u128) -> Result<bool> {
    Ok(certify_irreducible(rep, cap)?.is_some())
}

fn check_labels(r1: &Representation, r2: &Representation) -> Result<()> {
    if r1.labels != r2.labels {
        return Err(Error::Dimension("representations use different generator sequences".into()));
    }
    Ok(())
}

/// All T (d2×d1) with T·ρ1(g) = ρ2(g)·T for every generator g.
pub fn intertwiner_space(r1: &Representation, r2: &Representation) -> Result<Vec<Matrix>> {
    check_labels(r1, r2)?;
    let f = &r1.field;
    let (d1, d2) = (r1.dim, r2.dim);
    let unknowns = d1 * d2;
    let mut ech = Echelon::new(f, unknowns);
    // unknown index of T[i][j] is i*d1 + j
    for (m1, m2) in r1.matrices.iter().zip(&r2.matrices) {
        for i in 0..d2 {
            for j in 0..d1 {
                // (T m1)_{ij} − (m2 T)_{ij} = Σ_k T_ik m1_kj − Σ_k m2_ik T_kj
                let mut row = vec![Fe::ZERO; unknowns];
                for k in 0..d1 {
                    let a = m1.get(k, j);
                    if !a.is_zero() {
                        row[i * d1 + k] = f.add(row[i * d1 + k], a);
                    }
                }
                for k in 0..d2 {
                    let a = m2.get(i, k);
                    if !a.is_zero() {
                        row[k * d1 + j] = f.sub(row[k * d1 + j], a);
                    }
                }
                ech.insert(row);
                if ech.dim() == unknowns {
                    return Ok(Vec::new());
                }
            }
        }
    }
    Ok(ech
        .complement_kernel()
        .into_iter()
        .map(|x| Matrix { field: f.clone(), rows: d2, cols: d1, data: x })
        .collect())
}

pub fn commutant_dim(rep: &Representation) -> Result<usize> {
    Ok(intertwiner_space(rep, rep)?.len())
}

/// Looks for an invertible element of span(basis): exhaustive when the span
/// has at most `exhaustive` elements, otherwise seeded random combinations.
pub fn find_invertible(basis: &[Matrix], seed: u64) -> Option<Matrix> {
    let first = basis.first()?;
    let f = first.field().clone();
    if first.rows() != first.cols() {
        return None;
    }
    for b in basis {
        if b.is_invertible() {
            return Some(b.clone());
        }
    }
    let qf = f.order() as u128;
    let k = basis.len() as u32;
    let combine = |coeffs: &[Fe]| -> Matrix {
        let mut m = Matrix::zeros(&f, first.rows(), first.cols());
        for (b, &c) in basis.iter().zip(coeffs) {
            if !c.is_zero() {
                m = m.add(&b.scale(c));
            }
        }
        m
    };
    if qf.checked_pow(k).is_some_and(|t| t <= 65_536) {
        let total = qf.pow(k);
        for mut code in 1..total {
            let mut coeffs = vec![Fe::ZERO; basis.len()];
            for c in coeffs.iter_mut() {
                *c = Fe((code % qf) as u32);
                code /= qf;
            }
            let m = combine(&coeffs);
            if m.is_invertible() {
                return Some(m);
            }
        }
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4096 {
        let coeffs: Vec<Fe> = basis.iter().map(|_| Fe(rng.gen_range(0..f.order()))).collect();
        let m = combine(&coeffs);
        if m.is_invertible() {
            return Some(m);
        }
    }
    None
}

/// Isomorphism test. With certificates for both sides any nonzero intertwiner
/// suffices; otherwise an invertible intertwiner is searched for.
pub fn is_isomorphic(
    r1: &Representation,
    r2: &Representation,
    evidence: Option<(&IrreducibilityCertificate, &IrreducibilityCertificate)>,
    seed: u64,
) -> Result<bool> {
    check_labels(r1, r2)?;
    if r1.dim != r2.dim {
        return Ok(false);
    }
    let space = intertwiner_space(r1, r2)?;
    match evidence {
        Some((c1, c2)) => {
            if c1.fingerprint != r1.fingerprint() || c2.fingerprint != r2.fingerprint() {
                return Err(Error::Evidence("irreducibility certificate does not match the representation".into()));
            }
            Ok(!space.is_empty())
        }
        None => Ok(find_invertible(&space, seed).is_some()),
    }
}

/// Checks that a representation respects the group law of its generators.
///
/// Random words in the generators are bucketed by their group product; every
/// repeated product yields a pair of words whose matrix products must agree.
pub fn relation_certificate(
    rep: &Representation,
    space: &SymplecticSpace,
    collisions: usize,
    seed: u64,
    max_words: usize,
) -> Result<Verdict> {
    let elems = rep
        .elements
        .as_ref()
        .ok_or_else(|| Error::Evidence("relation certificate needs group elements".into()))?;
    let k = elems.len();
    if k == 0 {
        return Ok(Verdict::vacuous("no generators"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first: FxHashMap<u64, (Vec<usize>, Matrix)> = FxHashMap::default();
    let mut found = 0usize;
    let mut words = 0usize;
    while found < collisions && words < max_words {
        let len = rng.gen_range(1..=12);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..k)).collect();
        let mut g = space.identity();
        for &s in &word {
            g = space.mul(&g, &elems[s]);
        }
        let m = rep.word_matrix(&word);
        words += 1;
        match first.get(&space.key(&g)) {
            Some((w0, m0)) => {
                if *w0 != word {
                    found += 1;
                    if *m0 != m {
                        return Ok(Verdict::fail(
                            "matrix products differ for equal group products",
                            format!("words {} and {}", word_label(rep, w0), word_label(rep, &word)),
                        ));
                    }
                }
            }
            None => {
                first.insert(space.key(&g), (word, m));
            }
        }
    }
    if found < collisions {
        return Ok(Verdict::fail(
            format!("only {found} word collisions within {words} words"),
            format!("needed {collisions}"),
        ));
    }
    Ok(Verdict::pass(format!("{found} word pairs with equal products agree ({words} words)")))
}

fn word_label(rep: &Representation, w: &[usize]) -> String {
    w.iter().map(|&s| rep.labels[s].as_str()).collect::<Vec<_>>().join("·")
}

/// Complete homomorphism check over the whole generated group: matrices are
/// assigned along a BFS tree, then every Cayley-graph edge is verified.
pub fn homomorphism_exhaustive(rep: &Representation, space: &SymplecticSpace, cap: usize) -> Result<Verdict> {
    let elems = rep
        .elements
        .as_ref()
        .ok_or_else(|| Error::Evidence("homomorphism check needs group elements".into()))?;
    let mut index: FxHashMap<u64, usize> = FxHashMap::default();
    let mut verts: Vec<(SympElement, Matrix)> = vec![(space.identity(), Matrix::identity(&rep.field, rep.dim))];
    index.insert(space.key(&space.identity()), 0);
    let mut head = 0;
    let mut edges = 0usize;
    while head < verts.len() {
        let (g, m) = verts[head].clone();
        for (s, x) in elems.iter().enumerate() {
            let h = space.mul(&g, x);
            let hm = m.mul(&rep.matrices[s])?;
            edges += 1;
            match index.get(&space.key(&h)) {
                Some(&j) => {
                    if verts[j].1 != hm {
                        return Ok(Verdict::fail(
                            "generator action inconsistent with the group law",
                            format!("element {h:?} reached with two different matrices via {}", rep.labels[s]),
                        ));
                    }
                }
                None => {
                    if verts.len() >= cap {
                        return Err(Error::CapExceeded { what: "group for homomorphism check".into(), size: verts.len() as u128 + 1, cap: cap as u128 });
                    }
                    index.insert(space.key(&h), verts.len());
                    verts.push((h, hm));
                }
            }
        }
        head += 1;
    }
    Ok(Verdict::pass(format!("{} group elements, {edges} edges consistent", verts.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldDescriptor;

    fn f4() -> Field {
        FieldDescriptor::create(2, 2, None).unwrap()
    }

    fn diag_rep(f: &Field, vals: &[Vec<u32>]) -> Representation {
        let d = vals[0].len();
        let mats = vals
            .iter()
            .map(|v| {
                let mut m = Matrix::zeros(f, d, d);
                for (i, &x) in v.iter().enumerate() {
                    m.set(i, i, Fe(x));
                }
                m
            })
            .collect::<Vec<_>>();
        let labels = (0..vals.len()).map(|i| format!("g{i}")).collect();
        Representation::new(f, d, labels, None, mats).unwrap()
    }

    #[test]
    fn echelon_and_solver() {
        let f = f4();
        let b = vec![vec![Fe(1), Fe(2), Fe(0)], vec![Fe(0), Fe(1), Fe(3)]];
        let s = LinearSolver::new(&f, 3, &b).unwrap();
        let target: Vec<Fe> = (0..3).map(|i| f.add(f.mul(Fe(2), b[0][i]), f.mul(Fe(3), b[1][i]))).collect();
        assert_eq!(s.solve(&target), Some(vec![Fe(2), Fe(3)]));
        assert_eq!(s.solve(&[Fe(0), Fe(0), Fe(1)]), None);
        assert!(LinearSolver::new(&f, 3, &[b[0].clone(), b[0].clone()]).is_err());
        let m = Matrix::from_rows(&f, &[vec![Fe(1), Fe(2)], vec![Fe(2), Fe(1)]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&f, 2));
    }

    #[test]
    fn spin_basics() {
        let f = f4();
        let triv = Representation::trivial(&f, 2, vec!["a".into()], None);
        assert_eq!(spin(&triv, &[vec![Fe(0), Fe(0)]]).unwrap().dim(), 0);
        assert_eq!(spin(&triv, &[vec![Fe(1), Fe(2)]]).unwrap().dim(), 1);
        assert!(!irreducible_exhaustive(&triv, DEFAULT_SPIN_CAP).unwrap());
        let one = Representation::trivial(&f, 1, vec!["a".into()], None);
        assert!(irreducible_exhaustive(&one, DEFAULT_SPIN_CAP).unwrap());
        assert_eq!(commutant_dim(&one).unwrap(), 1);
    }

    #[test]
    fn commutant_of_sums() {
        let f = f4();
        let r = diag_rep(&f, &[vec![1, 2]]);
        assert_eq!(commutant_dim(&r).unwrap(), 2);
        let a = diag_rep(&f, &[vec![1]]);
        let b = diag_rep(&f, &[vec![2]]);
        assert!(intertwiner_space(&a, &b).unwrap().is_empty());
        let ca = certify_irreducible(&a, 10).unwrap().unwrap();
        let cb = certify_irreducible(&b, 10).unwrap().unwrap();
        assert!(!is_isomorphic(&a, &b, Some((&ca, &cb)), 0).unwrap());
        assert!(is_isomorphic(&a, &a, Some((&ca, &ca)), 0).unwrap());
        assert!(is_isomorphic(&a, &b, Some((&cb, &ca)), 0).is_err());
        assert!(is_isomorphic(&r, &r, None, 0).unwrap());
    }

    #[test]
    fn quotient_rep() {
        let f = f4();
        // upper triangular unipotent on F^2: invariant line e_0, trivial quotient
        let m = Matrix::from_rows(&f, &[vec![Fe(1), Fe(1)], vec![Fe(0), Fe(1)]]).unwrap();
        let r = Representation::new(&f, 2, vec!["x".into()], None, vec![m]).unwrap();
        let sub = r.subrepresentation(&[vec![Fe(1), Fe(0)]]).unwrap();
        assert_eq!(sub.matrices[0], Matrix::identity(&f, 1));
        let (qr, _) = r.quotient(&[vec![Fe(1), Fe(0)]]).unwrap();
        assert_eq!(qr.matrices[0], Matrix::identity(&f, 1));
        assert!(r.subrepresentation(&[vec![Fe(0), Fe(1)]]).is_err());
    }
}
