//! The symplectic space V = M ⊕ N over F_q, matrix elements of Sp(2n, q),
//! the named subgroups, and the Weyl group machinery.
//!
//! Basis order is u_1..u_n, v_1..v_n (indices 0..n and n..2n). Matrix
//! columns are images of basis vectors. Elements are encoded as row-major
//! base-q integers with the first entry most significant.

use std::collections::VecDeque;
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::ffield::{Fe, Field};

pub const MAX_RANK: usize = 3;
const MAX_ENTRIES: usize = 4 * MAX_RANK * MAX_RANK;
pub const DEFAULT_CAP: u128 = 10_000_000;

/// A 2n×2n matrix over F_q with entries stored as field codes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SympElement {
    n: u8,
    e: [u8; MAX_ENTRIES],
}

impl fmt::Debug for SympElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = 2 * self.n as usize;
        write!(f, "[")?;
        for r in 0..d {
            if r > 0 {
                write!(f, ";")?;
            }
            for c in 0..d {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.e[r * d + c])?;
            }
        }
        write!(f, "]")
    }
}

impl SympElement {
    #[inline]
    pub fn rank(&self) -> usize {
        self.n as usize
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        let d = 2 * self.n as usize;
        Fe(self.e[r * d + c] as u32)
    }
}

/// (V, ⟨,⟩) together with fast arithmetic on matrices of Sp(V).
pub struct SymplecticSpace {
    n: usize,
    d: usize,
    field: Field,
    q: u32,
    mul_t: Vec<u8>,
    add_t: Vec<u8>,
    neg_t: Vec<u8>,
    inv_t: Vec<u8>,
    key_pow: Vec<u64>,
}

impl fmt::Debug for SymplecticSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sp({}, {})", 2 * self.n, self.q)
    }
}

fn ipow(q: u32, e: u32) -> u128 {
    (q as u128).pow(e)
}

impl SymplecticSpace {
    pub fn new(n: usize, field: &Field) -> Result<SymplecticSpace> {
        if n == 0 || n > MAX_RANK {
            return Err(Error::Group(format!("rank n = {n} outside 1..={MAX_RANK}")));
        }
        let q = field.order();
        if q > 256 {
            return Err(Error::Group(format!("q = {q} too large for byte-coded matrices")));
        }
        let d = 2 * n;
        let entries = (d * d) as u32;
        let mut key_pow = vec![0u64; d * d];
        let mut acc: u64 = 1;
        for i in (0..d * d).rev() {
            key_pow[i] = acc;
            if i > 0 {
                acc = acc.checked_mul(q as u64).ok_or_else(|| {
                    Error::Group(format!("q^{entries} does not fit the 64-bit element encoding"))
                })?;
            }
        }
        // q^(d²) itself must also fit so that keys are < 2^64.
        acc.checked_mul(q as u64)
            .ok_or_else(|| Error::Group(format!("q^{entries} does not fit the 64-bit element encoding")))?;
        let mut mul_t = vec![0u8; (q * q) as usize];
        let mut add_t = vec![0u8; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                mul_t[(a * q + b) as usize] = field.mul(Fe(a), Fe(b)).0 as u8;
                add_t[(a * q + b) as usize] = field.add(Fe(a), Fe(b)).0 as u8;
            }
        }
        let neg_t = (0..q).map(|a| field.neg(Fe(a)).0 as u8).collect();
        let inv_t = (0..q).map(|a| if a == 0 { 0 } else { field.inv_nz(Fe(a)).0 as u8 }).collect();
        Ok(SymplecticSpace { n, d, field: field.clone(), q, mul_t, add_t, neg_t, inv_t, key_pow })
    }

    pub fn rank(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.d
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    fn m(&self, a: u8, b: u8) -> u8 {
        self.mul_t[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    fn a(&self, a: u8, b: u8) -> u8 {
        self.add_t[a as usize * self.q as usize + b as usize]
    }

    // ---- construction and access ----

    fn blank(&self) -> SympElement {
        SympElement { n: self.n as u8, e: [0; MAX_ENTRIES] }
    }

    pub fn identity(&self) -> SympElement {
        let mut g = self.blank();
        for i in 0..self.d {
            g.e[i * self.d + i] = 1;
        }
        g
    }

    /// Builds an element from a row-major matrix and verifies the form is preserved.
    pub fn from_matrix(&self, entries: &[Fe]) -> Result<SympElement> {
        let g = self.from_matrix_unchecked(entries)?;
        if !self.is_symplectic(&g) {
            return Err(Error::Group(format!("matrix {g:?} does not preserve the form")));
        }
        Ok(g)
    }

    fn from_matrix_unchecked(&self, entries: &[Fe]) -> Result<SympElement> {
        if entries.len() != self.d * self.d {
            return Err(Error::Dimension(format!("expected {} entries", self.d * self.d)));
        }
        let mut g = self.blank();
        for (i, x) in entries.iter().enumerate() {
            if x.0 >= self.q {
                return Err(Error::Group("entry outside the field".into()));
            }
            g.e[i] = x.0 as u8;
        }
        Ok(g)
    }

    pub fn entries(&self, g: &SympElement) -> Vec<Fe> {
        g.e[..self.d * self.d].iter().map(|&x| Fe(x as u32)).collect()
    }

    /// Block (0 = top-left A, 1 = top-right B, 2 = bottom-left C, 3 = bottom-right D).
    pub fn block(&self, g: &SympElement, which: usize) -> Vec<Fe> {
        let n = self.n;
        let (r0, c0) = match which {
            0 => (0, 0),
            1 => (0, n),
            2 => (n, 0),
            _ => (n, n),
        };
        let mut out = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                out.push(g.get(r0 + r, c0 + c));
            }
        }
        out
    }

    pub fn from_blocks(&self, a: &[Fe], b: &[Fe], c: &[Fe], dd: &[Fe]) -> Result<SympElement> {
        let n = self.n;
        let mut m = vec![Fe::ZERO; self.d * self.d];
        for r in 0..n {
            for col in 0..n {
                m[r * self.d + col] = a[r * n + col];
                m[r * self.d + n + col] = b[r * n + col];
                m[(n + r) * self.d + col] = c[r * n + col];
                m[(n + r) * self.d + n + col] = dd[r * n + col];
            }
        }
        self.from_matrix(&m)
    }

    // ---- arithmetic ----

    pub fn mul(&self, x: &SympElement, y: &SympElement) -> SympElement {
        let d = self.d;
        let mut out = self.blank();
        for r in 0..d {
            for k in 0..d {
                let a = x.e[r * d + k];
                if a == 0 {
                    continue;
                }
                for c in 0..d {
                    let b = y.e[k * d + c];
                    if b != 0 {
                        let idx = r * d + c;
                        out.e[idx] = self.a(out.e[idx], self.m(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_all(&self, xs: &[&SympElement]) -> SympElement {
        xs.iter().fold(self.identity(), |acc, x| self.mul(&acc, x))
    }

    /// Inverse via [[A,B],[C,D]]^{-1} = [[Dᵀ,−Bᵀ],[−Cᵀ,Aᵀ]].
    pub fn inv(&self, g: &SympElement) -> SympElement {
        let (n, d) = (self.n, self.d);
        let mut out = self.blank();
        for r in 0..n {
            for c in 0..n {
                let a = g.e[r * d + c];
                let b = g.e[r * d + n + c];
                let cc = g.e[(n + r) * d + c];
                let dd = g.e[(n + r) * d + n + c];
                out.e[c * d + r] = dd;
                out.e[c * d + n + r] = self.neg_t[b as usize];
                out.e[(n + c) * d + r] = self.neg_t[cc as usize];
                out.e[(n + c) * d + n + r] = a;
            }
        }
        out
    }

    pub fn conj(&self, h: &SympElement, g: &SympElement) -> SympElement {
        // h g h^{-1}
        self.mul(&self.mul(h, g), &self.inv(h))
    }

    pub fn neg(&self, g: &SympElement) -> SympElement {
        let mut out = *g;
        for i in 0..self.d * self.d {
            out.e[i] = self.neg_t[out.e[i] as usize];
        }
        out
    }

    pub fn apply(&self, g: &SympElement, x: &[Fe]) -> Vec<Fe> {
        let d = self.d;
        (0..d)
            .map(|r| {
                let mut acc = 0u8;
                for c in 0..d {
                    let a = g.e[r * d + c];
                    if a != 0 && x[c].0 != 0 {
                        acc = self.a(acc, self.m(a, x[c].0 as u8));
                    }
                }
                Fe(acc as u32)
            })
            .collect()
    }

    /// ⟨x, y⟩ = Σ x_{u_i} y_{v_i} − x_{v_i} y_{u_i}.
    pub fn form(&self, x: &[Fe], y: &[Fe]) -> Fe {
        let f = &self.field;
        let n = self.n;
        let mut acc = Fe::ZERO;
        for i in 0..n {
            acc = f.add(acc, f.mul(x[i], y[n + i]));
            acc = f.sub(acc, f.mul(x[n + i], y[i]));
        }
        acc
    }

    /// Gram identity gᵀΩg = Ω checked on all basis pairs.
    pub fn is_symplectic(&self, g: &SympElement) -> bool {
        let d = self.d;
        let cols: Vec<Vec<Fe>> = (0..d).map(|c| (0..d).map(|r| g.get(r, c)).collect()).collect();
        for i in 0..d {
            for j in 0..d {
                let expect = self.form(&basis(d, i), &basis(d, j));
                if self.form(&cols[i], &cols[j]) != expect {
                    return false;
                }
            }
        }
        true
    }

    // ---- encoding ----

    pub fn key(&self, g: &SympElement) -> u64 {
        let mut k = 0u64;
        for i in 0..self.d * self.d {
            k += g.e[i] as u64 * self.key_pow[i];
        }
        k
    }

    pub fn from_key(&self, mut k: u64) -> SympElement {
        let mut g = self.blank();
        let q = self.q as u64;
        for i in (0..self.d * self.d).rev() {
            g.e[i] = (k % q) as u8;
            k /= q;
        }
        g
    }

    // ---- vectors ----

    pub fn zero_vector(&self) -> Vec<Fe> {
        vec![Fe::ZERO; self.d]
    }
    /// u_i, 1-based.
    pub fn u(&self, i: usize) -> Vec<Fe> {
        basis(self.d, i - 1)
    }
    /// v_i, 1-based.
    pub fn v(&self, i: usize) -> Vec<Fe> {
        basis(self.d, self.n + i - 1)
    }
    /// Embeds N-coordinates (α_1..α_n) as Σ α_i v_i.
    pub fn n_vector(&self, coords: &[Fe]) -> Vec<Fe> {
        let mut x = self.zero_vector();
        x[self.n..].copy_from_slice(coords);
        x
    }
    pub fn m_vector(&self, coords: &[Fe]) -> Vec<Fe> {
        let mut x = self.zero_vector();
        x[..self.n].copy_from_slice(coords);
        x
    }

    // ---- named elements ----

    fn check_rootpair(&self, i: usize, j: usize) -> Result<()> {
        let n = self.n;
        if !(1 <= i && i < j && j <= 2 * n && i <= n) {
            return Err(Error::Group(format!("({i},{j}) is not a root index pair")));
        }
        Ok(())
    }

    /// x_{i,j}(α) for (i,j) in the root index set.
    pub fn root_element(&self, i: usize, j: usize, alpha: Fe) -> Result<SympElement> {
        self.check_rootpair(i, j)?;
        let n = self.n;
        let f = &self.field;
        if j <= n {
            let mut a = identity_block(n);
            a[(i - 1) * n + (j - 1)] = alpha;
            self.sp_mn(&a)
        } else {
            let mut s = vec![Fe::ZERO; n * n];
            let k = j - n;
            s[(i - 1) * n + (k - 1)] = alpha;
            s[(k - 1) * n + (i - 1)] = alpha;
            let _ = f;
            self.sp_upper(&s)
        }
    }

    /// diag(A, A^{-T}).
    pub fn sp_mn(&self, a: &[Fe]) -> Result<SympElement> {
        let n = self.n;
        let ainv = block_inverse(&self.field, a, n)
            .ok_or_else(|| Error::Group("singular block".into()))?;
        let at = transpose(&ainv, n);
        let z = vec![Fe::ZERO; n * n];
        self.from_blocks(a, &z, &z, &at)
    }

    /// [[I, S], [0, I]] with S symmetric.
    pub fn sp_upper(&self, s: &[Fe]) -> Result<SympElement> {
        let n = self.n;
        let i = identity_block(n);
        let z = vec![Fe::ZERO; n * n];
        self.from_blocks(&i, s, &z, &i)
    }

    /// ρ_{u,α}: x ↦ x + α⟨u,x⟩u.
    pub fn transvection(&self, u: &[Fe], alpha: Fe) -> SympElement {
        let f = &self.field;
        let d = self.d;
        let mut m = vec![Fe::ZERO; d * d];
        for c in 0..d {
            let e = basis(d, c);
            let t = f.mul(alpha, self.form(u, &e));
            for r in 0..d {
                m[r * d + c] = f.add(e[r], f.mul(t, u[r]));
            }
        }
        self.from_matrix_unchecked(&m).expect("transvection shape")
    }

    /// Torus element with g u_i = t_i u_i, g v_i = t_i^{-1} v_i.
    pub fn torus_element(&self, t: &[Fe]) -> Result<SympElement> {
        if t.len() != self.n {
            return Err(Error::Dimension("torus needs n eigenvalues".into()));
        }
        if t.iter().any(|x| x.is_zero()) {
            return Err(Error::Group("zero eigenvalue".into()));
        }
        let mut g = self.blank();
        for (i, &x) in t.iter().enumerate() {
            g.e[i * self.d + i] = x.0 as u8;
            let ix = self.n + i;
            g.e[ix * self.d + ix] = self.inv_t[x.0 as usize];
        }
        Ok(g)
    }

    fn signed_perm(&self, images: &[(usize, bool)]) -> SympElement {
        // images[c] = (row, negate) for column c
        let mut g = self.blank();
        for (c, &(r, neg)) in images.iter().enumerate() {
            g.e[r * self.d + c] = if neg { self.neg_t[1] } else { 1 };
        }
        g
    }

    /// w_i = (u_i, u_{i+1})(v_i, v_{i+1}), 1 ≤ i < n.
    pub fn w_gen(&self, i: usize) -> Result<SympElement> {
        let n = self.n;
        if !(1 <= i && i < n) {
            return Err(Error::Group(format!("w_{i} undefined for n = {n}")));
        }
        let mut img: Vec<(usize, bool)> = (0..self.d).map(|c| (c, false)).collect();
        img.swap(i - 1, i);
        img.swap(n + i - 1, n + i);
        Ok(self.signed_perm(&img))
    }

    /// c_j: u_j ↦ v_j, v_j ↦ −u_j.
    pub fn c_gen(&self, j: usize) -> Result<SympElement> {
        let n = self.n;
        if !(1 <= j && j <= n) {
            return Err(Error::Group(format!("c_{j} undefined for n = {n}")));
        }
        let mut img: Vec<(usize, bool)> = (0..self.d).map(|c| (c, false)).collect();
        img[j - 1] = (n + j - 1, false);
        img[n + j - 1] = (j - 1, true);
        Ok(self.signed_perm(&img))
    }

    /// w_0: u_i ↦ v_i, v_i ↦ −u_i.
    pub fn w0(&self) -> SympElement {
        let n = self.n;
        let img: Vec<(usize, bool)> =
            (0..self.d).map(|c| if c < n { (n + c, false) } else { (c - n, true) }).collect();
        self.signed_perm(&img)
    }

    /// w(i): the cycle u_n → u_i → u_{i+1} → … → u_{n−1} → u_n, same on the v's.
    pub fn w_cycle(&self, i: usize) -> Result<SympElement> {
        let n = self.n;
        if !(1 <= i && i <= n) {
            return Err(Error::Group(format!("w({i}) undefined for n = {n}")));
        }
        let mut img: Vec<(usize, bool)> = (0..self.d).map(|c| (c, false)).collect();
        if i < n {
            // u_n -> u_i, u_k -> u_{k+1} for i <= k < n
            img[n - 1] = (i - 1, false);
            for k in i..n {
                img[k - 1] = (k, false);
            }
            img[2 * n - 1] = (n + i - 1, false);
            for k in i..n {
                img[n + k - 1] = (n + k, false);
            }
        }
        Ok(self.signed_perm(&img))
    }

    /// Permutation matrix u_k ↦ u_{π(k)}, v_k ↦ v_{π(k)} (π 0-based).
    pub fn perm_element(&self, pi: &[usize]) -> SympElement {
        let n = self.n;
        let mut img: Vec<(usize, bool)> = vec![(0, false); self.d];
        for k in 0..n {
            img[k] = (pi[k], false);
            img[n + k] = (n + pi[k], false);
        }
        self.signed_perm(&img)
    }

    // ---- membership ----

    pub fn in_sp_m(&self, g: &SympElement) -> bool {
        let n = self.n;
        (0..n).all(|r| (0..n).all(|c| g.get(n + r, c).is_zero()))
    }

    pub fn in_sp_mn(&self, g: &SympElement) -> bool {
        let n = self.n;
        self.in_sp_m(g) && (0..n).all(|r| (0..n).all(|c| g.get(r, n + c).is_zero()))
    }

    fn top_left_is(&self, g: &SympElement, pred: impl Fn(usize, usize, Fe) -> bool) -> bool {
        let n = self.n;
        (0..n).all(|r| (0..n).all(|c| pred(r, c, g.get(r, c))))
    }

    /// Sp^M, the pointwise stabilizer of M.
    pub fn in_sp_upper(&self, g: &SympElement) -> bool {
        self.in_sp_m(g) && self.top_left_is(g, |r, c, x| x == if r == c { Fe::ONE } else { Fe::ZERO })
    }

    pub fn in_u(&self, g: &SympElement) -> bool {
        self.in_sp_m(g)
            && self.top_left_is(g, |r, c, x| {
                if r == c {
                    x == Fe::ONE
                } else if r > c {
                    x.is_zero()
                } else {
                    true
                }
            })
    }

    pub fn in_b(&self, g: &SympElement) -> bool {
        self.in_sp_m(g) && self.top_left_is(g, |r, c, x| r <= c || x.is_zero())
    }

    pub fn in_t(&self, g: &SympElement) -> bool {
        self.in_u(g) && self.in_sp_mn(g)
    }

    pub fn in_h(&self, g: &SympElement) -> bool {
        let d = self.d;
        (0..d).all(|r| (0..d).all(|c| r == c || g.get(r, c).is_zero()))
    }

    /// The opposite unipotent group w_0 U w_0^{-1}.
    pub fn in_u_opposite(&self, g: &SympElement) -> bool {
        let w0 = self.w0();
        let back = self.mul(&self.mul(&self.inv(&w0), g), &w0);
        self.in_u(&back)
    }

    /// u ∈ U_w^+: u ∈ U and w u w^{-1} ∈ U.
    pub fn in_uw_plus(&self, w: &SympElement, u: &SympElement) -> bool {
        self.in_u(u) && self.in_u(&self.conj(w, u))
    }

    /// u ∈ U_w^−: u ∈ U and w u w^{-1} ∈ w_0 U w_0^{-1}.
    pub fn in_uw_minus(&self, w: &SympElement, u: &SympElement) -> bool {
        self.in_u(u) && self.in_u_opposite(&self.conj(w, u))
    }

    // ---- enumeration ----

    fn guard(&self, what: &str, size: u128, cap: u128) -> Result<()> {
        if size > cap {
            return Err(Error::CapExceeded { what: what.to_string(), size, cap });
        }
        Ok(())
    }

    fn sorted(&self, mut v: Vec<SympElement>) -> Vec<SympElement> {
        v.sort_by_key(|g| self.key(g));
        v.dedup();
        v
    }

    pub fn order_u(&self) -> u128 {
        ipow(self.q, (self.n * self.n) as u32)
    }
    pub fn order_h(&self) -> u128 {
        ipow(self.q - 1, self.n as u32)
    }
    pub fn order_b(&self) -> u128 {
        self.order_u() * self.order_h()
    }
    pub fn order_gl(&self) -> u128 {
        let q = self.q as u128;
        let n = self.n as u32;
        (0..n).map(|i| q.pow(n) - q.pow(i)).product()
    }
    pub fn order_sp_m(&self) -> u128 {
        ipow(self.q, (self.n * (self.n + 1) / 2) as u32) * self.order_gl()
    }
    /// |Sp_{2n}(q)| = q^{n²} Π_{i=1}^{n} (q^{2i} − 1).
    pub fn order_sp(&self) -> u128 {
        sp_order(self.n as u32, self.q as u128)
    }
    pub fn order_weyl(&self) -> u128 {
        let n = self.n as u128;
        (1..=n).product::<u128>() << self.n
    }

    /// All symmetric n×n matrices over F_q, in code order.
    fn symmetric_blocks(&self) -> Vec<Vec<Fe>> {
        let n = self.n;
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|r| (r..n).map(move |c| (r, c))).collect();
        let total = (self.q as u64).pow(slots.len() as u32);
        (0..total)
            .map(|mut code| {
                let mut s = vec![Fe::ZERO; n * n];
                for &(r, c) in slots.iter().rev() {
                    let x = Fe((code % self.q as u64) as u32);
                    code /= self.q as u64;
                    s[r * n + c] = x;
                    s[c * n + r] = x;
                }
                s
            })
            .collect()
    }

    /// n×n blocks satisfying `pred`, enumerated over free positions.
    fn blocks_matching(&self, free: &[(usize, usize)], diag: &[Fe]) -> Vec<Vec<Fe>> {
        let n = self.n;
        let total = (self.q as u64).pow(free.len() as u32);
        (0..total)
            .map(|mut code| {
                let mut a = vec![Fe::ZERO; n * n];
                for (i, &x) in diag.iter().enumerate() {
                    a[i * n + i] = x;
                }
                for &(r, c) in free.iter().rev() {
                    a[r * n + c] = Fe((code % self.q as u64) as u32);
                    code /= self.q as u64;
                }
                a
            })
            .collect()
    }

    fn upper_free(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n).flat_map(|r| (r + 1..n).map(move |c| (r, c))).collect()
    }

    fn combine_upper(&self, s: &[Fe], a: &[Fe]) -> SympElement {
        // s·a with s = [[I,S],[0,I]], a = diag(A, A^{-T})
        let n = self.n;
        let ainv = block_inverse(&self.field, a, n).expect("invertible");
        let dblk = transpose(&ainv, n);
        let b = block_mul(&self.field, s, &dblk, n);
        let z = vec![Fe::ZERO; n * n];
        self.from_blocks(a, &b, &z, &dblk).expect("product of symplectic factors")
    }

    pub fn enumerate_t(&self, cap: u128) -> Result<Vec<SympElement>> {
        let free = self.upper_free();
        self.guard("T", ipow(self.q, free.len() as u32), cap)?;
        let ones = vec![Fe::ONE; self.n];
        let v = self
            .blocks_matching(&free, &ones)
            .iter()
            .map(|a| self.sp_mn(a).expect("unitriangular"))
            .collect();
        Ok(self.sorted(v))
    }

    pub fn enumerate_sp_upper(&self, cap: u128) -> Result<Vec<SympElement>> {
        self.guard("Sp^M", ipow(self.q, (self.n * (self.n + 1) / 2) as u32), cap)?;
        let v = self.symmetric_blocks().iter().map(|s| self.sp_upper(s).expect("symmetric")).collect();
        Ok(self.sorted(v))
    }

    pub fn enumerate_u(&self, cap: u128) -> Result<Vec<SympElement>> {
        self.guard("U", self.order_u(), cap)?;
        let free = self.upper_free();
        let ones = vec![Fe::ONE; self.n];
        let as_ = self.blocks_matching(&free, &ones);
        let ss = self.symmetric_blocks();
        let mut v = Vec::with_capacity(as_.len() * ss.len());
        for a in &as_ {
            for s in &ss {
                v.push(self.combine_upper(s, a));
            }
        }
        Ok(self.sorted(v))
    }

    pub fn enumerate_h(&self, cap: u128) -> Result<Vec<SympElement>> {
        self.guard("H", self.order_h(), cap)?;
        let nz: Vec<Fe> = self.field.nonzero().collect();
        let mut out = Vec::new();
        let total = nz.len().pow(self.n as u32);
        for mut code in 0..total {
            let mut t = vec![Fe::ONE; self.n];
            for x in t.iter_mut().rev() {
                *x = nz[code % nz.len()];
                code /= nz.len();
            }
            out.push(self.torus_element(&t)?);
        }
        Ok(self.sorted(out))
    }

    pub fn enumerate_b(&self, cap: u128) -> Result<Vec<SympElement>> {
        self.guard("B", self.order_b(), cap)?;
        let u = self.enumerate_u(cap)?;
        let h = self.enumerate_h(cap)?;
        let mut v = Vec::with_capacity(u.len() * h.len());
        for x in &u {
            for t in &h {
                v.push(self.mul(x, t));
            }
        }
        Ok(self.sorted(v))
    }

    pub fn enumerate_gl_blocks(&self, cap: u128) -> Result<Vec<Vec<Fe>>> {
        self.guard("GL_n", ipow(self.q, (self.n * self.n) as u32), cap)?;
        let n = self.n;
        let all: Vec<(usize, usize)> = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).collect();
        Ok(self
            .blocks_matching(&all, &[])
            .into_iter()
            .filter(|a| block_inverse(&self.field, a, n).is_some())
            .collect())
    }

    pub fn enumerate_sp_mn(&self, cap: u128) -> Result<Vec<SympElement>> {
        self.guard("Sp_{M,N}", self.order_gl(), cap)?;
        let v = self.enumerate_gl_blocks(cap)?.iter().map(|a| self.sp_mn(a).expect("invertible")).collect();
        Ok(self.sorted(v))
    }

    pub fn enumerate_sp_m(&self, cap: u128) -> Result<Vec<SympElement>> {
        self.guard("Sp_M", self.order_sp_m(), cap)?;
        let gl = self.enumerate_gl_blocks(cap)?;
        let ss = self.symmetric_blocks();
        let mut v = Vec::with_capacity(gl.len() * ss.len());
        for a in &gl {
            for s in &ss {
                v.push(self.combine_upper(s, a));
            }
        }
        Ok(self.sorted(v))
    }

    /// The root subgroup X_{(i,j)}.
    pub fn enumerate_root(&self, i: usize, j: usize) -> Result<Vec<SympElement>> {
        let v = self.field.elements().map(|a| self.root_element(i, j, a)).collect::<Result<Vec<_>>>()?;
        Ok(self.sorted(v))
    }

    pub fn enumerate_uw_plus(&self, w: &SympElement, cap: u128) -> Result<Vec<SympElement>> {
        Ok(self.enumerate_u(cap)?.into_iter().filter(|u| self.in_u(&self.conj(w, u))).collect())
    }

    pub fn enumerate_uw_minus(&self, w: &SympElement, cap: u128) -> Result<Vec<SympElement>> {
        Ok(self.enumerate_u(cap)?.into_iter().filter(|u| self.in_u_opposite(&self.conj(w, u))).collect())
    }

    /// Sp_M elements with gv ≡ v (or ±v when `hat`) modulo M.
    pub fn enumerate_stabilizer(&self, v: &[Fe], hat: bool, cap: u128) -> Result<Vec<SympElement>> {
        let full = self.n_vector(v);
        let neg: Vec<Fe> = v.iter().map(|&x| self.field.neg(x)).collect();
        Ok(self
            .enumerate_sp_m(cap)?
            .into_iter()
            .filter(|g| {
                let img = self.apply(g, &full);
                let np = &img[self.n..];
                np == v || (hat && np == neg.as_slice())
            })
            .collect())
    }

    /// Breadth-first closure of a generating set; sorted by key.
    pub fn closure(&self, gens: &[SympElement], cap: u128) -> Result<Vec<SympElement>> {
        let mut seen: FxHashSet<u64> = FxHashSet::default();
        let id = self.identity();
        seen.insert(self.key(&id));
        let mut out = vec![id];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in gens {
                let y = self.mul(&x, s);
                if seen.insert(self.key(&y)) {
                    out.push(y);
                    if out.len() as u128 > cap {
                        return Err(Error::CapExceeded { what: "closure".into(), size: out.len() as u128, cap });
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(self.sorted(out))
    }

    /// Unique factorisation u = u_plus · u_minus with u_plus ∈ U_w^+, u_minus ∈ U_w^−.
    pub fn factor_u(&self, u: &SympElement, w: &SympElement, minus: &[SympElement]) -> Result<(SympElement, SympElement)> {
        if !self.in_u(u) {
            return Err(Error::Group("factor_u: element is not in U".into()));
        }
        let mut found = None;
        for m in minus {
            let p = self.mul(u, &self.inv(m));
            if self.in_uw_plus(w, &p) {
                if found.is_some() {
                    return Err(Error::Group("factor_u: factorisation is not unique".into()));
                }
                found = Some((p, *m));
            }
        }
        found.ok_or_else(|| Error::Group("factor_u: no factorisation found".into()))
    }

    // ---- generating sets ----

    /// An F_p-basis of F_q: the monomials 1, x, …, x^{m−1}.
    pub fn prime_basis(&self) -> Vec<Fe> {
        let p = self.field.characteristic();
        (0..self.field.degree()).map(|k| Fe(p.pow(k))).collect()
    }

    pub fn root_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=2 * n {
                out.push((i, j));
            }
        }
        out
    }

    pub fn generators_u(&self) -> Vec<(String, SympElement)> {
        let mut out = Vec::new();
        for (i, j) in self.root_pairs() {
            for g in self.prime_basis() {
                let x = self.root_element(i, j, g).expect("valid pair");
                if x != self.identity() && !out.iter().any(|(_, y)| *y == x) {
                    out.push((format!("x{i},{j}({})", g.0), x));
                }
            }
        }
        out
    }

    pub fn generators_b(&self) -> Vec<(String, SympElement)> {
        let mut out = self.generators_u();
        let gen = self.field.generator();
        if gen != Fe::ONE {
            for k in 0..self.n {
                let mut t = vec![Fe::ONE; self.n];
                t[k] = gen;
                out.push((format!("h{}", k + 1), self.torus_element(&t).expect("nonzero")));
            }
        }
        out
    }

    pub fn generators_sp_m(&self) -> Vec<(String, SympElement)> {
        let mut out = self.generators_b();
        for i in 1..self.n {
            out.push((format!("w{i}"), self.w_gen(i).expect("valid")));
        }
        out
    }

    pub fn rho_vn(&self) -> SympElement {
        self.transvection(&self.v(self.n), self.field.from_int(-1))
    }

    pub fn generators_sp(&self) -> Vec<(String, SympElement)> {
        let mut out = self.generators_sp_m();
        out.push(("rho".to_string(), self.rho_vn()));
        out
    }
}

pub fn sp_order(n: u32, q: u128) -> u128 {
    q.pow(n * n) * (1..=n).map(|i| q.pow(2 * i) - 1).product::<u128>()
}

pub fn basis(d: usize, i: usize) -> Vec<Fe> {
    let mut x = vec![Fe::ZERO; d];
    x[i] = Fe::ONE;
    x
}

pub fn identity_block(n: usize) -> Vec<Fe> {
    let mut a = vec![Fe::ZERO; n * n];
    for i in 0..n {
        a[i * n + i] = Fe::ONE;
    }
    a
}

pub fn transpose(a: &[Fe], n: usize) -> Vec<Fe> {
    let mut t = vec![Fe::ZERO; n * n];
    for r in 0..n {
        for c in 0..n {
            t[c * n + r] = a[r * n + c];
        }
    }
    t
}

pub fn block_mul(f: &Field, a: &[Fe], b: &[Fe], n: usize) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; n * n];
    for r in 0..n {
        for c in 0..n {
            let mut acc = Fe::ZERO;
            for k in 0..n {
                acc = f.add(acc, f.mul(a[r * n + k], b[k * n + c]));
            }
            out[r * n + c] = acc;
        }
    }
    out
}

/// Gauss–Jordan inverse of a small square block; None if singular.
pub fn block_inverse(f: &Field, a: &[Fe], n: usize) -> Option<Vec<Fe>> {
    let mut m = a.to_vec();
    let mut inv = identity_block(n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r * n + col].is_zero())?;
        if piv != col {
            for c in 0..n {
                m.swap(piv * n + c, col * n + c);
                inv.swap(piv * n + c, col * n + c);
            }
        }
        let s = f.inv_nz(m[col * n + col]);
        for c in 0..n {
            m[col * n + c] = f.mul(m[col * n + c], s);
            inv[col * n + c] = f.mul(inv[col * n + c], s);
        }
        for r in 0..n {
            if r != col && !m[r * n + col].is_zero() {
                let t = m[r * n + col];
                for c in 0..n {
                    m[r * n + c] = f.sub(m[r * n + c], f.mul(t, m[col * n + c]));
                    inv[r * n + c] = f.sub(inv[r * n + c], f.mul(t, inv[col * n + c]));
                }
            }
        }
    }
    Some(inv)
}

pub fn block_det(f: &Field, a: &[Fe], n: usize) -> Fe {
    let mut m = a.to_vec();
    let mut det = Fe::ONE;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r * n + col].is_zero()) else {
            return Fe::ZERO;
        };
        if piv != col {
            for c in 0..n {
                m.swap(piv * n + c, col * n + c);
            }
            det = f.neg(det);
        }
        let p = m[col * n + col];
        det = f.mul(det, p);
        let pinv = f.inv_nz(p);
        for r in col + 1..n {
            if !m[r * n + col].is_zero() {
                let t = f.mul(m[r * n + col], pinv);
                for c in 0..n {
                    m[r * n + c] = f.sub(m[r * n + c], f.mul(t, m[col * n + c]));
                }
            }
        }
    }
    det
}

// ---------------------------------------------------------------------------
// Weyl group
// ---------------------------------------------------------------------------

/// A signed permutation of ±1..±n: u_k ↔ +k, v_k ↔ −k.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WeylElement {
    n: u8,
    img: [i8; MAX_RANK],
}

impl WeylElement {
    pub fn identity(n: usize) -> WeylElement {
        let mut img = [0i8; MAX_RANK];
        for k in 0..n {
            img[k] = k as i8 + 1;
        }
        WeylElement { n: n as u8, img }
    }

    pub fn rank(&self) -> usize {
        self.n as usize
    }

    /// Image of a signed label.
    pub fn image(&self, k: i8) -> i8 {
        let v = self.img[(k.unsigned_abs() - 1) as usize];
        if k > 0 {
            v
        } else {
            -v
        }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut img = [0i8; MAX_RANK];
        for k in 0..self.n as usize {
            img[k] = self.image(other.img[k]);
        }
        WeylElement { n: self.n, img }
    }

    pub fn images(&self) -> Vec<i8> {
        self.img[..self.n as usize].to_vec()
    }

    /// Length by the signed-inversion count after relabelling k ↦ n+1−k, so
    /// that the sign change of the last letter becomes the first.
    pub fn length_by_inversions(&self) -> usize {
        let n = self.n as i32;
        let t: Vec<i32> = (1..=n)
            .map(|k| {
                let x = self.image((n + 1 - k) as i8) as i32;
                x.signum() * (n + 1 - x.abs())
            })
            .collect();
        let mut inv = 0usize;
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                if t[i] > t[j] {
                    inv += 1;
                }
            }
        }
        let neg: i32 = t.iter().filter(|&&x| x < 0).map(|x| -x).sum();
        inv + neg as usize
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Projection of a monomial symplectic matrix to its signed permutation.
pub fn project_weyl(space: &SymplecticSpace, g: &SympElement) -> Option<WeylElement> {
    let n = space.rank();
    let d = 2 * n;
    let mut img = [0i8; MAX_RANK];
    for k in 0..n {
        let rows: Vec<usize> = (0..d).filter(|&r| !g.get(r, k).is_zero()).collect();
        if rows.len() != 1 {
            return None;
        }
        let r = rows[0];
        let label = if r < n { r as i8 + 1 } else { -((r - n) as i8 + 1) };
        let partner = if label > 0 { n + r } else { r - n };
        let vrows: Vec<usize> = (0..d).filter(|&rr| !g.get(rr, n + k).is_zero()).collect();
        if vrows != [partner] {
            return None;
        }
        img[k] = label;
    }
    Some(WeylElement { n: n as u8, img })
}

/// W with BFS lengths, leftmost-first reduced words and matrix lifts.
pub struct WeylGroup {
    n: usize,
    gen_labels: Vec<String>,
    gen_matrices: Vec<SympElement>,
    elements: Vec<WeylElement>,
    words: Vec<Vec<usize>>,
    lifts: Vec<SympElement>,
    index: FxHashMap<WeylElement, usize>,
}

impl WeylGroup {
    /// BFS over the Cayley graph on ℱ = {w_1,…,w_{n−1}, c_n}, multiplying on the right.
    pub fn new(space: &SymplecticSpace) -> WeylGroup {
        let n = space.rank();
        let mut gen_labels = Vec::new();
        let mut gen_matrices = Vec::new();
        for i in 1..n {
            gen_labels.push(format!("w{i}"));
            gen_matrices.push(space.w_gen(i).expect("valid"));
        }
        gen_labels.push(format!("c{n}"));
        gen_matrices.push(space.c_gen(n).expect("valid"));
        let gen_classes: Vec<WeylElement> =
            gen_matrices.iter().map(|g| project_weyl(space, g).expect("monomial")).collect();

        let id = WeylElement::identity(n);
        let mut elements = vec![id];
        let mut words = vec![Vec::new()];
        let mut lifts = vec![space.identity()];
        let mut index = FxHashMap::default();
        index.insert(id, 0);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head];
            for (s, cls) in gen_classes.iter().enumerate() {
                let y = x.compose(cls);
                if !index.contains_key(&y) {
                    index.insert(y, elements.len());
                    let mut w = words[head].clone();
                    w.push(s);
                    words.push(w);
                    lifts.push(space.mul(&lifts[head], &gen_matrices[s]));
                    elements.push(y);
                }
            }
            head += 1;
        }
        WeylGroup { n, gen_labels, gen_matrices, elements, words, lifts, index }
    }

    pub fn rank(&self) -> usize {
        self.n
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }
    pub fn generator_matrices(&self) -> &[SympElement] {
        &self.gen_matrices
    }
    pub fn generator_labels(&self) -> &[String] {
        &self.gen_labels
    }
    pub fn position(&self, w: &WeylElement) -> Option<usize> {
        self.index.get(w).copied()
    }
    pub fn length(&self, w: &WeylElement) -> usize {
        self.words[self.index[w]].len()
    }
    pub fn word(&self, w: &WeylElement) -> &[usize] {
        &self.words[self.index[w]]
    }
    pub fn word_string(&self, w: &WeylElement) -> String {
        let parts: Vec<&str> = self.word(w).iter().map(|&s| self.gen_labels[s].as_str()).collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }
    /// Deterministic lift n_w ∈ W_2.
    pub fn lift(&self, w: &WeylElement) -> SympElement {
        self.lifts[self.index[w]]
    }
    pub fn longest(&self) -> WeylElement {
        let mut img = [0i8; MAX_RANK];
        for k in 0..self.n {
            img[k] = -(k as i8 + 1);
        }
        WeylElement { n: self.n as u8, img }
    }
}

/// Orders of B and of P_J = B ∪ B c_n B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicOrder {
    pub order_b: u128,
    pub order_p: u128,
    pub double_coset: u128,
    /// |B|² / |B ∩ c_n B c_n^{-1}|, the orbit–stabilizer count of B c_n B.
    pub orbit_count: u128,
    pub matches: bool,
}

/// Enumerates B c_n B by closing {c_n} under left and right multiplication by
/// the B generators, and cross-checks with orbit–stabilizer.
pub fn parabolic_order(space: &SymplecticSpace, cap: u128) -> Result<ParabolicOrder> {
    let b = space.enumerate_b(cap)?;
    let order_b = b.len() as u128;
    let cn = space.c_gen(space.rank())?;
    let gens: Vec<SympElement> = space.generators_b().into_iter().map(|(_, g)| g).collect();
    let b_keys: FxHashSet<u64> = b.iter().map(|g| space.key(g)).collect();
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    seen.insert(space.key(&cn));
    let mut queue = VecDeque::from([cn]);
    let mut disjoint = !b_keys.contains(&space.key(&cn));
    while let Some(x) = queue.pop_front() {
        for s in &gens {
            for y in [space.mul(s, &x), space.mul(&x, s)] {
                let k = space.key(&y);
                if seen.insert(k) {
                    if seen.len() as u128 > cap {
                        return Err(Error::CapExceeded { what: "B c_n B".into(), size: seen.len() as u128, cap });
                    }
                    if b_keys.contains(&k) {
                        disjoint = false;
                    }
                    queue.push_back(y);
                }
            }
        }
    }
    let double_coset = seen.len() as u128;
    let cn_inv = space.inv(&cn);
    let stab = b.iter().filter(|g| space.in_b(&space.mul(&space.mul(&cn_inv, g), &cn))).count() as u128;
    let orbit_count = order_b * order_b / stab;
    let order_p = order_b + double_coset;
    let q = space.q() as u128;
    Ok(ParabolicOrder {
        order_b,
        order_p,
        double_coset,
        orbit_count,
        matches: disjoint && orbit_count == double_coset && order_p == (q + 1) * order_b,
    })
}

/// Subgroups of Sp with both a membership predicate and an enumerator.
#[derive(Clone, Debug)]
pub enum SubgroupId {
    U,
    T,
    H,
    B,
    SpUpper,
    SpMN,
    SpM,
    UwPlus(SympElement),
    UwMinus(SympElement),
    Root(usize, usize),
    Stabilizer(Vec<Fe>),
    StabilizerHat(Vec<Fe>),
}

impl SubgroupId {
    pub fn contains(&self, space: &SymplecticSpace, g: &SympElement) -> bool {
        match self {
            SubgroupId::U => space.in_u(g),
            SubgroupId::T => space.in_t(g),
            SubgroupId::H => space.in_h(g) && space.is_symplectic(g),
            SubgroupId::B => space.in_b(g),
            SubgroupId::SpUpper => space.in_sp_upper(g),
            SubgroupId::SpMN => space.in_sp_mn(g),
            SubgroupId::SpM => space.in_sp_m(g),
            SubgroupId::UwPlus(w) => space.in_uw_plus(w, g),
            SubgroupId::UwMinus(w) => space.in_uw_minus(w, g),
            SubgroupId::Root(i, j) => {
                space.field().elements().any(|a| space.root_element(*i, *j, a).map(|x| x == *g).unwrap_or(false))
            }
            SubgroupId::Stabilizer(v) | SubgroupId::StabilizerHat(v) => {
                if !space.in_sp_m(g) {
                    return false;
                }
                let img = space.apply(g, &space.n_vector(v));
                let np = &img[space.rank()..];
                let neg: Vec<Fe> = v.iter().map(|&x| space.field().neg(x)).collect();
                np == v.as_slice() || (matches!(self, SubgroupId::StabilizerHat(_)) && np == neg.as_slice())
            }
        }
    }

    pub fn enumerate(&self, space: &SymplecticSpace, cap: u128) -> Result<Vec<SympElement>> {
        match self {
            SubgroupId::U => space.enumerate_u(cap),
            SubgroupId::T => space.enumerate_t(cap),
            SubgroupId::H => space.enumerate_h(cap),
            SubgroupId::B => space.enumerate_b(cap),
            SubgroupId::SpUpper => space.enumerate_sp_upper(cap),
            SubgroupId::SpMN => space.enumerate_sp_mn(cap),
            SubgroupId::SpM => space.enumerate_sp_m(cap),
            SubgroupId::UwPlus(w) => space.enumerate_uw_plus(w, cap),
            SubgroupId::UwMinus(w) => space.enumerate_uw_minus(w, cap),
            SubgroupId::Root(i, j) => space.enumerate_root(*i, *j),
            SubgroupId::Stabilizer(v) => space.enumerate_stabilizer(v, false, cap),
            SubgroupId::StabilizerHat(v) => space.enumerate_stabilizer(v, true, cap),
        }
    }
}

/// Gram identity for every enumerated element and generator, |U| = q^{n²},
/// |U_{n_w}^−| = q^{ℓ(w)} for every Weyl element and ℓ(w_0) = n².
pub fn check_foundations(space: &SymplecticSpace, cap: u128) -> Result<crate::outcome::Verdict> {
    let mut t = crate::outcome::Tally::new();
    let n = space.rank();
    let q = space.q() as u128;
    let u = space.enumerate_u(cap)?;
    let b = space.enumerate_b(cap)?;
    let spm = space.enumerate_sp_m(cap)?;
    for g in u.iter().chain(&b).chain(&spm) {
        t.check(space.is_symplectic(g), || format!("{g:?} is not symplectic"));
    }
    for (label, g) in space.generators_sp() {
        t.check(space.is_symplectic(&g), || format!("generator {label} is not symplectic"));
    }
    t.check(u.len() as u128 == q.pow((n * n) as u32), || format!("|U| = {} ≠ q^(n²)", u.len()));
    let weyl = WeylGroup::new(space);
    for w in weyl.elements() {
        let lift = weyl.lift(w);
        t.check(space.is_symplectic(&lift), || format!("lift of {w} is not symplectic"));
        let minus = u.iter().filter(|x| space.in_uw_minus(&lift, x)).count() as u128;
        let len = weyl.length(w);
        t.check(minus == q.pow(len as u32), || format!("|U_w^-| = {minus} ≠ q^{len} for w = {w}"));
    }
    let l0 = weyl.length(&weyl.longest());
    t.check(l0 == n * n, || format!("ℓ(w_0) = {l0} ≠ n²"));
    Ok(t.verdict(&format!("Gram identity, |U| = q^(n²), |U_w^-| = q^ℓ(w), ℓ(w_0) = n² ({} Weyl elements)", weyl.order())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldDescriptor;

    fn space(n: usize, p: u32) -> SymplecticSpace {
        SymplecticSpace::new(n, &FieldDescriptor::create(p, 1, None).unwrap()).unwrap()
    }

    #[test]
    fn root_elements() {
        let s = space(1, 3);
        let x = s.root_element(1, 2, Fe(1)).unwrap();
        // v_1 ↦ v_1 + u_1, u_1 fixed
        assert_eq!(s.apply(&x, &s.v(1)), vec![Fe(1), Fe(1)]);
        assert_eq!(s.apply(&x, &s.u(1)), s.u(1));
        assert_eq!(s.root_element(1, 2, Fe(0)).unwrap(), s.identity());
        assert!(s.root_element(2, 1, Fe(1)).is_err());
        let s2 = space(2, 3);
        let a = s2.root_element(1, 2, Fe(1)).unwrap();
        let b = s2.root_element(1, 2, Fe(2)).unwrap();
        assert_eq!(s2.mul(&a, &b), s2.identity());
    }

    #[test]
    fn cn_from_transvections() {
        for (n, p) in [(1, 3), (2, 3), (2, 5), (1, 7)] {
            let s = space(n, p);
            let m1 = s.field().from_int(-1);
            let ru = s.transvection(&s.u(n), m1);
            let rv = s.transvection(&s.v(n), m1);
            assert_eq!(s.mul_all(&[&ru, &rv, &ru]), s.c_gen(n).unwrap());
            // ρ_{u_n,β} = x_{n,2n}(β)
            for b in s.field().elements() {
                assert_eq!(s.transvection(&s.u(n), b), s.root_element(n, 2 * n, b).unwrap());
            }
        }
    }

    #[test]
    fn inverse_and_keys() {
        let s = space(2, 3);
        let u = s.enumerate_u(DEFAULT_CAP).unwrap();
        assert_eq!(u.len(), 81);
        for g in &u {
            assert!(s.is_symplectic(g));
            assert_eq!(s.mul(g, &s.inv(g)), s.identity());
            assert_eq!(s.from_key(s.key(g)), *g);
        }
        let keys: Vec<u64> = u.iter().map(|g| s.key(g)).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn weyl_generators() {
        let s = space(2, 3);
        assert_eq!(s.w_cycle(2).unwrap(), s.identity());
        let c2 = s.c_gen(2).unwrap();
        assert_eq!(s.apply(&c2, &s.u(2)), s.v(2));
        let neg_u2: Vec<Fe> = s.u(2).iter().map(|&x| s.field().neg(x)).collect();
        assert_eq!(s.apply(&c2, &s.v(2)), neg_u2);
        assert_eq!(s.apply(&c2, &s.u(1)), s.u(1));
        assert_eq!(s.mul(&s.c_gen(1).unwrap(), &c2), s.w0());
        let w1 = s.w_cycle(1).unwrap();
        assert_eq!(s.apply(&w1, &s.v(2)), s.v(1));
        assert_eq!(s.apply(&w1, &s.v(1)), s.v(2));
    }

    #[test]
    fn weyl_bfs() {
        for n in 1..=3 {
            let s = space(n, 3);
            let w = WeylGroup::new(&s);
            assert_eq!(w.order() as u128, s.order_weyl());
            assert_eq!(w.length(&w.longest()), n * n);
            for (k, x) in w.elements().iter().enumerate() {
                assert_eq!(w.length(x), x.length_by_inversions(), "{x}");
                let lift = w.lift(x);
                assert!(s.is_symplectic(&lift));
                assert_eq!(project_weyl(&s, &lift), Some(*x));
                let _ = k;
            }
            let cn = project_weyl(&s, &s.c_gen(n).unwrap()).unwrap();
            assert_eq!(w.length(&cn), 1);
            assert_eq!(w.lift(&cn), s.c_gen(n).unwrap());
        }
    }

    #[test]
    fn orders() {
        let s = space(2, 3);
        assert_eq!(s.enumerate_b(DEFAULT_CAP).unwrap().len(), 324);
        assert_eq!(s.enumerate_h(DEFAULT_CAP).unwrap().len(), 4);
        assert_eq!(s.enumerate_sp_m(DEFAULT_CAP).unwrap().len(), 1296);
        let s1 = space(1, 3);
        let t = s1.torus_element(&[Fe(2)]).unwrap();
        assert_eq!(s1.entries(&t), vec![Fe(2), Fe(0), Fe(0), Fe(2)]);
        assert!(s1.torus_element(&[Fe(0)]).is_err());
        assert!(s.enumerate_u(10).is_err());
    }

    #[test]
    fn encoding_overflow_rejected() {
        let f5 = FieldDescriptor::create(5, 1, None).unwrap();
        assert!(SymplecticSpace::new(3, &f5).is_err());
        let f3 = FieldDescriptor::create(3, 1, None).unwrap();
        assert!(SymplecticSpace::new(3, &f3).is_ok());
    }

    #[test]
    fn parabolic_small() {
        let p = parabolic_order(&space(1, 3), DEFAULT_CAP).unwrap();
        assert_eq!((p.order_b, p.order_p), (6, 24));
        assert!(p.matches);
        let p = parabolic_order(&space(2, 3), DEFAULT_CAP).unwrap();
        assert_eq!((p.order_b, p.order_p), (324, 1296));
        assert!(p.matches);
    }

    #[test]
    fn factorisation() {
        let s = space(2, 3);
        let w = s.w_gen(1).unwrap();
        let minus = s.enumerate_uw_minus(&w, DEFAULT_CAP).unwrap();
        let plus = s.enumerate_uw_plus(&w, DEFAULT_CAP).unwrap();
        assert_eq!(minus.len() * plus.len(), 81);
        for u in s.enumerate_u(DEFAULT_CAP).unwrap() {
            let (a, b) = s.factor_u(&u, &w, &minus).unwrap();
            assert_eq!(s.mul(&a, &b), u);
        }
        let (a, b) = s.factor_u(&s.identity(), &w, &minus).unwrap();
        assert_eq!((a, b), (s.identity(), s.identity()));
    }
}
