//! Sparse vectors of the group algebra F·Sp, keyed by canonical element encodings.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::ffield::{Fe, Field};
use crate::spgroup::{SympElement, SymplecticSpace};

/// Σ c_g g with the keys sorted ascending and no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaVector {
    rank: usize,
    q: u32,
    field_order: u32,
    terms: Vec<(u64, Fe)>,
}

impl GaVector {
    pub fn terms(&self) -> &[(u64, Fe)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: u64) -> Fe {
        match self.terms.binary_search_by_key(&key, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => Fe::ZERO,
        }
    }
}

/// Arithmetic context: the group Sp(V) and the coefficient field F.
pub struct GroupAlgebra<'a> {
    space: &'a SymplecticSpace,
    field: Field,
}

impl<'a> GroupAlgebra<'a> {
    pub fn new(space: &'a SymplecticSpace, field: &Field) -> GroupAlgebra<'a> {
        GroupAlgebra { space, field: field.clone() }
    }

    pub fn space(&self) -> &'a SymplecticSpace {
        self.space
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn wrap(&self, terms: Vec<(u64, Fe)>) -> GaVector {
        GaVector { rank: self.space.rank(), q: self.space.q(), field_order: self.field.order(), terms }
    }

    fn same(&self, x: &GaVector) -> Result<()> {
        if x.rank != self.space.rank() || x.q != self.space.q() || x.field_order != self.field.order() {
            return Err(Error::Dimension(format!(
                "group algebra vector for (n={}, q={}, |F|={}) used with (n={}, q={}, |F|={})",
                x.rank,
                x.q,
                x.field_order,
                self.space.rank(),
                self.space.q(),
                self.field.order()
            )));
        }
        Ok(())
    }

    pub fn zero(&self) -> GaVector {
        self.wrap(Vec::new())
    }

    pub fn basis_element(&self, g: &SympElement) -> GaVector {
        self.wrap(vec![(self.space.key(g), Fe::ONE)])
    }

    /// Sorts, merges repeated keys by addition and drops zeros.
    pub fn from_terms(&self, mut terms: Vec<(u64, Fe)>) -> GaVector {
        terms.sort_unstable_by_key(|t| t.0);
        let f = &self.field;
        let mut out: Vec<(u64, Fe)> = Vec::with_capacity(terms.len());
        for (k, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == k => last.1 = f.add(last.1, c),
                _ => out.push((k, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        self.wrap(out)
    }

    /// Accumulates Σ c_g g from an unordered stream; suited to heavy overlap.
    pub fn accumulate(&self, items: impl IntoIterator<Item = (u64, Fe)>) -> GaVector {
        let f = &self.field;
        let mut acc: FxHashMap<u64, Fe> = FxHashMap::default();
        for (k, c) in items {
            let e = acc.entry(k).or_insert(Fe::ZERO);
            *e = f.add(*e, c);
        }
        let mut terms: Vec<(u64, Fe)> = acc.into_iter().filter(|t| !t.1.is_zero()).collect();
        terms.sort_unstable_by_key(|t| t.0);
        self.wrap(terms)
    }

    pub fn scale(&self, x: &GaVector, s: Fe) -> Result<GaVector> {
        self.same(x)?;
        if s.is_zero() {
            return Ok(self.zero());
        }
        Ok(self.wrap(x.terms.iter().map(|&(k, c)| (k, self.field.mul(s, c))).collect()))
    }

    pub fn linear_combination(&self, parts: &[(Fe, &GaVector)]) -> Result<GaVector> {
        let mut terms = Vec::new();
        for (s, x) in parts {
            self.same(x)?;
            if s.is_zero() {
                continue;
            }
            terms.extend(x.terms.iter().map(|&(k, c)| (k, self.field.mul(*s, c))));
        }
        Ok(self.from_terms(terms))
    }

    pub fn add(&self, x: &GaVector, y: &GaVector) -> Result<GaVector> {
        self.linear_combination(&[(Fe::ONE, x), (Fe::ONE, y)])
    }

    pub fn sub(&self, x: &GaVector, y: &GaVector) -> Result<GaVector> {
        self.linear_combination(&[(Fe::ONE, x), (self.field.neg(Fe::ONE), y)])
    }

    /// g·x. Left translation permutes the support.
    pub fn left_mul(&self, g: &SympElement, x: &GaVector) -> Result<GaVector> {
        self.same(x)?;
        let s = self.space;
        let mut terms: Vec<(u64, Fe)> = x.terms.iter().map(|&(k, c)| (s.key(&s.mul(g, &s.from_key(k))), c)).collect();
        terms.sort_unstable_by_key(|t| t.0);
        Ok(self.wrap(terms))
    }

    pub fn right_mul(&self, x: &GaVector, g: &SympElement) -> Result<GaVector> {
        self.same(x)?;
        let s = self.space;
        let mut terms: Vec<(u64, Fe)> = x.terms.iter().map(|&(k, c)| (s.key(&s.mul(&s.from_key(k), g)), c)).collect();
        terms.sort_unstable_by_key(|t| t.0);
        Ok(self.wrap(terms))
    }

    /// Σ_{g∈S} g·x.
    pub fn left_mul_by_sum(&self, elems: &[SympElement], x: &GaVector) -> Result<GaVector> {
        self.same(x)?;
        let s = self.space;
        let mut terms = Vec::with_capacity(elems.len() * x.len());
        for g in elems {
            for &(k, c) in &x.terms {
                terms.push((s.key(&s.mul(g, &s.from_key(k))), c));
            }
        }
        Ok(self.from_terms(terms))
    }

    /// The involution fixing scalars and inverting group elements.
    pub fn involution(&self, x: &GaVector) -> Result<GaVector> {
        self.same(x)?;
        let s = self.space;
        let mut terms: Vec<(u64, Fe)> = x.terms.iter().map(|&(k, c)| (s.key(&s.inv(&s.from_key(k))), c)).collect();
        terms.sort_unstable_by_key(|t| t.0);
        Ok(self.wrap(terms))
    }

    /// x·y by convolution.
    pub fn product(&self, x: &GaVector, y: &GaVector) -> Result<GaVector> {
        self.same(x)?;
        self.same(y)?;
        let s = self.space;
        let f = &self.field;
        let mut terms = Vec::with_capacity(x.len() * y.len());
        for &(a, ca) in &x.terms {
            let ga = s.from_key(a);
            for &(b, cb) in &y.terms {
                terms.push((s.key(&s.mul(&ga, &s.from_key(b))), f.mul(ca, cb)));
            }
        }
        Ok(self.from_terms(terms))
    }

    /// Σ_{g∈S} g as a vector.
    pub fn sum_of(&self, elems: &[SympElement]) -> GaVector {
        self.from_terms(elems.iter().map(|g| (self.space.key(g), Fe::ONE)).collect())
    }

    // ---- text serialization ----

    /// One `key digits` line per term.
    pub fn write_terms(&self, x: &GaVector, out: &mut String) -> Result<()> {
        use std::fmt::Write;
        self.same(x)?;
        for &(k, c) in &x.terms {
            writeln!(out, "{k} {}", self.field.digits_string(c)).expect("string write");
        }
        Ok(())
    }

    pub fn parse_terms<'l>(&self, lines: impl Iterator<Item = &'l str>) -> Result<GaVector> {
        let mut terms = Vec::new();
        let mut last: Option<u64> = None;
        for line in lines {
            let mut it = line.split_whitespace();
            let (Some(k), Some(c), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::Parse(format!("malformed term line {line:?}")));
            };
            let k: u64 = k.parse().map_err(|_| Error::Parse(format!("bad key {k:?}")))?;
            let c = self.field.parse_digits(c)?;
            if c.is_zero() {
                return Err(Error::Parse(format!("zero coefficient stored for key {k}")));
            }
            if last.is_some_and(|l| l >= k) {
                return Err(Error::Parse(format!("keys not strictly increasing at {k}")));
            }
            last = Some(k);
            terms.push((k, c));
        }
        Ok(self.wrap(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldDescriptor;

    #[test]
    fn arithmetic() {
        let fq = FieldDescriptor::create(3, 1, None).unwrap();
        let f = FieldDescriptor::create(2, 2, None).unwrap();
        let s = SymplecticSpace::new(1, &fq).unwrap();
        let ga = GroupAlgebra::new(&s, &f);
        let u = s.enumerate_u(100).unwrap();
        let x = ga.sum_of(&u);
        assert!(ga.scale(&x, Fe::ZERO).unwrap().is_empty());
        let g = s.w0();
        let back = ga.left_mul(&s.inv(&g), &ga.left_mul(&g, &x).unwrap()).unwrap();
        assert_eq!(back, x);
        assert_eq!(ga.left_mul(&g, &x).unwrap().len(), x.len());
        // char 2: x + x = 0
        assert!(ga.add(&x, &x).unwrap().is_empty());
        // Σ_U · Σ_U = |U| Σ_U = Σ_U in characteristic 2 with |U| = 3
        assert_eq!(ga.product(&x, &x).unwrap(), x);
        let mut text = String::new();
        ga.write_terms(&x, &mut text).unwrap();
        assert_eq!(ga.parse_terms(text.lines()).unwrap(), x);
    }

    #[test]
    fn mismatched_parameters() {
        let f3 = FieldDescriptor::create(3, 1, None).unwrap();
        let f5 = FieldDescriptor::create(5, 1, None).unwrap();
        let f = FieldDescriptor::create(2, 2, None).unwrap();
        let s3 = SymplecticSpace::new(1, &f3).unwrap();
        let s5 = SymplecticSpace::new(1, &f5).unwrap();
        let a = GroupAlgebra::new(&s3, &f);
        let b = GroupAlgebra::new(&s5, &f);
        let x = a.basis_element(&s3.identity());
        assert!(b.scale(&x, Fe::ONE).is_err());
    }
}
