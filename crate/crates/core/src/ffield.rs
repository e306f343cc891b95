//! Exact arithmetic in small finite fields GF(p^m).
//!
//! Elements are stored as their canonical code: the coefficient vector of the
//! residue polynomial read as a base-p integer, constant term least significant.
//! All orderings and map keys in the crate derive from this code.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order for which lookup tables are built.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// Canonical code of a field element. Only meaningful together with the
/// [`FieldDescriptor`] it was produced by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A validated finite field GF(p^m) together with its arithmetic tables.
pub struct FieldDescriptor {
    characteristic: u32,
    degree: u32,
    /// Monic modulus, constant term first, length `degree + 1`.
    modulus: Vec<u32>,
    order: u32,
    /// exp[i] = g^i for the least multiplicative generator g, i in 0..order-1.
    exp: Vec<u32>,
    /// log[x] for x != 0; log[0] is unused.
    log: Vec<u32>,
    generator: Fe,
    add_table: Option<Vec<u32>>,
    neg_table: Vec<u32>,
}

pub type Field = Arc<FieldDescriptor>;

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {}", self.characteristic, self.degree, self.modulus_string())
    }
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.characteristic == other.characteristic
            && self.degree == other.degree
            && self.modulus == other.modulus
    }
}

impl Eq for FieldDescriptor {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Default moduli, constant term first.
fn default_modulus_table(p: u32, m: u32) -> Option<Vec<u32>> {
    let m = match (p, m) {
        (_, 1) => vec![0, 1],
        (2, 2) => vec![1, 1, 1],
        (2, 3) => vec![1, 1, 0, 1],
        (2, 4) => vec![1, 1, 0, 0, 1],
        (2, 5) => vec![1, 0, 1, 0, 0, 1],
        (2, 6) => vec![1, 1, 0, 0, 0, 0, 1],
        (3, 2) => vec![1, 0, 1],
        (3, 3) => vec![1, 2, 0, 1],
        (5, 2) => vec![2, 0, 1],
        (7, 2) => vec![1, 0, 1],
        _ => return None,
    };
    Some(m)
}

/// Dense polynomial arithmetic over the prime field, constant term first.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let (mut b, mut e) = (a as u64 % p as u64, p as u64 - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let mut m = m.to_vec();
        trim(&mut m);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = (r[top] as u64 * lead_inv as u64 % p as u64) as u32;
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c as u64 * mi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|x| x as u32).collect();
        trim(&mut out);
        out
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut result = vec![1];
        let mut base = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        result
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }
}

/// Rabin's irreducibility test for a monic polynomial over GF(p).
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() as u32 - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x = vec![0, 1];
    let q = p as u64;
    // x^(p^m) == x (mod f)
    let mut t = x.clone();
    for _ in 0..m {
        t = poly::powmod(&t, q, modulus, p);
    }
    if poly::sub(&t, &x, p) != Vec::<u32>::new() {
        return false;
    }
    for r in prime_divisors(m) {
        let mut t = x.clone();
        for _ in 0..(m / r) {
            t = poly::powmod(&t, q, modulus, p);
        }
        let diff = poly::sub(&t, &x, p);
        let g = poly::gcd(modulus, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn search_default_modulus(p: u32, m: u32) -> Vec<u32> {
    // Lexicographic on the coefficient vector read as a base-p integer.
    let total = (p as u64).pow(m);
    for code in 0..total {
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        let mut c = code;
        for _ in 0..m {
            coeffs.push((c % p as u64) as u32);
            c /= p as u64;
        }
        coeffs.push(1);
        if coeffs[0] != 0 && is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// The default modulus used when none is supplied.
pub fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    default_modulus_table(p, m).unwrap_or_else(|| search_default_modulus(p, m))
}

impl FieldDescriptor {
    /// Builds GF(characteristic^degree). With `modulus == None` the documented
    /// default modulus is used.
    pub fn create(characteristic: u32, degree: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        if !is_prime(characteristic as u64) {
            return Err(Error::Field(format!("characteristic {characteristic} is not prime")));
        }
        if degree < 1 {
            return Err(Error::Field("degree must be at least 1".into()));
        }
        let order = (characteristic as u64)
            .checked_pow(degree)
            .filter(|&o| o <= MAX_FIELD_ORDER as u64)
            .ok_or_else(|| {
                Error::Field(format!("GF({characteristic}^{degree}) exceeds the supported order"))
            })? as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != degree as usize + 1 || m[degree as usize] != 1 {
                    return Err(Error::Field(format!(
                        "modulus must be monic of degree {degree}, got {m:?}"
                    )));
                }
                if m.iter().any(|&c| c >= characteristic) {
                    return Err(Error::Field("modulus coefficients must be reduced".into()));
                }
                if !is_irreducible(&m, characteristic) {
                    return Err(Error::Field(format!(
                        "modulus {} is reducible over GF({characteristic})",
                        modulus_string(&m)
                    )));
                }
                m
            }
            None => default_modulus(characteristic, degree),
        };
        let p = characteristic;
        let to_poly = |code: u32| -> Vec<u32> {
            let mut c = code;
            let mut v = Vec::with_capacity(degree as usize);
            for _ in 0..degree {
                v.push(c % p);
                c /= p;
            }
            poly::trim(&mut v);
            v
        };
        let from_poly = |v: &[u32]| -> u32 {
            v.iter().rev().fold(0u32, |acc, &c| acc * p + c)
        };

        // Least multiplicative generator under code ordering.
        let group_order = order - 1;
        let mut exp = Vec::new();
        let mut generator = Fe(1);
        if group_order == 1 {
            exp.push(1);
        } else {
            for cand in 2..order {
                let g = to_poly(cand);
                let mut powers = vec![1u32];
                let mut cur = vec![1u32];
                loop {
                    cur = poly::mulmod(&cur, &g, &modulus, p);
                    let c = from_poly(&cur);
                    if c == 1 {
                        break;
                    }
                    powers.push(c);
                }
                if powers.len() as u32 == group_order {
                    exp = powers;
                    generator = Fe(cand);
                    break;
                }
            }
        }
        let mut log = vec![0u32; order as usize];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let digit_add = |a: u32, b: u32| -> u32 {
            if p == 2 {
                return a ^ b;
            }
            let (mut a, mut b, mut out, mut place) = (a, b, 0u32, 1u32);
            for _ in 0..degree {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        };
        let neg_table: Vec<u32> = (0..order)
            .map(|a| {
                let (mut a, mut out, mut place) = (a, 0u32, 1u32);
                for _ in 0..degree {
                    out += ((p - a % p) % p) * place;
                    a /= p;
                    place *= p;
                }
                out
            })
            .collect();
        let add_table = if order <= 256 {
            let mut t = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    t[(a * order + b) as usize] = digit_add(a, b);
                }
            }
            Some(t)
        } else {
            None
        };
        Ok(Arc::new(FieldDescriptor {
            characteristic,
            degree,
            modulus,
            order,
            exp,
            log,
            generator,
            add_table,
            neg_table,
        }))
    }

    /// A field suitable as coefficient field for base characteristic `p`:
    /// characteristic differs from `p` and `p` divides `|F| - 1`.
    pub fn create_coefficient(
        characteristic: u32,
        degree: u32,
        modulus: Option<Vec<u32>>,
        base_characteristic: u32,
    ) -> Result<Field> {
        if characteristic == base_characteristic {
            return Err(Error::Field(format!(
                "coefficient characteristic {characteristic} equals the base characteristic"
            )));
        }
        let f = Self::create(characteristic, degree, modulus)?;
        if (f.order - 1) % base_characteristic != 0 {
            return Err(Error::Field(format!(
                "GF({characteristic}^{degree}) has no primitive {base_characteristic}-th root of unity"
            )));
        }
        Ok(f)
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn order(&self) -> u32 {
        self.order
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn modulus_string(&self) -> String {
        modulus_string(&self.modulus)
    }
    /// The least multiplicative generator under code ordering.
    pub fn generator(&self) -> Fe {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.order).map(Fe)
    }
    pub fn nonzero(&self) -> impl Iterator<Item = Fe> {
        (1..self.order).map(Fe)
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, k: i64) -> Fe {
        Fe(k.rem_euclid(self.characteristic as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe> {
        if coeffs.len() > self.degree as usize {
            return Err(Error::Field("too many coefficients".into()));
        }
        let p = self.characteristic;
        Ok(Fe(coeffs.iter().rev().fold(0, |acc, &c| acc * p + c % p)))
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let p = self.characteristic;
        let mut c = a.0;
        (0..self.degree)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        match &self.add_table {
            Some(t) => Fe(t[(a.0 * self.order + b.0) as usize]),
            None => {
                if self.characteristic == 2 {
                    return Fe(a.0 ^ b.0);
                }
                let p = self.characteristic;
                let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
                for _ in 0..self.degree {
                    out += ((x % p + y % p) % p) * place;
                    x /= p;
                    y /= p;
                    place *= p;
                }
                Fe(out)
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg_table[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let n = self.order - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Fe(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::Field("inversion of zero".into()));
        }
        let n = self.order - 1;
        let l = self.log[a.0 as usize];
        Ok(Fe(self.exp[((n - l) % n) as usize]))
    }

    /// Inverse of a value known to be nonzero.
    #[inline]
    pub fn inv_nz(&self, a: Fe) -> Fe {
        debug_assert!(!a.is_zero());
        let n = self.order - 1;
        let l = self.log[a.0 as usize];
        Fe(self.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: i64) -> Fe {
        if a.0 == 0 {
            return if e == 0 { Fe::ONE } else { Fe::ZERO };
        }
        let n = (self.order - 1) as i64;
        let l = self.log[a.0 as usize] as i64;
        Fe(self.exp[((l * e.rem_euclid(n)) % n) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Fe) -> u32 {
        assert!(!a.is_zero());
        let n = self.order - 1;
        let l = self.log[a.0 as usize];
        n / gcd_u32(n, l)
    }

    /// Σ_{i<m} x^(p^i), returned as a residue modulo p.
    pub fn trace_to_prime(&self, x: Fe) -> u32 {
        let mut acc = Fe::ZERO;
        let mut cur = x;
        for _ in 0..self.degree {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.characteristic as i64);
        }
        debug_assert!(acc.0 < self.characteristic);
        acc.0
    }

    /// Frobenius x ↦ x^p.
    pub fn frobenius(&self, x: Fe) -> Fe {
        self.pow(x, self.characteristic as i64)
    }

    /// Legendre-style square test for nonzero elements in odd characteristic.
    pub fn is_square(&self, a: Fe) -> Result<bool> {
        if self.characteristic == 2 {
            return Err(Error::Field("square classes are trivial in characteristic 2".into()));
        }
        if a.is_zero() {
            return Err(Error::Field("is_square of zero".into()));
        }
        Ok(self.pow(a, ((self.order - 1) / 2) as i64) == Fe::ONE)
    }

    /// The transversal T_q for the action of {±1} on F_q^*: the smaller code
    /// of each pair {α, −α}, ascending. For p = 2 all of F_q^*.
    pub fn transversal(&self) -> Vec<Fe> {
        self.nonzero().filter(|&a| a <= self.neg(a)).collect()
    }

    /// The least non-square under code ordering (p odd).
    pub fn least_non_square(&self) -> Option<Fe> {
        if self.characteristic == 2 {
            return None;
        }
        self.nonzero().find(|&a| !self.is_square(a).unwrap_or(true))
    }

    /// Base-p digits of an element, constant term first, as used in cache files.
    pub fn digits_string(&self, a: Fe) -> String {
        let c = self.coeffs(a);
        if self.characteristic <= 10 {
            c.iter().map(|d| char::from_digit(*d, 10).unwrap()).collect()
        } else {
            c.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
        }
    }

    pub fn parse_digits(&self, s: &str) -> Result<Fe> {
        let digits: Vec<u32> = if self.characteristic <= 10 {
            s.chars()
                .map(|ch| ch.to_digit(10).ok_or_else(|| Error::Parse(format!("bad digit {ch:?}"))))
                .collect::<Result<_>>()?
        } else {
            s.split(',')
                .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(e.to_string())))
                .collect::<Result<_>>()?
        };
        if digits.len() != self.degree as usize || digits.iter().any(|&d| d >= self.characteristic) {
            return Err(Error::Parse(format!("malformed field element {s:?}")));
        }
        self.from_coeffs(&digits)
    }

    pub fn same_field(&self, other: &FieldDescriptor) -> bool {
        self == other
    }
}

fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn modulus_string(m: &[u32]) -> String {
    m.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_modulus(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("modulus {s:?}: {e}"))))
        .collect()
}

/// An element bundled with its field; arithmetic on it checks that both
/// operands live in the same field.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    code: Fe,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@GF({}^{})", self.field.coeffs(self.code), self.field.characteristic, self.field.degree)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.code == other.code
    }
}

impl FieldElement {
    pub fn new(field: &Field, code: Fe) -> Result<FieldElement> {
        if code.0 >= field.order {
            return Err(Error::Field(format!("code {} out of range", code.0)));
        }
        Ok(FieldElement { field: field.clone(), code })
    }
    pub fn from_coeffs(field: &Field, coeffs: &[u32]) -> Result<FieldElement> {
        FieldElement::new(field, field.from_coeffs(coeffs)?)
    }
    pub fn code(&self) -> Fe {
        self.code
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn coefficients(&self) -> Vec<u32> {
        self.field.coeffs(self.code)
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(Error::Field("operands belong to different fields".into()))
        }
    }
    fn wrap(&self, code: Fe) -> FieldElement {
        FieldElement { field: self.field.clone(), code }
    }
    pub fn add(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check(o)?;
        Ok(self.wrap(self.field.add(self.code, o.code)))
    }
    pub fn sub(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check(o)?;
        Ok(self.wrap(self.field.sub(self.code, o.code)))
    }
    pub fn mul(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check(o)?;
        Ok(self.wrap(self.field.mul(self.code, o.code)))
    }
    pub fn neg(&self) -> FieldElement {
        self.wrap(self.field.neg(self.code))
    }
    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.wrap(self.field.inv(self.code)?))
    }
    pub fn pow(&self, e: i64) -> FieldElement {
        self.wrap(self.field.pow(self.code, e))
    }
}

/// A nontrivial additive character λ[κ] : F_q^+ → F^*, realized as
/// α ↦ ζ^{Tr(κα)} with ζ the canonical primitive p-th root of unity in F.
#[derive(Clone)]
pub struct AdditiveCharacter {
    source: Field,
    target: Field,
    zeta: Fe,
    twist: Fe,
    table: Vec<Fe>,
}

impl fmt::Debug for AdditiveCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ[κ={}] on {:?} -> {:?}", self.twist.0, self.source, self.target)
    }
}

impl AdditiveCharacter {
    /// The canonical ζ: (|F| − 1)/p-th power of the least generator of F^*.
    pub fn canonical_zeta(source: &FieldDescriptor, target: &FieldDescriptor) -> Result<Fe> {
        let p = source.characteristic();
        if target.characteristic() == p || (target.order() - 1) % p != 0 {
            return Err(Error::Field(format!(
                "{target:?} contains no primitive {p}-th root of unity"
            )));
        }
        Ok(target.pow(target.generator(), ((target.order() - 1) / p) as i64))
    }

    pub fn new(source: &Field, target: &Field, twist: Fe) -> Result<AdditiveCharacter> {
        if twist.is_zero() {
            return Err(Error::Field("twist must be nonzero".into()));
        }
        let zeta = Self::canonical_zeta(source, target)?;
        let table = source
            .elements()
            .map(|a| {
                let t = source.trace_to_prime(source.mul(twist, a));
                target.pow(zeta, t as i64)
            })
            .collect();
        Ok(AdditiveCharacter { source: source.clone(), target: target.clone(), zeta, twist, table })
    }

    pub fn standard(source: &Field, target: &Field) -> Result<AdditiveCharacter> {
        Self::new(source, target, Fe::ONE)
    }

    /// λ[κ] built from this character: α ↦ λ(κα).
    pub fn twisted(&self, kappa: Fe) -> Result<AdditiveCharacter> {
        Self::new(&self.source, &self.target, self.source.mul(self.twist, kappa))
    }

    #[inline]
    pub fn eval(&self, alpha: Fe) -> Fe {
        self.table[alpha.0 as usize]
    }

    pub fn source(&self) -> &Field {
        &self.source
    }
    pub fn target(&self) -> &Field {
        &self.target
    }
    pub fn zeta(&self) -> Fe {
        self.zeta
    }
    pub fn twist(&self) -> Fe {
        self.twist
    }

    /// G(λ) = Σ_α λ(α²); defined for odd p only.
    pub fn gauss_sum(&self) -> Result<Fe> {
        if self.source.characteristic() == 2 {
            return Err(Error::Field("Gauss sum requires odd characteristic".into()));
        }
        Ok(self
            .source
            .elements()
            .fold(Fe::ZERO, |acc, a| self.target.add(acc, self.eval(self.source.mul(a, a)))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_reducible_modulus() {
        let f4 = FieldDescriptor::create(2, 2, None).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let f2 = FieldDescriptor::create(2, 1, None).unwrap();
        assert_eq!(f2.order(), 2);
        assert!(FieldDescriptor::create(2, 2, Some(vec![1, 0, 1])).is_err());
        assert!(FieldDescriptor::create(4, 1, None).is_err());
        assert!(FieldDescriptor::create(3, 0, None).is_err());
        assert_eq!(FieldDescriptor::create(2, 3, None).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldDescriptor::create(2, 4, None).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(FieldDescriptor::create(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn default_table_entries_are_irreducible() {
        for (p, m) in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let md = default_modulus_table(p, m).unwrap();
            assert!(is_irreducible(&md, p), "p={p} m={m}");
        }
        // fallback search: GF(2^7)
        let m7 = default_modulus(2, 7);
        assert!(is_irreducible(&m7, 2));
    }

    #[test]
    fn small_arithmetic() {
        let f4 = FieldDescriptor::create(2, 2, None).unwrap();
        let z = f4.generator();
        assert_eq!(z, Fe(2));
        let z2 = f4.mul(z, z);
        assert_eq!(f4.mul(z, z2), Fe::ONE);
        assert_eq!(f4.add(z, z2), Fe::ONE);
        let f3 = FieldDescriptor::create(3, 1, None).unwrap();
        assert_eq!(f3.inv(Fe(2)).unwrap(), Fe(2));
        assert!(f3.inv(Fe::ZERO).is_err());
    }

    #[test]
    fn mixed_fields_rejected() {
        let f4 = FieldDescriptor::create(2, 2, None).unwrap();
        let f3 = FieldDescriptor::create(3, 1, None).unwrap();
        let a = FieldElement::new(&f4, Fe(1)).unwrap();
        let b = FieldElement::new(&f3, Fe(1)).unwrap();
        assert!(a.add(&b).is_err());
        assert!(a.mul(&a).is_ok());
    }

    #[test]
    fn traces() {
        let f3 = FieldDescriptor::create(3, 1, None).unwrap();
        assert_eq!(f3.trace_to_prime(Fe(2)), 2);
        // GF(9) = F_3[g]/(g^2+1): Tr(g) = g + g^3 = 0
        let f9 = FieldDescriptor::create(3, 2, None).unwrap();
        let g = f9.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f9.trace_to_prime(g), 0);
        let f4 = FieldDescriptor::create(2, 2, None).unwrap();
        assert_eq!(f4.trace_to_prime(Fe(2)), 1);
    }

    #[test]
    fn characters_and_gauss_sums() {
        let f3 = FieldDescriptor::create(3, 1, None).unwrap();
        let f4 = FieldDescriptor::create(2, 2, None).unwrap();
        let lam = AdditiveCharacter::standard(&f3, &f4).unwrap();
        let z = lam.zeta();
        assert_eq!(lam.eval(Fe(0)), Fe::ONE);
        assert_eq!(lam.eval(Fe(1)), z);
        assert_eq!(lam.eval(Fe(2)), f4.mul(z, z));
        assert_eq!(f4.mul(lam.eval(Fe(1)), lam.eval(Fe(2))), Fe::ONE);
        assert_eq!(lam.gauss_sum().unwrap(), Fe::ONE);
        // term by term: λ(0) + λ(1) + λ(1) = 1 + 2ζ = 1 in characteristic 2
        let expanded = f4.add(Fe::ONE, f4.add(lam.eval(Fe(1)), lam.eval(Fe(1))));
        assert_eq!(expanded, Fe::ONE);

        let f5 = FieldDescriptor::create(5, 1, None).unwrap();
        let f16 = FieldDescriptor::create(2, 4, None).unwrap();
        let lam5 = AdditiveCharacter::standard(&f5, &f16).unwrap();
        assert_eq!(lam5.gauss_sum().unwrap(), Fe::ONE);
        let f2 = FieldDescriptor::create(2, 1, None).unwrap();
        let lam2 = AdditiveCharacter::standard(&f2, &f4);
        assert!(lam2.is_err());
    }

    #[test]
    fn squares_and_transversals() {
        let f3 = FieldDescriptor::create(3, 1, None).unwrap();
        let f7 = FieldDescriptor::create(7, 1, None).unwrap();
        let f5 = FieldDescriptor::create(5, 1, None).unwrap();
        assert!(f3.is_square(Fe(1)).unwrap());
        assert!(!f3.is_square(Fe(2)).unwrap());
        assert!(f7.is_square(Fe(2)).unwrap());
        assert!(f7.is_square(Fe(0)).is_err());
        assert_eq!(f3.transversal(), vec![Fe(1)]);
        assert_eq!(f7.transversal(), vec![Fe(1), Fe(2), Fe(3)]);
        assert_eq!(f5.transversal(), vec![Fe(1), Fe(2)]);
        let f4 = FieldDescriptor::create(2, 2, None).unwrap();
        assert_eq!(f4.transversal().len(), 3);
        assert!(f4.is_square(Fe(1)).is_err());
    }

    #[test]
    fn coefficient_field_validation() {
        assert!(FieldDescriptor::create_coefficient(3, 1, None, 3).is_err());
        assert!(FieldDescriptor::create_coefficient(2, 3, None, 3).is_err());
        assert!(FieldDescriptor::create_coefficient(2, 2, None, 3).is_ok());
        assert!(FieldDescriptor::create_coefficient(2, 3, None, 7).is_ok());
    }

    #[test]
    fn digits_roundtrip() {
        let f16 = FieldDescriptor::create(2, 4, None).unwrap();
        for a in f16.elements() {
            assert_eq!(f16.parse_digits(&f16.digits_string(a)).unwrap(), a);
        }
        assert!(f16.parse_digits("012").is_err());
    }
}
