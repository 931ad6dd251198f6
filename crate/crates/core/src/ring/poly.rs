//! Dense univariate polynomials over F_p.

use std::fmt;

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::ring::field::{Fp, PrimeField};

/// Polynomial degree; `None` stands for the degree of the zero polynomial (−∞).
///
/// `Option`'s ordering puts `None` below every `Some`, which is the ordering
/// the −∞ convention needs.
pub type Degree = Option<usize>;

/// Polynomial in F_p[x], coefficients in ascending degree order.
/// The coefficient vector never has a trailing zero; zero is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DensePoly {
    field: PrimeField,
    coeffs: Coeffs,
}

type Coeffs = SmallVec<[u32; 8]>;

impl DensePoly {
    pub fn zero(field: PrimeField) -> Self {
        Self {
            field,
            coeffs: Coeffs::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn x(field: PrimeField) -> Self {
        Self::monomial(field, 1, 1)
    }

    /// x − 1.
    pub fn x_minus_one(field: PrimeField) -> Self {
        Self::from_i64(field, &[-1, 1])
    }

    pub fn constant(field: PrimeField, c: i64) -> Self {
        Self::from_i64(field, &[c])
    }

    pub fn monomial(field: PrimeField, c: i64, k: usize) -> Self {
        let mut coeffs = smallvec![0u32; k + 1];
        coeffs[k] = field.reduce(c);
        Self::from_coeffs(field, coeffs)
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    /// Takes reduced residues; trims trailing zeros.
    pub fn from_raw(field: PrimeField, coeffs: Vec<u32>) -> Self {
        Self::from_coeffs(field, Coeffs::from_vec(coeffs))
    }

    fn from_coeffs(field: PrimeField, mut coeffs: Coeffs) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < field.modulus()));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.as_slice() == [1]
    }

    pub fn degree(&self) -> Degree {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, at: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, at), c))
    }

    pub fn eval_fp(&self, at: Fp) -> Fp {
        self.field.elem(self.eval(at.value()) as i64)
    }

    pub fn eval_at_one(&self) -> u32 {
        self.coeffs.iter().fold(0, |acc, &c| self.field.add(acc, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field;
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < other.coeffs.len() {
            coeffs.resize(other.coeffs.len(), 0);
        }
        for (c, &b) in coeffs.iter_mut().zip(&other.coeffs) {
            *c = f.add(*c, b);
        }
        Self::from_coeffs(f, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = self.field;
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < other.coeffs.len() {
            coeffs.resize(other.coeffs.len(), 0);
        }
        for (c, &b) in coeffs.iter_mut().zip(&other.coeffs) {
            *c = f.sub(*c, b);
        }
        Self::from_coeffs(f, coeffs)
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self::from_coeffs(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let f = self.field;
        let mut out = smallvec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::from_coeffs(f, out)
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = smallvec![0u32; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self {
            field: self.field,
            coeffs,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let f = self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = smallvec![0u32; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], lead_inv);
            quot[k] = c;
            if c != 0 {
                for (j, &b) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = f.sub(rem[k + j], f.mul(c, b));
                }
            }
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(f, quot), Self::from_coeffs(f, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        match self.divrem(divisor) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// Largest `k` with `self^k | other`; `None` when `other` is zero or `self` is a unit.
    pub fn valuation_in(&self, other: &Self) -> Option<usize> {
        if other.is_zero() || self.is_constant() {
            return None;
        }
        let mut k = 0;
        let mut cur = other.clone();
        while let Some(q) = cur.div_exact(self) {
            cur = q;
            k += 1;
        }
        Some(k)
    }

    pub fn monic(&self) -> Self {
        match self.field.inv(self.leading()) {
            Some(c) => self.scale(c),
            None => self.clone(),
        }
    }

    /// Extended Euclid: returns `(g, s, t)` with `g = s·a + t·b`, `g` monic (or zero).
    pub fn xgcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let f = a.field;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if let Some(c) = f.inv(r0.leading()) {
            (r0.scale(c), s0.scale(c), t0.scale(c))
        } else {
            (r0, s0, t0)
        }
    }

    /// Inverse of `self` modulo `modulus`, when the two are coprime.
    pub fn inv_mod(&self, modulus: &Self) -> Option<Self> {
        let (g, s, _) = Self::xgcd(&self.rem(modulus).ok()?, modulus);
        if g.is_one() {
            Some(s.rem(modulus).ok()?)
        } else {
            None
        }
    }

    /// Irreducibility over F_p by trial division with every monic polynomial
    /// of degree 1..=deg/2. Constants and zero are not irreducible.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else {
            return false;
        };
        if d == 0 {
            return false;
        }
        for k in 1..=d / 2 {
            for candidate in monic_polys_of_degree(self.field, k) {
                if candidate.divides(self) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&c| c as i64).collect()
    }

    /// Human-readable rendering in the variable `var`, e.g. `x^2+2*x+1`.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => var.to_string(),
                (1, c) => format!("{c}*{var}"),
                (k, 1) => format!("{var}^{k}"),
                (k, c) => format!("{c}*{var}^{k}"),
            };
            parts.push(term);
        }
        parts.join("+")
    }
}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.display_in("x"), self.field.modulus())
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

/// Every polynomial of degree `< bound` (including zero), in mixed-radix order
/// with the zero polynomial first. `p^bound` items.
pub fn polys_below_degree(field: PrimeField, bound: usize) -> impl Iterator<Item = DensePoly> {
    let p = field.modulus() as u64;
    let total = p.checked_pow(bound as u32).expect("enumeration size fits u64");
    (0..total).map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(bound);
        for _ in 0..bound {
            coeffs.push((idx % p) as u32);
            idx /= p;
        }
        DensePoly::from_raw(field, coeffs)
    })
}

/// Every monic polynomial of exact degree `k`.
pub fn monic_polys_of_degree(field: PrimeField, k: usize) -> impl Iterator<Item = DensePoly> {
    polys_below_degree(field, k).map(move |low| low.add(&DensePoly::monomial(field, 1, k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn divrem_over_f2() {
        let f = f2();
        let a = DensePoly::from_i64(f, &[1, 0, 1]);
        let b = DensePoly::x_minus_one(f);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, DensePoly::from_i64(f, &[1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn divrem_by_x_minus_one_leaves_value_at_one() {
        let f = PrimeField::new(5).unwrap();
        let lambda = DensePoly::from_i64(f, &[3, 1, 4, 2]);
        let (q, r) = lambda.divrem(&DensePoly::x_minus_one(f)).unwrap();
        assert_eq!(r, DensePoly::constant(f, lambda.eval_at_one() as i64));
        assert!(q.degree() < lambda.degree());
        assert_eq!(q.mul(&DensePoly::x_minus_one(f)).add(&r), lambda);
    }

    #[test]
    fn zero_dividend_and_zero_divisor() {
        let f = f2();
        let (q, r) = DensePoly::zero(f).divrem(&DensePoly::x(f)).unwrap();
        assert!(q.is_zero() && r.is_zero());
        assert!(matches!(
            DensePoly::x(f).divrem(&DensePoly::zero(f)),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn degree_sentinel() {
        let f = f2();
        assert_eq!(DensePoly::zero(f).degree(), None);
        assert!(DensePoly::zero(f).degree() < DensePoly::one(f).degree());
    }

    #[test]
    fn irreducibility() {
        let f = f2();
        assert!(DensePoly::from_i64(f, &[1, 1, 1]).is_irreducible());
        assert!(!DensePoly::from_i64(f, &[1, 0, 1]).is_irreducible());
        assert!(DensePoly::from_i64(f, &[1, 1, 0, 1]).is_irreducible());
        assert!(DensePoly::x(f).is_irreducible());
        assert!(!DensePoly::one(f).is_irreducible());
        let f3 = PrimeField::new(3).unwrap();
        assert!(DensePoly::from_i64(f3, &[1, 0, 1]).is_irreducible());
        assert!(DensePoly::from_i64(f3, &[2, 1, 1]).is_irreducible());
    }

    #[test]
    fn inverse_mod() {
        let f = PrimeField::new(3).unwrap();
        let m = DensePoly::x_minus_one(f).pow(3);
        let a = DensePoly::from_i64(f, &[1, 1, 1, 2]);
        let inv = a.inv_mod(&m).unwrap();
        assert!(a.mul(&inv).rem(&m).unwrap().is_one());
        assert!(DensePoly::x_minus_one(f).inv_mod(&m).is_none());
    }

    #[test]
    fn rendering() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(DensePoly::from_i64(f, &[1, 2, 1]).to_string(), "x^2+2*x+1");
        assert_eq!(DensePoly::zero(f).to_string(), "0");
    }

    #[test]
    fn enumerations() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(polys_below_degree(f, 2).count(), 9);
        assert!(polys_below_degree(f, 2).next().unwrap().is_zero());
        assert!(monic_polys_of_degree(f, 2).all(|p| p.degree() == Some(2) && p.is_monic()));
    }
}
