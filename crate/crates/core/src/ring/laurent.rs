//! Sparse multivariate Laurent polynomials over F_p, i.e. the group algebra F_p[Z^d].

use std::collections::BTreeMap;
use std::fmt;

use crate::ring::field::PrimeField;
use crate::ring::poly::DensePoly;

/// Exponent vector of a monomial x_1^{e_1} ⋯ x_d^{e_d}.
pub type Exponent = Vec<i64>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiLaurent {
    field: PrimeField,
    nvars: usize,
    terms: BTreeMap<Exponent, u32>,
}

impl MultiLaurent {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        Self {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: PrimeField, exp: Exponent, c: i64) -> Self {
        let mut out = Self::zero(field, exp.len());
        let c = field.reduce(c);
        if c != 0 {
            out.terms.insert(exp, c);
        }
        out
    }

    pub fn constant(field: PrimeField, nvars: usize, c: i64) -> Self {
        Self::monomial(field, vec![0; nvars], c)
    }

    pub fn one(field: PrimeField, nvars: usize) -> Self {
        Self::constant(field, nvars, 1)
    }

    /// The variable x_{var+1} (zero-based index).
    pub fn var(field: PrimeField, nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Self::monomial(field, e, 1)
    }

    /// Embed a univariate polynomial h as h(x_{var+1}).
    pub fn from_univariate(h: &DensePoly, nvars: usize, var: usize) -> Self {
        let mut out = Self::zero(h.field(), nvars);
        for (k, &c) in h.coeffs().iter().enumerate() {
            if c != 0 {
                let mut e = vec![0; nvars];
                e[var] = k as i64;
                out.terms.insert(e, c);
            }
        }
        out
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, u32> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, e: Exponent, c: u32) {
        let f = self.field;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                if c != 0 {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.insert_add(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self {
            field: f,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        let c = c % f.modulus();
        if c == 0 {
            return Self::zero(f, self.nvars);
        }
        Self {
            field: f,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &a)| (e.clone(), f.mul(a, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = self.field;
        let mut out = Self::zero(f, self.nvars);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_add(e, f.mul(c1, c2));
            }
        }
        out
    }

    /// Multiply by the monomial x^shift.
    pub fn shift(&self, shift: &[i64]) -> Self {
        Self {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c))
                .collect(),
        }
    }

    /// Sum of coefficients: the augmentation map, equal to evaluation at (1, …, 1).
    pub fn augmentation(&self) -> u32 {
        self.terms.values().fold(0, |acc, &c| self.field.add(acc, c))
    }

    /// Exact division by h(x_{var+1}) for a univariate `h` with h(0) ≠ 0, or
    /// `None` when it does not divide. Each slice in x_{var+1} (fixed exponents
    /// of the other variables) is divided separately.
    pub fn div_univariate(&self, var: usize, h: &DensePoly) -> Option<Self> {
        debug_assert!(h.coeff(0) != 0, "divisor must not vanish at 0");
        let mut slices: BTreeMap<Exponent, Vec<(i64, u32)>> = BTreeMap::new();
        for (e, &c) in &self.terms {
            let mut key = e.clone();
            key[var] = 0;
            slices.entry(key).or_default().push((e[var], c));
        }
        let mut out = Self::zero(self.field, self.nvars);
        for (key, terms) in slices {
            let lo = terms.iter().map(|t| t.0).min().expect("nonempty slice");
            let hi = terms.iter().map(|t| t.0).max().expect("nonempty slice");
            let mut coeffs = vec![0u32; (hi - lo + 1) as usize];
            for (k, c) in terms {
                coeffs[(k - lo) as usize] = c;
            }
            let q = DensePoly::from_raw(self.field, coeffs).div_exact(h)?;
            for (k, &c) in q.coeffs().iter().enumerate() {
                if c != 0 {
                    let mut e = key.clone();
                    e[var] = lo + k as i64;
                    out.terms.insert(e, c);
                }
            }
        }
        Some(out)
    }

    /// Render in variables `x1, x2, …`, e.g. `x1^2*x2^-1+2`.
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, &c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            if c != 1 || e.iter().all(|&k| k == 0) {
                factors.push(c.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    k => factors.push(format!("x{}^{k}", i + 1)),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join("+")
    }
}

impl fmt::Debug for MultiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn augmentation_and_products() {
        let f = PrimeField::new(3).unwrap();
        let a = MultiLaurent::monomial(f, vec![1, -2], 2).add(&MultiLaurent::one(f, 2));
        assert_eq!(a.augmentation(), 0);
        let b = MultiLaurent::var(f, 2, 1);
        let ab = a.mul(&b);
        assert_eq!(ab, a.shift(&[0, 1]));
        assert_eq!(ab.augmentation(), 0);
    }

    #[test]
    fn univariate_division() {
        let f = PrimeField::new(2).unwrap();
        let g = DensePoly::from_i64(f, &[1, 1, 1]);
        let gx2 = MultiLaurent::from_univariate(&g, 2, 1);
        let a = MultiLaurent::monomial(f, vec![3, -1], 1).add(&MultiLaurent::var(f, 2, 0));
        let prod = a.mul(&gx2);
        assert_eq!(prod.div_univariate(1, &g), Some(a.clone()));
        assert_eq!(a.div_univariate(1, &g), None);
        assert_eq!(prod.div_univariate(0, &g), None);
    }

    #[test]
    fn rendering() {
        let f = PrimeField::new(3).unwrap();
        let a = MultiLaurent::monomial(f, vec![2, -1], 1).add(&MultiLaurent::constant(f, 2, 2));
        assert_eq!(a.display(), "x1^2*x2^-1+2");
    }
}
