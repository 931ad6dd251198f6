//! Localization Ã = F_p[Z^d]·S^{-1} with S generated by s_i = g(x_i).
//!
//! Without a localizing polynomial this is just the group algebra F_p[Z^d]
//! with every denominator exponent fixed at zero.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::field::PrimeField;
use crate::ring::laurent::MultiLaurent;
use crate::ring::poly::DensePoly;

/// `num / ∏ g(x_i)^{den_i}` in canonical form: for every `i` with `den_i > 0`,
/// g(x_i) does not divide `num`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiSFraction {
    num: MultiLaurent,
    den: Vec<u32>,
}

impl MultiSFraction {
    pub fn num(&self) -> &MultiLaurent {
        &self.num
    }

    pub fn den_exps(&self) -> &[u32] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl fmt::Debug for MultiSFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/{:?}", self.num, self.den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiLocalRing {
    field: PrimeField,
    nvars: usize,
    g: Option<DensePoly>,
    /// g with its power of x removed; x is a unit, so divisibility by g(x_i)
    /// is divisibility by this part.
    g_core: Option<DensePoly>,
    g_xval: usize,
}

impl MultiLocalRing {
    /// The plain group algebra F_p[Z^d].
    pub fn laurent(field: PrimeField, nvars: usize) -> Self {
        Self {
            field,
            nvars,
            g: None,
            g_core: None,
            g_xval: 0,
        }
    }

    /// Localization at s_i = g(x_i). `g` must not be a monomial and must not
    /// vanish at 1.
    pub fn localized(field: PrimeField, nvars: usize, g: DensePoly) -> Result<Self> {
        let report = check_localizing_poly(&g);
        if let Some(problem) = report {
            return Err(Error::InvalidConfig(problem));
        }
        let xval = DensePoly::x(field).valuation_in(&g).expect("g is nonzero");
        let core = g
            .div_exact(&DensePoly::x(field).pow(xval as u64))
            .expect("x^v divides g");
        Ok(Self {
            field,
            nvars,
            g: Some(g),
            g_core: Some(core),
            g_xval: xval,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn g(&self) -> Option<&DensePoly> {
        self.g.as_ref()
    }

    pub fn is_localized(&self) -> bool {
        self.g.is_some()
    }

    pub fn zero(&self) -> MultiSFraction {
        MultiSFraction {
            num: MultiLaurent::zero(self.field, self.nvars),
            den: vec![0; self.nvars],
        }
    }

    pub fn one(&self) -> MultiSFraction {
        self.from_laurent(MultiLaurent::one(self.field, self.nvars))
    }

    pub fn constant(&self, c: i64) -> MultiSFraction {
        self.from_laurent(MultiLaurent::constant(self.field, self.nvars, c))
    }

    pub fn from_laurent(&self, num: MultiLaurent) -> MultiSFraction {
        MultiSFraction {
            num,
            den: vec![0; self.nvars],
        }
    }

    /// s_i = g(x_i) as a Laurent polynomial.
    pub fn s(&self, i: usize) -> Result<MultiLaurent> {
        let g = self
            .g
            .as_ref()
            .ok_or_else(|| Error::Unsupported("ring is not localized".into()))?;
        Ok(MultiLaurent::from_univariate(g, self.nvars, i))
    }

    fn s_pow(&self, i: usize, k: u32) -> MultiLaurent {
        let g = self.g.as_ref().expect("localized ring");
        MultiLaurent::from_univariate(&g.pow(k as u64), self.nvars, i)
    }

    /// Exact division of a Laurent polynomial by g(x_i).
    fn div_by_s(&self, a: &MultiLaurent, i: usize) -> Option<MultiLaurent> {
        let core = self.g_core.as_ref()?;
        let q = a.div_univariate(i, core)?;
        let mut shift = vec![0; self.nvars];
        shift[i] = -(self.g_xval as i64);
        Some(q.shift(&shift))
    }

    pub fn canonicalize(&self, mut num: MultiLaurent, mut den: Vec<u32>) -> MultiSFraction {
        debug_assert_eq!(den.len(), self.nvars);
        if num.is_zero() {
            return self.zero();
        }
        if self.g.is_some() {
            for (i, e) in den.iter_mut().enumerate() {
                while *e > 0 {
                    match self.div_by_s(&num, i) {
                        Some(q) => {
                            num = q;
                            *e -= 1;
                        }
                        None => break,
                    }
                }
            }
        }
        MultiSFraction { num, den }
    }

    pub fn add(&self, a: &MultiSFraction, b: &MultiSFraction) -> MultiSFraction {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let den: Vec<u32> = a.den.iter().zip(&b.den).map(|(&x, &y)| x.max(y)).collect();
        let lift = |s: &MultiSFraction| {
            let mut num = s.num.clone();
            for (i, (&d, &e)) in den.iter().zip(&s.den).enumerate() {
                if d > e {
                    num = num.mul(&self.s_pow(i, d - e));
                }
            }
            num
        };
        let num = lift(a).add(&lift(b));
        self.canonicalize(num, den)
    }

    pub fn neg(&self, a: &MultiSFraction) -> MultiSFraction {
        MultiSFraction {
            num: a.num.neg(),
            den: a.den.clone(),
        }
    }

    pub fn sub(&self, a: &MultiSFraction, b: &MultiSFraction) -> MultiSFraction {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &MultiSFraction, c: u32) -> MultiSFraction {
        let num = a.num.scale(c);
        if num.is_zero() {
            return self.zero();
        }
        MultiSFraction {
            num,
            den: a.den.clone(),
        }
    }

    pub fn mul(&self, a: &MultiSFraction, b: &MultiSFraction) -> MultiSFraction {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let den = a.den.iter().zip(&b.den).map(|(&x, &y)| x + y).collect();
        self.canonicalize(a.num.mul(&b.num), den)
    }

    /// Multiply by the monomial x^q.
    pub fn shift(&self, a: &MultiSFraction, q: &[i64]) -> MultiSFraction {
        MultiSFraction {
            num: a.num.shift(q),
            den: a.den.clone(),
        }
    }

    /// Multiply by ∏ s_i^{k_i} for integer `k` (negative entries divide).
    pub fn mul_s_powers(&self, a: &MultiSFraction, k: &[i64]) -> MultiSFraction {
        if k.iter().all(|&e| e == 0) || a.is_zero() {
            return a.clone();
        }
        let mut num = a.num.clone();
        let mut den = a.den.clone();
        for (i, &e) in k.iter().enumerate() {
            if e > 0 {
                num = num.mul(&self.s_pow(i, e as u32));
            } else if e < 0 {
                den[i] += e.unsigned_abs() as u32;
            }
        }
        self.canonicalize(num, den)
    }

    /// Multiply by the unit x^q · ∏ s_i^{k_i}.
    pub fn mul_unit(&self, a: &MultiSFraction, q: &[i64], k: &[i64]) -> MultiSFraction {
        self.mul_s_powers(&self.shift(a, q), k)
    }

    /// a / g(x_i)^k exactly (the localized analogue of division by (x − 1)^k).
    pub fn divide_exact_s(&self, a: &MultiSFraction, i: usize, k: u32) -> Result<MultiSFraction> {
        let mut num = a.num.clone();
        for _ in 0..k {
            num = self
                .div_by_s(&num, i)
                .ok_or_else(|| Error::NotDivisible(format!("g(x{}) ∤ {:?}", i + 1, a.num)))?;
        }
        Ok(self.canonicalize(num, a.den.clone()))
    }

    /// Value at x_1 = … = x_d = 1: the augmentation extended to Ã.
    pub fn eval_at_ones(&self, a: &MultiSFraction) -> Result<u32> {
        let f = self.field;
        let total: u64 = a.den.iter().map(|&e| e as u64).sum();
        if total == 0 {
            return Ok(a.num.augmentation());
        }
        let g1 = self.g.as_ref().map(|g| g.eval_at_one()).unwrap_or(1);
        let inv = f
            .inv(f.pow(g1, total))
            .ok_or_else(|| Error::DenominatorVanishes(format!("{a:?}")))?;
        Ok(f.mul(a.num.augmentation(), inv))
    }

    /// Membership in the augmentation ideal A_0·S^{-1}.
    pub fn in_augmentation_ideal(&self, a: &MultiSFraction) -> bool {
        a.num.augmentation() == 0
    }

    /// Expression rendering parseable by [`crate::ring::expr`]; denominators use
    /// the names `g1, …, gd` for g(x_1), …, g(x_d).
    pub fn display(&self, a: &MultiSFraction) -> String {
        let num = a.num.display();
        let den: Vec<String> = a
            .den
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("g{}", i + 1)
                } else {
                    format!("g{}^{e}", i + 1)
                }
            })
            .collect();
        if den.is_empty() {
            num
        } else {
            format!("({num})/({})", den.join("*"))
        }
    }
}

/// `None` when `g` is admissible as a localizing polynomial: not of the form
/// c·x^j and not divisible by x − 1.
pub fn check_localizing_poly(g: &DensePoly) -> Option<String> {
    if g.is_zero() {
        return Some("g must be nonzero".into());
    }
    if g.coeffs().iter().filter(|&&c| c != 0).count() <= 1 {
        return Some(format!("g = {g} is a monomial c*x^j"));
    }
    if g.eval_at_one() == 0 {
        return Some(format!("g = {g} is divisible by x-1"));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> MultiLocalRing {
        let f = PrimeField::new(2).unwrap();
        MultiLocalRing::localized(f, 2, DensePoly::from_i64(f, &[1, 1, 1])).unwrap()
    }

    #[test]
    fn rejects_bad_g() {
        let f = PrimeField::new(2).unwrap();
        assert!(MultiLocalRing::localized(f, 2, DensePoly::from_i64(f, &[0, 0, 1])).is_err());
        assert!(MultiLocalRing::localized(f, 2, DensePoly::from_i64(f, &[1, 1])).is_err());
        assert!(MultiLocalRing::localized(f, 2, DensePoly::from_i64(f, &[0, 1, 1])).is_err());
    }

    #[test]
    fn s_cancels() {
        let r = ring();
        let s1 = r.from_laurent(r.s(0).unwrap());
        let a = r.mul_s_powers(&s1, &[-1, 0]);
        assert_eq!(a, r.one());
        let b = r.mul_s_powers(&r.one(), &[-2, 1]);
        assert_eq!(b.den_exps(), &[2, 0]);
        assert_eq!(r.mul_s_powers(&b, &[2, -1]), r.one());
    }

    #[test]
    fn x_factor_in_g_is_a_unit() {
        let f = PrimeField::new(3).unwrap();
        // g = x^2 + x = x(x+1); x+1 does not vanish at 1 over F_3.
        let r = MultiLocalRing::localized(f, 1, DensePoly::from_i64(f, &[0, 1, 1])).unwrap();
        let s = r.from_laurent(r.s(0).unwrap());
        let x_inv_s = r.shift(&s, &[-1]);
        let q = r.mul_s_powers(&x_inv_s, &[-1]);
        assert_eq!(q, r.from_laurent(MultiLaurent::monomial(f, vec![-1], 1)));
    }

    #[test]
    fn eval_at_ones_scales_by_g1() {
        let r = ring();
        let a = r.mul_s_powers(&r.one(), &[-1, -1]);
        assert_eq!(r.eval_at_ones(&a).unwrap(), 1);
        let f = PrimeField::new(5).unwrap();
        let r5 = MultiLocalRing::localized(f, 1, DensePoly::from_i64(f, &[1, 1])).unwrap();
        let b = r5.mul_s_powers(&r5.one(), &[-1]);
        assert_eq!(r5.eval_at_ones(&b).unwrap(), f.inv(2).unwrap());
    }

    #[test]
    fn divide_exact_s_roundtrip() {
        let r = ring();
        let a = r.from_laurent(MultiLaurent::var(r.field(), 2, 1));
        let b = r.mul_s_powers(&a, &[0, 2]);
        assert_eq!(r.divide_exact_s(&b, 1, 2).unwrap(), a);
        assert!(r.divide_exact_s(&a, 1, 1).is_err());
    }
}
