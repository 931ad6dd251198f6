//! The localized ring A = F_p[x^{±1}, 1/f_1, …, 1/f_{n-1}].
//!
//! Elements are stored as `num / (f_0^{e_0} ⋯ f_{n-1}^{e_{n-1}})` with `f_0 = x`.
//! Only the basis polynomials are ever inverted, so a denominator is just an
//! exponent vector. The canonical form cancels every basis factor that still
//! divides the numerator; two canonical fractions are equal as ring elements
//! exactly when they are structurally equal.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::ring::field::PrimeField;
use crate::ring::poly::DensePoly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SFraction {
    num: DensePoly,
    den: Den,
}

type Den = SmallVec<[u32; 4]>;

impl SFraction {
    pub fn num(&self) -> &DensePoly {
        &self.num
    }

    pub fn den_exps(&self) -> &[u32] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The numerator when the denominator is trivial.
    pub fn as_poly(&self) -> Option<&DensePoly> {
        self.den.iter().all(|&e| e == 0).then_some(&self.num)
    }
}

impl fmt::Debug for SFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/{:?}", self.num, self.den)
    }
}

/// JSON form of a fraction: `{"num": [c_0, c_1, …], "den": [e_0, …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionJson {
    pub num: Vec<i64>,
    #[serde(default)]
    pub den: Vec<u32>,
}

/// Context object for A: the field, the inverted basis `f_0 = x, f_1, …` and the
/// generator of the ideal I (x − 1 unless configured otherwise).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRing {
    field: PrimeField,
    basis: Vec<DensePoly>,
    ideal: DensePoly,
    basis_pows: Vec<Vec<DensePoly>>,
    ideal_pows: Vec<DensePoly>,
}

const POW_TABLE: u32 = 24;

fn pow_table(f: &DensePoly) -> Vec<DensePoly> {
    let mut out = vec![DensePoly::one(f.field())];
    for k in 1..=POW_TABLE as usize {
        out.push(out[k - 1].mul(f));
    }
    out
}

impl LocalRing {
    /// `extra` lists f_1, …, f_{n-1}; f_0 = x is always prepended.
    pub fn new(field: PrimeField, extra: Vec<DensePoly>) -> Self {
        let mut basis = vec![DensePoly::x(field)];
        basis.extend(extra);
        let ideal = DensePoly::x_minus_one(field);
        Self {
            field,
            basis_pows: basis.iter().map(pow_table).collect(),
            ideal_pows: pow_table(&ideal),
            basis,
            ideal,
        }
    }

    /// Replace the ideal generator x − 1 by another monic polynomial.
    pub fn with_ideal(mut self, ideal: DensePoly) -> Self {
        self.ideal_pows = pow_table(&ideal);
        self.ideal = ideal;
        self
    }

    fn basis_pow(&self, i: usize, e: u32) -> std::borrow::Cow<'_, DensePoly> {
        match self.basis_pows[i].get(e as usize) {
            Some(q) => std::borrow::Cow::Borrowed(q),
            None => std::borrow::Cow::Owned(self.basis[i].pow(e as u64)),
        }
    }

    fn ideal_pow(&self, k: u32) -> std::borrow::Cow<'_, DensePoly> {
        match self.ideal_pows.get(k as usize) {
            Some(q) => std::borrow::Cow::Borrowed(q),
            None => std::borrow::Cow::Owned(self.ideal.pow(k as u64)),
        }
    }

    pub fn is_one(&self, a: &SFraction) -> bool {
        a.den.iter().all(|&e| e == 0) && a.num.is_constant() && a.num.coeff(0) == 1
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn basis(&self) -> &[DensePoly] {
        &self.basis
    }

    pub fn ideal(&self) -> &DensePoly {
        &self.ideal
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn zero(&self) -> SFraction {
        SFraction {
            num: DensePoly::zero(self.field),
            den: smallvec![0; self.rank()],
        }
    }

    pub fn one(&self) -> SFraction {
        self.from_poly(DensePoly::one(self.field))
    }

    pub fn constant(&self, c: i64) -> SFraction {
        self.from_poly(DensePoly::constant(self.field, c))
    }

    pub fn from_poly(&self, num: DensePoly) -> SFraction {
        SFraction {
            num,
            den: smallvec![0; self.rank()],
        }
    }

    /// `c · ∏ f_i^{exps_i}` for integer exponents (negative ones go to the denominator).
    pub fn unit(&self, c: u32, exps: &[i64]) -> SFraction {
        debug_assert_eq!(exps.len(), self.rank());
        let mut num = DensePoly::constant(self.field, c as i64);
        let mut den: Den = smallvec![0u32; self.rank()];
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                num = num.mul(&self.basis_pow(i, e as u32));
            } else {
                den[i] = e.unsigned_abs() as u32;
            }
        }
        self.canonicalize_den(num, den)
    }

    pub fn basis_product(&self, exps: &[u32]) -> DensePoly {
        let mut nonzero = exps.iter().enumerate().filter(|(_, &e)| e > 0);
        let Some((i, &e)) = nonzero.next() else {
            return DensePoly::one(self.field);
        };
        nonzero.fold(self.basis_pow(i, e).into_owned(), |acc, (i, &e)| {
            acc.mul(&self.basis_pow(i, e))
        })
    }

    /// Cancel basis factors until no f_i with positive exponent divides the numerator.
    pub fn canonicalize(&self, num: DensePoly, den: Vec<u32>) -> SFraction {
        self.canonicalize_den(num, Den::from_vec(den))
    }

    fn canonicalize_den(&self, mut num: DensePoly, mut den: Den) -> SFraction {
        debug_assert_eq!(den.len(), self.rank());
        if num.is_zero() {
            return self.zero();
        }
        for (i, e) in den.iter_mut().enumerate() {
            while *e > 0 {
                match num.div_exact(&self.basis[i]) {
                    Some(q) => {
                        num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        SFraction { num, den }
    }

    fn common(&self, a: &SFraction, b: &SFraction) -> (DensePoly, DensePoly, Den) {
        let den: Den = a.den.iter().zip(&b.den).map(|(&x, &y)| x.max(y)).collect();
        let lift = |s: &SFraction| {
            if s.den == den {
                return s.num.clone();
            }
            let extra: Den = den.iter().zip(&s.den).map(|(&d, &e)| d - e).collect();
            s.num.mul(&self.basis_product(&extra))
        };
        (lift(a), lift(b), den)
    }

    pub fn add(&self, a: &SFraction, b: &SFraction) -> SFraction {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let (x, y, den) = self.common(a, b);
        self.canonicalize_den(x.add(&y), den)
    }

    pub fn sub(&self, a: &SFraction, b: &SFraction) -> SFraction {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &SFraction) -> SFraction {
        SFraction {
            num: a.num.neg(),
            den: a.den.clone(),
        }
    }

    pub fn scale(&self, a: &SFraction, c: u32) -> SFraction {
        if self.field.reduce(c as i64) == 0 {
            return self.zero();
        }
        SFraction {
            num: a.num.scale(c),
            den: a.den.clone(),
        }
    }

    pub fn mul(&self, a: &SFraction, b: &SFraction) -> SFraction {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if self.is_one(a) {
            return b.clone();
        }
        if self.is_one(b) {
            return a.clone();
        }
        let den: Den = a.den.iter().zip(&b.den).map(|(&x, &y)| x + y).collect();
        self.canonicalize_den(a.num.mul(&b.num), den)
    }

    /// `a · c · ∏ f_i^{exps_i}` without building the unit separately.
    pub fn mul_unit(&self, a: &SFraction, c: u32, exps: &[i64]) -> SFraction {
        if a.is_zero() {
            return self.zero();
        }
        let mut num = if c == 1 { a.num.clone() } else { a.num.scale(c) };
        let mut den = a.den.clone();
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                let e = e as u32;
                let cancel = e.min(den[i]);
                den[i] -= cancel;
                if e > cancel {
                    num = num.mul(&self.basis_pow(i, e - cancel));
                }
            } else if e < 0 {
                den[i] += e.unsigned_abs() as u32;
            }
        }
        self.canonicalize_den(num, den)
    }

    pub fn mul_poly(&self, a: &SFraction, b: &DensePoly) -> SFraction {
        self.canonicalize_den(a.num.mul(b), a.den.clone())
    }

    /// Inverse in A when `a` is a unit, i.e. a nonzero constant times a product of
    /// basis polynomials.
    pub fn try_inverse(&self, a: &SFraction) -> Option<SFraction> {
        if a.is_zero() {
            return None;
        }
        let mut rest = a.num.clone();
        let mut exps: Vec<i64> = a.den.iter().map(|&e| e as i64).collect();
        for (i, f) in self.basis.iter().enumerate() {
            while let Some(q) = rest.div_exact(f) {
                rest = q;
                exps[i] -= 1;
            }
        }
        if !rest.is_constant() {
            return None;
        }
        let c = self.field.inv(rest.coeff(0))?;
        Some(self.unit(c, &exps))
    }

    /// `a^e`, with negative exponents requiring `a` to be a unit.
    pub fn pow(&self, a: &SFraction, e: i64) -> Result<SFraction> {
        let base = if e < 0 {
            self.try_inverse(a)
                .ok_or_else(|| Error::NotInvertible(format!("{}", self.display(a))))?
        } else {
            a.clone()
        };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    /// a / g^k where g is the ideal generator (x − 1 by default). Fails when
    /// g^k does not divide the numerator; g is coprime to every basis polynomial.
    pub fn divide_exact(&self, a: &SFraction, k: u32) -> Result<SFraction> {
        if k == 0 || a.is_zero() {
            return Ok(a.clone());
        }
        let num = a
            .num
            .div_exact(&self.ideal_pow(k))
            .ok_or_else(|| Error::NotDivisible(format!("({})^{} ∤ {}", self.ideal, k, a.num)))?;
        Ok(self.canonicalize_den(num, a.den.clone()))
    }

    pub fn mul_ideal_power(&self, a: &SFraction, k: u32) -> SFraction {
        self.mul_poly(a, &self.ideal_pow(k))
    }

    /// Membership in I^k.
    pub fn in_ideal_power(&self, a: &SFraction, k: u32) -> bool {
        k == 0 || a.is_zero() || self.ideal_pow(k).divides(&a.num)
    }

    /// The representative of `a + I^k` of degree below `k·deg(g)`.
    pub fn residue(&self, a: &SFraction, k: u32) -> Result<DensePoly> {
        if k == 0 {
            return Ok(DensePoly::zero(self.field));
        }
        let modulus = self.ideal_pow(k);
        let modulus = modulus.as_ref();
        if a.den.iter().all(|&e| e == 0) {
            return a.num.rem(modulus);
        }
        let den = self.basis_product(&a.den);
        let inv = den
            .inv_mod(&modulus)
            .ok_or_else(|| Error::DenominatorVanishes(format!("{} is not invertible mod {}", den, modulus)))?;
        a.num.mul(&inv).rem(&modulus)
    }

    /// Value at x = 1; zero exactly when `a ∈ (x − 1)A`.
    pub fn eval_at_one(&self, a: &SFraction) -> Result<u32> {
        let f = self.field;
        let mut den = 1u32;
        for (i, &e) in a.den.iter().enumerate() {
            if e > 0 {
                den = f.mul(den, f.pow(self.basis[i].eval_at_one(), e as u64));
            }
        }
        let inv = f.inv(den).ok_or_else(|| Error::DenominatorVanishes(self.display(a)))?;
        Ok(f.mul(a.num.eval_at_one(), inv))
    }

    /// Name used for basis polynomial `i` in expressions.
    pub fn basis_name(i: usize) -> String {
        if i == 0 {
            "x".to_string()
        } else {
            format!("f{i}")
        }
    }

    /// Expression rendering, e.g. `x+1` or `(x^2+1)/(x*f1^2)`; parseable by
    /// [`crate::ring::expr`].
    pub fn display(&self, a: &SFraction) -> String {
        let num = a.num.display_in("x");
        let den: Vec<String> = a
            .den
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    Self::basis_name(i)
                } else {
                    format!("{}^{e}", Self::basis_name(i))
                }
            })
            .collect();
        if den.is_empty() {
            num
        } else {
            format!("({num})/({})", den.join("*"))
        }
    }

    pub fn to_json(&self, a: &SFraction) -> FractionJson {
        FractionJson {
            num: a.num.to_i64(),
            den: a.den.to_vec(),
        }
    }

    pub fn from_json(&self, j: &FractionJson) -> Result<SFraction> {
        if j.den.len() > self.rank() {
            return Err(Error::Parse(format!(
                "denominator exponent vector has {} entries, ring has {} basis polynomials",
                j.den.len(),
                self.rank()
            )));
        }
        let mut den = j.den.clone();
        den.resize(self.rank(), 0);
        Ok(self.canonicalize(DensePoly::from_i64(self.field, &j.num), den))
    }
}
