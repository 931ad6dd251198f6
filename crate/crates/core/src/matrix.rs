//! Exact matrices: upper triangular over A, diagonal units, and polynomial
//! matrices over F_p[x] together with the shift matrix used by the affine family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Degree, DensePoly, LocalRing, PrimeField, SFraction};

/// Upper triangular m×m matrix over A, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriMat {
    m: usize,
    entries: Vec<SFraction>,
}

impl TriMat {
    pub fn identity(ring: &LocalRing, m: usize) -> Self {
        let mut entries = vec![ring.zero(); m * m];
        for i in 0..m {
            entries[i * m + i] = ring.one();
        }
        Self { m, entries }
    }

    /// Unitriangular matrix with the given strictly-upper entries, listed row by row.
    pub fn unitriangular(ring: &LocalRing, m: usize, upper: impl IntoIterator<Item = SFraction>) -> Self {
        let mut t = Self::identity(ring, m);
        let mut it = upper.into_iter();
        for i in 0..m {
            for j in i + 1..m {
                t.entries[i * m + j] = it.next().expect("m(m-1)/2 upper entries");
            }
        }
        t
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &SFraction {
        &self.entries[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: SFraction) {
        debug_assert!(i <= j || v.is_zero(), "upper triangular");
        self.entries[i * self.m + j] = v;
    }

    pub fn is_identity(&self, ring: &LocalRing) -> bool {
        *self == Self::identity(ring, self.m)
    }

    pub fn is_unitriangular(&self, ring: &LocalRing) -> bool {
        (0..self.m).all(|i| *self.get(i, i) == ring.one())
    }

    pub fn mul(&self, ring: &LocalRing, other: &Self) -> Self {
        let m = self.m;
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let mut acc: Option<SFraction> = None;
                for k in i..=j {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let term = if ring.is_one(a) {
                        std::borrow::Cow::Borrowed(b)
                    } else if ring.is_one(b) {
                        std::borrow::Cow::Borrowed(a)
                    } else {
                        std::borrow::Cow::Owned(ring.mul(a, b))
                    };
                    acc = Some(match acc {
                        None => term.into_owned(),
                        Some(s) => ring.add(&s, &term),
                    });
                }
                entries.push(acc.unwrap_or_else(|| ring.zero()));
            }
        }
        Self { m, entries }
    }

    /// Entrywise map over the upper triangle (the diagonal included).
    pub fn map_upper(&self, mut f: impl FnMut(usize, usize, &SFraction) -> Result<SFraction>) -> Result<Self> {
        let mut out = self.clone();
        for i in 0..self.m {
            for j in i..self.m {
                out.entries[i * self.m + j] = f(i, j, self.get(i, j))?;
            }
        }
        Ok(out)
    }

    /// Strictly-upper entries row by row.
    pub fn upper_entries(&self) -> impl Iterator<Item = &SFraction> {
        (0..self.m).flat_map(move |i| (i + 1..self.m).map(move |j| self.get(i, j)))
    }
}

/// Inverse of an upper triangular matrix with invertible diagonal, by back substitution.
pub fn tri_inverse(ring: &LocalRing, t: &TriMat) -> Result<TriMat> {
    let m = t.size();
    let mut out = TriMat::identity(ring, m);
    let diag_inv: Vec<SFraction> = (0..m)
        .map(|i| {
            ring.try_inverse(t.get(i, i)).ok_or_else(|| {
                Error::NotInvertible(format!("diagonal entry {} = {}", i + 1, ring.display(t.get(i, i))))
            })
        })
        .collect::<Result<_>>()?;
    for i in 0..m {
        out.set(i, i, diag_inv[i].clone());
    }
    for d in 1..m {
        for i in 0..m - d {
            let j = i + d;
            let mut acc = ring.zero();
            for k in i + 1..=j {
                acc = ring.add(&acc, &ring.mul(t.get(i, k), out.get(k, j)));
            }
            out.set(i, j, ring.neg(&ring.mul(&diag_inv[i], &acc)));
        }
    }
    Ok(out)
}

/// A unit of A written as c·∏ f_i^{e_i}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagEntry {
    pub unit: u32,
    pub exps: Vec<i64>,
}

impl DiagEntry {
    pub fn one(rank: usize) -> Self {
        Self {
            unit: 1,
            exps: vec![0; rank],
        }
    }

    pub fn mul(&self, field: PrimeField, other: &Self) -> Self {
        Self {
            unit: field.mul(self.unit, other.unit),
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inv(&self, field: PrimeField) -> Self {
        Self {
            unit: field.inv(self.unit).expect("diagonal units are nonzero"),
            exps: self.exps.iter().map(|e| -e).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.unit == 1 && self.exps.iter().all(|&e| e == 0)
    }

    pub fn to_fraction(&self, ring: &LocalRing) -> SFraction {
        ring.unit(self.unit, &self.exps)
    }
}

/// Diagonal matrix of units of A.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagMat {
    pub entries: Vec<DiagEntry>,
}

impl DiagMat {
    pub fn identity(m: usize, rank: usize) -> Self {
        Self {
            entries: vec![DiagEntry::one(rank); m],
        }
    }

    pub fn mul(&self, field: PrimeField, other: &Self) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.mul(field, b))
                .collect(),
        }
    }

    pub fn inv(&self, field: PrimeField) -> Self {
        Self {
            entries: self.entries.iter().map(|a| a.inv(field)).collect(),
        }
    }

    /// d_i / d_j.
    pub fn ratio(&self, field: PrimeField, i: usize, j: usize) -> DiagEntry {
        self.entries[i].mul(field, &self.entries[j].inv(field))
    }

    /// Divide every entry by the scalar `s`.
    pub fn scaled_by_inverse(&self, field: PrimeField, s: &DiagEntry) -> Self {
        let sinv = s.inv(field);
        Self {
            entries: self.entries.iter().map(|a| a.mul(field, &sinv)).collect(),
        }
    }
}

/// Square matrix over F_p[x], row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMat {
    n: usize,
    entries: Vec<DensePoly>,
}

/// Column vector over F_p[x].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColumnVec {
    pub entries: Vec<DensePoly>,
}

impl ColumnVec {
    pub fn zero(field: PrimeField, n: usize) -> Self {
        Self {
            entries: vec![DensePoly::zero(field); n],
        }
    }

    /// The standard basis column e_{i+1} scaled by `c`.
    pub fn basis(field: PrimeField, n: usize, i: usize, c: i64) -> Self {
        let mut v = Self::zero(field, n);
        v.entries[i] = DensePoly::constant(field, c);
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(DensePoly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            entries: self.entries.iter().map(DensePoly::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn rho(&self) -> Degree {
        self.entries.iter().map(DensePoly::degree).max().flatten()
    }

    pub fn to_json(&self) -> Vec<Vec<i64>> {
        self.entries.iter().map(DensePoly::to_i64).collect()
    }
}

impl PolyMat {
    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut entries = vec![DensePoly::zero(field); n * n];
        for i in 0..n {
            entries[i * n + i] = DensePoly::one(field);
        }
        Self { n, entries }
    }

    pub fn zero(field: PrimeField, n: usize) -> Self {
        Self {
            n,
            entries: vec![DensePoly::zero(field); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<DensePoly>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("matrix must be square".into()));
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// I + c·E_{i,j} (zero-based indices).
    pub fn elementary(field: PrimeField, n: usize, i: usize, j: usize, c: DensePoly) -> Self {
        let mut m = Self::identity(field, n);
        let cur = m.get(i, j).add(&c);
        m.set(i, j, cur);
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &DensePoly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: DensePoly) {
        self.entries[i * self.n + j] = v;
    }

    pub fn field(&self) -> PrimeField {
        self.entries[0].field()
    }

    pub fn rows(&self) -> Vec<Vec<DensePoly>> {
        self.entries.chunks(self.n).map(<[DensePoly]>::to_vec).collect()
    }

    pub fn to_json(&self) -> Vec<Vec<Vec<i64>>> {
        self.entries
            .chunks(self.n)
            .map(|row| row.iter().map(DensePoly::to_i64).collect())
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(self.field(), n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = DensePoly::zero(self.field());
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &ColumnVec) -> ColumnVec {
        ColumnVec {
            entries: (0..self.n)
                .map(|i| {
                    (0..self.n).fold(DensePoly::zero(self.field()), |acc, k| {
                        acc.add(&self.get(i, k).mul(&v.entries[k]))
                    })
                })
                .collect(),
        }
    }

    pub fn rho(&self) -> Degree {
        self.entries.iter().map(DensePoly::degree).max().flatten()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> DensePoly {
        let n = self.n;
        let field = self.field();
        let mut a = self.rows();
        let mut sign = false;
        let mut prev = DensePoly::one(field);
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = !sign;
                    }
                    None => return DensePoly::zero(field),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign {
            d.neg()
        } else {
            d
        }
    }

    fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != row) {
            for j in (0..n).filter(|&j| j != col) {
                entries.push(self.get(i, j).clone());
            }
        }
        Self { n: n - 1, entries }
    }

    pub fn adjugate(&self) -> Self {
        let n = self.n;
        let field = self.field();
        if n == 1 {
            return Self::identity(field, 1);
        }
        let mut out = Self::zero(field, n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(j, i).det();
                out.set(i, j, if (i + j) % 2 == 0 { c } else { c.neg() });
            }
        }
        out
    }

    /// Inverse in GL_n(F_p[x]); the determinant must be a nonzero constant.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if !(det.is_constant() && !det.is_zero()) {
            return Err(Error::NotInvertible(format!("det = {det}")));
        }
        let inv = self.field().inv(det.coeff(0)).expect("nonzero constant");
        let adj = self.adjugate();
        Ok(Self {
            n: self.n,
            entries: adj.entries.iter().map(|e| e.scale(inv)).collect(),
        })
    }

    /// Membership in B(n, F_p[x]): invertible, with every entry above the
    /// diagonal divisible by `ideal`.
    pub fn in_b(&self, ideal: &DensePoly) -> bool {
        let n = self.n;
        let det = self.det();
        det.is_constant() && !det.is_zero() && (0..n).all(|i| (i + 1..n).all(|j| ideal.divides(self.get(i, j))))
    }
}

/// A·v for the shift matrix A (ones on the superdiagonal, 1/(x−1) in the
/// bottom-left corner): (v_2, …, v_n, v_1/(x−1)).
pub fn apply_a(v: &ColumnVec) -> Result<ColumnVec> {
    let field = v.entries[0].field();
    let first = v.entries[0]
        .div_exact(&DensePoly::x_minus_one(field))
        .ok_or_else(|| Error::NotDivisible(format!("first coordinate {} not in (x-1)", v.entries[0])))?;
    let mut entries: Vec<DensePoly> = v.entries[1..].to_vec();
    entries.push(first);
    Ok(ColumnVec { entries })
}

/// A·b·A^{-1} by the index-shift closed form: entry (i,j) is b_{σ(i),σ(j)}
/// times (x−1)^ε, σ the cyclic shift i ↦ i+1, ε = −1 on the last row, +1 on
/// the last column, 0 at the corner and elsewhere.
pub fn conj_by_a(b: &PolyMat) -> Result<PolyMat> {
    let n = b.size();
    let field = b.field();
    let xm1 = DensePoly::x_minus_one(field);
    let shift = |i: usize| (i + 1) % n;
    let mut out = PolyMat::zero(field, n);
    for i in 0..n {
        for j in 0..n {
            let src = b.get(shift(i), shift(j));
            let last_row = i == n - 1;
            let last_col = j == n - 1;
            let v = match (last_row, last_col) {
                (true, false) => src.div_exact(&xm1).ok_or_else(|| {
                    Error::NotDivisible(format!(
                        "entry ({}, {}) = {} not in (x-1)",
                        shift(i) + 1,
                        shift(j) + 1,
                        src
                    ))
                })?,
                (false, true) => src.mul(&xm1),
                _ => src.clone(),
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn tri_inverse_small() {
        let f = f2();
        let ring = LocalRing::new(f, vec![]);
        let id = TriMat::identity(&ring, 3);
        assert_eq!(tri_inverse(&ring, &id).unwrap(), id);
        let c = ring.from_poly(DensePoly::from_i64(f, &[1, 1, 1]));
        let t = TriMat::unitriangular(&ring, 2, [c.clone()]);
        let inv = tri_inverse(&ring, &t).unwrap();
        assert_eq!(inv.get(0, 1), &ring.neg(&c));
        assert_eq!(t.mul(&ring, &inv), TriMat::identity(&ring, 2));
    }

    #[test]
    fn tri_inverse_rejects_singular_diagonal() {
        let f = f2();
        let ring = LocalRing::new(f, vec![]);
        let mut t = TriMat::identity(&ring, 2);
        t.set(1, 1, ring.from_poly(DensePoly::x_minus_one(f)));
        assert!(matches!(tri_inverse(&ring, &t), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn rho_examples() {
        let f = f2();
        assert_eq!(PolyMat::zero(f, 3).rho(), None);
        assert_eq!(PolyMat::identity(f, 3).rho(), Some(0));
        let mut m = PolyMat::zero(f, 2);
        m.set(1, 0, DensePoly::from_i64(f, &[0, 1, 0, 1]));
        assert_eq!(m.rho(), Some(3));
    }

    #[test]
    fn apply_a_examples() {
        let f = f2();
        let v = ColumnVec {
            entries: vec![DensePoly::x_minus_one(f), DensePoly::zero(f), DensePoly::zero(f)],
        };
        assert_eq!(apply_a(&v).unwrap(), ColumnVec::basis(f, 3, 2, 1));
        assert_eq!(apply_a(&ColumnVec::zero(f, 3)).unwrap(), ColumnVec::zero(f, 3));
        let q = DensePoly::from_i64(f, &[1, 1, 1]);
        let r = DensePoly::x(f);
        let w = ColumnVec {
            entries: vec![DensePoly::zero(f), q.clone(), r.clone()],
        };
        assert_eq!(
            apply_a(&w).unwrap(),
            ColumnVec {
                entries: vec![q, r, DensePoly::zero(f)]
            }
        );
        assert!(apply_a(&ColumnVec::basis(f, 3, 0, 1)).is_err());
    }

    #[test]
    fn conj_identity_and_relocation() {
        let f = f2();
        assert_eq!(conj_by_a(&PolyMat::identity(f, 3)).unwrap(), PolyMat::identity(f, 3));
        // I + (x-1)E_{1,2} moves its entry to (3,1) with the factor (x-1) divided out.
        let b = PolyMat::elementary(f, 3, 0, 1, DensePoly::x_minus_one(f));
        let c = conj_by_a(&b).unwrap();
        assert_eq!(c, PolyMat::elementary(f, 3, 2, 0, DensePoly::one(f)));
    }

    #[test]
    fn det_and_inverse() {
        let f = PrimeField::new(3).unwrap();
        let a = PolyMat::elementary(f, 3, 0, 2, DensePoly::from_i64(f, &[2, 1]));
        let b = PolyMat::elementary(f, 3, 2, 1, DensePoly::from_i64(f, &[1, 0, 1]));
        let m = a.mul(&b);
        assert_eq!(m.det(), DensePoly::one(f));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), PolyMat::identity(f, 3));
        let mut s = PolyMat::identity(f, 2);
        s.set(0, 0, DensePoly::x(f));
        assert!(s.inverse().is_err());
    }
}
