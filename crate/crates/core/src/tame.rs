//! Σ^c data for the lamplighter-type family and the m-tameness degree.
//!
//! A set of character classes is m-tame when no ≤ m of them have positive
//! representatives summing to zero, i.e. the origin lies in no strictly
//! positive conic hull of ≤ m points. Feasibility of Σ c_i v_i = 0 with
//! c_i ≥ 1 is decided exactly by Fourier–Motzkin elimination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::LampInstance;

/// A nonzero homomorphism Q → R, stored by its values on x_0, …, x_{n-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character(Vec<BigRational>);

impl Character {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if values.iter().all(Zero::is_zero) {
            return Err(Error::Precondition("the zero character has no class".into()));
        }
        Ok(Self(values))
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    pub fn values(&self) -> &[BigRational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Same class: one is a positive multiple of the other.
    pub fn same_class(&self, other: &Self) -> bool {
        let Some(k) = self.0.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        if other.0[k].is_zero() || other.0[k].is_negative() != self.0[k].is_negative() {
            return false;
        }
        let r = &other.0[k] / &self.0[k];
        self.0.iter().zip(&other.0).all(|(a, b)| a * &r == *b)
    }

    pub fn scaled(&self, r: &BigRational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::Precondition(
                "class representatives scale by positive reals".into(),
            ));
        }
        Ok(Self(self.0.iter().map(|v| v * r).collect()))
    }
}

/// A finite set of characters in pairwise distinct classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaCSet {
    points: Vec<Character>,
}

impl SigmaCSet {
    pub fn new(points: Vec<Character>) -> Result<Self> {
        if let Some(first) = points.first() {
            if points.iter().any(|c| c.dim() != first.dim()) {
                return Err(Error::Precondition("characters of different rank".into()));
            }
        }
        for (i, a) in points.iter().enumerate() {
            if points[i + 1..].iter().any(|b| a.same_class(b)) {
                return Err(Error::Precondition(format!(
                    "character {i} repeats the class of a later one"
                )));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Character] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// χ_i(x_j) = δ_ij for i < n and χ_n(x_j) = −deg f_j.
pub fn sigma_c_for_lamp(inst: &LampInstance) -> SigmaCSet {
    let n = inst.rank();
    let mut points: Vec<Character> = (0..n)
        .map(|i| {
            let e: Vec<i64> = (0..n).map(|j| i64::from(i == j)).collect();
            Character::from_ints(&e).expect("unit vector")
        })
        .collect();
    let last: Vec<i64> = (0..n)
        .map(|j| -(inst.poly(j).degree().expect("basis polynomials are nonzero") as i64))
        .collect();
    points.push(Character::from_ints(&last).expect("deg f_0 = 1"));
    SigmaCSet::new(points).expect("the listed characters lie in distinct classes")
}

/// Whether Σ c_i v_i = 0 has a solution with every c_i > 0.
pub fn origin_in_positive_hull(points: &[&Character]) -> bool {
    if points.is_empty() {
        return false;
    }
    let k = points.len();
    // Homogeneous, so c_i > 0 can be replaced by c_i ≥ 1.
    let equalities: Vec<Vec<BigRational>> = (0..points[0].dim())
        .map(|d| points.iter().map(|p| p.0[d].clone()).collect())
        .collect();
    let bounds: Vec<Ineq> = (0..k)
        .map(|i| Ineq {
            coeffs: (0..k)
                .map(|j| {
                    if i == j {
                        -BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect(),
            rhs: -BigRational::one(),
        })
        .collect();
    feasible(equalities, bounds)
}

/// a·c ≤ rhs.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Ineq {
    coeffs: Vec<BigRational>,
    rhs: BigRational,
}

impl Ineq {
    /// Scale so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(BigRational::abs) {
            for c in &mut self.coeffs {
                *c /= &lead;
            }
            self.rhs /= &lead;
        }
        self
    }
}

/// Feasibility of {E c = 0, A c ≤ b}: Gaussian elimination on E, then
/// Fourier–Motzkin on the remaining variables.
fn feasible(mut eqs: Vec<Vec<BigRational>>, mut ineqs: Vec<Ineq>) -> bool {
    while let Some(row) = eqs.pop() {
        let Some(j) = row.iter().position(|c| !c.is_zero()) else {
            continue;
        };
        // c_j = −(Σ_{l≠j} row_l c_l) / row_j
        let pivot = row[j].clone();
        let subst = |target: &mut Vec<BigRational>| {
            let t = target[j].clone();
            if t.is_zero() {
                return;
            }
            for (l, c) in target.iter_mut().enumerate() {
                *c -= &t * &row[l] / &pivot;
            }
        };
        for e in &mut eqs {
            subst(e);
        }
        for q in &mut ineqs {
            subst(&mut q.coeffs);
        }
    }
    let vars = ineqs.first().map_or(0, |q| q.coeffs.len());
    for j in 0..vars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for q in ineqs {
            if q.coeffs[j].is_positive() {
                pos.push(q);
            } else if q.coeffs[j].is_negative() {
                neg.push(q);
            } else {
                rest.push(q);
            }
        }
        for a in &pos {
            for b in &neg {
                let (sa, sb) = (-b.coeffs[j].clone(), a.coeffs[j].clone());
                let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * &sa + y * &sb).collect();
                let combined = Ineq {
                    coeffs,
                    rhs: &a.rhs * &sa + &b.rhs * &sb,
                }
                .normalized();
                if !rest.contains(&combined) {
                    rest.push(combined);
                }
            }
        }
        ineqs = rest;
    }
    ineqs.iter().all(|q| !q.rhs.is_negative())
}

/// Largest m ≤ `max_m` such that no ≤ m distinct points span the origin positively.
pub fn tame_degree(set: &SigmaCSet, max_m: usize) -> Result<usize> {
    if max_m == 0 {
        return Err(Error::Precondition("max_m must be at least 1".into()));
    }
    let pts = set.points();
    for size in 1..=pts.len().min(max_m) {
        if subsets(pts.len(), size).any(|s| origin_in_positive_hull(&s.iter().map(|&i| &pts[i]).collect::<Vec<_>>())) {
            return Ok(size - 1);
        }
    }
    Ok(max_m)
}

/// All `size`-subsets of 0..n in lexicographic order.
fn subsets(n: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (size <= n).then(|| (0..size).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().expect("checked above");
        let mut i = size;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - size + i {
                c[i] += 1;
                for l in i + 1..size {
                    c[l] = c[l - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Theorem,
    Conjecture,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TameReport {
    pub tame_degree: usize,
    /// Largest m with G of type FP_m.
    pub fp_type: usize,
    pub finitely_presented: bool,
    pub basis: Basis,
    pub characters: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

/// Finiteness type of the lamplighter-type group read off the tameness degree.
pub fn finiteness_report(inst: &LampInstance) -> TameReport {
    let set = sigma_c_for_lamp(inst);
    // All n + 1 points together span the origin, so the degree is below set.len().
    let m = tame_degree(&set, set.len()).expect("max_m ≥ 1");
    TameReport {
        tame_degree: m,
        fp_type: m,
        finitely_presented: m >= 2,
        basis: Basis::Theorem,
        characters: set
            .points()
            .iter()
            .map(|c| c.values().iter().map(ToString::to_string).collect())
            .collect(),
        notes: vec![
            format!("of type FP_{m} but not FP_{}", m + 1),
            "finitely presented iff the module is 2-tame".into(),
            "FP_m iff m-tame holds unconditionally here: the module has finite exponent and Krull dimension 1".into(),
            "for other metabelian groups the FP_m equivalence is conjectural".into(),
            "the localized wreath module is never 3-tame; not computed".into(),
            "Σ^c is read off the known valuations of this family, not computed from the module".into(),
        ],
    }
}

/// Rational from a small integer numerator and denominator.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
