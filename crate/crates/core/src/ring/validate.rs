//! Hypothesis checks for a list of inverted polynomials f_0 = x, f_1, ….

use serde::Serialize;

use crate::ring::field::{is_prime, PrimeField};
use crate::ring::poly::{monic_polys_of_degree, DensePoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotPrime {
        p: u64,
    },
    FirstNotX,
    Constant {
        index: usize,
    },
    NotMonic {
        index: usize,
    },
    Reducible {
        index: usize,
    },
    Duplicate {
        first: usize,
        second: usize,
    },
    /// f_i lies in F_p·(x − 1), i.e. vanishes at 1.
    MultipleOfXMinusOne {
        index: usize,
    },
    /// Metabelian (lamplighter) family only: f_i(1) must equal 1 for i ≥ 1.
    ValueAtOneNotOne {
        index: usize,
        value: u32,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub p: u64,
    pub polys: Vec<Vec<i64>>,
    /// Violations of the hypotheses shared by every family built on A.
    pub violations: Vec<Violation>,
    /// Extra violations that only matter for the lamplighter family.
    pub lamplighter_violations: Vec<Violation>,
    /// How "F_p[x] \ F_p(x−1)" is read.
    pub interpretation: &'static str,
}

pub const ADMISSIBLE_READING: &str =
    "admissible f_i: nonconstant, monic, irreducible over F_p, and not a multiple of x-1 (f_i(1) != 0)";

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_valid_for_lamplighter(&self) -> bool {
        self.violations.is_empty() && self.lamplighter_violations.is_empty()
    }
}

/// Validate `p` and the list `polys = [f_0, f_1, …]` (given as ascending
/// coefficient lists) against the hypotheses of the localized constructions.
pub fn validate_config(p: u64, polys: &[Vec<i64>]) -> ValidationReport {
    let mut report = ValidationReport {
        p,
        polys: polys.to_vec(),
        violations: Vec::new(),
        lamplighter_violations: Vec::new(),
        interpretation: ADMISSIBLE_READING,
    };
    if !is_prime(p) {
        report.violations.push(Violation::NotPrime { p });
        return report;
    }
    let field = match PrimeField::new(p) {
        Ok(f) => f,
        Err(_) => {
            report.violations.push(Violation::NotPrime { p });
            return report;
        }
    };
    let polys: Vec<DensePoly> = polys.iter().map(|c| DensePoly::from_i64(field, c)).collect();
    if polys.first() != Some(&DensePoly::x(field)) {
        report.violations.push(Violation::FirstNotX);
    }
    for (i, f) in polys.iter().enumerate() {
        if f.is_constant() {
            report.violations.push(Violation::Constant { index: i });
            continue;
        }
        if !f.is_monic() {
            report.violations.push(Violation::NotMonic { index: i });
        }
        if !f.is_irreducible() {
            report.violations.push(Violation::Reducible { index: i });
        }
        if f.eval_at_one() == 0 {
            report.violations.push(Violation::MultipleOfXMinusOne { index: i });
        }
        if i >= 1 && f.eval_at_one() != 1 {
            report.lamplighter_violations.push(Violation::ValueAtOneNotOne {
                index: i,
                value: f.eval_at_one(),
            });
        }
        for (j, g) in polys.iter().enumerate().take(i) {
            if g == f {
                report.violations.push(Violation::Duplicate { first: j, second: i });
            }
        }
    }
    report
}

/// Deterministic search for the first admissible f of degree `deg` (in
/// mixed-radix order of the lower coefficients), skipping `avoid`. When
/// `value_one` is set, also require f(1) = 1.
pub fn find_admissible_poly(field: PrimeField, deg: usize, value_one: bool, avoid: &[DensePoly]) -> Option<DensePoly> {
    monic_polys_of_degree(field, deg).find(|f| {
        f.is_irreducible()
            && f.eval_at_one() != 0
            && (!value_one || f.eval_at_one() == 1)
            && *f != DensePoly::x(field)
            && !avoid.contains(f)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_x_and_trinomial_over_f2() {
        let r = validate_config(2, &[vec![0, 1], vec![1, 1, 1]]);
        assert!(r.is_valid_for_lamplighter(), "{r:?}");
    }

    #[test]
    fn rejects_x_plus_one_over_f2() {
        let r = validate_config(2, &[vec![0, 1], vec![1, 1]]);
        assert!(!r.is_valid());
        assert!(r.violations.contains(&Violation::MultipleOfXMinusOne { index: 1 }));
    }

    #[test]
    fn flags_value_at_one_for_lamplighter_only() {
        let r = validate_config(3, &[vec![0, 1], vec![1, 0, 1]]);
        assert!(r.is_valid());
        assert!(!r.is_valid_for_lamplighter());
        assert_eq!(
            r.lamplighter_violations,
            vec![Violation::ValueAtOneNotOne { index: 1, value: 2 }]
        );
    }

    #[test]
    fn other_violations() {
        assert!(!validate_config(4, &[vec![0, 1]]).is_valid());
        let r = validate_config(2, &[vec![0, 1], vec![1, 0, 1], vec![0, 1]]);
        assert!(r.violations.contains(&Violation::Reducible { index: 1 }));
        assert!(r.violations.contains(&Violation::Duplicate { first: 0, second: 2 }));
        let r = validate_config(3, &[vec![0, 1], vec![2, 2]]);
        assert!(r.violations.contains(&Violation::NotMonic { index: 1 }));
        assert!(!validate_config(2, &[vec![1, 1, 1]]).is_valid());
    }

    #[test]
    fn admissible_search() {
        let f3 = PrimeField::new(3).unwrap();
        let f = find_admissible_poly(f3, 2, true, &[]).unwrap();
        assert_eq!(f.eval_at_one(), 1);
        assert!(f.is_irreducible());
        assert_eq!(f, DensePoly::from_i64(f3, &[2, 1, 1]));
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(
            find_admissible_poly(f2, 2, true, &[]).unwrap(),
            DensePoly::from_i64(f2, &[1, 1, 1])
        );
    }
}
