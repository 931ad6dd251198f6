use proptest::prelude::*;

use selfsim::ring::{DensePoly, LocalRing, MultiLaurent, MultiLocalRing, MultiSFraction, PrimeField, SFraction};
use selfsim::Error;

const CASES: u32 = 1000;

fn field(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn poly_coeffs(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..7, 0..=max_len)
}

/// F_2 with f_1 = x²+x+1, or F_3 with f_1 = x²+1.
fn local_ring(p: u64) -> LocalRing {
    let f = field(p);
    let extra = if p == 2 { vec![1, 1, 1] } else { vec![1, 0, 1] };
    LocalRing::new(f, vec![DensePoly::from_i64(f, &extra)])
}

fn raw_fraction() -> impl Strategy<Value = (Vec<i64>, Vec<u32>)> {
    (poly_coeffs(6), prop::collection::vec(0u32..3, 2))
}

fn fraction(ring: &LocalRing, (num, den): &(Vec<i64>, Vec<u32>)) -> SFraction {
    ring.canonicalize(DensePoly::from_i64(ring.field(), num), den.clone())
}

fn laurent_terms() -> impl Strategy<Value = Vec<((i64, i64), i64)>> {
    prop::collection::vec(((-2i64..3, -2i64..3), 1i64..5), 0..5)
}

fn laurent(f: PrimeField, terms: &[((i64, i64), i64)]) -> MultiLaurent {
    terms.iter().fold(MultiLaurent::zero(f, 2), |acc, &((a, b), c)| {
        acc.add(&MultiLaurent::monomial(f, vec![a, b], c))
    })
}

fn multi_ring() -> MultiLocalRing {
    let f = field(2);
    MultiLocalRing::localized(f, 2, DensePoly::from_i64(f, &[1, 1, 1])).unwrap()
}

fn multi_fraction(ring: &MultiLocalRing, terms: &[((i64, i64), i64)], den: &[u32]) -> MultiSFraction {
    ring.canonicalize(laurent(ring.field(), terms), den.to_vec())
}

/// Independent equality test for fractions over the basis: n1·D2 = n2·D1.
fn cross_equal(ring: &LocalRing, a: &(Vec<i64>, Vec<u32>), b: &(Vec<i64>, Vec<u32>)) -> bool {
    let f = ring.field();
    let lhs = DensePoly::from_i64(f, &a.0).mul(&ring.basis_product(&b.1));
    let rhs = DensePoly::from_i64(f, &b.0).mul(&ring.basis_product(&a.1));
    lhs == rhs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn prime_field_laws(p in prop::sample::select(vec![2u64, 3, 5, 7, 101]), a in 0i64..1000, b in 0i64..1000, c in 0i64..1000) {
        let f = field(p);
        let (a, b, c) = (f.reduce(a), f.reduce(b), f.reduce(c));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(u64::from(f.mul(a, b)), u64::from(a) * u64::from(b) % p);
    }

    #[test]
    fn poly_laws(p in prop::sample::select(vec![2u64, 3, 5]), a in poly_coeffs(6), b in poly_coeffs(6), c in poly_coeffs(6)) {
        let f = field(p);
        let (a, b, c) = (DensePoly::from_i64(f, &a), DensePoly::from_i64(f, &b), DensePoly::from_i64(f, &c));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), DensePoly::zero(f));
        if !a.is_zero() {
            prop_assert_eq!(a.leading() != 0, true);
        }
    }

    #[test]
    fn poly_divrem_contract(p in prop::sample::select(vec![2u64, 3, 5]), a in poly_coeffs(8), b in poly_coeffs(4)) {
        let f = field(p);
        let (a, b) = (DensePoly::from_i64(f, &a), DensePoly::from_i64(f, &b));
        match a.divrem(&b) {
            Ok((q, r)) => {
                prop_assert_eq!(q.mul(&b).add(&r), a);
                prop_assert!(r.degree() < b.degree() || r.is_zero());
            }
            Err(e) => {
                prop_assert!(b.is_zero());
                prop_assert!(matches!(e, Error::DivisionByZero));
            }
        }
    }

    #[test]
    fn sfraction_laws(p in prop::sample::select(vec![2u64, 3]), a in raw_fraction(), b in raw_fraction(), c in raw_fraction()) {
        let ring = local_ring(p);
        let (a, b, c) = (fraction(&ring, &a), fraction(&ring, &b), fraction(&ring, &c));
        prop_assert_eq!(ring.add(&ring.add(&a, &b), &c), ring.add(&a, &ring.add(&b, &c)));
        prop_assert_eq!(ring.mul(&ring.mul(&a, &b), &c), ring.mul(&a, &ring.mul(&b, &c)));
        prop_assert_eq!(ring.add(&a, &b), ring.add(&b, &a));
        prop_assert_eq!(ring.mul(&a, &b), ring.mul(&b, &a));
        prop_assert_eq!(ring.mul(&a, &ring.add(&b, &c)), ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c)));
        prop_assert_eq!(ring.sub(&a, &a), ring.zero());
        prop_assert_eq!(ring.mul(&a, &ring.one()), a);
    }

    #[test]
    fn laurent_laws(a in laurent_terms(), b in laurent_terms(), c in laurent_terms()) {
        let f = field(3);
        let (a, b, c) = (laurent(f, &a), laurent(f, &b), laurent(f, &c));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert!(a.terms().values().all(|&v| v != 0));
    }

    #[test]
    fn multi_sfraction_laws(
        a in laurent_terms(), da in prop::collection::vec(0u32..3, 2),
        b in laurent_terms(), db in prop::collection::vec(0u32..3, 2),
        c in laurent_terms(), dc in prop::collection::vec(0u32..3, 2),
    ) {
        let ring = multi_ring();
        let (a, b, c) = (multi_fraction(&ring, &a, &da), multi_fraction(&ring, &b, &db), multi_fraction(&ring, &c, &dc));
        prop_assert_eq!(ring.add(&ring.add(&a, &b), &c), ring.add(&a, &ring.add(&b, &c)));
        prop_assert_eq!(ring.mul(&ring.mul(&a, &b), &c), ring.mul(&a, &ring.mul(&b, &c)));
        prop_assert_eq!(ring.add(&a, &b), ring.add(&b, &a));
        prop_assert_eq!(ring.mul(&a, &b), ring.mul(&b, &a));
        prop_assert_eq!(ring.mul(&a, &ring.add(&b, &c)), ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c)));
        prop_assert!(ring.sub(&a, &a).is_zero());
    }

    #[test]
    fn canonicalize_idempotent_and_equality_compatible(
        p in prop::sample::select(vec![2u64, 3]),
        a in raw_fraction(),
        b in raw_fraction(),
        k in prop::collection::vec(0u32..3, 2),
    ) {
        let ring = local_ring(p);
        let ca = fraction(&ring, &a);
        let again = ring.canonicalize(ca.num().clone(), ca.den_exps().to_vec());
        prop_assert_eq!(&again, &ca);
        // A second representative of the same element.
        let scaled_num = DensePoly::from_i64(ring.field(), &a.0).mul(&ring.basis_product(&k));
        let a2 = (scaled_num.to_i64(), a.1.iter().zip(&k).map(|(x, y)| x + y).collect::<Vec<_>>());
        prop_assert!(cross_equal(&ring, &a, &a2));
        prop_assert_eq!(fraction(&ring, &a2), ca.clone());
        prop_assert_eq!(fraction(&ring, &b) == ca, cross_equal(&ring, &a, &b));
        for (i, &e) in ca.den_exps().iter().enumerate() {
            if e > 0 {
                prop_assert!(!ring.basis()[i].divides(ca.num()));
            }
        }
    }

    #[test]
    fn eval_at_one_is_a_homomorphism(p in prop::sample::select(vec![2u64, 3]), a in raw_fraction(), b in raw_fraction()) {
        let ring = if p == 2 {
            local_ring(2)
        } else {
            // x² + x + 2 is irreducible over F_3 with value 1 at x = 1.
            let f = field(3);
            LocalRing::new(f, vec![DensePoly::from_i64(f, &[2, 1, 1])])
        };
        let f = ring.field();
        let (a, b) = (fraction(&ring, &a), fraction(&ring, &b));
        let (ea, eb) = (ring.eval_at_one(&a).unwrap(), ring.eval_at_one(&b).unwrap());
        prop_assert_eq!(ring.eval_at_one(&ring.mul(&a, &b)).unwrap(), f.mul(ea, eb));
        prop_assert_eq!(ring.eval_at_one(&ring.add(&a, &b)).unwrap(), f.add(ea, eb));
        prop_assert_eq!(ea == 0, ring.in_ideal_power(&a, 1));
    }

    #[test]
    fn multi_eval_at_ones_is_a_homomorphism(a in laurent_terms(), da in prop::collection::vec(0u32..3, 2), b in laurent_terms()) {
        let ring = multi_ring();
        let f = ring.field();
        let (a, b) = (multi_fraction(&ring, &a, &da), multi_fraction(&ring, &b, &[0, 0]));
        let (ea, eb) = (ring.eval_at_ones(&a).unwrap(), ring.eval_at_ones(&b).unwrap());
        prop_assert_eq!(ring.eval_at_ones(&ring.mul(&a, &b)).unwrap(), f.mul(ea, eb));
        prop_assert_eq!(ring.eval_at_ones(&ring.add(&a, &b)).unwrap(), f.add(ea, eb));
    }

    #[test]
    fn divide_exact_inverts_multiplication(p in prop::sample::select(vec![2u64, 3]), a in raw_fraction(), k in 0u32..4) {
        let ring = local_ring(p);
        let a = fraction(&ring, &a);
        match ring.divide_exact(&a, k) {
            Ok(q) => prop_assert_eq!(ring.mul_ideal_power(&q, k), a.clone()),
            Err(e) => {
                prop_assert!(matches!(e, Error::NotDivisible(_)));
                prop_assert!(!ring.in_ideal_power(&a, k));
            }
        }
        let lifted = ring.mul_ideal_power(&a, k);
        prop_assert_eq!(ring.divide_exact(&lifted, k).unwrap(), a);
    }

    #[test]
    fn multi_divide_exact_inverts_multiplication(a in laurent_terms(), i in 0usize..2, k in 0u32..3) {
        let ring = multi_ring();
        let a = multi_fraction(&ring, &a, &[0, 0]);
        let mut exps = vec![0i64; 2];
        exps[i] = i64::from(k);
        let lifted = ring.mul_s_powers(&a, &exps);
        prop_assert_eq!(ring.divide_exact_s(&lifted, i, k).unwrap(), a);
    }
}

#[test]
fn divrem_examples() {
    let f = field(2);
    let xm1 = DensePoly::x_minus_one(f);
    let (q, r) = DensePoly::from_i64(f, &[1, 0, 1]).divrem(&xm1).unwrap();
    assert_eq!(q, DensePoly::from_i64(f, &[1, 1]));
    assert!(r.is_zero());
    let (q, r) = DensePoly::zero(f).divrem(&xm1).unwrap();
    assert!(q.is_zero() && r.is_zero());
    // λ = (x − 1)λ̃ + λ(1)
    let f3 = field(3);
    let lambda = DensePoly::from_i64(f3, &[2, 0, 1, 1]);
    let (q, r) = lambda.divrem(&DensePoly::x_minus_one(f3)).unwrap();
    assert_eq!(r, DensePoly::constant(f3, i64::from(lambda.eval_at_one())));
    assert!(q.degree() < lambda.degree());
    assert!(DensePoly::one(f).divrem(&DensePoly::zero(f)).is_err());
}

#[test]
fn divide_exact_examples() {
    let f = field(2);
    let ring = local_ring(2);
    let xm1 = DensePoly::x_minus_one(f);
    let g = DensePoly::from_i64(f, &[1, 1, 1]);
    let a = ring.from_poly(xm1.mul(&g));
    assert_eq!(ring.divide_exact(&a, 1).unwrap(), ring.from_poly(g));
    assert!(matches!(
        ring.divide_exact(&ring.from_poly(DensePoly::x(f)), 1),
        Err(Error::NotDivisible(_))
    ));
    let a = ring.canonicalize(xm1.pow(2), vec![1, 0]);
    assert_eq!(ring.divide_exact(&a, 2).unwrap(), ring.unit(1, &[-1, 0]));
}

#[test]
fn eval_at_one_examples() {
    let f = field(2);
    let ring = local_ring(2);
    assert_eq!(ring.eval_at_one(&ring.from_poly(DensePoly::x_minus_one(f))).unwrap(), 0);
    assert_eq!(
        ring.eval_at_one(&ring.canonicalize(DensePoly::x(f), vec![0, 1]))
            .unwrap(),
        1
    );
    let a = ring.canonicalize(DensePoly::from_i64(f, &[1, 1, 1]), vec![1, 0]);
    assert_eq!(ring.eval_at_one(&a).unwrap(), 1);
}

#[test]
fn canonicalize_examples() {
    let f = field(2);
    let ring = local_ring(2);
    let xm1 = DensePoly::x_minus_one(f);
    let c = ring.canonicalize(DensePoly::x(f).mul(&xm1), vec![1, 0]);
    assert_eq!((c.num(), c.den_exps()), (&xm1, &[0, 0][..]));
    let f1 = DensePoly::from_i64(f, &[1, 1, 1]);
    let xp1 = DensePoly::from_i64(f, &[1, 1]);
    let c = ring.canonicalize(f1.mul(&xp1), vec![0, 1]);
    assert_eq!((c.num(), c.den_exps()), (&xp1, &[0, 0][..]));
    let c = ring.canonicalize(xm1.clone(), vec![0, 0]);
    assert_eq!(c.num(), &xm1);
    assert_eq!(ring.canonicalize(DensePoly::zero(f), vec![2, 1]), ring.zero());
}
