use proptest::prelude::*;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfsim::matrix::{apply_a, conj_by_a, tri_inverse, ColumnVec, PolyMat, TriMat};
use selfsim::ring::{DensePoly, LocalRing, PrimeField};
use selfsim::Error;

fn field(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn poly(f: PrimeField, c: &[i64]) -> DensePoly {
    DensePoly::from_i64(f, c)
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..5, 0..4)
}

fn matrix(n: usize) -> impl Strategy<Value = Vec<Vec<Vec<i64>>>> {
    prop::collection::vec(prop::collection::vec(coeffs(), n), n)
}

fn to_polymat(f: PrimeField, rows: &[Vec<Vec<i64>>]) -> PolyMat {
    PolyMat::from_rows(rows.iter().map(|r| r.iter().map(|c| poly(f, c)).collect()).collect()).unwrap()
}

/// Multiplies every entry strictly above the diagonal by x − 1, giving an element of B's shape.
fn into_b_shape(f: PrimeField, rows: &[Vec<Vec<i64>>]) -> PolyMat {
    let mut b = to_polymat(f, rows);
    let xm1 = DensePoly::x_minus_one(f);
    for i in 0..b.size() {
        for j in i + 1..b.size() {
            let v = b.get(i, j).mul(&xm1);
            b.set(i, j, v);
        }
    }
    b
}

/// Schoolbook product on row vectors, independent of the library's matrix code.
fn naive_mul(a: &[Vec<DensePoly>], b: &[Vec<DensePoly>]) -> Vec<Vec<DensePoly>> {
    let n = a.len();
    let f = a[0][0].field();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(DensePoly::zero(f), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

/// A·b·A^{-1} through the polynomial matrices (x−1)A and A^{-1}:
/// (x−1)A has x−1 on the superdiagonal and 1 in the bottom-left corner;
/// A^{-1} has 1 on the subdiagonal and x−1 in the top-right corner.
fn naive_conj(b: &PolyMat) -> Option<PolyMat> {
    let n = b.size();
    let f = b.field();
    let xm1 = DensePoly::x_minus_one(f);
    let zero = DensePoly::zero(f);
    let mut scaled_a = vec![vec![zero.clone(); n]; n];
    let mut a_inv = vec![vec![zero; n]; n];
    for i in 0..n - 1 {
        scaled_a[i][i + 1] = xm1.clone();
        a_inv[i + 1][i] = DensePoly::one(f);
    }
    scaled_a[n - 1][0] = DensePoly::one(f);
    a_inv[0][n - 1] = xm1.clone();
    let check = naive_mul(&scaled_a, &a_inv);
    assert!((0..n).all(|i| (0..n).all(|j| check[i][j] == if i == j { xm1.clone() } else { DensePoly::zero(f) })));
    let full = naive_mul(&naive_mul(&scaled_a, &b.rows()), &a_inv);
    let rows = full
        .iter()
        .map(|r| r.iter().map(|e| e.div_exact(&xm1)).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some(PolyMat::from_rows(rows).unwrap())
}

fn local_ring() -> LocalRing {
    let f = field(2);
    LocalRing::new(f, vec![poly(f, &[1, 1, 1])])
}

/// Upper triangular matrix with unit diagonal entries c·x^{e0}·f_1^{e1} and
/// arbitrary fractions above the diagonal.
fn random_tri(ring: &LocalRing, m: usize, diag: &[(i64, i64)], upper: &[(Vec<i64>, Vec<u32>)]) -> TriMat {
    let f = ring.field();
    let fracs = upper.iter().map(|(n, d)| ring.canonicalize(poly(f, n), d.clone()));
    let mut t = TriMat::unitriangular(ring, m, fracs);
    for (i, &(e0, e1)) in diag.iter().enumerate().take(m) {
        t.set(i, i, ring.unit(1, &[e0, e1]));
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tri_inverse_is_two_sided_and_involutive(
        m in 1usize..5,
        diag in prop::collection::vec((-2i64..3, -2i64..3), 4),
        upper in prop::collection::vec((coeffs(), prop::collection::vec(0u32..2, 2)), 6),
    ) {
        let ring = local_ring();
        let t = random_tri(&ring, m, &diag, &upper);
        let inv = tri_inverse(&ring, &t).unwrap();
        prop_assert!(t.mul(&ring, &inv).is_identity(&ring));
        prop_assert!(inv.mul(&ring, &t).is_identity(&ring));
        prop_assert_eq!(tri_inverse(&ring, &inv).unwrap(), t);
        for i in 0..m {
            for j in 0..i {
                prop_assert!(inv.get(i, j).is_zero());
            }
        }
    }

    #[test]
    fn rho_is_subadditive(n in 1usize..5, a in matrix(4), b in matrix(4)) {
        let f = field(3);
        let cut = |rows: &[Vec<Vec<i64>>]| rows[..n].iter().map(|r| r[..n].to_vec()).collect::<Vec<_>>();
        let (a, b) = (to_polymat(f, &cut(&a)), to_polymat(f, &cut(&b)));
        let prod = a.mul(&b);
        match (a.rho(), b.rho()) {
            (Some(ra), Some(rb)) => prop_assert!(prod.rho().is_none_or(|r| r <= ra + rb)),
            _ => prop_assert_eq!(prod.rho(), None),
        }
        let naive = naive_mul(&a.rows(), &b.rows());
        prop_assert_eq!(prod.rows(), naive);
    }

    #[test]
    fn conj_by_a_matches_naive_conjugation(p in prop::sample::select(vec![2u64, 3]), n in 3usize..5, rows in matrix(4)) {
        let f = field(p);
        let rows: Vec<_> = rows[..n].iter().map(|r| r[..n].to_vec()).collect();
        let b = into_b_shape(f, &rows);
        let closed = conj_by_a(&b).unwrap();
        prop_assert_eq!(Some(closed), naive_conj(&b));
    }

    #[test]
    fn conj_by_a_rejects_matrices_outside_b(n in 3usize..5, rows in matrix(4)) {
        let f = field(2);
        let rows: Vec<_> = rows[..n].iter().map(|r| r[..n].to_vec()).collect();
        let b = to_polymat(f, &rows);
        match conj_by_a(&b) {
            Ok(c) => prop_assert_eq!(Some(c), naive_conj(&b)),
            Err(e) => {
                prop_assert!(matches!(e, Error::NotDivisible(_)));
                prop_assert_eq!(naive_conj(&b), None);
            }
        }
    }

    #[test]
    fn conj_by_a_n_times_is_identity(p in prop::sample::select(vec![2u64, 3]), n in 3usize..5, rows in matrix(4)) {
        let f = field(p);
        let rows: Vec<_> = rows[..n].iter().map(|r| r[..n].to_vec()).collect();
        let b = into_b_shape(f, &rows);
        let mut c = b.clone();
        for _ in 0..n {
            c = conj_by_a(&c).unwrap();
        }
        prop_assert_eq!(c, b);
    }

    #[test]
    fn apply_a_n_times_divides_by_x_minus_one(p in prop::sample::select(vec![2u64, 3]), n in 2usize..6, w in prop::collection::vec(coeffs(), 5)) {
        let f = field(p);
        let xm1 = DensePoly::x_minus_one(f);
        let w = ColumnVec { entries: w[..n].iter().map(|c| poly(f, c)).collect() };
        let v = ColumnVec { entries: w.entries.iter().map(|e| e.mul(&xm1)).collect() };
        let mut out = v;
        for _ in 0..n {
            out = apply_a(&out).unwrap();
        }
        prop_assert_eq!(out, w);
    }
}

#[test]
fn conj_by_a_sample_of_two_hundred() {
    // The property above draws random sizes; this fixes the sample to 100 matrices per n ∈ {3, 4}.
    let f = field(2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for n in [3usize, 4] {
        for _ in 0..100 {
            let rows: Vec<Vec<Vec<i64>>> = (0..n)
                .map(|_| (0..n).map(|_| (0..3).map(|_| rng.gen_range(0..2)).collect()).collect())
                .collect();
            let b = into_b_shape(f, &rows);
            assert_eq!(Some(conj_by_a(&b).unwrap()), naive_conj(&b));
            checked += 1;
        }
    }
    assert_eq!(checked, 200);
}

#[test]
fn conj_by_a_examples() {
    let f = field(2);
    let id = PolyMat::identity(f, 3);
    assert_eq!(conj_by_a(&id).unwrap(), id);
    // I + (x−1)E_{1,2}: the entry moves to row 3, column 1 and loses its x−1 factor.
    let b = PolyMat::elementary(f, 3, 0, 1, DensePoly::x_minus_one(f));
    let c = conj_by_a(&b).unwrap();
    let mut want = PolyMat::identity(f, 3);
    want.set(2, 0, DensePoly::one(f));
    assert_eq!(c, want);
    assert_eq!(Some(c), naive_conj(&b));
}

#[test]
fn apply_a_examples() {
    let f = field(2);
    let v = ColumnVec {
        entries: vec![DensePoly::x_minus_one(f), DensePoly::zero(f), DensePoly::zero(f)],
    };
    assert_eq!(apply_a(&v).unwrap(), ColumnVec::basis(f, 3, 2, 1));
    assert_eq!(apply_a(&ColumnVec::zero(f, 3)).unwrap(), ColumnVec::zero(f, 3));
    let (q, r) = (poly(f, &[1, 1]), poly(f, &[0, 0, 1]));
    let v = ColumnVec {
        entries: vec![DensePoly::zero(f), q.clone(), r.clone()],
    };
    assert_eq!(apply_a(&v).unwrap().entries, vec![q, r, DensePoly::zero(f)]);
    assert!(matches!(
        apply_a(&ColumnVec::basis(f, 3, 0, 1)),
        Err(Error::NotDivisible(_))
    ));
}

#[test]
fn rho_examples() {
    let f = field(2);
    assert_eq!(PolyMat::zero(f, 3).rho(), None);
    assert_eq!(PolyMat::identity(f, 3).rho(), Some(0));
    let mut m = PolyMat::zero(f, 2);
    m.set(0, 1, poly(f, &[0, 1, 0, 1]));
    assert_eq!(m.rho(), Some(3));
}

#[test]
fn tri_inverse_examples() {
    let f = field(2);
    let ring = local_ring();
    let id = TriMat::identity(&ring, 3);
    assert_eq!(tri_inverse(&ring, &id).unwrap(), id);
    let c = ring.canonicalize(poly(f, &[1, 0, 1]), vec![1, 0]);
    let t = TriMat::unitriangular(&ring, 2, [c.clone()]);
    assert_eq!(*tri_inverse(&ring, &t).unwrap().get(0, 1), ring.neg(&c));
    let mut singular = TriMat::identity(&ring, 2);
    singular.set(1, 1, ring.from_poly(DensePoly::x_minus_one(f)));
    assert!(matches!(tri_inverse(&ring, &singular), Err(Error::NotInvertible(_))));
}

#[test]
fn transversal_inverse_degree_bound() {
    // Unitriangular t with deg a_{i,j} ≤ j−i−1 over F_2, m = 3: every one of the 16 matrices.
    let f = field(2);
    let ring = LocalRing::new(f, vec![]);
    let small = [vec![], vec![1]];
    let big = [vec![], vec![1], vec![0, 1], vec![1, 1]];
    for a12 in &small {
        for a23 in &small {
            for a13 in &big {
                let entries = [a12, a13, a23].map(|c| ring.from_poly(poly(f, c)));
                let t = TriMat::unitriangular(&ring, 3, entries);
                let inv = tri_inverse(&ring, &t).unwrap();
                for i in 0..3 {
                    for j in i + 1..3 {
                        let b = inv.get(i, j);
                        assert!(b.is_zero() || b.num().degree().unwrap() < j - i, "{i} {j}");
                        assert!(b.den_exps().iter().all(|&e| e == 0));
                    }
                }
            }
        }
    }
}
