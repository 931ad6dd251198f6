//! G = V ⋊ B with V = F_p[x]^n (columns) and B = B(n, F_p[x]), the invertible
//! matrices whose entries above the diagonal lie in (x − 1).
//!
//! H = V_0 ⋊ B with V_0 = (x−1)F_p[x] × F_p[x]^{n−1}, transversal {(αe_1, I)}
//! and f(v, b) = (Av, AbA^{-1}).

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{join_tokens, parse_index, random_poly, ElementSyntax};
use crate::engine::{states_bfs, BfsOutcome, SelfSimilar};
use crate::error::{Error, Result};
use crate::matrix::{apply_a, conj_by_a, ColumnVec, PolyMat};
use crate::ring::{DensePoly, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineElem {
    pub v: ColumnVec,
    pub b: PolyMat,
}

/// JSON literal form: {"v": [[coeffs], …], "b": [[[coeffs], …], …]}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AffineLiteral {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<Vec<i64>>>>,
}

#[derive(Clone, Debug)]
pub struct AffineInstance {
    field: PrimeField,
    n: usize,
    transversal: Vec<AffineElem>,
    transversal_inv: Vec<AffineElem>,
}

impl AffineInstance {
    /// Any n ≥ 2 is accepted; B is only known to be finitely generated for n ≥ 3.
    pub fn new(p: u64, n: usize) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if n < 2 {
            return Err(Error::InvalidConfig(format!("affine family needs n >= 2, got {n}")));
        }
        let mut out = Self {
            field,
            n,
            transversal: Vec::new(),
            transversal_inv: Vec::new(),
        };
        let t: Vec<AffineElem> = (0..field.modulus())
            .map(|a| out.translation(&ColumnVec::basis(field, n, 0, a as i64)))
            .collect();
        out.transversal_inv = t.iter().map(|g| out.inv(g)).collect();
        out.transversal = t;
        Ok(out)
    }

    /// Warnings about the parameters that do not prevent construction.
    pub fn warnings(&self) -> Vec<String> {
        if self.n == 2 {
            vec!["n = 2: state-closed of degree p, but the group is not finitely generated".into()]
        } else {
            Vec::new()
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn translation(&self, v: &ColumnVec) -> AffineElem {
        AffineElem {
            v: v.clone(),
            b: PolyMat::identity(self.field, self.n),
        }
    }

    pub fn linear(&self, b: PolyMat) -> AffineElem {
        AffineElem {
            v: ColumnVec::zero(self.field, self.n),
            b,
        }
    }

    /// I + (x−1)E_{i,j} for i < j and I + E_{i,j} for i > j (zero-based).
    pub fn elementary(&self, i: usize, j: usize) -> PolyMat {
        let c = if i < j {
            DensePoly::x_minus_one(self.field)
        } else {
            DensePoly::one(self.field)
        };
        PolyMat::elementary(self.field, self.n, i, j, c)
    }

    /// The identity with entry i replaced by a primitive root of F_p.
    pub fn diagonal(&self, i: usize) -> PolyMat {
        let mut b = PolyMat::identity(self.field, self.n);
        b.set(
            i,
            i,
            DensePoly::constant(self.field, self.field.primitive_root() as i64),
        );
        b
    }

    /// Membership in Δ_k: ρ(v) ≤ k and ρ(A^j b A^{-j}) ≤ k for 0 ≤ j < n.
    pub fn in_delta(&self, k: usize, g: &AffineElem) -> Result<bool> {
        let within = |d: Option<usize>| d.is_none_or(|d| d <= k);
        if !within(g.v.rho()) {
            return Ok(false);
        }
        let mut c = g.b.clone();
        for _ in 0..self.n {
            if !within(c.rho()) {
                return Ok(false);
            }
            c = conj_by_a(&c)?;
        }
        Ok(true)
    }

    /// BFS from each sample element; all must close within `cap` states, inside Δ_k.
    pub fn delta_closure_check(&self, k: usize, samples: &[AffineElem], cap: usize) -> Result<DeltaClosureReport> {
        let mut report = DeltaClosureReport {
            k,
            samples: samples.len(),
            samples_in_delta: true,
            closed: true,
            max_states: 0,
        };
        for g in samples {
            report.samples_in_delta &= self.in_delta(k, g)?;
            match states_bfs(self, g, cap)? {
                BfsOutcome::Finite(a) => {
                    report.max_states = report.max_states.max(a.len());
                    for s in &a.states {
                        report.closed &= self.in_delta(k, s)?;
                    }
                }
                BfsOutcome::CapExceeded { .. } => report.closed = false,
            }
        }
        Ok(report)
    }

    /// Generator sample (not a proven generating set of B): e_1…e_n,
    /// elementary matrices and diagonal units.
    pub fn generator_sample(&self) -> Vec<(String, AffineElem)> {
        let mut out: Vec<(String, AffineElem)> = (0..self.n)
            .map(|i| {
                (
                    format!("e{}", i + 1),
                    self.translation(&ColumnVec::basis(self.field, self.n, i, 1)),
                )
            })
            .collect();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    out.push((format!("b{}_{}", i + 1, j + 1), self.linear(self.elementary(i, j))));
                }
            }
        }
        if self.field.modulus() > 2 {
            for i in 0..self.n {
                out.push((format!("d{}", i + 1), self.linear(self.diagonal(i))));
            }
        }
        out
    }

    pub fn to_literal(&self, g: &AffineElem) -> AffineLiteral {
        AffineLiteral {
            v: Some(g.v.to_json()),
            b: Some(g.b.to_json()),
        }
    }

    pub fn from_literal(&self, lit: &AffineLiteral) -> Result<AffineElem> {
        let v = match &lit.v {
            None => ColumnVec::zero(self.field, self.n),
            Some(entries) if entries.len() == self.n => ColumnVec {
                entries: entries.iter().map(|c| DensePoly::from_i64(self.field, c)).collect(),
            },
            Some(entries) => {
                return Err(Error::Parse(format!(
                    "vector has {} entries, expected {}",
                    entries.len(),
                    self.n
                )))
            }
        };
        let b = match &lit.b {
            None => PolyMat::identity(self.field, self.n),
            Some(rows) => {
                if rows.len() != self.n {
                    return Err(Error::Parse(format!(
                        "matrix has {} rows, expected {}",
                        rows.len(),
                        self.n
                    )));
                }
                PolyMat::from_rows(
                    rows.iter()
                        .map(|row| row.iter().map(|c| DensePoly::from_i64(self.field, c)).collect())
                        .collect(),
                )?
            }
        };
        if !b.in_b(&DensePoly::x_minus_one(self.field)) {
            return Err(Error::Parse(
                "matrix is not in B: needs constant nonzero determinant and (x-1) above the diagonal".into(),
            ));
        }
        Ok(AffineElem { v, b })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaClosureReport {
    pub k: usize,
    pub samples: usize,
    pub samples_in_delta: bool,
    pub closed: bool,
    pub max_states: usize,
}

impl DeltaClosureReport {
    pub fn ok(&self) -> bool {
        self.samples_in_delta && self.closed
    }
}

impl SelfSimilar for AffineInstance {
    type Elem = AffineElem;

    fn degree(&self) -> usize {
        self.field.modulus() as usize
    }

    fn identity(&self) -> AffineElem {
        self.linear(PolyMat::identity(self.field, self.n))
    }

    /// (v_1, b_1)(v_2, b_2) = (v_1 + b_1 v_2, b_1 b_2).
    fn mul(&self, a: &AffineElem, b: &AffineElem) -> AffineElem {
        AffineElem {
            v: a.v.add(&a.b.mul_vec(&b.v)),
            b: a.b.mul(&b.b),
        }
    }

    fn inv(&self, a: &AffineElem) -> AffineElem {
        let binv = a.b.inverse().expect("elements of B are invertible");
        AffineElem {
            v: binv.mul_vec(&a.v).neg(),
            b: binv,
        }
    }

    fn transversal(&self) -> &[AffineElem] {
        &self.transversal
    }

    fn transversal_inv(&self) -> &[AffineElem] {
        &self.transversal_inv
    }

    fn h_member(&self, g: &AffineElem) -> bool {
        g.v.entries[0].eval_at_one() == 0
    }

    fn endo(&self, g: &AffineElem) -> Result<AffineElem> {
        let v = apply_a(&g.v).map_err(|_| Error::NotInH(self.render(g)))?;
        Ok(AffineElem { v, b: conj_by_a(&g.b)? })
    }

    /// H (v, b) = H (αe_1, I) with α = v_1(1)·b_{1,1}(1)^{-1}.
    fn coset_index(&self, g: &AffineElem) -> Result<usize> {
        let f = self.field;
        let b11 = f
            .inv(g.b.get(0, 0).eval_at_one())
            .ok_or_else(|| Error::ContractViolation("b_11(1) = 0 for an element of B".into()))?;
        Ok(f.mul(g.v.entries[0].eval_at_one(), b11) as usize)
    }

    fn render(&self, g: &AffineElem) -> String {
        if *g == self.identity() {
            return join_tokens(Vec::new());
        }
        let mut lit = self.to_literal(g);
        if g.v.is_zero() {
            lit.v = None;
        }
        if g.b == PolyMat::identity(self.field, self.n) {
            lit.b = None;
        }
        serde_json::to_string(&lit).expect("plain data serializes")
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> AffineElem {
        let n = self.n;
        let mut b = PolyMat::identity(self.field, n);
        for _ in 0..rng.gen_range(1..=4) {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let mut c = random_poly(self.field, 1, rng);
            if i < j {
                c = c.mul(&DensePoly::x_minus_one(self.field));
            }
            b = b.mul(&PolyMat::elementary(self.field, n, i, j, c));
        }
        if self.field.modulus() > 2 && rng.gen_bool(0.5) {
            b = b.mul(&self.diagonal(rng.gen_range(0..n)));
        }
        let v = ColumnVec {
            entries: (0..n).map(|_| random_poly(self.field, 2, rng)).collect(),
        };
        AffineElem { v, b }
    }

    fn generators(&self) -> Vec<(String, AffineElem)> {
        self.generator_sample()
    }
}

impl ElementSyntax for AffineInstance {
    fn named(&self, name: &str) -> Option<AffineElem> {
        let looks_named = parse_index(name, "e").is_some() || name.starts_with('b') || name.starts_with('d');
        if !looks_named {
            return None;
        }
        self.generator_sample()
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g)
    }

    fn literal(&self, json: &Value) -> Result<AffineElem> {
        let lit: AffineLiteral = serde_json::from_value(json.clone())?;
        self.from_literal(&lit)
    }
}
