//! G = B(A)/Z with B(A) = N ⋊ Q the upper triangular matrices over
//! A = F_p[x^{±1}, 1/f_1, …, 1/f_{n-1}], N unitriangular, Q diagonal units.
//!
//! Elements are stored as g = N·D with d_1 = 1, a unique representative of the
//! class modulo scalar matrices. H = N_0 ⋊ Q where N_0 has (i,j) entry in
//! I^{j−i}, I = gA (g = x − 1 by default), and f divides entry (i,j) by g^{j−i}.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{join_tokens, random_sfraction, random_unit, ElementSyntax};
use crate::engine::{decompose, states_bfs, BfsOutcome, SelfSimilar};
use crate::error::{Error, Result};
use crate::matrix::{tri_inverse, DiagEntry, DiagMat, TriMat};
use crate::ring::{validate_config, DensePoly, FractionJson, LocalRing, PrimeField, SFraction};

/// Largest transversal enumerated.
pub const MAX_TRANSVERSAL: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BorelElem {
    pub n: TriMat,
    pub d: DiagMat,
}

/// A matrix entry in literals: a coefficient array, or a fraction object.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Poly(Vec<i64>),
    Frac(FractionJson),
}

/// JSON literal: {"n": rows of entries (unitriangular), "d": [{"unit", "exps"}, …]}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BorelLiteral {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<Vec<EntryJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<DiagEntry>>,
}

#[derive(Clone, Debug)]
pub struct BorelInstance {
    ring: LocalRing,
    m: usize,
    /// Upper positions (i, j), row-major, with their residue-degree bound (j−i)·deg g.
    positions: Vec<(usize, usize, usize)>,
    transversal: Vec<BorelElem>,
    transversal_inv: Vec<BorelElem>,
    fast_index: bool,
}

impl BorelInstance {
    pub fn new(p: u64, m: usize, polys: &[Vec<i64>]) -> Result<Self> {
        Self::with_ideal(p, m, polys, None)
    }

    /// `ideal` replaces x − 1 by another monic irreducible polynomial coprime
    /// to every f_i.
    pub fn with_ideal(p: u64, m: usize, polys: &[Vec<i64>], ideal: Option<&[i64]>) -> Result<Self> {
        let report = validate_config(p, polys);
        if !report.is_valid() {
            return Err(Error::InvalidConfig(serde_json::to_string(&report)?));
        }
        if m < 2 {
            return Err(Error::InvalidConfig(format!("borel family needs m >= 2, got {m}")));
        }
        let field = PrimeField::new(p)?;
        let extra: Vec<DensePoly> = polys[1..].iter().map(|c| DensePoly::from_i64(field, c)).collect();
        let mut ring = LocalRing::new(field, extra);
        if let Some(coeffs) = ideal {
            let g = DensePoly::from_i64(field, coeffs);
            if g.is_constant() || !g.is_monic() || !g.is_irreducible() {
                return Err(Error::InvalidConfig(format!(
                    "ideal generator {g} must be monic, irreducible, nonconstant"
                )));
            }
            if ring.basis().iter().any(|f| *f == g) {
                return Err(Error::InvalidConfig(format!(
                    "ideal generator {g} is one of the inverted polynomials"
                )));
            }
            ring = ring.with_ideal(g);
        }
        let delta = ring.ideal().degree().expect("nonconstant ideal generator");
        let positions: Vec<(usize, usize, usize)> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j, (j - i) * delta)))
            .collect();
        let exponent: u32 = positions.iter().map(|&(_, _, b)| b as u32).sum();
        let size = p
            .checked_pow(exponent)
            .filter(|&s| s <= MAX_TRANSVERSAL)
            .ok_or_else(|| {
                Error::BoundExceeded(format!("transversal size {p}^{exponent} exceeds {MAX_TRANSVERSAL}"))
            })?;
        let mut out = Self {
            ring,
            m,
            positions,
            transversal: Vec::new(),
            transversal_inv: Vec::new(),
            fast_index: true,
        };
        let t: Vec<BorelElem> = (0..size).map(|k| out.transversal_element(k)).collect();
        out.transversal_inv = t.iter().map(|g| out.inv(g)).collect();
        out.transversal = t;
        Ok(out)
    }

    /// Use the exhaustive coset search instead of the superdiagonal reduction.
    pub fn with_exhaustive_index(mut self) -> Self {
        self.fast_index = false;
        self
    }

    pub fn ring(&self) -> &LocalRing {
        &self.ring
    }

    pub fn field(&self) -> PrimeField {
        self.ring.field()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// l = Σ_{1≤i≤m} i(m−i) times deg g, so that the degree is p^l.
    pub fn level_exponent(&self) -> usize {
        self.positions.iter().map(|&(_, _, b)| b).sum()
    }

    fn transversal_element(&self, mut k: u64) -> BorelElem {
        let p = self.field().modulus() as u64;
        let mut n = TriMat::identity(&self.ring, self.m);
        for &(i, j, bound) in &self.positions {
            let coeffs = (0..bound)
                .map(|_| {
                    let c = (k % p) as u32;
                    k /= p;
                    c
                })
                .collect();
            n.set(i, j, self.ring.from_poly(DensePoly::from_raw(self.field(), coeffs)));
        }
        BorelElem {
            n,
            d: DiagMat::identity(self.m, self.ring.rank()),
        }
    }

    fn transversal_position(&self, t: &TriMat) -> u64 {
        let p = self.field().modulus() as u64;
        let mut k = 0u64;
        let mut scale = 1u64;
        for &(i, j, bound) in &self.positions {
            let poly = t.get(i, j).num();
            for e in 0..bound {
                k += poly.coeff(e) as u64 * scale;
                scale *= p;
            }
        }
        k
    }

    fn normalize(&self, n: TriMat, d: DiagMat) -> BorelElem {
        let first = d.entries[0].clone();
        let d = if first.is_one() {
            d
        } else {
            d.scaled_by_inverse(self.field(), &first)
        };
        BorelElem { n, d }
    }

    /// a·r for a diagonal ratio r.
    fn times_ratio(&self, a: &SFraction, r: DiagEntry) -> SFraction {
        if a.is_zero() || r.is_one() {
            a.clone()
        } else {
            self.ring.mul_unit(a, r.unit, &r.exps)
        }
    }

    /// D X D^{-1}: entry (i,j) times d_i/d_j.
    fn conj_diag(&self, d: &DiagMat, x: &TriMat) -> TriMat {
        x.map_upper(|i, j, a| {
            Ok(if i == j {
                a.clone()
            } else {
                self.times_ratio(a, d.ratio(self.field(), i, j))
            })
        })
        .expect("infallible")
    }

    pub fn from_parts(&self, n: TriMat, d: DiagMat) -> Result<BorelElem> {
        if n.size() != self.m || d.entries.len() != self.m || !n.is_unitriangular(&self.ring) {
            return Err(Error::Parse(
                "expected an m x m unitriangular matrix and m diagonal units".into(),
            ));
        }
        if d.entries
            .iter()
            .any(|e| e.exps.len() != self.ring.rank() || self.field().reduce(e.unit as i64) == 0)
        {
            return Err(Error::Parse(
                "diagonal units need a nonzero unit and one exponent per polynomial".into(),
            ));
        }
        let d = DiagMat {
            entries: d
                .entries
                .into_iter()
                .map(|e| DiagEntry {
                    unit: self.field().reduce(e.unit as i64),
                    exps: e.exps,
                })
                .collect(),
        };
        Ok(self.normalize(n, d))
    }

    /// u_i = I + E_{i,i+1} (1-based i).
    pub fn u(&self, i: usize) -> BorelElem {
        let mut n = TriMat::identity(&self.ring, self.m);
        n.set(i - 1, i, self.ring.one());
        self.normalize(n, DiagMat::identity(self.m, self.ring.rank()))
    }

    /// x_k^{(s)}: the diagonal matrix with f_s in place k (1-based k).
    pub fn x(&self, k: usize, s: usize) -> BorelElem {
        let mut d = DiagMat::identity(self.m, self.ring.rank());
        d.entries[k - 1].exps[s] = 1;
        self.normalize(TriMat::identity(&self.ring, self.m), d)
    }

    /// Every t ∈ T has t^{-1} ∈ T.
    pub fn claim1_check(&self) -> Result<bool> {
        for t in &self.transversal {
            let inv = tri_inverse(&self.ring, &t.n)?;
            for &(i, j, bound) in &self.positions {
                let ok = inv
                    .get(i, j)
                    .as_poly()
                    .is_some_and(|q| q.degree().is_none_or(|d| d < bound));
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// |Δ_k^{(s)}| = p^{(deg f_s + 1)·m(m−1)/2}.
    pub fn delta_size(&self, s: usize) -> u64 {
        let deg = self.ring.basis()[s].degree().expect("nonconstant") as u32;
        let pairs = (self.m * (self.m - 1) / 2) as u32;
        (self.field().modulus() as u64).saturating_pow((deg + 1) * pairs)
    }

    /// Membership in Δ_k^{(s)} (1-based k) modulo the center: some scalar
    /// multiple of g has diagonal (1, …, f_s, …, 1) and polynomial entries of
    /// degree ≤ deg f_s above it.
    pub fn in_delta(&self, k: usize, s: usize, g: &BorelElem) -> bool {
        let f = self.field();
        let rank = self.ring.rank();
        let target = |i: usize| {
            let mut e = DiagEntry::one(rank);
            if i == k - 1 {
                e.exps[s] = 1;
            }
            e
        };
        let lambda = target(0).mul(f, &g.d.entries[0].inv(f));
        if (0..self.m).any(|i| lambda.mul(f, &g.d.entries[i]) != target(i)) {
            return false;
        }
        let deg = self.ring.basis()[s].degree().expect("nonconstant");
        self.positions.iter().all(|&(i, j, _)| {
            let scale = lambda.mul(f, &g.d.entries[j]).to_fraction(&self.ring);
            let a = self.ring.mul(g.n.get(i, j), &scale);
            a.as_poly().is_some_and(|q| q.degree().is_none_or(|d| d <= deg))
        })
    }

    /// BFS from x_k^{(s)} with cap |Δ_k^{(s)}|; every state must lie in Δ_k^{(s)}.
    pub fn claim2_check(&self, k: usize, s: usize) -> Result<Claim2Report> {
        let cap = self.delta_size(s).min(usize::MAX as u64) as usize;
        let g = self.x(k, s);
        let (states, closed) = match states_bfs(self, &g, cap)? {
            BfsOutcome::Finite(a) => (a.len(), a.states.iter().all(|q| self.in_delta(k, s, q))),
            BfsOutcome::CapExceeded { explored, frontier } => (explored + frontier, false),
        };
        Ok(Claim2Report {
            k,
            s,
            cap,
            start_in_delta: self.in_delta(k, s, &g),
            states,
            closed,
        })
    }

    /// T u_i = T, so every state of u_i is trivial.
    pub fn u_states_trivial(&self) -> Result<bool> {
        let e = self.identity();
        for i in 1..self.m {
            if decompose(self, &self.u(i))?.states.iter().any(|s| *s != e) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_literal(&self, g: &BorelElem) -> BorelLiteral {
        let rows = (0..self.m)
            .map(|i| {
                (0..self.m)
                    .map(|j| {
                        let a = if j < i { self.ring.zero() } else { g.n.get(i, j).clone() };
                        match a.as_poly() {
                            Some(q) => EntryJson::Poly(q.to_i64()),
                            None => EntryJson::Frac(self.ring.to_json(&a)),
                        }
                    })
                    .collect()
            })
            .collect();
        BorelLiteral {
            n: Some(rows),
            d: Some(g.d.entries.clone()),
        }
    }

    pub fn from_literal(&self, lit: &BorelLiteral) -> Result<BorelElem> {
        let mut n = TriMat::identity(&self.ring, self.m);
        if let Some(rows) = &lit.n {
            if rows.len() != self.m || rows.iter().any(|r| r.len() != self.m) {
                return Err(Error::Parse(format!("\"n\" must be {0} x {0}", self.m)));
            }
            for (i, row) in rows.iter().enumerate() {
                for (j, entry) in row.iter().enumerate() {
                    let a = match entry {
                        EntryJson::Poly(c) => self.ring.from_poly(DensePoly::from_i64(self.field(), c)),
                        EntryJson::Frac(fr) => self.ring.from_json(fr)?,
                    };
                    let expected_zero = j < i;
                    let expected_one = j == i;
                    if (expected_zero && !a.is_zero()) || (expected_one && a != self.ring.one()) {
                        return Err(Error::Parse("\"n\" must be unitriangular".into()));
                    }
                    if j > i {
                        n.set(i, j, a);
                    }
                }
            }
        }
        let d = match &lit.d {
            Some(entries) => DiagMat {
                entries: entries
                    .iter()
                    .map(|e| {
                        let mut e = e.clone();
                        e.exps.resize(self.ring.rank(), 0);
                        e
                    })
                    .collect(),
            },
            None => DiagMat::identity(self.m, self.ring.rank()),
        };
        self.from_parts(n, d)
    }

    /// M = D^{-1} N D factored as n·t, n ∈ N_0 and t ∈ T, one superdiagonal at a time.
    fn fast_coset_index(&self, g: &BorelElem) -> Result<usize> {
        let f = self.field();
        let m = self.m;
        let mtx = g.n.map_upper(|i, j, a| {
            Ok(if i == j {
                a.clone()
            } else {
                self.times_ratio(a, g.d.ratio(f, j, i))
            })
        })?;
        let mut nn = TriMat::identity(&self.ring, m);
        let mut t = TriMat::identity(&self.ring, m);
        for d in 1..m {
            for i in 0..m - d {
                let j = i + d;
                let mut r = mtx.get(i, j).clone();
                for k in i + 1..j {
                    r = self.ring.sub(&r, &self.ring.mul(nn.get(i, k), t.get(k, j)));
                }
                let tij = self.ring.from_poly(self.ring.residue(&r, d as u32)?);
                nn.set(i, j, self.ring.sub(&r, &tij));
                t.set(i, j, tij);
            }
        }
        Ok(self.transversal_position(&t) as usize)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim2Report {
    pub k: usize,
    pub s: usize,
    pub cap: usize,
    pub start_in_delta: bool,
    pub states: usize,
    pub closed: bool,
}

impl Claim2Report {
    pub fn ok(&self) -> bool {
        self.start_in_delta && self.closed
    }
}

impl SelfSimilar for BorelInstance {
    type Elem = BorelElem;

    fn degree(&self) -> usize {
        self.transversal.len()
    }

    fn identity(&self) -> BorelElem {
        BorelElem {
            n: TriMat::identity(&self.ring, self.m),
            d: DiagMat::identity(self.m, self.ring.rank()),
        }
    }

    /// N_1 D_1 N_2 D_2 = N_1 (D_1 N_2 D_1^{-1}) · D_1 D_2.
    fn mul(&self, a: &BorelElem, b: &BorelElem) -> BorelElem {
        let n = a.n.mul(&self.ring, &self.conj_diag(&a.d, &b.n));
        self.normalize(n, a.d.mul(self.field(), &b.d))
    }

    /// (ND)^{-1} = (D^{-1} N^{-1} D) · D^{-1}.
    fn inv(&self, a: &BorelElem) -> BorelElem {
        let ninv = tri_inverse(&self.ring, &a.n).expect("unitriangular");
        let dinv = a.d.inv(self.field());
        self.normalize(self.conj_diag(&dinv, &ninv), dinv)
    }

    fn transversal(&self) -> &[BorelElem] {
        &self.transversal
    }

    fn transversal_inv(&self) -> &[BorelElem] {
        &self.transversal_inv
    }

    fn h_member(&self, g: &BorelElem) -> bool {
        self.positions
            .iter()
            .all(|&(i, j, _)| self.ring.in_ideal_power(g.n.get(i, j), (j - i) as u32))
    }

    fn endo(&self, g: &BorelElem) -> Result<BorelElem> {
        let n =
            g.n.map_upper(|i, j, a| {
                if i == j {
                    Ok(a.clone())
                } else {
                    self.ring.divide_exact(a, (j - i) as u32)
                }
            })
            .map_err(|_| Error::NotInH(self.render(g)))?;
        Ok(BorelElem { n, d: g.d.clone() })
    }

    fn coset_index(&self, g: &BorelElem) -> Result<usize> {
        if self.fast_index {
            self.fast_coset_index(g)
        } else {
            crate::engine::exhaustive_coset_index(self, g)
        }
    }

    fn render(&self, g: &BorelElem) -> String {
        if *g == self.identity() {
            return join_tokens(Vec::new());
        }
        let mut lit = self.to_literal(g);
        if g.n.is_identity(&self.ring) {
            lit.n = None;
        }
        if g.d == DiagMat::identity(self.m, self.ring.rank()) {
            lit.d = None;
        }
        serde_json::to_string(&lit).expect("plain data serializes")
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> BorelElem {
        let upper: Vec<SFraction> = (0..self.positions.len())
            .map(|_| {
                if rng.gen_bool(0.3) {
                    self.ring.zero()
                } else {
                    random_sfraction(&self.ring, 2, rng)
                }
            })
            .collect();
        let n = TriMat::unitriangular(&self.ring, self.m, upper);
        let d = DiagMat {
            entries: (0..self.m)
                .map(|_| {
                    let (unit, exps) = random_unit(&self.ring, rng);
                    DiagEntry { unit, exps }
                })
                .collect(),
        };
        self.normalize(n, d)
    }

    fn generators(&self) -> Vec<(String, BorelElem)> {
        let mut out: Vec<(String, BorelElem)> = (1..self.m).map(|i| (format!("u{i}"), self.u(i))).collect();
        for k in 1..=self.m {
            for s in 0..self.ring.rank() {
                out.push((format!("x{k}_{s}"), self.x(k, s)));
            }
        }
        out
    }
}

impl ElementSyntax for BorelInstance {
    /// `u{i}`, and `x{k}_{s}` (also written `x{k}s{s}`) for x_k^{(s)}.
    fn named(&self, name: &str) -> Option<BorelElem> {
        if let Some(i) = super::parse_index(name, "u") {
            return (1..self.m).contains(&i).then(|| self.u(i));
        }
        let rest = name.strip_prefix('x')?;
        let (k, s) = rest.split_once('_').or_else(|| rest.split_once('s'))?;
        let k: usize = k.parse().ok()?;
        let s: usize = s.parse().ok()?;
        ((1..=self.m).contains(&k) && s < self.ring.rank()).then(|| self.x(k, s))
    }

    fn literal(&self, json: &Value) -> Result<BorelElem> {
        let lit: BorelLiteral = serde_json::from_value(json.clone())?;
        self.from_literal(&lit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::exhaustive_coset_index;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn borel(m: usize) -> BorelInstance {
        BorelInstance::new(2, m, &[vec![0, 1], vec![1, 1, 1]]).unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(borel(2).degree(), 2);
        assert_eq!(borel(3).degree(), 16);
        assert_eq!(BorelInstance::new(3, 2, &[vec![0, 1]]).unwrap().degree(), 3);
    }

    #[test]
    fn h_membership_examples() {
        let inst = borel(3);
        let ring = inst.ring().clone();
        let mut n = TriMat::identity(&ring, 3);
        n.set(0, 2, ring.from_poly(DensePoly::x_minus_one(inst.field())));
        let g = inst.from_parts(n, DiagMat::identity(3, 2)).unwrap();
        assert!(!inst.h_member(&g));
        assert!(inst.h_member(&inst.identity()));
    }

    #[test]
    fn group_laws_and_center() {
        let inst = borel(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = inst.random_element(&mut rng);
            let b = inst.random_element(&mut rng);
            let c = inst.random_element(&mut rng);
            assert_eq!(inst.mul(&inst.mul(&a, &b), &c), inst.mul(&a, &inst.mul(&b, &c)));
            assert_eq!(inst.mul(&a, &inst.inv(&a)), inst.identity());
        }
        // A scalar matrix is the identity modulo the center.
        let mut d = DiagMat::identity(3, 2);
        for e in &mut d.entries {
            e.exps[1] = 1;
        }
        assert_eq!(
            inst.from_parts(TriMat::identity(inst.ring(), 3), d).unwrap(),
            inst.identity()
        );
    }

    #[test]
    fn fast_index_matches_search() {
        let inst = borel(3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let g = inst.random_element(&mut rng);
            assert_eq!(
                inst.coset_index(&g).unwrap(),
                exhaustive_coset_index(&inst, &g).unwrap()
            );
        }
    }
}
