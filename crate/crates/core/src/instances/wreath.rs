//! C_p ≀ Z^d = A ⋊ Q with A = F_p[Q], and its localization Ã ⋊ Q̃ where
//! Ã = A·S^{-1}, S generated by s_i = g(x_i), and Q̃ = Q × ⟨y_1, …, y_d⟩ with
//! y_i acting by multiplication with s_i.
//!
//! An element (r, q, k) stands for a^r·x^q·y^k. H = A_0 ⋊ Q_0 (base) or
//! A_0 S^{-1} ⋊ Q̃_0 (localized), with A_0 the augmentation ideal,
//! Q_0 = ⟨x_1^p, x_2, …⟩ and Q̃_0 = Q_0 × ⟨y_1^p, y_2, …⟩.

use rand::{Rng, RngCore};

use super::{join_tokens, parse_index, power_token, ElementSyntax};
use crate::engine::SelfSimilar;
use crate::error::{Error, Result};
use crate::ring::expr::parse_eval;
use crate::ring::multilocal::check_localizing_poly;
use crate::ring::{DensePoly, MultiLaurent, MultiLocalRing, MultiSFraction, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElem {
    pub r: MultiSFraction,
    pub q: Vec<i64>,
    /// y-exponents; always zero for the base group.
    pub k: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct WreathInstance {
    ring: MultiLocalRing,
    d: usize,
    transversal: Vec<WreathElem>,
    transversal_inv: Vec<WreathElem>,
}

impl WreathInstance {
    /// C_p ≀ Z^d.
    pub fn base(p: u64, d: usize) -> Result<Self> {
        let field = PrimeField::new(p)?;
        Self::build(MultiLocalRing::laurent(field, Self::check_rank(d)?), d)
    }

    /// The localization by s_i = g(x_i).
    pub fn localized(p: u64, d: usize, g: &[i64]) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let g = DensePoly::from_i64(field, g);
        if let Some(why) = check_localizing_poly(&g) {
            return Err(Error::InvalidConfig(why));
        }
        Self::build(MultiLocalRing::localized(field, Self::check_rank(d)?, g)?, d)
    }

    fn check_rank(d: usize) -> Result<usize> {
        if d == 0 {
            return Err(Error::InvalidConfig("wreath family needs d >= 1".into()));
        }
        Ok(d)
    }

    fn build(ring: MultiLocalRing, d: usize) -> Result<Self> {
        let p = ring.field().modulus() as i64;
        let ys = if ring.is_localized() { p } else { 1 };
        let mut out = Self {
            ring,
            d,
            transversal: Vec::new(),
            transversal_inv: Vec::new(),
        };
        let mut t = Vec::new();
        for l in 0..ys {
            for j in 0..p {
                for i in 0..p {
                    let mut q = vec![0; d];
                    let mut k = vec![0; d];
                    q[0] = j;
                    k[0] = l;
                    t.push(WreathElem {
                        r: out.ring.constant(i),
                        q,
                        k,
                    });
                }
            }
        }
        out.transversal_inv = t.iter().map(|g| out.inv(g)).collect();
        out.transversal = t;
        Ok(out)
    }

    pub fn ring(&self) -> &MultiLocalRing {
        &self.ring
    }

    pub fn field(&self) -> PrimeField {
        self.ring.field()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_localized(&self) -> bool {
        self.ring.is_localized()
    }

    fn p(&self) -> i64 {
        self.field().modulus() as i64
    }

    pub fn a_pow(&self, r: MultiSFraction) -> WreathElem {
        WreathElem {
            r,
            q: vec![0; self.d],
            k: vec![0; self.d],
        }
    }

    pub fn a(&self) -> WreathElem {
        self.a_pow(self.ring.one())
    }

    /// x_{i+1}^e (zero-based i).
    pub fn x(&self, i: usize, e: i64) -> WreathElem {
        let mut g = self.a_pow(self.ring.zero());
        g.q[i] = e;
        g
    }

    /// y_{i+1}^e (zero-based i).
    pub fn y(&self, i: usize, e: i64) -> WreathElem {
        let mut g = self.a_pow(self.ring.zero());
        g.k[i] = e;
        g
    }

    /// The exponent map on Q_0: x_1^p ↦ x_2, x_i ↦ x_{i+1}, x_d ↦ x_1.
    fn sigma(&self, z: &[i64]) -> Vec<i64> {
        let d = self.d;
        let mut out = vec![0; d];
        out[1 % d] += z[0] / self.p();
        for i in 1..d {
            out[(i + 1) % d] += z[i];
        }
        out
    }

    /// f on the augmentation ideal: Σ c_q x^q ↦ Σ c_q·i_q·x^{σ(q − i_q e_1)},
    /// i_q = q_1 mod p; the linear extension of a^{z x_1^i − 1} ↦ a^{i σ(z)}.
    fn f_augmentation(&self, a: &MultiLaurent) -> MultiLaurent {
        let field = self.field();
        let p = self.p();
        let mut out = MultiLaurent::zero(field, self.d);
        for (e, &c) in a.terms() {
            let i = e[0].rem_euclid(p);
            if i == 0 {
                continue;
            }
            let mut z = e.clone();
            z[0] -= i;
            out = out.add(&MultiLaurent::monomial(field, self.sigma(&z), c as i64 * i));
        }
        out
    }

    fn in_q0(&self, q: &[i64]) -> bool {
        q[0].rem_euclid(self.p()) == 0
    }

    fn check_h(&self, g: &WreathElem) -> Result<()> {
        if !self.h_member(g) {
            return Err(Error::NotInH(self.render(g)));
        }
        Ok(())
    }

    /// f̃ with the admissible choice s_1 = g(x_1)^{κ} ∏ s_i^{extra_i}, κ minimal.
    /// `extra[0]` must be a multiple of p for s_1 to stay admissible.
    pub fn endo_with_choice(&self, g: &WreathElem, extra: &[u32]) -> Result<WreathElem> {
        self.check_h(g)?;
        if extra.first().is_some_and(|&e| e as i64 % self.p() != 0) {
            return Err(Error::Precondition(
                "extra g(x1)-exponent must be a multiple of p".into(),
            ));
        }
        let p = self.p();
        let z = g.r.den_exps();
        let kappa = (-(z[0] as i64)).rem_euclid(p);
        let mut s1 = vec![0i64; self.d];
        s1[0] = kappa;
        for (slot, &e) in s1.iter_mut().zip(extra) {
            *slot += e as i64;
        }
        let lifted = self.ring.mul_s_powers(&self.ring.from_laurent(g.r.num().clone()), &s1);
        let w: Vec<i64> = z.iter().zip(&s1).map(|(&zi, &si)| zi as i64 + si).collect();
        let num = self.f_augmentation(lifted.num());
        let den: Vec<u32> = self.sigma(&w).into_iter().map(|e| e as u32).collect();
        let r = if self.is_localized() {
            self.ring.canonicalize(num, den)
        } else {
            self.ring.from_laurent(num)
        };
        Ok(WreathElem {
            r,
            q: self.sigma(&g.q),
            k: self.sigma(&g.k),
        })
    }

    /// a^r·x^q·y^k with r ∈ Ã.
    pub fn from_parts(&self, r: MultiSFraction, q: Vec<i64>, k: Vec<i64>) -> Result<WreathElem> {
        if q.len() != self.d || k.len() != self.d {
            return Err(Error::Parse(format!("exponent vectors must have length {}", self.d)));
        }
        if !self.is_localized() && k.iter().any(|&e| e != 0) {
            return Err(Error::Parse("y generators only exist in the localized group".into()));
        }
        Ok(WreathElem { r, q, k })
    }
}

impl SelfSimilar for WreathInstance {
    type Elem = WreathElem;

    fn degree(&self) -> usize {
        self.transversal.len()
    }

    fn identity(&self) -> WreathElem {
        self.a_pow(self.ring.zero())
    }

    /// (r_1, q_1, k_1)(r_2, q_2, k_2) = (r_1 + r_2 φ_1^{-1}, q_1 + q_2, k_1 + k_2),
    /// φ = x^q ∏ s_i^{k_i}.
    fn mul(&self, a: &WreathElem, b: &WreathElem) -> WreathElem {
        let neg_q: Vec<i64> = a.q.iter().map(|e| -e).collect();
        let neg_k: Vec<i64> = a.k.iter().map(|e| -e).collect();
        let r = if b.r.is_zero() {
            a.r.clone()
        } else {
            self.ring.add(&a.r, &self.ring.mul_unit(&b.r, &neg_q, &neg_k))
        };
        WreathElem {
            r,
            q: a.q.iter().zip(&b.q).map(|(x, y)| x + y).collect(),
            k: a.k.iter().zip(&b.k).map(|(x, y)| x + y).collect(),
        }
    }

    fn inv(&self, a: &WreathElem) -> WreathElem {
        WreathElem {
            r: self.ring.neg(&self.ring.mul_unit(&a.r, &a.q, &a.k)),
            q: a.q.iter().map(|e| -e).collect(),
            k: a.k.iter().map(|e| -e).collect(),
        }
    }

    fn transversal(&self) -> &[WreathElem] {
        &self.transversal
    }

    fn transversal_inv(&self) -> &[WreathElem] {
        &self.transversal_inv
    }

    fn h_member(&self, g: &WreathElem) -> bool {
        self.ring.in_augmentation_ideal(&g.r) && self.in_q0(&g.q) && self.in_q0(&g.k)
    }

    fn endo(&self, g: &WreathElem) -> Result<WreathElem> {
        self.endo_with_choice(g, &[])
    }

    /// Index i + p(j + p·l) of a^i x_1^j y_1^l: j = q_1, l = k_1 mod p and
    /// i = r(1)·g(1)^{Σk − l}.
    fn coset_index(&self, g: &WreathElem) -> Result<usize> {
        let f = self.field();
        let p = self.p();
        let j = g.q[0].rem_euclid(p);
        let l = g.k[0].rem_euclid(p);
        let r1 = self.ring.eval_at_ones(&g.r)?;
        let g1 = self.ring.g().map(|g| g.eval_at_one()).unwrap_or(1);
        let e: i64 = g.k.iter().sum::<i64>() - l;
        let scale = f
            .pow_signed(g1, e)
            .ok_or_else(|| Error::DenominatorVanishes("g(1) = 0".into()))?;
        let i = f.mul(r1, scale) as i64;
        Ok((i + p * (j + p * l)) as usize)
    }

    fn render(&self, g: &WreathElem) -> String {
        let mut tokens = Vec::new();
        if !g.r.is_zero() {
            if g.r == self.ring.one() {
                tokens.push("a".to_string());
            } else {
                tokens.push(format!("a^({})", self.ring.display(&g.r)));
            }
        }
        for (i, &e) in g.q.iter().enumerate() {
            tokens.extend(power_token(&format!("x{}", i + 1), e));
        }
        for (i, &e) in g.k.iter().enumerate() {
            tokens.extend(power_token(&format!("y{}", i + 1), e));
        }
        join_tokens(tokens)
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> WreathElem {
        let field = self.field();
        let mut num = MultiLaurent::zero(field, self.d);
        for _ in 0..rng.gen_range(1..=3) {
            let e = (0..self.d).map(|_| rng.gen_range(-2..=2)).collect();
            num = num.add(&MultiLaurent::monomial(field, e, rng.gen_range(1..self.p())));
        }
        let localized = self.is_localized();
        let den = (0..self.d).map(|_| u32::from(localized && rng.gen_bool(0.3))).collect();
        WreathElem {
            r: self.ring.canonicalize(num, den),
            q: (0..self.d).map(|_| rng.gen_range(-2..=2)).collect(),
            k: (0..self.d)
                .map(|_| if localized { rng.gen_range(-1..=1) } else { 0 })
                .collect(),
        }
    }

    fn generators(&self) -> Vec<(String, WreathElem)> {
        let mut out = vec![("a".to_string(), self.a())];
        out.extend((0..self.d).map(|i| (format!("x{}", i + 1), self.x(i, 1))));
        if self.is_localized() {
            out.extend((0..self.d).map(|i| (format!("y{}", i + 1), self.y(i, 1))));
        }
        out
    }
}

impl ElementSyntax for WreathInstance {
    fn named(&self, name: &str) -> Option<WreathElem> {
        if name == "a" {
            return Some(self.a());
        }
        let valid = |i: usize| (1..=self.d).contains(&i);
        if let Some(i) = parse_index(name, "x").filter(|&i| valid(i)) {
            return Some(self.x(i - 1, 1));
        }
        if self.is_localized() {
            if let Some(i) = parse_index(name, "y").filter(|&i| valid(i)) {
                return Some(self.y(i - 1, 1));
            }
        }
        None
    }

    fn ring_power(&self, base: &str, expr: &str) -> Result<WreathElem> {
        if base != "a" {
            return Err(Error::Parse(format!("ring exponent only applies to a, not {base:?}")));
        }
        Ok(self.a_pow(parse_eval(&self.ring, expr)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endo_on_basis_elements() {
        let inst = WreathInstance::base(3, 3).unwrap();
        let f = inst.field();
        let one = MultiLaurent::one(f, 3);
        let x = |e: Vec<i64>| MultiLaurent::monomial(f, e, 1);
        let elem = |a: MultiLaurent| inst.a_pow(inst.ring().from_laurent(a));
        // a^{x_1 - 1} ↦ a
        let g = elem(x(vec![1, 0, 0]).sub(&one));
        assert_eq!(inst.endo(&g).unwrap(), inst.a());
        // a^{x_2 - 1} ↦ 1
        let g = elem(x(vec![0, 1, 0]).sub(&one));
        assert_eq!(inst.endo(&g).unwrap(), inst.identity());
        // a^{x_2 x_1 - 1} ↦ a^{x_3}
        let g = elem(x(vec![1, 1, 0]).sub(&one));
        assert_eq!(inst.endo(&g).unwrap(), elem(x(vec![0, 0, 1])));
        // x_1^p ↦ x_2, x_3 ↦ x_1
        assert_eq!(inst.endo(&inst.x(0, 3)).unwrap(), inst.x(1, 1));
        assert_eq!(inst.endo(&inst.x(2, 1)).unwrap(), inst.x(0, 1));
    }

    #[test]
    fn degrees() {
        assert_eq!(WreathInstance::base(2, 2).unwrap().degree(), 4);
        assert_eq!(WreathInstance::localized(2, 2, &[1, 1, 1]).unwrap().degree(), 8);
        assert!(WreathInstance::localized(2, 2, &[0, 0, 1]).is_err());
        assert!(WreathInstance::localized(2, 2, &[1, 1]).is_err());
    }

    #[test]
    fn localized_trace() {
        // a^{x_1 - 1}/g(x_1)^2 with κ = 0 ↦ a/g(x_2)
        let inst = WreathInstance::localized(2, 2, &[1, 1, 1]).unwrap();
        let f = inst.field();
        let num = MultiLaurent::var(f, 2, 0).sub(&MultiLaurent::one(f, 2));
        let g = inst.a_pow(inst.ring().canonicalize(num, vec![2, 0]));
        let expected = inst.a_pow(inst.ring().canonicalize(MultiLaurent::one(f, 2), vec![0, 1]));
        assert_eq!(inst.endo(&g).unwrap(), expected);
    }
}
