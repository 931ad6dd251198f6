//! G = Ȧ ⋊ Q with A = F_p[x^{±1}, 1/f_1, …, 1/f_{n-1}], Q = Z^n acting by
//! multiplication with x = f_0, f_1, …. An element (r, q) stands for u^r·q.
//!
//! H = İ ⋊ Q with I = (x − 1)A, transversal {u^0, …, u^{p-1}} and
//! f(u^{(x−1)r} q) = u^r q.

use rand::{Rng, RngCore};
use serde::Serialize;

use super::{join_tokens, parse_index, power_token, random_sfraction, ElementSyntax};
use crate::engine::{decompose, states_bfs, BfsOutcome, Perm, SelfSimilar, WreathDecomp};
use crate::error::{Error, Result};
use crate::ring::expr::parse_eval;
use crate::ring::poly::polys_below_degree;
use crate::ring::{validate_config, DensePoly, LocalRing, PrimeField, SFraction};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LampElem {
    pub r: SFraction,
    pub q: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct LampInstance {
    ring: LocalRing,
    transversal: Vec<LampElem>,
    transversal_inv: Vec<LampElem>,
}

impl LampInstance {
    /// `polys` lists f_0 = x, f_1, … as ascending coefficient arrays; every
    /// f_i with i ≥ 1 must also satisfy f_i(1) = 1.
    pub fn new(p: u64, polys: &[Vec<i64>]) -> Result<Self> {
        let report = validate_config(p, polys);
        if !report.is_valid_for_lamplighter() {
            return Err(Error::InvalidConfig(serde_json::to_string(&report)?));
        }
        let field = PrimeField::new(p)?;
        let extra = polys[1..].iter().map(|c| DensePoly::from_i64(field, c)).collect();
        Ok(Self::from_ring(LocalRing::new(field, extra)))
    }

    fn from_ring(ring: LocalRing) -> Self {
        let n = ring.rank();
        let p = ring.field().modulus();
        let transversal: Vec<LampElem> = (0..p)
            .map(|i| LampElem {
                r: ring.constant(i as i64),
                q: vec![0; n],
            })
            .collect();
        let mut out = Self {
            ring,
            transversal: Vec::new(),
            transversal_inv: Vec::new(),
        };
        out.transversal_inv = transversal.iter().map(|t| out.inv(t)).collect();
        out.transversal = transversal;
        out
    }

    pub fn ring(&self) -> &LocalRing {
        &self.ring
    }

    pub fn field(&self) -> PrimeField {
        self.ring.field()
    }

    /// Number n of inverted polynomials, including f_0 = x.
    pub fn rank(&self) -> usize {
        self.ring.rank()
    }

    pub fn poly(&self, j: usize) -> &DensePoly {
        &self.ring.basis()[j]
    }

    /// u^r.
    pub fn u_pow(&self, r: SFraction) -> LampElem {
        LampElem {
            r,
            q: vec![0; self.rank()],
        }
    }

    pub fn u(&self) -> LampElem {
        self.u_pow(self.ring.one())
    }

    /// x_j^k.
    pub fn x_pow(&self, j: usize, k: i64) -> LampElem {
        let mut q = vec![0; self.rank()];
        q[j] = k;
        LampElem { r: self.ring.zero(), q }
    }

    /// u^λ x_j^{-1}.
    pub fn u_lambda_xinv(&self, lambda: &DensePoly, j: usize) -> LampElem {
        self.mul(&self.u_pow(self.ring.from_poly(lambda.clone())), &self.x_pow(j, -1))
    }

    fn phi_inv(&self, q: &[i64]) -> SFraction {
        let neg: Vec<i64> = q.iter().map(|e| -e).collect();
        self.ring.unit(1, &neg)
    }

    fn shift_perm(&self, by: u32) -> Perm {
        let p = self.field().modulus() as usize;
        Perm((0..p).map(|i| (i + by as usize) % p).collect())
    }

    /// (f_j − 1)/(x − 1) as a polynomial.
    fn quotient_fj(&self, j: usize) -> DensePoly {
        let f = self.field();
        self.poly(j)
            .sub(&DensePoly::one(f))
            .div_exact(&DensePoly::x_minus_one(f))
            .expect("f_j(1) = 1")
    }

    /// λ = (x − 1)λ̃ + λ(1).
    fn split_at_one(&self, lambda: &DensePoly) -> (DensePoly, u32) {
        let (q, r) = lambda
            .divrem(&DensePoly::x_minus_one(self.field()))
            .expect("x - 1 is nonzero");
        (q, r.coeff(0))
    }

    /// Closed-form wreath recursion for u^λ (λ polynomial), x_j^{±1} and
    /// u^λ x_j^{-1}; other shapes are unsupported.
    pub fn closed_form_decompose(&self, g: &LampElem) -> Result<WreathDecomp<LampElem>> {
        let field = self.field();
        let p = field.modulus();
        let nonzero: Vec<usize> = (0..self.rank()).filter(|&j| g.q[j] != 0).collect();
        let lambda = g.r.as_poly().cloned();
        match (nonzero.as_slice(), lambda) {
            // u^λ = (u^λ̃, …, u^λ̃) · u^{λ(1)}
            ([], Some(lambda)) => {
                let (tilde, at_one) = self.split_at_one(&lambda);
                let state = self.u_pow(self.ring.from_poly(tilde));
                Ok(WreathDecomp {
                    perm: self.shift_perm(at_one),
                    states: vec![state; p as usize],
                })
            }
            // x_j = (u^{-i(f_j^{-1} - 1)/(x-1)} x_j)_i
            (&[j], _) if g.q[j] == 1 && g.r.is_zero() => {
                let base = self.ring.mul(
                    &self.ring.from_poly(self.quotient_fj(j)),
                    &self.ring.unit(1, &self.x_pow(j, -1).q),
                );
                let states = (0..p)
                    .map(|i| LampElem {
                        r: self.ring.scale(&base, i),
                        q: g.q.clone(),
                    })
                    .collect();
                Ok(WreathDecomp {
                    perm: Perm::identity(p as usize),
                    states,
                })
            }
            // u^λ x_j^{-1} = (u^{λ̃ − ((i)σ)(f_j − 1)/(x − 1)} x_j^{-1})_i σ, σ = u^{λ(1)}
            (&[j], Some(lambda)) if g.q[j] == -1 => {
                let (tilde, at_one) = self.split_at_one(&lambda);
                let quot = self.quotient_fj(j);
                let perm = self.shift_perm(at_one);
                let states = (0..p as usize)
                    .map(|i| {
                        let c = perm.apply(i) as u32;
                        LampElem {
                            r: self.ring.from_poly(tilde.sub(&quot.scale(c))),
                            q: g.q.clone(),
                        }
                    })
                    .collect();
                Ok(WreathDecomp { perm, states })
            }
            _ => Err(Error::Unsupported(format!("no closed form for {}", self.render(g)))),
        }
    }

    /// The two power identities u^{x^i} = (u^{x^{i-1}+…+x+1}, …)·u and
    /// u^λ = (u^{(λ−λ(1))/(x−1)}, …)·u^{λ(1)}, as equalities of engine decompositions.
    pub fn power_identity_check(&self, i_max: usize, lambdas: &[DensePoly]) -> Result<bool> {
        let field = self.field();
        let p = field.modulus() as usize;
        for i in 1..=i_max {
            let g = self.u_pow(self.ring.from_poly(DensePoly::monomial(field, 1, i)));
            let geometric = (0..i).fold(DensePoly::zero(field), |acc, k| {
                acc.add(&DensePoly::monomial(field, 1, k))
            });
            let expected = WreathDecomp {
                perm: self.shift_perm(1),
                states: vec![self.u_pow(self.ring.from_poly(geometric)); p],
            };
            if decompose(self, &g)? != expected {
                return Ok(false);
            }
        }
        for lambda in lambdas {
            let g = self.u_pow(self.ring.from_poly(lambda.clone()));
            let at_one = lambda.eval_at_one();
            let tilde = lambda
                .sub(&DensePoly::constant(field, at_one as i64))
                .div_exact(&DensePoly::x_minus_one(field))
                .expect("λ − λ(1) vanishes at 1");
            let expected = WreathDecomp {
                perm: self.shift_perm(at_one),
                states: vec![self.u_pow(self.ring.from_poly(tilde)); p],
            };
            if decompose(self, &g)? != expected {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership in Y_j = {u^λ x_j^{-1} : λ ∈ F_p[x], deg λ ≤ deg f_j}.
    pub fn in_y(&self, j: usize, g: &LampElem) -> bool {
        let deg = self.poly(j).degree().expect("nonconstant");
        g.q == self.x_pow(j, -1).q && g.r.as_poly().is_some_and(|l| l.degree().is_none_or(|d| d <= deg))
    }

    /// BFS from every element of Y_j with cap |Y_j|; every state must stay in Y_j
    /// and every first-level state must have λ-degree below deg f_j.
    pub fn y_closure_check(&self, j: usize) -> Result<YClosureReport> {
        let field = self.field();
        let deg = self.poly(j).degree().expect("nonconstant");
        let cap = (field.modulus() as usize).pow(deg as u32 + 1);
        let mut report = YClosureReport {
            j,
            size: cap,
            starts: 0,
            max_states: 0,
            closed: true,
            first_step_degree_drop: true,
        };
        for lambda in polys_below_degree(field, deg + 1) {
            let g = self.u_lambda_xinv(&lambda, j);
            report.starts += 1;
            for s in &decompose(self, &g)?.states {
                let small = s.r.as_poly().is_some_and(|l| l.degree().is_none_or(|d| d < deg));
                report.first_step_degree_drop &= small;
            }
            match states_bfs(self, &g, cap)? {
                BfsOutcome::Finite(a) => {
                    report.max_states = report.max_states.max(a.len());
                    report.closed &= a.states.iter().all(|s| self.in_y(j, s));
                }
                BfsOutcome::CapExceeded { .. } => report.closed = false,
            }
        }
        Ok(report)
    }

    /// Samples g^{-1} h g ∈ H for h ∈ H.
    pub fn normality_sample(&self, rng: &mut dyn RngCore, samples: usize) -> bool {
        (0..samples).all(|_| {
            let g = self.random_element(rng);
            let x = self.random_element(rng);
            let j = self.coset_index(&x).expect("total coset index");
            let h = self.mul(&x, &self.transversal_inv[j]);
            self.h_member(&self.mul(&self.mul(&self.inv(&g), &h), &g))
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct YClosureReport {
    pub j: usize,
    pub size: usize,
    pub starts: usize,
    pub max_states: usize,
    pub closed: bool,
    pub first_step_degree_drop: bool,
}

impl YClosureReport {
    pub fn ok(&self) -> bool {
        self.closed && self.first_step_degree_drop
    }
}

impl SelfSimilar for LampInstance {
    type Elem = LampElem;

    fn degree(&self) -> usize {
        self.field().modulus() as usize
    }

    fn identity(&self) -> LampElem {
        self.u_pow(self.ring.zero())
    }

    /// (r_1, q_1)(r_2, q_2) = (r_1 + r_2 φ(q_1)^{-1}, q_1 + q_2), φ(q) = ∏ f_i^{q_i}.
    fn mul(&self, a: &LampElem, b: &LampElem) -> LampElem {
        let r = if b.r.is_zero() {
            a.r.clone()
        } else {
            self.ring.add(&a.r, &self.ring.mul(&b.r, &self.phi_inv(&a.q)))
        };
        LampElem {
            r,
            q: a.q.iter().zip(&b.q).map(|(x, y)| x + y).collect(),
        }
    }

    fn inv(&self, a: &LampElem) -> LampElem {
        let r = self.ring.mul(&self.ring.neg(&a.r), &self.ring.unit(1, &a.q));
        LampElem {
            r,
            q: a.q.iter().map(|e| -e).collect(),
        }
    }

    fn transversal(&self) -> &[LampElem] {
        &self.transversal
    }

    fn transversal_inv(&self) -> &[LampElem] {
        &self.transversal_inv
    }

    fn h_member(&self, g: &LampElem) -> bool {
        matches!(self.ring.eval_at_one(&g.r), Ok(0))
    }

    fn endo(&self, g: &LampElem) -> Result<LampElem> {
        let r = self
            .ring
            .divide_exact(&g.r, 1)
            .map_err(|_| Error::NotInH(self.render(g)))?;
        Ok(LampElem { r, q: g.q.clone() })
    }

    /// H u^r q = H u^{r(1)}, since φ(q)(1) = 1.
    fn coset_index(&self, g: &LampElem) -> Result<usize> {
        Ok(self.ring.eval_at_one(&g.r)? as usize)
    }

    fn render(&self, g: &LampElem) -> String {
        let mut tokens = Vec::new();
        if !g.r.is_zero() {
            if g.r == self.ring.one() {
                tokens.push("u".to_string());
            } else {
                tokens.push(format!("u^({})", self.ring.display(&g.r)));
            }
        }
        for (j, &k) in g.q.iter().enumerate() {
            tokens.extend(power_token(&format!("x{j}"), k));
        }
        join_tokens(tokens)
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> LampElem {
        LampElem {
            r: random_sfraction(&self.ring, 3, rng),
            q: (0..self.rank()).map(|_| rng.gen_range(-2..=2)).collect(),
        }
    }

    fn generators(&self) -> Vec<(String, LampElem)> {
        let mut out = vec![("u".to_string(), self.u())];
        out.extend((0..self.rank()).map(|j| (format!("x{j}"), self.x_pow(j, 1))));
        out
    }
}

impl ElementSyntax for LampInstance {
    fn named(&self, name: &str) -> Option<LampElem> {
        if name == "u" {
            return Some(self.u());
        }
        parse_index(name, "x")
            .filter(|&j| j < self.rank())
            .map(|j| self.x_pow(j, 1))
    }

    fn ring_power(&self, base: &str, expr: &str) -> Result<LampElem> {
        if base != "u" {
            return Err(Error::Parse(format!("ring exponent only applies to u, not {base:?}")));
        }
        Ok(self.u_pow(parse_eval(&self.ring, expr)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lamp2() -> LampInstance {
        LampInstance::new(2, &[vec![0, 1]]).unwrap()
    }

    #[test]
    fn u_is_the_cycle() {
        let inst = LampInstance::new(3, &[vec![0, 1]]).unwrap();
        let d = decompose(&inst, &inst.u()).unwrap();
        assert_eq!(d.perm.0, vec![1, 2, 0]);
        assert!(d.states.iter().all(|s| *s == inst.identity()));
    }

    #[test]
    fn x0_inverse_states() {
        let inst = lamp2();
        let g = inst.x_pow(0, -1);
        let d = decompose(&inst, &g).unwrap();
        assert!(d.perm.is_identity());
        assert_eq!(d.states[0], g);
        assert_eq!(d.states[1], inst.mul(&inst.inv(&inst.u()), &g));
    }

    #[test]
    fn rejects_value_at_one() {
        assert!(matches!(
            LampInstance::new(3, &[vec![0, 1], vec![1, 0, 1]]),
            Err(Error::InvalidConfig(_))
        ));
    }
}
