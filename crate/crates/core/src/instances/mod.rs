//! The four families: Borel groups over A, the affine group V ⋊ B(n, F_p[x]),
//! the metabelian lamplighter-type groups, and C_p ≀ Z^d with its localization.

pub mod affine;
pub mod borel;
pub mod config;
pub mod lamplighter;
pub mod wreath;

use rand::{Rng, RngCore};
use serde_json::Value;

use crate::engine::SelfSimilar;
use crate::error::{Error, Result};
use crate::ring::{DensePoly, LocalRing, PrimeField, SFraction};

pub use affine::{AffineElem, AffineInstance};
pub use borel::{BorelElem, BorelInstance};
pub use config::{AnyInstance, InstanceConfig};
pub use lamplighter::{LampElem, LampInstance};
pub use wreath::{WreathElem, WreathInstance};

/// Text syntax hooks used by the element expression parser.
pub trait ElementSyntax: SelfSimilar {
    /// A named generator such as `u`, `x0`, `a` or `u1`.
    fn named(&self, name: &str) -> Option<Self::Elem>;

    /// `base^(ring expression)`, for generators with ring-valued exponents.
    fn ring_power(&self, base: &str, _expr: &str) -> Result<Self::Elem> {
        Err(Error::Unsupported(format!("ring exponent on {base:?}")))
    }

    /// A JSON literal element, for the matrix families.
    fn literal(&self, _json: &Value) -> Result<Self::Elem> {
        Err(Error::Unsupported("element literals".into()))
    }
}

/// g^k by repeated squaring; negative k inverts first.
pub fn power<I: SelfSimilar + ?Sized>(inst: &I, g: &I::Elem, k: i64) -> I::Elem {
    let mut base = if k < 0 { inst.inv(g) } else { g.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = inst.identity();
    while e > 0 {
        if e & 1 == 1 {
            acc = inst.mul(&acc, &base);
        }
        base = inst.mul(&base, &base);
        e >>= 1;
    }
    acc
}

/// Product of a word of group elements, left to right.
pub fn product<'a, I: SelfSimilar + ?Sized>(inst: &I, items: impl IntoIterator<Item = &'a I::Elem>) -> I::Elem
where
    I::Elem: 'a,
{
    items.into_iter().fold(inst.identity(), |acc, g| inst.mul(&acc, g))
}

pub(crate) fn random_poly(field: PrimeField, max_deg: usize, rng: &mut dyn RngCore) -> DensePoly {
    let p = field.modulus();
    let coeffs = (0..=max_deg).map(|_| rng.gen_range(0..p)).collect();
    DensePoly::from_raw(field, coeffs)
}

/// A random element of A with numerator degree ≤ `max_deg` and small denominators.
pub(crate) fn random_sfraction(ring: &LocalRing, max_deg: usize, rng: &mut dyn RngCore) -> SFraction {
    let num = random_poly(ring.field(), max_deg, rng);
    let den = (0..ring.rank()).map(|_| u32::from(rng.gen_bool(0.25))).collect();
    ring.canonicalize(num, den)
}

/// A random unit c·∏ f_i^{e_i} with |e_i| ≤ 1.
pub(crate) fn random_unit(ring: &LocalRing, rng: &mut dyn RngCore) -> (u32, Vec<i64>) {
    let c = rng.gen_range(1..ring.field().modulus());
    let exps = (0..ring.rank()).map(|_| rng.gen_range(-1..=1)).collect();
    (c, exps)
}

pub(crate) fn parse_index(name: &str, prefix: &str) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || (rest.len() > 1 && rest.starts_with('0')) {
        return None;
    }
    rest.parse().ok()
}

/// Joins `gen^k` tokens, dropping zero exponents; `e` for the empty word.
pub(crate) fn join_tokens(tokens: Vec<String>) -> String {
    if tokens.is_empty() {
        "e".to_string()
    } else {
        tokens.join(" ")
    }
}

pub(crate) fn power_token(name: &str, k: i64) -> Option<String> {
    match k {
        0 => None,
        1 => Some(name.to_string()),
        k => Some(format!("{name}^{k}")),
    }
}
