//! Tree actions induced by a virtual endomorphism f: H → G.
//!
//! An element g decomposes as g = (g_0, …, g_{m-1})σ where H t_i g = H t_{(i)σ}
//! and g_i = f(t_i g t_{(i)σ}^{-1}). Words are read left to right: the leftmost
//! letter sits on level 1, σ moves it and the state g_x acts on the remaining suffix.

mod automaton;
mod checks;
mod export;

use rustc_hash::FxHashMap as HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use rand::RngCore;
use serde::Serialize;

use crate::error::{Error, Result};

pub use automaton::{states_bfs, states_bfs_with, BfsOutcome, MealyAutomaton};
pub use checks::{
    automaton_agrees, faithfulness_probe, inverse_rule_check, level_bijectivity_check, portrait, product_rule_check,
    transitivity_check, transversal_validate, ProbeOutcome, TransversalReport,
};
pub use export::{export_automaton, AutomatonDoc, ExportFormat};

/// A group G with a finite-index subgroup H, a right transversal and a virtual
/// endomorphism f: H → G.
pub trait SelfSimilar: Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    /// Index m = [G : H], the size of the alphabet.
    fn degree(&self) -> usize;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Right transversal t_0, …, t_{m-1} with t_0 ∈ H.
    fn transversal(&self) -> &[Self::Elem];
    /// The inverses t_i^{-1}, in the same order.
    fn transversal_inv(&self) -> &[Self::Elem];
    fn h_member(&self, g: &Self::Elem) -> bool;
    /// f(g); only defined for g ∈ H.
    fn endo(&self, g: &Self::Elem) -> Result<Self::Elem>;

    /// The j with H g = H t_j. The default tries every j.
    fn coset_index(&self, g: &Self::Elem) -> Result<usize> {
        exhaustive_coset_index(self, g)
    }

    /// Expression text that parses back to the same element.
    fn render(&self, g: &Self::Elem) -> String;
    fn random_element(&self, rng: &mut dyn RngCore) -> Self::Elem;
    /// Named generators (or a documented generator sample).
    fn generators(&self) -> Vec<(String, Self::Elem)>;
}

/// Coset index by trying g·t_j^{-1} ∈ H for every j.
pub fn exhaustive_coset_index<I: SelfSimilar + ?Sized>(inst: &I, g: &I::Elem) -> Result<usize> {
    inst.transversal_inv()
        .iter()
        .position(|tinv| inst.h_member(&inst.mul(g, tinv)))
        .ok_or_else(|| Error::ContractViolation(format!("{} lies in no coset of the transversal", inst.render(g))))
}

/// Permutation of {0, …, m−1} given by its images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(m: usize) -> Self {
        Self((0..m).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        self.0
            .iter()
            .all(|&j| j < seen.len() && !std::mem::replace(&mut seen[j], true))
    }

    /// First `self`, then `other` (right action).
    pub fn then(&self, other: &Self) -> Self {
        Self(self.0.iter().map(|&j| other.0[j]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut out = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j] = i;
        }
        Self(out)
    }
}

/// g = (g_0, …, g_{m-1})σ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathDecomp<E> {
    pub perm: Perm,
    pub states: Vec<E>,
}

/// Wreath recursion of g: perm[i] = coset_index(t_i g), states[i] = f(t_i g t_{perm[i]}^{-1}).
pub fn decompose<I: SelfSimilar + ?Sized>(inst: &I, g: &I::Elem) -> Result<WreathDecomp<I::Elem>> {
    let m = inst.degree();
    let mut perm = Vec::with_capacity(m);
    let mut states = Vec::with_capacity(m);
    for t in inst.transversal() {
        let tg = inst.mul(t, g);
        let j = inst.coset_index(&tg)?;
        let cofactor = inst.mul(&tg, &inst.transversal_inv()[j]);
        if !inst.h_member(&cofactor) {
            return Err(Error::ContractViolation(format!(
                "cofactor {} of {} is not in H",
                inst.render(&cofactor),
                inst.render(g)
            )));
        }
        perm.push(j);
        states.push(inst.endo(&cofactor)?);
    }
    let perm = Perm(perm);
    if !perm.is_bijection() {
        return Err(Error::ContractViolation(format!(
            "level permutation {:?} of {} is not a bijection",
            perm.0,
            inst.render(g)
        )));
    }
    Ok(WreathDecomp { perm, states })
}

/// Memoized decompositions, keyed by canonical element.
pub struct DecompCache<'a, I: SelfSimilar + ?Sized> {
    inst: &'a I,
    map: HashMap<I::Elem, Arc<WreathDecomp<I::Elem>>>,
}

impl<'a, I: SelfSimilar + ?Sized> DecompCache<'a, I> {
    pub fn new(inst: &'a I) -> Self {
        Self {
            inst,
            map: HashMap::default(),
        }
    }

    pub fn instance(&self) -> &'a I {
        self.inst
    }

    pub fn get(&mut self, g: &I::Elem) -> Result<Arc<WreathDecomp<I::Elem>>> {
        if let Some(d) = self.map.get(g) {
            return Ok(Arc::clone(d));
        }
        let d = Arc::new(decompose(self.inst, g)?);
        self.map.insert(g.clone(), Arc::clone(&d));
        Ok(d)
    }

    pub fn act_on_word(&mut self, g: &I::Elem, word: &[usize]) -> Result<Vec<usize>> {
        let mut cur = g.clone();
        let mut out = Vec::with_capacity(word.len());
        for &x in word {
            check_letter(x, self.inst.degree())?;
            let d = self.get(&cur)?;
            out.push(d.perm.apply(x));
            cur = d.states[x].clone();
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

fn check_letter(x: usize, m: usize) -> Result<()> {
    if x >= m {
        return Err(Error::Precondition(format!("letter {x} outside alphabet of size {m}")));
    }
    Ok(())
}

/// Image of a word under g.
pub fn act_on_word<I: SelfSimilar + ?Sized>(inst: &I, g: &I::Elem, word: &[usize]) -> Result<Vec<usize>> {
    let mut cur = g.clone();
    let mut out = Vec::with_capacity(word.len());
    for &x in word {
        check_letter(x, inst.degree())?;
        let d = decompose(inst, &cur)?;
        out.push(d.perm.apply(x));
        cur = d.states[x].clone();
    }
    Ok(out)
}

/// All words of length `len` in lexicographic order.
pub fn all_words(m: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = m.checked_pow(len as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut k| {
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = k % m;
            k /= m;
        }
        w
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_algebra() {
        let a = Perm(vec![1, 2, 0]);
        let b = Perm(vec![0, 2, 1]);
        assert_eq!(a.then(&b).0, vec![2, 1, 0]);
        assert!(a.then(&a.inverse()).is_identity());
        assert!(!Perm(vec![0, 0]).is_bijection());
    }

    #[test]
    fn word_enumeration() {
        let words: Vec<_> = all_words(2, 2).collect();
        assert_eq!(words, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(all_words(3, 0).count(), 1);
    }
}
