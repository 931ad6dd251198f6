use rustc_hash::FxHashSet as HashSet;

use rand::RngCore;
use serde::Serialize;
use serde_json::{json, Value};

use super::{all_words, exhaustive_coset_index, DecompCache, MealyAutomaton, Perm, SelfSimilar};
use crate::error::{Error, Result};

/// Largest number of words enumerated per length by the brute-force checks.
const WORD_BUDGET: usize = 1 << 14;
/// Largest per-level frontier the faithfulness probe expands.
const PROBE_FRONTIER: usize = 1 << 16;

/// Checks decompose(g·h) against the product rule
/// (g_i)σ_g · (h_i)σ_h = (g_i h_{(i)σ_g}) σ_g σ_h, recursing into the pairs
/// (g_i, h_{(i)σ_g}) for `depth` levels. Pairs are deduplicated per level.
pub fn product_rule_check<I: SelfSimilar + ?Sized>(inst: &I, g: &I::Elem, h: &I::Elem, depth: usize) -> Result<bool> {
    let mut cache = DecompCache::new(inst);
    let mut level: HashSet<(I::Elem, I::Elem)> = HashSet::default();
    level.insert((g.clone(), h.clone()));
    for d in 0..depth {
        let last = d + 1 == depth;
        let mut next = HashSet::default();
        for (a, b) in &level {
            let da = cache.get(a)?;
            let db = cache.get(b)?;
            let dab = cache.get(&inst.mul(a, b))?;
            if dab.perm != da.perm.then(&db.perm) {
                return Ok(false);
            }
            for i in 0..inst.degree() {
                let bi = &db.states[da.perm.apply(i)];
                if dab.states[i] != inst.mul(&da.states[i], bi) {
                    return Ok(false);
                }
                if !last {
                    next.insert((da.states[i].clone(), bi.clone()));
                }
            }
        }
        level = next;
    }
    Ok(true)
}

/// decompose(g^{-1}) has permutation σ^{-1} and states (g^{-1})_{(i)σ} = g_i^{-1}.
pub fn inverse_rule_check<I: SelfSimilar + ?Sized>(inst: &I, g: &I::Elem) -> Result<bool> {
    let d = super::decompose(inst, g)?;
    let dinv = super::decompose(inst, &inst.inv(g))?;
    if dinv.perm != d.perm.inverse() {
        return Ok(false);
    }
    Ok((0..inst.degree()).all(|i| dinv.states[d.perm.apply(i)] == inst.inv(&d.states[i])))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransversalReport {
    pub degree: usize,
    pub t0_in_h: bool,
    /// t_i t_j^{-1} ∉ H for all i ≠ j.
    pub distinct_cosets: bool,
    /// coset_index(t_i) = i.
    pub indexes_transversal: bool,
    /// On sampled g and every t_i: coset_index(t_i g) is the unique exhaustive
    /// answer and the cofactor lies in H.
    pub sample_consistent: bool,
    pub samples: usize,
}

impl TransversalReport {
    pub fn ok(&self) -> bool {
        self.t0_in_h && self.distinct_cosets && self.indexes_transversal && self.sample_consistent
    }
}

pub fn transversal_validate<I: SelfSimilar + ?Sized>(
    inst: &I,
    rng: &mut dyn RngCore,
    samples: usize,
) -> Result<TransversalReport> {
    let t = inst.transversal();
    let tinv = inst.transversal_inv();
    let m = inst.degree();
    let t0_in_h = t.first().is_some_and(|t0| inst.h_member(t0));
    let distinct_cosets =
        t.len() == m && (0..m).all(|i| (0..m).all(|j| i == j || !inst.h_member(&inst.mul(&t[i], &tinv[j]))));
    let indexes_transversal = (0..m).all(|i| matches!(inst.coset_index(&t[i]), Ok(j) if j == i));
    let mut sample_consistent = true;
    'outer: for _ in 0..samples {
        let g = inst.random_element(rng);
        for ti in t {
            let tg = inst.mul(ti, &g);
            let fast = match inst.coset_index(&tg) {
                Ok(j) => j,
                Err(_) => {
                    sample_consistent = false;
                    break 'outer;
                }
            };
            let hits = tinv.iter().filter(|tj| inst.h_member(&inst.mul(&tg, tj))).count();
            if hits != 1 || exhaustive_coset_index(inst, &tg)? != fast {
                sample_consistent = false;
                break 'outer;
            }
        }
    }
    Ok(TransversalReport {
        degree: m,
        t0_in_h,
        distinct_cosets,
        indexes_transversal,
        sample_consistent,
        samples,
    })
}

/// Whether the level permutations of `gens` generate a transitive group on the first level.
pub fn transitivity_check<I: SelfSimilar + ?Sized>(inst: &I, gens: &[I::Elem]) -> Result<bool> {
    let m = inst.degree();
    let perms: Vec<Perm> = gens
        .iter()
        .map(|g| super::decompose(inst, g).map(|d| d.perm))
        .collect::<Result<_>>()?;
    let mut seen = vec![false; m];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for p in &perms {
            for j in [p.apply(i), p.inverse().apply(i)] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    Ok(seen.into_iter().all(|s| s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "depth", rename_all = "snake_case")]
pub enum ProbeOutcome {
    /// Some word of this length is moved, and none shorter.
    ActsNontrivially(usize),
    Inconclusive,
}

/// Searches for the least level on which a nontrivial g moves a word.
pub fn faithfulness_probe<I: SelfSimilar + ?Sized>(inst: &I, g: &I::Elem, max_depth: usize) -> Result<ProbeOutcome> {
    let e = inst.identity();
    if *g == e {
        return Err(Error::Precondition(
            "faithfulness probe needs a nontrivial element".into(),
        ));
    }
    let mut cache = DecompCache::new(inst);
    let mut level: HashSet<I::Elem> = HashSet::default();
    level.insert(g.clone());
    for depth in 1..=max_depth {
        let mut next = HashSet::default();
        for q in &level {
            let d = cache.get(q)?;
            if !d.perm.is_identity() {
                return Ok(ProbeOutcome::ActsNontrivially(depth));
            }
            next.extend(d.states.iter().filter(|s| **s != e).cloned());
        }
        if next.is_empty() || next.len() > PROBE_FRONTIER {
            break;
        }
        level = next;
    }
    Ok(ProbeOutcome::Inconclusive)
}

/// act_on_word(g, −) is a bijection on words of each length ≤ `max_len`.
///
/// Lengths with at most 2^14 words are enumerated. Longer ones are decided
/// exactly through the portrait: the action on level L is bijective iff every
/// state reached within L−1 steps has a bijective level permutation.
pub fn level_bijectivity_check<I: SelfSimilar + ?Sized>(inst: &I, g: &I::Elem, max_len: usize) -> Result<bool> {
    let m = inst.degree();
    let mut cache = DecompCache::new(inst);
    let mut reached: HashSet<I::Elem> = HashSet::default();
    reached.insert(g.clone());
    let mut level: Vec<I::Elem> = vec![g.clone()];
    for len in 1..=max_len {
        let count = m.checked_pow(len as u32).unwrap_or(usize::MAX);
        if count <= WORD_BUDGET {
            let mut images = HashSet::with_capacity_and_hasher(count, Default::default());
            for w in all_words(m, len) {
                let img = cache.act_on_word(g, &w)?;
                if img.len() != len || !images.insert(img) {
                    return Ok(false);
                }
            }
        } else {
            for q in &level {
                if !cache.get(q)?.perm.is_bijection() {
                    return Ok(false);
                }
            }
        }
        let mut next = Vec::new();
        for q in &level {
            for s in &cache.get(q)?.states {
                if reached.insert(s.clone()) {
                    next.push(s.clone());
                }
            }
        }
        level = next;
    }
    Ok(true)
}

/// The automaton agrees with the wreath recursion: each state decomposes to
/// its recorded outputs and transitions, and simulation matches
/// act_on_word on every word of length ≤ `max_len` (up to 2^14 words per length).
pub fn automaton_agrees<I: SelfSimilar + ?Sized>(
    inst: &I,
    automaton: &MealyAutomaton<I::Elem>,
    max_len: usize,
) -> Result<bool> {
    let mut cache = DecompCache::new(inst);
    for (q, state) in automaton.states.iter().enumerate() {
        let d = cache.get(state)?;
        if d.perm.0 != automaton.outputs[q] {
            return Ok(false);
        }
        for (i, s) in d.states.iter().enumerate() {
            if automaton.states[automaton.transitions[q][i]] != *s {
                return Ok(false);
            }
        }
    }
    let m = inst.degree();
    let g = &automaton.states[automaton.initial()];
    for len in 0..=max_len {
        for w in all_words(m, len).take(WORD_BUDGET) {
            if automaton.run(automaton.initial(), &w)? != cache.act_on_word(g, &w)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Nested `[images, [children…]]` to the given depth; leaves have no children.
pub fn portrait<I: SelfSimilar + ?Sized>(inst: &I, g: &I::Elem, depth: usize) -> Result<Value> {
    fn go<I: SelfSimilar + ?Sized>(cache: &mut DecompCache<'_, I>, g: &I::Elem, depth: usize) -> Result<Value> {
        let d = cache.get(g)?;
        let children = if depth <= 1 {
            Vec::new()
        } else {
            d.states
                .iter()
                .map(|s| go(cache, s, depth - 1))
                .collect::<Result<_>>()?
        };
        Ok(json!([d.perm.0, children]))
    }
    if depth == 0 {
        return Ok(json!([]));
    }
    go(&mut DecompCache::new(inst), g, depth)
}
