use rustc_hash::FxHashMap as HashMap;

use rayon::prelude::*;

use super::{check_letter, decompose, SelfSimilar, WreathDecomp};
use crate::error::Result;

/// Finite-state automaton Q(g): δ(q, i) = q_i and λ(q, i) = (i)σ_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyAutomaton<E> {
    pub degree: usize,
    /// States in BFS discovery order; the initial state is index 0.
    pub states: Vec<E>,
    pub transitions: Vec<Vec<usize>>,
    pub outputs: Vec<Vec<usize>>,
}

impl<E> MealyAutomaton<E> {
    pub fn initial(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Run the automaton from `state` on a word.
    pub fn run(&self, state: usize, word: &[usize]) -> Result<Vec<usize>> {
        let mut q = state;
        let mut out = Vec::with_capacity(word.len());
        for &x in word {
            check_letter(x, self.degree)?;
            out.push(self.outputs[q][x]);
            q = self.transitions[q][x];
        }
        Ok(out)
    }

    /// Every transition target is a state and every output row is a permutation.
    pub fn is_well_formed(&self) -> bool {
        let n = self.states.len();
        self.transitions.len() == n
            && self.outputs.len() == n
            && self
                .transitions
                .iter()
                .all(|row| row.len() == self.degree && row.iter().all(|&q| q < n))
            && self
                .outputs
                .iter()
                .all(|row| row.len() == self.degree && super::Perm(row.clone()).is_bijection())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BfsOutcome<E> {
    Finite(MealyAutomaton<E>),
    /// More than `cap` distinct states were found. `explored` states were
    /// decomposed, `frontier` more were discovered but not yet expanded.
    CapExceeded {
        explored: usize,
        frontier: usize,
    },
}

impl<E> BfsOutcome<E> {
    pub fn automaton(&self) -> Option<&MealyAutomaton<E>> {
        match self {
            Self::Finite(a) => Some(a),
            Self::CapExceeded { .. } => None,
        }
    }
}

pub fn states_bfs<I: SelfSimilar + ?Sized>(inst: &I, g: &I::Elem, cap: usize) -> Result<BfsOutcome<I::Elem>> {
    states_bfs_with(inst, g, cap, false)
}

/// Level-synchronous BFS over canonical elements. With `parallel` the
/// decompositions of a level run on the rayon pool; state numbering is fixed
/// by a sequential pass, so the result does not depend on scheduling.
pub fn states_bfs_with<I: SelfSimilar + ?Sized>(
    inst: &I,
    g: &I::Elem,
    cap: usize,
    parallel: bool,
) -> Result<BfsOutcome<I::Elem>> {
    let cap = cap.max(1);
    let mut states = vec![g.clone()];
    let mut index: HashMap<I::Elem, usize> = HashMap::from_iter([(g.clone(), 0)]);
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    let mut outputs: Vec<Vec<usize>> = Vec::new();
    let mut level = 0..1;
    while !level.is_empty() {
        let decomps: Vec<WreathDecomp<I::Elem>> = if parallel {
            states[level.clone()]
                .par_iter()
                .map(|q| decompose(inst, q))
                .collect::<Result<_>>()?
        } else {
            states[level.clone()]
                .iter()
                .map(|q| decompose(inst, q))
                .collect::<Result<_>>()?
        };
        let next_start = states.len();
        for (offset, d) in decomps.into_iter().enumerate() {
            let mut row = Vec::with_capacity(d.states.len());
            for s in d.states {
                let id = match index.get(&s) {
                    Some(&id) => id,
                    None => {
                        let id = states.len();
                        if id >= cap {
                            let explored = level.start + offset + 1;
                            return Ok(BfsOutcome::CapExceeded {
                                explored,
                                frontier: id + 1 - explored,
                            });
                        }
                        index.insert(s.clone(), id);
                        states.push(s);
                        id
                    }
                };
                row.push(id);
            }
            transitions.push(row);
            outputs.push(d.perm.0);
        }
        level = next_start..states.len();
    }
    Ok(BfsOutcome::Finite(MealyAutomaton {
        degree: inst.degree(),
        states,
        transitions,
        outputs,
    }))
}
