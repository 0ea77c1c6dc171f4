use std::collections::HashMap;

use super::{Dfa, StateId};
use crate::error::{Error, Result};
use crate::numeration::Digit;

/// Nondeterministic automaton without epsilon transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet_size: usize,
    initials: Vec<StateId>,
    finals: Vec<bool>,
    /// Row-major `state * alphabet_size + digit`, sorted target lists.
    delta: Vec<Vec<StateId>>,
}

impl Nfa {
    pub fn new(state_count: usize, alphabet_size: usize) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::InvalidAutomaton("alphabet size must be positive".into()));
        }
        Ok(Nfa {
            alphabet_size,
            initials: Vec::new(),
            finals: vec![false; state_count],
            delta: vec![Vec::new(); state_count * alphabet_size],
        })
    }

    pub fn from_dfa(dfa: &Dfa) -> Nfa {
        let mut nfa = Nfa::new(dfa.state_count(), dfa.alphabet_size()).expect("dfa alphabet is positive");
        nfa.initials.push(dfa.initial());
        for q in dfa.final_states() {
            nfa.finals[q] = true;
        }
        for (p, d, q) in dfa.transitions() {
            nfa.delta[p * nfa.alphabet_size + d as usize].push(q);
        }
        nfa
    }

    pub fn add_initial(&mut self, state: StateId) -> Result<()> {
        if state >= self.state_count() {
            return Err(Error::InvalidAutomaton(format!("initial state {state} out of range")));
        }
        if let Err(pos) = self.initials.binary_search(&state) {
            self.initials.insert(pos, state);
        }
        Ok(())
    }

    pub fn set_final(&mut self, state: StateId, is_final: bool) {
        self.finals[state] = is_final;
    }

    pub fn add_transition(&mut self, from: StateId, digit: Digit, to: StateId) -> Result<()> {
        let n = self.state_count();
        if from >= n || to >= n || digit as usize >= self.alphabet_size {
            return Err(Error::InvalidAutomaton(format!("transition ({from}, {digit}) -> {to} out of range")));
        }
        let targets = &mut self.delta[from * self.alphabet_size + digit as usize];
        if let Err(pos) = targets.binary_search(&to) {
            targets.insert(pos, to);
        }
        Ok(())
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn initials(&self) -> &[StateId] {
        &self.initials
    }

    pub fn targets(&self, state: StateId, digit: Digit) -> &[StateId] {
        &self.delta[state * self.alphabet_size + digit as usize]
    }

    pub fn accepts_digits(&self, digits: &[Digit]) -> bool {
        let mut current = self.initials.clone();
        for &d in digits {
            if d as usize >= self.alphabet_size {
                return false;
            }
            let mut next: Vec<StateId> = current.iter().flat_map(|&q| self.targets(q, d).iter().copied()).collect();
            next.sort_unstable();
            next.dedup();
            current = next;
        }
        current.iter().any(|&q| self.finals[q])
    }

    pub fn reverse(&self) -> Nfa {
        let k = self.alphabet_size;
        let mut out = Nfa::new(self.state_count(), k).expect("alphabet is positive");
        for (i, targets) in self.delta.iter().enumerate() {
            let (p, d) = (i / k, i % k);
            for &q in targets {
                out.delta[q * k + d].push(p);
            }
        }
        for targets in &mut out.delta {
            targets.sort_unstable();
            targets.dedup();
        }
        out.initials = (0..self.state_count()).filter(|&q| self.finals[q]).collect();
        for &q in &self.initials {
            out.finals[q] = true;
        }
        out
    }

    /// Subset construction over reachable non-empty subsets. With no initial
    /// state the result is the empty-language automaton.
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet_size;
        if self.initials.is_empty() {
            return Dfa::empty(k);
        }
        let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
        let mut subsets = vec![self.initials.clone()];
        index.insert(self.initials.clone(), 0);
        let mut edges: Vec<(StateId, Digit, StateId)> = Vec::new();
        let mut mark = vec![false; self.state_count()];
        let mut i = 0;
        while i < subsets.len() {
            for d in 0..k as Digit {
                let mut next = Vec::new();
                for &q in &subsets[i] {
                    for &r in self.targets(q, d) {
                        if !mark[r] {
                            mark[r] = true;
                            next.push(r);
                        }
                    }
                }
                if next.is_empty() {
                    continue;
                }
                for &r in &next {
                    mark[r] = false;
                }
                next.sort_unstable();
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len();
                        index.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                edges.push((i, d, id));
            }
            i += 1;
        }
        let mut dfa = Dfa::new(subsets.len(), k, 0).expect("at least one subset");
        for (id, subset) in subsets.iter().enumerate() {
            dfa.set_final(id, subset.iter().any(|&q| self.finals[q]));
        }
        for (p, d, q) in edges {
            dfa.set_transition(p, d, q).expect("subset ids in range");
        }
        dfa
    }
}
