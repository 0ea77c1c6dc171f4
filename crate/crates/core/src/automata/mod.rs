//! Partial deterministic and nondeterministic automata over digit alphabets.
//!
//! A missing transition rejects. Trim minimal automata are partial, so the
//! sink state only ever appears inside [`Dfa::minimize`] and the
//! equivalence check.

mod dot;
mod minimize;
mod nfa;
mod scc;

use std::collections::{BTreeSet, HashMap, VecDeque};

pub use nfa::Nfa;
pub use scc::SccDecomposition;

use crate::error::{Error, Result};
use crate::numeration::{Digit, Word};

pub type StateId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet_size: usize,
    initial: StateId,
    finals: Vec<bool>,
    /// Row-major `state * alphabet_size + digit`.
    delta: Vec<Option<StateId>>,
}

impl Dfa {
    pub fn new(state_count: usize, alphabet_size: usize, initial: StateId) -> Result<Self> {
        if state_count == 0 || alphabet_size == 0 {
            return Err(Error::InvalidAutomaton("state count and alphabet size must be positive".into()));
        }
        if initial >= state_count {
            return Err(Error::InvalidAutomaton(format!("initial state {initial} out of range")));
        }
        Ok(Dfa {
            alphabet_size,
            initial,
            finals: vec![false; state_count],
            delta: vec![None; state_count * alphabet_size],
        })
    }

    /// The canonical empty-language automaton: one non-final state, no edges.
    pub fn empty(alphabet_size: usize) -> Self {
        Dfa { alphabet_size, initial: 0, finals: vec![false], delta: vec![None; alphabet_size] }
    }

    pub fn add_state(&mut self, is_final: bool) -> StateId {
        self.finals.push(is_final);
        self.delta.extend(std::iter::repeat_n(None, self.alphabet_size));
        self.finals.len() - 1
    }

    pub fn set_transition(&mut self, from: StateId, digit: Digit, to: StateId) -> Result<()> {
        let n = self.state_count();
        if from >= n || to >= n {
            return Err(Error::InvalidAutomaton(format!("transition {from} -> {to} out of range ({n} states)")));
        }
        if digit as usize >= self.alphabet_size {
            return Err(Error::InvalidAutomaton(format!(
                "digit {digit} outside alphabet of size {}",
                self.alphabet_size
            )));
        }
        self.delta[from * self.alphabet_size + digit as usize] = Some(to);
        Ok(())
    }

    pub fn set_final(&mut self, state: StateId, is_final: bool) {
        self.finals[state] = is_final;
    }

    pub fn set_initial(&mut self, state: StateId) -> Result<()> {
        if state >= self.state_count() {
            return Err(Error::InvalidAutomaton(format!("initial state {state} out of range")));
        }
        self.initial = state;
        Ok(())
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state]
    }

    pub fn final_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals.iter().enumerate().filter(|(_, &f)| f).map(|(q, _)| q)
    }

    #[inline]
    pub fn next(&self, state: StateId, digit: Digit) -> Option<StateId> {
        let digit = digit as usize;
        if digit >= self.alphabet_size {
            return None;
        }
        self.delta[state * self.alphabet_size + digit]
    }

    /// All defined transitions `(from, digit, to)` in state/digit order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Digit, StateId)> + '_ {
        let k = self.alphabet_size;
        self.delta.iter().enumerate().filter_map(move |(i, t)| t.map(|to| (i / k, (i % k) as Digit, to)))
    }

    pub fn run_from(&self, state: StateId, digits: &[Digit]) -> Option<StateId> {
        digits.iter().try_fold(state, |q, &d| self.next(q, d))
    }

    pub fn run(&self, word: &Word) -> Option<StateId> {
        self.run_from(self.initial, word.digits())
    }

    pub fn accepts(&self, word: &Word) -> bool {
        self.run(word).is_some_and(|q| self.finals[q])
    }

    pub fn accepts_digits(&self, digits: &[Digit]) -> bool {
        self.run_from(self.initial, digits).is_some_and(|q| self.finals[q])
    }

    /// Same automaton with `state` as initial state.
    pub fn rerooted(&self, state: StateId) -> Dfa {
        let mut out = self.clone();
        out.initial = state;
        out
    }

    fn accessible(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        seen[self.initial] = true;
        let mut stack = vec![self.initial];
        while let Some(q) = stack.pop() {
            for d in 0..self.alphabet_size as Digit {
                if let Some(r) = self.next(q, d) {
                    if !seen[r] {
                        seen[r] = true;
                        stack.push(r);
                    }
                }
            }
        }
        seen
    }

    fn coaccessible(&self) -> Vec<bool> {
        let mut preds = vec![Vec::new(); self.state_count()];
        for (p, _, q) in self.transitions() {
            preds[q].push(p);
        }
        let mut seen = self.finals.clone();
        let mut stack: Vec<StateId> = self.final_states().collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Keeps only the states selected by `keep`, renumbered in increasing
    /// order. The initial state must be kept.
    fn restrict(&self, keep: &[bool]) -> (Dfa, Vec<Option<StateId>>) {
        let mut map = vec![None; self.state_count()];
        let mut count = 0;
        for (q, &k) in keep.iter().enumerate() {
            if k {
                map[q] = Some(count);
                count += 1;
            }
        }
        let mut out = Dfa {
            alphabet_size: self.alphabet_size,
            initial: map[self.initial].expect("initial state kept"),
            finals: vec![false; count],
            delta: vec![None; count * self.alphabet_size],
        };
        for (q, &k) in keep.iter().enumerate() {
            if !k {
                continue;
            }
            let nq = map[q].unwrap();
            out.finals[nq] = self.finals[q];
            for d in 0..self.alphabet_size {
                if let Some(r) = self.delta[q * self.alphabet_size + d] {
                    if let Some(nr) = map[r] {
                        out.delta[nq * self.alphabet_size + d] = Some(nr);
                    }
                }
            }
        }
        (out, map)
    }

    /// Accessible and co-accessible part, with the map from old to new ids.
    pub fn trim_with_map(&self) -> (Dfa, Vec<Option<StateId>>) {
        let acc = self.accessible();
        let coacc = self.coaccessible();
        let keep: Vec<bool> = acc.iter().zip(&coacc).map(|(&a, &c)| a && c).collect();
        if !keep[self.initial] {
            return (Dfa::empty(self.alphabet_size), vec![None; self.state_count()]);
        }
        self.restrict(&keep)
    }

    pub fn trim(&self) -> Dfa {
        self.trim_with_map().0
    }

    pub fn is_trim(&self) -> bool {
        let acc = self.accessible();
        let coacc = self.coaccessible();
        acc.iter().zip(&coacc).all(|(&a, &c)| a && c)
    }

    pub fn is_empty_language(&self) -> bool {
        !self.coaccessible()[self.initial]
    }

    /// Reversal as an NFA: initial states are the old finals.
    pub fn reverse(&self) -> Nfa {
        Nfa::from_dfa(self).reverse()
    }

    /// Product automaton over reachable pairs.
    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        if self.alphabet_size != other.alphabet_size {
            return Err(Error::AlphabetMismatch { left: self.alphabet_size, right: other.alphabet_size });
        }
        let k = self.alphabet_size;
        let start = (self.initial, other.initial);
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::from([(start, 0)]);
        let mut pairs = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for d in 0..k as Digit {
                let target = match (self.next(p, d), other.next(q, d)) {
                    (Some(p2), Some(q2)) => {
                        let next_id = pairs.len();
                        let id = *index.entry((p2, q2)).or_insert_with(|| {
                            pairs.push((p2, q2));
                            next_id
                        });
                        Some(id)
                    }
                    _ => None,
                };
                delta.push(target);
            }
            i += 1;
        }
        let finals = pairs.iter().map(|&(p, q)| self.finals[p] && other.finals[q]).collect();
        Ok(Dfa { alphabet_size: k, initial: 0, finals, delta })
    }

    /// A shortest word accepted by exactly one of the two automata, or
    /// `None` when they recognise the same language.
    pub fn distinguishing_word(&self, other: &Dfa) -> Result<Option<Word>> {
        if self.alphabet_size != other.alphabet_size {
            return Err(Error::AlphabetMismatch { left: self.alphabet_size, right: other.alphabet_size });
        }
        let sink_a = self.state_count();
        let sink_b = other.state_count();
        let width = sink_b + 1;
        let encode = |p: StateId, q: StateId| p * width + q;
        let accepting_a = |p: StateId| p != sink_a && self.finals[p];
        let accepting_b = |q: StateId| q != sink_b && other.finals[q];

        let mut parent: HashMap<usize, (usize, Digit)> = HashMap::new();
        let start = encode(self.initial, other.initial);
        let mut visited = vec![false; (sink_a + 1) * width];
        visited[start] = true;
        let mut queue = VecDeque::from([(self.initial, other.initial)]);
        while let Some((p, q)) = queue.pop_front() {
            if accepting_a(p) != accepting_b(q) {
                let mut digits = Vec::new();
                let mut cur = encode(p, q);
                while let Some(&(prev, d)) = parent.get(&cur) {
                    digits.push(d);
                    cur = prev;
                }
                digits.reverse();
                return Ok(Some(Word::new(digits)));
            }
            for d in 0..self.alphabet_size as Digit {
                let p2 = if p == sink_a { sink_a } else { self.next(p, d).unwrap_or(sink_a) };
                let q2 = if q == sink_b { sink_b } else { other.next(q, d).unwrap_or(sink_b) };
                if p2 == sink_a && q2 == sink_b {
                    continue;
                }
                let code = encode(p2, q2);
                if !visited[code] {
                    visited[code] = true;
                    parent.insert(code, (encode(p, q), d));
                    queue.push_back((p2, q2));
                }
            }
        }
        Ok(None)
    }

    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        Ok(self.distinguishing_word(other)?.is_none())
    }

    /// States of `trim(self)` that can reach a cycle, reported with their
    /// ids in `self`. In a trim automaton these are exactly the states with
    /// an infinite right language.
    pub fn states_with_infinite_right_language(&self) -> BTreeSet<StateId> {
        let (trimmed, map) = self.trim_with_map();
        if trimmed.is_empty_language() {
            return BTreeSet::new();
        }
        let scc = trimmed.scc();
        let n = trimmed.state_count();
        let mut preds = vec![Vec::new(); n];
        for (p, _, q) in trimmed.transitions() {
            preds[q].push(p);
        }
        let mut good: Vec<bool> = (0..n).map(|q| scc.is_non_trivial(scc.component_of(q))).collect();
        let mut stack: Vec<StateId> = (0..n).filter(|&q| good[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !good[p] {
                    good[p] = true;
                    stack.push(p);
                }
            }
        }
        map.iter()
            .enumerate()
            .filter_map(|(old, new)| new.filter(|&nq| good[nq]).map(|_| old))
            .collect()
    }

    /// Renumbers reachable states in BFS order from the initial state,
    /// digits ascending. Unreachable states are dropped.
    pub fn canonical_form(&self) -> Dfa {
        let k = self.alphabet_size;
        let mut order = vec![self.initial];
        let mut map = vec![None; self.state_count()];
        map[self.initial] = Some(0);
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for d in 0..k as Digit {
                if let Some(r) = self.next(q, d) {
                    if map[r].is_none() {
                        map[r] = Some(order.len());
                        order.push(r);
                    }
                }
            }
            i += 1;
        }
        let mut delta = Vec::with_capacity(order.len() * k);
        for &q in &order {
            for d in 0..k {
                delta.push(self.delta[q * k + d].map(|r| map[r].unwrap()));
            }
        }
        Dfa { alphabet_size: k, initial: 0, finals: order.iter().map(|&q| self.finals[q]).collect(), delta }
    }

    /// Accepted words of length at most `max_length`, in radix order.
    pub fn enumerate_accepted(&self, max_length: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut buf = Vec::with_capacity(max_length);
        for len in 0..=max_length {
            self.collect_exact(self.initial, len, &mut buf, &mut out);
        }
        out
    }

    fn collect_exact(&self, state: StateId, remaining: usize, buf: &mut Vec<Digit>, out: &mut Vec<Word>) {
        if remaining == 0 {
            if self.finals[state] {
                out.push(Word::from(buf.as_slice()));
            }
            return;
        }
        for d in 0..self.alphabet_size as Digit {
            if let Some(r) = self.next(state, d) {
                buf.push(d);
                self.collect_exact(r, remaining - 1, buf, out);
                buf.pop();
            }
        }
    }

    /// Number of accepted words of each length `0..=max_length`.
    ///
    /// Panics if a count overflows `u128`.
    pub fn count_accepted_by_length(&self, max_length: usize) -> Vec<u128> {
        let n = self.state_count();
        let mut paths = vec![0u128; n];
        paths[self.initial] = 1;
        let mut out = Vec::with_capacity(max_length + 1);
        for len in 0..=max_length {
            out.push(self.final_states().map(|q| paths[q]).fold(0u128, |a, b| a.checked_add(b).expect("count overflow")));
            if len == max_length {
                break;
            }
            let mut next = vec![0u128; n];
            for (p, _, q) in self.transitions() {
                if paths[p] != 0 {
                    next[q] = next[q].checked_add(paths[p]).expect("count overflow");
                }
            }
            paths = next;
        }
        out
    }
}
