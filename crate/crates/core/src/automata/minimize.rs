use super::{Dfa, StateId};
use crate::numeration::Digit;

/// Refinable partition of `0..n`: each block is a contiguous slice of
/// `elems`.
struct Partition {
    elems: Vec<StateId>,
    pos: Vec<usize>,
    block_of: Vec<usize>,
    start: Vec<usize>,
    end: Vec<usize>,
    marked: Vec<usize>,
}

impl Partition {
    fn new(n: usize) -> Self {
        Partition {
            elems: (0..n).collect(),
            pos: (0..n).collect(),
            block_of: vec![0; n],
            start: vec![0],
            end: vec![n],
            marked: vec![0],
        }
    }

    fn len(&self) -> usize {
        self.start.len()
    }

    fn size(&self, b: usize) -> usize {
        self.end[b] - self.start[b]
    }

    fn members(&self, b: usize) -> &[StateId] {
        &self.elems[self.start[b]..self.end[b]]
    }

    fn mark(&mut self, q: StateId) {
        let b = self.block_of[q];
        let target = self.start[b] + self.marked[b];
        let p = self.pos[q];
        let other = self.elems[target];
        self.elems.swap(p, target);
        self.pos[other] = p;
        self.pos[q] = target;
        self.marked[b] += 1;
    }

    /// Splits `b` into its marked prefix (new block) and the rest. Returns
    /// the new block id when both parts are non-empty.
    fn split(&mut self, b: usize) -> Option<usize> {
        let m = self.marked[b];
        self.marked[b] = 0;
        if m == 0 || m == self.size(b) {
            return None;
        }
        let nb = self.start.len();
        let s = self.start[b];
        self.start.push(s);
        self.end.push(s + m);
        self.marked.push(0);
        self.start[b] = s + m;
        for i in s..s + m {
            self.block_of[self.elems[i]] = nb;
        }
        Some(nb)
    }
}

impl Dfa {
    /// Trim minimal partial DFA of the same language: Hopcroft's partition
    /// refinement on the sink-completed accessible part, then the sink class
    /// and dead classes are removed. States are returned in canonical (BFS)
    /// order.
    #[allow(clippy::needless_range_loop)]
    pub fn minimize(&self) -> Dfa {
        let trimmed = self.trim();
        if trimmed.is_empty_language() {
            return Dfa::empty(self.alphabet_size());
        }
        let k = trimmed.alphabet_size();
        let n = trimmed.state_count() + 1;
        let sink = n - 1;
        let target = |q: StateId, d: usize| -> StateId {
            if q == sink {
                sink
            } else {
                trimmed.next(q, d as Digit).unwrap_or(sink)
            }
        };

        // inverse[d][q] = predecessors of q on d
        let mut inverse = vec![vec![Vec::new(); n]; k];
        for q in 0..n {
            for (d, inv) in inverse.iter_mut().enumerate() {
                inv[target(q, d)].push(q);
            }
        }

        let mut part = Partition::new(n);
        let finals: Vec<StateId> = (0..n - 1).filter(|&q| trimmed.is_final(q)).collect();
        for &q in &finals {
            part.mark(q);
        }
        part.split(0);

        let mut in_work = vec![vec![false; k]; part.len()];
        let mut work: Vec<(usize, usize)> = Vec::new();
        let seed = if part.len() == 2 && part.size(1) < part.size(0) { 1 } else { 0 };
        for d in 0..k {
            work.push((seed, d));
            in_work[seed][d] = true;
        }

        let mut touched = Vec::new();
        while let Some((splitter, d)) = work.pop() {
            in_work[splitter][d] = false;
            let preimage: Vec<StateId> =
                part.members(splitter).iter().flat_map(|&q| inverse[d][q].iter().copied()).collect();
            for &p in &preimage {
                let b = part.block_of[p];
                if part.marked[b] == 0 {
                    touched.push(b);
                }
                part.mark(p);
            }
            for b in touched.drain(..) {
                if let Some(nb) = part.split(b) {
                    in_work.push(vec![false; k]);
                    for c in 0..k {
                        if in_work[b][c] {
                            work.push((nb, c));
                            in_work[nb][c] = true;
                        } else {
                            let smaller = if part.size(nb) <= part.size(b) { nb } else { b };
                            work.push((smaller, c));
                            in_work[smaller][c] = true;
                        }
                    }
                }
            }
        }

        let blocks = part.len();
        let mut quotient = Dfa::new(blocks, k, part.block_of[trimmed.initial()]).expect("non-empty partition");
        for b in 0..blocks {
            let rep = part.members(b)[0];
            quotient.set_final(b, rep != sink && trimmed.is_final(rep));
            for d in 0..k {
                quotient.set_transition(b, d as Digit, part.block_of[target(rep, d)]).expect("block ids in range");
            }
        }
        quotient.trim().canonical_form()
    }

    /// Double reversal: `det(rev(det(rev(a))))`, trimmed and canonicalised.
    pub fn brzozowski_minimize(&self) -> Dfa {
        self.reverse().determinize().reverse().determinize().trim().canonical_form()
    }

    /// Whether any two distinct states have the same right language. Checks
    /// every pair separately, so it is meant for small automata.
    pub fn has_equivalent_states(&self) -> bool {
        let n = self.state_count();
        (0..n).any(|p| {
            (p + 1..n).any(|q| self.rerooted(p).equivalent(&self.rerooted(q)).expect("same alphabet"))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::tests::fibonacci;

    #[test]
    fn fibonacci_is_already_minimal() {
        assert_eq!(fibonacci().minimize(), fibonacci());
    }

    #[test]
    fn merges_equivalent_states_and_drops_sink() {
        // binary words with an even number of ones, built with redundant states
        let mut a = Dfa::new(5, 2, 0).unwrap();
        a.set_final(0, true);
        a.set_final(2, true);
        a.set_transition(0, 0, 2).unwrap();
        a.set_transition(0, 1, 1).unwrap();
        a.set_transition(1, 0, 3).unwrap();
        a.set_transition(1, 1, 2).unwrap();
        a.set_transition(2, 0, 0).unwrap();
        a.set_transition(2, 1, 3).unwrap();
        a.set_transition(3, 0, 1).unwrap();
        a.set_transition(3, 1, 0).unwrap();
        // 4 is unreachable
        a.set_transition(4, 0, 4).unwrap();
        let m = a.minimize();
        assert_eq!(m.state_count(), 2);
        assert!(m.equivalent(&a).unwrap());
        assert!(!m.has_equivalent_states());
        assert_eq!(m.minimize(), m);
        assert_eq!(m, a.brzozowski_minimize());
    }

    #[test]
    fn empty_language_minimizes_to_canonical_empty() {
        let mut a = Dfa::new(3, 2, 0).unwrap();
        a.set_transition(0, 0, 1).unwrap();
        a.set_transition(1, 1, 2).unwrap();
        assert_eq!(a.minimize(), Dfa::empty(2));
        assert_eq!(a.brzozowski_minimize(), Dfa::empty(2));
    }

    #[test]
    fn partial_result_has_no_sink() {
        // language {"1"}: a complete automaton with an explicit sink
        let mut a = Dfa::new(3, 2, 0).unwrap();
        a.set_final(1, true);
        a.set_transition(0, 0, 2).unwrap();
        a.set_transition(0, 1, 1).unwrap();
        for d in 0..2 {
            a.set_transition(1, d, 2).unwrap();
            a.set_transition(2, d, 2).unwrap();
        }
        let m = a.minimize();
        assert_eq!(m.state_count(), 2);
        assert_eq!(m.transitions().count(), 1);
    }
}
