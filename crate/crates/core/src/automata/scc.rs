use super::{Dfa, StateId};
use crate::numeration::Digit;

/// Strongly connected components of the transition graph.
///
/// Components are numbered in the order Tarjan's algorithm closes them,
/// which is a reverse topological order of the condensation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    component: Vec<usize>,
    non_trivial: Vec<bool>,
}

impl SccDecomposition {
    pub fn component_of(&self, state: StateId) -> usize {
        self.component[state]
    }

    pub fn component_count(&self) -> usize {
        self.non_trivial.len()
    }

    /// A component is non-trivial unless it is a single state without a loop.
    pub fn is_non_trivial(&self, component: usize) -> bool {
        self.non_trivial[component]
    }

    pub fn non_trivial_components(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.component_count()).filter(|&c| self.non_trivial[c])
    }

    pub fn members(&self, component: usize) -> Vec<StateId> {
        (0..self.component.len()).filter(|&q| self.component[q] == component).collect()
    }

    pub fn components(&self) -> Vec<Vec<StateId>> {
        let mut out = vec![Vec::new(); self.component_count()];
        for (q, &c) in self.component.iter().enumerate() {
            out[c].push(q);
        }
        out
    }
}

impl Dfa {
    /// Tarjan's algorithm, iterative.
    pub fn scc(&self) -> SccDecomposition {
        const UNVISITED: usize = usize::MAX;
        let n = self.state_count();
        let k = self.alphabet_size() as Digit;
        let mut index = vec![UNVISITED; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut component = vec![UNVISITED; n];
        let mut non_trivial = Vec::new();
        let mut counter = 0;

        for root in 0..n {
            if index[root] != UNVISITED {
                continue;
            }
            // (state, next digit to explore)
            let mut call: Vec<(StateId, Digit)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (q, ref mut d)) = call.last_mut() {
                if *d < k {
                    let digit = *d;
                    *d += 1;
                    if let Some(r) = self.next(q, digit) {
                        if index[r] == UNVISITED {
                            index[r] = counter;
                            low[r] = counter;
                            counter += 1;
                            stack.push(r);
                            on_stack[r] = true;
                            call.push((r, 0));
                        } else if on_stack[r] {
                            low[q] = low[q].min(index[r]);
                        }
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[q]);
                }
                if low[q] == index[q] {
                    let id = non_trivial.len();
                    let mut size = 0;
                    loop {
                        let s = stack.pop().expect("tarjan stack");
                        on_stack[s] = false;
                        component[s] = id;
                        size += 1;
                        if s == q {
                            break;
                        }
                    }
                    let has_loop = (0..k).any(|d| self.next(q, d) == Some(q));
                    non_trivial.push(size > 1 || has_loop);
                }
            }
        }
        SccDecomposition { component, non_trivial }
    }
}
