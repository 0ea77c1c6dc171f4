//! The automaton `A_U` of the numeration language `0*rep_U(N)`: presets,
//! the Bertrand/Parry builder, and checks of the structural hypotheses the
//! state-count formula relies on.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automata::{Dfa, StateId};
use crate::error::{Error, Result};
use crate::numeration::{Digit, NumerationSystem, Word};
use crate::oracle;

/// Note attached to every hypothesis report.
pub const H2_INTERPRETATION: &str =
    "(H.2): a run that leaves the partial automaton counts as ending outside C_U";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Fibonacci,
    /// `U_{n+l} = U_{n+l-1} + ... + U_n`, `U_i = 2^i` for `i < l`.
    Lbonacci(usize),
    /// `U_{n+2} = 2 U_{n+1} + U_n`, `U = 1, 3, 7, 17, ...`.
    Sqrt2Plus1,
}

impl Preset {
    pub fn system(&self) -> NumerationSystem {
        let system = match *self {
            Preset::Fibonacci => NumerationSystem::from_i64(&[1, 1], &[1, 2], None),
            Preset::Lbonacci(l) => {
                let initial: Vec<i64> = (0..l).map(|i| 1i64 << i).collect();
                NumerationSystem::from_i64(&vec![1; l], &initial, None)
            }
            Preset::Sqrt2Plus1 => NumerationSystem::from_i64(&[1, 2], &[1, 3], None),
        };
        system.expect("preset systems are valid").with_name(self.to_string())
    }

    /// The automaton drawn for the preset, built state by state.
    pub fn automaton(&self) -> Dfa {
        match *self {
            Preset::Fibonacci => chain_automaton(2),
            Preset::Lbonacci(l) => chain_automaton(l),
            Preset::Sqrt2Plus1 => {
                let mut a = Dfa::new(2, 3, 0).expect("valid shape");
                a.set_final(0, true);
                a.set_final(1, true);
                a.set_transition(0, 0, 0).expect("in range");
                a.set_transition(0, 1, 0).expect("in range");
                a.set_transition(0, 2, 1).expect("in range");
                a.set_transition(1, 0, 0).expect("in range");
                a
            }
        }
    }

    /// Quasi-greedy expansion of 1 for the dominant root.
    pub fn bertrand_directive(&self) -> BertrandDirective {
        let period = match *self {
            Preset::Fibonacci => vec![1, 0],
            Preset::Lbonacci(l) => {
                let mut p = vec![1; l - 1];
                p.push(0);
                p
            }
            Preset::Sqrt2Plus1 => vec![2, 0],
        };
        BertrandDirective { preperiod: Vec::new(), period }
    }
}

/// `l` states in a chain: digit 1 moves forward, digit 0 returns to the
/// start, all states final.
fn chain_automaton(l: usize) -> Dfa {
    let mut a = Dfa::new(l, 2, 0).expect("valid shape");
    for q in 0..l {
        a.set_final(q, true);
        a.set_transition(q, 0, 0).expect("in range");
        if q + 1 < l {
            a.set_transition(q, 1, q + 1).expect("in range");
        }
    }
    a
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Fibonacci => f.write_str("fibonacci"),
            Preset::Lbonacci(l) => write!(f, "lbonacci:{l}"),
            Preset::Sqrt2Plus1 => f.write_str("sqrt2plus1"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fibonacci" => Ok(Preset::Fibonacci),
            "sqrt2plus1" => Ok(Preset::Sqrt2Plus1),
            _ => {
                let l = s
                    .strip_prefix("lbonacci:")
                    .and_then(|l| l.parse::<usize>().ok())
                    .filter(|&l| (2..=62).contains(&l))
                    .ok_or_else(|| Error::UnknownPreset(s.to_string()))?;
                Ok(Preset::Lbonacci(l))
            }
        }
    }
}

pub fn build_preset_automaton(name: &str) -> Result<Dfa> {
    Ok(name.parse::<Preset>()?.automaton())
}

/// Digit sequence `t_1 t_2 ...` driving the canonical automaton: either
/// finite (`period` empty) or eventually periodic `preperiod (period)^ω`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BertrandDirective {
    #[serde(default)]
    pub preperiod: Vec<Digit>,
    #[serde(default)]
    pub period: Vec<Digit>,
}

impl BertrandDirective {
    pub fn finite(digits: Vec<Digit>) -> Self {
        BertrandDirective { preperiod: digits, period: Vec::new() }
    }

    pub fn periodic(preperiod: Vec<Digit>, period: Vec<Digit>) -> Self {
        BertrandDirective { preperiod, period }
    }

    fn len(&self) -> usize {
        self.preperiod.len() + self.period.len()
    }

    /// `t_{i+1}` (0-based), zero past the end of a finite sequence.
    fn at(&self, i: usize) -> Digit {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else if self.period.is_empty() {
            0
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Every shift of the sequence must be lexicographically at most the
    /// sequence itself. Comparing `preperiod + period` symbols settles it:
    /// past that point both sides repeat with the same period.
    pub fn check_admissible(&self) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Err(Error::InvalidDirective("directive sequence is empty".into()));
        }
        if self.at(0) == 0 {
            return Err(Error::InvalidDirective("first digit must be at least 1".into()));
        }
        if self.period.is_empty() && self.preperiod.last() == Some(&0) {
            return Err(Error::InvalidDirective("finite sequence must end in a non-zero digit".into()));
        }
        if !self.period.is_empty() && self.period.iter().all(|&d| d == 0) {
            return Err(Error::InvalidDirective("period consisting of zeros only; give the finite sequence".into()));
        }
        let horizon = n + self.period.len();
        for shift in 1..n {
            for i in 0..horizon {
                let (a, b) = (self.at(shift + i), self.at(i));
                if a < b {
                    break;
                }
                if a > b {
                    return Err(Error::InadmissibleDirective { shift });
                }
            }
        }
        Ok(())
    }
}

/// Canonical automaton of the directive: state `j` sends digits below
/// `t_j` back to the start and `t_j` to state `j + 1` (wrapping to the start
/// of the period); every state is final.
pub fn build_bertrand_automaton(directive: &BertrandDirective) -> Result<Dfa> {
    directive.check_admissible()?;
    let n = directive.len();
    let alphabet = directive.at(0) as usize + 1;
    let mut a = Dfa::new(n, alphabet, 0)?;
    for j in 0..n {
        a.set_final(j, true);
        let t = directive.at(j);
        for d in 0..t {
            a.set_transition(j, d, 0)?;
        }
        if j + 1 < n {
            a.set_transition(j, t, j + 1)?;
        } else if !directive.period.is_empty() {
            a.set_transition(j, t, directive.preperiod.len())?;
        }
    }
    Ok(a)
}

/// Checks that `dfa` accepts exactly the greedy words of length at most
/// `max_length`. Returns a counterexample when it does not.
pub fn verify_numeration_automaton(dfa: &Dfa, system: &NumerationSystem, max_length: usize) -> Result<Option<Word>> {
    oracle::check_language(dfa, system, 1, max_length)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    /// Exactly one non-trivial strongly connected component, containing the
    /// initial state.
    pub h1: bool,
    /// Every state lies in `C_U`.
    pub strongly_connected: bool,
    pub c_u: BTreeSet<StateId>,
    pub h2: bool,
    pub h2_witnesses: BTreeMap<(StateId, StateId), Word>,
    /// Smallest `N` with `δ(p, 0^n) = q0` for all tested `n >= N`, per state
    /// of `C_U`; `None` if the zero path does not settle on `q0`.
    pub zero_return_bounds: BTreeMap<StateId, Option<usize>>,
    pub one_step_in_cu: bool,
    /// Other non-trivial components are single cycles labelled by `0`.
    pub other_components_zero_cycles: bool,
    pub notes: Vec<String>,
}

impl HypothesisReport {
    pub fn zero_return_holds(&self) -> bool {
        self.zero_return_bounds.values().all(Option::is_some)
    }

    pub fn c_u_size(&self) -> usize {
        self.c_u.len()
    }

    pub fn to_json(&self) -> HypothesisJson {
        HypothesisJson {
            h1: self.h1,
            h2: self.h2,
            witnesses: self.h2_witnesses.iter().map(|(&(p, q), w)| (format!("{p},{q}"), w.to_string())).collect(),
            one_step_in_cu: self.one_step_in_cu,
            c_u: self.c_u.iter().copied().collect(),
            strongly_connected: self.strongly_connected,
            zero_return: self.zero_return_holds(),
            other_components_zero_cycles: self.other_components_zero_cycles,
            notes: self.notes.clone(),
        }
    }
}

/// Serialised form of a [`HypothesisReport`].
#[derive(Clone, Debug, Serialize)]
pub struct HypothesisJson {
    pub h1: bool,
    pub h2: bool,
    pub witnesses: BTreeMap<String, String>,
    pub one_step_in_cu: bool,
    pub c_u: Vec<StateId>,
    pub strongly_connected: bool,
    pub zero_return: bool,
    pub other_components_zero_cycles: bool,
    pub notes: Vec<String>,
}

/// Evaluates (H.1), (H.2) and the zero-path / one-step properties on a trim
/// automaton.
pub fn check_hypotheses(dfa: &Dfa) -> HypothesisReport {
    let scc = dfa.scc();
    let q0 = dfa.initial();
    let initial_component = scc.component_of(q0);
    let c_u: BTreeSet<StateId> = scc.members(initial_component).into_iter().collect();
    let non_trivial: Vec<usize> = scc.non_trivial_components().collect();
    let h1 = non_trivial == [initial_component];
    let strongly_connected = c_u.len() == dfa.state_count() && scc.is_non_trivial(initial_component);

    let mut notes = vec![H2_INTERPRETATION.to_string()];
    let mut h2_witnesses = BTreeMap::new();
    let mut h2 = true;
    let members: Vec<StateId> = c_u.iter().copied().collect();
    for (i, &p) in members.iter().enumerate() {
        for &q in &members[i + 1..] {
            match separating_word(dfa, &c_u, p, q) {
                Some(w) => {
                    h2_witnesses.insert((p, q), w);
                }
                None => h2 = false,
            }
        }
    }

    let bound = dfa.state_count() + 1;
    let zero_return_bounds = members.iter().map(|&p| (p, zero_return_bound(dfa, p, bound))).collect();

    let one_step_in_cu = dfa.next(q0, 1).is_some_and(|r| c_u.contains(&r));

    let mut other_components_zero_cycles = true;
    for &c in non_trivial.iter().filter(|&&c| c != initial_component) {
        let comp = scc.members(c);
        let inside: Vec<(StateId, Digit, StateId)> = dfa
            .transitions()
            .filter(|&(p, _, r)| scc.component_of(p) == c && scc.component_of(r) == c)
            .collect();
        let zero_cycle = inside.len() == comp.len() && inside.iter().all(|&(_, d, _)| d == 0);
        other_components_zero_cycles &= zero_cycle;
    }
    if non_trivial.len() <= 1 {
        notes.push("no non-trivial component besides C_U; the zero-cycle clause holds vacuously".into());
    }

    HypothesisReport {
        h1,
        strongly_connected,
        c_u,
        h2,
        h2_witnesses,
        zero_return_bounds,
        one_step_in_cu,
        other_components_zero_cycles,
        notes,
    }
}

/// Shortest `x` such that exactly one of `δ(p, x)`, `δ(q, x)` lies in `C_U`,
/// by breadth-first search on pairs (`None` is the dead state).
fn separating_word(dfa: &Dfa, c_u: &BTreeSet<StateId>, p: StateId, q: StateId) -> Option<Word> {
    type Pair = (Option<StateId>, Option<StateId>);
    let inside = |s: Option<StateId>| s.is_some_and(|s| c_u.contains(&s));
    let start: Pair = (Some(p), Some(q));
    let mut parent: HashMap<Pair, (Pair, Digit)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = BTreeSet::from([start]);
    while let Some(pair) = queue.pop_front() {
        if inside(pair.0) != inside(pair.1) {
            let mut digits = Vec::new();
            let mut cur = pair;
            while let Some(&(prev, d)) = parent.get(&cur) {
                digits.push(d);
                cur = prev;
            }
            digits.reverse();
            return Some(Word::new(digits));
        }
        for d in 0..dfa.alphabet_size() as Digit {
            let next: Pair = (pair.0.and_then(|s| dfa.next(s, d)), pair.1.and_then(|s| dfa.next(s, d)));
            if next.0 == next.1 {
                continue;
            }
            if seen.insert(next) {
                parent.insert(next, (pair, d));
                queue.push_back(next);
            }
        }
    }
    None
}

fn zero_return_bound(dfa: &Dfa, p: StateId, bound: usize) -> Option<usize> {
    let q0 = dfa.initial();
    let mut path = Vec::with_capacity(bound + 1);
    let mut cur = Some(p);
    for _ in 0..=bound {
        path.push(cur);
        cur = cur.and_then(|s| dfa.next(s, 0));
    }
    if path[bound] != Some(q0) || dfa.next(q0, 0) != Some(q0) {
        return None;
    }
    let mut n = bound;
    while n > 0 && path[n - 1] == Some(q0) {
        n -= 1;
    }
    Some(n)
}
