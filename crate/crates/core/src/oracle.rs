//! Exhaustive language check of an automaton against the arithmetic
//! predicate "greedy and divisible by `m`".
//!
//! Greedy words are generated directly from the basis, least significant
//! digit first, by keeping every suffix value below the next term. That
//! enumeration shares nothing with the automaton constructions. Agreement on
//! all words of length `<= L` is then decided by (a) every generated word
//! satisfying the predicate is accepted, and (b) the automaton accepts
//! exactly as many words of each length as the predicate admits.

use num_traits::ToPrimitive;

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::numeration::{Digit, NumerationSystem, Word};

/// Per-length count of words satisfying the predicate, plus the
/// radix-smallest satisfying word the automaton rejects (if any).
struct Scan {
    counts: Vec<u128>,
    rejected: Option<Word>,
}

/// Returns `None` when `dfa` accepts exactly the greedy words of length at
/// most `max_length` whose value is divisible by `modulus` (use `1` for the
/// plain numeration language), and a counterexample otherwise.
pub fn check_language(dfa: &Dfa, system: &NumerationSystem, modulus: u64, max_length: usize) -> Result<Option<Word>> {
    if dfa.alphabet_size() != system.alphabet_size() {
        return Err(Error::AlphabetMismatch { left: dfa.alphabet_size(), right: system.alphabet_size() });
    }
    let terms = small_terms(system, max_length + 1)?;
    let scan = scan_greedy(dfa, &terms, system.alphabet_bound(), modulus.max(1), max_length);
    if let Some(word) = scan.rejected {
        return Ok(Some(word));
    }
    let accepted = dfa.count_accepted_by_length(max_length);
    for (len, (a, c)) in accepted.iter().zip(&scan.counts).enumerate() {
        if a != c {
            return Ok(Some(find_spurious(dfa, &terms, modulus.max(1), len)));
        }
    }
    Ok(None)
}

/// Number of greedy words of each length whose value is divisible by
/// `modulus`, by direct enumeration.
pub fn greedy_counts(system: &NumerationSystem, modulus: u64, max_length: usize) -> Result<Vec<u128>> {
    let terms = small_terms(system, max_length + 1)?;
    let mut counts = vec![0u128; max_length + 1];
    let mut buf = Vec::new();
    enumerate(&terms, system.alphabet_bound(), max_length, &mut buf, 0, &mut |lsd, value| {
        if value % modulus.max(1) as u128 == 0 {
            counts[lsd.len()] += 1;
        }
    });
    Ok(counts)
}

fn small_terms(system: &NumerationSystem, len: usize) -> Result<Vec<u128>> {
    system
        .terms(len)?
        .iter()
        .map(|t| t.to_u128().ok_or_else(|| Error::Overflow(format!("basis term {t} exceeds u128"))))
        .collect()
}

fn scan_greedy(dfa: &Dfa, terms: &[u128], bound: u32, modulus: u64, max_length: usize) -> Scan {
    let mut counts = vec![0u128; max_length + 1];
    let mut rejected: Option<Word> = None;
    let mut buf = Vec::with_capacity(max_length);
    enumerate(terms, bound, max_length, &mut buf, 0, &mut |lsd, value| {
        if value % modulus as u128 != 0 {
            return;
        }
        counts[lsd.len()] += 1;
        if rejected.as_ref().is_none_or(|r| r.len() > lsd.len() || (r.len() == lsd.len() && msd_word(lsd) < *r)) {
            let accepted = lsd
                .iter()
                .rev()
                .try_fold(dfa.initial(), |q, &d| dfa.next(q, d))
                .is_some_and(|q| dfa.is_final(q));
            if !accepted {
                rejected = Some(msd_word(lsd));
            }
        }
    });
    Scan { counts, rejected }
}

/// Depth-first generation of greedy words; `lsd[j]` is the digit of weight
/// `U_j` and `value` the value of the current word.
fn enumerate(
    terms: &[u128],
    bound: u32,
    max_length: usize,
    lsd: &mut Vec<Digit>,
    value: u128,
    visit: &mut impl FnMut(&[Digit], u128),
) {
    visit(lsd, value);
    let j = lsd.len();
    if j == max_length {
        return;
    }
    for d in 0..bound {
        let next = value + d as u128 * terms[j];
        if next >= terms[j + 1] {
            break;
        }
        lsd.push(d);
        enumerate(terms, bound, max_length, lsd, next, visit);
        lsd.pop();
    }
}

fn msd_word(lsd: &[Digit]) -> Word {
    Word::new(lsd.iter().rev().copied().collect())
}

fn is_greedy_small(terms: &[u128], msd: &[Digit]) -> Option<u128> {
    let mut suffix = 0u128;
    for (j, &d) in msd.iter().rev().enumerate() {
        suffix += d as u128 * terms[j];
        if suffix >= terms[j + 1] {
            return None;
        }
    }
    Some(suffix)
}

/// Finds an accepted word of length `len` violating the predicate. Only
/// called once the counts are known to disagree.
fn find_spurious(dfa: &Dfa, terms: &[u128], modulus: u64, len: usize) -> Word {
    dfa.enumerate_accepted(len)
        .into_iter()
        .filter(|w| w.len() == len)
        .find(|w| !matches!(is_greedy_small(terms, w.digits()), Some(v) if v % modulus as u128 == 0))
        .expect("count mismatch implies an accepted word outside the predicate")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib_system() -> NumerationSystem {
        NumerationSystem::from_i64(&[1, 1], &[1, 2], None).unwrap()
    }

    fn fib_automaton() -> Dfa {
        let mut a = Dfa::new(2, 2, 0).unwrap();
        a.set_final(0, true);
        a.set_final(1, true);
        a.set_transition(0, 0, 0).unwrap();
        a.set_transition(0, 1, 1).unwrap();
        a.set_transition(1, 0, 0).unwrap();
        a
    }

    #[test]
    fn enumeration_matches_is_greedy() {
        let s = NumerationSystem::from_i64(&[1, 2], &[1, 3], None).unwrap();
        let counts = greedy_counts(&s, 1, 7).unwrap();
        for (len, &count) in counts.iter().enumerate() {
            let mut expected = 0u128;
            for code in 0..3usize.pow(len as u32) {
                let mut c = code;
                let digits: Vec<Digit> = (0..len)
                    .map(|_| {
                        let d = (c % 3) as Digit;
                        c /= 3;
                        d
                    })
                    .collect();
                if s.is_greedy(&Word::new(digits)) {
                    expected += 1;
                }
            }
            assert_eq!(count, expected, "length {len}");
        }
    }

    #[test]
    fn fibonacci_automaton_agrees() {
        assert_eq!(check_language(&fib_automaton(), &fib_system(), 1, 14).unwrap(), None);
    }

    #[test]
    fn too_permissive_automaton_is_caught() {
        let mut all = Dfa::new(1, 2, 0).unwrap();
        all.set_final(0, true);
        all.set_transition(0, 0, 0).unwrap();
        all.set_transition(0, 1, 0).unwrap();
        let cex = check_language(&all, &fib_system(), 1, 5).unwrap().unwrap();
        assert_eq!(cex.to_string(), "11");
    }

    #[test]
    fn too_strict_automaton_is_caught() {
        let only_empty = Dfa::new(1, 2, 0).map(|mut a| {
            a.set_final(0, true);
            a
        });
        let cex = check_language(&only_empty.unwrap(), &fib_system(), 1, 3).unwrap().unwrap();
        assert_eq!(cex.to_string(), "0");
    }
}
