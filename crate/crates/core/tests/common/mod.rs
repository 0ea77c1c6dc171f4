//! Properties shared by the proptest suite and the acceptance runner. Each
//! check takes generated inputs and fails with a `TestCaseError`.
#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use numera::divisibility::{build_divisibility_direct, equiv_um, image_count_from_invariants, IntMatrix};
use numera::numlang::{build_bertrand_automaton, check_hypotheses, BertrandDirective, Preset};
use numera::{Dfa, Word};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub type Check = Result<(), TestCaseError>;

pub fn presets() -> Vec<Preset> {
    vec![Preset::Fibonacci, Preset::Lbonacci(3), Preset::Lbonacci(4), Preset::Sqrt2Plus1]
}

pub fn preset() -> impl Strategy<Value = Preset> {
    prop::sample::select(presets())
}

/// Partial DFA with up to 7 states over an alphabet of 1 to 3 digits.
pub fn dfa() -> impl Strategy<Value = Dfa> {
    (1usize..=7, 1usize..=3).prop_flat_map(|(n, k)| {
        (
            prop::collection::vec(prop::option::weighted(0.8, 0..n), n * k),
            prop::collection::vec(any::<bool>(), n),
            0..n,
        )
            .prop_map(move |(delta, finals, initial)| {
                let mut a = Dfa::new(n, k, initial).unwrap();
                for (q, &f) in finals.iter().enumerate() {
                    a.set_final(q, f);
                }
                for (i, t) in delta.into_iter().enumerate() {
                    if let Some(t) = t {
                        a.set_transition(i / k, (i % k) as u32, t).unwrap();
                    }
                }
                a
            })
    })
}

pub fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

pub fn directive() -> impl Strategy<Value = BertrandDirective> {
    (prop::collection::vec(0u32..=3, 0..3), prop::collection::vec(0u32..=3, 0..4))
        .prop_map(|(pre, per)| BertrandDirective::periodic(pre, per))
        .prop_filter("admissible", |d| d.check_admissible().is_ok())
}

pub fn all_words(alphabet: u32, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| (0..alphabet).map(move |d| w.concat(&Word::new(vec![d])))).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn minimize_matches_brzozowski(a: &Dfa) -> Check {
    let hopcroft = a.minimize();
    let brzozowski = a.brzozowski_minimize();
    prop_assert!(hopcroft.equivalent(a).unwrap());
    prop_assert!(brzozowski.equivalent(a).unwrap());
    prop_assert!(!hopcroft.has_equivalent_states());
    if !a.is_empty_language() {
        prop_assert_eq!(&hopcroft, &brzozowski);
        prop_assert!(hopcroft.is_trim());
    }
    Ok(())
}

pub fn trim_and_scc_invariants(a: &Dfa) -> Check {
    let t = a.trim();
    prop_assert!(t.is_trim() || t.is_empty_language());
    prop_assert!(t.equivalent(a).unwrap());
    let scc = a.scc();
    let n = a.state_count();
    let reach = |p: usize| {
        let mut seen = vec![false; n];
        let mut stack = vec![p];
        while let Some(q) = stack.pop() {
            for d in 0..a.alphabet_size() as u32 {
                if let Some(r) = a.next(q, d) {
                    if !seen[r] {
                        seen[r] = true;
                        stack.push(r);
                    }
                }
            }
        }
        seen
    };
    let reach: Vec<Vec<bool>> = (0..n).map(reach).collect();
    for p in 0..n {
        prop_assert_eq!(scc.is_non_trivial(scc.component_of(p)), reach[p][p]);
        for q in 0..n {
            let same = scc.component_of(p) == scc.component_of(q);
            prop_assert_eq!(same, p == q || (reach[p][q] && reach[q][p]));
        }
    }
    // infinite right language: reachable from the initial state, and can
    // reach a cycle from which a final state is reachable
    let infinite = a.states_with_infinite_right_language();
    let accessible = {
        let mut r = reach[a.initial()].clone();
        r[a.initial()] = true;
        r
    };
    let coaccessible: Vec<bool> = (0..n).map(|p| a.is_final(p) || (0..n).any(|q| reach[p][q] && a.is_final(q))).collect();
    for p in 0..n {
        let expected = accessible[p]
            && coaccessible[p]
            && (0..n).any(|c| (c == p || reach[p][c]) && reach[c][c] && coaccessible[c]);
        prop_assert_eq!(infinite.contains(&p), expected, "state {}", p);
    }
    Ok(())
}

/// `D_i`, gcd of all `i x i` minors, by cofactor expansion.
fn determinantal_divisors(rows: &[Vec<i64>]) -> Vec<BigInt> {
    fn det(m: &[Vec<i64>], rs: &[usize], cs: &[usize]) -> BigInt {
        if rs.is_empty() {
            return BigInt::from(1);
        }
        let mut acc = BigInt::zero();
        for (k, &c) in cs.iter().enumerate() {
            let rest: Vec<usize> = cs.iter().copied().filter(|&x| x != c).collect();
            let term = BigInt::from(m[rs[0]][c]) * det(m, &rs[1..], &rest);
            if k % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect()).collect()
    }
    let (r, c) = (rows.len(), rows[0].len());
    (1..=r.min(c))
        .map(|i| {
            let mut g = BigInt::zero();
            for rs in subsets(r, i) {
                for cs in subsets(c, i) {
                    g = g.gcd(&det(rows, &rs, &cs));
                }
            }
            g
        })
        .collect()
}

pub fn smith_matches_oracles(rows: &[Vec<i64>], m: u64) -> Check {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    let matrix = IntMatrix::from_i64(&refs).unwrap();
    let invariants = matrix.smith_invariants();
    let mut prefix = BigInt::from(1);
    for (i, d) in determinantal_divisors(rows).into_iter().enumerate() {
        prefix *= &invariants[i];
        prop_assert_eq!(&prefix, &d, "D_{}", i + 1);
        prop_assert!(!invariants[i].is_negative());
        if i > 0 && !invariants[i].is_zero() {
            prop_assert!(invariants[i].is_multiple_of(&invariants[i - 1]));
        }
    }
    let from_invariants = image_count_from_invariants(&invariants, m).unwrap();
    prop_assert_eq!(from_invariants, matrix.image_count_brute_force(m).unwrap());
    Ok(())
}

pub fn bertrand_closure(d: &BertrandDirective) -> Check {
    let a = build_bertrand_automaton(d).unwrap();
    for w in all_words(a.alphabet_size() as u32, 6) {
        prop_assert_eq!(a.accepts(&w), a.accepts(&w.with_zeros(1)), "word {}", w);
    }
    Ok(())
}

pub fn rep_val_round_trip(p: Preset, n: u64) -> Check {
    let sys = p.system();
    let w = sys.rep(&BigInt::from(n)).unwrap();
    prop_assert_eq!(sys.val(&w), BigInt::from(n));
    prop_assert!(sys.is_greedy(&w));
    prop_assert!(w.digits().first() != Some(&0));
    prop_assert!(p.automaton().accepts(&w));
    Ok(())
}

/// First `b > a` whose representation is `≡_{U,m}`-equivalent to that of `a`.
fn equivalent_partner(p: Preset, m: u64, a: u64) -> Option<(Word, Word)> {
    let (sys, a_u) = (p.system(), p.automaton());
    let u = sys.rep(&BigInt::from(a)).unwrap();
    (a + 1..a + 4000).find_map(|b| {
        let v = sys.rep(&BigInt::from(b)).unwrap();
        // pad to the same length so both runs start together
        let (u, v) = pad(&u, &v);
        equiv_um(&sys, &a_u, m, &u, &v).unwrap().then_some((u, v))
    })
}

fn pad(u: &Word, v: &Word) -> (Word, Word) {
    let zeros = |n: usize| Word::new(vec![0; n]);
    let len = u.len().max(v.len());
    (zeros(len - u.len()).concat(u), zeros(len - v.len()).concat(v))
}

/// Equivalent words stay equivalent, and congruent modulo `m`, under every
/// admissible right extension of length at most 3.
pub fn right_congruence(p: Preset, m: u64, a: u64) -> Check {
    let sys = p.system();
    let a_u = p.automaton();
    let Some((u, v)) = equivalent_partner(p, m, a) else {
        return Ok(());
    };
    let big_m = BigInt::from(m);
    for x in all_words(sys.alphabet_size() as u32, 3) {
        let (ux, vx) = (u.concat(&x), v.concat(&x));
        if !sys.is_greedy(&ux) || !sys.is_greedy(&vx) {
            continue;
        }
        prop_assert!(equiv_um(&sys, &a_u, m, &ux, &vx).unwrap(), "{} ~ {} broken by {}", u, v, x);
        prop_assert_eq!(sys.val(&ux).mod_floor(&big_m), sys.val(&vx).mod_floor(&big_m));
    }
    Ok(())
}

/// For words whose run stays in the initial component, equivalence holds
/// exactly when both reach the same state of the minimal automaton.
pub fn state_identification(p: Preset, m: u64, a: u64, b: u64) -> Check {
    let (sys, a_u) = (p.system(), p.automaton());
    let hyp = check_hypotheses(&a_u);
    let dfa = build_divisibility_direct(&a_u, &sys, m).unwrap();
    let (u, v) = pad(&sys.rep(&BigInt::from(a)).unwrap(), &sys.rep(&BigInt::from(b)).unwrap());
    let in_cu = |w: &Word| a_u.run(w).is_some_and(|q| hyp.c_u.contains(&q));
    if in_cu(&u) && in_cu(&v) {
        let eq = equiv_um(&sys, &a_u, m, &u, &v).unwrap();
        prop_assert_eq!(eq, dfa.run(&u) == dfa.run(&v), "{} vs {}", u, v);
    }
    Ok(())
}

/// Runs every property with a fixed seed; used by the acceptance runner.
pub fn run_all(cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    fn go<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Check) -> Result<(), String> {
        let config = Config { cases, failure_persistence: None, ..Config::default() };
        let mut runner = TestRunner::new_with_rng(config, proptest::test_runner::TestRng::deterministic_rng(
            proptest::test_runner::RngAlgorithm::ChaCha,
        ));
        runner.run(&s, f).map_err(|e| e.to_string())
    }
    vec![
        ("minimize/Brzozowski agreement", go(cases, dfa(), |a| minimize_matches_brzozowski(&a))),
        ("trim and SCC invariants", go(cases, dfa(), |a| trim_and_scc_invariants(&a))),
        ("Smith vs determinantal divisors and brute force", go(cases, (matrix(), 2u64..=12), |(r, m)| {
            smith_matches_oracles(&r, m)
        })),
        ("Bertrand property of built automata", go(cases, directive(), |d| bertrand_closure(&d))),
        ("rep/val round trip", go(cases, (preset(), 0u64..1_000_000), |(p, n)| rep_val_round_trip(p, n))),
        ("right congruence sampling", go(cases / 4, (preset(), 2u64..=4, 0u64..3000), |(p, m, a)| {
            right_congruence(p, m, a)
        })),
        ("state identification sampling", go(cases / 4, (preset(), 2u64..=4, 0u64..3000, 0u64..3000), |(p, m, a, b)| {
            state_identification(p, m, a, b)
        })),
    ]
}

/// (H.1) and (H.2) on every preset.
pub fn hypotheses_on_presets() -> Result<(), String> {
    for p in presets() {
        let h = check_hypotheses(&p.automaton());
        if !(h.h1 && h.h2) {
            return Err(format!("{p}: h1={} h2={}", h.h1, h.h2));
        }
    }
    Ok(())
}
