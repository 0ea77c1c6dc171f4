mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn hopcroft_agrees_with_brzozowski(a in dfa()) {
        minimize_matches_brzozowski(&a)?;
    }

    #[test]
    fn trim_and_scc(a in dfa()) {
        trim_and_scc_invariants(&a)?;
    }

    #[test]
    fn smith_invariants(rows in matrix(), m in 2u64..=12) {
        smith_matches_oracles(&rows, m)?;
    }

    #[test]
    fn bertrand_automata_are_closed_under_trailing_zero(d in directive()) {
        bertrand_closure(&d)?;
    }

    #[test]
    fn rep_val(p in preset(), n in 0u64..1_000_000) {
        rep_val_round_trip(p, n)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn equivalence_is_a_right_congruence(p in preset(), m in 2u64..=4, a in 0u64..3000) {
        right_congruence(p, m, a)?;
    }

    #[test]
    fn equivalence_identifies_states(p in preset(), m in 2u64..=4, a in 0u64..3000, b in 0u64..3000) {
        state_identification(p, m, a, b)?;
    }
}

#[test]
fn hypotheses_hold_on_presets() {
    hypotheses_on_presets().unwrap();
}
