//! The two constructions of the trim minimal automaton of
//! `0*rep_U(mN)`:
//!
//! - direct: product of `A_U` with the vector of residues
//!   `(val(w), val(w0), ..., val(w0^{R-1})) mod m`, updated digit by digit;
//! - LSD pipeline: the least-significant-digit-first residue automaton,
//!   reversed, determinized, intersected with `A_U`.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::hankel::{k_um, mod_recurrence_coeffs};
use crate::automata::{Dfa, StateId};
use crate::error::{Error, Result};
use crate::numeration::{mod_u64, Digit, NumerationSystem, Word};

/// State of the direct product: a state of `A_U` and residues
/// `b_s = val(w 0^s) mod m` for `s < R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstructionStateTag {
    pub base_state: StateId,
    pub residues: Vec<u64>,
}

/// Width `R` of the residue vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueWidth {
    /// `R = K`, wrapping with the integer recurrence.
    Full,
    /// `R = k_{U,m}`, wrapping with modular recurrence coefficients; fails
    /// if none were found.
    Reduced,
}

/// Reachable part of the product, before trimming and minimization.
#[derive(Clone, Debug)]
pub struct DivisibilityProduct {
    pub dfa: Dfa,
    pub tags: Vec<ConstructionStateTag>,
}

fn check_inputs(a_u: &Dfa, system: &NumerationSystem, m: u64) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidModulus { m, min: 2 });
    }
    if a_u.alphabet_size() != system.alphabet_size() {
        return Err(Error::AlphabetMismatch { left: a_u.alphabet_size(), right: system.alphabet_size() });
    }
    Ok(())
}

/// Breadth-first product construction. Reading `d` from
/// `(q, b_0, ..., b_{R-1})` goes to `(δ(q, d), b'_0, ..., b'_{R-1})` with
/// `b'_s = b_{s+1} + d U_s` and `b'_{R-1} = sum c_i b_i + d U_{R-1}`.
pub fn divisibility_product(
    a_u: &Dfa,
    system: &NumerationSystem,
    m: u64,
    width: ResidueWidth,
) -> Result<DivisibilityProduct> {
    check_inputs(a_u, system, m)?;
    let coeffs: Vec<u64> = match width {
        ResidueWidth::Full => system.coefficients_mod(m),
        ResidueWidth::Reduced => mod_recurrence_coeffs(system, m)?
            .ok_or_else(|| Error::Internal(format!("no modular recurrence found modulo {m}")))?,
    };
    let r = coeffs.len();
    let basis = system.residues(m, r);
    let alphabet = a_u.alphabet_size();
    let mm = m as u128;

    let start = ConstructionStateTag { base_state: a_u.initial(), residues: vec![0; r] };
    let mut index: HashMap<ConstructionStateTag, StateId> = HashMap::from([(start.clone(), 0)]);
    let mut tags = vec![start];
    let mut edges: Vec<(StateId, Digit, StateId)> = Vec::new();
    let mut i = 0;
    while i < tags.len() {
        for d in 0..alphabet as Digit {
            let Some(q) = a_u.next(tags[i].base_state, d) else {
                continue;
            };
            let b = &tags[i].residues;
            let mut next = Vec::with_capacity(r);
            for s in 0..r - 1 {
                next.push(((b[s + 1] as u128 + d as u128 * basis[s] as u128) % mm) as u64);
            }
            let wrap = coeffs.iter().zip(b).fold(0u128, |acc, (&c, &x)| (acc + c as u128 * x as u128) % mm);
            next.push(((wrap + d as u128 * basis[r - 1] as u128) % mm) as u64);
            let tag = ConstructionStateTag { base_state: q, residues: next };
            let id = match index.get(&tag) {
                Some(&id) => id,
                None => {
                    let id = tags.len();
                    index.insert(tag.clone(), id);
                    tags.push(tag);
                    id
                }
            };
            edges.push((i, d, id));
        }
        i += 1;
    }

    let mut dfa = Dfa::new(tags.len(), alphabet, 0)?;
    for (id, tag) in tags.iter().enumerate() {
        dfa.set_final(id, a_u.is_final(tag.base_state) && tag.residues[0] == 0);
    }
    for (p, d, q) in edges {
        dfa.set_transition(p, d, q)?;
    }
    Ok(DivisibilityProduct { dfa, tags })
}

/// Trim minimal automaton of `0*rep_U(mN)` through the residue-vector
/// product with `R = K`.
pub fn build_divisibility_direct(a_u: &Dfa, system: &NumerationSystem, m: u64) -> Result<Dfa> {
    build_divisibility_direct_with(a_u, system, m, ResidueWidth::Full)
}

pub fn build_divisibility_direct_with(
    a_u: &Dfa,
    system: &NumerationSystem,
    m: u64,
    width: ResidueWidth,
) -> Result<Dfa> {
    Ok(divisibility_product(a_u, system, m, width)?.dfa.minimize())
}

/// Complete DFA reading digits least significant first, with states
/// `(residue, phase)` where the phase indexes the preperiod and period of
/// `(U_n mod m)`. State id is `phase * m + residue`; it accepts exactly
/// when the residue is 0.
pub fn lsd_divisibility_automaton(system: &NumerationSystem, m: u64) -> Result<Dfa> {
    if m < 2 {
        return Err(Error::InvalidModulus { m, min: 2 });
    }
    let period = system.residue_period(m)?;
    let phases = period.preperiod + period.period;
    let mu = m as usize;
    let mut dfa = Dfa::new(phases * mu, system.alphabet_size(), 0)?;
    for phase in 0..phases {
        let next_phase = if phase + 1 < phases { phase + 1 } else { period.preperiod };
        let weight = period.residues[phase];
        for r in 0..m {
            let id = phase * mu + r as usize;
            dfa.set_final(id, r == 0);
            for d in 0..system.alphabet_bound() {
                let r2 = ((r as u128 + d as u128 * weight as u128) % m as u128) as usize;
                dfa.set_transition(id, d, next_phase * mu + r2)?;
            }
        }
    }
    Ok(dfa)
}

/// Reversal of the LSD automaton, determinized, intersected with `A_U`,
/// then minimized.
pub fn build_divisibility_lsd(a_u: &Dfa, system: &NumerationSystem, m: u64) -> Result<Dfa> {
    check_inputs(a_u, system, m)?;
    let lsd = lsd_divisibility_automaton(system, m)?;
    let msd = lsd.reverse().determinize();
    Ok(msd.intersect(a_u)?.minimize())
}

/// `u ≡_{U,m} v`: the runs of `u` and `v` in `A_U` end in the same state
/// (or both die) and `val(u 0^i) ≡ val(v 0^i) (mod m)` for `i < k_{U,m}`.
pub fn equiv_um(system: &NumerationSystem, a_u: &Dfa, m: u64, u: &Word, v: &Word) -> Result<bool> {
    if a_u.run(u) != a_u.run(v) {
        return Ok(false);
    }
    let k = k_um(system, m)?;
    let big_m = BigInt::from(m);
    Ok((0..k).all(|i| {
        let a = system.val(&u.with_zeros(i)) % &big_m;
        let b = system.val(&v.with_zeros(i)) % &big_m;
        a == b
    }))
}

/// `|rep_U(m)|`, a lower bound on the state count of the automaton of
/// `0*rep_U(mN)`.
pub fn lower_bound(system: &NumerationSystem, m: u64) -> Result<usize> {
    if m < 1 {
        return Err(Error::InvalidModulus { m, min: 1 });
    }
    Ok(system.rep(&BigInt::from(m))?.len())
}

/// Residue vector `(val(w 0^s) mod m)_{s < width}` of a word.
pub fn residue_vector(system: &NumerationSystem, word: &Word, m: u64, width: usize) -> Vec<u64> {
    (0..width).map(|s| mod_u64(&system.val(&word.with_zeros(s)), m)).collect()
}
