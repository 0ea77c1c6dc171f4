//! Linear numeration systems: exact terms, greedy representations,
//! numerical values and residue periodicity.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Number of terms generated (and validated) when a system is built.
pub const DEFAULT_HORIZON: usize = 200;

pub type Digit = u32;

/// A finite word over a digit alphabet, most significant digit first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Digit>);

impl Word {
    pub fn new(digits: Vec<Digit>) -> Self {
        Word(digits)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn digits(&self) -> &[Digit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Digit of weight `U_i`, i.e. counted from the right.
    pub fn digit_at_weight(&self, i: usize) -> Digit {
        self.0[self.0.len() - 1 - i]
    }

    /// `self` followed by `n` zeros.
    pub fn with_zeros(&self, n: usize) -> Word {
        let mut digits = self.0.clone();
        digits.extend(std::iter::repeat_n(0, n));
        Word(digits)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut digits = self.0.clone();
        digits.extend_from_slice(&other.0);
        Word(digits)
    }

    /// Radix (shortlex) order: shorter words first, then lexicographic.
    pub fn radix_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl From<Vec<Digit>> for Word {
    fn from(digits: Vec<Digit>) -> Self {
        Word(digits)
    }
}

impl From<&[Digit]> for Word {
    fn from(digits: &[Digit]) -> Self {
        Word(digits.to_vec())
    }
}

/// Digits below ten are written contiguously (`"1010"`); as soon as one digit
/// needs more than one character, digits are separated by dots (`"1.12.0"`).
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&d| d < 10) {
            for d in &self.0 {
                write!(f, "{d}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            return Ok(Word::empty());
        }
        if s.contains('.') {
            s.split('.')
                .map(|part| part.parse::<Digit>().map_err(|_| Error::InvalidWord(s.to_string())))
                .collect::<Result<Vec<_>>>()
                .map(Word)
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::InvalidWord(s.to_string())))
                .collect::<Result<Vec<_>>>()
                .map(Word)
        }
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Result of [`NumerationSystem::compute_alphabet_bound`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphabetBound {
    pub value: u32,
    /// The maximal ratio was first reached before half of the horizon.
    pub stable: bool,
}

/// A linear numeration system `U_{n+K} = a_{K-1} U_{n+K-1} + ... + a_0 U_n`.
#[derive(Clone, Debug)]
pub struct NumerationSystem {
    name: Option<String>,
    coefficients: Vec<BigInt>,
    terms: Vec<BigInt>,
    alphabet_bound: u32,
    alphabet_stable: bool,
}

impl NumerationSystem {
    /// Builds a system from recurrence coefficients (`a_0` first) and the
    /// first `K` terms. The alphabet bound is computed over
    /// [`DEFAULT_HORIZON`] terms; an explicit bound must not be smaller.
    pub fn new(
        coefficients: Vec<BigInt>,
        initial_terms: Vec<BigInt>,
        alphabet_bound: Option<u32>,
    ) -> Result<Self> {
        let order = coefficients.len();
        if order == 0 {
            return Err(Error::InvalidSystem("at least one recurrence coefficient is required".into()));
        }
        if initial_terms.len() != order {
            return Err(Error::InvalidSystem(format!(
                "{order} coefficients need {order} initial terms, got {}",
                initial_terms.len()
            )));
        }
        if !initial_terms[0].is_one() {
            return Err(Error::InvalidSystem(format!("U_0 must be 1, got {}", initial_terms[0])));
        }
        let terms = generate(&coefficients, &initial_terms, DEFAULT_HORIZON.max(order + 1));
        check_increasing(&terms, 0)?;

        let mut system = NumerationSystem {
            name: None,
            coefficients,
            terms,
            alphabet_bound: 0,
            alphabet_stable: false,
        };
        let computed = system.compute_alphabet_bound(DEFAULT_HORIZON)?;
        system.alphabet_stable = computed.stable;
        system.alphabet_bound = match alphabet_bound {
            Some(bound) if bound < computed.value => {
                return Err(Error::InvalidSystem(format!(
                    "alphabet bound {bound} is below the observed ratio bound {}",
                    computed.value
                )))
            }
            Some(bound) => bound,
            None => computed.value,
        };
        Ok(system)
    }

    pub fn from_i64(coefficients: &[i64], initial_terms: &[i64], alphabet_bound: Option<u32>) -> Result<Self> {
        Self::new(
            coefficients.iter().map(|&a| BigInt::from(a)).collect(),
            initial_terms.iter().map(|&u| BigInt::from(u)).collect(),
            alphabet_bound,
        )
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Length `K` of the integer recurrence.
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// `C_U`; the digit alphabet is `{0, ..., C_U - 1}`.
    pub fn alphabet_bound(&self) -> u32 {
        self.alphabet_bound
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_bound as usize
    }

    pub fn alphabet_stable(&self) -> bool {
        self.alphabet_stable
    }

    /// `U_n`, computed exactly.
    pub fn term(&self, n: usize) -> Result<BigInt> {
        if n < self.terms.len() {
            return Ok(self.terms[n].clone());
        }
        let terms = self.terms(n + 1)?;
        Ok(terms[n].clone())
    }

    /// `U_0, ..., U_{len-1}`.
    pub fn terms(&self, len: usize) -> Result<Vec<BigInt>> {
        if len <= self.terms.len() {
            return Ok(self.terms[..len].to_vec());
        }
        let cached = self.terms.len();
        let terms = self.raw_terms(len);
        check_increasing(&terms, cached - 1)?;
        Ok(terms)
    }

    /// Terms without the monotonicity check past the validated prefix.
    pub(crate) fn raw_terms(&self, len: usize) -> Vec<BigInt> {
        if len <= self.terms.len() {
            return self.terms[..len].to_vec();
        }
        let mut terms = self.terms.clone();
        extend(&self.coefficients, &mut terms, len);
        terms
    }

    /// `max_{n < horizon} ceil(U_{n+1} / U_n)`.
    pub fn compute_alphabet_bound(&self, horizon: usize) -> Result<AlphabetBound> {
        let terms = self.terms(horizon + 1)?;
        let mut best = 0u32;
        let mut best_at = 0usize;
        for n in 0..horizon {
            let (q, r) = terms[n + 1].div_rem(&terms[n]);
            let ceil = if r.is_zero() { q } else { q + 1u32 };
            let ceil = ceil
                .to_u32()
                .ok_or_else(|| Error::Overflow(format!("ratio U_{}/U_{n} does not fit in u32", n + 1)))?;
            if ceil > best {
                best = ceil;
                best_at = n;
            }
        }
        Ok(AlphabetBound { value: best, stable: best_at < horizon / 2 })
    }

    /// Greedy representation of `n`; `rep(0)` is the empty word.
    pub fn rep(&self, n: &BigInt) -> Result<Word> {
        if n.is_negative() {
            return Err(Error::InvalidSystem(format!("cannot represent negative integer {n}")));
        }
        if n.is_zero() {
            return Ok(Word::empty());
        }
        // smallest len with U_len > n
        let mut len = 1;
        let mut terms = self.raw_terms(2);
        loop {
            if len >= terms.len() {
                terms = self.raw_terms(terms.len() * 2);
            }
            if &terms[len] > n {
                break;
            }
            len += 1;
        }
        let mut rest = n.clone();
        let mut digits = Vec::with_capacity(len);
        for i in (0..len).rev() {
            let (q, r) = rest.div_rem(&terms[i]);
            let digit = q.to_u32().filter(|&d| d < self.alphabet_bound).ok_or_else(|| {
                Error::InconsistentAlphabet { digit: q.to_string(), position: i, bound: self.alphabet_bound }
            })?;
            digits.push(digit);
            rest = r;
        }
        Ok(Word(digits))
    }

    /// `val_U(w) = sum w_i U_i`.
    pub fn val(&self, word: &Word) -> BigInt {
        let terms = self.raw_terms(word.len());
        (0..word.len()).map(|i| &terms[i] * word.digit_at_weight(i)).sum()
    }

    /// Greedy condition with leading zeros allowed: every suffix of length
    /// `j` has value below `U_j` (including `j = |w|`).
    pub fn is_greedy(&self, word: &Word) -> bool {
        if word.digits().iter().any(|&d| d >= self.alphabet_bound) {
            return false;
        }
        let terms = self.raw_terms(word.len() + 1);
        let mut suffix = BigInt::zero();
        for j in 0..word.len() {
            suffix += &terms[j] * word.digit_at_weight(j);
            if suffix >= terms[j + 1] {
                return false;
            }
        }
        true
    }

    /// Coefficients reduced into `0..m`.
    pub fn coefficients_mod(&self, m: u64) -> Vec<u64> {
        self.coefficients.iter().map(|a| mod_u64(a, m)).collect()
    }

    /// `U_n mod m` for `n < len`, generated directly modulo `m`.
    pub fn residues(&self, m: u64, len: usize) -> Vec<u64> {
        let order = self.order();
        let coeffs = self.coefficients_mod(m);
        let mut out: Vec<u64> = self.terms[..order.min(len)].iter().map(|u| mod_u64(u, m)).collect();
        while out.len() < len {
            let n = out.len() - order;
            out.push(combine_mod(&coeffs, &out[n..], m));
        }
        out
    }

    /// Preperiod and period of `(U_n mod m)`, found by detecting the first
    /// repeated window of `K` consecutive residues.
    pub fn residue_period(&self, m: u64) -> Result<ResiduePeriod> {
        if m < 2 {
            return Err(Error::InvalidModulus { m, min: 2 });
        }
        let order = self.order();
        let coeffs = self.coefficients_mod(m);
        let mut seq: Vec<u64> = self.terms[..order].iter().map(|u| mod_u64(u, m)).collect();
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut n = 0;
        loop {
            let window = seq[n..n + order].to_vec();
            if let Some(&first) = seen.get(&window) {
                seq.truncate(n);
                return Ok(ResiduePeriod { modulus: m, preperiod: first, period: n - first, residues: seq });
            }
            seen.insert(window, n);
            let next = combine_mod(&coeffs, &seq[n..n + order], m);
            seq.push(next);
            n += 1;
        }
    }
}

/// Preperiod/period structure of `(U_n mod m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResiduePeriod {
    pub modulus: u64,
    pub preperiod: usize,
    pub period: usize,
    /// `U_n mod m` for `n < preperiod + period`.
    pub residues: Vec<u64>,
}

impl ResiduePeriod {
    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod == 0
    }

    /// `U_n mod m` for any `n`.
    pub fn residue(&self, n: usize) -> u64 {
        self.residues[self.phase(n)]
    }

    /// Index into the residue table that `n` maps to.
    pub fn phase(&self, n: usize) -> usize {
        if n < self.preperiod {
            n
        } else {
            self.preperiod + (n - self.preperiod) % self.period
        }
    }
}

pub(crate) fn mod_u64(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("residue below modulus")
}

/// `sum coeffs[i] * window[i] mod m`.
fn combine_mod(coeffs: &[u64], window: &[u64], m: u64) -> u64 {
    let m = m as u128;
    let sum = coeffs.iter().zip(window).fold(0u128, |acc, (&a, &u)| (acc + a as u128 * u as u128) % m);
    sum as u64
}

fn generate(coefficients: &[BigInt], initial: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut terms = initial.to_vec();
    extend(coefficients, &mut terms, len);
    terms
}

fn extend(coefficients: &[BigInt], terms: &mut Vec<BigInt>, len: usize) {
    let order = coefficients.len();
    while terms.len() < len {
        let n = terms.len() - order;
        let next: BigInt = coefficients.iter().zip(&terms[n..]).map(|(a, u)| a * u).sum();
        terms.push(next);
    }
}

fn check_increasing(terms: &[BigInt], from: usize) -> Result<()> {
    if let Some(first) = terms.first() {
        if !first.is_positive() {
            return Err(Error::InvalidSystem(format!("U_0 = {first} is not positive")));
        }
    }
    for n in from..terms.len().saturating_sub(1) {
        if terms[n + 1] <= terms[n] {
            return Err(Error::InvalidSystem(format!(
                "sequence is not increasing: U_{} = {} <= U_{n} = {}",
                n + 1,
                terms[n + 1],
                terms[n]
            )));
        }
    }
    Ok(())
}
