//! Hankel matrices of the basis and the quantities derived from them modulo
//! `m`: the recurrence length `k_{U,m}`, Smith invariants, the image count
//! `S_{U,m}`, and modular recurrence coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeration::{mod_u64, NumerationSystem};

/// Brute-force enumerations are capped at this many tuples.
pub const BRUTE_FORCE_BUDGET: u128 = 1_000_000;

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Internal("ragged matrix rows".into()));
        }
        Ok(IntMatrix { rows: n_rows, cols: n_cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.cols.max(1)).map(<[BigInt]>::to_vec).collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Internal(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    *a.at(i, j) = v;
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// `row[target] -= factor * row[source]`
    fn sub_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(source, c) * factor;
            *self.at(target, c) -= v;
        }
    }

    fn sub_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, source) * factor;
            *self.at(r, target) -= v;
        }
    }

    /// Invariant factors `d_1 | d_2 | ... | d_r` (`r = min(rows, cols)`),
    /// non-negative, zeros last, by unimodular row and column operations.
    pub fn smith_invariants(&self) -> Vec<BigInt> {
        let mut a = self.clone();
        let r = a.rows.min(a.cols);
        let mut diag = Vec::with_capacity(r);
        for t in 0..r {
            // pivot: smallest non-zero |entry| in the lower-right block
            let pivot = (t..a.rows)
                .flat_map(|i| (t..a.cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !a.get(i, j).is_zero())
                .min_by(|&(i, j), &(k, l)| a.get(i, j).abs().cmp(&a.get(k, l).abs()));
            let Some((pi, pj)) = pivot else {
                diag.extend(std::iter::repeat_n(BigInt::zero(), r - t));
                break;
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            loop {
                let mut reduced = false;
                for i in t + 1..a.rows {
                    if !a.get(i, t).is_zero() {
                        let q = a.get(i, t).div_floor(a.get(t, t));
                        a.sub_row(i, t, &q);
                        if !a.get(i, t).is_zero() {
                            a.swap_rows(t, i);
                            reduced = true;
                        }
                    }
                }
                for j in t + 1..a.cols {
                    if !a.get(t, j).is_zero() {
                        let q = a.get(t, j).div_floor(a.get(t, t));
                        a.sub_col(j, t, &q);
                        if !a.get(t, j).is_zero() {
                            a.swap_cols(t, j);
                            reduced = true;
                        }
                    }
                }
                if reduced {
                    continue;
                }
                // row and column cleared; enforce divisibility of the rest
                let offending = (t + 1..a.rows)
                    .find(|&i| (t + 1..a.cols).any(|j| !a.get(i, j).is_multiple_of(a.get(t, t))));
                match offending {
                    Some(i) => {
                        for c in 0..a.cols {
                            let v = a.get(i, c).clone();
                            *a.at(t, c) += v;
                        }
                    }
                    None => break,
                }
            }
            diag.push(a.get(t, t).abs());
        }
        diag
    }

    /// Number of distinct `A x mod m` for `x` in `Z_m^cols`, by enumeration.
    pub fn image_count_brute_force(&self, m: u64) -> Result<u128> {
        let size = checked_pow(m, self.cols)?;
        let image_space = checked_pow(m, self.rows)?;
        if size > BRUTE_FORCE_BUDGET || image_space > BRUTE_FORCE_BUDGET {
            return Err(Error::BudgetExceeded { size: size.max(image_space), budget: BRUTE_FORCE_BUDGET });
        }
        let columns: Vec<Vec<u64>> =
            (0..self.cols).map(|j| (0..self.rows).map(|i| mod_u64(self.get(i, j), m)).collect()).collect();
        let mut hit = vec![false; image_space as usize];
        let mut image = vec![0u64; self.rows];
        let mut x = vec![0u64; self.cols];
        let encode = |v: &[u64]| v.iter().rev().fold(0usize, |acc, &b| acc * m as usize + b as usize);
        let mut distinct = 0u128;
        loop {
            let code = encode(&image);
            if !hit[code] {
                hit[code] = true;
                distinct += 1;
            }
            // odometer step; every change of x_j (including the wrap to 0)
            // adds column j modulo m
            let mut j = 0;
            loop {
                if j == self.cols {
                    return Ok(distinct);
                }
                x[j] = (x[j] + 1) % m;
                for (b, &c) in image.iter_mut().zip(&columns[j]) {
                    *b = (*b + c) % m;
                }
                if x[j] != 0 {
                    break;
                }
                j += 1;
            }
        }
    }
}

fn checked_pow(m: u64, e: usize) -> Result<u128> {
    (0..e).try_fold(1u128, |acc, _| acc.checked_mul(m as u128)).ok_or_else(|| Error::Overflow(format!("{m}^{e}")))
}

/// `prod m / gcd(d_i, m)`: size of the image of a matrix with the given
/// invariant factors acting on `Z_m^r`.
pub fn image_count_from_invariants(invariants: &[BigInt], m: u64) -> Result<u128> {
    let big_m = BigInt::from(m);
    invariants.iter().try_fold(1u128, |acc, d| {
        let factor = (&big_m / d.gcd(&big_m)).to_u128().expect("divides m");
        acc.checked_mul(factor).ok_or_else(|| Error::Overflow("image count".into()))
    })
}

/// `H_t` with entry `(i, j) = U_{i+j}`.
pub fn hankel_matrix(system: &NumerationSystem, t: usize) -> Result<IntMatrix> {
    let terms = system.terms(2 * t)?;
    IntMatrix::from_rows((0..t).map(|i| terms[i..i + t].to_vec()).collect())
}

/// `(t, det H_t, det H_t mod m)` for `t = 1..=t_max`.
pub fn determinant_profile(system: &NumerationSystem, m: u64, t_max: usize) -> Result<Vec<(usize, BigInt, u64)>> {
    (1..=t_max)
        .map(|t| {
            let det = hankel_matrix(system, t)?.determinant()?;
            let r = mod_u64(&det, m);
            Ok((t, det, r))
        })
        .collect()
}

/// Largest `t <= K` with `det H_t ≢ 0 (mod m)`. For `t > K` the columns of
/// `H_t` satisfy the integer recurrence, so those determinants vanish.
pub fn k_um(system: &NumerationSystem, m: u64) -> Result<usize> {
    check_modulus(m)?;
    let profile = determinant_profile(system, m, system.order())?;
    let k = profile.iter().rev().find(|&&(_, _, r)| r != 0).map(|&(t, _, _)| t);
    // det H_1 = U_0 = 1, so k >= 1 always
    k.ok_or_else(|| Error::Internal(format!("no Hankel determinant is non-zero modulo {m}")))
}

/// Number of `b` in `Z_m^l` with `H_l x ≡ b (mod m)` solvable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageMethod {
    BruteForce,
    Smith,
    /// Brute force within [`BRUTE_FORCE_BUDGET`], Smith invariants otherwise.
    Auto,
}

pub fn image_count_at_order(system: &NumerationSystem, m: u64, order: usize, method: ImageMethod) -> Result<u128> {
    check_modulus(m)?;
    if order == 0 {
        return Err(Error::Internal("image count needs order >= 1".into()));
    }
    let h = hankel_matrix(system, order)?;
    match method {
        ImageMethod::BruteForce => h.image_count_brute_force(m),
        ImageMethod::Smith => image_count_from_invariants(&h.smith_invariants(), m),
        ImageMethod::Auto => match h.image_count_brute_force(m) {
            Err(Error::BudgetExceeded { .. }) => image_count_from_invariants(&h.smith_invariants(), m),
            other => other,
        },
    }
}

/// `S_{U,m}` from the Smith invariants of `H_k`, cross-checked by
/// enumeration when `m^k` is within budget.
pub fn s_um(system: &NumerationSystem, m: u64) -> Result<u128> {
    let k = k_um(system, m)?;
    let h = hankel_matrix(system, k)?;
    let invariants = h.smith_invariants();
    Ok(smith_and_check(&h, &invariants, m)?.0)
}

fn smith_and_check(h: &IntMatrix, invariants: &[BigInt], m: u64) -> Result<(u128, bool)> {
    let from_smith = image_count_from_invariants(invariants, m)?;
    match h.image_count_brute_force(m) {
        Ok(brute) if brute == from_smith => Ok((from_smith, true)),
        Ok(brute) => Err(Error::Internal(format!(
            "image count mismatch modulo {m}: Smith gives {from_smith}, enumeration gives {brute}"
        ))),
        Err(Error::BudgetExceeded { .. }) => Ok((from_smith, false)),
        Err(e) => Err(e),
    }
}

/// Coefficients `c` over `Z_m` with `U_{n+k} ≡ sum c_i U_{n+i} (mod m)`
/// for every `n`, found per prime-power factor of `m` and combined by CRT.
/// Returns `None` when a prime-power search exceeds the budget or finds no
/// coefficients that hold over a full residue period.
pub fn mod_recurrence_coeffs(system: &NumerationSystem, m: u64) -> Result<Option<Vec<u64>>> {
    let k = k_um(system, m)?;
    let period = system.residue_period(m)?;
    let check_len = period.preperiod + period.period + 2 * k + 1;
    let residues = system.residues(m, check_len);

    let mut combined = vec![0u64; k];
    let mut modulus_so_far = 1u64;
    for (p, e) in factorize(m) {
        let q = p.pow(e);
        let Some(local) = search_prime_power(&residues, k, q)? else {
            return Ok(None);
        };
        for (c, &l) in combined.iter_mut().zip(&local) {
            *c = crt(*c, modulus_so_far, l, q);
        }
        modulus_so_far *= q;
    }
    Ok(Some(combined))
}

fn search_prime_power(residues: &[u64], k: usize, q: u64) -> Result<Option<Vec<u64>>> {
    let size = checked_pow(q, k)?;
    if size > BRUTE_FORCE_BUDGET {
        return Ok(None);
    }
    let res: Vec<u64> = residues.iter().map(|&r| r % q).collect();
    let windows = res.len() - k;
    let holds = |c: &[u64]| {
        (0..windows).all(|n| {
            let s = c.iter().zip(&res[n..n + k]).fold(0u128, |acc, (&ci, &u)| acc + ci as u128 * u as u128);
            (s % q as u128) as u64 == res[n + k]
        })
    };
    // enumerate c in Z_q^k in lexicographic order
    let mut c = vec![0u64; k];
    loop {
        if holds(&c) {
            return Ok(Some(c));
        }
        let mut j = k;
        loop {
            if j == 0 {
                return Ok(None);
            }
            j -= 1;
            c[j] += 1;
            if c[j] < q {
                break;
            }
            c[j] = 0;
        }
    }
}

/// `x ≡ a (mod m1)`, `x ≡ b (mod m2)` with coprime moduli.
fn crt(a: u64, m1: u64, b: u64, m2: u64) -> u64 {
    let (m1i, m2i) = (m1 as i128, m2 as i128);
    let g = (m1i).extended_gcd(&m2i);
    debug_assert_eq!(g.gcd, 1);
    let modulus = m1i * m2i;
    // x = a + m1 * ((b - a) * inv(m1) mod m2)
    let t = ((b as i128 - a as i128) * g.x).rem_euclid(m2i);
    ((a as i128 + m1i * t).rem_euclid(modulus)) as u64
}

fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

fn check_modulus(m: u64) -> Result<()> {
    if m < 2 {
        Err(Error::InvalidModulus { m, min: 2 })
    } else {
        Ok(())
    }
}

/// Everything the state-count formula needs about `H_k` modulo `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HankelAnalysis {
    pub modulus: u64,
    pub k: usize,
    pub hankel: IntMatrix,
    pub smith_invariants: Vec<BigInt>,
    pub s_um: u128,
    /// Whether `s_um` was confirmed by enumeration.
    pub brute_force_checked: bool,
    pub mod_recurrence: Option<Vec<u64>>,
    /// `(t, det H_t, det H_t mod m)` for `t = 1..=K+1`.
    pub determinant_profile: Vec<(usize, BigInt, u64)>,
}

impl HankelAnalysis {
    pub fn compute(system: &NumerationSystem, m: u64) -> Result<Self> {
        check_modulus(m)?;
        let k = k_um(system, m)?;
        let hankel = hankel_matrix(system, k)?;
        let smith_invariants = hankel.smith_invariants();
        let (s_um, brute_force_checked) = smith_and_check(&hankel, &smith_invariants, m)?;
        let mod_recurrence = mod_recurrence_coeffs(system, m)?;
        let determinant_profile = determinant_profile(system, m, system.order() + 1)?;
        Ok(HankelAnalysis {
            modulus: m,
            k,
            hankel,
            smith_invariants,
            s_um,
            brute_force_checked,
            mod_recurrence,
            determinant_profile,
        })
    }

    /// `t <= K` whose determinant vanishes modulo `m` while a larger one
    /// does not.
    pub fn non_contiguous_vanishing(&self) -> Vec<usize> {
        self.determinant_profile.iter().filter(|&&(t, _, r)| t < self.k && r == 0).map(|&(t, _, _)| t).collect()
    }
}
