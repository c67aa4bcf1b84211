//! Generalized binary representations `n = sum e_i 2^i` with digits `e_i` from
//! a finite set `A` containing 0, and the Stern diatomic sequence.
//!
//! Over F2 the generating function of the counts `f_A(n)` is `1 / phi_A`, with
//! `phi_A = sum_{a in A} x^a`. So `f_A(n) mod 2` is periodic with period
//! `ord(phi_A)`, and one period is the cofactor of `phi_A`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gf2poly::F2Poly;
use crate::limits;
use crate::order_beta;

/// Sorted, distinct digits starting at 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitSet {
    digits: Vec<u64>,
}

impl DigitSet {
    pub fn new(mut digits: Vec<u64>) -> Result<Self> {
        digits.sort_unstable();
        if digits.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidDigitSet("digits must be distinct".into()));
        }
        if digits.first() != Some(&0) {
            return Err(Error::InvalidDigitSet("digit set must contain 0".into()));
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn max_digit(&self) -> u64 {
        *self.digits.last().expect("digit set is never empty")
    }
}

impl FromStr for DigitSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse {
                token: s.to_string(),
                reason: "expected {a,b,...}".into(),
            })?;
        let digits = inner
            .split(',')
            .map(|t| {
                t.parse::<u64>().map_err(|_| Error::Parse {
                    token: t.to_string(),
                    reason: "digit is not a non-negative integer".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(digits)
    }
}

impl fmt::Display for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Period of `f_A(n) mod 2` and the residues where it is odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityProfile {
    pub period: u64,
    /// Sorted residues `b` in `[0, period)` with `f_A(n)` odd iff `n = b (mod period)`.
    pub odd_residues: Vec<u64>,
    pub order_exact: bool,
}

/// `phi_A = sum_{a in A} x^a`.
pub fn phi(set: &DigitSet) -> Result<F2Poly> {
    limits::ensure_bits(set.max_digit() + 1)?;
    Ok(F2Poly::from_exponents(
        set.digits.iter().map(|&a| a as usize),
    ))
}

/// Memoized exact counter of representations with digits from one set.
///
/// Peels the lowest digit: `f(n) = sum_{a <= n, a = n mod 2} f((n - a) / 2)`
/// with `f(0) = 1`. Not shareable across threads while counting.
#[derive(Debug, Clone)]
pub struct RepresentationCounter {
    set: DigitSet,
    memo: HashMap<u64, BigUint>,
}

impl RepresentationCounter {
    pub fn new(set: DigitSet) -> Self {
        Self {
            set,
            memo: HashMap::new(),
        }
    }

    pub fn count(&mut self, n: u64) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        if let Some(v) = self.memo.get(&n) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        for i in 0..self.set.digits.len() {
            let a = self.set.digits[i];
            if a > n {
                break;
            }
            if (n - a).is_multiple_of(2) {
                total += self.count((n - a) / 2);
            }
        }
        self.memo.insert(n, total.clone());
        total
    }
}

pub fn count_representations(set: &DigitSet, n: u64) -> BigUint {
    RepresentationCounter::new(set.clone()).count(n)
}

/// First `len` values of `f_A(n) mod 2`, from the recurrence behind
/// `phi_A * F_A = 1`: bit `n` is the xor of bits `n - a` for nonzero `a` in `A`.
pub fn parity_series(set: &DigitSet, len: usize) -> Result<Vec<bool>> {
    limits::ensure_bits(len as u64)?;
    let mut bits = vec![false; len];
    let offsets: Vec<usize> = set.digits[1..].iter().map(|&a| a as usize).collect();
    for n in 0..len {
        let mut b = n == 0;
        for &a in &offsets {
            if a > n {
                break;
            }
            b ^= bits[n - a];
        }
        bits[n] = b;
    }
    Ok(bits)
}

/// The same series by power-series long division of 1 by `phi_A`, lowest degree first.
pub fn parity_series_by_division(set: &DigitSet, len: usize) -> Result<F2Poly> {
    let phi = phi(set)?;
    let mut rem = F2Poly::one();
    let mut quot = F2Poly::zero();
    for i in 0..len {
        if rem.coeff(i) {
            quot.add_shifted(&F2Poly::one(), i);
            rem.add_shifted(&phi, i);
            rem = rem.truncated(len);
        }
    }
    Ok(quot)
}

/// Profile at the exact order of `phi_A`.
pub fn parity_profile(set: &DigitSet) -> Result<ParityProfile> {
    let f = phi(set)?;
    let d = order_beta::order(&f, None)?;
    profile_at(&f, d, true)
}

/// Profile over a supplied multiple `period` of the order.
pub fn parity_profile_at(set: &DigitSet, period: u64) -> Result<ParityProfile> {
    let f = phi(set)?;
    let check = order_beta::verify_order_divides(&f, period)?;
    if !check.divides {
        return Err(Error::NotAPeriod { n: period });
    }
    profile_at(&f, period, check.exact)
}

fn profile_at(f: &F2Poly, period: u64, order_exact: bool) -> Result<ParityProfile> {
    let cof = order_beta::cofactor(f, period)?;
    Ok(ParityProfile {
        period,
        odd_residues: cof.exponents().map(|e| e as u64).collect(),
        order_exact,
    })
}

/// Stern's diatomic sequence: `s(0) = 0`, `s(1) = 1`, `s(2n) = s(n)`, `s(2n+1) = s(n) + s(n+1)`.
pub fn stern(n: u64) -> BigUint {
    // Invariant: s(n) = a * s(m) + b * s(m + 1) for the unread prefix m of n.
    let (mut a, mut b) = (BigUint::one(), BigUint::zero());
    let mut m = n;
    while m > 0 {
        if m & 1 == 1 {
            b += &a;
        } else {
            a += &b;
        }
        m >>= 1;
    }
    b
}

/// Largest row index accepted by [`diatomic_row`].
pub const MAX_DIATOMIC_ROW: u32 = 30;

/// Row `k` of the Stern diatomic array: row 0 is `1 1`, and each next row
/// inserts the sum of every adjacent pair.
pub fn diatomic_row(k: u32) -> Result<Vec<u64>> {
    if k > MAX_DIATOMIC_ROW {
        return Err(Error::InvalidArgument(format!(
            "row {k} exceeds {MAX_DIATOMIC_ROW}"
        )));
    }
    let mut row = vec![1u64, 1];
    for _ in 0..k {
        let mut next = Vec::with_capacity(2 * row.len() - 1);
        for w in row.windows(2) {
            next.push(w[0]);
            next.push(w[0] + w[1]);
        }
        next.push(*row.last().unwrap());
        row = next;
    }
    Ok(row)
}
