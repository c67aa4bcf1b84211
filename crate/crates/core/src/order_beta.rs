//! Order of a polynomial, its cofactor `f* = (1 + x^N) / f`, and the
//! odd/even statistics of that cofactor.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::gf2poly::F2Poly;
use crate::limits;

/// Result of checking a candidate period against `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderCheck {
    /// `f | 1 + x^candidate`.
    pub divides: bool,
    /// `candidate` is the order itself. Always false when `divides` is false.
    pub exact: bool,
}

/// Cofactor statistics of `f` at a period `N` (a multiple of its order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaReport {
    pub poly: F2Poly,
    pub period: u64,
    /// Whether `period` is known to be the order rather than a multiple of it.
    pub order_exact: bool,
    pub cofactor: F2Poly,
    /// Monomials of the cofactor: odd terms per period.
    pub ell1: u64,
    /// Zero coefficients of the cofactor viewed with `period` terms.
    pub ell0: u64,
    /// `ell1 / period`, reduced.
    pub gamma: BigRational,
    pub robust: bool,
}

impl BetaReport {
    pub fn beta(&self) -> (u64, u64) {
        (self.ell1, self.ell0)
    }

    /// `|ell1 - ell0|`.
    pub fn gap(&self) -> u64 {
        self.ell1.abs_diff(self.ell0)
    }
}

/// Outcome of comparing the coordinate gap to `2^(k/2)`, `k = deg f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapCheck {
    pub gap: u64,
    pub bound: f64,
    pub ok: bool,
}

/// `gap <= 2^(degree/2)`, decided on integers as `gap^2 <= 2^degree`.
pub fn gap_within_bound(gap: u64, degree: u32) -> bool {
    let sq = (gap as u128) * (gap as u128);
    degree >= 128 || sq <= 1u128 << degree
}

fn check_invertible(f: &F2Poly) -> Result<usize> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if !f.constant_term() {
        return Err(Error::ZeroConstantTerm);
    }
    if d == 0 {
        return Err(Error::DegreeTooSmall);
    }
    Ok(d)
}

/// `2^deg - 1`, the largest possible order, saturating.
pub fn default_scan_bound(degree: usize) -> u64 {
    if degree >= 64 {
        u64::MAX
    } else {
        (1u64 << degree) - 1
    }
}

/// Smallest `D >= 1` with `x^D = 1 (mod f)`, found by stepping `x^i mod f`.
pub fn order(f: &F2Poly, scan_bound: Option<u64>) -> Result<u64> {
    let d = check_invertible(f)?;
    let bound = scan_bound.unwrap_or_else(|| default_scan_bound(d));
    if d < 64 {
        let fw = f.words()[0];
        let mut state = 1u64;
        for step in 1..=bound {
            state <<= 1;
            if (state >> d) & 1 == 1 {
                state ^= fw;
            }
            if state == 1 {
                return Ok(step);
            }
        }
        return Err(Error::BoundExceeded { bound });
    }
    let fw = f.words();
    let mut state = vec![0u64; fw.len()];
    state[0] = 1;
    let (top_word, top_bit) = (d / 64, d % 64);
    for step in 1..=bound {
        let mut carry = 0u64;
        for w in state.iter_mut() {
            let next = *w >> 63;
            *w = (*w << 1) | carry;
            carry = next;
        }
        if (state[top_word] >> top_bit) & 1 == 1 {
            for (s, m) in state.iter_mut().zip(fw) {
                *s ^= m;
            }
        }
        if state[0] == 1 && state[1..].iter().all(|&w| w == 0) {
            return Ok(step);
        }
    }
    Err(Error::BoundExceeded { bound })
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Tests `ord(f) | candidate`, and whether `candidate` is the order exactly.
pub fn verify_order_divides(f: &F2Poly, candidate: u64) -> Result<OrderCheck> {
    check_invertible(f)?;
    if candidate == 0 {
        return Err(Error::InvalidArgument(
            "candidate period must be positive".into(),
        ));
    }
    if !F2Poly::modpow_x(candidate, f)?.is_one() {
        return Ok(OrderCheck {
            divides: false,
            exact: false,
        });
    }
    for p in prime_factors(candidate) {
        if F2Poly::modpow_x(candidate / p, f)?.is_one() {
            return Ok(OrderCheck {
                divides: true,
                exact: false,
            });
        }
    }
    Ok(OrderCheck {
        divides: true,
        exact: true,
    })
}

/// `(1 + x^n) / f`, failing unless the division is exact.
pub fn cofactor(f: &F2Poly, n: u64) -> Result<F2Poly> {
    check_invertible(f)?;
    if n == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    limits::ensure_bits(n + 1)?;
    let (q, r) = F2Poly::one_plus_x_pow(n as usize).divrem(f)?;
    if !r.is_zero() {
        return Err(Error::NotAPeriod { n });
    }
    Ok(q)
}

fn report(f: &F2Poly, period: u64, order_exact: bool) -> Result<BetaReport> {
    let cof = cofactor(f, period)?;
    let ell1 = cof.ell1();
    let ell0 = cof.ell0(period - 1)?;
    debug_assert_eq!(ell1 + ell0, period);
    let robust = ell1 > ell0 + 1;
    assert_eq!(
        robust,
        2 * ell1 > period + 1,
        "robustness formulations disagree"
    );
    Ok(BetaReport {
        poly: f.clone(),
        period,
        order_exact,
        cofactor: cof,
        ell1,
        ell0,
        gamma: BigRational::new(BigInt::from(ell1), BigInt::from(period)),
        robust,
    })
}

/// Statistics at the exact order.
pub fn beta(f: &F2Poly) -> Result<BetaReport> {
    beta_bounded(f, None)
}

/// [`beta`] with a cap on the order scan.
pub fn beta_bounded(f: &F2Poly, scan_bound: Option<u64>) -> Result<BetaReport> {
    let d = order(f, scan_bound)?;
    report(f, d, true)
}

/// Statistics at a supplied multiple `n` of the order.
pub fn beta_n(f: &F2Poly, n: u64) -> Result<BetaReport> {
    let check = verify_order_divides(f, n)?;
    if !check.divides {
        return Err(Error::NotAPeriod { n });
    }
    report(f, n, check.exact)
}

pub fn is_robust(f: &F2Poly) -> Result<bool> {
    Ok(beta(f)?.robust)
}

pub fn coordinate_gap_bound_check(f: &F2Poly) -> Result<GapCheck> {
    let rep = beta(f)?;
    let k = f.degree().expect("beta rejects the zero polynomial") as u32;
    let gap = rep.gap();
    Ok(GapCheck {
        gap,
        bound: 2f64.powf(k as f64 / 2.0),
        ok: gap_within_bound(gap, k),
    })
}
