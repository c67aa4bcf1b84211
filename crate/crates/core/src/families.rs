//! The four quadrinomial families of robust polynomials.
//!
//! For `r >= 1`:
//!
//! - variant 1: `f_{r,1} = 1 + x + x^(2^r-1) + x^(2^r+1)`, period `4^r - 1`
//! - variant 2: `f_{r,2} = 1 + x + x^(2^r) + x^(2^r+2)`, period `4^r + 2^r + 1`
//!
//! and their reciprocals. The cofactor at the predicted period has a closed
//! form built from shifted blocks `x^e (1+x)^(n-1)`; the blocks never overlap,
//! so its weight is a sum of odd-binomial counts, which is where
//! `sum 2^popcount(k) = 3^r - 2^r` enters.

use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2poly::F2Poly;
use crate::limits;
use crate::order_beta;

/// Highest `r` whose period fits comfortably in 64-bit arithmetic.
pub const MAX_R: u32 = 31;

/// Default ceiling on `r` for exact-order certification.
pub const DEFAULT_EXACT_ORDER_CEILING: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    One,
    Two,
}

impl TryFrom<u8> for Variant {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Variant::One),
            2 => Ok(Variant::Two),
            _ => Err(Error::InvalidFamily(format!(
                "variant must be 1 or 2, got {v}"
            ))),
        }
    }
}

impl Variant {
    pub fn number(self) -> u8 {
        match self {
            Variant::One => 1,
            Variant::Two => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilySpec {
    pub r: u32,
    pub variant: Variant,
    pub reciprocal: bool,
}

/// Predicted period and cofactor statistics: `c` odd terms, `d` even terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyPrediction {
    pub period: u64,
    pub c: u64,
    pub d: u64,
}

fn check_r(r: u32) -> Result<()> {
    if r == 0 || r > MAX_R {
        return Err(Error::InvalidFamily(format!(
            "r must be in 1..={MAX_R}, got {r}"
        )));
    }
    Ok(())
}

impl FamilySpec {
    pub fn new(r: u32, variant: Variant, reciprocal: bool) -> Result<Self> {
        check_r(r)?;
        Ok(Self {
            r,
            variant,
            reciprocal,
        })
    }

    pub fn prediction(&self) -> FamilyPrediction {
        prediction(self.r, self.variant)
    }

    pub fn flipped(&self) -> Self {
        Self {
            reciprocal: !self.reciprocal,
            ..*self
        }
    }
}

impl std::fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.reciprocal { "(R)," } else { "" };
        write!(f, "f_{{{tag}{},{}}}", self.r, self.variant.number())
    }
}

pub fn prediction(r: u32, variant: Variant) -> FamilyPrediction {
    let (p2, p3, p4) = (1u64 << r, 3u64.pow(r), 1u64 << (2 * r));
    match variant {
        Variant::One => FamilyPrediction {
            period: p4 - 1,
            c: p4 - p3,
            d: p3 - 1,
        },
        Variant::Two => FamilyPrediction {
            period: p4 + p2 + 1,
            c: p4 - p3 + p2,
            d: p3 + 1,
        },
    }
}

pub fn build(spec: FamilySpec) -> Result<F2Poly> {
    check_r(spec.r)?;
    let t = 1usize << spec.r;
    limits::ensure_bits(t as u64 + 3)?;
    let exps = match (spec.variant, spec.reciprocal) {
        (Variant::One, false) => [0, 1, t - 1, t + 1],
        (Variant::One, true) => [0, 2, t, t + 1],
        (Variant::Two, false) => [0, 1, t, t + 2],
        (Variant::Two, true) => [0, 2, t + 1, t + 2],
    };
    Ok(F2Poly::from_exponents(exps))
}

/// `(1 + x)^n`, as the product of `1 + x^(2^i)` over the set bits of `n`.
pub fn binomial_power(n: u64) -> F2Poly {
    let mut acc = F2Poly::one();
    for i in 0..64 {
        if (n >> i) & 1 == 1 {
            acc = acc.mul(&F2Poly::one_plus_x_pow(1 << i));
        }
    }
    acc
}

/// The product form whose multiple by `1 + x^a + x^b` telescopes:
/// variant 1 is `prod_{j<r} (1 + x^((2^r-1) 2^j) + x^(2^r 2^j)) + x^(4^r - 2^r)`,
/// variant 2 is `prod_{j<r} (1 + x^(2^j 2^r) + x^(2^j (2^r+1)))`.
pub fn g_product(r: u32, variant: Variant) -> Result<F2Poly> {
    check_r(r)?;
    let t = 1usize << r;
    limits::ensure_bits(prediction(r, variant).period + 1)?;
    let (a, b) = match variant {
        Variant::One => (t - 1, t),
        Variant::Two => (t, t + 1),
    };
    let mut g = F2Poly::one();
    for j in 0..r {
        g = g.mul(&F2Poly::from_exponents([0, a << j, b << j]));
    }
    if variant == Variant::One {
        g += &F2Poly::monomial(t * t - t);
    }
    Ok(g)
}

/// Closed form of the cofactor at the predicted period:
/// variant 1 is `sum_{j < 4^r - 2^r} x^j + sum_{n=1}^{2^r-1} x^((2^r-1) n) (1+x)^(n-1)`,
/// variant 2 is `sum_{j < 4^r} x^j + sum_{i=1}^{2^r-1} x^(2^r i) (1+x)^(i-1)`.
pub fn h_closed_form(r: u32, variant: Variant) -> Result<F2Poly> {
    check_r(r)?;
    let t = 1usize << r;
    limits::ensure_bits(prediction(r, variant).period + 1)?;
    let (ones, step) = match variant {
        Variant::One => (t * t - t, t - 1),
        Variant::Two => (t * t, t),
    };
    let mut blocks = F2Poly::zero();
    let mut prev_top = None;
    for n in 1..t {
        let block = binomial_power(n as u64 - 1);
        let low = step * n;
        // Blocks must not overlap, so the sum is a disjoint union.
        assert!(
            prev_top.is_none_or(|top| top < low),
            "block {n} overlaps block {}",
            n - 1
        );
        prev_top = Some(low + block.degree().expect("(1+x)^k is nonzero"));
        blocks.add_shifted(&block, low);
    }
    Ok(&F2Poly::all_ones(ones) + &blocks)
}

/// Checks `(1 + x^a + x^b) prod_{j<m} (1 + x^(2^j a) + x^(2^j b)) = 1 + x^(2^m a) + x^(2^m b)`.
pub fn ab_lemma_check(a: u64, b: u64, m: u32) -> Result<bool> {
    if a == 0 || a >= b || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "need 0 < a < b and m >= 1, got a={a} b={b} m={m}"
        )));
    }
    let top = b
        .checked_shl(m)
        .filter(|&v| v >> m == b)
        .ok_or_else(|| Error::InvalidArgument(format!("2^{m} * {b} overflows")))?;
    limits::ensure_bits(top + 1)?;
    let (a, b) = (a as usize, b as usize);
    let mut lhs = F2Poly::from_exponents([0, a, b]);
    for j in 0..m {
        lhs = lhs.mul(&F2Poly::from_exponents([0, a << j, b << j]));
    }
    Ok(lhs == F2Poly::from_exponents([0, a << m, b << m]))
}

/// `sum_{k=0}^{2^r - 2} 2^popcount(k)`, by direct summation.
pub fn glaisher_sum(r: u32) -> Result<u64> {
    if !(2..=32).contains(&r) {
        return Err(Error::InvalidArgument(format!(
            "r must be in 2..=32, got {r}"
        )));
    }
    Ok((0..(1u64 << r) - 1).map(|k| 1u64 << k.count_ones()).sum())
}

/// Number of odd entries in row `n` of Pascal's triangle: `2^popcount(n)`.
pub fn odd_binomial_count(n: u64) -> u128 {
    1u128 << n.count_ones()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyOptions {
    /// Largest `r` that `verify_family` will certify.
    pub exact_order_ceiling: u32,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        Self {
            exact_order_ceiling: DEFAULT_EXACT_ORDER_CEILING,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyVerdict {
    pub spec: FamilySpec,
    pub prediction: FamilyPrediction,
    pub period_divides: bool,
    pub order_exact: bool,
    /// `beta_N` at the predicted period; `None` if the period does not divide.
    pub beta: Option<(u64, u64)>,
    pub gamma: Option<BigRational>,
    pub matches_prediction: bool,
    /// Division cofactor equals the closed form (reversed for reciprocal specs).
    pub closed_form_matches: bool,
    pub robust: bool,
    /// Robustness is only claimed for `r >= 3`.
    pub robustness_asserted: bool,
    /// `gamma > 1 - (3/4)^r`.
    pub gamma_above_bound: bool,
}

impl FamilyVerdict {
    pub fn holds(&self) -> bool {
        self.period_divides
            && self.order_exact
            && self.matches_prediction
            && self.closed_form_matches
            && (!self.robustness_asserted || (self.robust && self.gamma_above_bound))
    }
}

pub fn verify_family(spec: FamilySpec, opts: FamilyOptions) -> Result<FamilyVerdict> {
    check_r(spec.r)?;
    if spec.r > opts.exact_order_ceiling {
        return Err(Error::InvalidFamily(format!(
            "r = {} is above the exact-order ceiling {}",
            spec.r, opts.exact_order_ceiling
        )));
    }
    let pred = spec.prediction();
    limits::ensure_bits(pred.period + 1)?;
    let f = build(spec)?;
    let check = order_beta::verify_order_divides(&f, pred.period)?;
    let mut verdict = FamilyVerdict {
        spec,
        prediction: pred,
        period_divides: check.divides,
        order_exact: check.exact,
        beta: None,
        gamma: None,
        matches_prediction: false,
        closed_form_matches: false,
        robust: false,
        robustness_asserted: spec.r >= 3,
        gamma_above_bound: false,
    };
    if !check.divides {
        return Ok(verdict);
    }
    let rep = order_beta::beta_n(&f, pred.period)?;
    let h = h_closed_form(spec.r, spec.variant)?;
    let expected = if spec.reciprocal { h.reciprocal()? } else { h };
    let p4 = 1u128 << (2 * spec.r);
    let p3 = 3u128.pow(spec.r);
    verdict.matches_prediction = rep.beta() == (pred.c, pred.d);
    verdict.closed_form_matches = expected == rep.cofactor;
    verdict.robust = rep.robust;
    verdict.gamma_above_bound = rep.ell1 as u128 * p4 > rep.period as u128 * (p4 - p3);
    verdict.beta = Some(rep.beta());
    verdict.gamma = Some(rep.gamma);
    Ok(verdict)
}

/// All four specs for each `r` in `1..=r_max`, ordered by `(r, variant, reciprocal)`.
pub fn verify_range(r_max: u32, opts: FamilyOptions, jobs: usize) -> Result<Vec<FamilyVerdict>> {
    let specs: Vec<FamilySpec> = (1..=r_max)
        .flat_map(|r| {
            [Variant::One, Variant::Two]
                .into_iter()
                .flat_map(move |variant| {
                    [false, true].into_iter().map(move |reciprocal| FamilySpec {
                        r,
                        variant,
                        reciprocal,
                    })
                })
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    pool.install(|| specs.par_iter().map(|&s| verify_family(s, opts)).collect())
}
