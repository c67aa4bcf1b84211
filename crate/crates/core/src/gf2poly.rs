//! Bit-packed polynomials over F2.
//!
//! Coefficients are stored little-endian in 64-bit words: bit `i` of word `k`
//! is the coefficient of `x^(64k + i)`. The word vector never carries trailing
//! zero words, so derived equality is coefficient-wise equality.
//!
//! Multiplication is schoolbook at word granularity (a windowed software
//! carry-less 64x64 product), with a shift-xor path when one operand is
//! sparse. Division is schoolbook with word-parallel xor of the shifted
//! divisor, `O((deg a - deg b) * words(b))`. Both are quadratic; a faster
//! kernel can replace `mul_words` without touching callers.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct F2Poly {
    words: Vec<u64>,
}

/// Index `n` of the polynomial `P_n` whose coefficients are the binary digits of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyIndex(pub u64);

impl PolyIndex {
    pub fn poly(self) -> F2Poly {
        F2Poly::from_index(self.0)
    }
}

impl TryFrom<&F2Poly> for PolyIndex {
    type Error = Error;

    fn try_from(p: &F2Poly) -> Result<Self> {
        p.index().map(PolyIndex).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "degree {:?} does not fit a 64-bit index",
                p.degree()
            ))
        })
    }
}

fn words_for_bits(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

fn trim(words: &mut Vec<u64>) {
    while words.last() == Some(&0) {
        words.pop();
    }
}

fn degree_of(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .rposition(|&w| w != 0)
        .map(|k| k * WORD_BITS + (WORD_BITS - 1 - words[k].leading_zeros() as usize))
}

/// `dst ^= src * x^shift`. Bits that would land past the end of `dst` must be zero.
fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let off = shift / WORD_BITS;
    let bit = shift % WORD_BITS;
    if bit == 0 {
        for (d, s) in dst[off..].iter_mut().zip(src) {
            *d ^= s;
        }
        return;
    }
    for (i, &w) in src.iter().enumerate() {
        if w == 0 {
            continue;
        }
        dst[off + i] ^= w << bit;
        let hi = w >> (WORD_BITS - bit);
        if hi != 0 {
            dst[off + i + 1] ^= hi;
        }
    }
}

/// Carry-less 64x64 -> 128 product using a 4-bit window table.
pub(crate) fn clmul64(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut table = [0u128; 16];
    for i in 1..16 {
        table[i] = if i & 1 == 1 {
            table[i ^ 1] ^ a
        } else {
            table[i >> 1] << 1
        };
    }
    let mut acc = 0u128;
    for k in (0..16).rev() {
        acc = (acc << 4) ^ table[((b >> (4 * k)) & 0xf) as usize];
    }
    acc
}

fn mul_words(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let p = clmul64(x, y);
            out[i + j] ^= p as u64;
            out[i + j + 1] ^= (p >> 64) as u64;
        }
    }
    out
}

/// Interleaves zero bits: bit i of `x` moves to bit 2i.
fn spread32(x: u32) -> u64 {
    let mut v = x as u64;
    v = (v | (v << 16)) & 0x0000_FFFF_0000_FFFF;
    v = (v | (v << 8)) & 0x00FF_00FF_00FF_00FF;
    v = (v | (v << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    v = (v | (v << 2)) & 0x3333_3333_3333_3333;
    v = (v | (v << 1)) & 0x5555_5555_5555_5555;
    v
}

/// Reduces `r` in place modulo `m` (nonzero, degree `dm`).
fn reduce_in_place(r: &mut Vec<u64>, m: &[u64], dm: usize) {
    let Some(mut top) = degree_of(r) else { return };
    while top >= dm {
        if (r[top / WORD_BITS] >> (top % WORD_BITS)) & 1 == 1 {
            xor_shifted(r, m, top - dm);
        }
        if top == 0 {
            break;
        }
        top -= 1;
    }
    trim(r);
}

impl F2Poly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self { words: vec![1] }
    }

    pub fn x() -> Self {
        Self { words: vec![2] }
    }

    pub fn monomial(e: usize) -> Self {
        let mut words = vec![0u64; e / WORD_BITS + 1];
        words[e / WORD_BITS] = 1 << (e % WORD_BITS);
        Self { words }
    }

    /// `1 + x^n`, the zero polynomial when `n = 0`.
    pub fn one_plus_x_pow(n: usize) -> Self {
        let mut p = Self::monomial(n);
        p.flip(0);
        p
    }

    /// `1 + x + ... + x^(n-1)`.
    pub fn all_ones(n: usize) -> Self {
        let mut words = vec![u64::MAX; n / WORD_BITS];
        if !n.is_multiple_of(WORD_BITS) {
            words.push((1u64 << (n % WORD_BITS)) - 1);
        }
        Self { words }
    }

    /// Sum of `x^e` over the exponents; repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = Self::zero();
        for e in exps {
            p.flip(e);
        }
        p
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        trim(&mut words);
        Self { words }
    }

    /// `P_n`: bit `i` of the result is bit `i` of `n`.
    pub fn from_index(n: u64) -> Self {
        Self::from_words(vec![n])
    }

    /// The inverse of [`F2Poly::from_index`], when the degree is below 64.
    pub fn index(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn degree(&self) -> Option<usize> {
        degree_of(&self.words)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / WORD_BITS)
            .is_some_and(|w| (w >> (i % WORD_BITS)) & 1 == 1)
    }

    pub fn constant_term(&self) -> bool {
        self.coeff(0)
    }

    fn flip(&mut self, i: usize) {
        let k = i / WORD_BITS;
        if k >= self.words.len() {
            self.words.resize(k + 1, 0);
        }
        self.words[k] ^= 1 << (i % WORD_BITS);
        trim(&mut self.words);
    }

    /// Number of monomials (the length `l1`).
    pub fn ell1(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of zero coefficients when viewed as a polynomial of degree `n`.
    pub fn ell0(&self, n: u64) -> Result<u64> {
        if let Some(d) = self.degree() {
            if (d as u64) > n {
                return Err(Error::LengthBelowDegree {
                    n,
                    degree: d as u64,
                });
            }
        }
        Ok(n + 1 - self.ell1())
    }

    /// Exponents with coefficient 1, ascending.
    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD_BITS + b)
            })
        })
    }

    /// `self * x^k`.
    pub fn shl(&self, k: usize) -> Self {
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        let mut words = vec![0u64; words_for_bits(d + k + 1)];
        xor_shifted(&mut words, &self.words, k);
        Self { words }
    }

    /// `self += other * x^k`, in place.
    pub fn add_shifted(&mut self, other: &Self, k: usize) {
        let Some(d) = other.degree() else { return };
        let need = words_for_bits(d + k + 1);
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        xor_shifted(&mut self.words, &other.words, k);
        trim(&mut self.words);
    }

    /// Keeps only the coefficients of `x^0 .. x^(n-1)`.
    pub fn truncated(&self, n: usize) -> Self {
        let mut words: Vec<u64> = self.words.iter().take(words_for_bits(n)).copied().collect();
        if !n.is_multiple_of(WORD_BITS) && words.len() == words_for_bits(n) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (n % WORD_BITS)) - 1;
        }
        Self::from_words(words)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (wa, wb) = (self.ell1(), other.ell1());
        let (sparse, dense, weight) = if wa <= wb {
            (self, other, wa)
        } else {
            (other, self, wb)
        };
        let sparse_cost = weight as usize * (dense.words.len() + 1);
        let dense_cost = self.words.len() * other.words.len() * 24;
        if sparse_cost <= dense_cost {
            let d = self.degree().unwrap() + other.degree().unwrap();
            let mut words = vec![0u64; words_for_bits(d + 1)];
            for e in sparse.exponents() {
                xor_shifted(&mut words, &dense.words, e);
            }
            Self::from_words(words)
        } else {
            Self::from_words(mul_words(&self.words, &other.words))
        }
    }

    /// `self^2 = self(x^2)`, computed by spreading bits.
    pub fn square(&self) -> Self {
        let mut words = Vec::with_capacity(2 * self.words.len());
        for &w in &self.words {
            words.push(spread32(w as u32));
            words.push(spread32((w >> 32) as u32));
        }
        Self::from_words(words)
    }

    /// `self(x^k)` for `k >= 1`.
    pub fn substitute_x_pow(&self, k: usize) -> Self {
        assert!(k >= 1, "substitution exponent must be positive");
        Self::from_exponents(self.exponents().map(|e| e * k))
    }

    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let Some(da) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if da < db {
            return Ok((Self::zero(), self.clone()));
        }
        let mut r = self.words.clone();
        let mut q = vec![0u64; words_for_bits(da - db + 1)];
        for i in (db..=da).rev() {
            if (r[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1 {
                let s = i - db;
                q[s / WORD_BITS] |= 1 << (s % WORD_BITS);
                xor_shifted(&mut r, &divisor.words, s);
            }
        }
        Ok((Self::from_words(q), Self::from_words(r)))
    }

    pub fn rem(&self, modulus: &Self) -> Result<Self> {
        let dm = modulus.degree().ok_or(Error::DivisionByZero)?;
        let mut r = self.words.clone();
        reduce_in_place(&mut r, &modulus.words, dm);
        Ok(Self { words: r })
    }

    /// `x^exponent mod modulus` by square-and-multiply.
    pub fn modpow_x(exponent: u64, modulus: &Self) -> Result<Self> {
        let dm = modulus.degree().ok_or(Error::ZeroPolynomial)?;
        if !modulus.constant_term() {
            return Err(Error::ZeroConstantTerm);
        }
        if dm == 0 {
            return Err(Error::DegreeTooSmall);
        }
        let mut acc = vec![1u64];
        for bit in (0..64 - exponent.leading_zeros()).rev() {
            let sq = Self { words: acc }.square();
            acc = sq.words;
            reduce_in_place(&mut acc, &modulus.words, dm);
            if (exponent >> bit) & 1 == 1 {
                acc = Self { words: acc }.shl(1).words;
                reduce_in_place(&mut acc, &modulus.words, dm);
            }
        }
        Ok(Self { words: acc })
    }

    /// `x^deg f * f(1/x)`: coefficients reversed over `0..=deg f`.
    pub fn reciprocal(&self) -> Result<Self> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok(Self::from_exponents(self.exponents().map(|e| d - e)))
    }

    /// Lowercase hex of the coefficient bitstring, `0x` prefixed.
    pub fn to_hex(&self) -> String {
        match self.words.split_last() {
            None => "0x0".to_string(),
            Some((top, rest)) => {
                let mut s = format!("0x{top:x}");
                for w in rest.iter().rev() {
                    s.push_str(&format!("{w:016x}"));
                }
                s
            }
        }
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let digits = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .unwrap_or(s);
        let bad = || Error::Parse {
            token: s.to_string(),
            reason: "expected hex digits".into(),
        };
        if digits.is_empty() {
            return Err(bad());
        }
        let bytes = digits.as_bytes();
        let mut words = Vec::with_capacity(bytes.len().div_ceil(16));
        for chunk in bytes.rchunks(16) {
            let chunk = std::str::from_utf8(chunk).map_err(|_| bad())?;
            words.push(u64::from_str_radix(chunk, 16).map_err(|_| bad())?);
        }
        Ok(Self::from_words(words))
    }

    fn parse_expression(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse {
                token: s.to_string(),
                reason: "empty polynomial".into(),
            });
        }
        let mut p = Self::zero();
        for term in compact.split('+') {
            let err = |reason: &str| Error::Parse {
                token: term.to_string(),
                reason: reason.into(),
            };
            match term {
                "" => return Err(err("empty term")),
                "0" => {}
                "1" => p.flip(0),
                "x" => p.flip(1),
                _ => {
                    let e = term
                        .strip_prefix("x^")
                        .ok_or_else(|| err("expected 1, x or x^k"))?
                        .parse::<usize>()
                        .map_err(|_| err("exponent is not a non-negative integer"))?;
                    p.flip(e);
                }
            }
        }
        Ok(p)
    }
}

/// Accepts `x^9 + x^7 + x + 1`, a hex bitstring `0x283`, or an index `@643`.
impl FromStr for F2Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(idx) = t.strip_prefix('@') {
            let n = idx.trim().parse::<u64>().map_err(|_| Error::Parse {
                token: t.to_string(),
                reason: "index must be a non-negative 64-bit integer".into(),
            })?;
            return Ok(Self::from_index(n));
        }
        if t.starts_with("0x") || t.starts_with("0X") {
            return Self::from_hex(t);
        }
        Self::parse_expression(t)
    }
}

impl fmt::Display for F2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let exps: Vec<usize> = self.exponents().collect();
        for (i, &e) in exps.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match e {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for F2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Poly({self})")
    }
}

impl AddAssign<&F2Poly> for F2Poly {
    fn add_assign(&mut self, rhs: &F2Poly) {
        if rhs.words.len() > self.words.len() {
            self.words.resize(rhs.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
        trim(&mut self.words);
    }
}

impl Add<&F2Poly> for &F2Poly {
    type Output = F2Poly;

    fn add(self, rhs: &F2Poly) -> F2Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for F2Poly {
    type Output = F2Poly;

    fn add(mut self, rhs: F2Poly) -> F2Poly {
        self += &rhs;
        self
    }
}

impl Mul<&F2Poly> for &F2Poly {
    type Output = F2Poly;

    fn mul(self, rhs: &F2Poly) -> F2Poly {
        F2Poly::mul(self, rhs)
    }
}
