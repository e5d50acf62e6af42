//! Exact N-expansion arithmetic.
//!
//! For a fixed integer `N >= 1` the map `T_N(x) = N/x - floor(N/x)` on `[0, 1]`
//! produces digits `floor(N/x) >= N`. A finite word `(e_1, ..., e_n)` evaluates
//! to `N/(e_1 + N/(e_2 + ... + N/e_n))`, and its convergents obey
//!
//! ```text
//! p_k = e_k p_{k-1} + N p_{k-2},   q_k = e_k q_{k-1} + N q_{k-2}
//! p_{-1} = 1, q_{-1} = 0, p_0 = 0, q_0 = 1
//! ```
//!
//! with `p_{k-1} q_k - p_k q_{k-1} = (-N)^k`. Everything here is exact.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// The expansion parameter `N >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct NParam(u64);

impl NParam {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            Err(Error::InvalidParameter(n))
        } else {
            Ok(NParam(n))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl TryFrom<u64> for NParam {
    type Error = Error;

    fn try_from(n: u64) -> Result<Self> {
        NParam::new(n)
    }
}

impl From<NParam> for u64 {
    fn from(n: NParam) -> u64 {
        n.0
    }
}

impl fmt::Display for NParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An admissible digit word: every digit is at least `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DigitWord {
    #[serde(rename = "N")]
    n: NParam,
    digits: Vec<u64>,
    /// Set when the word came from a rational orbit that reached 0.
    terminated: bool,
}

impl DigitWord {
    pub fn new(n: NParam, digits: Vec<u64>) -> Result<Self> {
        if let Some((position, &digit)) = digits.iter().enumerate().find(|(_, &d)| d < n.get()) {
            return Err(Error::Inadmissible {
                digit,
                position,
                n: n.get(),
            });
        }
        Ok(DigitWord {
            n,
            digits,
            terminated: false,
        })
    }

    pub fn empty(n: NParam) -> Self {
        DigitWord {
            n,
            digits: Vec::new(),
            terminated: false,
        }
    }

    pub fn n(&self) -> NParam {
        self.n
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn terminated(&self) -> bool {
        self.terminated
    }

    /// The word with one more digit appended.
    pub fn child(&self, k: u64) -> Result<Self> {
        if k < self.n.get() {
            return Err(Error::DigitRange {
                digit: k,
                n: self.n.get(),
            });
        }
        let mut digits = self.digits.clone();
        digits.push(k);
        Ok(DigitWord {
            n: self.n,
            digits,
            terminated: false,
        })
    }
}

impl<'de> Deserialize<'de> for DigitWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "N")]
            n: NParam,
            digits: Vec<u64>,
            #[serde(default)]
            terminated: bool,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut word = DigitWord::new(raw.n, raw.digits).map_err(serde::de::Error::custom)?;
        word.terminated = raw.terminated;
        Ok(word)
    }
}

/// A convergent `p_k / q_k` (not reduced).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergentPair {
    #[serde(with = "bigint_string")]
    pub p: BigInt,
    #[serde(with = "bigint_string")]
    pub q: BigInt,
    pub index: usize,
}

impl ConvergentPair {
    pub fn value(&self) -> ExactRational {
        ExactRational::new(self.p.clone(), self.q.clone())
    }
}

/// One application of `T_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// `x = 0`, the fixed point.
    Terminal,
    Digit {
        digit: u64,
        next: ExactRational,
    },
}

pub fn apply_map(n: NParam, x: &ExactRational) -> Result<Step> {
    if x.is_negative() || *x > ExactRational::one() {
        return Err(Error::domain("x", x, "[0, 1]"));
    }
    if x.is_zero() {
        return Ok(Step::Terminal);
    }
    // N/x = N * den / num with num > 0.
    let scaled = n.big() * x.denom();
    let (digit, rem) = scaled.div_rem(x.numer());
    let next = ExactRational::new(rem, x.numer().clone());
    let digit = digit.to_u64().ok_or(Error::DigitOverflow)?;
    Ok(Step::Digit { digit, next })
}

/// Greedy digits of a rational in `(0, 1)`, at most `max_digits` of them.
pub fn digits_of(n: NParam, x: &ExactRational, max_digits: usize) -> Result<DigitWord> {
    if !x.is_positive() || *x >= ExactRational::one() {
        return Err(Error::domain("x", x, "(0, 1)"));
    }
    if max_digits == 0 {
        return Err(Error::range("max_digits", 0, 1));
    }
    let mut digits = Vec::new();
    let mut current = x.clone();
    let mut terminated = false;
    while digits.len() < max_digits {
        match apply_map(n, &current)? {
            Step::Terminal => {
                terminated = true;
                break;
            }
            Step::Digit { digit, next } => {
                digits.push(digit);
                current = next;
            }
        }
    }
    // The orbit may land on 0 exactly at the last permitted step.
    if !terminated && current.is_zero() {
        terminated = true;
    }
    Ok(DigitWord { n, digits, terminated })
}

/// Convergents `(p_k, q_k)` for `k = 0..=n`.
pub fn convergents(word: &DigitWord) -> Vec<ConvergentPair> {
    let n = word.n.big();
    let mut out = Vec::with_capacity(word.len() + 1);
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    out.push(ConvergentPair {
        p: p.clone(),
        q: q.clone(),
        index: 0,
    });
    for (i, &digit) in word.digits.iter().enumerate() {
        let e = BigInt::from(digit);
        let p_next = &e * &p + &n * &p_prev;
        let q_next = &e * &q + &n * &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(ConvergentPair {
            p: p.clone(),
            q: q.clone(),
            index: i + 1,
        });
    }
    out
}

/// Value of the finite N-continued fraction, evaluated from the innermost digit.
pub fn evaluate(word: &DigitWord) -> Result<ExactRational> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = ExactRational::from_integer(word.n.big());
    let mut value = ExactRational::zero();
    for &digit in word.digits.iter().rev() {
        value = &n / (ExactRational::from_integer(BigInt::from(digit)) + value);
    }
    Ok(value)
}

/// True iff `p_{k-1} q_k - p_k q_{k-1} = (-N)^k` for every consecutive pair.
pub fn check_determinant(pairs: &[ConvergentPair], n: NParam) -> bool {
    let minus_n = -n.big();
    let mut power = BigInt::one();
    pairs.windows(2).all(|w| {
        power *= &minus_n;
        &w[0].p * &w[1].q - &w[1].p * &w[0].q == power && w[1].index == w[0].index + 1
    })
}

/// Which denominator growth bound failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrowthBound {
    /// `q_k >= N q_{k-1}`
    Ratio,
    /// `q_n >= N^n`
    Power,
    /// `q_n^2 >= (2N)^(n-1)`
    Fibonacci,
}

/// Checks the three growth bounds on a denominator sequence `q_0..=q_n`.
/// Returns the first failing bound at the last index, if any; earlier
/// indices are checked only for the ratio bound, since shorter words are
/// enumerated separately.
pub fn check_growth(denominators: &[BigInt], n: NParam) -> Option<GrowthBound> {
    let len = denominators.len().checked_sub(1)?;
    if len == 0 {
        return None;
    }
    let nb = n.big();
    let last = &denominators[len];
    if denominators.windows(2).any(|w| w[1] < &nb * &w[0]) {
        return Some(GrowthBound::Ratio);
    }
    if *last < num_traits::pow(nb.clone(), len) {
        return Some(GrowthBound::Power);
    }
    if last * last < num_traits::pow(BigInt::from(2u8) * nb, len - 1) {
        return Some(GrowthBound::Fibonacci);
    }
    None
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
