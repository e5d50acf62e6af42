//! Fundamental intervals `I_n(e_1, ..., e_n)`: the points whose first `n`
//! digits are the given word.
//!
//! With `t = T_N^n(x)` ranging over `[0, 1)`, every point of `I_n` is
//! `(p_n + t p_{n-1}) / (q_n + t q_{n-1})`, so `p_n/q_n` is the closed end and
//! `(p_n + p_{n-1})/(q_n + q_{n-1})` the open end. The orientation flips with
//! the parity of `n` because the determinant is `(-N)^n`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{convergents, DigitWord, NParam};
use crate::rational::ExactRational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FundamentalInterval {
    pub word: DigitWord,
    #[serde(serialize_with = "crate::rational::serialize_str")]
    pub left: ExactRational,
    #[serde(serialize_with = "crate::rational::serialize_str")]
    pub right: ExactRational,
    pub closed_left: bool,
    pub closed_right: bool,
    #[serde(serialize_with = "crate::rational::serialize_str")]
    pub length: ExactRational,
}

impl FundamentalInterval {
    /// Closure containment. Fundamental intervals are sets of irrationals, so
    /// the rational endpoints carry no points and only the closures matter.
    pub fn contains(&self, other: &FundamentalInterval) -> bool {
        self.left <= other.left && other.right <= self.right
    }

    /// Disjointness with the half-open conventions taken literally.
    pub fn is_disjoint(&self, other: &FundamentalInterval) -> bool {
        let (a, b) = if self.left <= other.left {
            (self, other)
        } else {
            (other, self)
        };
        a.right < b.left || (a.right == b.left && !(a.closed_right && b.closed_left))
    }
}

/// Last two convergents of a word: `(p_n, q_n, p_{n-1}, q_{n-1})`.
fn tail_convergents(word: &DigitWord) -> (BigInt, BigInt, BigInt, BigInt) {
    let pairs = convergents(word);
    let last = &pairs[pairs.len() - 1];
    match pairs.len() {
        1 => (last.p.clone(), last.q.clone(), BigInt::one(), BigInt::zero()),
        len => {
            let prev = &pairs[len - 2];
            (last.p.clone(), last.q.clone(), prev.p.clone(), prev.q.clone())
        }
    }
}

pub fn fundamental_interval(word: &DigitWord) -> Result<FundamentalInterval> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let (p, q, p_prev, q_prev) = tail_convergents(word);
    let closed_end = ExactRational::new(p.clone(), q.clone());
    let open_end = ExactRational::new(p + p_prev, q + q_prev);
    let even = word.len().is_multiple_of(2);
    let (left, right) = if even {
        (closed_end, open_end)
    } else {
        (open_end, closed_end)
    };
    let length = &right - &left;
    Ok(FundamentalInterval {
        word: word.clone(),
        left,
        right,
        closed_left: even,
        closed_right: !even,
        length,
    })
}

/// `N^n / (q_n (q_n + q_{n-1}))`. The empty word gives `|I_0| = 1`.
pub fn interval_length(word: &DigitWord) -> ExactRational {
    let (_, q, _, q_prev) = tail_convergents(word);
    let numer = num_traits::pow(word.n().big(), word.len());
    let denom = &q * (&q + q_prev);
    ExactRational::new(numer, denom)
}

/// `N^{n+1} / ((1+N) q_n^2) <= |I_n| <= N^n / q_n^2`.
pub fn check_two_sided_bounds(word: &DigitWord) -> Result<bool> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = word.n().big();
    let (_, q, _, _) = tail_convergents(word);
    let len = interval_length(word);
    let power = num_traits::pow(n.clone(), word.len());
    let q2 = &q * &q;
    let lower = ExactRational::new(&power * &n, (BigInt::one() + &n) * &q2);
    let upper = ExactRational::new(power, q2);
    Ok(lower <= len && len <= upper)
}

/// `N/(3k^2) <= |I_{n+1}(w, k)| / |I_n(w)| <= 2N/k^2`.
pub fn check_ratio_bounds(parent: &DigitWord, k: u64) -> Result<bool> {
    let child = parent.child(k)?;
    let ratio = interval_length(&child) / interval_length(parent);
    let n = parent.n().big();
    let k2 = BigInt::from(k) * BigInt::from(k);
    let lower = ExactRational::new(n.clone(), BigInt::from(3u8) * &k2);
    let upper = ExactRational::new(BigInt::from(2u8) * n, k2);
    Ok(lower <= ratio && ratio <= upper)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TelescopingSum {
    pub summed: ExactRational,
    pub closed_form: ExactRational,
}

/// `sum_{k=N}^{M} 1/((k q_{n-1} + N q_{n-2})((k+1) q_{n-1} + N q_{n-2}))`,
/// summed term by term and checked against its telescoped closed form
/// `(1/q_{n-1}) [1/(N q_{n-1} + N q_{n-2}) - 1/((M+1) q_{n-1} + N q_{n-2})]`.
/// Here `q_{n-1}, q_{n-2}` are the last two denominators of `prefix`.
pub fn telescoping_sum(prefix: &DigitWord, m: u64) -> Result<TelescopingSum> {
    let n = prefix.n();
    if m < n.get() {
        return Err(Error::range("M", m, n));
    }
    let (_, q1, _, q2) = tail_convergents(prefix);
    let nb = n.big();
    let shift = &nb * &q2;
    let mut summed = ExactRational::zero();
    for k in n.get()..=m {
        let k = BigInt::from(k);
        let a = &k * &q1 + &shift;
        let b = (&k + 1u8) * &q1 + &shift;
        summed += ExactRational::new(BigInt::one(), a * b);
    }
    let first = ExactRational::new(BigInt::one(), &nb * &q1 + &shift);
    let last = ExactRational::new(BigInt::one(), BigInt::from(m + 1) * &q1 + &shift);
    let closed_form = (first - last) / ExactRational::from_integer(q1);
    if summed != closed_form {
        return Err(Error::IdentityViolation(format!(
            "telescoping sum {summed} != closed form {closed_form}"
        )));
    }
    Ok(TelescopingSum { summed, closed_form })
}

/// Children `I_{n+1}(parent, k)` for `k = lo..=hi`.
pub fn children(parent: &DigitWord, lo: u64, hi: u64) -> Result<Vec<FundamentalInterval>> {
    (lo..=hi)
        .map(|k| parent.child(k).and_then(|w| fundamental_interval(&w)))
        .collect()
}

/// `I_0 = (0, 1]` as a half-open interval, used as the parent of level one.
pub fn unit_interval(n: NParam) -> FundamentalInterval {
    FundamentalInterval {
        word: DigitWord::empty(n),
        left: ExactRational::zero(),
        right: ExactRational::one(),
        closed_left: false,
        closed_right: true,
        length: ExactRational::one(),
    }
}
