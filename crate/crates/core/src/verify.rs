//! Exhaustive checks of the inequalities behind the dimension bounds, over
//! every admissible prefix up to a depth, reported as certificates.
//!
//! Interval lengths and rational factors are exact. Powers are compared in
//! the log domain in `f64` first; comparisons closer than the `f64` error
//! bound are redone at `NEXP_PRECISION_BITS`, and if still within the
//! comparison margin the verifier abstains with `PrecisionInsufficient`
//! rather than guess.

use std::cmp::Ordering;
use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::{tail_bracket, Neumaier, TailBracket};
use crate::error::{Error, Result};
use crate::expansion::{check_growth, convergents, DigitWord, NParam};
use crate::hp::{self, precision_bits, Hp};
use crate::rational::ExactRational;
use crate::words::{ln_length, Denom, Node, Overflow, Visitor, WordSpace};

/// Relative agreement below which an `f64` log-domain comparison is
/// redone in extended precision.
const FILTER: f64 = 1e-10;

/// Prefixes times children allowed when choosing a default depth.
pub const DEFAULT_CHECK_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConditionId {
    /// `|I_{n-1}|^s <= sum_k |I_n(., k)|^s`
    MassDistribution,
    /// `|I_{n-1}|^s >= sum_k |I_n(., k)|^s`
    Covering,
    /// `(N+1)^(1-s) [1 - N(q_{n-1} + q_{n-2}) / ((M+1) q_{n-1} + N q_{n-2})] >= 1`
    Sufficiency,
    /// The telescoped closed form of the level sum of `|I_n|`.
    Telescoping,
    /// `sum_{k >= alpha} |I_{n+1}|^s <= (1+N)^s (sum_{k >= alpha} k^(-2s)) |I_n|^s`
    GoodChildren,
    /// `q_k >= N q_{k-1}`, `q_n >= N^n` and `q_n^2 >= (2N)^(n-1)`.
    Growth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CertificateParams {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    pub depth: usize,
    /// Last child digit summed exactly (good children).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u64>,
    /// Prefix digits range over `alpha..alpha+span` (good children).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_digit: Option<u64>,
    /// Whether the hypothesis of the theorem the condition serves holds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis_holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCertificate {
    pub condition_id: ConditionId,
    pub params: CertificateParams,
    pub status: Status,
    pub witness_digits: Option<Vec<u64>>,
    pub words_checked: u64,
    pub precision_bits: usize,
}

impl ConditionCertificate {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Re-evaluates the condition on the witness word alone and reports
    /// whether the violation recurs. Certificates without a witness give
    /// `false`. Growth certificates are replayed with the true recurrence.
    pub fn reproduce(&self) -> Result<bool> {
        let Some(digits) = &self.witness_digits else {
            return Ok(false);
        };
        let n = NParam::new(self.params.n)?;
        let word = DigitWord::new(n, digits.clone())?;
        let p = &self.params;
        let need = |v: Option<u64>, what: &'static str| {
            v.ok_or_else(|| Error::domain(what, "missing", "certificate parameters"))
        };
        let s = p.s.unwrap_or(f64::NAN);
        let bits = self.precision_bits;
        let decision = match self.condition_id {
            ConditionId::MassDistribution | ConditionId::Covering => {
                let fails_when = if self.condition_id == ConditionId::Covering {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
                let check = ChildSum {
                    n: n.get(),
                    lo: n.get(),
                    hi: need(p.m, "M")?,
                    s,
                    bits,
                    fails_when,
                };
                decide_word(&check, &word)
            }
            ConditionId::Sufficiency => decide_word(
                &Sufficiency {
                    n: n.get(),
                    m: need(p.m, "M")?,
                    s,
                    bits,
                },
                &word,
            ),
            ConditionId::Telescoping => decide_word(
                &Telescoping {
                    n: n.get(),
                    m: need(p.m, "M")?,
                },
                &word,
            ),
            ConditionId::GoodChildren => decide_word(
                &GoodChildren::new(n, need(p.alpha, "alpha")?, s, need(p.cutoff, "cutoff")?)?,
                &word,
            ),
            ConditionId::Growth => {
                let qs: Vec<BigInt> = convergents(&word).into_iter().map(|c| c.q).collect();
                return Ok(check_growth(&qs, n).is_some());
            }
        };
        Ok(decision == Decision::Fails)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Decision {
    Holds,
    Fails,
    Boundary,
}

/// A condition evaluated on one prefix from its length and last two
/// denominators.
trait PrefixCheck {
    fn decide<D: Denom>(&self, len: usize, q: &D, q_prev: &D) -> std::result::Result<Decision, Overflow>;
}

enum Stop {
    Fail(Vec<u64>),
    Abstain(Vec<u64>),
    Overflow,
}

struct Runner<'a, C> {
    check: &'a C,
    checked: u64,
}

impl<C: PrefixCheck> Visitor for Runner<'_, C> {
    type Break = Stop;
    fn visit<D: Denom>(&mut self, node: Node<'_, D>) -> ControlFlow<Stop> {
        self.checked += 1;
        match self.check.decide(node.digits.len(), node.q, node.q_prev) {
            Ok(Decision::Holds) => ControlFlow::Continue(()),
            Ok(Decision::Fails) => ControlFlow::Break(Stop::Fail(node.digits.to_vec())),
            Ok(Decision::Boundary) => ControlFlow::Break(Stop::Abstain(node.digits.to_vec())),
            Err(Overflow) => ControlFlow::Break(Stop::Overflow),
        }
    }
}

/// Walks every prefix with `u128` denominators, redoing the walk in
/// `BigUint` if anything overflows.
fn run<C: PrefixCheck>(space: &WordSpace, check: &C) -> (u64, Option<Stop>) {
    let mut fast = Runner { check, checked: 0 };
    match space.walk::<u128, _>(&mut fast) {
        Ok(Some(Stop::Overflow)) | Err(Overflow) => {
            let mut slow = Runner { check, checked: 0 };
            let stop = space.walk::<BigUint, _>(&mut slow).unwrap_or(None);
            (slow.checked, stop)
        }
        Ok(stop) => (fast.checked, stop),
    }
}

fn certify(
    condition_id: ConditionId,
    params: CertificateParams,
    bits: usize,
    (words_checked, stop): (u64, Option<Stop>),
) -> Result<ConditionCertificate> {
    let (status, witness_digits) = match stop {
        None => (Status::Pass, None),
        Some(Stop::Fail(w)) => (Status::Fail, Some(w)),
        Some(Stop::Abstain(word)) => return Err(Error::PrecisionInsufficient { word, bits }),
        Some(Stop::Overflow) => unreachable!("big-integer walks do not overflow"),
    };
    Ok(ConditionCertificate {
        condition_id,
        params,
        status,
        witness_digits,
        words_checked,
        precision_bits: bits,
    })
}

/// Last two denominators `(q_n, q_{n-1})` of a word, with `q_{-1} = 0`.
fn word_denominators(word: &DigitWord) -> (BigUint, BigUint) {
    let pairs = convergents(word);
    let to_big = |v: &BigInt| v.to_biguint().expect("denominators are positive");
    let q = to_big(&pairs[pairs.len() - 1].q);
    let q_prev = match pairs.len() {
        1 => BigUint::zero(),
        len => to_big(&pairs[len - 2].q),
    };
    (q, q_prev)
}

fn decide_word<C: PrefixCheck>(check: &C, word: &DigitWord) -> Decision {
    let (q, q_prev) = word_denominators(word);
    check
        .decide(word.len(), &q, &q_prev)
        .unwrap_or_else(|_| unreachable!("big integers do not overflow"))
}

/// `ln sum exp(x)`.
fn log_sum_exp(xs: &[f64]) -> f64 {
    let top = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut acc = Neumaier::default();
    for &x in xs {
        acc.add((x - top).exp());
    }
    top + acc.sum().ln()
}

/// Orders two log-domain values when they differ by more than the `f64`
/// error bound at this magnitude.
fn filtered(lhs: f64, rhs: f64, scale: f64) -> Option<Ordering> {
    if (lhs - rhs).abs() > FILTER * (1.0 + scale) {
        lhs.partial_cmp(&rhs)
    } else {
        None
    }
}

fn decision(order: Option<Ordering>, fails_when: Ordering) -> Decision {
    match order {
        None => Decision::Boundary,
        Some(o) if o == fails_when => Decision::Fails,
        Some(_) => Decision::Holds,
    }
}

/// Parent `|I|^s` against the sum over children `lo..=hi`.
struct ChildSum {
    n: u64,
    lo: u64,
    hi: u64,
    s: f64,
    bits: usize,
    /// Ordering of parent against children sum that violates the condition.
    fails_when: Ordering,
}

impl ChildSum {
    fn compare<D: Denom>(&self, len: usize, q: &D, q_prev: &D) -> std::result::Result<Option<Ordering>, Overflow> {
        let parent = self.s * ln_length(self.n, len, q, q_prev).ok_or(Overflow)?;
        let mut children = Vec::with_capacity((self.hi - self.lo + 1) as usize);
        for k in self.lo..=self.hi {
            let qc = q.step(k, self.n, q_prev).ok_or(Overflow)?;
            children.push(self.s * ln_length(self.n, len + 1, &qc, q).ok_or(Overflow)?);
        }
        let sum = log_sum_exp(&children);
        let scale = children.iter().fold(parent.abs(), |m, c| m.max(c.abs()));
        Ok(match filtered(parent, sum, scale) {
            Some(o) => Some(o),
            None => self.extended(len, &q.to_big(), &q_prev.to_big()),
        })
    }

    fn extended(&self, len: usize, q: &BigUint, q_prev: &BigUint) -> Option<Ordering> {
        let mut h = Hp::new(self.bits);
        let s = h.float(self.s);
        let power = |h: &mut Hp, len: usize, q: &BigUint, q_prev: &BigUint| {
            let l = h.ln_length(self.n, len, q, &(q + q_prev));
            let e = h.mul(&s, &l);
            h.exp(&e)
        };
        let parent = power(&mut h, len, q, q_prev);
        let mut sum = h.int(0);
        for k in self.lo..=self.hi {
            let qc = q * k + q_prev * self.n;
            let term = power(&mut h, len + 1, &qc, q);
            sum = h.add(&sum, &term);
        }
        hp::compare(&h, &parent, &sum)
    }
}

impl PrefixCheck for ChildSum {
    fn decide<D: Denom>(&self, len: usize, q: &D, q_prev: &D) -> std::result::Result<Decision, Overflow> {
        Ok(decision(self.compare(len, q, q_prev)?, self.fails_when))
    }
}

/// Orders `|I(word)|^s` against `sum_{k=N}^{M} |I(word k)|^s`. `Equal` means
/// the two are within the comparison margin at `precision_bits()`.
pub fn compare_children(word: &DigitWord, m: u64, s: f64) -> Result<Ordering> {
    let n = word.n();
    check_nm(n, m)?;
    let check = ChildSum {
        n: n.get(),
        lo: n.get(),
        hi: m,
        s,
        bits: precision_bits(),
        fails_when: Ordering::Equal,
    };
    let (q, q_prev) = word_denominators(word);
    let order = check
        .compare(word.len(), &q, &q_prev)
        .unwrap_or_else(|_| unreachable!("big integers do not overflow"));
    Ok(order.unwrap_or(Ordering::Equal))
}

fn check_nm(n: NParam, m: u64) -> Result<()> {
    if m < n.get() {
        return Err(Error::range("M", m, n));
    }
    Ok(())
}

fn check_s_open(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain("s", s, "(0, 1)"));
    }
    Ok(())
}

fn check_depth(depth: usize) -> Result<()> {
    if depth == 0 {
        return Err(Error::range("depth", 0, 1));
    }
    Ok(())
}

fn bounded_space(n: NParam, m: u64, depth: usize) -> WordSpace {
    WordSpace {
        n: n.get(),
        lo: n.get(),
        hi: m,
        max_len: depth - 1,
    }
}

/// Largest depth whose prefixes times children stay within
/// [`DEFAULT_CHECK_BUDGET`], at least 1.
pub fn default_depth(branches: u64) -> usize {
    let b = branches.max(1) as u128;
    let mut depth = 1;
    loop {
        let space_words: u128 = (0..=depth as u32).map(|j| b.saturating_pow(j)).sum();
        if depth >= 64 || space_words.saturating_mul(b) > DEFAULT_CHECK_BUDGET {
            return depth;
        }
        depth += 1;
    }
}

fn children_condition(
    id: ConditionId,
    n: NParam,
    m: u64,
    s: f64,
    depth: usize,
    fails_when: Ordering,
) -> Result<ConditionCertificate> {
    check_nm(n, m)?;
    check_s_open(s)?;
    check_depth(depth)?;
    let bits = precision_bits();
    let check = ChildSum {
        n: n.get(),
        lo: n.get(),
        hi: m,
        s,
        bits,
        fails_when,
    };
    let params = CertificateParams {
        n: n.get(),
        m: Some(m),
        s: Some(s),
        depth,
        ..Default::default()
    };
    certify(id, params, bits, run(&bounded_space(n, m, depth), &check))
}

/// `|I_{n-1}|^s <= sum_{k=N}^{M} |I_n(., k)|^s` for every prefix of length
/// `n - 1 <= depth - 1`.
pub fn verify_mass_distribution(n: NParam, m: u64, s: f64, depth: usize) -> Result<ConditionCertificate> {
    children_condition(ConditionId::MassDistribution, n, m, s, depth, Ordering::Greater)
}

/// `|I_{n-1}|^s >= sum_{k=N}^{M} |I_n(., k)|^s` for every prefix of length
/// `n - 1 <= depth - 1`.
pub fn verify_covering(n: NParam, m: u64, s: f64, depth: usize) -> Result<ConditionCertificate> {
    children_condition(ConditionId::Covering, n, m, s, depth, Ordering::Less)
}

struct Sufficiency {
    n: u64,
    m: u64,
    s: f64,
    bits: usize,
}

impl PrefixCheck for Sufficiency {
    fn decide<D: Denom>(&self, _len: usize, q: &D, q_prev: &D) -> std::result::Result<Decision, Overflow> {
        let (qb, qpb) = (q.to_big(), q_prev.to_big());
        // factor = 1 - N(q + q') / ((M+1) q + N q') = (M+1-N) q / ((M+1) q + N q')
        let num = &qb * (self.m + 1 - self.n);
        let den = &qb * (self.m + 1) + &qpb * self.n;
        // the factor is never below its worst case (M-N)/(M+1)
        if &num * (self.m + 1) < &den * (self.m - self.n) {
            return Ok(Decision::Fails);
        }
        let ln_n1 = ((self.n + 1) as f64).ln();
        let lhs = (1.0 - self.s) * ln_n1 + ((self.m + 1 - self.n) as f64).ln() + q.ln()
            - q.step(self.m + 1, self.n, q_prev).ok_or(Overflow)?.ln();
        let order = match filtered(lhs, 0.0, ln_n1 + q.ln()) {
            Some(o) => Some(o),
            None => {
                let mut h = Hp::new(self.bits);
                let e = h.float(1.0 - self.s);
                let base = h.int(self.n + 1);
                let power = h.pow(&base, &e);
                let factor = h.div(&h.big(&num), &h.big(&den));
                hp::compare(&h, &h.mul(&power, &factor), &h.int(1))
            }
        };
        Ok(decision(order, Ordering::Less))
    }
}

/// `(N+1)^(1-s) [1 - N(q_{n-1}+q_{n-2}) / ((M+1)q_{n-1} + N q_{n-2})] >= 1`
/// over every prefix of length `n - 1 <= depth - 1`, together with the
/// exact check that the bracketed factor is at least `1 - (N+1)/(M+1)`.
pub fn verify_sufficiency(n: NParam, m: u64, s: f64, depth: usize) -> Result<ConditionCertificate> {
    check_nm(n, m)?;
    check_s_open(s)?;
    check_depth(depth)?;
    let bits = precision_bits();
    let check = Sufficiency { n: n.get(), m, s, bits };
    let params = CertificateParams {
        n: n.get(),
        m: Some(m),
        s: Some(s),
        depth,
        hypothesis_holds: Some(m > 2 * n.get() + 1),
        ..Default::default()
    };
    certify(
        ConditionId::Sufficiency,
        params,
        bits,
        run(&bounded_space(n, m, depth), &check),
    )
}

/// The exact factor `1 - N(q_{n-1}+q_{n-2}) / ((M+1)q_{n-1} + N q_{n-2})`
/// for a prefix.
pub fn sufficiency_factor(prefix: &DigitWord, m: u64) -> Result<ExactRational> {
    let n = prefix.n();
    check_nm(n, m)?;
    let (q, q_prev) = word_denominators(prefix);
    let (q, q_prev) = (BigInt::from(q), BigInt::from(q_prev));
    let nb = n.big();
    let num = &nb * (&q + &q_prev);
    let den = BigInt::from(m + 1) * &q + &nb * &q_prev;
    Ok(ExactRational::from_integer(1.into()) - ExactRational::new(num, den))
}

struct Telescoping {
    n: u64,
    m: u64,
}

impl PrefixCheck for Telescoping {
    fn decide<D: Denom>(&self, _len: usize, q: &D, q_prev: &D) -> std::result::Result<Decision, Overflow> {
        let q1 = BigInt::from(q.to_big());
        let shift = BigInt::from(q_prev.to_big()) * self.n;
        let mut summed = ExactRational::zero();
        for k in self.n..=self.m {
            let a = &q1 * k + &shift;
            let b = &q1 * (k + 1) + &shift;
            summed += ExactRational::new(1.into(), a * b);
        }
        let first = ExactRational::new(1.into(), &q1 * self.n + &shift);
        let last = ExactRational::new(1.into(), &q1 * (self.m + 1) + &shift);
        let closed = (first - last) / ExactRational::from_integer(q1);
        Ok(if summed == closed {
            Decision::Holds
        } else {
            Decision::Fails
        })
    }
}

/// The telescoping identity, exactly, at every prefix of length
/// `<= depth - 1`.
pub fn verify_telescoping(n: NParam, m: u64, depth: usize) -> Result<ConditionCertificate> {
    check_nm(n, m)?;
    check_depth(depth)?;
    let params = CertificateParams {
        n: n.get(),
        m: Some(m),
        depth,
        ..Default::default()
    };
    let check = Telescoping { n: n.get(), m };
    certify(
        ConditionId::Telescoping,
        params,
        0,
        run(&bounded_space(n, m, depth), &check),
    )
}

/// Log-domain brackets for one prefix of the good-children inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GoodBrackets {
    pub lhs_low: f64,
    pub lhs_high: f64,
    pub rhs_low: f64,
    pub rhs_high: f64,
}

struct GoodChildren {
    n: u64,
    alpha: u64,
    s: f64,
    cutoff: u64,
    tail: TailBracket,
}

impl GoodChildren {
    fn new(n: NParam, alpha: u64, s: f64, cutoff: u64) -> Result<Self> {
        if alpha < n.get() {
            return Err(Error::range("alpha", alpha, n));
        }
        let tail = tail_bracket(alpha, s, cutoff)?;
        Ok(GoodChildren {
            n: n.get(),
            alpha,
            s,
            cutoff,
            tail,
        })
    }

    fn brackets<D: Denom>(&self, len: usize, q: &D, q_prev: &D) -> std::result::Result<GoodBrackets, Overflow> {
        let s = self.s;
        let t = 2.0 * s - 1.0;
        let parent = s * ln_length(self.n, len, q, q_prev).ok_or(Overflow)?;
        // lengths decrease in k, so the first child is the largest term
        let mut acc = Neumaier::default();
        let mut top = f64::NAN;
        for k in self.alpha..=self.cutoff {
            let qc = q.step(k, self.n, q_prev).ok_or(Overflow)?;
            let l = s * ln_length(self.n, len + 1, &qc, q).ok_or(Overflow)?;
            if top.is_nan() {
                top = l;
            }
            acc.add((l - top).exp());
        }
        let partial = top + acc.sum().ln();
        // |I_{n+1}(., k)| <= N^(n+1) / (k q_n)^2 for k > cutoff
        let ln_n = (self.n as f64).ln();
        let tail = s * ((len + 1) as f64 * ln_n - 2.0 * q.ln()) + ((self.cutoff as f64).powf(-t) / t).ln();
        let lhs_high = log_sum_exp(&[partial, tail]);
        let scale = s * (1.0 + self.n as f64).ln() + parent;
        Ok(GoodBrackets {
            lhs_low: partial,
            lhs_high,
            rhs_low: scale + self.tail.low.ln(),
            rhs_high: scale + self.tail.high.ln(),
        })
    }
}

impl PrefixCheck for GoodChildren {
    fn decide<D: Denom>(&self, len: usize, q: &D, q_prev: &D) -> std::result::Result<Decision, Overflow> {
        let b = self.brackets(len, q, q_prev)?;
        // no extended-precision retry: the bracket widths dominate rounding
        let order = filtered(b.lhs_high, b.rhs_low, b.lhs_high.abs().max(b.rhs_low.abs()));
        Ok(decision(order, Ordering::Greater))
    }
}

/// Brackets on both sides of the good-children inequality at one prefix.
pub fn good_children_brackets(prefix: &DigitWord, alpha: u64, s: f64, cutoff: u64) -> Result<GoodBrackets> {
    let check = GoodChildren::new(prefix.n(), alpha, s, cutoff)?;
    let (q, q_prev) = word_denominators(prefix);
    Ok(check
        .brackets(prefix.len(), &q, &q_prev)
        .unwrap_or_else(|_| unreachable!("big integers do not overflow")))
}

/// Default number of prefix digits per level for the good-children check.
pub const DEFAULT_GOOD_SPAN: u64 = 3;

/// `sum_{k >= alpha} |I_{n+1}(., k)|^s <= (1+N)^s (sum_{k >= alpha}
/// k^(-2s)) |I_n|^s` for every prefix of length `n <= depth - 1` with
/// digits in `alpha..alpha+span`. Children up to `cutoff` are summed one by
/// one and the rest bounded above; the right side uses the lower tail
/// bracket. Passes when the upper left bracket is below the lower right
/// bracket.
pub fn verify_good_children(
    n: NParam,
    alpha: u64,
    s: f64,
    depth: usize,
    cutoff: u64,
    span: u64,
) -> Result<ConditionCertificate> {
    check_depth(depth)?;
    if span == 0 {
        return Err(Error::range("span", 0, 1));
    }
    let check = GoodChildren::new(n, alpha, s, cutoff)?;
    let bits = precision_bits();
    let space = WordSpace {
        n: n.get(),
        lo: alpha,
        hi: alpha + span - 1,
        max_len: depth - 1,
    };
    let hypothesis = (alpha as f64 - 1.0).ln() > (1.0 + n.as_f64()).exp();
    let params = CertificateParams {
        n: n.get(),
        alpha: Some(alpha),
        s: Some(s),
        depth,
        cutoff: Some(cutoff),
        span: Some(span),
        hypothesis_holds: Some(hypothesis),
        ..Default::default()
    };
    certify(ConditionId::GoodChildren, params, bits, run(&space, &check))
}

/// The growth bounds over every word of length `1..=depth` with digits in
/// `N..=max_digit`.
pub fn verify_growth(n: NParam, depth: usize, max_digit: u64) -> Result<ConditionCertificate> {
    verify_growth_with(n, depth, max_digit, |_, q| q)
}

/// As [`verify_growth`], with each new denominator passed through
/// `adjust(digits, q)` before it is checked and used further.
pub fn verify_growth_with(
    n: NParam,
    depth: usize,
    max_digit: u64,
    adjust: impl Fn(&[u64], BigInt) -> BigInt,
) -> Result<ConditionCertificate> {
    check_depth(depth)?;
    if max_digit < n.get() {
        return Err(Error::range("max_digit", max_digit, n));
    }
    struct Walk<'a, F> {
        n: NParam,
        depth: usize,
        max_digit: u64,
        adjust: &'a F,
        checked: u64,
    }
    impl<F: Fn(&[u64], BigInt) -> BigInt> Walk<'_, F> {
        fn recurse(&mut self, digits: &mut Vec<u64>, qs: &mut Vec<BigInt>) -> Option<Vec<u64>> {
            let nb = self.n.big();
            for k in self.n.get()..=self.max_digit {
                let last = &qs[qs.len() - 1];
                let before = if qs.len() >= 2 {
                    qs[qs.len() - 2].clone()
                } else {
                    BigInt::zero()
                };
                let q = last * k + &nb * before;
                digits.push(k);
                qs.push((self.adjust)(digits, q));
                self.checked += 1;
                if check_growth(qs, self.n).is_some() {
                    return Some(digits.clone());
                }
                if digits.len() < self.depth {
                    if let Some(w) = self.recurse(digits, qs) {
                        return Some(w);
                    }
                }
                digits.pop();
                qs.pop();
            }
            None
        }
    }
    let mut walk = Walk {
        n,
        depth,
        max_digit,
        adjust: &adjust,
        checked: 0,
    };
    let witness = walk.recurse(&mut Vec::new(), &mut vec![BigInt::from(1u8)]);
    Ok(ConditionCertificate {
        condition_id: ConditionId::Growth,
        params: CertificateParams {
            n: n.get(),
            depth,
            max_digit: Some(max_digit),
            ..Default::default()
        },
        status: if witness.is_some() { Status::Fail } else { Status::Pass },
        witness_digits: witness,
        words_checked: walk.checked,
        precision_bits: 0,
    })
}

/// `s_low`: the largest `s` found at which the mass-distribution condition
/// passes; `s_high`: the smallest at which the covering condition passes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub s_low: f64,
    pub s_high: f64,
}

/// Bisects each condition's pass/fail threshold in `s` to within `tol`,
/// for alphabet `{N..M}` and prefixes up to `depth`. Abstentions count as
/// failures, so both ends are on the passing side.
pub fn proof_thresholds(n: NParam, m: u64, depth: usize, tol: f64) -> Result<Thresholds> {
    check_nm(n, m)?;
    check_depth(depth)?;
    let bits = precision_bits();
    let space = bounded_space(n, m, depth);
    let passes = |s: f64, fails_when: Ordering| {
        let check = ChildSum {
            n: n.get(),
            lo: n.get(),
            hi: m,
            s,
            bits,
            fails_when,
        };
        run(&space, &check).1.is_none()
    };
    let bisect = |fails_when: Ordering, pass_low: bool| {
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if passes(mid, fails_when) == pass_low {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if pass_low {
            lo
        } else {
            hi
        }
    };
    Ok(Thresholds {
        s_low: bisect(Ordering::Greater, true),
        s_high: bisect(Ordering::Less, false),
    })
}

/// The number of words of length `1..=depth` over `branches` digits.
pub fn word_count(branches: u64, depth: usize) -> u64 {
    (1..=depth as u32)
        .map(|j| (branches as u128).saturating_pow(j))
        .sum::<u128>()
        .to_u64()
        .unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{good_bracket, jarnik_lower, jarnik_upper};

    fn np(v: u64) -> NParam {
        NParam::new(v).unwrap()
    }

    #[test]
    fn mass_distribution_examples() {
        let s = jarnik_lower(np(1), 10).unwrap().value;
        let c = verify_mass_distribution(np(1), 10, s, 4).unwrap();
        assert!(c.passed());
        assert_eq!(c.words_checked, 1 + 10 + 100 + 1000);

        let c = verify_mass_distribution(np(1), 10, 0.999, 3).unwrap();
        assert_eq!(c.status, Status::Fail);
        assert!(c.reproduce().unwrap());

        let c = verify_mass_distribution(np(1), 1, 0.3, 2).unwrap();
        assert_eq!(c.witness_digits, Some(vec![]));
    }

    #[test]
    fn covering_examples() {
        let s = jarnik_upper(np(1), 10).unwrap().value;
        assert!(verify_covering(np(1), 10, s, 4).unwrap().passed());
        let c = verify_covering(np(1), 10, 0.5, 3).unwrap();
        assert_eq!(c.status, Status::Fail);
        assert!(c.reproduce().unwrap());
    }

    #[test]
    fn sufficiency_examples() {
        let s = jarnik_lower(np(1), 10).unwrap().value;
        let c = verify_sufficiency(np(1), 10, s, 5).unwrap();
        assert!(c.passed());
        assert_eq!(c.params.hypothesis_holds, Some(true));
        let s3 = jarnik_lower(np(1), 3).unwrap().value.max(0.1);
        let c = verify_sufficiency(np(1), 3, s3, 3).unwrap();
        assert_eq!(c.params.hypothesis_holds, Some(false));
    }

    #[test]
    fn sufficiency_factor_worst_case() {
        let w = DigitWord::new(np(2), vec![2, 2, 2]).unwrap();
        let f = sufficiency_factor(&w, 9).unwrap();
        assert!(f >= crate::rational::ratio(9 - 2, 10));
    }

    #[test]
    fn telescoping_certificate() {
        assert!(verify_telescoping(np(2), 9, 3).unwrap().passed());
    }

    #[test]
    fn good_children_pass_and_divergence() {
        let s = good_bracket(np(1), 2000.0).unwrap().upper.unwrap();
        let c = verify_good_children(np(1), 2000, s, 2, 100_000, DEFAULT_GOOD_SPAN).unwrap();
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.words_checked, 4);
        assert_eq!(
            verify_good_children(np(1), 2000, 0.5, 2, 100_000, 3),
            Err(Error::Divergence(0.5))
        );
        let w = DigitWord::new(np(1), vec![2001]).unwrap();
        let b = good_children_brackets(&w, 2000, s, 10_000).unwrap();
        assert!(b.lhs_low <= b.lhs_high && b.rhs_low <= b.rhs_high);
    }

    #[test]
    fn growth_examples() {
        let c = verify_growth(np(1), 6, 5).unwrap();
        assert!(c.passed());
        assert_eq!(c.words_checked, (1..=6).map(|j| 5u64.pow(j)).sum::<u64>());
        assert!(verify_growth(np(3), 4, 6).unwrap().passed());

        let c = verify_growth_with(np(1), 4, 3, |d, q| if d.len() == 2 { q - 1 } else { q }).unwrap();
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.witness_digits, Some(vec![1, 1]));
    }

    #[test]
    fn duality_at_a_word() {
        let w = DigitWord::new(np(1), vec![3, 1]).unwrap();
        assert_eq!(compare_children(&w, 10, 0.2).unwrap(), Ordering::Less);
        assert_eq!(compare_children(&w, 10, 0.99).unwrap(), Ordering::Greater);
    }

    #[test]
    fn certificate_json_shape() {
        let c = verify_growth(np(1), 2, 2).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["condition_id"], "GROWTH");
        assert_eq!(v["status"], "PASS");
        assert!(v["witness_digits"].is_null());
        assert_eq!(v["params"]["N"], 1);
    }

    #[test]
    fn extended_precision_settles_near_ties() {
        // s with (1/2)^s + (1/6)^s = 1 to f64 accuracy, so the f64 filter
        // cannot decide the empty prefix of {1, 2}
        let f = |s: f64| 0.5f64.powf(s) + (1.0 / 6.0f64).powf(s) - 1.0;
        let (mut lo, mut hi) = (0.1, 0.9);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let at = |bits| ChildSum {
            n: 1,
            lo: 1,
            hi: 2,
            s: lo,
            bits,
            fails_when: Ordering::Greater,
        };
        let one = BigUint::from(1u8);
        let zero = BigUint::zero();
        assert_eq!(filtered(0.0, f(lo), 1.0), None);
        let coarse = at(128).extended(0, &one, &zero);
        assert!(coarse.is_some());
        assert_eq!(coarse, at(256).extended(0, &one, &zero));
        assert_eq!(at(128).compare(0, &1u128, &0u128).unwrap(), coarse);
    }

    #[test]
    fn exact_ties_abstain() {
        let check = ChildSum {
            n: 2,
            lo: 2,
            hi: 2,
            s: 0.0,
            bits: 128,
            fails_when: Ordering::Greater,
        };
        let space = bounded_space(np(2), 2, 2);
        let result = certify(
            ConditionId::MassDistribution,
            CertificateParams::default(),
            128,
            run(&space, &check),
        );
        assert_eq!(
            result,
            Err(Error::PrecisionInsufficient {
                word: vec![],
                bits: 128
            })
        );
        let w = DigitWord::empty(np(2));
        assert_eq!(compare_children(&w, 2, 0.0).unwrap(), Ordering::Equal);
    }

    #[test]
    fn thresholds_bracket_the_dimension() {
        let t = proof_thresholds(np(1), 3, 5, 1e-6).unwrap();
        let dim = crate::pressure::estimate_dim_collocation(
            &crate::pressure::AlphabetSpec::bounded(np(1), 3).unwrap(),
            32,
            1e-10,
        )
        .unwrap()
        .value;
        assert!(t.s_low <= dim && dim <= t.s_high, "{t:?} {dim}");
    }
}
