//! Extended-precision evaluation on top of `astro-float`.

use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, RoundingMode};
use num_bigint::BigUint;

pub const PRECISION_ENV: &str = "NEXP_PRECISION_BITS";
pub const DEFAULT_PRECISION_BITS: usize = 128;
pub const MIN_PRECISION_BITS: usize = 64;

/// Working precision in bits: `NEXP_PRECISION_BITS` if set to an integer,
/// otherwise 128. Never below 64.
pub fn precision_bits() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(DEFAULT_PRECISION_BITS)
        .max(MIN_PRECISION_BITS)
}

/// Relative distance below which a comparison at `bits` precision abstains.
/// At 128 bits this is `2^-96`.
pub fn comparison_margin(bits: usize) -> BigFloat {
    let exp = bits.saturating_sub(32).max(32);
    let mut ctx = Hp::new(bits + 8);
    let two = ctx.int(2);
    let e = ctx.int(exp as u64);
    let neg = e.neg();
    ctx.pow(&two, &neg)
}

const RM: RoundingMode = RoundingMode::ToEven;

/// A precision plus the constant cache astro-float needs for ln/exp.
pub struct Hp {
    bits: usize,
    consts: Consts,
}

impl Hp {
    pub fn new(bits: usize) -> Self {
        Hp {
            bits,
            consts: Consts::new().expect("allocate astro-float constant cache"),
        }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn int(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.bits)
    }

    pub fn float(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.bits)
    }

    pub fn big(&self, v: &BigUint) -> BigFloat {
        let radix = {
            let hi = BigFloat::from_u64(1 << 32, self.bits);
            hi.mul(&hi, self.bits, RM)
        };
        let mut acc = BigFloat::from_u64(0, self.bits);
        for digit in v.iter_u64_digits().rev() {
            acc = acc.mul(&radix, self.bits, RM).add(&self.int(digit), self.bits, RM);
        }
        acc
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.consts)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.consts)
    }

    pub fn pow(&mut self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.pow(b, self.bits, RM, &mut self.consts)
    }

    /// `ln(N^n / (q (q + q_prev)))`.
    pub fn ln_length(&mut self, n: u64, len: usize, q: &BigUint, q_sum: &BigUint) -> BigFloat {
        let ln_n = {
            let v = self.int(n);
            self.ln(&v)
        };
        let lq = {
            let v = self.big(q);
            self.ln(&v)
        };
        let lqs = {
            let v = self.big(q_sum);
            self.ln(&v)
        };
        let scaled = self.mul(&ln_n, &self.int(len as u64));
        self.sub(&self.sub(&scaled, &lq), &lqs)
    }
}

/// Orders `a` against `b`, or `None` when they differ by no more than the
/// comparison margin relative to the larger magnitude.
pub fn compare(h: &Hp, a: &BigFloat, b: &BigFloat) -> Option<Ordering> {
    // `BigFloat::abs_cmp` compares signed values in astro-float 0.9, so
    // magnitudes are taken explicitly.
    let diff = h.sub(a, b);
    let (abs_a, abs_b) = (magnitude(a), magnitude(b));
    let larger = if abs_a >= abs_b { abs_a } else { abs_b };
    let tol = h.mul(&comparison_margin(h.bits()), &larger);
    if diff.is_nan() || tol.is_nan() {
        return None;
    }
    if magnitude(&diff) <= tol {
        return None;
    }
    Some(if diff.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    })
}

fn magnitude(v: &BigFloat) -> BigFloat {
    if v.is_negative() {
        v.neg()
    } else {
        v.clone()
    }
}

/// Nearest f64, via the decimal representation.
pub fn to_f64(v: &BigFloat) -> f64 {
    if v.is_nan() {
        return f64::NAN;
    }
    if v.is_zero() {
        return 0.0;
    }
    v.to_string().parse().unwrap_or(f64::NAN)
}
