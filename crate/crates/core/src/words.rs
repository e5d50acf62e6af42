//! Depth-first enumeration of digit words over a bounded alphabet.
//!
//! Words are visited in pre-order, which is lexicographic order with every
//! prefix before its extensions, so the first violation found is also the
//! lexicographically smallest one. Denominators are tracked in `u128` and the
//! walk is redone in `BigUint` if that overflows.

use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Integer type carrying the denominators `q_n`.
pub trait Denom: Clone + std::fmt::Debug {
    fn from_u64(v: u64) -> Self;
    /// `k * self + n * prev`, or `None` on overflow.
    fn step(&self, k: u64, n: u64, prev: &Self) -> Option<Self>;
    fn plus(&self, other: &Self) -> Option<Self>;
    fn ln(&self) -> f64;
    fn to_big(&self) -> BigUint;
}

impl Denom for u128 {
    fn from_u64(v: u64) -> Self {
        v as u128
    }

    fn step(&self, k: u64, n: u64, prev: &Self) -> Option<Self> {
        self.checked_mul(k as u128)?.checked_add(prev.checked_mul(n as u128)?)
    }

    fn plus(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }

    fn ln(&self) -> f64 {
        (*self as f64).ln()
    }

    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Denom for BigUint {
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }

    fn step(&self, k: u64, n: u64, prev: &Self) -> Option<Self> {
        Some(self * k + prev * n)
    }

    fn plus(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }

    fn ln(&self) -> f64 {
        ln_biguint(self)
    }

    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

pub fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().map_or(f64::NAN, f64::ln);
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// A visited word with its last two denominators `q_len` and `q_{len-1}`.
pub struct Node<'a, D> {
    pub digits: &'a [u64],
    pub q: &'a D,
    pub q_prev: &'a D,
}

/// Something that visits words in pre-order. Generic over the denominator
/// type so the same visitor runs on the fast and the big-integer path.
pub trait Visitor {
    type Break;
    fn visit<D: Denom>(&mut self, node: Node<'_, D>) -> ControlFlow<Self::Break>;
}

#[derive(Debug)]
pub struct Overflow;

/// Digit alphabet `lo..=hi` for parameter `n`, words up to `max_len` digits
/// (the empty word included).
#[derive(Debug, Clone, Copy)]
pub struct WordSpace {
    pub n: u64,
    pub lo: u64,
    pub hi: u64,
    pub max_len: usize,
}

impl WordSpace {
    /// Number of words of length `0..=max_len`.
    pub fn count(&self) -> u128 {
        let b = (self.hi - self.lo + 1) as u128;
        let mut total: u128 = 0;
        let mut level: u128 = 1;
        for _ in 0..=self.max_len {
            total = total.saturating_add(level);
            level = level.saturating_mul(b);
        }
        total
    }

    pub fn walk<D: Denom, V: Visitor>(&self, visitor: &mut V) -> Result<Option<V::Break>, Overflow> {
        let mut digits = Vec::with_capacity(self.max_len);
        let q = D::from_u64(1);
        let q_prev = D::from_u64(0);
        match self.recurse(&mut digits, &q, &q_prev, visitor)? {
            ControlFlow::Break(b) => Ok(Some(b)),
            ControlFlow::Continue(()) => Ok(None),
        }
    }

    fn recurse<D: Denom, V: Visitor>(
        &self,
        digits: &mut Vec<u64>,
        q: &D,
        q_prev: &D,
        visitor: &mut V,
    ) -> Result<ControlFlow<V::Break>, Overflow> {
        if let ControlFlow::Break(b) = visitor.visit(Node { digits, q, q_prev }) {
            return Ok(ControlFlow::Break(b));
        }
        if digits.len() == self.max_len {
            return Ok(ControlFlow::Continue(()));
        }
        for k in self.lo..=self.hi {
            let next = q.step(k, self.n, q_prev).ok_or(Overflow)?;
            digits.push(k);
            let flow = self.recurse(digits, &next, q, visitor)?;
            digits.pop();
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Walks with `u128` denominators, redoing the walk with `BigUint` on a
    /// fresh visitor if they overflow.
    pub fn walk_exact<V: Visitor>(&self, make: impl Fn() -> V) -> (V, Option<V::Break>) {
        let mut fast = make();
        match self.walk::<u128, V>(&mut fast) {
            Ok(b) => (fast, b),
            Err(Overflow) => {
                let mut slow = make();
                let b = self
                    .walk::<BigUint, V>(&mut slow)
                    .unwrap_or_else(|_| unreachable!("big integers do not overflow"));
                (slow, b)
            }
        }
    }
}

/// `ln |I_len| = len ln N - ln q - ln(q + q_prev)`.
pub fn ln_length<D: Denom>(n: u64, len: usize, q: &D, q_prev: &D) -> Option<f64> {
    let sum = q.plus(q_prev)?;
    Some(len as f64 * (n as f64).ln() - q.ln() - sum.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Collect(Vec<(Vec<u64>, BigUint, BigUint)>);

    impl Visitor for Collect {
        type Break = ();
        fn visit<D: Denom>(&mut self, node: Node<'_, D>) -> ControlFlow<()> {
            self.0
                .push((node.digits.to_vec(), node.q.to_big(), node.q_prev.to_big()));
            ControlFlow::Continue(())
        }
    }

    #[test]
    fn visits_in_lexicographic_preorder() {
        let space = WordSpace {
            n: 1,
            lo: 1,
            hi: 2,
            max_len: 2,
        };
        let (c, _) = space.walk_exact(|| Collect(Vec::new()));
        let words: Vec<_> = c.0.iter().map(|(d, _, _)| d.clone()).collect();
        assert_eq!(
            words,
            vec![vec![], vec![1], vec![1, 1], vec![1, 2], vec![2], vec![2, 1], vec![2, 2]]
        );
        assert_eq!(space.count(), 7);
        // q for [2,1] = 1*2 + 1*1 = 3
        assert_eq!(c.0[5].1, BigUint::from(3u8));
    }

    #[test]
    fn falls_back_to_big_integers() {
        let space = WordSpace {
            n: 1,
            lo: u64::MAX - 1,
            hi: u64::MAX,
            max_len: 3,
        };
        let (c, _) = space.walk_exact(|| Collect(Vec::new()));
        assert_eq!(c.0.len(), 15);
        let (_, q, _) = &c.0[3];
        assert!(q.bits() > 128);
    }

    #[test]
    fn big_logarithm_matches_f64() {
        let v = BigUint::from(3u8).pow(2000);
        assert!((ln_biguint(&v) - 2000.0 * 3f64.ln()).abs() < 1e-9);
    }
}
