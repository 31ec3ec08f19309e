//! Order-independent exact summation of non-negative floats.
//!
//! Every finite `f64` is an integer multiple of 2^-1074, so a wide enough
//! fixed-point integer holds any sum of them without rounding. The value is
//! rounded to `f64` (round-half-to-even) only when read. Chunked sums merged
//! together are therefore bit-identical to the whole-document sum.

use std::cmp::Ordering;
use std::fmt;

const LIMBS: usize = 34;
const MIN_EXP: i32 = -1074;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactSum {
    limbs: [u64; LIMBS],
}

impl Default for ExactSum {
    fn default() -> Self {
        ExactSum { limbs: [0; LIMBS] }
    }
}

impl fmt::Debug for ExactSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactSum({})", self.value())
    }
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `x`, which must be finite and non-negative.
    pub fn add(&mut self, x: f64) {
        assert!(x.is_finite() && x >= 0.0, "ExactSum only accepts finite non-negative values, got {x}");
        let bits = x.to_bits();
        let exp_bits = ((bits >> 52) & 0x7ff) as usize;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, pos) = if exp_bits == 0 {
            (frac, 0)
        } else {
            (frac | (1u64 << 52), exp_bits - 1)
        };
        if mantissa == 0 {
            return;
        }
        let shifted = (mantissa as u128) << (pos % 64);
        let limb = pos / 64;
        self.add_at(limb, shifted as u64);
        self.add_at(limb + 1, (shifted >> 64) as u64);
    }

    fn add_at(&mut self, mut limb: usize, value: u64) {
        let mut carry = value;
        while carry != 0 {
            let (sum, overflow) = self.limbs[limb].overflowing_add(carry);
            self.limbs[limb] = sum;
            carry = overflow as u64;
            limb += 1;
        }
    }

    pub fn merge(&mut self, other: &ExactSum) {
        let mut carry = 0u64;
        for (dst, src) in self.limbs.iter_mut().zip(other.limbs.iter()) {
            let (s1, o1) = dst.overflowing_add(*src);
            let (s2, o2) = s1.overflowing_add(carry);
            *dst = s2;
            carry = (o1 as u64) + (o2 as u64);
        }
        assert_eq!(carry, 0, "ExactSum overflow");
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    fn bit(&self, i: usize) -> bool {
        (self.limbs[i / 64] >> (i % 64)) & 1 == 1
    }

    fn highest_bit(&self) -> Option<usize> {
        self.limbs
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &l)| l != 0)
            .map(|(i, &l)| i * 64 + 63 - l.leading_zeros() as usize)
    }

    fn any_below(&self, pos: usize) -> bool {
        let limb = pos / 64;
        if self.limbs[..limb].iter().any(|&l| l != 0) {
            return true;
        }
        let mask = (1u64 << (pos % 64)) - 1;
        self.limbs[limb] & mask != 0
    }

    /// The sum rounded to the nearest `f64`, ties to even.
    pub fn value(&self) -> f64 {
        let Some(high) = self.highest_bit() else {
            return 0.0;
        };
        if high < 53 {
            // Fits in 53 bits: exactly representable.
            let n = self.limbs[0] as f64;
            return n * f64::from_bits(1);
        }
        let mut mantissa = 0u64;
        for i in (high - 52..=high).rev() {
            mantissa = (mantissa << 1) | self.bit(i) as u64;
        }
        let round = self.bit(high - 53);
        let sticky = high >= 54 && self.any_below(high - 53);
        let mut high = high;
        if round && (sticky || mantissa & 1 == 1) {
            mantissa += 1;
            if mantissa == 1u64 << 53 {
                mantissa >>= 1;
                high += 1;
            }
        }
        let biased = high as i64 + MIN_EXP as i64 + 1023;
        if biased >= 0x7ff {
            return f64::INFINITY;
        }
        f64::from_bits(((biased as u64) << 52) | (mantissa & ((1u64 << 52) - 1)))
    }
}

impl PartialOrd for ExactSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactSum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs.iter().rev().cmp(other.limbs.iter().rev())
    }
}

impl FromIterator<f64> for ExactSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = ExactSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}
