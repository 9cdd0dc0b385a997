//! Binary patterns `p in {0,1}^k` and the operations the linear terms are built from.

use std::fmt;

use crate::error::{Error, Result};

/// `(p_1, ..., p_k)` together with the phantom boundary bits `p_0` and `p_{k+1}`.
///
/// The boundary bits only matter to the delta factors: `p_{k+1}` is consulted on
/// the first axis, `p_0` on the second. Both default to `0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryPattern {
    bits: Vec<u8>,
    left: u8,
    right: u8,
}

impl BinaryPattern {
    /// Panics on an empty pattern or an entry other than 0/1.
    pub fn new(bits: Vec<u8>) -> Self {
        assert!(!bits.is_empty(), "pattern must have at least one entry");
        assert!(bits.iter().all(|b| *b <= 1), "pattern entries must be 0 or 1");
        BinaryPattern {
            bits,
            left: 0,
            right: 0,
        }
    }

    /// Sets `p_0` and `p_{k+1}`.
    pub fn with_boundaries(mut self, left: u8, right: u8) -> Self {
        assert!(left <= 1 && right <= 1, "boundary bits must be 0 or 1");
        self.left = left;
        self.right = right;
        self
    }

    /// All patterns of length `k` with exactly `ones` ones, ordered as binary
    /// words (`(0,..,0,1,..,1)` first). Default boundaries.
    pub fn all_with_ones(k: usize, ones: usize) -> Vec<BinaryPattern> {
        let mut out = Vec::new();
        if ones > k {
            return out;
        }
        let mut bits = vec![0u8; k];
        fn rec(pos: usize, left: usize, bits: &mut Vec<u8>, out: &mut Vec<BinaryPattern>) {
            let k = bits.len();
            if pos == k {
                if left == 0 {
                    out.push(BinaryPattern::new(bits.clone()));
                }
                return;
            }
            if k - pos > left {
                bits[pos] = 0;
                rec(pos + 1, left, bits, out);
            }
            if left > 0 {
                bits[pos] = 1;
                rec(pos + 1, left - 1, bits, out);
                bits[pos] = 0;
            }
        }
        rec(0, ones, &mut bits, &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// `p_i` for `i` in `0..=k+1`, boundary bits included.
    pub fn bit(&self, i: usize) -> u8 {
        if i == 0 {
            self.left
        } else if i == self.bits.len() + 1 {
            self.right
        } else {
            self.bits[i - 1]
        }
    }

    pub fn left_boundary(&self) -> u8 {
        self.left
    }

    pub fn right_boundary(&self) -> u8 {
        self.right
    }

    pub fn count(&self, value: u8) -> usize {
        self.bits.iter().filter(|b| **b == value).count()
    }

    pub fn ones(&self) -> usize {
        self.count(1)
    }

    /// `1 - p`, with default boundaries.
    pub fn complement(&self) -> BinaryPattern {
        BinaryPattern::new(self.bits.iter().map(|b| 1 - b).collect())
    }

    /// `self <= other`: every prefix sum of `self` is at least the matching
    /// prefix sum of `other` (ones sit further left).
    pub fn le(&self, other: &BinaryPattern) -> Result<bool> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let mut a = 0u32;
        let mut b = 0u32;
        for (x, y) in self.bits.iter().zip(&other.bits) {
            a += u32::from(*x);
            b += u32::from(*y);
            if a < b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn flip(&self, count: usize, value: u8, from_end: bool) -> Result<BinaryPattern> {
        let found = self.count(value);
        if found < count {
            return Err(Error::InsufficientOccurrences {
                value,
                needed: count,
                found,
            });
        }
        let mut out = self.clone();
        let mut left = count;
        let idx: Box<dyn Iterator<Item = usize>> = if from_end {
            Box::new((0..self.len()).rev())
        } else {
            Box::new(0..self.len())
        };
        for i in idx {
            if left == 0 {
                break;
            }
            if out.bits[i] == value {
                out.bits[i] = 1 - value;
                left -= 1;
            }
        }
        Ok(out)
    }

    /// Flips the first `count` entries equal to `value`.
    pub fn flip_first(&self, count: usize, value: u8) -> Result<BinaryPattern> {
        self.flip(count, value, false)
    }

    /// Flips the last `count` entries equal to `value`.
    pub fn flip_last(&self, count: usize, value: u8) -> Result<BinaryPattern> {
        self.flip(count, value, true)
    }

    /// 1-based index of the `j`-th entry equal to `value`.
    pub fn pos(&self, value: u8, j: usize) -> Result<usize> {
        let found = self.count(value);
        if j == 0 || found < j {
            return Err(Error::InsufficientOccurrences {
                value,
                needed: j.max(1),
                found,
            });
        }
        Ok(self
            .bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b == value)
            .nth(j - 1)
            .map(|(i, _)| i + 1)
            .expect("occurrence count checked above"))
    }
}

impl fmt::Display for BinaryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.bits.iter().map(u8::to_string).collect();
        write!(f, "({})", s.join(","))?;
        if self.left != 0 || self.right != 0 {
            write!(f, "[p0={},p{}={}]", self.left, self.len() + 1, self.right)?;
        }
        Ok(())
    }
}
