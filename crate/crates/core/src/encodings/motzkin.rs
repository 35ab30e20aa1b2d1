use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::EncodingError;

/// Integer walk with steps in `{-1, 0, 1}`; its duration is `values.len() - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MotzkinWalk {
    values: Vec<i64>,
}

impl MotzkinWalk {
    pub fn new(values: Vec<i64>) -> Result<Self, EncodingError> {
        if values.is_empty() {
            return Err(EncodingError::MalformedWalk("empty"));
        }
        if values.windows(2).any(|w| (w[1] - w[0]).abs() > 1) {
            return Err(EncodingError::MalformedWalk("step outside {-1,0,1}"));
        }
        Ok(Self { values })
    }

    pub fn constant(value: i64, duration: usize) -> Self {
        Self {
            values: vec![value; duration + 1],
        }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn duration(&self) -> usize {
        self.values.len() - 1
    }

    pub fn start(&self) -> i64 {
        self.values[0]
    }

    pub fn end(&self) -> i64 {
        *self.values.last().unwrap()
    }

    pub fn reversed(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self { values }
    }
}

/// Number of walks of duration `r` from `a` to `b`.
pub fn motzkin_count(a: i64, b: i64, r: usize) -> BigUint {
    count_dp(a, b, r, |_| true)
}

/// Number of walks of duration `r` from `a` to `b` whose interior values
/// (times `1..r`) are all positive; the endpoints are unconstrained.
pub fn motzkin_count_positive(a: i64, b: i64, r: usize) -> BigUint {
    count_dp(a, b, r, |v| v > 0)
}

fn count_dp(a: i64, b: i64, r: usize, interior_ok: impl Fn(i64) -> bool) -> BigUint {
    if (a - b).unsigned_abs() as usize > r {
        return BigUint::zero();
    }
    if r == 0 {
        return if a == b { BigUint::one() } else { BigUint::zero() };
    }
    let lo = a - r as i64;
    let width = 2 * r + 1;
    let mut cur = vec![BigUint::zero(); width];
    cur[r] = BigUint::one();
    for step in 1..=r {
        let mut next = vec![BigUint::zero(); width];
        for (i, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for d in [-1i64, 0, 1] {
                let j = i as i64 + d;
                if j < 0 || j >= width as i64 {
                    continue;
                }
                let v = lo + j;
                if step < r && !interior_ok(v) {
                    continue;
                }
                next[j as usize] += c;
            }
        }
        cur = next;
    }
    cur[(b - lo) as usize].clone()
}

/// Memoized `u128` version of the two counts, for the inner loops of exact
/// enumeration where all values stay small.
#[derive(Default)]
pub struct MotzkinTable {
    plain: std::collections::HashMap<(i64, i64, usize), u128>,
    positive: std::collections::HashMap<(i64, i64, usize), u128>,
}

impl MotzkinTable {
    pub fn plain(&mut self, a: i64, b: i64, r: usize) -> u128 {
        *self
            .plain
            .entry((a, b, r))
            .or_insert_with(|| to_u128(&motzkin_count(a, b, r)))
    }

    pub fn positive(&mut self, a: i64, b: i64, r: usize) -> u128 {
        *self
            .positive
            .entry((a, b, r))
            .or_insert_with(|| to_u128(&motzkin_count_positive(a, b, r)))
    }
}

fn to_u128(x: &BigUint) -> u128 {
    let digits = x.to_u64_digits();
    match digits.len() {
        0 => 0,
        1 => digits[0] as u128,
        2 => digits[0] as u128 | (digits[1] as u128) << 64,
        _ => panic!("count exceeds u128"),
    }
}
