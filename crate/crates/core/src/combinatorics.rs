//! Exact big-integer combinatorics.

use rug::Integer;

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binom(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::new();
    }
    let k = k.min(n - k);
    let mut acc = Integer::from(1);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `n (n-1) ⋯ (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::new();
    }
    product_range(n - k + 1, n)
}

/// `(start)(start+1)⋯(end)`, one for an empty range.
pub fn product_range(start: u64, end: u64) -> Integer {
    if start > end {
        return Integer::from(1);
    }
    // balanced split keeps operands similar in size
    if end - start < 16 {
        let mut acc = Integer::from(start);
        for v in start + 1..=end {
            acc *= v;
        }
        return acc;
    }
    let mid = start + (end - start) / 2;
    product_range(start, mid) * product_range(mid + 1, end)
}

pub fn factorial(n: u64) -> Integer {
    product_range(1, n)
}
