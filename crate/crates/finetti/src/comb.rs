//! Exact combinatorics: factorial products, set partitions, multi-indices.

use num::bigint::BigInt;
use num::{BigRational, One};

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    num::integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Falling factorial `n (n-1) ... (n-k+1)` with `k` factors; 1 when `k = 0`.
pub fn falling(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        if i >= n {
            return BigInt::from(0);
        }
        acc *= BigInt::from(n - i);
    }
    acc
}

/// Rising factorial `a (a+1) ... (a+k-1)` with `k` factors; 1 when `k = 0`.
pub fn rising(a: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(a + i);
    }
    acc
}

/// Multinomial coefficient `total! / (parts[0]! ... parts[m-1]!)`.
///
/// The parts must sum to `total`.
pub fn multinomial(total: u64, parts: &[u64]) -> BigInt {
    debug_assert_eq!(parts.iter().sum::<u64>(), total);
    let mut acc = BigInt::one();
    let mut remaining = total;
    for &p in parts {
        acc *= binomial(remaining, p);
        remaining -= p;
    }
    acc
}

/// Ratio of two exact integers as a rational.
pub fn int_ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// All partitions of `{0, ..., k-1}`, each as a block-assignment vector in
/// restricted-growth form: `a[i]` is the block index of element `i`, blocks
/// are numbered in order of first appearance.
///
/// ```
/// use finetti::comb::set_partitions;
///
/// // Bell numbers: 1, 1, 2, 5, 15, 52, ...
/// assert_eq!(set_partitions(3).len(), 5);
/// assert_eq!(set_partitions(4).len(), 15);
/// ```
pub fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut assignment = vec![0usize; k];
    fn recurse(i: usize, max_used: usize, assignment: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == assignment.len() {
            out.push(assignment.clone());
            return;
        }
        for block in 0..=max_used {
            assignment[i] = block;
            let next_max = if block == max_used {
                max_used + 1
            } else {
                max_used
            };
            recurse(i + 1, next_max, assignment, out);
        }
    }
    if k == 0 {
        out.push(Vec::new());
    } else {
        recurse(0, 0, &mut assignment, &mut out);
    }
    out
}

/// Number of blocks of a partition in restricted-growth form.
pub fn block_count(assignment: &[usize]) -> usize {
    assignment.iter().copied().max().map_or(0, |m| m + 1)
}

/// All vectors of `len` nonnegative integers whose sum is at most `max_sum`,
/// in lexicographic order.
pub fn vectors_summing_at_most(len: usize, max_sum: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut v = vec![0u64; len];
    fn recurse(i: usize, left: u64, v: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == v.len() {
            out.push(v.clone());
            return;
        }
        for x in 0..=left {
            v[i] = x;
            recurse(i + 1, left - x, v, out);
        }
    }
    recurse(0, max_sum, &mut v, &mut out);
    out
}
