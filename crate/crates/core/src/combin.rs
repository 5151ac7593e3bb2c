//! Small combinatorics helpers: binomials and k-subset enumeration/ranking.

use num_bigint::BigUint;

/// `C(n, k)` as `u64`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Colexicographic rank of a strictly increasing subset of `0..`.
///
/// Ranks of the `C(n, k)` subsets of `0..n` are exactly `0..C(n, k)`, and
/// colex order agrees with lexicographic order on the reversed tuples.
pub fn colex_rank(subset: &[usize]) -> usize {
    subset
        .iter()
        .enumerate()
        .map(|(i, &v)| binomial(v as u64, i as u64 + 1) as usize)
        .sum()
}

/// Calls `f` on every strictly increasing `k`-subset of `0..n`, in
/// lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        if !next_subset(&mut idx, n) {
            return;
        }
    }
}

/// Advances `idx` to the lexicographically next increasing subset of `0..n`.
/// Returns false once `idx` was the last one.
pub fn next_subset(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n as u64, k as u64) as usize);
    for_each_subset(n, k, |s| out.push(s.to_vec()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
        assert_eq!(binomial_big(100, 50).to_string(), "100891344545564193334812497256");
    }

    #[test]
    fn colex_ranks_are_a_bijection() {
        for k in 1..=4 {
            let mut seen: Vec<usize> = subsets(7, k).iter().map(|s| colex_rank(s)).collect();
            seen.sort_unstable();
            let expected: Vec<usize> = (0..binomial(7, k as u64) as usize).collect();
            assert_eq!(seen, expected);
        }
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }
}
