//! Small indexing helpers shared by the inclusion matrix and the search core.

use itertools::Itertools;

/// All t-subsets of `0..k` in lexicographic order.
pub(crate) fn subsets_lex(k: u32, t: u32) -> Vec<Vec<u32>> {
    (0..k).combinations(t as usize).collect()
}

/// Binomial coefficient as u64, None on overflow.
pub(crate) fn binomial(n: u64, r: u64) -> Option<u64> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u64 = 1;
    for i in 0..r {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// `base^exp` as u64, None on overflow.
pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Rank of a tuple of 1-based symbols in the lexicographic order of
/// `{1..base}^len`, first coordinate most significant.
pub(crate) fn rank_tuple(symbols: &[u32], base: u64) -> u64 {
    symbols
        .iter()
        .fold(0u64, |acc, &x| acc * base + (x as u64 - 1))
}

/// Inverse of [`rank_tuple`].
pub(crate) fn unrank_tuple(mut rank: u64, base: u64, len: u32) -> Vec<u32> {
    let mut out = vec![0u32; len as usize];
    for slot in out.iter_mut().rev() {
        *slot = (rank % base) as u32 + 1;
        rank /= base;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            subsets_lex(4, 3),
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]
        );
        assert_eq!(subsets_lex(2, 0), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 3), Some(4));
        assert_eq!(binomial(3, 2), Some(3));
        assert_eq!(binomial(2, 1), Some(2));
        assert_eq!(binomial(5, 7), Some(0));
    }

    #[test]
    fn tuple_ranks_round_trip() {
        for rank in 0..27 {
            let tuple = unrank_tuple(rank, 3, 3);
            assert!(tuple.iter().all(|&x| (1..=3).contains(&x)));
            assert_eq!(rank_tuple(&tuple, 3), rank);
        }
        assert_eq!(rank_tuple(&[1, 1, 1], 3), 0);
        assert_eq!(rank_tuple(&[3, 3, 3], 3), 26);
    }
}
