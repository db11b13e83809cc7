//! The feasible-volume closure: a necessary condition on trade volumes.
//!
//! Every nonempty trade with `k = t+1` decomposes, in every direction, into
//! at least two nonempty level trades of strength `t-1`. If there are
//! exactly two, their volumes are equal, so the parent volume is a double;
//! otherwise it is a sum of at least three nonempty level volumes. Closing
//! `{0, 2, 3, 4, ...}` (the strength-1 spectrum) under those two rules gives
//! the set `N(t)` computed here. Membership in `N(t)` is necessary for a
//! volume to be realizable at `k = t+1`; below `2^(t+1)` the members are
//! exactly the critical volumes.

use std::collections::BTreeSet;

use crate::construct::critical_volume;

/// The members of `N(t)` up to a bound.
#[derive(Debug, Clone)]
pub struct ClosureSet {
    t: u32,
    s_max: u64,
    members: BTreeSet<u64>,
}

impl ClosureSet {
    pub fn strength(&self) -> u32 {
        self.t
    }

    pub fn bound(&self) -> u64 {
        self.s_max
    }

    pub fn contains(&self, s: u64) -> bool {
        self.members.contains(&s)
    }

    pub fn members(&self) -> &BTreeSet<u64> {
        &self.members
    }

    /// Volumes up to the bound that fail the necessary condition.
    pub fn excluded(&self) -> Vec<u64> {
        (0..=self.s_max).filter(|s| !self.members.contains(s)).collect()
    }
}

/// Computes `N(t)` up to `s_max`.
///
/// `N(1) = {0, 2, 3, ...}`; for `t >= 2`, a positive `s` is in `N(t)` iff
/// `s = 2s'` for some nonzero `s'` in `N(t-1)`, or `s` is a sum of at least
/// three nonzero members of `N(t-1)` (with repetition).
pub fn feasible_closure(t: u32, s_max: u64) -> ClosureSet {
    assert!(t >= 1, "the closure is defined for strength >= 1");
    if t == 1 {
        let mut members: BTreeSet<u64> = (2..=s_max).collect();
        members.insert(0);
        if s_max == 0 {
            members.retain(|&s| s <= s_max);
        }
        return ClosureSet { t, s_max, members };
    }

    let previous = feasible_closure(t - 1, s_max);
    let parts: Vec<u64> =
        previous.members.iter().copied().filter(|&p| p > 0).collect();
    let n = s_max as usize;
    let mut members = BTreeSet::from([0u64]);

    for &p in &parts {
        if let Some(doubled) = p.checked_mul(2) {
            if doubled <= s_max {
                members.insert(doubled);
            }
        }
    }

    // Sums of at least three parts: exact 1- and 2-part sums first, then one
    // more part, then close under adding further parts.
    let mut one = vec![false; n + 1];
    for &p in &parts {
        if p <= s_max {
            one[p as usize] = true;
        }
    }
    let add_parts = |from: &[bool], to: &mut [bool]| {
        for v in 0..=n {
            if from[v] {
                for &p in &parts {
                    let w = v + p as usize;
                    if w <= n {
                        to[w] = true;
                    }
                }
            }
        }
    };
    let mut two = vec![false; n + 1];
    add_parts(&one, &mut two);
    let mut at_least_three = vec![false; n + 1];
    add_parts(&two, &mut at_least_three);
    for &p in &parts {
        for v in p as usize..=n {
            if at_least_three[v - p as usize] {
                at_least_three[v] = true;
            }
        }
    }
    for (v, &reachable) in at_least_three.iter().enumerate() {
        if reachable {
            members.insert(v as u64);
        }
    }

    ClosureSet { t, s_max, members }
}

/// The critical volumes `[s_0, ..., s_(t+1)]`, strictly increasing from 0 to
/// `2^(t+1) - 1`.
pub fn critical_points(t: u32) -> Vec<u64> {
    assert!((1..=62).contains(&t));
    (0..=t + 1).map(|i| critical_volume(t, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strength_one_excludes_exactly_volume_one() {
        let closure = feasible_closure(1, 10);
        assert_eq!(closure.excluded(), vec![1]);
    }

    #[test]
    fn strength_two_excludes_one_two_three_five() {
        let closure = feasible_closure(2, 10);
        assert_eq!(closure.excluded(), vec![1, 2, 3, 5]);
        assert_eq!(
            closure.members().iter().copied().collect::<Vec<_>>(),
            vec![0, 4, 6, 7, 8, 9, 10]
        );
    }

    #[test]
    fn strength_three_excludes_the_published_gaps() {
        let closure = feasible_closure(3, 20);
        let mut expected: Vec<u64> = (1..=7).collect();
        expected.extend(9..=11);
        expected.push(13);
        assert_eq!(closure.excluded(), expected);
    }

    #[test]
    fn strength_four_members_below_32_are_the_critical_points() {
        let closure = feasible_closure(4, 31);
        assert_eq!(
            closure.members().iter().copied().collect::<Vec<_>>(),
            vec![0, 16, 24, 28, 30, 31]
        );
        assert_eq!(critical_points(4), vec![0, 16, 24, 28, 30, 31]);
    }

    #[test]
    fn critical_point_sequences() {
        assert_eq!(critical_points(1), vec![0, 2, 3]);
        assert_eq!(critical_points(2), vec![0, 4, 6, 7]);
        assert_eq!(critical_points(3), vec![0, 8, 12, 14, 15]);
    }

    #[test]
    fn closure_matches_critical_points_below_the_threshold() {
        for t in 1..=6u32 {
            let threshold = 1u64 << (t + 1);
            let closure = feasible_closure(t, threshold);
            let below: Vec<u64> = closure
                .members()
                .iter()
                .copied()
                .filter(|&s| s < threshold)
                .collect();
            assert_eq!(below, critical_points(t), "strength {t}");
        }
    }

    #[test]
    fn zero_bound_keeps_only_zero() {
        let closure = feasible_closure(1, 0);
        assert_eq!(
            closure.members().iter().copied().collect::<Vec<_>>(),
            vec![0]
        );
    }
}
