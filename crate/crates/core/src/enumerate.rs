//! Exhaustive enumeration of preference profiles.
//!
//! Profiles are indexed in mixed radix over per-voter permutation ranks with
//! the first enumerated voter most significant, and each voter's rankings in
//! lexicographic order. Index order is therefore lexicographic order of the
//! flattened ranking table, which lets chunked workers reproduce a
//! sequential scan exactly.

use crate::error::{Error, Result};
use crate::profile::{PreferenceProfile, Vote};

/// Number of profiles `(m!)^k` where `k` is `n - 1` with the first voter
/// fixed, `n` otherwise. `None` if it does not fit in `u128`.
pub fn profile_count(n: usize, m: usize, fix_first: bool) -> Option<u128> {
    let free = if fix_first { n.saturating_sub(1) } else { n };
    let fact = (1..=m as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))?;
    (0..free).try_fold(1u128, |acc, _| acc.checked_mul(fact))
}

/// Checks `(m!)^k` against `budget`, returning the count.
pub fn check_budget(n: usize, m: usize, fix_first: bool, budget: u128) -> Result<u128> {
    match profile_count(n, m, fix_first) {
        Some(count) if count <= budget => Ok(count),
        Some(count) => Err(Error::BudgetExceeded { required: count, budget }),
        None => Err(Error::BudgetExceeded { required: u128::MAX, budget }),
    }
}

/// Advances `perm` to the next permutation in lexicographic order. Returns
/// `false` and resets to ascending order after the last one.
#[inline]
pub fn next_permutation(perm: &mut [u8]) -> bool {
    let len = perm.len();
    if len < 2 {
        return false;
    }
    let mut i = len - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        perm.reverse();
        return false;
    }
    let mut j = len - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// The permutation of `0..m` with lexicographic rank `rank` (< m!).
pub fn unrank_permutation(m: usize, mut rank: u128) -> Vec<u8> {
    let mut pool: Vec<u8> = (0..m as u8).collect();
    let mut out = Vec::with_capacity(m);
    let mut fact: u128 = (1..m as u128).product::<u128>().max(1);
    for k in (0..m).rev() {
        let idx = (rank / fact) as usize;
        rank %= fact;
        out.push(pool.remove(idx));
        if k > 0 {
            fact /= k as u128;
        }
    }
    out
}

/// Walks a contiguous range of profile indices, mutating one profile in place.
pub struct ProfileCursor {
    profile: PreferenceProfile,
    perms: Vec<Vec<u8>>,
    first_free: usize,
    index: u128,
    end: u128,
    started: bool,
}

impl ProfileCursor {
    /// Cursor over profile indices `start..start + count`.
    pub fn new(n: usize, m: usize, fix_first: bool, start: u128, count: u128) -> Result<Self> {
        let total =
            profile_count(n, m, fix_first).ok_or(Error::BudgetExceeded { required: u128::MAX, budget: u128::MAX })?;
        if n == 0 || m == 0 {
            return Err(Error::OutOfDomain("need at least one voter and one candidate".into()));
        }
        let end = start.saturating_add(count).min(total);
        let first_free = usize::from(fix_first);
        let mut profile = PreferenceProfile::new(vec![Vote::identity(m); n])?;
        let fact = profile_count(1, m, false).expect("m! fits when (m!)^k fits");
        let mut perms = vec![Vec::new(); n];
        let mut rest = start.min(total.saturating_sub(1));
        for voter in (first_free..n).rev() {
            perms[voter] = unrank_permutation(m, rest % fact);
            rest /= fact;
            profile.set_ranking(voter, &perms[voter]);
        }
        Ok(ProfileCursor { profile, perms, first_free, index: start, end, started: false })
    }

    /// Index of the profile returned by the last successful `advance`.
    pub fn index(&self) -> u128 {
        self.index
    }

    /// Moves to the next profile; `None` when the range is exhausted.
    #[inline]
    pub fn advance(&mut self) -> Option<&PreferenceProfile> {
        if !self.started {
            self.started = true;
        } else {
            self.index += 1;
            if self.index < self.end {
                self.step();
            }
        }
        (self.index < self.end).then_some(&self.profile)
    }

    fn step(&mut self) {
        let n = self.perms.len();
        for voter in (self.first_free..n).rev() {
            let carried = !next_permutation(&mut self.perms[voter]);
            self.profile.set_ranking(voter, &self.perms[voter]);
            if !carried {
                return;
            }
        }
    }
}

/// Every profile of `n` voters over `m` candidates exactly once, voter 0 fixed
/// to the identity ranking when `fix_first`.
pub fn enumerate_profiles(
    n: usize,
    m: usize,
    fix_first: bool,
    budget: u128,
) -> Result<impl Iterator<Item = PreferenceProfile>> {
    let count = check_budget(n, m, fix_first, budget)?;
    let mut cursor = ProfileCursor::new(n, m, fix_first, 0, count)?;
    Ok(std::iter::from_fn(move || cursor.advance().cloned()))
}
