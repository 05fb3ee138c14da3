//! Exact tallies of ratio populations and the summaries derived from them.
//!
//! Every ratio is a quotient of two Borda scores bounded by `n(m-1)`, so a
//! population is stored as counts per unreduced `(numerator, denominator)`
//! pair. Merging tallies is integer addition, which makes parallel results
//! independent of how work was split. Means and deviations are computed from
//! the tally in a fixed order with compensated summation.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use crate::profile::PreferenceProfile;
use crate::ratio::Ratio;

const DENSE_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Counts {
    Dense { side: usize, counts: Vec<u64> },
    Sparse(HashMap<(u64, u64), u64>),
}

/// Population of ratios `num/den` with the extreme values located by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioTally {
    counts: Counts,
    total: u64,
    // (num, den, index) with the smallest index among equal extremes
    max: Option<(u64, u64, u128)>,
    min: Option<(u64, u64, u128)>,
}

#[inline]
fn cmp_frac(a: (u64, u64), b: (u64, u64)) -> Ordering {
    (a.0 as u128 * b.1 as u128).cmp(&(b.0 as u128 * a.1 as u128))
}

impl RatioTally {
    /// A tally for scores in `0..=max_score`.
    pub fn new(max_score: u64) -> Self {
        let side = max_score as usize + 1;
        let counts = if side.saturating_mul(side) <= DENSE_LIMIT {
            Counts::Dense { side, counts: vec![0; side * side] }
        } else {
            Counts::Sparse(HashMap::new())
        };
        RatioTally { counts, total: 0, max: None, min: None }
    }

    /// Records `num/den` observed at population index `index`.
    #[inline]
    pub fn add(&mut self, num: u64, den: u64, index: u128) {
        match &mut self.counts {
            Counts::Dense { side, counts } => counts[num as usize * *side + den as usize] += 1,
            Counts::Sparse(map) => *map.entry((num, den)).or_insert(0) += 1,
        }
        self.total += 1;
        if self.max.is_none_or(|(n, d, _)| cmp_frac((num, den), (n, d)) == Ordering::Greater) {
            self.max = Some((num, den, index));
        }
        if self.min.is_none_or(|(n, d, _)| cmp_frac((num, den), (n, d)) == Ordering::Less) {
            self.min = Some((num, den, index));
        }
    }

    pub fn merge(&mut self, other: &RatioTally) {
        for (num, den, count) in other.entries() {
            match &mut self.counts {
                Counts::Dense { side, counts } => counts[num as usize * *side + den as usize] += count,
                Counts::Sparse(map) => *map.entry((num, den)).or_insert(0) += count,
            }
        }
        self.total += other.total;
        let pick = |a: Option<(u64, u64, u128)>, b: Option<(u64, u64, u128)>, want: Ordering| match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => match cmp_frac((y.0, y.1), (x.0, x.1)) {
                o if o == want => Some(y),
                Ordering::Equal if y.2 < x.2 => Some(y),
                _ => Some(x),
            },
        };
        self.max = pick(self.max, other.max, Ordering::Greater);
        self.min = pick(self.min, other.min, Ordering::Less);
    }

    /// Non-zero `(num, den, count)` entries in ascending `(num, den)` order.
    pub fn entries(&self) -> Vec<(u64, u64, u64)> {
        match &self.counts {
            Counts::Dense { side, counts } => counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| ((i / side) as u64, (i % side) as u64, c))
                .collect(),
            Counts::Sparse(map) => {
                let mut v: Vec<_> = map.iter().map(|(&(n, d), &c)| (n, d, c)).collect();
                v.sort_unstable();
                v
            }
        }
    }

    pub fn count(&self) -> u64 {
        self.total
    }

    /// Largest ratio and the smallest index where it occurs.
    pub fn max(&self) -> Option<(Ratio, u128)> {
        self.max.map(|(n, d, i)| (Ratio::new(n, d).expect("positive denominator"), i))
    }

    pub fn min(&self) -> Option<(Ratio, u128)> {
        self.min.map(|(n, d, i)| (Ratio::new(n, d).expect("positive denominator"), i))
    }

    /// Distinct reduced values with their multiplicities, ascending.
    pub fn distribution(&self) -> Vec<(Ratio, u64)> {
        let mut merged: Vec<(Ratio, u64)> = Vec::new();
        let mut values: Vec<(Ratio, u64)> =
            self.entries().into_iter().map(|(n, d, c)| (Ratio::new(n, d).expect("positive denominator"), c)).collect();
        values.sort_by_key(|&(r, _)| r);
        for (r, c) in values {
            match merged.last_mut() {
                Some((last, total)) if *last == r => *total += c,
                _ => merged.push((r, c)),
            }
        }
        merged
    }

    pub fn mean(&self) -> f64 {
        if self.total == 0 {
            return f64::NAN;
        }
        let mut sum = KahanSum::default();
        for (r, c) in self.distribution() {
            sum.add(r.to_f64() * c as f64);
        }
        sum.value() / self.total as f64
    }

    /// Population standard deviation (divides by the population size).
    pub fn std(&self) -> f64 {
        if self.total == 0 {
            return f64::NAN;
        }
        let mean = self.mean();
        let mut sum = KahanSum::default();
        for (r, c) in self.distribution() {
            let d = r.to_f64() - mean;
            sum.add(d * d * c as f64);
        }
        (sum.value() / self.total as f64).sqrt()
    }
}

/// Neumaier-compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Summary of a ratio over a population of profiles.
#[derive(Debug, Clone, Serialize)]
pub struct RatioStats {
    pub mean: f64,
    pub std: f64,
    pub max: Ratio,
    pub max_witness: Option<PreferenceProfile>,
    pub min: Ratio,
    pub count: u64,
}

impl RatioStats {
    pub fn from_tally(tally: &RatioTally, max_witness: Option<PreferenceProfile>) -> Option<Self> {
        Some(RatioStats {
            mean: tally.mean(),
            std: tally.std(),
            max: tally.max()?.0,
            min: tally.min()?.0,
            max_witness,
            count: tally.count(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub count: u64,
}

/// Fixed-width bins over `[min(1/bound, observed min), max(bound, observed max)]`
/// plus a dedicated first bin `[1, 1]` holding the ratios exactly equal to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bins: Vec<HistogramBin>,
}

impl Histogram {
    pub fn from_tally(tally: &RatioTally, bound: Option<Ratio>, bins: usize) -> Histogram {
        let bins = bins.max(1);
        let dist = tally.distribution();
        let (Some(&(lo_obs, _)), Some(&(hi_obs, _))) = (dist.first(), dist.last()) else {
            return Histogram { bins: vec![HistogramBin { left: 1.0, right: 1.0, count: 0 }] };
        };
        let mut lo = lo_obs.to_f64();
        let mut hi = hi_obs.to_f64();
        if let Some(b) = bound {
            lo = lo.min(1.0 / b.to_f64());
            hi = hi.max(b.to_f64());
        }
        if hi <= lo {
            hi = lo + 1.0;
        }
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0u64; bins];
        let mut spike = 0;
        for (r, c) in dist {
            if r == Ratio::one() {
                spike += c;
                continue;
            }
            let idx = (((r.to_f64() - lo) / width).floor().max(0.0) as usize).min(bins - 1);
            counts[idx] += c;
        }
        let mut out = vec![HistogramBin { left: 1.0, right: 1.0, count: spike }];
        out.extend(counts.into_iter().enumerate().map(|(k, count)| HistogramBin {
            left: lo + k as f64 * width,
            right: if k + 1 == bins { hi } else { lo + (k + 1) as f64 * width },
            count,
        }));
        Histogram { bins: out }
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().map(|b| b.count).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,count\n");
        for b in &self.bins {
            out.push_str(&format!("{},{},{}\n", b.left, b.right, b.count));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tally(values: &[(u64, u64)]) -> RatioTally {
        let mut t = RatioTally::new(20);
        for (i, &(n, d)) in values.iter().enumerate() {
            t.add(n, d, i as u128);
        }
        t
    }

    #[test]
    fn mean_std_max() {
        let t = tally(&[(1, 1), (3, 2), (2, 2), (6, 4)]);
        assert_eq!(t.count(), 4);
        assert!((t.mean() - 1.25).abs() < 1e-15);
        assert!((t.std() - 0.25).abs() < 1e-15);
        // 3/2 first appears at index 1; 6/4 at index 3 is an equal value.
        assert_eq!(t.max(), Some((Ratio::new(3, 2).unwrap(), 1)));
        assert_eq!(t.min(), Some((Ratio::one(), 0)));
        assert_eq!(t.distribution(), vec![(Ratio::one(), 2), (Ratio::new(3, 2).unwrap(), 2)]);
    }

    #[test]
    fn merge_is_split_independent() {
        let values: Vec<(u64, u64)> = (0..200).map(|i| ((i * 7 % 13 + 1) as u64, (i * 3 % 11 + 1) as u64)).collect();
        let whole = tally(&values);
        for split in [1, 13, 64, 199] {
            let mut a = RatioTally::new(20);
            let mut b = RatioTally::new(20);
            for (i, &(n, d)) in values.iter().enumerate() {
                if i < split {
                    a.add(n, d, i as u128)
                } else {
                    b.add(n, d, i as u128)
                }
            }
            let mut ab = a.clone();
            ab.merge(&b);
            let mut ba = b.clone();
            ba.merge(&a);
            assert_eq!(ab, whole);
            assert_eq!(ba, whole);
        }
    }

    #[test]
    fn sparse_tally_matches_dense() {
        let values = [(5, 3), (1, 1), (5, 3), (2, 7)];
        let dense = tally(&values);
        let mut sparse = RatioTally::new(1000);
        for (i, &(n, d)) in values.iter().enumerate() {
            sparse.add(n, d, i as u128);
        }
        assert_eq!(dense.entries(), sparse.entries());
        assert_eq!(dense.mean().to_bits(), sparse.mean().to_bits());
    }

    #[test]
    fn histogram_covers_every_value() {
        let t = tally(&[(1, 1), (1, 1), (4, 3), (7, 6), (6, 7), (10, 7)]);
        let h = Histogram::from_tally(&t, Some(Ratio::new(10, 7).unwrap()), 5);
        assert_eq!(h.total(), 6);
        assert_eq!(h.bins[0].count, 2);
        assert_eq!(h.bins.len(), 6);
        assert!((h.bins[1].left - 0.7).abs() < 1e-12);
        assert!(h.bins.last().unwrap().right >= 10.0 / 7.0);
        assert!(h.to_csv().starts_with("bin_left,bin_right,count\n1,1,2\n"));
    }
}
