//! Integer partitions: canonical enumeration, exact counts, uniform sampling.
//!
//! Canonical order is lexicographic on the parts sorted in descending order;
//! partitions are handed out as ascending slices.

use rand::Rng;

use crate::error::{Error, Result};

/// Largest total for which the count table is built.
pub const COUNT_TABLE_MAX: u128 = 4096;

struct Walker<'f, F: FnMut(&[u128])> {
    distinct: bool,
    desc: Vec<u128>,
    asc: Vec<u128>,
    visit: &'f mut F,
}

impl<F: FnMut(&[u128])> Walker<'_, F> {
    fn emit(&mut self) {
        self.asc.clear();
        self.asc.extend(self.desc.iter().rev());
        (self.visit)(&self.asc);
    }

    /// Fills `rest` with parts `<= bound`, smallest leading part first.
    fn fill(&mut self, rest: u128, bound: u128) {
        if rest == 0 {
            self.emit();
            return;
        }
        let hi = rest.min(bound);
        let lo = if self.distinct {
            // Parts strictly below `part` can sum to at most part(part-1)/2.
            let mut lo = 1;
            while lo * (lo + 1) / 2 < rest && lo < hi {
                lo += 1;
            }
            if lo * (lo + 1) / 2 < rest {
                return;
            }
            lo
        } else {
            1
        };
        for part in lo..=hi {
            self.desc.push(part);
            let next = if self.distinct { part - 1 } else { part };
            self.fill(rest - part, next);
            self.desc.pop();
        }
    }
}

/// Visits every partition of `total` with largest part exactly `largest`.
pub fn for_each_with_largest(
    total: u128,
    largest: u128,
    distinct_only: bool,
    mut visit: impl FnMut(&[u128]),
) {
    if largest == 0 || largest > total {
        return;
    }
    let mut w = Walker {
        distinct: distinct_only,
        desc: vec![largest],
        asc: Vec::new(),
        visit: &mut visit,
    };
    let next = if distinct_only { largest - 1 } else { largest };
    w.fill(total - largest, next);
}

/// Visits every partition of `total` in canonical order.
pub fn for_each_partition(total: u128, distinct_only: bool, mut visit: impl FnMut(&[u128])) {
    for largest in 1..=total {
        for_each_with_largest(total, largest, distinct_only, &mut visit);
    }
}

/// All partitions of `total`, ascending parts, canonical order.
pub fn enumerate_partitions(total: u128, distinct_only: bool) -> Vec<Vec<u128>> {
    let mut out = Vec::new();
    for_each_partition(total, distinct_only, |p| out.push(p.to_vec()));
    out
}

/// `table[n][k]` = partitions of `n` with every part `<= k`.
#[derive(Clone, Debug)]
pub struct PartitionCounts {
    table: Vec<Vec<u128>>,
}

impl PartitionCounts {
    pub fn new(max_total: u128) -> Result<Self> {
        if max_total > COUNT_TABLE_MAX {
            return Err(Error::Budget {
                what: format!("partition count table up to {max_total}"),
                cap: COUNT_TABLE_MAX,
            });
        }
        let size = max_total as usize + 1;
        let mut table = vec![vec![0u128; size]; size];
        for row in table[0].iter_mut() {
            *row = 1;
        }
        for n in 1..size {
            for k in 1..size {
                let with_k = if k <= n { table[n - k][k] } else { 0 };
                table[n][k] = table[n][k - 1]
                    .checked_add(with_k)
                    .ok_or(Error::Overflow("partition count"))?;
            }
        }
        Ok(Self { table })
    }

    pub fn max_total(&self) -> u128 {
        self.table.len() as u128 - 1
    }

    /// `p(n)`.
    pub fn count(&self, n: u128) -> u128 {
        self.table[n as usize][n as usize]
    }

    /// Partitions of `n` with every part `<= k`.
    pub fn count_bounded(&self, n: u128, k: u128) -> u128 {
        self.table[n as usize][k.min(n) as usize]
    }

    /// A uniformly random partition of `n`, ascending parts.
    ///
    /// The largest part `j` is drawn with weight `count_bounded(n - j, j)`,
    /// then the rest recursively with bound `j`.
    pub fn sample<R: Rng + ?Sized>(&self, n: u128, rng: &mut R) -> Vec<u128> {
        assert!(n <= self.max_total(), "n beyond the count table");
        let mut parts = Vec::new();
        let (mut rest, mut bound) = (n, n);
        while rest > 0 {
            let mut pick = rng.random_range(0..self.count_bounded(rest, bound));
            let mut j = bound.min(rest);
            // Walk largest-first; the weights add up to count_bounded(rest, bound).
            loop {
                let w = self.count_bounded(rest - j, j);
                if pick < w {
                    break;
                }
                pick -= w;
                j -= 1;
            }
            parts.push(j);
            rest -= j;
            bound = j;
        }
        parts.reverse();
        parts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    #[test]
    fn examples() {
        assert_eq!(
            enumerate_partitions(4, false),
            vec![vec![1, 1, 1, 1], vec![1, 1, 2], vec![2, 2], vec![1, 3], vec![4]]
        );
        assert_eq!(enumerate_partitions(7, false).len(), 15);
        assert_eq!(
            enumerate_partitions(6, true),
            vec![vec![1, 2, 3], vec![2, 4], vec![1, 5], vec![6]]
        );
        assert_eq!(enumerate_partitions(1, true), vec![vec![1]]);
    }

    #[test]
    fn canonical_order_is_lex_on_descending() {
        for n in 1..=14 {
            for distinct in [false, true] {
                let parts = enumerate_partitions(n, distinct);
                let desc: Vec<Vec<u128>> = parts
                    .iter()
                    .map(|p| p.iter().rev().copied().collect())
                    .collect();
                assert!(desc.windows(2).all(|w| w[0] < w[1]), "n={n}");
                for p in &parts {
                    assert_eq!(p.iter().sum::<u128>(), n);
                    if distinct {
                        assert!(p.windows(2).all(|w| w[0] < w[1]));
                    } else {
                        assert!(p.windows(2).all(|w| w[0] <= w[1]));
                    }
                }
            }
        }
    }

    #[test]
    fn counts_match_enumeration() {
        let t = PartitionCounts::new(30).unwrap();
        for n in 0..=30 {
            let expected = if n == 0 { 1 } else { enumerate_partitions(n, false).len() as u128 };
            assert_eq!(t.count(n), expected);
        }
        assert_eq!(PartitionCounts::new(100).unwrap().count(100), 190_569_292);
        assert!(PartitionCounts::new(COUNT_TABLE_MAX + 1).is_err());
    }

    #[test]
    fn sampler_hits_every_partition_about_equally() {
        let t = PartitionCounts::new(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen: HashMap<Vec<u128>, u32> = HashMap::new();
        let draws = 22_000;
        for _ in 0..draws {
            *seen.entry(t.sample(8, &mut rng)).or_default() += 1;
        }
        assert_eq!(seen.len(), 22);
        // Each cell expects 1000; a 5-sigma band is about +-160.
        assert!(seen.values().all(|&c| (840..=1160).contains(&c)), "{seen:?}");
    }
}
