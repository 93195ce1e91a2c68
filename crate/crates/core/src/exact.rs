//! Exact minimum makespan for small instances.
//!
//! Any feasible schedule can be left-shifted, job by job in start order,
//! until each job sits at the earliest time its predecessors allow. So it
//! suffices to search over orders, placing each job canonically; the search
//! is a branch-and-bound over distinct sizes at each depth.

use crate::error::{Error, Result};
use crate::greedy::greedy_schedule;
use crate::instance::Instance;
use crate::schedule::Schedule;

pub const DEFAULT_MAX_JOBS: usize = 12;
pub const GRID_MAX_JOBS: usize = 4;
pub const GRID_MAX_HORIZON: u64 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    pub max_jobs: usize,
    /// Also prune with the lower bound of the unplaced suffix.
    pub suffix_bound: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            max_jobs: DEFAULT_MAX_JOBS,
            suffix_bound: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSolution {
    pub makespan: u64,
    pub schedule: Schedule,
    pub nodes: u64,
}

fn canonical_start(placed: &[(u64, u64)], size: u64) -> u64 {
    placed
        .iter()
        .map(|&(p, s)| s + p.min(size))
        .max()
        .unwrap_or(0)
}

/// Places jobs in the given order, each at the earliest time compatible with
/// all jobs before it.
pub fn canonical_starts(order: &[u64]) -> Vec<u64> {
    let mut placed = Vec::with_capacity(order.len());
    for &p in order {
        let s = canonical_start(&placed, p);
        placed.push((p, s));
    }
    placed.into_iter().map(|(_, s)| s).collect()
}

pub fn canonical_schedule_for_order(order: &[u64]) -> Schedule {
    Schedule::from_integer_starts(order, &canonical_starts(order))
}

struct Search<'a> {
    values: &'a [u64],
    counts: Vec<usize>,
    placed: Vec<(u64, u64)>,
    best: u64,
    best_order: Option<Vec<u64>>,
    target: u64,
    suffix_bound: bool,
    nodes: u64,
}

impl Search<'_> {
    fn suffix_lower_bound(&self, last: u64) -> u64 {
        let mut sizes: Vec<u64> = Vec::with_capacity(self.placed.len() + 1);
        sizes.push(last);
        for (v, &c) in self.values.iter().zip(&self.counts) {
            sizes.extend(std::iter::repeat_n(*v, c));
        }
        Instance::from_sizes(sizes)
            .map(|i| i.lower_bound())
            .unwrap_or(0)
    }

    fn dfs(&mut self, partial: u64, remaining: usize) {
        self.nodes += 1;
        if remaining == 0 {
            if partial < self.best {
                self.best = partial;
                self.best_order = Some(self.placed.iter().map(|&(p, _)| p).collect());
            }
            return;
        }
        for k in 0..self.values.len() {
            if self.counts[k] == 0 {
                continue;
            }
            let size = self.values[k];
            let start = canonical_start(&self.placed, size);
            let span = partial.max(start + size);
            if span >= self.best {
                continue;
            }
            self.counts[k] -= 1;
            if self.suffix_bound && start + self.suffix_lower_bound(size) >= self.best {
                self.counts[k] += 1;
                continue;
            }
            self.placed.push((size, start));
            self.dfs(span, remaining - 1);
            self.placed.pop();
            self.counts[k] += 1;
            if self.best <= self.target {
                return;
            }
        }
    }
}

pub fn optimal_makespan(instance: &Instance) -> Result<ExactSolution> {
    optimal_makespan_with(instance, ExactOptions::default())
}

pub fn optimal_makespan_with(instance: &Instance, opts: ExactOptions) -> Result<ExactSolution> {
    let n = instance.len();
    if n > opts.max_jobs {
        return Err(Error::TooLarge {
            n,
            limit: opts.max_jobs,
        });
    }
    let (greedy, _) = greedy_schedule(instance);
    let incumbent = greedy.makespan()?.to_integer() as u64;
    let target = instance.lower_bound().max(instance.max_size());

    let mut values: Vec<u64> = instance.sizes().to_vec();
    values.dedup();
    let counts = values
        .iter()
        .map(|v| instance.sizes().iter().filter(|&p| p == v).count())
        .collect();

    let mut search = Search {
        values: &values,
        counts,
        placed: Vec::with_capacity(n),
        best: incumbent,
        best_order: None,
        target,
        suffix_bound: opts.suffix_bound,
        nodes: 0,
    };
    if incumbent > target {
        search.dfs(0, n);
    }
    let nodes = search.nodes;
    let schedule = match search.best_order {
        Some(order) => canonical_schedule_for_order(&order),
        None => greedy,
    };
    Ok(ExactSolution {
        makespan: search.best,
        schedule,
        nodes,
    })
}

/// Brute force over every integer start vector in `[0, horizon]^n`.
/// Returns `None` if nothing fits in the horizon; conclusive once
/// `horizon` is at least the total size.
pub fn grid_exhaustive_optimum(instance: &Instance, horizon: u64) -> Result<Option<u64>> {
    let n = instance.len();
    if n > GRID_MAX_JOBS {
        return Err(Error::TooLarge {
            n,
            limit: GRID_MAX_JOBS,
        });
    }
    if horizon > GRID_MAX_HORIZON {
        return Err(Error::HorizonTooLarge {
            horizon,
            limit: GRID_MAX_HORIZON,
        });
    }
    let p = instance.sizes();
    let mut starts = vec![0u64; n];
    let mut best: Option<u64> = None;
    loop {
        let feasible =
            (0..n).all(|i| (i + 1..n).all(|j| starts[i].abs_diff(starts[j]) >= p[i].min(p[j])));
        if feasible {
            let span = (0..n).map(|i| starts[i] + p[i]).max().unwrap_or(0);
            best = Some(best.map_or(span, |b| b.min(span)));
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == n {
                return Ok(best);
            }
            if starts[k] < horizon {
                starts[k] += 1;
                break;
            }
            starts[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn inst(s: &[i64]) -> Instance {
        Instance::new(s).unwrap()
    }

    #[test]
    fn canonical_placement() {
        assert_eq!(canonical_starts(&[6, 4, 5, 3]), vec![0, 4, 8, 11]);
        assert_eq!(canonical_starts(&[6, 5, 4, 3]), vec![0, 5, 9, 12]);
        assert_eq!(canonical_starts(&[7]), vec![0]);
        let s = canonical_schedule_for_order(&[6, 4, 5, 3]);
        assert!(s.is_feasible());
        assert_eq!(s.makespan().unwrap(), int(14));
        assert_eq!(
            canonical_schedule_for_order(&[6, 5, 4, 3])
                .makespan()
                .unwrap(),
            int(15)
        );
    }

    #[test]
    fn known_optima() {
        assert_eq!(
            optimal_makespan(&inst(&[20, 20, 10, 5, 5, 4, 4, 4, 4]))
                .unwrap()
                .makespan,
            40
        );
        assert_eq!(optimal_makespan(&inst(&[6, 5, 4, 3])).unwrap().makespan, 14);
        for m in [2, 10, 1000] {
            assert_eq!(optimal_makespan(&inst(&[m, 1])).unwrap().makespan, m as u64);
        }
        assert_eq!(optimal_makespan(&inst(&[5])).unwrap().makespan, 5);
    }

    #[test]
    fn witness_is_feasible_and_tight() {
        for sizes in [
            &[20, 20, 10, 5, 5, 4, 4, 4, 4][..],
            &[6, 5, 4, 3],
            &[9, 7, 7, 3, 2],
        ] {
            let sol = optimal_makespan(&inst(sizes)).unwrap();
            assert!(sol.schedule.is_feasible());
            assert_eq!(sol.schedule.makespan().unwrap(), int(sol.makespan));
            let mut got = sol.schedule.sizes();
            got.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(got, inst(sizes).sizes());
        }
    }

    #[test]
    fn suffix_bound_agrees() {
        let opts = ExactOptions {
            suffix_bound: true,
            ..ExactOptions::default()
        };
        for sizes in [
            &[20, 20, 10, 5, 5, 4, 4, 4, 4][..],
            &[13, 11, 7, 6, 6, 2, 1],
        ] {
            let a = optimal_makespan(&inst(sizes)).unwrap().makespan;
            let b = optimal_makespan_with(&inst(sizes), opts).unwrap().makespan;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn too_large_is_rejected() {
        let big = inst(&[1; 13]);
        assert_eq!(
            optimal_makespan(&big).unwrap_err(),
            Error::TooLarge { n: 13, limit: 12 }
        );
    }

    #[test]
    fn grid_oracle() {
        assert_eq!(
            grid_exhaustive_optimum(&inst(&[6, 5, 4, 3]), 18).unwrap(),
            Some(14)
        );
        assert_eq!(grid_exhaustive_optimum(&inst(&[2, 2]), 6).unwrap(), Some(4));
        assert_eq!(grid_exhaustive_optimum(&inst(&[4]), 4).unwrap(), Some(4));
        assert_eq!(grid_exhaustive_optimum(&inst(&[4, 4]), 3).unwrap(), None);
        assert!(grid_exhaustive_optimum(&inst(&[1; 5]), 10).is_err());
        assert!(grid_exhaustive_optimum(&inst(&[1]), 31).is_err());
    }
}
