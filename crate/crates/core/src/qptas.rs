//! Approximation scheme: drop tiny jobs, round the rest up to powers of
//! `1 + eps`, restrict starts to a grid, and solve the rounded instance with
//! a dynamic program over configurations.
//!
//! A configuration records, for every size class, the grid index of the
//! rightmost job of that class placed so far. That is all later placements
//! depend on: a new job of class `z` can go at the earliest grid point
//! `t >= C_x + min(x, z)` for every class `x`, and older jobs of class `x`
//! are at least `x` to the left of `C_x`, so they are covered as well.
//!
//! Guarantee: each of rounding, gridding and appending the small jobs costs
//! at most a factor `1 + eps`, so the result is within `(1 + eps)^3` of
//! optimal.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational::{self, checked_pow, int, Rational};
use crate::schedule::{Job, Schedule};

pub const DEFAULT_MAX_STATES: usize = 5_000_000;
const MAX_EPS_DENOMINATOR: i128 = 64;

/// Accuracy parameter: a positive rational with a small denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Epsilon(Rational);

impl Epsilon {
    pub fn new(value: Rational) -> Result<Self> {
        if !rational::is_positive(&value) || *value.denom() > MAX_EPS_DENOMINATOR {
            return Err(Error::InvalidEpsilon(rational::format_rational(&value)));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> Rational {
        self.0
    }

    /// `1 + eps`
    pub fn base(&self) -> Rational {
        self.0 + int(1)
    }

    /// `(1 + eps)^3`, the overall approximation guarantee.
    pub fn guarantee(&self) -> Rational {
        let b = self.base();
        b * b * b
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value =
            rational::parse_rational(s).map_err(|_| Error::InvalidEpsilon(s.to_string()))?;
        Self::new(value)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::format_rational(&self.0))
    }
}

/// Smallest `k` with `unit * (1+eps)^k >= size`, and that rounded size.
pub fn round_up_to_power(size: u64, unit: u64, eps: Epsilon) -> Result<(u32, Rational)> {
    let base = eps.base();
    let target = int(size);
    let mut k = 0;
    let mut value = int(unit);
    while value < target {
        k += 1;
        value = checked_pow(&base, k)
            .map(|b| b * int(unit))
            .ok_or(Error::Overflow("rounding sizes"))?;
    }
    Ok((k, value))
}

/// `ceil(log_{1+eps}(n / eps)) + 1`: the most size classes that can survive
/// splitting and rounding.
pub fn class_count_bound(n: usize, eps: Epsilon) -> Result<u32> {
    let ratio = int(n as u64) / eps.value();
    let base = eps.base();
    let mut k = 0;
    loop {
        let power = checked_pow(&base, k).ok_or(Error::Overflow("bounding size classes"))?;
        if power >= ratio {
            return Ok(k + 1);
        }
        k += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeClass {
    pub exponent: u32,
    #[serde(with = "crate::rational::wire")]
    pub size: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LargeJob {
    pub size: u64,
    pub class: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundedInstance {
    pub eps: Epsilon,
    /// Smallest large size; every rounded size is `unit * (1+eps)^k`.
    pub unit: u64,
    pub large: Vec<LargeJob>,
    pub small: Vec<u64>,
    /// Distinct rounded sizes, largest first.
    pub classes: Vec<SizeClass>,
}

impl RoundedInstance {
    pub fn rounded_size(&self, job: usize) -> Rational {
        self.classes[self.large[job].class].size
    }

    pub fn rounded_sizes(&self) -> Vec<Rational> {
        (0..self.large.len())
            .map(|j| self.rounded_size(j))
            .collect()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.classes.len()];
        for job in &self.large {
            counts[job.class] += 1;
        }
        counts
    }
}

/// Sizes below `eps * p_1 / n` go to the small side.
pub fn split_small(instance: &Instance, eps: Epsilon) -> (Vec<u64>, Vec<u64>) {
    let threshold = small_threshold(instance, eps);
    instance.sizes().iter().partition(|&&p| int(p) >= threshold)
}

pub fn small_threshold(instance: &Instance, eps: Epsilon) -> Rational {
    eps.value() * int(instance.max_size()) / int(instance.len() as u64)
}

/// Rounds every size of `instance` up to `unit * (1+eps)^k`, where the unit
/// is the smallest size. Nothing is split off.
pub fn round_sizes(instance: &Instance, eps: Epsilon) -> Result<RoundedInstance> {
    round_sizes_of(instance.sizes(), Vec::new(), eps)
}

fn round_sizes_of(large: &[u64], small: Vec<u64>, eps: Epsilon) -> Result<RoundedInstance> {
    let unit = large.iter().copied().min().unwrap_or(1);
    let mut rounded = Vec::with_capacity(large.len());
    for &p in large {
        rounded.push((p, round_up_to_power(p, unit, eps)?));
    }
    let mut exponents: Vec<u32> = rounded.iter().map(|(_, (k, _))| *k).collect();
    exponents.sort_unstable_by(|a, b| b.cmp(a));
    exponents.dedup();
    let classes: Vec<SizeClass> = exponents
        .iter()
        .map(|&k| {
            let size = rounded.iter().find(|(_, (e, _))| *e == k).unwrap().1 .1;
            SizeClass { exponent: k, size }
        })
        .collect();
    let large = rounded
        .iter()
        .map(|&(p, (k, _))| LargeJob {
            size: p,
            class: exponents.iter().position(|&e| e == k).unwrap(),
        })
        .collect();
    Ok(RoundedInstance {
        eps,
        unit,
        large,
        small,
        classes,
    })
}

/// Split, then round the large side.
pub fn prepare(instance: &Instance, eps: Epsilon) -> Result<RoundedInstance> {
    let (large, small) = split_small(instance, eps);
    round_sizes_of(&large, small, eps)
}

/// Allowed start times `{0, K, 2K, ..., max_index * K}` with
/// `K = eps * p_max / n` for the rounded large jobs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grid {
    #[serde(with = "crate::rational::wire")]
    pub step: Rational,
    pub max_index: u64,
}

impl Grid {
    pub fn new(rounded: &RoundedInstance) -> Self {
        let n = rounded.large.len().max(1) as u64;
        let eps = rounded.eps.value();
        let p_max = rounded.classes.first().map_or(int(1), |c| c.size);
        let max_index = rational::ceil_int(&(int(n * n) / eps)) as u64;
        Self {
            step: eps * p_max / int(n),
            max_index,
        }
    }

    pub fn points(&self) -> u64 {
        self.max_index + 1
    }

    pub fn point(&self, index: u64) -> Rational {
        self.step * int(index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpSolution {
    /// Optimal makespan of the rounded large jobs on the grid.
    pub makespan: Rational,
    /// Grid index of each large job, aligned with `RoundedInstance::large`.
    pub grid_index: Vec<u64>,
    pub starts: Vec<Rational>,
    pub states: usize,
}

const EMPTY: u32 = u32::MAX;

/// Rounded sizes and the grid step as integers over a common denominator.
struct Ticks {
    sizes: Vec<i128>,
    step: i128,
    per_unit: Rational,
}

impl Ticks {
    fn new(classes: &[SizeClass], step: Rational) -> Result<Self> {
        let overflow = || Error::Overflow("scaling the grid");
        let mut denom: i128 = *step.denom();
        for c in classes {
            denom = denom.lcm(c.size.denom());
        }
        let scale = |r: &Rational| -> Result<i128> {
            r.numer()
                .checked_mul(denom / r.denom())
                .ok_or_else(overflow)
        };
        let mut sizes = classes
            .iter()
            .map(|c| scale(&c.size))
            .collect::<Result<Vec<_>>>()?;
        let mut step_ticks = scale(&step)?;
        let g = sizes.iter().fold(step_ticks, |g, s| g.gcd(s));
        sizes.iter_mut().for_each(|s| *s /= g);
        step_ticks /= g;
        Ok(Self {
            sizes,
            step: step_ticks,
            per_unit: Rational::new(g, denom),
        })
    }
}

struct Dp<'a> {
    ticks: &'a Ticks,
    max_index: u64,
    budget: usize,
    memo: HashMap<Vec<u32>, (i128, u32)>,
}

impl Dp<'_> {
    fn classes(&self) -> usize {
        self.ticks.sizes.len()
    }

    fn final_span(&self, key: &[u32]) -> i128 {
        (0..self.classes())
            .filter(|&x| key[x] != EMPTY)
            .map(|x| key[x] as i128 * self.ticks.step + self.ticks.sizes[x])
            .max()
            .unwrap_or(0)
    }

    /// Grid index for a job of class `z` placed after configuration `key`.
    fn placement(&self, key: &[u32], z: usize) -> Option<u32> {
        let size = self.ticks.sizes[z];
        let earliest = (0..self.classes())
            .filter(|&x| key[x] != EMPTY)
            .map(|x| key[x] as i128 * self.ticks.step + self.ticks.sizes[x].min(size))
            .max()
            .unwrap_or(0);
        let index = Integer::div_ceil(&earliest, &self.ticks.step);
        (index as u64 <= self.max_index).then_some(index as u32)
    }

    /// `key` is the configuration followed by the remaining count per class.
    fn solve(&mut self, key: &mut Vec<u32>, remaining: usize) -> Result<i128> {
        if remaining == 0 {
            return Ok(self.final_span(key));
        }
        if let Some(&(value, _)) = self.memo.get(key.as_slice()) {
            return Ok(value);
        }
        if self.memo.len() >= self.budget {
            return Err(Error::BudgetExceeded {
                states: self.memo.len(),
                budget: self.budget,
            });
        }
        let m = self.classes();
        let mut best = (i128::MAX, u32::MAX);
        for z in 0..m {
            if key[m + z] == 0 {
                continue;
            }
            let Some(index) = self.placement(key, z) else {
                continue;
            };
            let saved = key[z];
            key[z] = index;
            key[m + z] -= 1;
            let value = self.solve(key, remaining - 1)?;
            key[m + z] += 1;
            key[z] = saved;
            if value < best.0 {
                best = (value, z as u32);
            }
        }
        self.memo.insert(key.clone(), best);
        Ok(best.0)
    }
}

/// Solves the rounded large jobs exactly over grid-canonical schedules.
pub fn dp_solve(rounded: &RoundedInstance, grid: &Grid, max_states: usize) -> Result<DpSolution> {
    let m = rounded.classes.len();
    let n = rounded.large.len();
    if n == 0 {
        return Ok(DpSolution {
            makespan: int(0),
            grid_index: Vec::new(),
            starts: Vec::new(),
            states: 0,
        });
    }
    if grid.max_index >= EMPTY as u64 {
        return Err(Error::Overflow("indexing the grid"));
    }
    let ticks = Ticks::new(&rounded.classes, grid.step)?;
    let mut dp = Dp {
        ticks: &ticks,
        max_index: grid.max_index,
        budget: max_states,
        memo: HashMap::new(),
    };
    let mut key = vec![EMPTY; m];
    key.extend(rounded.class_counts().iter().map(|&c| c as u32));
    let root = key.clone();
    let span = dp.solve(&mut key, n)?;
    if span == i128::MAX {
        // a largest-first canonical chain always fits in the grid
        unreachable!("no grid-feasible schedule for the rounded instance");
    }

    // replay the recorded choices
    let mut unused: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (j, job) in rounded.large.iter().enumerate().rev() {
        unused[job.class].push(j);
    }
    let mut grid_index = vec![0u64; n];
    let mut key = root;
    for _ in 0..n {
        let (_, z) = dp.memo[&key];
        let z = z as usize;
        let index = dp
            .placement(&key, z)
            .expect("recorded choice fits the grid");
        key[z] = index;
        key[m + z] -= 1;
        let job = unused[z].pop().expect("class count matches jobs");
        grid_index[job] = index as u64;
    }
    debug_assert_eq!(dp.final_span(&key), span);

    Ok(DpSolution {
        makespan: ticks.per_unit * Rational::from_integer(span),
        starts: grid_index.iter().map(|&i| grid.point(i)).collect(),
        grid_index,
        states: dp.memo.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QptasStats {
    pub classes: usize,
    pub grid_points: u64,
    pub states: usize,
    pub large_jobs: usize,
    pub small_jobs: usize,
    #[serde(with = "crate::rational::wire")]
    pub grid_step: Rational,
    #[serde(with = "crate::rational::wire")]
    pub rounded_makespan: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QptasOutput {
    pub schedule: Schedule,
    pub stats: QptasStats,
}

pub fn qptas_schedule(instance: &Instance, eps: Epsilon) -> Result<QptasOutput> {
    qptas_schedule_with(instance, eps, DEFAULT_MAX_STATES)
}

/// Large jobs come first (at their grid starts, with original sizes), then
/// the small ones back to back from the large jobs' makespan.
pub fn qptas_schedule_with(
    instance: &Instance,
    eps: Epsilon,
    max_states: usize,
) -> Result<QptasOutput> {
    let rounded = prepare(instance, eps)?;
    let grid = Grid::new(&rounded);
    let dp = dp_solve(&rounded, &grid, max_states)?;

    let mut jobs: Vec<Job> = rounded
        .large
        .iter()
        .zip(&dp.starts)
        .map(|(job, &start)| Job::new(job.size, start))
        .collect();
    let mut end = jobs.iter().map(Job::end).max().unwrap_or_else(|| int(0));
    for &p in &rounded.small {
        jobs.push(Job::new(p, end));
        end += int(p);
    }

    Ok(QptasOutput {
        schedule: Schedule::new(jobs)?,
        stats: QptasStats {
            classes: rounded.classes.len(),
            grid_points: grid.points(),
            states: dp.states,
            large_jobs: rounded.large.len(),
            small_jobs: rounded.small.len(),
            grid_step: grid.step,
            rounded_makespan: dp.makespan,
        },
    })
}
