use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Job {
    pub size: u64,
    #[serde(with = "crate::rational::wire")]
    pub start: Rational,
}

impl Job {
    pub fn new(size: u64, start: Rational) -> Self {
        Self { size, start }
    }

    pub fn at(size: u64, start: u64) -> Self {
        Self::new(size, int(start))
    }

    pub fn end(&self) -> Rational {
        self.start + int(self.size)
    }
}

/// Start times for a set of jobs. Feasibility is checked, not enforced, so
/// broken schedules can be loaded and diagnosed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Schedule {
    jobs: Vec<Job>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gap {
    #[serde(with = "crate::rational::wire")]
    pub start: Rational,
    #[serde(with = "crate::rational::wire")]
    pub length: Rational,
    /// Job starting at the left end of the gap.
    pub left: usize,
    /// Job starting at the right end; `None` for the final gap that ends at the makespan.
    pub right: Option<usize>,
}

pub type GapList = Vec<Gap>;

impl Schedule {
    pub fn new(jobs: Vec<Job>) -> Result<Self> {
        for (j, job) in jobs.iter().enumerate() {
            if job.size == 0 {
                return Err(Error::NonPositiveSize(0));
            }
            if job.start < int(0) {
                return Err(Error::NegativeStart {
                    job: j,
                    start: job.start,
                });
            }
        }
        Ok(Self { jobs })
    }

    pub fn from_integer_starts(sizes: &[u64], starts: &[u64]) -> Self {
        assert_eq!(sizes.len(), starts.len());
        Self {
            jobs: sizes
                .iter()
                .zip(starts)
                .map(|(&p, &s)| Job::at(p, s))
                .collect(),
        }
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    /// Every pair `(i, j)`, `i < j`, with `|s_i - s_j| < min(p_i, p_j)`.
    /// Indices refer to positions in `jobs()`.
    pub fn check_feasible(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for (i, a) in self.jobs.iter().enumerate() {
            for (j, b) in self.jobs.iter().enumerate().skip(i + 1) {
                let dist = (a.start - b.start).abs();
                if dist < int(a.size.min(b.size)) {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    pub fn is_feasible(&self) -> bool {
        self.check_feasible().is_empty()
    }

    pub fn ensure_feasible(&self) -> Result<()> {
        let bad = self.check_feasible();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Infeasible(bad))
        }
    }

    pub fn makespan(&self) -> Result<Rational> {
        self.jobs
            .iter()
            .map(Job::end)
            .max()
            .ok_or(Error::EmptySchedule)
    }

    /// Job indices ordered by start time (stable on ties).
    pub fn order_by_start(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.jobs.len()).collect();
        order.sort_by(|&a, &b| self.jobs[a].start.cmp(&self.jobs[b].start));
        order
    }

    /// Intervals between successive starts, plus the interval from the last
    /// start to the makespan.
    pub fn gaps(&self) -> Result<GapList> {
        let makespan = self.makespan()?;
        let order = self.order_by_start();
        let mut gaps = Vec::with_capacity(order.len());
        for (k, &left) in order.iter().enumerate() {
            let start = self.jobs[left].start;
            let (end, right) = match order.get(k + 1) {
                Some(&r) => (self.jobs[r].start, Some(r)),
                None => (makespan, None),
            };
            if end == start {
                return Err(Error::CoincidentStarts(left, right.unwrap_or(left)));
            }
            gaps.push(Gap {
                start,
                length: end - start,
                left,
                right,
            });
        }
        Ok(gaps)
    }

    /// Starts as integers, if they all are.
    pub fn integer_starts(&self) -> Option<Vec<u64>> {
        self.jobs
            .iter()
            .map(|j| j.start.is_integer().then(|| j.start.to_integer() as u64))
            .collect()
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.jobs.iter().map(|j| j.size).collect()
    }
}

impl<'de> Deserialize<'de> for Schedule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            jobs: Vec<RawJob>,
        }
        #[derive(Deserialize)]
        struct RawJob {
            size: i64,
            #[serde(with = "crate::rational::wire")]
            start: Rational,
        }
        let raw = Raw::deserialize(d)?;
        let mut jobs = Vec::with_capacity(raw.jobs.len());
        for j in raw.jobs {
            if j.size <= 0 {
                return Err(serde::de::Error::custom(Error::NonPositiveSize(j.size)));
            }
            jobs.push(Job::new(j.size as u64, j.start));
        }
        Schedule::new(jobs).map_err(serde::de::Error::custom)
    }
}
