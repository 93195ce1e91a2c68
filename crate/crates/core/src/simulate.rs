//! Runtime execution of a schedule under actual durations.
//!
//! Each job normally needs one time unit but may run for up to `p_j`. A job
//! that is still running when another job's slot arrives cancels that job.
//! In a feasible schedule only strictly less critical jobs are ever canceled.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::schedule::Schedule;

/// Actual duration of each job, aligned with `Schedule::jobs()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DemandVector(#[serde(with = "wire_vec")] pub Vec<Rational>);

mod wire_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::Rational;

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "crate::rational::wire")] Rational);

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|&r| W(r)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Ok(Vec::<W>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

impl DemandVector {
    pub fn from_integers(demands: &[u64]) -> Self {
        Self(demands.iter().map(|&d| int(d)).collect())
    }

    pub fn unit(n: usize) -> Self {
        Self(vec![int(1); n])
    }

    pub fn validate(&self, schedule: &Schedule) -> Result<()> {
        if self.0.len() != schedule.len() {
            return Err(Error::DemandLength {
                jobs: schedule.len(),
                demands: self.0.len(),
            });
        }
        for (job, (d, j)) in self.0.iter().zip(schedule.jobs()).enumerate() {
            if *d < int(1) || *d > int(j.size) {
                return Err(Error::DemandOutOfRange {
                    job,
                    demand: *d,
                    size: j.size,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Executed {
        #[serde(with = "crate::rational::wire")]
        from: Rational,
        #[serde(with = "crate::rational::wire")]
        to: Rational,
    },
    Canceled {
        by: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobExecution {
    pub size: u64,
    #[serde(with = "crate::rational::wire")]
    pub start: Rational,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionTrace {
    pub jobs: Vec<JobExecution>,
    #[serde(with = "crate::rational::wire")]
    pub completion: Rational,
}

impl ExecutionTrace {
    /// Executed intervals in time order.
    pub fn executed(&self) -> Vec<(Rational, Rational)> {
        let mut out: Vec<_> = self
            .jobs
            .iter()
            .filter_map(|j| match j.outcome {
                Outcome::Executed { from, to } => Some((from, to)),
                Outcome::Canceled { .. } => None,
            })
            .collect();
        out.sort();
        out
    }

    /// `(canceled, canceler)` pairs.
    pub fn cancellations(&self) -> Vec<(usize, usize)> {
        self.jobs
            .iter()
            .enumerate()
            .filter_map(|(i, j)| match j.outcome {
                Outcome::Canceled { by } => Some((i, by)),
                Outcome::Executed { .. } => None,
            })
            .collect()
    }

    /// Every canceled job is strictly less critical than its canceler.
    pub fn protection_holds(&self) -> bool {
        self.cancellations()
            .iter()
            .all(|&(victim, by)| self.jobs[victim].size < self.jobs[by].size)
    }
}

pub fn simulate(schedule: &Schedule, demands: &DemandVector) -> Result<ExecutionTrace> {
    schedule.ensure_feasible()?;
    demands.validate(schedule)?;

    let jobs = schedule.jobs();
    let mut outcomes: Vec<Option<Outcome>> = vec![None; jobs.len()];
    let mut running: Option<usize> = None;
    let mut busy_until = int(0);
    for j in schedule.order_by_start() {
        let start = jobs[j].start;
        match running {
            Some(i) if start < busy_until => {
                debug_assert!(jobs[j].size < jobs[i].size);
                outcomes[j] = Some(Outcome::Canceled { by: i });
            }
            _ => {
                busy_until = start + demands.0[j];
                running = Some(j);
                outcomes[j] = Some(Outcome::Executed {
                    from: start,
                    to: busy_until,
                });
            }
        }
    }

    Ok(ExecutionTrace {
        jobs: jobs
            .iter()
            .zip(outcomes)
            .map(|(job, outcome)| JobExecution {
                size: job.size,
                start: job.start,
                outcome: outcome.expect("every job visited"),
            })
            .collect(),
        completion: busy_until,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::Job;

    fn figure_one() -> Schedule {
        Schedule::new(vec![
            Job::at(6, 0),
            Job::at(4, 4),
            Job::at(3, 7),
            Job::at(5, 10),
        ])
        .unwrap()
    }

    fn intervals(t: &ExecutionTrace) -> Vec<(i128, i128)> {
        t.executed()
            .into_iter()
            .map(|(a, b)| (a.to_integer(), b.to_integer()))
            .collect()
    }

    #[test]
    fn unit_demands_run_everything() {
        let t = simulate(&figure_one(), &DemandVector::unit(4)).unwrap();
        assert_eq!(intervals(&t), vec![(0, 1), (4, 5), (7, 8), (10, 11)]);
        assert!(t.cancellations().is_empty());
        assert_eq!(t.completion, int(11));
    }

    #[test]
    fn long_first_job_cancels_second() {
        let t = simulate(&figure_one(), &DemandVector::from_integers(&[5, 1, 2, 4])).unwrap();
        assert_eq!(intervals(&t), vec![(0, 5), (7, 9), (10, 14)]);
        assert_eq!(t.cancellations(), vec![(1, 0)]);
        assert!(t.protection_holds());
    }

    #[test]
    fn second_job_overruns_into_third() {
        let t = simulate(&figure_one(), &DemandVector::from_integers(&[4, 4, 1, 2])).unwrap();
        assert_eq!(intervals(&t), vec![(0, 4), (4, 8), (10, 12)]);
        assert_eq!(t.cancellations(), vec![(2, 1)]);
        assert_eq!(t.completion, int(12));
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = figure_one();
        assert!(matches!(
            simulate(&s, &DemandVector::from_integers(&[1, 1, 1])),
            Err(Error::DemandLength {
                jobs: 4,
                demands: 3
            })
        ));
        assert!(matches!(
            simulate(&s, &DemandVector::from_integers(&[7, 1, 1, 1])),
            Err(Error::DemandOutOfRange { job: 0, .. })
        ));
        assert!(matches!(
            simulate(&s, &DemandVector::from_integers(&[0, 1, 1, 1])),
            Err(Error::DemandOutOfRange { job: 0, .. })
        ));
        let bad = Schedule::new(vec![Job::at(6, 0), Job::at(5, 1)]).unwrap();
        assert!(matches!(
            simulate(&bad, &DemandVector::unit(2)),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn trace_json_shape() {
        let t = simulate(&figure_one(), &DemandVector::from_integers(&[5, 1, 2, 4])).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["jobs"][1]["status"], "canceled");
        assert_eq!(v["jobs"][1]["by"], 0);
        assert_eq!(v["jobs"][0]["to"], 5);
        assert_eq!(v["completion"], 14);
        let d: DemandVector = serde_json::from_str(r#"[1, "3/2", 2]"#).unwrap();
        assert_eq!(d.0[1], Rational::new(3, 2));
    }
}
