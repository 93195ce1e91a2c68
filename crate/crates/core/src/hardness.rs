//! Encoding numerical 3-dimensional matching (3DM) as triangle scheduling.
//!
//! A 3DM instance `a, b, c` (each value strictly between `D/4` and `D/2`,
//! total `nD`) becomes `5n` jobs:
//!
//! | job | size           |
//! |-----|----------------|
//! | E   | `8M + 5D`      |
//! | F   | `4M`           |
//! | A_i | `2M + 2a_i + D`|
//! | B_j | `2M + b_j`     |
//! | C_k | `M + c_k + D`  |
//!
//! with `M >= 5D/4`. The encoded instance has a schedule of makespan
//! `n(8M + 5D)` exactly when the matching exists. Each block of a tight
//! schedule is laid out as `E, A_i, C_k, F, B_j`.
//!
//! Indices in matchings and labels are 0-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational::int;
use crate::schedule::{Job, Schedule};

pub const BRUTEFORCE_MAX_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeDmInstance {
    #[serde(rename = "D")]
    pub d: u64,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
}

impl ThreeDmInstance {
    pub fn new(d: u64, a: Vec<u64>, b: Vec<u64>, c: Vec<u64>) -> Result<Self> {
        let tdm = Self { d, a, b, c };
        tdm.validate()?;
        Ok(tdm)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidThreeDm(msg));
        let n = self.a.len();
        if n == 0 {
            return bad("no elements".into());
        }
        if self.b.len() != n || self.c.len() != n {
            return bad(format!(
                "lengths differ: a={}, b={}, c={}",
                n,
                self.b.len(),
                self.c.len()
            ));
        }
        if self.d < 4 {
            return bad(format!("D = {} is below 4", self.d));
        }
        for (name, values) in [("a", &self.a), ("b", &self.b), ("c", &self.c)] {
            for (i, &v) in values.iter().enumerate() {
                if 4 * v <= self.d || 2 * v >= self.d {
                    return bad(format!(
                        "{name}[{i}] = {v} not strictly between D/4 and D/2"
                    ));
                }
            }
        }
        let total: u64 = self.a.iter().chain(&self.b).chain(&self.c).sum();
        if total != n as u64 * self.d {
            return bad(format!(
                "values sum to {total}, expected nD = {}",
                n as u64 * self.d
            ));
        }
        Ok(())
    }

    /// Smallest admissible multiplier, `ceil(5D/4)`.
    pub fn min_multiplier(&self) -> u64 {
        (5 * self.d).div_ceil(4)
    }

    /// Length of one block, `8M + 5D`.
    pub fn block_length(&self, m: u64) -> u64 {
        8 * m + 5 * self.d
    }

    pub fn target_makespan(&self, m: u64) -> u64 {
        self.n() as u64 * self.block_length(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum JobKind {
    E,
    F,
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Label {
    pub kind: JobKind,
    /// Source element for A/B/C; copy number for E/F.
    pub index: usize,
    pub size: u64,
}

/// Job identities for an encoded instance, aligned with its sorted sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionLabels {
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "D")]
    pub d: u64,
    pub target_makespan: u64,
    pub labels: Vec<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    /// `(i, j, k)` per block: `a_i + b_j + c_k = D`.
    pub triplets: Vec<(usize, usize, usize)>,
}

impl Matching {
    pub fn validate(&self, tdm: &ThreeDmInstance) -> Result<()> {
        let n = tdm.n();
        let bad = |msg: String| Err(Error::InvalidMatching(msg));
        if self.triplets.len() != n {
            return bad(format!("{} triplets for n = {n}", self.triplets.len()));
        }
        let mut seen = [vec![false; n], vec![false; n], vec![false; n]];
        for (t, &(i, j, k)) in self.triplets.iter().enumerate() {
            for (axis, idx) in [i, j, k].into_iter().enumerate() {
                if idx >= n || std::mem::replace(&mut seen[axis][idx], true) {
                    return bad(format!("triplet {t} reuses or exceeds index {idx}"));
                }
            }
            let sum = tdm.a[i] + tdm.b[j] + tdm.c[k];
            if sum != tdm.d {
                return bad(format!("triplet {t} = ({i}, {j}, {k}) sums to {sum}"));
            }
        }
        Ok(())
    }
}

struct Sizes {
    e: u64,
    f: u64,
    m: u64,
    d: u64,
}

impl Sizes {
    fn new(tdm: &ThreeDmInstance, m: u64) -> Self {
        Self {
            e: tdm.block_length(m),
            f: 4 * m,
            m,
            d: tdm.d,
        }
    }

    fn a(&self, v: u64) -> u64 {
        2 * self.m + 2 * v + self.d
    }

    fn b(&self, v: u64) -> u64 {
        2 * self.m + v
    }

    fn c(&self, v: u64) -> u64 {
        self.m + v + self.d
    }

    /// Type of a job from its size alone; the type ranges are disjoint for
    /// admissible `M`. Returns the kind and the encoded 3DM value.
    fn classify(&self, size: u64) -> Option<(JobKind, u64)> {
        let (m, d) = (self.m, self.d);
        let admissible = |v: u64| 4 * v > d && 2 * v < d;
        if size == self.e {
            return Some((JobKind::E, 0));
        }
        if size == self.f {
            return Some((JobKind::F, 0));
        }
        if let Some(twice) = size.checked_sub(2 * m + d) {
            if twice % 2 == 0 && admissible(twice / 2) {
                return Some((JobKind::A, twice / 2));
            }
        }
        if let Some(v) = size.checked_sub(2 * m).filter(|&v| admissible(v)) {
            return Some((JobKind::B, v));
        }
        if let Some(v) = size.checked_sub(m + d).filter(|&v| admissible(v)) {
            return Some((JobKind::C, v));
        }
        None
    }
}

fn check_multiplier(tdm: &ThreeDmInstance, m: u64) -> Result<()> {
    tdm.validate()?;
    let min = tdm.min_multiplier();
    if m < min {
        return Err(Error::MultiplierTooSmall { m, min });
    }
    Ok(())
}

pub fn encode(tdm: &ThreeDmInstance, m: u64) -> Result<(Instance, ReductionLabels)> {
    check_multiplier(tdm, m)?;
    let s = Sizes::new(tdm, m);
    let n = tdm.n();
    let mut labels = Vec::with_capacity(5 * n);
    for t in 0..n {
        labels.push(Label {
            kind: JobKind::E,
            index: t,
            size: s.e,
        });
        labels.push(Label {
            kind: JobKind::F,
            index: t,
            size: s.f,
        });
    }
    for i in 0..n {
        labels.push(Label {
            kind: JobKind::A,
            index: i,
            size: s.a(tdm.a[i]),
        });
        labels.push(Label {
            kind: JobKind::B,
            index: i,
            size: s.b(tdm.b[i]),
        });
        labels.push(Label {
            kind: JobKind::C,
            index: i,
            size: s.c(tdm.c[i]),
        });
    }
    labels.sort_by(|x, y| {
        y.size
            .cmp(&x.size)
            .then(x.kind.cmp(&y.kind))
            .then(x.index.cmp(&y.index))
    });
    let instance = Instance::from_sizes(labels.iter().map(|l| l.size).collect())?;
    Ok((
        instance,
        ReductionLabels {
            m,
            d: tdm.d,
            target_makespan: tdm.target_makespan(m),
            labels,
        },
    ))
}

/// Tight schedule for a matching: one block per triplet.
pub fn schedule_from_matching(
    tdm: &ThreeDmInstance,
    m: u64,
    matching: &Matching,
) -> Result<Schedule> {
    check_multiplier(tdm, m)?;
    matching.validate(tdm)?;
    let s = Sizes::new(tdm, m);
    let mut jobs = Vec::with_capacity(5 * tdm.n());
    for (t, &(i, j, k)) in matching.triplets.iter().enumerate() {
        let offset = t as u64 * s.e;
        let (a, b, c) = (s.a(tdm.a[i]), s.b(tdm.b[j]), s.c(tdm.c[k]));
        jobs.push(Job::at(s.e, offset));
        jobs.push(Job::at(a, offset + a));
        jobs.push(Job::at(c, offset + a + c));
        jobs.push(Job::at(s.f, offset + a + 2 * c));
        jobs.push(Job::at(b, offset + a + 2 * c + b));
    }
    Schedule::new(jobs)
}

/// Reads a matching back out of a feasible schedule of makespan at most
/// `n(8M + 5D)` for the encoded instance.
pub fn matching_from_schedule(
    tdm: &ThreeDmInstance,
    m: u64,
    schedule: &Schedule,
) -> Result<Matching> {
    check_multiplier(tdm, m)?;
    let n = tdm.n();
    let target = tdm.target_makespan(m);
    let makespan = schedule.makespan()?;
    if makespan > int(target) {
        return Err(Error::NotTight { makespan, target });
    }
    schedule.ensure_feasible()?;
    let s = Sizes::new(tdm, m);

    let decode = |block: usize, reason: String| Error::Decode { block, reason };
    let mut e_starts: Vec<_> = schedule
        .jobs()
        .iter()
        .filter(|j| j.size == s.e)
        .map(|j| j.start)
        .collect();
    e_starts.sort();
    if e_starts.len() != n {
        return Err(decode(
            0,
            format!("{} E jobs, expected {n}", e_starts.len()),
        ));
    }

    let mut blocks: Vec<Vec<(JobKind, u64)>> = vec![Vec::new(); n];
    for job in schedule.jobs() {
        if job.size == s.e {
            continue;
        }
        let block = e_starts.partition_point(|&e| e <= job.start);
        if block == 0 {
            return Err(decode(
                0,
                format!("job of size {} starts before the first E", job.size),
            ));
        }
        let kind = s
            .classify(job.size)
            .ok_or_else(|| decode(block - 1, format!("size {} matches no job type", job.size)))?;
        blocks[block - 1].push(kind);
    }

    let mut used = [vec![false; n], vec![false; n], vec![false; n]];
    let mut triplets = Vec::with_capacity(n);
    for (t, block) in blocks.iter().enumerate() {
        let mut pick = |kind: JobKind, axis: usize, values: &[u64]| -> Result<usize> {
            let found: Vec<u64> = block
                .iter()
                .filter(|(k, _)| *k == kind)
                .map(|&(_, v)| v)
                .collect();
            if found.len() != 1 {
                return Err(decode(
                    t,
                    format!("{} jobs of type {kind:?}, expected 1", found.len()),
                ));
            }
            let idx = (0..n)
                .find(|&i| !used[axis][i] && values[i] == found[0])
                .ok_or_else(|| {
                    decode(
                        t,
                        format!("no unused {kind:?} element with value {}", found[0]),
                    )
                })?;
            used[axis][idx] = true;
            Ok(idx)
        };
        let fs = block.iter().filter(|(k, _)| *k == JobKind::F).count();
        if fs != 1 {
            return Err(decode(t, format!("{fs} jobs of type F, expected 1")));
        }
        let i = pick(JobKind::A, 0, &tdm.a)?;
        let j = pick(JobKind::B, 1, &tdm.b)?;
        let k = pick(JobKind::C, 2, &tdm.c)?;
        let sum = tdm.a[i] + tdm.b[j] + tdm.c[k];
        if sum != tdm.d {
            return Err(decode(
                t,
                format!("triplet sums to {sum}, expected {}", tdm.d),
            ));
        }
        triplets.push((i, j, k));
    }
    Ok(Matching { triplets })
}

/// Exhaustive search for a perfect matching, `n <= 6`.
pub fn solve_3dm_bruteforce(tdm: &ThreeDmInstance) -> Result<Option<Matching>> {
    tdm.validate()?;
    let n = tdm.n();
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            limit: BRUTEFORCE_MAX_N,
        });
    }
    fn go(
        tdm: &ThreeDmInstance,
        i: usize,
        used_b: &mut [bool],
        used_c: &mut [bool],
        acc: &mut Vec<(usize, usize, usize)>,
    ) -> bool {
        let n = tdm.n();
        if i == n {
            return true;
        }
        for j in 0..n {
            if used_b[j] {
                continue;
            }
            for k in 0..n {
                if used_c[k] || tdm.a[i] + tdm.b[j] + tdm.c[k] != tdm.d {
                    continue;
                }
                used_b[j] = true;
                used_c[k] = true;
                acc.push((i, j, k));
                if go(tdm, i + 1, used_b, used_c, acc) {
                    return true;
                }
                acc.pop();
                used_b[j] = false;
                used_c[k] = false;
            }
        }
        false
    }
    let mut acc = Vec::with_capacity(n);
    let found = go(tdm, 0, &mut vec![false; n], &mut vec![false; n], &mut acc);
    Ok(found.then_some(Matching { triplets: acc }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn single() -> ThreeDmInstance {
        ThreeDmInstance::new(10, vec![3], vec![3], vec![4]).unwrap()
    }

    fn solvable_pair() -> ThreeDmInstance {
        ThreeDmInstance::new(10, vec![3, 4], vec![3, 3], vec![4, 3]).unwrap()
    }

    fn unsolvable_pair() -> ThreeDmInstance {
        ThreeDmInstance::new(14, vec![4, 6], vec![5, 5], vec![4, 4]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ThreeDmInstance::new(10, vec![3], vec![3], vec![5]).is_err()); // 5 = D/2
        assert!(ThreeDmInstance::new(12, vec![3], vec![4], vec![5]).is_err()); // 3 = D/4
        assert!(ThreeDmInstance::new(10, vec![3, 4], vec![3, 3], vec![4, 4]).is_err()); // sum
        assert!(ThreeDmInstance::new(10, vec![], vec![], vec![]).is_err());
        assert!(ThreeDmInstance::new(3, vec![1], vec![1], vec![1]).is_err());
    }

    #[test]
    fn encode_single() {
        let (inst, labels) = encode(&single(), 13).unwrap();
        assert_eq!(inst.sizes(), &[154, 52, 42, 29, 27]);
        assert_eq!(labels.target_makespan, 154);
        let kinds: Vec<JobKind> = labels.labels.iter().map(|l| l.kind).collect();
        assert_eq!(
            kinds,
            vec![JobKind::E, JobKind::F, JobKind::A, JobKind::B, JobKind::C]
        );
    }

    #[test]
    fn encode_pair() {
        let (inst, labels) = encode(&unsolvable_pair(), 18).unwrap();
        assert_eq!(inst.sizes(), &[214, 214, 72, 72, 62, 58, 41, 41, 36, 36]);
        assert_eq!(labels.target_makespan, 428);
    }

    #[test]
    fn multiplier_floor() {
        let tdm = single();
        assert_eq!(tdm.min_multiplier(), 13);
        assert_eq!(
            encode(&tdm, 12).unwrap_err(),
            Error::MultiplierTooSmall { m: 12, min: 13 }
        );
    }

    #[test]
    fn certificate_single() {
        let tdm = single();
        let matching = Matching {
            triplets: vec![(0, 0, 0)],
        };
        let s = schedule_from_matching(&tdm, 13, &matching).unwrap();
        assert_eq!(s.integer_starts().unwrap(), vec![0, 42, 69, 96, 125]);
        assert_eq!(s.sizes(), vec![154, 42, 27, 52, 29]);
        assert!(s.is_feasible());
        assert_eq!(s.makespan().unwrap(), int(154));
        assert_eq!(matching_from_schedule(&tdm, 13, &s).unwrap(), matching);
    }

    #[test]
    fn certificate_round_trip_pair() {
        let tdm = solvable_pair();
        let matching = solve_3dm_bruteforce(&tdm).unwrap().unwrap();
        assert_eq!(matching.triplets, vec![(0, 0, 0), (1, 1, 1)]);
        for m in [13, 14, 40] {
            let s = schedule_from_matching(&tdm, m, &matching).unwrap();
            assert!(s.is_feasible());
            assert_eq!(s.makespan().unwrap(), int(tdm.target_makespan(m)));
            assert_eq!(matching_from_schedule(&tdm, m, &s).unwrap(), matching);
        }
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(
            solve_3dm_bruteforce(&single()).unwrap(),
            Some(Matching {
                triplets: vec![(0, 0, 0)]
            })
        );
        assert_eq!(solve_3dm_bruteforce(&unsolvable_pair()).unwrap(), None);
    }

    #[test]
    fn bad_matching_is_rejected() {
        let tdm = solvable_pair();
        let wrong = Matching {
            triplets: vec![(0, 0, 1), (1, 1, 0)],
        };
        assert!(matches!(
            schedule_from_matching(&tdm, 13, &wrong),
            Err(Error::InvalidMatching(_))
        ));
        let dup = Matching {
            triplets: vec![(0, 0, 0), (0, 1, 1)],
        };
        assert!(schedule_from_matching(&tdm, 13, &dup).is_err());
    }

    #[test]
    fn loose_schedule_is_rejected() {
        let tdm = single();
        let (inst, _) = encode(&tdm, 13).unwrap();
        let loose = Schedule::from_integer_starts(inst.sizes(), &[0, 200, 300, 400, 500]);
        assert!(matches!(
            matching_from_schedule(&tdm, 13, &loose),
            Err(Error::NotTight { target: 154, .. })
        ));
    }

    #[test]
    fn decoder_names_the_block() {
        let tdm = solvable_pair();
        let matching = Matching {
            triplets: vec![(0, 0, 0), (1, 1, 1)],
        };
        let good = schedule_from_matching(&tdm, 13, &matching).unwrap();
        // shrink the second block's F job; shrinking keeps the schedule feasible
        let mut jobs = good.jobs().to_vec();
        assert_eq!(jobs[8].size, 52);
        jobs[8].size = 51;
        let bad = Schedule::new(jobs).unwrap();
        assert!(bad.is_feasible());
        let err = matching_from_schedule(&tdm, 13, &bad).unwrap_err();
        assert!(matches!(err, Error::Decode { block: 1, .. }), "{err}");
    }

    #[test]
    fn ratio_gap_is_exact() {
        for (tdm, m) in [
            (solvable_pair(), 13),
            (unsolvable_pair(), 18),
            (unsolvable_pair(), 100),
        ] {
            let (inst, _) = encode(&tdm, m).unwrap();
            let excess = inst.binary_tree_ratio() - int(2);
            assert_eq!(excess, Rational::new(5 * tdm.d as i128, 4 * m as i128));
        }
    }
}
