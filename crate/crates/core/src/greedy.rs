//! Largest-gap insertion.
//!
//! Jobs are taken largest first. Each one goes into a largest gap (earliest
//! on ties), `p_j` after the gap's left end. When the gap is shorter than
//! `2 p_j`, every job after the gap moves right by the difference.
//!
//! The makespan grows by at most that shift. It grows by less when the job
//! that used to end last sits before the chosen gap, so the makespan is
//! always recomputed as `max_j s_j + p_j` rather than accumulated.

use std::fmt::Write as _;

use serde::Serialize;

use crate::instance::Instance;
use crate::schedule::Schedule;

/// Result of dropping a job of size `size` into a gap of length `length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Insertion {
    /// Offset of the job from the gap's left end (always `size`).
    pub offset: u64,
    /// Lengths of the two gaps that replace the original one.
    pub gaps: (u64, u64),
    pub shift: u64,
}

pub fn insert_into_gap(length: u64, size: u64) -> Insertion {
    if length >= 2 * size {
        Insertion {
            offset: size,
            gaps: (size, length - size),
            shift: 0,
        }
    } else {
        Insertion {
            offset: size,
            gaps: (size, size),
            shift: 2 * size - length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreedyStep {
    pub job: usize,
    pub size: u64,
    pub gap_start: u64,
    pub gap_length: u64,
    /// Start assigned at placement time; later shifts may move it.
    pub start: u64,
    /// `max(0, 2 p_j - x)`, applied to every job after the gap.
    pub shift: u64,
    /// Owner of the gap the job went into. A gap is owned by the
    /// later-placed job among its two ends, so every placed job owns the two
    /// gaps it creates.
    pub parent: Option<usize>,
    /// Makespan after this step; at most the previous one plus `shift`.
    pub makespan: u64,
    /// Longest gap just before the placement.
    pub max_gap_before: u64,
    /// Shortest gap just after the placement.
    pub min_gap_after: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreedyTrace {
    pub steps: Vec<GreedyStep>,
}

/// Incremental Greedy run. Job indices are positions in the sorted instance.
#[derive(Debug, Clone)]
pub struct GreedyRun<'a> {
    sizes: &'a [u64],
    starts: Vec<u64>,
    /// Placed jobs by increasing start.
    line: Vec<usize>,
    makespan: u64,
    steps: Vec<GreedyStep>,
}

impl<'a> GreedyRun<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        let sizes = instance.sizes();
        let p1 = sizes[0];
        let mut run = Self {
            sizes,
            starts: vec![0; sizes.len()],
            line: vec![0],
            makespan: p1,
            steps: Vec::with_capacity(sizes.len()),
        };
        run.steps.push(GreedyStep {
            job: 0,
            size: p1,
            gap_start: 0,
            gap_length: 0,
            start: 0,
            shift: 0,
            parent: None,
            makespan: p1,
            max_gap_before: 0,
            min_gap_after: p1,
        });
        run
    }

    pub fn placed(&self) -> usize {
        self.line.len()
    }

    pub fn is_done(&self) -> bool {
        self.placed() == self.sizes.len()
    }

    pub fn makespan(&self) -> u64 {
        self.makespan
    }

    fn gap_at(&self, k: usize) -> (u64, u64, usize) {
        let left = self.line[k];
        let start = self.starts[left];
        match self.line.get(k + 1) {
            Some(&right) => (start, self.starts[right] - start, left.max(right)),
            None => (start, self.makespan - start, left),
        }
    }

    /// Current gap lengths in time order.
    pub fn gap_lengths(&self) -> Vec<u64> {
        (0..self.line.len()).map(|k| self.gap_at(k).1).collect()
    }

    /// Places the next job; returns `None` once every job is placed.
    pub fn step(&mut self) -> Option<&GreedyStep> {
        let job = self.placed();
        let size = *self.sizes.get(job)?;

        let mut best = 0;
        let mut best_len = 0;
        for k in 0..self.line.len() {
            let len = self.gap_at(k).1;
            if len > best_len {
                best = k;
                best_len = len;
            }
        }
        let (gap_start, gap_length, owner) = self.gap_at(best);
        let ins = insert_into_gap(gap_length, size);
        for &later in &self.line[best + 1..] {
            self.starts[later] += ins.shift;
        }
        let start = gap_start + ins.offset;
        self.starts[job] = start;
        self.line.insert(best + 1, job);
        let previous = self.makespan;
        self.makespan = self
            .line
            .iter()
            .map(|&k| self.starts[k] + self.sizes[k])
            .max()
            .unwrap_or(0);
        debug_assert!(self.makespan <= previous + ins.shift);

        let min_gap_after = self.gap_lengths().into_iter().min().unwrap_or(0);
        debug_assert!(min_gap_after >= size);
        debug_assert!(ins.shift == 0 || best_len < 2 * size);

        self.steps.push(GreedyStep {
            job,
            size,
            gap_start,
            gap_length,
            start,
            shift: ins.shift,
            parent: Some(owner),
            makespan: self.makespan,
            max_gap_before: best_len,
            min_gap_after,
        });
        self.steps.last()
    }

    pub fn schedule(&self) -> Schedule {
        let placed = self.placed();
        Schedule::from_integer_starts(&self.sizes[..placed], &self.starts[..placed])
    }

    pub fn finish(mut self) -> (Schedule, GreedyTrace) {
        while self.step().is_some() {}
        let schedule = self.schedule();
        (schedule, GreedyTrace { steps: self.steps })
    }
}

/// Runs Greedy to completion. The schedule lists jobs in sorted-instance
/// order, so `jobs()[j]` is job `j` of the trace.
pub fn greedy_schedule(instance: &Instance) -> (Schedule, GreedyTrace) {
    GreedyRun::new(instance).finish()
}

pub fn greedy_makespan(instance: &Instance) -> u64 {
    let mut run = GreedyRun::new(instance);
    while run.step().is_some() {}
    run.makespan()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreedyTree {
    pub sizes: Vec<u64>,
    pub parent: Vec<Option<usize>>,
    /// Children in placement order.
    pub children: Vec<Vec<usize>>,
}

impl GreedyTree {
    pub fn root(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn depth(&self, mut node: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent[node] {
            node = p;
            d += 1;
        }
        d
    }

    /// Graphviz rendering; labels are 1-based job numbers with sizes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph greedy {\n  node [shape=circle];\n");
        for (j, p) in self.sizes.iter().enumerate() {
            let _ = writeln!(out, "  j{} [label=\"{}\\np={}\"];", j + 1, j + 1, p);
        }
        for (j, kids) in self.children.iter().enumerate() {
            for k in kids {
                let _ = writeln!(out, "  j{} -> j{};", j + 1, k + 1);
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn greedy_tree(trace: &GreedyTrace) -> GreedyTree {
    let n = trace.steps.len();
    let mut parent = vec![None; n];
    let mut children = vec![Vec::new(); n];
    let mut sizes = vec![0; n];
    for step in &trace.steps {
        sizes[step.job] = step.size;
        parent[step.job] = step.parent;
        if let Some(p) = step.parent {
            children[p].push(step.job);
        }
    }
    GreedyTree {
        sizes,
        parent,
        children,
    }
}
