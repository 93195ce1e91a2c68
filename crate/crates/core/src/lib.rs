//! Triangle scheduling.
//!
//! Every job `j` has an integer size `p_j` (its criticality level, or
//! worst-case execution time) and occupies a right triangle on the time line
//! whose vertical edge sits at its start `s_j`. A schedule is feasible when
//! any two starts are at least `min(p_i, p_j)` apart; the objective is the
//! makespan `max_j s_j + p_j`.
//!
//! The crate provides:
//!  - [`greedy`]: largest-gap insertion, optimal whenever the binary tree
//!    ratio is at most 2 and within a factor 3/2 otherwise
//!  - [`exact`]: a branch-and-bound oracle for small instances
//!  - [`qptas`]: size rounding plus a configuration dynamic program
//!  - [`hardness`]: the encoding of numerical 3-dimensional matching
//!  - [`simulate`]: runtime execution with overruns and cancellation
//!  - [`generate`] and [`render`]: seeded instance generators, the ratio
//!    search harness, and SVG/ASCII output
//!
//! All arithmetic is exact; there are no floats on any solver path.

pub mod error;
pub mod exact;
pub mod generate;
pub mod greedy;
pub mod hardness;
pub mod instance;
pub mod qptas;
pub mod rational;
pub mod render;
pub mod schedule;
pub mod simulate;

pub use error::{Error, Result};
pub use instance::Instance;
pub use rational::Rational;
pub use schedule::{Gap, GapList, Job, Schedule};
