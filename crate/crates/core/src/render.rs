//! SVG and ASCII pictures of schedules and execution traces.
//!
//! A job is drawn as a right triangle with its vertical edge at the start,
//! height proportional to its size, and its tip at `start + size`.
//! Pixel coordinates are the only place floats appear.

use std::fmt::Write as _;

use crate::error::Result;
use crate::rational::{format_rational, int, Rational};
use crate::schedule::Schedule;
use crate::simulate::{ExecutionTrace, Outcome};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Pixels (SVG) or characters (ASCII) per time unit.
    pub scale: f64,
    /// Triangle height per unit of size, relative to `scale`.
    pub height: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            scale: 20.0,
            height: 1.0,
        }
    }
}

fn px(r: &Rational, scale: f64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64 * scale
}

const MARGIN: f64 = 20.0;

struct Canvas {
    body: String,
    axis_y: f64,
    scale: f64,
}

impl Canvas {
    fn new(schedule: &Schedule, opts: RenderOptions, rows: usize) -> Result<Self> {
        let makespan = schedule.makespan()?;
        let tallest = schedule.jobs().iter().map(|j| j.size).max().unwrap_or(1);
        let axis_y = MARGIN + tallest as f64 * opts.scale * opts.height;
        let width = px(&makespan, opts.scale) + 2.0 * MARGIN + 40.0;
        let height = axis_y + MARGIN * (2 + rows) as f64;
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
        );
        let mut canvas = Self {
            body,
            axis_y,
            scale: opts.scale,
        };
        for job in schedule.jobs() {
            let x0 = MARGIN + px(&job.start, opts.scale);
            let x1 = x0 + job.size as f64 * opts.scale;
            let top = axis_y - job.size as f64 * opts.scale * opts.height;
            let _ = writeln!(
                canvas.body,
                r#"  <polygon points="{x0:.1},{axis_y:.1} {x0:.1},{top:.1} {x1:.1},{axis_y:.1}" fill="none" stroke="black"><title>p={} s={}</title></polygon>"#,
                job.size,
                format_rational(&job.start)
            );
            let _ = writeln!(
                canvas.body,
                r#"  <text x="{:.1}" y="{:.1}" font-size="10">{}</text>"#,
                x0 + 2.0,
                axis_y - 3.0,
                job.size
            );
        }
        canvas.axis(axis_y, &makespan);
        Ok(canvas)
    }

    fn axis(&mut self, y: f64, end: &Rational) {
        let x_end = MARGIN + px(end, self.scale) + 20.0;
        let _ = writeln!(
            self.body,
            r#"  <line x1="{MARGIN:.1}" y1="{y:.1}" x2="{x_end:.1}" y2="{y:.1}" stroke="black"/>"#
        );
        let _ = writeln!(
            self.body,
            r#"  <text x="{x_end:.1}" y="{:.1}" font-size="10">time</text>"#,
            y + 12.0
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

pub fn svg_schedule(schedule: &Schedule, opts: RenderOptions) -> Result<String> {
    schedule.ensure_feasible()?;
    Ok(Canvas::new(schedule, opts, 0)?.finish())
}

/// Triangles on top, executed intervals as rectangles on a row below the axis.
pub fn svg_trace(trace: &ExecutionTrace, opts: RenderOptions) -> Result<String> {
    let schedule = trace_schedule(trace)?;
    schedule.ensure_feasible()?;
    let mut canvas = Canvas::new(&schedule, opts, 2)?;
    let row = canvas.axis_y + MARGIN;
    for (from, to) in trace.executed() {
        let x0 = MARGIN + px(&from, opts.scale);
        let w = px(&(to - from), opts.scale);
        let _ = writeln!(
            canvas.body,
            r#"  <rect x="{x0:.1}" y="{row:.1}" width="{w:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
            MARGIN / 2.0
        );
    }
    let end = schedule.makespan()?;
    canvas.axis(row + MARGIN / 2.0, &end);
    Ok(canvas.finish())
}

fn trace_schedule(trace: &ExecutionTrace) -> Result<Schedule> {
    Schedule::new(
        trace
            .jobs
            .iter()
            .map(|j| crate::schedule::Job::new(j.size, j.start))
            .collect(),
    )
}

fn cols(r: &Rational, scale: f64) -> usize {
    px(r, scale).round().max(0.0) as usize
}

/// One line per job in start order: `p=<size> s=<start> |   ######`.
pub fn ascii_schedule(schedule: &Schedule, scale: f64) -> Result<String> {
    schedule.ensure_feasible()?;
    let label_width = label_width(schedule);
    let mut out = String::new();
    for j in schedule.order_by_start() {
        let job = &schedule.jobs()[j];
        let label = format!("p={} s={}", job.size, format_rational(&job.start));
        let _ = writeln!(
            out,
            "{label:<label_width$} |{}{}",
            " ".repeat(cols(&job.start, scale)),
            "#".repeat(cols(&int(job.size), scale).max(1))
        );
    }
    let _ = writeln!(out, "makespan {}", format_rational(&schedule.makespan()?));
    Ok(out)
}

/// Executed jobs as `=` bars of their actual duration; canceled jobs name
/// their canceler.
pub fn ascii_trace(trace: &ExecutionTrace, scale: f64) -> Result<String> {
    let schedule = trace_schedule(trace)?;
    let label_width = label_width(&schedule);
    let mut out = String::new();
    for j in schedule.order_by_start() {
        let job = &trace.jobs[j];
        let label = format!("p={} s={}", job.size, format_rational(&job.start));
        match job.outcome {
            Outcome::Executed { from, to } => {
                let _ = writeln!(
                    out,
                    "{label:<label_width$} |{}{}",
                    " ".repeat(cols(&from, scale)),
                    "=".repeat(cols(&(to - from), scale).max(1))
                );
            }
            Outcome::Canceled { by } => {
                let _ = writeln!(
                    out,
                    "{label:<label_width$} |{}x canceled by p={}",
                    " ".repeat(cols(&job.start, scale)),
                    trace.jobs[by].size
                );
            }
        }
    }
    let _ = writeln!(out, "completion {}", format_rational(&trace.completion));
    Ok(out)
}

fn label_width(schedule: &Schedule) -> usize {
    schedule
        .jobs()
        .iter()
        .map(|j| format!("p={} s={}", j.size, format_rational(&j.start)).len())
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::Job;
    use crate::simulate::{simulate, DemandVector};

    fn figure_one() -> Schedule {
        Schedule::new(vec![
            Job::at(6, 0),
            Job::at(4, 4),
            Job::at(3, 7),
            Job::at(5, 10),
        ])
        .unwrap()
    }

    #[test]
    fn svg_has_one_triangle_per_job() {
        let opts = RenderOptions {
            scale: 10.0,
            height: 1.0,
        };
        let svg = svg_schedule(&figure_one(), opts).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 4);
        // rightmost tip at x = margin + 15 * 10
        assert!(svg.contains("170.0,80.0\""));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn svg_single_job_at_origin() {
        let s = Schedule::new(vec![Job::at(3, 0)]).unwrap();
        let svg = svg_schedule(
            &s,
            RenderOptions {
                scale: 10.0,
                height: 1.0,
            },
        )
        .unwrap();
        assert!(svg.contains(r#"points="20.0,50.0 20.0,20.0 50.0,50.0""#));
    }

    #[test]
    fn svg_trace_rectangles() {
        let t = simulate(&figure_one(), &DemandVector::from_integers(&[5, 1, 2, 4])).unwrap();
        let svg = svg_trace(
            &t,
            RenderOptions {
                scale: 10.0,
                height: 1.0,
            },
        )
        .unwrap();
        assert_eq!(svg.matches("<rect").count(), 3);
        assert!(svg.contains(r#"<rect x="20.0" y="100.0" width="50.0""#));
        assert!(svg.contains(r#"<rect x="90.0" y="100.0" width="20.0""#));
        assert!(svg.contains(r#"<rect x="120.0" y="100.0" width="40.0""#));
    }

    #[test]
    fn infeasible_is_rejected() {
        let bad = Schedule::new(vec![Job::at(6, 0), Job::at(5, 1)]).unwrap();
        assert!(svg_schedule(&bad, RenderOptions::default()).is_err());
        assert!(ascii_schedule(&bad, 1.0).is_err());
    }

    #[test]
    fn ascii_layout() {
        let text = ascii_schedule(&figure_one(), 1.0).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "p=6 s=0  |######");
        assert_eq!(lines[3], "p=5 s=10 |          #####");
        assert_eq!(lines[4], "makespan 15");

        let t = simulate(&figure_one(), &DemandVector::from_integers(&[4, 4, 1, 2])).unwrap();
        let text = ascii_trace(&t, 1.0).unwrap();
        assert!(text.contains("p=3 s=7  |       x canceled by p=4"));
        assert!(text.contains("p=4 s=4  |    ===="));
    }
}
