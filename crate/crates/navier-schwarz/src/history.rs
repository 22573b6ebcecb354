//! Per-iteration convergence records shared by the stationary Schwarz
//! iteration and GMRES.

use std::fmt::Write as _;
use std::path::Path;

use crate::Result;

/// State of the iteration after a given step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationFlag {
    /// Not yet terminated.
    Running,
    /// Monitored quantity reached the tolerance.
    Converged,
    /// Monitored quantity exceeded the divergence guard, or grew overall.
    Diverged,
    /// Arnoldi breakdown with the residual still above tolerance.
    Stagnated,
    /// Iteration budget exhausted.
    MaxIters,
}

impl IterationFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            IterationFlag::Running => "running",
            IterationFlag::Converged => "converged",
            IterationFlag::Diverged => "diverged",
            IterationFlag::Stagnated => "stagnated",
            IterationFlag::MaxIters => "max_iters",
        }
    }
}

/// One history row. `rel_error` is the error against the known solution when
/// one is available, NaN otherwise; `rel_residual` is always recorded.
#[derive(Debug, Clone, Copy)]
pub struct HistoryRow {
    pub iter: usize,
    pub rel_error: f64,
    pub rel_residual: f64,
    pub flag: IterationFlag,
}

/// Full record of one solver run.
#[derive(Debug, Clone, Default)]
pub struct ConvergenceHistory {
    pub rows: Vec<HistoryRow>,
}

impl ConvergenceHistory {
    pub fn push(&mut self, iter: usize, rel_error: f64, rel_residual: f64, flag: IterationFlag) {
        self.rows.push(HistoryRow { iter, rel_error, rel_residual, flag });
    }

    /// Terminal flag of the run (`Running` only if the run never finished).
    pub fn final_flag(&self) -> IterationFlag {
        self.rows.last().map_or(IterationFlag::Running, |r| r.flag)
    }

    /// Number of iterations performed (highest recorded iteration index).
    pub fn iterations(&self) -> usize {
        self.rows.last().map_or(0, |r| r.iter)
    }

    pub fn converged(&self) -> bool {
        self.final_flag() == IterationFlag::Converged
    }

    /// The monitored quantity of the last row: relative error when tracked,
    /// else relative residual.
    pub fn final_measure(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| {
            if r.rel_error.is_nan() {
                r.rel_residual
            } else {
                r.rel_error
            }
        })
    }

    fn fmt_value(x: f64) -> String {
        if x.is_nan() {
            "nan".to_string()
        } else {
            format!("{x:.16e}")
        }
    }

    /// Renders the history as CSV with header `iter,rel_error,rel_residual,flag`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,rel_error,rel_residual,flag\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.iter,
                Self::fmt_value(r.rel_error),
                Self::fmt_value(r.rel_residual),
                r.flag.as_str(),
            );
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_format_and_flags() {
        let mut h = ConvergenceHistory::default();
        h.push(0, 1.0, 1.0, IterationFlag::Running);
        h.push(1, f64::NAN, 0.25, IterationFlag::Converged);
        let csv = h.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "iter,rel_error,rel_residual,flag");
        assert!(lines[1].ends_with(",running"));
        assert_eq!(lines[2], "1,nan,2.5000000000000000e-1,converged");
        assert!(h.converged());
        assert_eq!(h.iterations(), 1);
        assert_eq!(h.final_measure(), 0.25);
    }

    #[test]
    fn final_measure_prefers_error() {
        let mut h = ConvergenceHistory::default();
        h.push(3, 0.5, 0.1, IterationFlag::MaxIters);
        assert_eq!(h.final_measure(), 0.5);
        assert_eq!(h.final_flag(), IterationFlag::MaxIters);
    }
}
