//! Tabulation of convergence factors over wavenumber grids, with CSV output.
//!
//! A scan evaluates one convergence-factor variant at every point of a
//! strictly increasing wavenumber grid. Singular wavenumbers (interface
//! matrix poles, out-of-domain points such as `k = 0` for the general
//! factor) are excluded from the table and recorded on a skip list instead
//! of being extrapolated; everything else is an error.

use std::fmt::Write as _;
use std::path::Path;

use crate::symbols::{
    optimal_symbols, rho_classical, rho_general, taylor_symbols, RhoResult,
};
use crate::{ElasticMedium, Error, Result};

/// Which convergence factor a scan evaluates.
pub enum RhoVariant<'a> {
    /// Classical Dirichlet-exchange iteration.
    Classical,
    /// Zeroth-order Taylor transmission conditions.
    Taylor0,
    /// Second-order Taylor transmission conditions.
    Taylor2,
    /// Transparent (optimal) transmission conditions.
    Optimal,
    /// Caller-supplied factor, e.g. for tuned or experimental symbols.
    Custom(&'a dyn Fn(f64) -> Result<RhoResult>),
}

impl RhoVariant<'_> {
    fn evaluate(&self, k: f64, omega: f64, medium: &ElasticMedium, delta: f64) -> Result<RhoResult> {
        match self {
            RhoVariant::Classical => rho_classical(k, omega, medium, delta),
            RhoVariant::Taylor0 => {
                let (_, s2) = taylor_symbols(0, k, omega, medium)?;
                rho_general(k, omega, medium, delta, &s2)
            }
            RhoVariant::Taylor2 => {
                let (_, s2) = taylor_symbols(2, k, omega, medium)?;
                rho_general(k, omega, medium, delta, &s2)
            }
            RhoVariant::Optimal => {
                let (_, s2) = optimal_symbols(k, omega, medium)?;
                rho_general(k, omega, medium, delta, &s2)
            }
            RhoVariant::Custom(f) => f(k),
        }
    }

    /// Stable name used in manifests and logs.
    pub fn name(&self) -> &'static str {
        match self {
            RhoVariant::Classical => "classical",
            RhoVariant::Taylor0 => "taylor0",
            RhoVariant::Taylor2 => "taylor2",
            RhoVariant::Optimal => "optimal",
            RhoVariant::Custom(_) => "custom",
        }
    }
}

/// A wavenumber excluded from a scan, with the reason.
#[derive(Debug, Clone)]
pub struct SkippedPoint {
    pub k: f64,
    pub reason: String,
}

/// Result table of a convergence-factor scan.
pub struct RhoScan {
    /// One row per retained grid point, in grid order.
    pub rows: Vec<RhoResult>,
    /// Excluded grid points, in grid order.
    pub skipped: Vec<SkippedPoint>,
}

/// Evaluates `variant` on the strictly increasing grid `k_grid`.
///
/// Singular and out-of-domain wavenumbers are moved to the skip list; any
/// other evaluation failure aborts the scan. An empty grid, a non-increasing
/// grid, or a grid with no retained points is a usage error.
pub fn scan_rho(
    variant: &RhoVariant,
    k_grid: &[f64],
    omega: f64,
    medium: &ElasticMedium,
    delta: f64,
) -> Result<RhoScan> {
    if k_grid.is_empty() {
        return Err(Error::Usage("scan grid is empty".into()));
    }
    if k_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Usage("scan grid must be strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(k_grid.len());
    let mut skipped = Vec::new();
    for &k in k_grid {
        match variant.evaluate(k, omega, medium, delta) {
            Ok(row) => rows.push(row),
            Err(Error::SingularPoint { reason, .. }) => {
                skipped.push(SkippedPoint { k, reason });
            }
            Err(Error::Domain(reason)) => {
                skipped.push(SkippedPoint { k, reason });
            }
            Err(other) => return Err(other),
        }
    }
    if rows.is_empty() {
        return Err(Error::Usage("every grid point was excluded from the scan".into()));
    }
    Ok(RhoScan { rows, skipped })
}

/// Formats a float with 17 significant digits.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

impl RhoScan {
    /// Renders the table as CSV with header
    /// `k,re_rplus,im_rplus,re_rminus,im_rminus,rho`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,re_rplus,im_rplus,re_rminus,im_rminus,rho\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt17(r.k),
                fmt17(r.r_plus.re),
                fmt17(r.r_plus.im),
                fmt17(r.r_minus.re),
                fmt17(r.r_minus.im),
                fmt17(r.rho),
            );
        }
        out
    }

    /// Renders the skip list as CSV with header `k,reason`.
    pub fn skipped_csv(&self) -> String {
        let mut out = String::from("k,reason\n");
        for s in &self.skipped {
            let _ = writeln!(out, "{},{}", fmt17(s.k), s.reason);
        }
        out
    }

    /// Writes the table to `path` and, when any point was skipped, the skip
    /// list to the sidecar `<stem>.skipped.csv` next to it.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        if !self.skipped.is_empty() {
            let sidecar = path.with_extension("skipped.csv");
            std::fs::write(sidecar, self.skipped_csv())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_medium() -> ElasticMedium {
        ElasticMedium::from_speeds(1.0, 1.0, 0.5).unwrap()
    }

    fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn classical_scan_reproduces_trichotomy_shape() {
        let m = reference_medium();
        let grid = uniform_grid(0.0, 6.0, 241);
        let scan = scan_rho(&RhoVariant::Classical, &grid, 1.0, &m, 0.1).unwrap();
        assert_eq!(scan.rows.len(), 241);
        for r in &scan.rows {
            if r.k <= 1.0 {
                assert!((r.rho - 1.0).abs() < 1e-6, "k = {}, rho = {}", r.k, r.rho);
            } else if r.k > 1.02 && r.k < 1.98 {
                assert!(r.rho > 1.0, "k = {}, rho = {}", r.k, r.rho);
            } else if r.k > 2.02 {
                assert!(r.rho < 1.0, "k = {}, rho = {}", r.k, r.rho);
            }
        }
    }

    #[test]
    fn taylor0_scan_without_overlap_stagnates_above_shear_cutoff() {
        let m = reference_medium();
        let grid = uniform_grid(2.0, 6.0, 81);
        let scan = scan_rho(&RhoVariant::Taylor0, &grid, 1.0, &m, 0.0).unwrap();
        for r in &scan.rows {
            assert!((r.rho - 1.0).abs() < 1e-8, "k = {}, rho = {}", r.k, r.rho);
        }
    }

    #[test]
    fn optimal_scan_is_null_and_skips_cutoffs() {
        let m = reference_medium();
        let grid = uniform_grid(0.5, 2.5, 5); // hits k = 1.0 and 2.0 exactly
        let scan = scan_rho(&RhoVariant::Optimal, &grid, 1.0, &m, 0.1).unwrap();
        assert_eq!(scan.rows.len(), 3);
        assert_eq!(scan.skipped.len(), 2);
        assert_eq!(scan.skipped[0].k, 1.0);
        assert_eq!(scan.skipped[1].k, 2.0);
        for r in &scan.rows {
            assert!(r.rho < 1e-12, "k = {}, rho = {}", r.k, r.rho);
        }
    }

    #[test]
    fn taylor_scan_skips_k0() {
        let m = reference_medium();
        let grid = uniform_grid(0.0, 3.0, 4);
        let scan = scan_rho(&RhoVariant::Taylor0, &grid, 1.0, &m, 0.0).unwrap();
        assert_eq!(scan.rows.len(), 3);
        assert_eq!(scan.skipped.len(), 1);
        assert_eq!(scan.skipped[0].k, 0.0);
    }

    #[test]
    fn rejects_bad_grids() {
        let m = reference_medium();
        assert!(matches!(
            scan_rho(&RhoVariant::Classical, &[], 1.0, &m, 0.1),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            scan_rho(&RhoVariant::Classical, &[1.0, 1.0, 2.0], 1.0, &m, 0.1),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            scan_rho(&RhoVariant::Classical, &[2.0, 1.0], 1.0, &m, 0.1),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn all_points_excluded_is_usage_error() {
        let m = reference_medium();
        assert!(matches!(
            scan_rho(&RhoVariant::Taylor0, &[0.0], 1.0, &m, 0.0),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn custom_variant_and_csv_format() {
        let m = reference_medium();
        let f = |k: f64| rho_classical(k, 1.0, &m, 0.1);
        let scan = scan_rho(&RhoVariant::Custom(&f), &[3.0, 4.0], 1.0, &m, 0.1).unwrap();
        let csv = scan.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "k,re_rplus,im_rplus,re_rminus,im_rminus,rho");
        let first = lines.next().unwrap();
        assert!(first.starts_with("3.0000000000000000e0,"));
        assert_eq!(first.split(',').count(), 6);
        // 17 significant digits round-trip exactly.
        let rho_field = first.split(',').last().unwrap();
        assert_eq!(rho_field.parse::<f64>().unwrap(), scan.rows[0].rho);
    }

    #[test]
    fn write_csv_emits_sidecar_only_when_needed() {
        let m = reference_medium();
        let dir = std::env::temp_dir().join("navier_schwarz_scan_test");
        std::fs::create_dir_all(&dir).unwrap();

        let clean = scan_rho(&RhoVariant::Classical, &[3.0, 4.0], 1.0, &m, 0.1).unwrap();
        let clean_path = dir.join("clean.csv");
        let clean_sidecar = dir.join("clean.skipped.csv");
        let _ = std::fs::remove_file(&clean_sidecar);
        clean.write_csv(&clean_path).unwrap();
        assert!(clean_path.exists());
        assert!(!clean_sidecar.exists());

        let skippy = scan_rho(&RhoVariant::Optimal, &[1.0, 3.0], 1.0, &m, 0.1).unwrap();
        let skippy_path = dir.join("skippy.csv");
        skippy.write_csv(&skippy_path).unwrap();
        let sidecar = std::fs::read_to_string(dir.join("skippy.skipped.csv")).unwrap();
        assert!(sidecar.starts_with("k,reason\n"));
        assert!(sidecar.lines().count() == 2);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
