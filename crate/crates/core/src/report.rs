use std::collections::HashSet;
use std::fmt::Write as _;

use crate::geometry::{chamfer_distance, PointCloud};
use crate::io::format_float;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub chamfer: f64,
    pub clean_size: usize,
    pub processed_size: usize,
    pub outliers: Option<usize>,
    /// How many listed outlier indices appear among the selected indices.
    pub outliers_captured: Option<usize>,
}

impl MetricsReport {
    pub fn size_delta(&self) -> i64 {
        self.processed_size as i64 - self.clean_size as i64
    }

    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "chamfer={}", format_float(self.chamfer));
        let _ = writeln!(out, "clean_size={}", self.clean_size);
        let _ = writeln!(out, "processed_size={}", self.processed_size);
        let _ = writeln!(out, "size_delta={}", self.size_delta());
        if let Some(n) = self.outliers {
            let _ = writeln!(out, "outliers={n}");
        }
        if let Some(n) = self.outliers_captured {
            let _ = writeln!(out, "outliers_captured={n}");
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<usize>| v.map(|n| n.to_string()).unwrap_or_default();
        format!(
            "chamfer,clean_size,processed_size,size_delta,outliers,outliers_captured\n{},{},{},{},{},{}\n",
            format_float(self.chamfer),
            self.clean_size,
            self.processed_size,
            self.size_delta(),
            opt(self.outliers),
            opt(self.outliers_captured),
        )
    }
}

/// Chamfer distance and size change between a clean and a processed cloud,
/// plus outlier capture when both an outlier manifest and a selection are
/// supplied.
pub fn report_metrics(
    clean: &PointCloud,
    processed: &PointCloud,
    outliers: Option<&[usize]>,
    selected: Option<&[usize]>,
) -> MetricsReport {
    let captured = match (outliers, selected) {
        (Some(out), Some(sel)) => {
            let out: HashSet<usize> = out.iter().copied().collect();
            Some(sel.iter().filter(|i| out.contains(i)).count())
        }
        _ => None,
    };
    MetricsReport {
        chamfer: chamfer_distance(clean, processed),
        clean_size: clean.len(),
        processed_size: processed.len(),
        outliers: outliers.map(|o| o.len()),
        outliers_captured: captured,
    }
}
