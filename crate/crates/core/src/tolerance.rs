//! Numerical tolerances shared by every module.
//!
//! Everything that compares floating-point distances or filtration values
//! reads its thresholds from [`Tolerances`]; nothing else hard-codes one.

/// Tolerance record used across ingestion, filtration and erosion code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Asymmetry up to this is repaired by averaging the two triangles;
    /// anything larger is rejected.
    pub symmetry: f64,
    /// Largest permitted magnitude of a diagonal entry.
    pub diagonal: f64,
    /// Slack on the triangle inequality before a warning is produced.
    pub triangle: f64,
    /// Two filtration values closer than this (relative to magnitude) are
    /// treated as the same grid value.
    pub grid_snap: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        symmetry: 1e-6,
        diagonal: 1e-9,
        triangle: 1e-9,
        grid_snap: 1e-12,
    };

    /// Absolute snapping radius around `x`.
    pub fn snap_radius(&self, x: f64) -> f64 {
        self.grid_snap * x.abs().max(1.0)
    }

    pub fn same_value(&self, a: f64, b: f64) -> bool {
        if a == b {
            return true;
        }
        (a - b).abs() <= self.snap_radius(a.abs().max(b.abs()))
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
