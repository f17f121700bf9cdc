//! Finite metric spaces stored as dense distance matrices.

use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// A finite metric space on points `0..n`.
///
/// Distances are kept as a row-major `n × n` matrix. Construction validates
/// the diagonal, non-negativity and symmetry; small asymmetries are repaired
/// by averaging the two triangles. The triangle inequality is only checked on
/// demand, since Vietoris–Rips complexes are defined for any symmetric
/// dissimilarity.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Vec<f64>,
    labels: Option<Vec<String>>,
}

/// A violated triangle inequality `d(i,k) > d(i,j) + d(j,k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub excess: f64,
}

impl FiniteMetricSpace {
    /// Validates and builds a space from a square matrix.
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_matrix_with(rows, &Tolerances::DEFAULT)
    }

    pub fn from_matrix_with(rows: Vec<Vec<f64>>, tol: &Tolerances) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Dimension("empty distance matrix".into()));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            dist.extend_from_slice(row);
        }
        for i in 0..n {
            for j in 0..n {
                let d = dist[i * n + j];
                if !d.is_finite() {
                    return Err(Error::InvalidMetric(format!("entry ({i},{j}) is not finite")));
                }
                if d < 0.0 {
                    return Err(Error::InvalidMetric(format!("entry ({i},{j}) = {d} is negative")));
                }
            }
            let diag = dist[i * n + i];
            if diag.abs() > tol.diagonal {
                return Err(Error::InvalidMetric(format!("diagonal entry ({i},{i}) = {diag} is nonzero")));
            }
            dist[i * n + i] = 0.0;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (dist[i * n + j], dist[j * n + i]);
                if (a - b).abs() > tol.symmetry {
                    return Err(Error::InvalidMetric(format!(
                        "asymmetric entries ({i},{j}) = {a} and ({j},{i}) = {b}"
                    )));
                }
                let avg = if a == b { a } else { 0.5 * (a + b) };
                if avg == 0.0 {
                    return Err(Error::InvalidMetric(format!("distinct points {i} and {j} at distance 0")));
                }
                dist[i * n + j] = avg;
                dist[j * n + i] = avg;
            }
        }
        Ok(Self { n, dist, labels: None })
    }

    /// Pairwise Euclidean distances of a point cloud.
    pub fn euclidean_from_points(points: &[Vec<f64>]) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::Dimension("empty point list".into()))?;
        let d = first.len();
        if d == 0 {
            return Err(Error::Dimension("points must have dimension at least 1".into()));
        }
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != d) {
            return Err(Error::Dimension(format!(
                "point {i} has dimension {}, expected {d}",
                p.len()
            )));
        }
        let n = points.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let s: f64 = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                dist[i * n + j] = s.sqrt();
                dist[j * n + i] = s.sqrt();
            }
        }
        Ok(Self { n, dist, labels: None })
    }

    /// `n` equally spaced points on a circle of the given circumference,
    /// with the geodesic (arc-length) metric.
    pub fn circle_geodesic(n: usize, circumference: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("circle sample needs at least one point".into()));
        }
        let step = circumference / n as f64;
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let k = i.abs_diff(j);
                        k.min(n - k) as f64 * step
                    })
                    .collect()
            })
            .collect();
        Self::from_matrix(rows)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Dimension(format!(
                "{} labels for {} points",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// All triples violating the triangle inequality by more than the
    /// tolerance.
    pub fn triangle_violations(&self, tol: &Tolerances) -> Vec<TriangleViolation> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for k in (i + 1)..n {
                let dik = self.dist(i, k);
                for j in 0..n {
                    let excess = dik - (self.dist(i, j) + self.dist(j, k));
                    if excess > tol.triangle {
                        out.push(TriangleViolation { i, j, k, excess });
                    }
                }
            }
        }
        out
    }

    /// The metric subspace on the given point indices, in the given order.
    pub fn subspace(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n) {
            return Err(Error::Dimension(format!("index {bad} out of range for {} points", self.n)));
        }
        if indices.is_empty() {
            return Err(Error::Dimension("empty subspace".into()));
        }
        let m = indices.len();
        let mut dist = vec![0.0; m * m];
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                dist[a * m + b] = self.dist(i, j);
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i].clone()).collect());
        Ok(Self { n: m, dist, labels })
    }

    /// Hausdorff distance between two nonempty subsets of this space.
    pub fn hausdorff(&self, a: &[usize], b: &[usize]) -> f64 {
        let directed = |from: &[usize], to: &[usize]| {
            from.iter()
                .map(|&x| to.iter().map(|&y| self.dist(x, y)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        directed(a, b).max(directed(b, a))
    }

    /// Reads the CSV distance-matrix format: optional `#` comment lines, a
    /// line holding `n`, then `n` rows of `n` comma-separated reals.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            match n {
                None => {
                    let parsed = trimmed.parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("expected point count, found {trimmed:?}"),
                    })?;
                    if parsed == 0 {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: "point count must be positive".into(),
                        });
                    }
                    n = Some(parsed);
                }
                Some(count) => {
                    if rows.len() == count {
                        return Err(Error::Dimension(format!(
                            "line {lineno}: more than {count} data rows"
                        )));
                    }
                    let row = trimmed
                        .split(',')
                        .map(|cell| {
                            cell.trim().parse::<f64>().map_err(|_| Error::Parse {
                                line: lineno,
                                msg: format!("invalid number {:?}", cell.trim()),
                            })
                        })
                        .collect::<Result<Vec<f64>>>()?;
                    if row.len() != count {
                        return Err(Error::Dimension(format!(
                            "line {lineno}: {} entries, expected {count}",
                            row.len()
                        )));
                    }
                    rows.push(row);
                }
            }
        }
        let count = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing point count".into(),
        })?;
        if rows.len() != count {
            return Err(Error::Dimension(format!(
                "{} data rows, expected {count}",
                rows.len()
            )));
        }
        Self::from_matrix(rows)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        Self::read_csv(text.as_bytes())
    }

    /// Writes the CSV format with 17 significant digits per entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.n);
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|d| format!("{d:.16e}")).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Anything with a known finite diameter: a finite space, or a raw value
/// for spaces that are only described by their diameter.
pub trait Diameter {
    fn diameter_value(&self) -> f64;
}

impl Diameter for FiniteMetricSpace {
    fn diameter_value(&self) -> f64 {
        self.diameter()
    }
}

impl Diameter for f64 {
    fn diameter_value(&self) -> f64 {
        *self
    }
}

/// `½ |diam X − diam Y|`, a lower bound on the Gromov–Hausdorff distance.
pub fn diameter_gh_lower_bound<X: Diameter + ?Sized, Y: Diameter + ?Sized>(x: &X, y: &Y) -> f64 {
    0.5 * (x.diameter_value() - y.diameter_value()).abs()
}

/// Distortion `max |d_X(x,x') − d_Y(y,y')|` of a relation between two spaces.
/// For a correspondence this bounds `d_GH(X, Y)` from above by half.
pub fn distortion(x: &FiniteMetricSpace, y: &FiniteMetricSpace, pairs: &[(usize, usize)]) -> f64 {
    let mut worst: f64 = 0.0;
    for &(a, b) in pairs {
        for &(c, d) in pairs {
            worst = worst.max((x.dist(a, c) - y.dist(b, d)).abs());
        }
    }
    worst
}
