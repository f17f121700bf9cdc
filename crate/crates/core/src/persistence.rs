//! Invariants of every structure map of a filtration, stored per pair of
//! grid cells.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cohomology::{cohomology_basis, cup_length_of_map, induced_map, GradedRing, RingMap};
use crate::error::{Error, Result};
use crate::linalg::Prime;
use crate::vr::{cell_index, Convention, FilteredComplex};
use crate::zero_divisor::{zcl_map_with, ZeroDivisors};

/// A value in `ℕ ∪ {∞}`, with `∞` above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extended {
    Finite(u64),
    Infinite,
}

impl Extended {
    pub const ZERO: Extended = Extended::Finite(0);

    pub fn finite(self) -> Option<u64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }
}

impl From<u64> for Extended {
    fn from(v: u64) -> Self {
        Extended::Finite(v)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => s.serialize_u64(*v),
            Extended::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Extended::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Extended::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected integer or \"inf\", got {s:?}"))),
        }
    }
}

/// Which invariant a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Invariant {
    Zcl,
    Cuplength,
    Betti(usize),
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::Zcl => f.write_str("zcl"),
            Invariant::Cuplength => f.write_str("cuplength"),
            Invariant::Betti(k) => write!(f, "betti_{k}"),
        }
    }
}

impl FromStr for Invariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zcl" => Ok(Invariant::Zcl),
            "cuplength" | "cl" => Ok(Invariant::Cuplength),
            _ => s
                .strip_prefix("betti_")
                .and_then(|k| k.parse().ok())
                .map(Invariant::Betti)
                .ok_or_else(|| Error::InvalidTable(format!("unknown invariant {s:?}"))),
        }
    }
}

impl Serialize for Invariant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Invariant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `values[i][j - i]` is the invariant of the map from the snapshot on cell
/// `i` into the snapshot on cell `j`, for `i ≤ j`. Cell `k` is
/// `(g_k, g_{k+1}]` (open) or `[g_k, g_{k+1})` (closed), the last one
/// unbounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistentInvariantTable {
    pub invariant: Invariant,
    pub field: Prime,
    pub convention: Convention,
    pub grid: Vec<f64>,
    pub values: Vec<Vec<Extended>>,
    pub lower_bound_only: bool,
}

impl PersistentInvariantTable {
    /// Checks shape, grid order and erosion monotonicity.
    pub fn validate(&self) -> Result<()> {
        let m = self.grid.len();
        if m == 0 {
            return Err(Error::InvalidTable("empty grid".into()));
        }
        if self.grid.iter().any(|g| !g.is_finite()) || self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTable("grid must be finite and strictly increasing".into()));
        }
        if self.values.len() != m || self.values.iter().enumerate().any(|(i, r)| r.len() != m - i) {
            return Err(Error::InvalidTable(format!(
                "values must be an upper triangle over {m} cells"
            )));
        }
        if self.lower_bound_only && self.values.iter().flatten().any(|&v| v == Extended::Infinite) {
            return Err(Error::InvalidTable("lower-bound-only table contains inf".into()));
        }
        self.check_monotone()
    }

    /// `v[i'][j'] ≤ v[i][j]` whenever `[i, j] ⊆ [i', j']`, via adjacent pairs.
    pub fn check_monotone(&self) -> Result<()> {
        let m = self.grid.len();
        for i in 0..m {
            for j in i..m {
                let v = self.get(i, j);
                if i > 0 && self.get(i - 1, j) > v {
                    return Err(Error::InvalidTable(format!(
                        "not monotone: v[{}][{j}] = {} > v[{i}][{j}] = {v}",
                        i - 1,
                        self.get(i - 1, j)
                    )));
                }
                if j + 1 < m && self.get(i, j + 1) > v {
                    return Err(Error::InvalidTable(format!(
                        "not monotone: v[{i}][{}] = {} > v[{i}][{j}] = {v}",
                        j + 1,
                        self.get(i, j + 1)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn cells(&self) -> usize {
        self.grid.len()
    }

    /// Entry for cells `i ≤ j`.
    pub fn get(&self, i: usize, j: usize) -> Extended {
        self.values[i][j - i]
    }

    pub fn cell(&self, t: f64) -> Option<usize> {
        cell_index(&self.grid, self.convention, t)
    }

    /// Value on the closed interval `[s, t]`, `s ≤ t`. Intervals starting
    /// before the filtration does get 0 (the empty space).
    pub fn value(&self, s: f64, t: f64) -> Extended {
        debug_assert!(s <= t, "interval [{s}, {t}] is reversed");
        match (self.cell(s), self.cell(t)) {
            (Some(i), Some(j)) => self.get(i, j.max(i)),
            _ => Extended::ZERO,
        }
    }

    /// The same functor on a finer grid. `grid` must contain every current
    /// grid value.
    pub fn refine(&self, grid: &[f64]) -> Result<Self> {
        if self.grid.iter().any(|g| !grid.contains(g)) {
            return Err(Error::InvalidTable("refinement must contain the current grid".into()));
        }
        let n = grid.len();
        // a point inside each new cell
        let inner: Vec<f64> = (0..n)
            .map(|k| match self.convention {
                Convention::Closed => grid[k],
                Convention::Open if k + 1 < n => grid[k + 1],
                Convention::Open => grid[k] + 1.0,
            })
            .collect();
        let old: Vec<Option<usize>> = inner.iter().map(|&t| self.cell(t)).collect();
        let values = (0..n)
            .map(|k| {
                (k..n)
                    .map(|l| match (old[k], old[l]) {
                        (Some(i), Some(j)) => self.get(i, j),
                        _ => Extended::ZERO,
                    })
                    .collect()
            })
            .collect();
        let out = Self {
            grid: grid.to_vec(),
            values,
            ..self.clone()
        };
        out.validate()?;
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: Self = serde_json::from_str(text)?;
        t.validate()?;
        Ok(t)
    }
}

struct Cell {
    ring: Arc<GradedRing>,
    zd: Option<ZeroDivisors>,
}

fn build_cells(fc: &FilteredComplex, p: Prime, max_deg: usize, invariant: Invariant) -> Result<Vec<Cell>> {
    let m = fc.critical_values().len();
    (0..m)
        .into_par_iter()
        .map(|k| {
            let complex = Arc::new(fc.snapshot(k));
            let ring = match invariant {
                Invariant::Betti(_) => cohomology_basis(complex, p, max_deg)?,
                _ => GradedRing::compute(complex, p, max_deg)?,
            };
            let ring = Arc::new(ring);
            let zd = (invariant == Invariant::Zcl).then(|| ZeroDivisors::new(&ring));
            Ok(Cell { ring, zd })
        })
        .collect()
}

fn evaluate(invariant: Invariant, f: &RingMap, small: &Cell, big: &Cell) -> Result<(Extended, bool)> {
    Ok(match invariant {
        Invariant::Zcl => {
            let n = zcl_map_with(f, big.zd.as_ref().unwrap(), small.zd.as_ref().unwrap())?;
            (n.length.into(), n.lower_bound_only)
        }
        Invariant::Cuplength => {
            let n = cup_length_of_map(f);
            (n.length.into(), n.lower_bound_only)
        }
        Invariant::Betti(k) => ((f.matrix(k).rank() as u64).into(), false),
    })
}

/// Evaluates `invariant` on every inclusion between snapshots of `fc`.
pub fn persistent_table(fc: &FilteredComplex, p: Prime, max_deg: usize, invariant: Invariant) -> Result<PersistentInvariantTable> {
    let max_deg = match invariant {
        Invariant::Betti(k) => k,
        _ => max_deg,
    };
    let cells = build_cells(fc, p, max_deg, invariant)?;
    let m = cells.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let results = pairs
        .par_iter()
        .map(|&(i, j)| {
            let f = induced_map(&cells[i].ring, &cells[j].ring)?;
            evaluate(invariant, &f, &cells[i], &cells[j])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut values: Vec<Vec<Extended>> = (0..m).map(|i| Vec::with_capacity(m - i)).collect();
    let mut lower_bound_only = false;
    for (&(i, _), (v, flag)) in pairs.iter().zip(results) {
        values[i].push(v);
        lower_bound_only |= flag;
    }
    let table = PersistentInvariantTable {
        invariant,
        field: p,
        convention: fc.convention(),
        grid: fc.critical_values(),
        values,
        lower_bound_only,
    };
    table
        .check_monotone()
        .map_err(|e| Error::Internal(format!("computed table violates functoriality: {e}")))?;
    Ok(table)
}

pub fn persistent_zcl(fc: &FilteredComplex, p: Prime, max_deg: usize) -> Result<PersistentInvariantTable> {
    persistent_table(fc, p, max_deg, Invariant::Zcl)
}

pub fn persistent_cuplength(fc: &FilteredComplex, p: Prime, max_deg: usize) -> Result<PersistentInvariantTable> {
    persistent_table(fc, p, max_deg, Invariant::Cuplength)
}

pub fn persistent_betti(fc: &FilteredComplex, p: Prime, k: usize) -> Result<PersistentInvariantTable> {
    persistent_table(fc, p, k, Invariant::Betti(k))
}

/// Step functor: `p_value` on intervals inside `(0, a)`, 0 otherwise. On
/// the grid (merged with `0`, `a`, `b`) an interval counts as inside
/// `(0, a)` when its cells lie in `(0, a]`.
pub fn synthetic_step_table(p_value: u64, a: f64, b: f64, grid: &[f64]) -> Result<PersistentInvariantTable> {
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(Error::Hypothesis(format!("step table needs 0 < a < b, got a = {a}, b = {b}")));
    }
    let mut g: Vec<f64> = grid.iter().copied().filter(|x| x.is_finite() && *x >= 0.0).collect();
    g.extend([0.0, a, b]);
    g.sort_by(f64::total_cmp);
    g.dedup();
    let ia = g.iter().position(|&x| x == a).expect("a was inserted");
    let m = g.len();
    let values = (0..m)
        .map(|i| {
            (i..m)
                .map(|j| if j < ia { Extended::Finite(p_value) } else { Extended::ZERO })
                .collect()
        })
        .collect();
    Ok(PersistentInvariantTable {
        invariant: Invariant::Zcl,
        field: Prime::TWO,
        convention: Convention::Open,
        grid: g,
        values,
        lower_bound_only: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::metric::FiniteMetricSpace;
    use crate::vr::Simplex;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn hexagon(max_dim: usize) -> FilteredComplex {
        FilteredComplex::build_vr(&fixtures::hexagon(), max_dim, f64::INFINITY).unwrap()
    }

    #[test]
    fn extended_order_and_json() {
        assert!(Extended::Infinite > Extended::Finite(u64::MAX));
        let v = vec![Extended::Finite(3), Extended::Infinite];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[3,\"inf\"]");
        assert_eq!(serde_json::from_str::<Vec<Extended>>(&s).unwrap(), v);
        assert!(serde_json::from_str::<Extended>("\"nan\"").is_err());
    }

    #[test]
    fn invariant_names() {
        for inv in [Invariant::Zcl, Invariant::Cuplength, Invariant::Betti(2)] {
            assert_eq!(inv.to_string().parse::<Invariant>().unwrap(), inv);
        }
        assert!("betti".parse::<Invariant>().is_err());
    }

    #[test]
    fn one_point() {
        let fc = FilteredComplex::build_vr(&fixtures::point(), 3, f64::INFINITY).unwrap();
        let t = persistent_zcl(&fc, Prime::TWO, 2).unwrap();
        assert_eq!(t.values, vec![vec![Extended::ZERO]]);
        assert!(!t.lower_bound_only);
    }

    #[test]
    fn hexagon_zcl() {
        let fc = hexagon(3);
        let t = persistent_zcl(&fc, Prime::TWO, 2).unwrap();
        assert_eq!(t.grid, vec![0.0, PI / 3.0, 2.0 * PI / 3.0, PI]);
        assert_eq!(t.value(1.2, 2.0), Extended::Finite(1));
        assert_eq!(t.value(1.1, 1.1), Extended::Finite(1));
        assert_eq!(t.value(0.5, 3.5), Extended::ZERO);
        assert_eq!(t.value(3.2, 4.0), Extended::ZERO);
        // octahedron regime over 𝔽₂
        assert_eq!(t.value(2.5, 3.0), Extended::Finite(1));
        // the last snapshot is capped at dimension 3
        assert!(t.lower_bound_only);
        let exact = persistent_zcl(&hexagon(5), Prime::TWO, 2).unwrap();
        assert!(!exact.lower_bound_only);
        assert_eq!(exact.values, t.values);
        let t3 = persistent_zcl(&fc, Prime::THREE, 2).unwrap();
        assert_eq!(t3.value(2.5, 3.0), Extended::Finite(2));
        // S¹ regime into the S² regime kills everything
        assert_eq!(t3.value(1.5, 2.5), Extended::ZERO);
    }

    #[test]
    fn hexagon_cuplength_and_betti() {
        let fc = hexagon(3);
        let cl = persistent_cuplength(&fc, Prime::TWO, 2).unwrap();
        assert_eq!(cl.value(1.2, 2.0), Extended::Finite(1));
        assert_eq!(cl.value(0.1, 0.2), Extended::ZERO);
        let b1 = persistent_betti(&fc, Prime::TWO, 1).unwrap();
        assert_eq!(b1.value(1.2, 2.0), Extended::Finite(1));
        let b0 = persistent_betti(&fc, Prime::TWO, 0).unwrap();
        assert_eq!(b0.value(0.1, 0.9), Extended::Finite(6));
        assert_eq!(b0.value(0.1, 1.1), Extended::Finite(1));
    }

    #[test]
    fn constant_rp2_cuplength() {
        let fc = fixtures::ALL[4].filtration();
        let t = persistent_cuplength(&fc, Prime::TWO, 2).unwrap();
        assert!(t.values.iter().flatten().all(|&v| v == Extended::Finite(2)));
    }

    #[test]
    fn betti_ranks_match_barcode_oracle() {
        let x = FiniteMetricSpace::circle_geodesic(8, 2.0 * PI).unwrap();
        let fc = FilteredComplex::build_vr(&x, 3, f64::INFINITY).unwrap();
        let filtration: Vec<(Vec<usize>, f64)> = fc
            .simplices()
            .iter()
            .map(|s: &Simplex| (s.vertices.clone(), s.appearance))
            .collect();
        let bars = pzcl_oracle::barcode(2, &filtration);
        let grid = fc.critical_values();
        for k in 0..=2 {
            let t = persistent_betti(&fc, Prime::TWO, k).unwrap();
            for i in 0..grid.len() {
                for j in i..grid.len() {
                    let expected = pzcl_oracle::rank_from_bars(&bars, k, grid[i], grid[j]);
                    assert_eq!(t.get(i, j), Extended::Finite(expected as u64), "k={k} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let t = persistent_zcl(&hexagon(3), Prime::TWO, 2).unwrap();
        let back = PersistentInvariantTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        let text = t.to_json();
        assert!(text.contains("\"invariant\": \"zcl\""));
        assert!(text.contains("\"convention\": \"open\""));
    }

    #[test]
    fn json_rejects_bad_tables() {
        let mut t = synthetic_step_table(3, 1.0, 2.0, &[]).unwrap();
        t.values[0][1] = Extended::Finite(5);
        assert!(PersistentInvariantTable::from_json(&t.to_json()).is_err());
        let mut t = synthetic_step_table(3, 1.0, 2.0, &[]).unwrap();
        t.values[1].pop();
        assert!(PersistentInvariantTable::from_json(&t.to_json()).is_err());
    }

    #[test]
    fn step_tables() {
        let t = synthetic_step_table(3, 2.0 * PI / 3.0, PI, &[]).unwrap();
        assert_eq!(t.value(0.1, 0.2), Extended::Finite(3));
        assert_eq!(t.value(0.0, PI + 1.0), Extended::ZERO);
        assert_eq!(t.value(0.1, 2.2), Extended::ZERO);
        let zeta = (-1.0f64 / 3.0).acos();
        let g = synthetic_step_table(2, zeta, PI, &[]).unwrap();
        assert_eq!(g.value(0.1, 0.2), Extended::Finite(2));
        t.validate().unwrap();
        assert!(synthetic_step_table(1, 2.0, 1.0, &[]).is_err());
        assert!(synthetic_step_table(1, 0.0, 1.0, &[]).is_err());
    }

    #[test]
    fn refinement_preserves_values() {
        let t = persistent_zcl(&hexagon(3), Prime::THREE, 2).unwrap();
        let mut grid = t.grid.clone();
        grid.extend([0.3, 1.5, 2.9, 4.0]);
        grid.sort_by(f64::total_cmp);
        let r = t.refine(&grid).unwrap();
        for s in [-0.5, 0.0, 0.2, 0.5, PI / 3.0, 1.3, 2.0, 2.5, PI, 3.6, 5.0] {
            for e in [0.0, 0.1, 0.7, 1.5, 3.0] {
                assert_eq!(r.value(s, s + e), t.value(s, s + e), "[{s}, {}]", s + e);
            }
        }
        assert!(t.refine(&[0.0, 1.0]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn random_tables_are_monotone(coords in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..7)) {
            let Ok(x) = FiniteMetricSpace::euclidean_from_points(&coords.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>()) else {
                return Ok(());
            };
            let fc = FilteredComplex::build_vr(&x, 3, f64::INFINITY).unwrap();
            let zcl = persistent_zcl(&fc, Prime::TWO, 2).unwrap();
            zcl.validate().unwrap();
            let cl = persistent_cuplength(&fc, Prime::TWO, 2).unwrap();
            cl.validate().unwrap();
            for i in 0..zcl.cells() {
                for j in i..zcl.cells() {
                    prop_assert!(zcl.get(i, j) >= cl.get(i, j));
                }
            }
        }
    }
}
