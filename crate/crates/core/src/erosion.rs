//! Erosion distance between persistent invariants and the resulting
//! Gromov–Hausdorff lower bounds.
//!
//! Two functors `I₁, I₂` on intervals are ε-eroded when
//! `I₁([a, b]) ≥ I₂([a − ε, b + ε])` and `I₂([a, b]) ≥ I₁([a − ε, b + ε])`
//! for every `a ≤ b`. Since both tables are constant on grid cells, the
//! inequalities only change where `a` or `b` crosses a grid value or a grid
//! value shifted by `±ε`; testing those breakpoints and one point strictly
//! between each consecutive pair covers every interval.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::Prime;
use crate::metric::{diameter_gh_lower_bound, FiniteMetricSpace};
use crate::persistence::{persistent_table, synthetic_step_table, Extended, Invariant, PersistentInvariantTable};
use crate::tolerance::Tolerances;
use crate::vr::{cell_index, FilteredComplex, VrOptions};

/// Serde helpers writing infinite floats as `"inf"`.
pub mod inf_float {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
        }
    }
}

/// Which of the two inequalities failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `T1([a, b]) < T2([a − ε, b + ε])`
    FirstBelowSecond,
    /// `T2([a, b]) < T1([a − ε, b + ε])`
    SecondBelowFirst,
}

/// An interval witnessing that two tables are not ε-eroded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub eps: f64,
    pub a: f64,
    pub b: f64,
    pub side: Side,
    /// Value on `[a, b]` of the table that should dominate.
    pub inner: Extended,
    /// Value on `[a − ε, b + ε]` of the other table.
    pub thickened: Extended,
}

impl Violation {
    /// Re-checks this witness against the tables.
    pub fn revalidate(&self, t1: &PersistentInvariantTable, t2: &PersistentInvariantTable) -> bool {
        let tol = Tolerances::DEFAULT;
        let (inner, outer) = match self.side {
            Side::FirstBelowSecond => (t1, t2),
            Side::SecondBelowFirst => (t2, t1),
        };
        let lhs = snapped_value(inner, self.a, self.b, &tol);
        let rhs = snapped_value(outer, self.a - self.eps, self.b + self.eps, &tol);
        lhs < rhs && lhs == self.inner && rhs == self.thickened
    }
}

fn snap(grid: &[f64], x: f64, tol: &Tolerances) -> f64 {
    let i = grid.partition_point(|&g| g < x);
    for g in [i.checked_sub(1).map(|k| grid[k]), grid.get(i).copied()].into_iter().flatten() {
        if (x - g).abs() <= tol.snap_radius(g) {
            return g;
        }
    }
    x
}

/// Table value on `[s, t]` with endpoints within tolerance of a grid value
/// moved onto it.
fn snapped_value(table: &PersistentInvariantTable, s: f64, t: f64, tol: &Tolerances) -> Extended {
    let s = snap(&table.grid, s, tol);
    let t = snap(&table.grid, t, tol);
    match (
        cell_index(&table.grid, table.convention, s),
        cell_index(&table.grid, table.convention, t),
    ) {
        (Some(i), Some(j)) => table.get(i, j.max(i)),
        _ => Extended::ZERO,
    }
}

fn dedup_close(mut v: Vec<f64>, tol: &Tolerances) -> Vec<f64> {
    v.retain(|x| x.is_finite());
    v.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(v.len());
    for x in v {
        if out.last().is_none_or(|&l| !tol.same_value(l, x)) {
            out.push(x);
        }
    }
    out
}

fn test_points(t1: &PersistentInvariantTable, t2: &PersistentInvariantTable, eps: f64, tol: &Tolerances) -> Vec<f64> {
    let mut breaks = Vec::new();
    for &g in t1.grid.iter().chain(&t2.grid) {
        breaks.extend([g, g - eps, g + eps]);
    }
    let breaks = dedup_close(breaks, tol);
    let mut pts = Vec::with_capacity(2 * breaks.len() + 2);
    pts.push(breaks[0] - 1.0);
    for w in breaks.windows(2) {
        pts.push(w[0]);
        pts.push(0.5 * (w[0] + w[1]));
    }
    pts.push(*breaks.last().unwrap());
    pts.push(breaks.last().unwrap() + 1.0);
    pts
}

fn check_convention(t1: &PersistentInvariantTable, t2: &PersistentInvariantTable) -> Result<()> {
    if t1.convention != t2.convention {
        return Err(Error::ConventionMismatch(t1.convention, t2.convention));
    }
    Ok(())
}

/// `None` if the tables are ε-eroded, else the first violation in scan
/// order (left endpoint, then right endpoint, then side).
pub fn is_eps_eroded(t1: &PersistentInvariantTable, t2: &PersistentInvariantTable, eps: f64) -> Result<Option<Violation>> {
    check_convention(t1, t2)?;
    if !(eps >= 0.0) {
        return Err(Error::Hypothesis(format!("erosion parameter must be non-negative, got {eps}")));
    }
    if eps.is_infinite() {
        return Ok(None);
    }
    let tol = Tolerances::DEFAULT;
    let pts = test_points(t1, t2, eps, &tol);
    Ok((0..pts.len()).into_par_iter().find_map_first(|ia| {
        let a = pts[ia];
        pts[ia..].iter().find_map(|&b| {
            for (side, inner, outer) in [
                (Side::FirstBelowSecond, t1, t2),
                (Side::SecondBelowFirst, t2, t1),
            ] {
                let lhs = snapped_value(inner, a, b, &tol);
                let rhs = snapped_value(outer, a - eps, b + eps, &tol);
                if lhs < rhs {
                    return Some(Violation {
                        eps,
                        a,
                        b,
                        side,
                        inner: lhs,
                        thickened: rhs,
                    });
                }
            }
            None
        })
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Grid,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErosionReport {
    #[serde(rename = "d_E", with = "inf_float")]
    pub d_e: f64,
    pub method: Method,
    /// Failure just below `d_E`; absent when `d_E = 0`.
    pub certificate: Option<Violation>,
    #[serde(with = "inf_float")]
    pub gh_lower_bound: f64,
    pub diameter_bound: f64,
    #[serde(with = "inf_float")]
    pub combined: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub per_invariant: BTreeMap<String, PerInvariant>,
    #[serde(default)]
    pub lower_bound_only: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerInvariant {
    #[serde(rename = "d_E", with = "inf_float")]
    pub d_e: f64,
    pub lower_bound_only: bool,
}

impl ErosionReport {
    fn new(d_e: f64, method: Method, certificate: Option<Violation>, diameter_bound: f64) -> Self {
        let gh = d_e / 2.0;
        Self {
            d_e,
            method,
            certificate,
            gh_lower_bound: gh,
            diameter_bound,
            combined: gh.max(diameter_bound),
            per_invariant: BTreeMap::new(),
            lower_bound_only: false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Candidate thresholds: `0`, and `|u − v|`, `|u − v|/2` over the merged grid.
pub fn candidate_set(t1: &PersistentInvariantTable, t2: &PersistentInvariantTable) -> Vec<f64> {
    let tol = Tolerances::DEFAULT;
    let grid = dedup_close(t1.grid.iter().chain(&t2.grid).copied().collect(), &tol);
    let mut c = vec![0.0];
    for (i, &u) in grid.iter().enumerate() {
        for &v in &grid[i + 1..] {
            c.push(v - u);
            c.push(0.5 * (v - u));
        }
    }
    dedup_close(c, &tol)
}

/// `d_E = inf{ε : ε-eroded}`. The eroded set is an up-ray starting at a
/// candidate `c_k`, reached either at `c_k` itself or just after it, so a
/// binary search over "`c_k` or the midpoint after it passes" finds it.
pub fn erosion_distance(t1: &PersistentInvariantTable, t2: &PersistentInvariantTable) -> Result<ErosionReport> {
    check_convention(t1, t2)?;
    let c = candidate_set(t1, t2);
    let after = |k: usize| if k + 1 < c.len() { 0.5 * (c[k] + c[k + 1]) } else { c[k] + 1.0 };
    let passes = |k: usize| -> Result<bool> {
        Ok(is_eps_eroded(t1, t2, c[k])?.is_none() || is_eps_eroded(t1, t2, after(k))?.is_none())
    };
    let (mut lo, mut hi) = (0usize, c.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if passes(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let (d_e, witness_eps) = if lo == c.len() {
        (f64::INFINITY, Some(after(c.len() - 1)))
    } else if lo == 0 {
        (0.0, None)
    } else {
        (c[lo], Some(after(lo - 1)))
    };
    let certificate = match witness_eps {
        Some(eps) => Some(is_eps_eroded(t1, t2, eps)?.ok_or_else(|| {
            Error::Internal(format!("no violation found at ε = {eps} below d_E = {d_e}"))
        })?),
        None => None,
    };
    let mut report = ErosionReport::new(d_e, Method::Grid, certificate, 0.0);
    report.lower_bound_only = t1.lower_bound_only || t2.lower_bound_only;
    Ok(report)
}

/// A step functor: `height` on intervals inside `(0, a)`, zero on intervals
/// longer than `a` or leaving `[0, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepFunctorSpec {
    pub height: u64,
    pub a: f64,
    pub b: f64,
}

impl StepFunctorSpec {
    pub fn table(&self) -> Result<PersistentInvariantTable> {
        if self.height == 0 {
            return Err(Error::Hypothesis("step height must be positive".into()));
        }
        synthetic_step_table(self.height, self.a, self.b, &[])
    }
}

/// `d_E(f, g) = a_f / 2` for step functors with `f.height > g.height > 0`,
/// a common `b`, and `b/2 < a_g < a_f < b`.
pub fn step_erosion_closed_form(f: &StepFunctorSpec, g: &StepFunctorSpec) -> Result<f64> {
    let tol = Tolerances::DEFAULT;
    let ok = f.height > g.height
        && g.height > 0
        && tol.same_value(f.b, g.b)
        && f.b.is_finite()
        && f.b / 2.0 < g.a
        && g.a < f.a
        && f.a < f.b;
    if !ok {
        return Err(Error::Hypothesis(format!(
            "closed form needs f.height > g.height > 0, equal b and b/2 < a_g < a_f < b; got f = {f:?}, g = {g:?}"
        )));
    }
    Ok(f.a / 2.0)
}

/// Closed-form report for a step-functor pair.
pub fn step_report(f: &StepFunctorSpec, g: &StepFunctorSpec) -> Result<ErosionReport> {
    let d = step_erosion_closed_form(f, g)?;
    let (tf, tg) = (f.table()?, g.table()?);
    let certificate = is_eps_eroded(&tf, &tg, d * (1.0 - 1e-6))?;
    Ok(ErosionReport::new(d, Method::ClosedForm, certificate, 0.0))
}

/// What [`gh_lower_bound_report`] computes.
#[derive(Debug, Clone)]
pub struct GhConfig {
    pub field: Prime,
    pub max_deg: usize,
    pub vr: VrOptions,
    pub invariants: Vec<Invariant>,
}

impl Default for GhConfig {
    fn default() -> Self {
        Self {
            field: Prime::TWO,
            max_deg: 2,
            vr: VrOptions::new(3),
            invariants: vec![Invariant::Zcl],
        }
    }
}

impl GhConfig {
    pub fn tables(&self, x: &FiniteMetricSpace) -> Result<Vec<PersistentInvariantTable>> {
        let fc = FilteredComplex::build_vr_with(x, self.vr)?;
        self.invariants
            .iter()
            .map(|&inv| persistent_table(&fc, self.field, self.max_deg, inv))
            .collect()
    }
}

/// `d_GH(X, Y) ≥ max(d_E / 2, ½|diam X − diam Y|)`, with `d_E` the largest
/// erosion distance over the configured invariants.
pub fn gh_lower_bound_report(x: &FiniteMetricSpace, y: &FiniteMetricSpace, config: &GhConfig) -> Result<ErosionReport> {
    if config.invariants.is_empty() {
        return Err(Error::Hypothesis("no invariant requested".into()));
    }
    let tx = config.tables(x)?;
    let ty = config.tables(y)?;
    let mut best: Option<ErosionReport> = None;
    let mut per_invariant = BTreeMap::new();
    for ((inv, a), b) in config.invariants.iter().zip(&tx).zip(&ty) {
        let r = erosion_distance(a, b)?;
        per_invariant.insert(
            inv.to_string(),
            PerInvariant {
                d_e: r.d_e,
                lower_bound_only: r.lower_bound_only,
            },
        );
        if best.as_ref().is_none_or(|b| r.d_e > b.d_e) {
            best = Some(r);
        }
    }
    let best = best.expect("at least one invariant");
    let mut report = ErosionReport::new(best.d_e, Method::Grid, best.certificate, diameter_gh_lower_bound(x, y));
    report.lower_bound_only = per_invariant.values().any(|p: &PerInvariant| p.lower_bound_only);
    report.per_invariant = per_invariant;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::vr::Convention;
    use crate::persistence::persistent_zcl;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn zeta(n: u32) -> f64 {
        (-1.0 / (n as f64 + 1.0)).acos()
    }

    fn rp_vs_wedge(n: u32) -> (StepFunctorSpec, StepFunctorSpec) {
        (
            StepFunctorSpec { height: 3, a: 2.0 * PI / 3.0, b: PI },
            StepFunctorSpec { height: 2, a: zeta(n), b: PI },
        )
    }

    // oracle samples plus points beyond every grid value by more than `eps_max`
    fn far_samples(merged: &[f64], step: f64, eps_max: f64) -> Vec<f64> {
        let mut s = pzcl_oracle::sample_points(merged, step);
        s.insert(0, merged[0] - eps_max - 1.0);
        s.push(merged[merged.len() - 1] + eps_max + 1.0);
        s
    }

    fn as_fn(t: &PersistentInvariantTable) -> impl Fn(f64, f64) -> Option<u64> + '_ {
        move |s, e| t.value(s, e).finite()
    }

    #[test]
    fn reflexive() {
        let t = persistent_zcl(&FilteredComplex::build_vr(&fixtures::hexagon(), 3, f64::INFINITY).unwrap(), Prime::TWO, 2).unwrap();
        assert_eq!(is_eps_eroded(&t, &t, 0.0).unwrap(), None);
        let r = erosion_distance(&t, &t).unwrap();
        assert_eq!(r.d_e, 0.0);
        assert!(r.certificate.is_none());
    }

    #[test]
    fn step_pair_thresholds() {
        let (f, g) = rp_vs_wedge(2);
        let (tf, tg) = (f.table().unwrap(), g.table().unwrap());
        let v = is_eps_eroded(&tf, &tg, PI / 3.0 - 0.01).unwrap().expect("violation");
        assert!((0.5 * (v.a + v.b) - PI / 3.0).abs() < 0.02, "{v:?}");
        assert!(v.revalidate(&tf, &tg));
        assert_eq!(is_eps_eroded(&tf, &tg, PI / 3.0 + 0.01).unwrap(), None);
    }

    #[test]
    fn step_pairs_match_closed_form() {
        for n in 2..=5 {
            let (f, g) = rp_vs_wedge(n);
            let grid = erosion_distance(&f.table().unwrap(), &g.table().unwrap()).unwrap();
            let closed = step_erosion_closed_form(&f, &g).unwrap();
            assert!((grid.d_e - PI / 3.0).abs() < 1e-9, "n = {n}: {}", grid.d_e);
            assert!((grid.d_e - closed).abs() < 1e-9);
            assert!(grid.certificate.unwrap().revalidate(&f.table().unwrap(), &g.table().unwrap()));
        }
    }

    #[test]
    fn closed_form_hypotheses() {
        let f = StepFunctorSpec { height: 2, a: 0.8, b: 1.0 };
        let g = StepFunctorSpec { height: 1, a: 0.6, b: 1.0 };
        assert_eq!(step_erosion_closed_form(&f, &g).unwrap(), 0.4);
        assert!(step_erosion_closed_form(&g, &f).is_err());
        let g_low = StepFunctorSpec { a: 0.4, ..g };
        assert!(step_erosion_closed_form(&f, &g_low).is_err());
        let g_other_b = StepFunctorSpec { b: 1.1, ..g };
        assert!(step_erosion_closed_form(&f, &g_other_b).is_err());
        let r = step_report(&f, &g).unwrap();
        assert_eq!(r.method, Method::ClosedForm);
        assert!(r.certificate.is_some());
    }

    #[test]
    fn convention_mismatch() {
        let t = synthetic_step_table(1, 1.0, 2.0, &[]).unwrap();
        let mut u = t.clone();
        u.convention = Convention::Closed;
        assert!(matches!(is_eps_eroded(&t, &u, 0.1), Err(Error::ConventionMismatch(..))));
        assert!(erosion_distance(&t, &u).is_err());
    }

    #[test]
    fn infinite_distance() {
        // a table that stays at 1 forever against one that is always 0
        let one = PersistentInvariantTable {
            invariant: Invariant::Zcl,
            field: Prime::TWO,
            convention: Convention::Open,
            grid: vec![0.0],
            values: vec![vec![Extended::Finite(1)]],
            lower_bound_only: false,
        };
        let zero = PersistentInvariantTable {
            values: vec![vec![Extended::ZERO]],
            ..one.clone()
        };
        let r = erosion_distance(&one, &zero).unwrap();
        assert_eq!(r.d_e, f64::INFINITY);
        assert!(r.to_json().contains("\"d_E\": \"inf\""));
        let back: ErosionReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back.d_e, f64::INFINITY);
        assert!(r.certificate.unwrap().revalidate(&one, &zero));
    }

    #[test]
    fn shifted_grid() {
        let (f, _) = rp_vs_wedge(2);
        let t = f.table().unwrap();
        let delta = 0.05;
        let shifted = StepFunctorSpec { a: f.a + delta, b: f.b + delta, ..f }.table().unwrap();
        let r = erosion_distance(&t, &shifted).unwrap();
        assert!(r.d_e <= delta + 1e-12, "{}", r.d_e);
    }

    #[test]
    fn dense_oracle_agrees_on_hexagon_vs_square() {
        let hex = FiniteMetricSpace::circle_geodesic(6, 2.0 * PI).unwrap();
        let sq = FiniteMetricSpace::circle_geodesic(4, 2.0 * PI).unwrap();
        let th = persistent_zcl(&FilteredComplex::build_vr(&hex, 3, f64::INFINITY).unwrap(), Prime::TWO, 2).unwrap();
        let ts = persistent_zcl(&FilteredComplex::build_vr(&sq, 3, f64::INFINITY).unwrap(), Prime::TWO, 2).unwrap();
        let r = erosion_distance(&th, &ts).unwrap();
        let mut merged: Vec<f64> = th.grid.iter().chain(&ts.grid).copied().collect();
        merged.sort_by(f64::total_cmp);
        merged.dedup();
        let width = merged.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let step = width / 8.0;
        let samples = far_samples(&merged, step, 10.0);
        let dense = pzcl_oracle::dense_erosion(&as_fn(&th), &as_fn(&ts), &samples, step, 10.0);
        let c = candidate_set(&th, &ts);
        let gap = c.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        assert!((dense - r.d_e).abs() <= gap.max(step), "dense {dense} vs grid {}", r.d_e);
    }

    #[test]
    fn gh_report_fields() {
        let hex = FiniteMetricSpace::circle_geodesic(6, 2.0 * PI).unwrap();
        let sq = FiniteMetricSpace::circle_geodesic(4, 2.0 * PI).unwrap();
        let cfg = GhConfig {
            invariants: vec![Invariant::Zcl, Invariant::Cuplength],
            ..GhConfig::default()
        };
        let r = gh_lower_bound_report(&hex, &sq, &cfg).unwrap();
        assert_eq!(r.combined, r.gh_lower_bound.max(r.diameter_bound));
        assert_eq!(r.diameter_bound, 0.0);
        assert_eq!(r.per_invariant.len(), 2);
        // identity-scale correspondence: nearest points, distortion bounds 2 d_GH
        let pairs: Vec<(usize, usize)> = (0..6).map(|i| (i, (i * 4 + 3) / 6 % 4)).collect();
        let pairs: Vec<(usize, usize)> = pairs.into_iter().chain((0..4).map(|j| ((j * 6) / 4, j))).collect();
        let upper = 0.5 * crate::metric::distortion(&hex, &sq, &pairs);
        assert!(r.gh_lower_bound <= upper + 1e-9, "{} > {upper}", r.gh_lower_bound);
        let same = gh_lower_bound_report(&hex, &hex, &cfg).unwrap();
        assert_eq!((same.d_e, same.combined), (0.0, 0.0));
    }

    fn random_table(seed: &[u8], grid_len: usize) -> PersistentInvariantTable {
        // a monotone table from cumulative decrements
        let mut grid: Vec<f64> = (0..grid_len).map(|i| i as f64 * 0.5 + (seed[i % seed.len()] % 4) as f64 * 0.1).collect();
        grid[0] = 0.0;
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let m = grid.len();
        let mut values = vec![vec![Extended::ZERO; m]; m];
        for len in 0..m {
            for i in (0..m - len).rev() {
                let j = i + len;
                let cap = if len == 0 { 4 } else {
                    let l = values[i][j - 1].finite().unwrap();
                    let r = values[i + 1][j].finite().unwrap();
                    l.min(r)
                };
                let drop = (seed[(i * 7 + j * 3) % seed.len()] % 3) as u64;
                values[i][j] = Extended::Finite(cap.saturating_sub(drop));
            }
        }
        let values = values.into_iter().enumerate().map(|(i, r)| r[i..].to_vec()).collect();
        let t = PersistentInvariantTable {
            invariant: Invariant::Zcl,
            field: Prime::TWO,
            convention: Convention::Open,
            grid,
            values,
            lower_bound_only: false,
        };
        t.validate().unwrap();
        t
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn closed_form_equals_grid(a_f in 0.55f64..0.95, frac in 0.05f64..0.95, b in 0.5f64..3.0, h in 2u64..6) {
            let a_f = a_f * b;
            let a_g = b / 2.0 + frac * (a_f - b / 2.0);
            prop_assume!(a_g > b / 2.0 && a_g < a_f);
            let f = StepFunctorSpec { height: h, a: a_f, b };
            let g = StepFunctorSpec { height: h - 1, a: a_g, b };
            let grid = erosion_distance(&f.table().unwrap(), &g.table().unwrap()).unwrap().d_e;
            prop_assert!((grid - step_erosion_closed_form(&f, &g).unwrap()).abs() < 1e-9);
        }

        #[test]
        fn pseudo_metric(s1 in prop::collection::vec(any::<u8>(), 8), s2 in prop::collection::vec(any::<u8>(), 8), s3 in prop::collection::vec(any::<u8>(), 8)) {
            let (x, y, z) = (random_table(&s1, 5), random_table(&s2, 4), random_table(&s3, 6));
            let d = |a: &PersistentInvariantTable, b: &PersistentInvariantTable| erosion_distance(a, b).unwrap().d_e;
            prop_assert_eq!(d(&x, &y), d(&y, &x));
            prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-9);
            prop_assert_eq!(d(&x, &x), 0.0);
        }

        #[test]
        fn eroded_set_is_upward_closed(s1 in prop::collection::vec(any::<u8>(), 8), s2 in prop::collection::vec(any::<u8>(), 8), e in 0.0f64..3.0, extra in 0.0f64..1.0) {
            let (x, y) = (random_table(&s1, 5), random_table(&s2, 5));
            if is_eps_eroded(&x, &y, e).unwrap().is_none() {
                prop_assert!(is_eps_eroded(&x, &y, e + extra).unwrap().is_none());
            }
        }

        #[test]
        fn dense_oracle_agrees(s1 in prop::collection::vec(any::<u8>(), 8), s2 in prop::collection::vec(any::<u8>(), 8)) {
            let (x, y) = (random_table(&s1, 3), random_table(&s2, 3));
            let r = erosion_distance(&x, &y).unwrap();
            let mut merged: Vec<f64> = x.grid.iter().chain(&y.grid).copied().collect();
            merged.sort_by(f64::total_cmp);
            merged.dedup();
            let width = merged.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            let step = width / 8.0;
            // a finite d_E is a candidate, so at most the grid span
            let span = merged[merged.len() - 1] - merged[0] + step;
            let samples = far_samples(&merged, step, span);
            let dense = pzcl_oracle::dense_erosion(&as_fn(&x), &as_fn(&y), &samples, step, span);
            let c = candidate_set(&x, &y);
            let gap = c.windows(2).map(|w| w[1] - w[0]).fold(step, f64::max);
            if r.d_e.is_infinite() {
                prop_assert!(dense.is_infinite());
            } else {
                prop_assert!((dense - r.d_e).abs() <= gap, "dense {} grid {}", dense, r.d_e);
            }
        }
    }

}
