//! Engine-versus-oracle comparisons on rings small enough to enumerate.

use std::sync::Arc;

use pzcl_core::cohomology::{induced_map, GradedRing, RingMap};
use pzcl_core::persistence::{Extended, Invariant, PersistentInvariantTable};
use pzcl_core::vr::FilteredComplex;
use pzcl_core::zero_divisor::TensorSquareRing;
use pzcl_core::{Error, Result};
use pzcl_oracle::{exhaustive_base_nilpotency, exhaustive_nilpotency, RingTable, Tensor};

/// Rings above this total dimension are not checked.
pub const MAX_TOTAL_DIM: usize = 12;
/// Largest number of vectors the brute-force kernel may enumerate per degree.
pub const ENUMERATION_LIMIT: usize = 1 << 17;
/// Longest product the tuple search tries.
pub const MAX_TUPLE: usize = 4;

/// Multiplication table of `r` with products beyond the degree cap set to
/// zero, which is what the truncated ring does.
pub fn ring_table(r: &GradedRing) -> RingTable<'_> {
    RingTable {
        p: u32::from(r.field()),
        dims: r.betti(),
        product: Box::new(move |a, i, b, j| {
            Some(r.product(a, i, b, j).map_or_else(|| vec![0; r.dim(a + b)], <[u8]>::to_vec))
        }),
    }
}

/// Engine coordinates in degree `d` as an oracle tensor.
pub fn to_tensor(t: &TensorSquareRing, d: usize, v: &[u8]) -> Tensor {
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(idx, &c)| (t.key(d, idx), c as i64))
        .collect()
}

fn brute_kernel(r: &GradedRing) -> Option<Vec<Tensor>> {
    let table = ring_table(r);
    let mut gens = Vec::new();
    for d in 1..=2 * r.max_deg() {
        gens.extend(table.brute_force_kernel(d, ENUMERATION_LIMIT)?);
    }
    Some(gens)
}

/// `(f⊗f)(v)`, expanded directly from the map's matrices.
fn push(f: &RingMap, v: &Tensor) -> Tensor {
    let p = i64::from(u32::from(f.source().field()));
    let mut out = Tensor::new();
    for (&(a, i, b, j), &c) in v {
        let (fa, fb) = (f.matrix(a), f.matrix(b));
        for s in 0..fa.rows() {
            for t in 0..fb.rows() {
                let x = fa.get(s, i) as i64 * fb.get(t, j) as i64;
                if x != 0 {
                    let e = out.entry((a, s, b, t)).or_insert(0);
                    *e = (*e + c * x).rem_euclid(p);
                }
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn small(r: &GradedRing) -> bool {
    r.total_dim() <= MAX_TOTAL_DIM
}

/// Oracle `zcl` of a map: enumerate `ker m` of the source, push it through
/// `f⊗f`, search products of up to [`MAX_TUPLE`] images. `None` when the
/// rings are too large.
pub fn oracle_zcl_map(f: &RingMap) -> Option<u64> {
    if !small(f.source()) || !small(f.target()) {
        return None;
    }
    let images: Vec<Tensor> = brute_kernel(f.source())?.iter().map(|v| push(f, v)).filter(|t| !t.is_empty()).collect();
    let r = exhaustive_nilpotency(&ring_table(f.target()), &images, MAX_TUPLE);
    (!r.unknown_seen).then_some(r.longest as u64)
}

pub fn oracle_zcl_space(r: &Arc<GradedRing>) -> Option<u64> {
    oracle_zcl_map(&RingMap::identity(r))
}

/// Oracle cup-length of a map from the columns of its positive-degree
/// matrices.
pub fn oracle_cup_length_map(f: &RingMap) -> Option<u64> {
    if !small(f.target()) {
        return None;
    }
    let mut gens = Vec::new();
    for k in 1..=f.target().max_deg() {
        let m = f.matrix(k);
        for c in 0..m.cols() {
            let col = m.column(c);
            if col.iter().any(|&x| x != 0) {
                gens.push((k, col));
            }
        }
    }
    let r = exhaustive_base_nilpotency(&ring_table(f.target()), &gens, MAX_TUPLE);
    (!r.unknown_seen).then_some(r.longest as u64)
}

/// Outcome of checking a whole table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct OracleSummary {
    pub checked: usize,
    pub skipped: usize,
}

fn agree(engine: Extended, oracle: u64) -> bool {
    // the tuple search stops at MAX_TUPLE
    engine.finite().map(|v| v.min(MAX_TUPLE as u64)) == Some(oracle)
}

/// Re-derives every entry of `table` that the oracles can reach.
pub fn check_table(fc: &FilteredComplex, table: &PersistentInvariantTable, max_deg: usize) -> Result<OracleSummary> {
    let mut summary = OracleSummary::default();
    let m = table.cells();
    if let Invariant::Betti(k) = table.invariant {
        let filtration: Vec<(Vec<usize>, f64)> = fc.simplices().iter().map(|s| (s.vertices.clone(), s.appearance)).collect();
        let bars = pzcl_oracle::barcode(u32::from(table.field), &filtration);
        for i in 0..m {
            for j in i..m {
                let expected = pzcl_oracle::rank_from_bars(&bars, k, table.grid[i], table.grid[j]) as u64;
                if table.get(i, j) != Extended::Finite(expected) {
                    return Err(Error::Internal(format!(
                        "betti_{k}[{i}][{j}] = {} but the barcode gives {expected}",
                        table.get(i, j)
                    )));
                }
                summary.checked += 1;
            }
        }
        return Ok(summary);
    }
    let rings = (0..m)
        .map(|k| GradedRing::compute(Arc::new(fc.snapshot(k)), table.field, max_deg).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..m {
        for j in i..m {
            let f = induced_map(&rings[i], &rings[j])?;
            let oracle = match table.invariant {
                Invariant::Zcl => oracle_zcl_map(&f),
                _ => oracle_cup_length_map(&f),
            };
            match oracle {
                None => summary.skipped += 1,
                Some(o) if agree(table.get(i, j), o) => summary.checked += 1,
                Some(o) => {
                    return Err(Error::Internal(format!(
                        "{}[{i}][{j}] = {} but the exhaustive search gives {o}",
                        table.invariant,
                        table.get(i, j)
                    )))
                }
            }
        }
    }
    Ok(summary)
}
