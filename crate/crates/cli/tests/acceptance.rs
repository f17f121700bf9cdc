//! Acceptance criteria, one PASS/FAIL line each with elapsed time and limit.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use pzcl_cli::oracle_check;
use pzcl_cli::reproduce::{expected, random_step_pair, step_pair};
use pzcl_core::cohomology::{cup_length, induced_map, GradedRing, RingMap};
use pzcl_core::erosion::{erosion_distance, gh_lower_bound_report, step_erosion_closed_form, GhConfig};
use pzcl_core::fixtures;
use pzcl_core::persistence::{persistent_betti, persistent_zcl};
use pzcl_core::zero_divisor::{tensor_square, zcl_map_with, zcl_space, GradedAlgebra, ZeroDivisors};
use pzcl_core::{diameter_gh_lower_bound, FilteredComplex, FiniteMetricSpace, Prime, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok, detail: detail.into() })
}

fn snapshot_ring(fc: &FilteredComplex, cell: usize, p: Prime, max_deg: usize) -> Result<Arc<GradedRing>> {
    Ok(Arc::new(GradedRing::compute(Arc::new(fc.snapshot(cell)), p, max_deg)?))
}

fn random_space(rng: &mut impl Rng, n: usize) -> Result<FiniteMetricSpace> {
    let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect();
    FiniteMetricSpace::euclidean_from_points(&pts)
}

fn test_filtrations() -> Result<Vec<(String, FilteredComplex)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out = vec![("hexagon".to_string(), FilteredComplex::build_vr(&fixtures::hexagon(), 3, f64::INFINITY)?)];
    for i in 0..2 {
        let x = random_space(&mut rng, 8)?;
        out.push((format!("random8#{i}"), FilteredComplex::build_vr(&x, 3, f64::INFINITY)?));
    }
    Ok(out)
}

fn criterion_1() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in 2..=5 {
        let (f, g) = step_pair(n);
        let grid = erosion_distance(&f.table()?, &g.table()?)?.d_e;
        let closed = step_erosion_closed_form(&f, &g)?;
        worst = worst.max((grid - PI / 3.0).abs()).max((grid - closed).abs());
    }
    outcome(worst < 1e-9, format!("n = 2..5, max deviation from pi/3 and closed form {worst:.2e}"))
}

fn criterion_2() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (f, g) = random_step_pair(&mut rng);
        let grid = erosion_distance(&f.table()?, &g.table()?)?.d_e;
        worst = worst.max((grid - step_erosion_closed_form(&f, &g)?).abs());
    }
    outcome(worst < 1e-9, format!("50 random pairs, max |grid - closed form| = {worst:.2e}"))
}

fn criterion_3() -> Result<Outcome> {
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [Prime::TWO, Prime::THREE] {
        for f in &fixtures::ALL {
            let Some((zcl_exp, cl_exp, note)) = expected(f.name, p) else { continue };
            let ring = Arc::new(GradedRing::compute(Arc::new(f.complex()), p, f.betti_mod2.len() - 1)?);
            let (z, c) = (zcl_space(&ring).length, cup_length(&ring).length);
            if z != zcl_exp || c != cl_exp {
                ok = false;
                notes.push(format!("{} F{p}: zcl {z} cl {c}, expected {zcl_exp} {cl_exp}", f.name));
            } else if note.is_some() {
                notes.push(format!("deviation {}(F{p}) zcl = {z}", f.name));
            }
        }
    }
    outcome(ok, format!("5 fixtures x 2 fields; {}", notes.join("; ")))
}

fn criterion_4() -> Result<Outcome> {
    let ring = Arc::new(GradedRing::compute(Arc::new(fixtures::rp2()), Prime::TWO, 2)?);
    let engine = zcl_space(&ring);
    let id = RingMap::identity(&ring);
    let oracle = oracle_check::oracle_zcl_map(&id);
    let ok = engine.length == 3 && !engine.lower_bound_only && oracle == Some(3);
    outcome(ok, format!("engine {}, exhaustive oracle {oracle:?}", engine.length))
}

fn criterion_5() -> Result<Outcome> {
    let p = Prime::TWO;
    let (mut triples, mut quads) = (0usize, 0usize);
    for (name, fc) in test_filtrations()? {
        let cells = fc.grid().len();
        let rings = (0..cells).map(|c| snapshot_ring(&fc, c, p, 2)).collect::<Result<Vec<_>>>()?;
        let zd: Vec<ZeroDivisors> = rings.iter().map(ZeroDivisors::new).collect();
        let maps: Vec<Vec<Option<RingMap>>> = (0..cells)
            .map(|i| {
                (0..cells)
                    .map(|j| if i <= j { induced_map(&rings[i], &rings[j]).ok() } else { None })
                    .collect()
            })
            .collect();
        let zcl = |i: usize, j: usize, f: &RingMap| zcl_map_with(f, &zd[j], &zd[i]).map(|n| n.length);
        for i in 0..cells {
            for j in i..cells {
                let f = maps[i][j].as_ref().expect("inclusion");
                let zf = zcl(i, j, f)?;
                for k in j..cells {
                    let g = maps[j][k].as_ref().expect("inclusion");
                    let composite = g.then(f)?;
                    let zc = zcl(i, k, &composite)?;
                    if zc > zf.min(zcl(j, k, g)?) {
                        return outcome(false, format!("{name}: zcl(g.f) > min at cells {i} {j} {k}"));
                    }
                    triples += 1;
                }
            }
        }
        let t = persistent_zcl(&fc, p, 2)?;
        let n = t.cells();
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    for l in k..n {
                        if t.get(i, l) > t.get(j, k) {
                            return outcome(false, format!("{name}: table not monotone at {i} {j} {k} {l}"));
                        }
                        quads += 1;
                    }
                }
            }
        }
    }
    outcome(true, format!("{triples} inclusion triples, {quads} nested interval pairs"))
}

fn criterion_6() -> Result<Outcome> {
    let mut checked = 0;
    for p in [Prime::TWO, Prime::THREE] {
        for f in &fixtures::ALL {
            let top = f.betti_mod2.len() - 1;
            let ring = GradedRing::compute(Arc::new(f.complex()), p, top)?;
            let simplices: Vec<Vec<usize>> = f.complex().all_simplices().cloned().collect();
            let oracle = pzcl_oracle::betti_numbers(u32::from(p.get()), &simplices, top);
            if ring.betti() != oracle {
                return outcome(false, format!("{} F{p}: {:?} vs oracle {oracle:?}", f.name, ring.betti()));
            }
            checked += 1;
        }
    }
    let fc = FilteredComplex::build_vr(&fixtures::hexagon(), 3, f64::INFINITY)?;
    for k in 0..=2 {
        let t = persistent_betti(&fc, Prime::TWO, k)?;
        oracle_check::check_table(&fc, &t, 2)?;
    }
    let mut compositions = 0;
    for (name, fc) in test_filtrations()? {
        let cells = fc.grid().len();
        let rings = (0..cells).map(|c| snapshot_ring(&fc, c, Prime::TWO, 2)).collect::<Result<Vec<_>>>()?;
        for i in 0..cells {
            for j in i..cells {
                let f = induced_map(&rings[i], &rings[j])?;
                for k in j..cells {
                    let g = induced_map(&rings[j], &rings[k])?;
                    let direct = induced_map(&rings[i], &rings[k])?;
                    let composite = g.then(&f)?;
                    if (0..=2).any(|d| composite.matrix(d) != direct.matrix(d)) {
                        return outcome(false, format!("{name}: composite != direct at cells {i} {j} {k}"));
                    }
                    compositions += 1;
                }
            }
        }
    }
    outcome(
        true,
        format!("{checked} fixture Betti vectors, hexagon barcode ranks, {compositions} composites"),
    )
}

fn criterion_7() -> Result<Outcome> {
    let x = FiniteMetricSpace::circle_geodesic(12, 2.0 * PI)?;
    let sub: Vec<usize> = (0..12).step_by(2).collect();
    let all: Vec<usize> = (0..12).collect();
    let d_h = x.hausdorff(&all, &sub);
    let x_sub = x.subspace(&sub)?;
    let tx = persistent_zcl(&FilteredComplex::build_vr(&x, 3, f64::INFINITY)?, Prime::TWO, 2)?;
    let ts = persistent_zcl(&FilteredComplex::build_vr(&x_sub, 3, f64::INFINITY)?, Prime::TWO, 2)?;
    let d_e = erosion_distance(&tx, &ts)?.d_e;
    let self_d = erosion_distance(&tx, &tx)?.d_e;
    outcome(
        d_e / 2.0 <= d_h + 1e-9 && self_d == 0.0,
        format!("d_E/2 = {:.6} <= d_H = {d_h:.6}; d_E(X, X) = {self_d}", d_e / 2.0),
    )
}

fn criterion_8() -> Result<Outcome> {
    let d = diameter_gh_lower_bound(&PI, &(2.0 * PI));
    if (d - PI / 2.0).abs() > 1e-12 {
        return outcome(false, format!("diameter bound {d}, expected pi/2"));
    }
    let pairs = [
        (fixtures::hexagon(), fixtures::point()),
        (fixtures::hexagon(), FiniteMetricSpace::circle_geodesic(8, 4.0 * PI)?),
        (fixtures::hexagon(), FiniteMetricSpace::circle_geodesic(12, 2.0 * PI)?),
    ];
    let cfg = GhConfig::default();
    for (x, y) in &pairs {
        let r = gh_lower_bound_report(x, y, &cfg)?;
        let expected = (r.d_e / 2.0).max(diameter_gh_lower_bound(x, y));
        if r.combined != expected || r.gh_lower_bound != r.d_e / 2.0 {
            return outcome(false, format!("combined {} != max(d_E/2, diam) = {expected}", r.combined));
        }
    }
    outcome(true, format!("diameter bound pi/2; combined bound consistent on {} pairs", pairs.len()))
}

fn neg(p: Prime, v: &[u8]) -> Vec<u8> {
    v.iter().map(|&x| p.neg(x)).collect()
}

fn basis(n: usize, i: usize) -> Vec<u8> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Associativity and graded commutativity on basis elements within the cap.
fn check_algebra<A: GradedAlgebra>(alg: &A, name: &str) -> std::result::Result<usize, String> {
    let p = alg.field();
    let top = alg.top_degree();
    let mut n = 0;
    for a in 0..=top {
        for b in 0..=top - a {
            for i in 0..alg.dim(a) {
                for j in 0..alg.dim(b) {
                    let (x, y) = (basis(alg.dim(a), i), basis(alg.dim(b), j));
                    let xy = alg.multiply(a, &x, b, &y);
                    let yx = alg.multiply(b, &y, a, &x);
                    let expected = if a * b % 2 == 1 { neg(p, &yx) } else { yx };
                    if xy != expected {
                        return Err(format!("{name}: graded commutativity fails in degrees {a},{b}"));
                    }
                    for c in 0..=top - a - b {
                        for k in 0..alg.dim(c) {
                            let z = basis(alg.dim(c), k);
                            let lhs = alg.multiply(a + b, &xy, c, &z);
                            let rhs = alg.multiply(a, &x, b + c, &alg.multiply(b, &y, c, &z));
                            if lhs != rhs {
                                return Err(format!("{name}: associativity fails in degrees {a},{b},{c}"));
                            }
                            n += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(n)
}

fn criterion_9() -> Result<Outcome> {
    let mut triples = 0;
    for p in [Prime::TWO, Prime::THREE] {
        for f in &fixtures::ALL {
            let ring = Arc::new(GradedRing::compute(Arc::new(f.complex()), p, f.betti_mod2.len() - 1)?);
            let top = ring.max_deg();
            for a in 0..=top {
                for i in 0..ring.dim(a) {
                    let x = basis(ring.dim(a), i);
                    if ring.multiply(0, ring.unit(), a, &x) != x || ring.multiply(a, &x, 0, ring.unit()) != x {
                        return outcome(false, format!("{} F{p}: unit law fails", f.name));
                    }
                }
            }
            let label = format!("{} F{p}", f.name);
            match check_algebra(ring.as_ref(), &label) {
                Ok(n) => triples += n,
                Err(e) => return outcome(false, e),
            }
            let t = tensor_square(&ring, 2 * top);
            match check_algebra(&t, &format!("{label} tensor square")) {
                Ok(n) => triples += n,
                Err(e) => return outcome(false, e),
            }
            if p == Prime::TWO {
                for d1 in 0..=t.top_degree() {
                    for d2 in 0..=t.top_degree() - d1 {
                        for i in 0..t.dim(d1) {
                            for j in 0..t.dim(d2) {
                                let (u, v) = (basis(t.dim(d1), i), basis(t.dim(d2), j));
                                if t.multiply_with(d1, &u, d2, &v, true) != t.multiply_with(d1, &u, d2, &v, false) {
                                    return outcome(false, format!("{label}: signed and unsigned products differ"));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut maps = 0;
    for (name, fc) in test_filtrations()? {
        let cells = fc.grid().len();
        let rings = (0..cells).map(|c| snapshot_ring(&fc, c, Prime::TWO, 2)).collect::<Result<Vec<_>>>()?;
        for i in 0..cells {
            for j in i..cells {
                let f = induced_map(&rings[i], &rings[j])?;
                if !f.is_unital() || !f.is_multiplicative() {
                    return outcome(false, format!("{name}: induced map {j}->{i} not a ring map"));
                }
                maps += 1;
            }
        }
    }
    outcome(
        true,
        format!("unit, {triples} associativity triples, commutativity, {maps} ring maps, F2 sign path"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Result<Outcome>); 9] = [
        ("step functors d_E = pi/3", Duration::from_secs(1), criterion_1),
        ("closed form vs grid on random step pairs", Duration::from_secs(5), criterion_2),
        ("fixture zcl and cup-length values", Duration::from_secs(10), criterion_3),
        ("zcl(RP2; F2) = 3, engine and oracle", Duration::from_secs(30), criterion_4),
        ("categorical law and monotonicity", Duration::from_secs(60), criterion_5),
        ("Betti numbers and functoriality", Duration::from_secs(10), criterion_6),
        ("stability under subsampling", Duration::from_secs(60), criterion_7),
        ("diameter and combined bounds", Duration::from_secs(10), criterion_8),
        ("ring axioms", Duration::from_secs(10), criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(o) => (o.ok && elapsed <= *limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!ok);
        println!(
            "criterion {} [{}] {name}: {detail} ({:.3}s, limit {}s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

