//! Slow, direct reference computations.
//!
//! Every routine here works on plain data (residue vectors, simplex lists,
//! closures) and shares no code with `pzcl-core`, so agreement between the
//! two is meaningful. Nothing here is tuned for speed.

use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// modular arithmetic and rank

fn md(x: i64, p: u32) -> i64 {
    x.rem_euclid(p as i64)
}

fn inv_mod(a: i64, p: u32) -> i64 {
    (1..p as i64).find(|&b| md(a * b, p) == 1).expect("nonzero residue")
}

/// Rank by plain Gaussian elimination on a copy of the rows.
pub fn gauss_rank(p: u32, rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| md(x, p)).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(pr) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = inv_mod(m[rank][c], p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = md(m[r][c] * inv, p);
                for k in 0..ncols {
                    m[r][k] = md(m[r][k] - f * m[rank][k], p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn det_laplace(p: u32, m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return md(m[0][0], p);
    }
    let mut total = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total = md(total + sign * m[0][j] * det_laplace(p, &minor), p);
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Rank as the size of the largest square submatrix with nonzero
/// determinant (cofactor expansion). Exponential; small matrices only.
pub fn minor_rank(p: u32, rows: &[Vec<u8>]) -> usize {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    for k in (1..=nr.min(nc)).rev() {
        for rs in subsets(nr, k) {
            for cs in subsets(nc, k) {
                let sub: Vec<Vec<i64>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| rows[r][c] as i64).collect())
                    .collect();
                if det_laplace(p, &sub) != 0 {
                    return k;
                }
            }
        }
    }
    0
}

// ---------------------------------------------------------------------------
// homology from boundary matrices

/// Betti numbers `dim H_k(K; 𝔽_p)` for `k = 0..=top`, from ranks of the
/// boundary matrices. `simplices` must be face-closed; vertex lists sorted.
pub fn betti_numbers(p: u32, simplices: &[Vec<usize>], top: usize) -> Vec<usize> {
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top + 2];
    for s in simplices {
        let d = s.len() - 1;
        if d <= top + 1 {
            by_dim[d].push(s.clone());
        }
    }
    let boundary_rank = |d: usize| -> usize {
        if d == 0 || by_dim[d].is_empty() || by_dim[d - 1].is_empty() {
            return 0;
        }
        let faces = &by_dim[d - 1];
        // rows: simplices of dim d, columns: faces (rank is transpose-invariant)
        let rows: Vec<Vec<i64>> = by_dim[d]
            .iter()
            .map(|s| {
                let mut row = vec![0i64; faces.len()];
                for i in 0..s.len() {
                    let face: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                    let idx = faces.iter().position(|f| *f == face).expect("face-closed input");
                    row[idx] = if i % 2 == 0 { 1 } else { -1 };
                }
                row
            })
            .collect();
        gauss_rank(p, &rows)
    };
    (0..=top)
        .map(|k| by_dim[k].len() - boundary_rank(k) - boundary_rank(k + 1))
        .collect()
}

/// A persistence interval `[birth, death)` in homological degree `dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bar {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

/// Barcode by the standard column reduction of the filtered boundary matrix.
/// `filtration` lists `(vertices, value)` in a valid filtration order.
pub fn barcode(p: u32, filtration: &[(Vec<usize>, f64)]) -> Vec<Bar> {
    let n = filtration.len();
    let index: BTreeMap<&Vec<usize>, usize> = filtration.iter().enumerate().map(|(i, (s, _))| (s, i)).collect();
    let mut cols: Vec<BTreeMap<usize, i64>> = filtration
        .iter()
        .map(|(s, _)| {
            let mut col = BTreeMap::new();
            if s.len() > 1 {
                for i in 0..s.len() {
                    let face: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                    let r = index[&face];
                    col.insert(r, md(if i % 2 == 0 { 1 } else { -1 }, p));
                }
            }
            col
        })
        .collect();
    let mut low_owner: BTreeMap<usize, usize> = BTreeMap::new();
    let mut paired = vec![false; n];
    let mut bars = Vec::new();
    for j in 0..n {
        loop {
            let Some((&low, &val)) = cols[j].iter().next_back() else {
                break;
            };
            let Some(&k) = low_owner.get(&low) else {
                break;
            };
            let kval = cols[k][&low];
            let f = md(val * inv_mod(kval, p), p);
            let other = cols[k].clone();
            for (r, v) in other {
                let e = cols[j].entry(r).or_insert(0);
                *e = md(*e - f * v, p);
                if *e == 0 {
                    cols[j].remove(&r);
                }
            }
        }
        if let Some((&low, _)) = cols[j].iter().next_back() {
            low_owner.insert(low, j);
            paired[low] = true;
            paired[j] = true;
            let (birth, death) = (filtration[low].1, filtration[j].1);
            if birth < death {
                bars.push(Bar {
                    dim: filtration[low].0.len() - 1,
                    birth,
                    death,
                });
            }
        }
    }
    for j in 0..n {
        if !paired[j] {
            bars.push(Bar {
                dim: filtration[j].0.len() - 1,
                birth: filtration[j].1,
                death: f64::INFINITY,
            });
        }
    }
    bars
}

/// Rank of `H_k(K_s) → H_k(K_t)` where `K_x` holds simplices with value `≤ x`.
pub fn rank_from_bars(bars: &[Bar], k: usize, s: f64, t: f64) -> usize {
    bars.iter().filter(|b| b.dim == k && b.birth <= s && b.death > t).count()
}

// ---------------------------------------------------------------------------
// tensor-square products by direct expansion

/// A graded ring given by its multiplication table on basis classes.
///
/// `product(da, i, db, j)` returns the coordinates of `x_{da,i} · x_{db,j}`
/// in degree `da + db`, or `None` when that degree is beyond what was
/// computed.
pub struct RingTable<'a> {
    pub p: u32,
    pub dims: Vec<usize>,
    pub product: Box<dyn Fn(usize, usize, usize, usize) -> Option<Vec<u8>> + 'a>,
}

/// Key `(deg x, index x, deg y, index y)` of the basis element `x ⊗ y`.
pub type TensorKey = (usize, usize, usize, usize);
/// A sparse element of `A ⊗ A`.
pub type Tensor = BTreeMap<TensorKey, i64>;

impl RingTable<'_> {
    fn base(&self, da: usize, i: usize, db: usize, j: usize) -> Option<Vec<u8>> {
        (self.product)(da, i, db, j)
    }

    /// `(x⊗y)(z⊗w) = (−1)^{|y||z|} xz ⊗ yw`, expanded term by term.
    /// Returns `None` if a term needs an unknown product.
    pub fn tensor_mul(&self, a: &Tensor, b: &Tensor) -> Option<Tensor> {
        let p = self.p;
        let mut out = Tensor::new();
        for (&(dx, ix, dy, iy), &c1) in a {
            for (&(dz, iz, dw, iw), &c2) in b {
                let xz = self.base(dx, ix, dz, iz);
                let yw = self.base(dy, iy, dw, iw);
                let zero = |v: &Option<Vec<u8>>| v.as_ref().is_some_and(|v| v.iter().all(|&e| e == 0));
                if zero(&xz) || zero(&yw) {
                    continue;
                }
                let (xz, yw) = (xz?, yw?);
                let sign = if (dy * dz) % 2 == 0 { 1 } else { -1 };
                for (k, &u) in xz.iter().enumerate() {
                    for (l, &v) in yw.iter().enumerate() {
                        if u != 0 && v != 0 {
                            let e = out.entry((dx + dz, k, dy + dw, l)).or_insert(0);
                            *e = md(*e + sign * c1 * c2 * u as i64 * v as i64, p);
                        }
                    }
                }
            }
        }
        out.retain(|_, v| *v != 0);
        Some(out)
    }

    fn tensor_keys(&self, degree: usize) -> Vec<TensorKey> {
        let mut keys = Vec::new();
        for a in 0..self.dims.len() {
            if a > degree || degree - a >= self.dims.len() {
                continue;
            }
            let b = degree - a;
            for i in 0..self.dims[a] {
                for j in 0..self.dims[b] {
                    keys.push((a, i, b, j));
                }
            }
        }
        keys
    }

    /// Kernel of `x ⊗ y ↦ xy` in one degree, found by enumerating every
    /// vector of that degree. `None` if there are more than `limit` vectors
    /// or a needed product is unknown.
    pub fn brute_force_kernel(&self, degree: usize, limit: usize) -> Option<Vec<Tensor>> {
        let keys = self.tensor_keys(degree);
        let total = (self.p as usize).checked_pow(keys.len() as u32)?;
        if total > limit {
            return None;
        }
        let images: Vec<Option<Vec<u8>>> = keys.iter().map(|&(a, i, b, j)| self.base(a, i, b, j)).collect();
        let target_dim = images.iter().flatten().map(|v| v.len()).max().unwrap_or(0);
        let mut members: Vec<Vec<i64>> = Vec::new();
        for code in 1..total {
            let mut digits = vec![0i64; keys.len()];
            let mut c = code;
            for d in digits.iter_mut() {
                *d = (c % self.p as usize) as i64;
                c /= self.p as usize;
            }
            let mut image = vec![0i64; target_dim];
            for (d, img) in digits.iter().zip(&images) {
                if *d == 0 {
                    continue;
                }
                let img = img.as_ref()?;
                for (k, &e) in img.iter().enumerate() {
                    image[k] = md(image[k] + d * e as i64, self.p);
                }
            }
            if image.iter().all(|&e| e == 0) {
                members.push(digits);
            }
        }
        // greedy basis from the enumerated members
        let mut chosen: Vec<Vec<i64>> = Vec::new();
        for m in members {
            let mut trial = chosen.clone();
            trial.push(m.clone());
            if gauss_rank(self.p, &trial) > chosen.len() {
                chosen = trial;
            }
        }
        Some(
            chosen
                .into_iter()
                .map(|v| {
                    keys.iter()
                        .zip(v)
                        .filter(|(_, c)| *c != 0)
                        .map(|(&k, c)| (k, c))
                        .collect()
                })
                .collect(),
        )
    }
}

/// Outcome of a tuple search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TupleSearch {
    /// Longest product of generators found to be nonzero.
    pub longest: usize,
    /// Some product could not be evaluated.
    pub unknown_seen: bool,
}

/// Enumerates every product `g_{i1} ⋯ g_{ik}` with `i1 ≤ … ≤ ik` and
/// `k ≤ max_len`. Extensions of a zero prefix are skipped (they are zero).
fn tuple_search<T: Clone>(
    gens: &[T],
    mul: &dyn Fn(&T, &T) -> Option<T>,
    is_zero: &dyn Fn(&T) -> bool,
    max_len: usize,
) -> TupleSearch {
    fn dfs<T: Clone>(
        gens: &[T],
        mul: &dyn Fn(&T, &T) -> Option<T>,
        is_zero: &dyn Fn(&T) -> bool,
        start: usize,
        prefix: Option<&T>,
        len: usize,
        max_len: usize,
        result: &mut TupleSearch,
    ) {
        if len == max_len {
            return;
        }
        for i in start..gens.len() {
            let next = match prefix {
                None => Some(gens[i].clone()),
                Some(pre) => mul(pre, &gens[i]),
            };
            match next {
                None => result.unknown_seen = true,
                Some(t) if is_zero(&t) => {}
                Some(t) => {
                    result.longest = result.longest.max(len + 1);
                    dfs(gens, mul, is_zero, i, Some(&t), len + 1, max_len, result);
                }
            }
        }
    }
    let mut result = TupleSearch {
        longest: 0,
        unknown_seen: false,
    };
    dfs(gens, mul, is_zero, 0, None, 0, max_len, &mut result);
    result
}

/// Longest nonzero product of zero-divisor generators in `A ⊗ A` (graded
/// commutativity makes reordering a product change only its sign).
pub fn exhaustive_nilpotency(ring: &RingTable<'_>, generators: &[Tensor], max_len: usize) -> TupleSearch {
    tuple_search(generators, &|a, b| ring.tensor_mul(a, b), &|t| t.is_empty(), max_len)
}

/// Longest nonzero product of homogeneous base-ring elements, each given
/// as `(degree, coordinates)`.
pub fn exhaustive_base_nilpotency(ring: &RingTable<'_>, generators: &[(usize, Vec<u8>)], max_len: usize) -> TupleSearch {
    let mul = |a: &(usize, Vec<u8>), b: &(usize, Vec<u8>)| -> Option<(usize, Vec<u8>)> {
        let mut out: Option<Vec<i64>> = None;
        for (i, &c1) in a.1.iter().enumerate() {
            for (j, &c2) in b.1.iter().enumerate() {
                if c1 == 0 || c2 == 0 {
                    continue;
                }
                let xy = ring.base(a.0, i, b.0, j)?;
                let acc = out.get_or_insert_with(|| vec![0; xy.len()]);
                for (k, &e) in xy.iter().enumerate() {
                    acc[k] = md(acc[k] + c1 as i64 * c2 as i64 * e as i64, ring.p);
                }
            }
        }
        Some((a.0 + b.0, out.unwrap_or_default().into_iter().map(|x| x as u8).collect()))
    };
    tuple_search(generators, &mul, &|t| t.1.iter().all(|&x| x == 0), max_len)
}

// ---------------------------------------------------------------------------
// erosion by dense sampling

/// A persistent invariant evaluated on closed intervals; `None` is `∞`.
pub type IntervalFn<'a> = dyn Fn(f64, f64) -> Option<u64> + 'a;

fn geq(a: Option<u64>, b: Option<u64>) -> bool {
    match (a, b) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x >= y,
    }
}

/// Checks the two erosion inequalities at every pair of sample endpoints.
pub fn sampled_eroded(f: &IntervalFn<'_>, g: &IntervalFn<'_>, samples: &[f64], eps: f64) -> bool {
    for (ia, &a) in samples.iter().enumerate() {
        for &b in &samples[ia..] {
            if !geq(f(a, b), g(a - eps, b + eps)) || !geq(g(a, b), f(a - eps, b + eps)) {
                return false;
            }
        }
    }
    true
}

/// Smallest `ε = k·step` (up to `eps_max`) passing [`sampled_eroded`];
/// `f64::INFINITY` if none does.
pub fn dense_erosion(f: &IntervalFn<'_>, g: &IntervalFn<'_>, samples: &[f64], step: f64, eps_max: f64) -> f64 {
    let mut k = 0u64;
    loop {
        let eps = k as f64 * step;
        if eps > eps_max {
            return f64::INFINITY;
        }
        if sampled_eroded(f, g, samples, eps) {
            return eps;
        }
        k += 1;
    }
}

/// Sample points: every breakpoint, midpoints of consecutive breakpoints,
/// a uniform lattice of spacing `step`, and points outside the range.
pub fn sample_points(breakpoints: &[f64], step: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = breakpoints.to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let (lo, hi) = (pts[0], pts[pts.len() - 1]);
    let mut extra: Vec<f64> = pts.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let mut x = lo - 1.0;
    while x <= hi + 1.0 {
        extra.push(x);
        x += step;
    }
    pts.extend(extra);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
