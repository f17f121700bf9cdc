//! Tensor squares, zero-divisor ideals and nilpotency.
//!
//! Over a field, `H^*(X × X) ≅ A ⊗ A` with `A = H^*(X)`, and the diagonal
//! pulls back to the multiplication `m(x ⊗ y) = x·y`. Everything here works
//! on the abstract ring, never on a triangulation of `X × X`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cohomology::{GradedRing, RingMap};
use crate::error::{Error, Result};
use crate::linalg::{is_zero, EchelonBasis, FfMatrix, Prime};

/// A graded-commutative algebra over 𝔽_p with finitely many nonzero
/// degrees, given in coordinates.
pub trait GradedAlgebra {
    fn field(&self) -> Prime;
    /// Degrees above this are zero.
    fn top_degree(&self) -> usize;
    fn dim(&self, degree: usize) -> usize;
    /// Whether the algebra is the full object rather than a truncation of it.
    fn is_exact(&self) -> bool;
    /// Product of homogeneous elements.
    fn multiply(&self, da: usize, a: &[u8], db: usize, b: &[u8]) -> Vec<u8>;
}

/// A graded subspace, one echelon basis per degree.
#[derive(Debug, Clone)]
pub struct GradedSubspace {
    p: Prime,
    parts: BTreeMap<usize, EchelonBasis>,
}

impl GradedSubspace {
    pub fn new(p: Prime) -> Self {
        Self {
            p,
            parts: BTreeMap::new(),
        }
    }

    /// Adds `v` to the degree-`deg` part. Returns whether the span grew.
    pub fn insert(&mut self, deg: usize, v: &[u8]) -> bool {
        if is_zero(v) {
            return false;
        }
        let p = self.p;
        self.parts
            .entry(deg)
            .or_insert_with(|| EchelonBasis::new(p, v.len()))
            .insert(v)
    }

    pub fn dim(&self, deg: usize) -> usize {
        self.parts.get(&deg).map_or(0, EchelonBasis::dim)
    }

    pub fn total_dim(&self) -> usize {
        self.parts.values().map(EchelonBasis::dim).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn contains(&self, deg: usize, v: &[u8]) -> bool {
        is_zero(v) || self.parts.get(&deg).is_some_and(|b| b.contains(v))
    }

    /// `(degree, vector)` for every basis vector, in degree order.
    pub fn basis(&self) -> impl Iterator<Item = (usize, &[u8])> {
        self.parts
            .iter()
            .flat_map(|(&d, b)| b.rows().iter().map(move |r| (d, r.as_slice())))
    }

    /// The same subspace without its degree-0 part.
    pub fn positive(&self) -> Self {
        let mut out = self.clone();
        out.parts.remove(&0);
        out
    }
}

/// Longest nonzero product length, with a marker for truncated inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nilpotency {
    pub length: u64,
    pub lower_bound_only: bool,
}

/// Iterated product spans: `V_1 = V`, `V_{k+1} = span{v·w : v ∈ V_k, w ∈ V}`.
/// Returns the largest `k` with `V_k ≠ 0`. `V` must be positive-degree, so
/// degrees strictly increase and the loop stops past `top_degree`.
pub fn nilpotency<A: GradedAlgebra + ?Sized>(alg: &A, v: &GradedSubspace) -> Nilpotency {
    debug_assert_eq!(v.dim(0), 0, "nilpotency needs a positive-degree subspace");
    let generators: Vec<(usize, Vec<u8>)> = v.basis().map(|(d, r)| (d, r.to_vec())).collect();
    let mut level = generators.clone();
    let mut length = 0;
    while !level.is_empty() {
        length += 1;
        let mut next = GradedSubspace::new(alg.field());
        for (dv, x) in &level {
            for (dw, y) in &generators {
                if dv + dw > alg.top_degree() {
                    continue;
                }
                next.insert(dv + dw, &alg.multiply(*dv, x, *dw, y));
            }
        }
        level = next.basis().map(|(d, r)| (d, r.to_vec())).collect();
    }
    Nilpotency {
        length,
        lower_bound_only: !alg.is_exact(),
    }
}

/// `A ⊗ A` with basis `x_{a,i} ⊗ x_{b,j}` ordered by `a`, then `i`, then `j`
/// within each total degree.
#[derive(Debug, Clone)]
pub struct TensorSquareRing {
    base: Arc<GradedRing>,
    cap: usize,
    // offsets[d][a]: start of the (a, d - a) block in degree d
    offsets: Vec<Vec<Option<usize>>>,
    dims: Vec<usize>,
}

/// Assembles `A ⊗ A` through total degree `total_deg_cap` (at most
/// `2 · max_deg`, where the tensor square of the truncated ring ends).
pub fn tensor_square(base: &Arc<GradedRing>, total_deg_cap: usize) -> TensorSquareRing {
    let top = base.max_deg();
    let cap = total_deg_cap.min(2 * top);
    let mut offsets = Vec::with_capacity(cap + 1);
    let mut dims = Vec::with_capacity(cap + 1);
    for d in 0..=cap {
        let mut row = vec![None; top + 1];
        let mut n = 0;
        for (a, slot) in row.iter_mut().enumerate() {
            if a <= d && d - a <= top {
                *slot = Some(n);
                n += base.dim(a) * base.dim(d - a);
            }
        }
        offsets.push(row);
        dims.push(n);
    }
    TensorSquareRing {
        base: Arc::clone(base),
        cap,
        offsets,
        dims,
    }
}

impl TensorSquareRing {
    pub fn full(base: &Arc<GradedRing>) -> Self {
        tensor_square(base, 2 * base.max_deg())
    }

    pub fn base(&self) -> &Arc<GradedRing> {
        &self.base
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Whether products were cut off below `2 · max_deg`.
    pub fn is_cap_truncated(&self) -> bool {
        self.cap < 2 * self.base.max_deg()
    }

    /// Position of `x_{a,i} ⊗ x_{b,j}` within degree `a + b`.
    pub fn index(&self, a: usize, i: usize, b: usize, j: usize) -> usize {
        self.offsets[a + b][a].expect("component within cap") + i * self.base.dim(b) + j
    }

    /// The basis key `(a, i, b, j)` at position `idx` of degree `d`.
    pub fn key(&self, d: usize, idx: usize) -> (usize, usize, usize, usize) {
        let row = &self.offsets[d];
        let a = (0..row.len())
            .rev()
            .find(|&a| row[a].is_some_and(|o| o <= idx) && self.base.dim(a) * self.base.dim(d - a) > 0)
            .expect("index within degree");
        let local = idx - row[a].unwrap();
        let db = self.base.dim(d - a);
        (a, local / db, d - a, local % db)
    }

    /// Coordinates of `1 ⊗ 1`.
    pub fn one(&self) -> Vec<u8> {
        let u = self.base.unit();
        let mut out = vec![0u8; self.dim(0)];
        for (i, &x) in u.iter().enumerate() {
            for (j, &y) in u.iter().enumerate() {
                out[self.index(0, i, 0, j)] = self.base.field().mul(x, y);
            }
        }
        out
    }

    /// `(x⊗y)(z⊗w) = (−1)^{|y||z|} xz ⊗ yw`, with the sign applied only when
    /// `apply_signs` is set.
    pub fn multiply_with(&self, d1: usize, u: &[u8], d2: usize, v: &[u8], apply_signs: bool) -> Vec<u8> {
        let p = self.base.field();
        let deg = d1 + d2;
        let mut out = vec![0u8; self.dim(deg)];
        if deg > self.cap {
            return out;
        }
        let base = &self.base;
        for (s, &cu) in u.iter().enumerate() {
            if cu == 0 {
                continue;
            }
            let (a, i, b, j) = self.key(d1, s);
            for (t, &cv) in v.iter().enumerate() {
                if cv == 0 {
                    continue;
                }
                let (c, k, e, l) = self.key(d2, t);
                let (Some(xz), Some(yw)) = (base.product(a, i, c, k), base.product(b, j, e, l)) else {
                    continue;
                };
                let mut coef = p.mul(cu, cv);
                if apply_signs && (b * c) % 2 == 1 {
                    coef = p.neg(coef);
                }
                let db = base.dim(b + e);
                let start = self.offsets[deg][a + c].expect("component within cap");
                for (q, &x) in xz.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    let cx = p.mul(coef, x);
                    for (r, &y) in yw.iter().enumerate() {
                        if y != 0 {
                            let pos = start + q * db + r;
                            out[pos] = p.add(out[pos], p.mul(cx, y));
                        }
                    }
                }
            }
        }
        out
    }

    /// Signed product; the sign is skipped in characteristic 2 where it is
    /// always `+1`.
    pub fn multiply(&self, d1: usize, u: &[u8], d2: usize, v: &[u8]) -> Vec<u8> {
        self.multiply_with(d1, u, d2, v, self.base.field() != Prime::TWO)
    }

    /// Matrix of `m : (A⊗A)^d → A^d`; zero rows above `max_deg`.
    pub fn m_matrix(&self, d: usize) -> FfMatrix {
        let base = &self.base;
        let mut m = FfMatrix::zeros(base.field(), base.dim(d), self.dim(d));
        if d > base.max_deg() {
            return m;
        }
        for col in 0..self.dim(d) {
            let (a, i, b, j) = self.key(d, col);
            let prod = base.product(a, i, b, j).expect("degree within cap");
            for (r, &x) in prod.iter().enumerate() {
                m.set(r, col, x);
            }
        }
        m
    }

    pub fn apply_m(&self, d: usize, v: &[u8]) -> Vec<u8> {
        self.m_matrix(d).mul_vec(v).expect("tensor degree dimension")
    }
}

impl GradedAlgebra for TensorSquareRing {
    fn field(&self) -> Prime {
        self.base.field()
    }

    fn top_degree(&self) -> usize {
        self.cap
    }

    fn dim(&self, degree: usize) -> usize {
        self.dims.get(degree).copied().unwrap_or(0)
    }

    fn is_exact(&self) -> bool {
        self.base.is_exact() && !self.is_cap_truncated()
    }

    fn multiply(&self, da: usize, a: &[u8], db: usize, b: &[u8]) -> Vec<u8> {
        TensorSquareRing::multiply(self, da, a, db, b)
    }
}

/// A graded subspace of `ker m` in a tensor square.
#[derive(Debug, Clone)]
pub struct ZeroDivisorSubspace {
    pub space: GradedSubspace,
}

impl ZeroDivisorSubspace {
    pub fn dim(&self, deg: usize) -> usize {
        self.space.dim(deg)
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn basis(&self) -> impl Iterator<Item = (usize, &[u8])> {
        self.space.basis()
    }
}

/// Canonical basis of `ker m`, degree by degree.
pub fn zero_divisor_kernel(t: &TensorSquareRing) -> ZeroDivisorSubspace {
    let mut space = GradedSubspace::new(t.field());
    for d in 0..=t.cap {
        for v in t.m_matrix(d).kernel_basis() {
            space.insert(d, &v);
        }
    }
    ZeroDivisorSubspace { space }
}

/// Tensor square and its zero-divisor ideal, computed once per ring.
#[derive(Debug, Clone)]
pub struct ZeroDivisors {
    pub tensor: TensorSquareRing,
    pub kernel: ZeroDivisorSubspace,
}

impl ZeroDivisors {
    pub fn new(ring: &Arc<GradedRing>) -> Self {
        let tensor = TensorSquareRing::full(ring);
        let kernel = zero_divisor_kernel(&tensor);
        Self { tensor, kernel }
    }
}

/// `zcl` of a space: nilpotency of the positive-degree zero divisors.
pub fn zcl_space(ring: &Arc<GradedRing>) -> Nilpotency {
    let zd = ZeroDivisors::new(ring);
    nilpotency(&zd.tensor, &zd.kernel.space.positive())
}

/// `(f⊗f)(v)` for `v` in degree `d` of the source tensor square.
fn push_forward(f: &RingMap, src: &TensorSquareRing, tgt: &TensorSquareRing, d: usize, v: &[u8]) -> Vec<u8> {
    let p = src.field();
    let mut out = vec![0u8; tgt.dim(d)];
    for (idx, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (a, i, b, j) = src.key(d, idx);
        let fx = f.matrix(a).column(i);
        let fy = f.matrix(b).column(j);
        for (s, &x) in fx.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let cx = p.mul(c, x);
            for (t, &y) in fy.iter().enumerate() {
                if y != 0 {
                    let pos = tgt.index(a, s, b, t);
                    out[pos] = p.add(out[pos], p.mul(cx, y));
                }
            }
        }
    }
    out
}

/// `zcl` of a ring map `f : A_b → A_a`: nilpotency of `(f⊗f)(ker m_b)`
/// inside `A_a ⊗ A_a`.
pub fn zcl_map(f: &RingMap) -> Result<Nilpotency> {
    zcl_map_with(f, &ZeroDivisors::new(f.source()), &ZeroDivisors::new(f.target()))
}

/// [`zcl_map`] with precomputed tensor squares of source and target.
pub fn zcl_map_with(f: &RingMap, src: &ZeroDivisors, tgt: &ZeroDivisors) -> Result<Nilpotency> {
    let mut image = GradedSubspace::new(src.tensor.field());
    for (d, v) in src.kernel.space.positive().basis() {
        let w = push_forward(f, &src.tensor, &tgt.tensor, d, v);
        if !is_zero(&tgt.tensor.apply_m(d, &w)) {
            return Err(Error::Internal(format!(
                "image of a degree-{d} zero divisor is not a zero divisor"
            )));
        }
        image.insert(d, &w);
    }
    let mut n = nilpotency(&tgt.tensor, &image);
    n.lower_bound_only |= !src.tensor.is_exact();
    Ok(n)
}
