//! Simplicial cohomology rings over 𝔽_p with Alexander–Whitney cup products.
//!
//! A [`GradedRing`] holds, for each degree `k ≤ max_deg`, a basis of
//! `H^k(K; 𝔽_p)` with representative cocycles, and the full multiplication
//! table on basis classes. Degrees above `max_deg` are not computed: the
//! ring actually stored is `H^*(K) / H^{>max_deg}(K)`, whose products that
//! land above the cap are zero. When the complex is full and has no
//! simplices above `max_deg` the quotient is the whole ring and the ring is
//! called *exact*; otherwise anything derived from it is a lower bound.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{axpy, EchelonBasis, FfMatrix, Prime, QuotientCoords};
use crate::vr::SimplicialComplex;
use crate::zero_divisor::{nilpotency, GradedAlgebra, GradedSubspace, Nilpotency};

/// The coboundary `δ^k : C^k → C^{k+1}` as a matrix with one row per
/// `(k+1)`-simplex and one column per `k`-simplex.
pub fn coboundary(complex: &SimplicialComplex, k: usize, p: Prime) -> FfMatrix {
    let rows = complex.simplices(k + 1);
    let mut m = FfMatrix::zeros(p, rows.len(), complex.count(k));
    for (r, s) in rows.iter().enumerate() {
        let mut face = Vec::with_capacity(s.len() - 1);
        for i in 0..s.len() {
            face.clear();
            face.extend(s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v));
            let c = complex.index_of(&face).expect("complex is face-closed");
            m.set(r, c, p.sign(i));
        }
    }
    m
}

#[derive(Debug, Clone)]
struct Degree {
    reps: Vec<Vec<u8>>,
    quotient: QuotientCoords,
}

/// A truncated cohomology ring `H^{≤max_deg}(K; 𝔽_p)`.
#[derive(Debug, Clone)]
pub struct GradedRing {
    p: Prime,
    max_deg: usize,
    exact: bool,
    complex: Arc<SimplicialComplex>,
    degrees: Vec<Degree>,
    // mult[a][b][i * dim(b) + j], only for a + b <= max_deg
    mult: Option<Vec<Vec<Vec<Vec<u8>>>>>,
    unit: Vec<u8>,
}

impl GradedRing {
    /// Cohomology basis and cup products in one go.
    pub fn compute(complex: Arc<SimplicialComplex>, p: Prime, max_deg: usize) -> Result<Self> {
        cohomology_basis(complex, p, max_deg).and_then(cup_products)
    }

    pub fn field(&self) -> Prime {
        self.p
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    /// Whether `H^k(K) = 0` for every `k > max_deg`.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    /// `dim H^k`; zero above `max_deg`.
    pub fn dim(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |d| d.reps.len())
    }

    pub fn betti(&self) -> Vec<usize> {
        (0..=self.max_deg).map(|k| self.dim(k)).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.betti().iter().sum()
    }

    pub fn representative(&self, k: usize, i: usize) -> &[u8] {
        &self.degrees[k].reps[i]
    }

    /// Coordinates of the class of cocycle `z ∈ C^k`, or `None` if `z` is
    /// not a cocycle.
    pub fn express(&self, k: usize, z: &[u8]) -> Option<Vec<u8>> {
        self.degrees.get(k)?.quotient.coordinates(z)
    }

    /// Coordinates of the unit `1 ∈ H^0`.
    pub fn unit(&self) -> &[u8] {
        &self.unit
    }

    pub fn has_products(&self) -> bool {
        self.mult.is_some()
    }

    /// Coordinates of `x_{a,i} · x_{b,j}` in degree `a + b`, or `None` when
    /// `a + b > max_deg` (the product is zero in the truncated ring).
    ///
    /// Panics if called before [`cup_products`].
    pub fn product(&self, a: usize, i: usize, b: usize, j: usize) -> Option<&[u8]> {
        if a + b > self.max_deg {
            return None;
        }
        let mult = self.mult.as_ref().expect("cup products not computed");
        Some(&mult[a][b][i * self.dim(b) + j])
    }

    /// Product of two homogeneous elements given by coordinates. Empty
    /// (zero) when the degree exceeds `max_deg`.
    pub fn multiply(&self, a: usize, x: &[u8], b: usize, y: &[u8]) -> Vec<u8> {
        let p = self.p;
        let deg = a + b;
        let mut out = vec![0u8; self.dim(deg)];
        if deg > self.max_deg {
            return out;
        }
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let prod = self.product(a, i, b, j).expect("degree within cap");
                axpy(p, &mut out, p.mul(xi, yj), prod);
            }
        }
        out
    }

    /// Positive-degree part of the whole ring.
    pub fn positive_part(&self) -> GradedSubspace {
        let mut sub = GradedSubspace::new(self.p);
        for k in 1..=self.max_deg {
            for i in 0..self.dim(k) {
                let mut e = vec![0u8; self.dim(k)];
                e[i] = 1;
                sub.insert(k, &e);
            }
        }
        sub
    }
}

impl GradedAlgebra for GradedRing {
    fn field(&self) -> Prime {
        self.p
    }

    fn top_degree(&self) -> usize {
        self.max_deg
    }

    fn dim(&self, degree: usize) -> usize {
        GradedRing::dim(self, degree)
    }

    fn is_exact(&self) -> bool {
        self.exact
    }

    fn multiply(&self, a: usize, x: &[u8], b: usize, y: &[u8]) -> Vec<u8> {
        GradedRing::multiply(self, a, x, b, y)
    }
}

/// Basis of `H^k` for `k ≤ max_deg` with representative cocycles. The
/// returned ring has no multiplication table yet.
pub fn cohomology_basis(complex: Arc<SimplicialComplex>, p: Prime, max_deg: usize) -> Result<GradedRing> {
    if !complex.has_skeleton(max_deg + 1) {
        return Err(Error::InsufficientSkeleton {
            max_deg,
            needed: max_deg + 1,
            available: complex.complete_through().unwrap_or(0),
        });
    }
    let mut degrees = Vec::with_capacity(max_deg + 1);
    let mut prev_image: Vec<Vec<u8>> = Vec::new();
    for k in 0..=max_deg {
        let n = complex.count(k);
        let delta = coboundary(&complex, k, p);
        let cocycles = delta.kernel_basis();
        let mut span = EchelonBasis::new(p, n);
        for b in &prev_image {
            span.insert(b);
        }
        let reps: Vec<Vec<u8>> = cocycles.into_iter().filter(|z| span.insert(z)).collect();
        let quotient = QuotientCoords::new(p, n, &prev_image, &reps)
            .ok_or_else(|| Error::Internal(format!("H^{k} representatives are dependent")))?;
        degrees.push(Degree { reps, quotient });
        prev_image = delta.image_basis();
    }
    let unit = if complex.count(0) == 0 {
        Vec::new()
    } else {
        degrees[0]
            .quotient
            .coordinates(&vec![1u8; complex.count(0)])
            .ok_or_else(|| Error::Internal("constant 0-cochain is not a cocycle".into()))?
    };
    let exact = vanishes_above(&complex, p, max_deg);
    Ok(GradedRing {
        p,
        max_deg,
        exact,
        complex,
        degrees,
        mult: None,
        unit,
    })
}

/// Whether `H^k(K) = 0` for all `k > max_deg`, decided only for full
/// complexes (a capped skeleton says nothing about higher degrees).
fn vanishes_above(complex: &SimplicialComplex, p: Prime, max_deg: usize) -> bool {
    if !complex.is_full() {
        return false;
    }
    let Some(top) = complex.top_dim() else {
        return true;
    };
    let mut prev_rank = coboundary(complex, max_deg, p).rank();
    for k in (max_deg + 1)..=top {
        let rank = coboundary(complex, k, p).rank();
        if complex.count(k) != rank + prev_rank {
            return false;
        }
        prev_rank = rank;
    }
    true
}

/// Alexander–Whitney product of cochains `α ∈ C^a`, `β ∈ C^b`:
/// `(α⌣β)[v_0…v_{a+b}] = α[v_0…v_a] · β[v_a…v_{a+b}]`.
pub fn cup_cochains(complex: &SimplicialComplex, p: Prime, a: usize, alpha: &[u8], b: usize, beta: &[u8]) -> Vec<u8> {
    complex
        .simplices(a + b)
        .iter()
        .map(|s| {
            let front = complex.index_of(&s[..=a]).expect("front face present");
            let back = complex.index_of(&s[a..]).expect("back face present");
            p.mul(alpha[front], beta[back])
        })
        .collect()
}

/// Fills the multiplication table by cupping representatives and
/// expressing each product in the cohomology basis.
pub fn cup_products(mut ring: GradedRing) -> Result<GradedRing> {
    let p = ring.p;
    let top = ring.max_deg;
    let complex = Arc::clone(&ring.complex);
    let mut mult = vec![vec![Vec::new(); top + 1]; top + 1];
    for a in 0..=top {
        for b in 0..=(top - a) {
            let deg = a + b;
            let simplices = complex.simplices(deg);
            // front/back face lookups shared by every pair of classes
            let faces: Vec<(usize, usize)> = simplices
                .iter()
                .map(|s| {
                    (
                        complex.index_of(&s[..=a]).expect("front face present"),
                        complex.index_of(&s[a..]).expect("back face present"),
                    )
                })
                .collect();
            let mut table = Vec::with_capacity(ring.dim(a) * ring.dim(b));
            for x in &ring.degrees[a].reps {
                for y in &ring.degrees[b].reps {
                    let cup: Vec<u8> = faces.iter().map(|&(f, k)| p.mul(x[f], y[k])).collect();
                    let coords = ring.degrees[deg].quotient.coordinates(&cup).ok_or_else(|| {
                        Error::Internal(format!("cup product in degree {deg} is not a cocycle"))
                    })?;
                    table.push(coords);
                }
            }
            mult[a][b] = table;
        }
    }
    ring.mult = Some(mult);
    Ok(ring)
}

/// A degree-preserving map between truncated cohomology rings, stored as
/// one matrix per degree (`dim target^k × dim source^k`).
#[derive(Debug, Clone)]
pub struct RingMap {
    source: Arc<GradedRing>,
    target: Arc<GradedRing>,
    matrices: Vec<FfMatrix>,
}

impl RingMap {
    pub fn identity(ring: &Arc<GradedRing>) -> Self {
        let matrices = (0..=ring.max_deg)
            .map(|k| FfMatrix::identity(ring.p, ring.dim(k)))
            .collect();
        Self {
            source: Arc::clone(ring),
            target: Arc::clone(ring),
            matrices,
        }
    }

    pub fn source(&self) -> &Arc<GradedRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedRing> {
        &self.target
    }

    pub fn matrix(&self, k: usize) -> &FfMatrix {
        &self.matrices[k]
    }

    pub fn apply(&self, k: usize, v: &[u8]) -> Vec<u8> {
        self.matrices[k].mul_vec(v).expect("dimension of source class")
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &RingMap) -> Result<RingMap> {
        if !Arc::ptr_eq(&self.target, &other.source) && self.target.betti() != other.source.betti() {
            return Err(Error::Dimension("ring maps do not compose".into()));
        }
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(f, g)| g.mul(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(RingMap {
            source: Arc::clone(&self.source),
            target: Arc::clone(&other.target),
            matrices,
        })
    }

    pub fn is_unital(&self) -> bool {
        self.apply(0, self.source.unit()) == self.target.unit()
    }

    /// `f(x·y) = f(x)·f(y)` on all basis pairs within the degree cap.
    pub fn is_multiplicative(&self) -> bool {
        let (src, tgt) = (&self.source, &self.target);
        for a in 0..=src.max_deg {
            for b in 0..=(src.max_deg - a) {
                for i in 0..src.dim(a) {
                    for j in 0..src.dim(b) {
                        let lhs = self.apply(a + b, src.product(a, i, b, j).expect("within cap"));
                        let fx = self.matrices[a].column(i);
                        let fy = self.matrices[b].column(j);
                        if tgt.multiply(a, &fx, b, &fy) != lhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Positive-degree part of the image, in target coordinates.
    pub fn positive_image(&self) -> GradedSubspace {
        let mut sub = GradedSubspace::new(self.target.p);
        for k in 1..=self.target.max_deg {
            for v in self.matrices[k].image_basis() {
                sub.insert(k, &v);
            }
        }
        sub
    }
}

/// The map `H^*(K_big) → H^*(K_small)` induced by an inclusion
/// `K_small ⊆ K_big`: restrict representatives, then re-express.
pub fn induced_map(small: &Arc<GradedRing>, big: &Arc<GradedRing>) -> Result<RingMap> {
    if small.p != big.p || small.max_deg != big.max_deg {
        return Err(Error::Dimension(
            "induced map needs rings over the same field and degree cap".into(),
        ));
    }
    let p = small.p;
    let (ks, kb) = (&small.complex, &big.complex);
    let mut matrices = Vec::with_capacity(small.max_deg + 1);
    for k in 0..=small.max_deg {
        let positions = ks
            .simplices(k)
            .iter()
            .map(|s| {
                kb.index_of(s)
                    .ok_or_else(|| Error::Dimension(format!("simplex {s:?} missing from the larger complex")))
            })
            .collect::<Result<Vec<usize>>>()?;
        let mut m = FfMatrix::zeros(p, small.dim(k), big.dim(k));
        for (j, rep) in big.degrees[k].reps.iter().enumerate() {
            let restricted: Vec<u8> = positions.iter().map(|&pos| rep[pos]).collect();
            let coords = small.express(k, &restricted).ok_or_else(|| {
                Error::Internal(format!("restriction of an H^{k} class is not a cocycle"))
            })?;
            for (i, c) in coords.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        matrices.push(m);
    }
    Ok(RingMap {
        source: Arc::clone(big),
        target: Arc::clone(small),
        matrices,
    })
}

/// Cup-length of a map: longest nonzero product of positive-degree
/// elements of its image.
pub fn cup_length_of_map(f: &RingMap) -> Nilpotency {
    let mut n = nilpotency(f.target.as_ref(), &f.positive_image());
    n.lower_bound_only |= !f.source.exact;
    n
}

/// Cup-length of a ring (of the identity map).
pub fn cup_length(ring: &GradedRing) -> Nilpotency {
    nilpotency(ring, &ring.positive_part())
}
