//! Dense linear algebra over the prime fields 𝔽₂, 𝔽₃, 𝔽₅ and 𝔽₇.
//!
//! Vectors are plain `Vec<u8>` of residues. All eliminations pivot on the
//! leftmost column first and, within a column, on the lowest row index, so
//! bases returned from here are canonical: two spanning sets of the same
//! subspace give byte-identical reduced echelon bases.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A supported prime characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u8);

impl Prime {
    pub const TWO: Prime = Prime(2);
    pub const THREE: Prime = Prime(3);
    pub const FIVE: Prime = Prime(5);
    pub const SEVEN: Prime = Prime(7);

    pub fn new(p: u32) -> Result<Self> {
        match p {
            2 | 3 | 5 | 7 => Ok(Prime(p as u8)),
            _ => Err(Error::UnsupportedField(p)),
        }
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        (a + self.0 - b) % self.0
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        (self.0 - a) % self.0
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.0 as u16) as u8
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u8) -> u8 {
        debug_assert!(a % self.0 != 0);
        // a^(p-2) by repeated multiplication; p <= 7
        let mut r = 1;
        for _ in 0..self.0 - 2 {
            r = self.mul(r, a);
        }
        r
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn from_i64(self, x: i64) -> u8 {
        x.rem_euclid(self.0 as i64) as u8
    }

    /// `(-1)^k` as a residue.
    #[inline]
    pub fn sign(self, k: usize) -> u8 {
        if k % 2 == 0 {
            1
        } else {
            self.0 - 1
        }
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0 as u32
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `y += c·x` over 𝔽_p.
#[inline]
pub fn axpy(p: Prime, y: &mut [u8], c: u8, x: &[u8]) {
    if c == 0 {
        return;
    }
    debug_assert_eq!(y.len(), x.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = p.add(*yi, p.mul(c, xi));
        }
    }
}

pub fn scale(p: Prime, v: &mut [u8], c: u8) {
    for x in v.iter_mut() {
        *x = p.mul(*x, c);
    }
}

pub fn is_zero(v: &[u8]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// A dense matrix over 𝔽_p, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct FfMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for FfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FfMatrix over F{} ({}x{})", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Output of [`FfMatrix::row_reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowEchelon {
    pub reduced: FfMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl FfMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        Self {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; entries are reduced mod p.
    pub fn from_rows(p: Prime, cols: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| x % p.get()));
        }
        Ok(Self {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u8>]) -> Result<Self> {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Dimension(format!(
                    "column {j} has length {}, expected {rows}",
                    c.len()
                )));
            }
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x % p.get());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> Prime {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v % self.p.get();
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let p = self.p;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u8, |acc, (&a, &b)| p.add(acc, p.mul(a, b)))
            })
            .collect())
    }

    pub fn mul(&self, other: &FfMatrix) -> Result<FfMatrix> {
        if self.cols != other.rows || self.p != other.p {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = FfMatrix::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(r, k);
                axpy(self.p, dst, a, other.row(k));
            }
        }
        Ok(out)
    }

    /// Reduced row-echelon form with deterministic pivoting.
    pub fn row_reduce(&self) -> RowEchelon {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..m.cols {
                    m.data.swap(pr * m.cols + k, r * m.cols + k);
                }
            }
            let inv = p.inv(m.get(r, c));
            scale(p, &mut m.data[r * m.cols..(r + 1) * m.cols], inv);
            let pivot_row = m.row(r).to_vec();
            for i in 0..m.rows {
                if i != r {
                    let f = m.get(i, c);
                    if f != 0 {
                        let neg = p.neg(f);
                        axpy(p, &mut m.data[i * m.cols..(i + 1) * m.cols], neg, &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        RowEchelon {
            rank: pivots.len(),
            reduced: m,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }

    /// Canonical basis of the null space `{x : M x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<u8>> {
        let ech = self.row_reduce();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &ech.pivots {
            is_pivot[c] = true;
        }
        let raw: Vec<Vec<u8>> = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0u8; self.cols];
                v[f] = 1;
                for (i, &pc) in ech.pivots.iter().enumerate() {
                    v[pc] = p.neg(ech.reduced.get(i, f));
                }
                v
            })
            .collect();
        canonical_basis(p, self.cols, &raw)
    }

    /// Canonical basis of the column space.
    pub fn image_basis(&self) -> Vec<Vec<u8>> {
        let cols: Vec<Vec<u8>> = (0..self.cols).map(|c| self.column(c)).collect();
        canonical_basis(self.p, self.rows, &cols)
    }

    /// Some `x` with `M x = b`, free variables set to zero.
    pub fn solve(&self, b: &[u8]) -> Result<Option<Vec<u8>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = FfMatrix::zeros(self.p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.data[r * (self.cols + 1)..r * (self.cols + 1) + self.cols].copy_from_slice(self.row(r));
            aug.set(r, self.cols, b[r]);
        }
        let ech = aug.row_reduce();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u8; self.cols];
        for (i, &pc) in ech.pivots.iter().enumerate() {
            x[pc] = ech.reduced.get(i, self.cols);
        }
        Ok(Some(x))
    }
}

/// Reduced echelon basis of the span of `vectors` (all of length `len`).
pub fn canonical_basis(p: Prime, len: usize, vectors: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let mut span = EchelonBasis::new(p, len);
    for v in vectors {
        span.insert(v);
    }
    span.into_rows()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(p: Prime, basis: &[Vec<u8>], v: &[u8]) -> Result<bool> {
    if let Some(b) = basis.iter().find(|b| b.len() != v.len()) {
        return Err(Error::Dimension(format!(
            "basis vector of length {} against vector of length {}",
            b.len(),
            v.len()
        )));
    }
    let mut span = EchelonBasis::new(p, v.len());
    for b in basis {
        span.insert(b);
    }
    Ok(span.contains(v))
}

/// An incrementally maintained subspace in reduced row-echelon form.
///
/// Rows are kept sorted by pivot column with every pivot equal to 1 and
/// cleared from all other rows, so the stored rows are the canonical basis
/// of the span at all times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EchelonBasis {
    p: Prime,
    len: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(p: Prime, len: usize) -> Self {
        Self {
            p,
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn field(&self) -> Prime {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<u8>> {
        self.rows
    }

    /// Residue of `v` after clearing every pivot column.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let mut r = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = r[pc];
            if c != 0 {
                axpy(self.p, &mut r, self.p.neg(c), row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        is_zero(&self.reduce(v))
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.p.inv(r[pc]);
        scale(self.p, &mut r, inv);
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                axpy(self.p, row, self.p.neg(c), &r);
            }
        }
        let at = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, r);
        true
    }
}

/// Expresses vectors in a fixed list of generators modulo a subspace.
///
/// Given a subspace `B` and vectors `g_0..g_r` independent modulo `B`,
/// [`QuotientCoords::coordinates`] returns the unique `c` with
/// `v − Σ c_i g_i ∈ B`, or `None` when `v ∉ B + span(g)`.
#[derive(Debug, Clone)]
pub struct QuotientCoords {
    p: Prime,
    // echelon rows augmented with their coordinates on the generators
    rows: Vec<(usize, Vec<u8>, Vec<u8>)>,
    generators: usize,
}

impl QuotientCoords {
    /// Returns `None` if the generators are dependent modulo `modulus`.
    pub fn new(p: Prime, len: usize, modulus: &[Vec<u8>], generators: &[Vec<u8>]) -> Option<Self> {
        let r = generators.len();
        let mut qc = Self {
            p,
            rows: Vec::new(),
            generators: r,
        };
        for b in modulus {
            debug_assert_eq!(b.len(), len);
            qc.push(b.clone(), vec![0; r]);
        }
        for (i, g) in generators.iter().enumerate() {
            let mut tag = vec![0; r];
            tag[i] = 1;
            if !qc.push(g.clone(), tag) {
                return None;
            }
        }
        Some(qc)
    }

    fn push(&mut self, mut v: Vec<u8>, mut tag: Vec<u8>) -> bool {
        let p = self.p;
        for (pc, row, rtag) in &self.rows {
            let c = v[*pc];
            if c != 0 {
                let neg = p.neg(c);
                axpy(p, &mut v, neg, row);
                axpy(p, &mut tag, neg, rtag);
            }
        }
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = p.inv(v[pc]);
        scale(p, &mut v, inv);
        scale(p, &mut tag, inv);
        // keep rows in insertion order; later rows have pivots not cleared
        // from earlier ones, so reduction must run in this same order
        self.rows.push((pc, v, tag));
        true
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn coordinates(&self, v: &[u8]) -> Option<Vec<u8>> {
        let p = self.p;
        let mut v = v.to_vec();
        let mut acc = vec![0u8; self.generators];
        for (pc, row, tag) in &self.rows {
            let c = v[*pc];
            if c != 0 {
                axpy(p, &mut v, p.neg(c), row);
                axpy(p, &mut acc, c, tag);
            }
        }
        is_zero(&v).then_some(acc)
    }
}
