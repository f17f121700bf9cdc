//! Vietoris–Rips filtrations and the simplicial complexes they produce.

use std::collections::HashMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;

/// Default bound on the number of simplices a filtration may hold.
pub const DEFAULT_SIMPLEX_LIMIT: usize = 5_000_000;

/// Which inequality admits a simplex at scale `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `diam σ < t`
    #[default]
    Open,
    /// `diam σ ≤ t`
    Closed,
}

impl Convention {
    pub fn admits(self, appearance: f64, t: f64) -> bool {
        match self {
            Convention::Open => appearance < t,
            Convention::Closed => appearance <= t,
        }
    }
}

/// A simplex with the filtration value at which it appears.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    pub vertices: Vec<usize>,
    pub appearance: f64,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

fn filtration_order(a: &Simplex, b: &Simplex) -> std::cmp::Ordering {
    a.appearance
        .total_cmp(&b.appearance)
        .then(a.vertices.len().cmp(&b.vertices.len()))
        .then_with(|| a.vertices.cmp(&b.vertices))
}

/// A finite simplicial complex on vertices `0..n`, grouped by dimension.
///
/// Vertex lists are strictly increasing and the global vertex order is the
/// integer order, which fixes front and back faces for cup products.
/// `complete_through` records the dimension up to which the complex is known
/// to contain every simplex it should (a VR skeleton); `None` means the
/// complex is given in full.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    complete_through: Option<usize>,
}

impl SimplicialComplex {
    /// Builds a complex from simplices, adding all missing faces. Input order
    /// within a dimension is kept for simplices listed before their faces are
    /// generated.
    pub fn from_simplices<I>(simplices: I, complete_through: Option<usize>) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut cx = SimplicialComplex {
            by_dim: Vec::new(),
            index: Vec::new(),
            complete_through,
        };
        let mut pending: Vec<Vec<usize>> = Vec::new();
        for mut s in simplices {
            if s.is_empty() {
                return Err(Error::Dimension("empty simplex".into()));
            }
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Dimension(format!("repeated vertex in simplex {s:?}")));
            }
            pending.push(s);
        }
        // lower dimensions first so that listed faces keep their order
        pending.sort_by_key(|s| s.len());
        for s in pending {
            cx.insert_closed(s);
        }
        Ok(cx)
    }

    fn insert_closed(&mut self, s: Vec<usize>) {
        let d = s.len() - 1;
        if d < self.index.len() && self.index[d].contains_key(&s) {
            return;
        }
        if d > 0 {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                self.insert_closed(face);
            }
        }
        self.push_raw(s);
    }

    fn push_raw(&mut self, s: Vec<usize>) {
        let d = s.len() - 1;
        while self.by_dim.len() <= d {
            self.by_dim.push(Vec::new());
            self.index.push(HashMap::new());
        }
        self.index[d].insert(s.clone(), self.by_dim[d].len());
        self.by_dim[d].push(s);
    }

    /// Builds from simplices already sorted so that faces precede cofaces.
    fn from_sorted_unchecked<'a, I>(simplices: I, complete_through: Option<usize>) -> Self
    where
        I: IntoIterator<Item = &'a Vec<usize>>,
    {
        let mut cx = SimplicialComplex {
            by_dim: Vec::new(),
            index: Vec::new(),
            complete_through,
        };
        for s in simplices {
            cx.push_raw(s.clone());
        }
        cx
    }

    pub fn empty() -> Self {
        SimplicialComplex {
            by_dim: Vec::new(),
            index: Vec::new(),
            complete_through: None,
        }
    }

    /// Highest dimension present, `None` for the empty complex.
    pub fn top_dim(&self) -> Option<usize> {
        self.by_dim.iter().rposition(|v| !v.is_empty())
    }

    pub fn count(&self, dim: usize) -> usize {
        self.by_dim.get(dim).map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn simplices(&self, dim: usize) -> &[Vec<usize>] {
        self.by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, vertices: &[usize]) -> Option<usize> {
        let d = vertices.len().checked_sub(1)?;
        self.index.get(d)?.get(vertices).copied()
    }

    pub fn contains(&self, vertices: &[usize]) -> bool {
        self.index_of(vertices).is_some()
    }

    pub fn complete_through(&self) -> Option<usize> {
        self.complete_through
    }

    /// Whether every simplex of the underlying complex is present, in every
    /// dimension. True for explicitly given complexes, and for flag-complex
    /// skeleta that stop short of their dimension cap.
    pub fn is_full(&self) -> bool {
        match self.complete_through {
            None => true,
            Some(cap) => self.top_dim().is_none_or(|d| d < cap),
        }
    }

    /// Whether simplices are known completely through dimension `d`.
    pub fn has_skeleton(&self, d: usize) -> bool {
        self.is_full() || self.complete_through.is_some_and(|cap| cap >= d)
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.by_dim.iter().flatten().all(|s| other.contains(s))
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.by_dim.iter().flatten()
    }

    /// Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, v)| if d % 2 == 0 { v.len() as i64 } else { -(v.len() as i64) })
            .sum()
    }
}

/// A filtered simplicial complex: simplices tagged with appearance values,
/// sorted by `(appearance, dimension, vertices)`.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    space: Option<FiniteMetricSpace>,
    max_dim: Option<usize>,
    scale_cap: f64,
    simplices: Vec<Simplex>,
    grid: Vec<f64>,
    convention: Convention,
}

/// Knobs for [`FilteredComplex::build_vr_with`].
#[derive(Debug, Clone, Copy)]
pub struct VrOptions {
    pub max_dim: usize,
    pub scale_cap: f64,
    pub convention: Convention,
    pub simplex_limit: usize,
}

impl VrOptions {
    pub fn new(max_dim: usize) -> Self {
        Self {
            max_dim,
            scale_cap: f64::INFINITY,
            convention: Convention::Open,
            simplex_limit: DEFAULT_SIMPLEX_LIMIT,
        }
    }
}

impl FilteredComplex {
    /// All simplices of dimension `≤ max_dim` with diameter `< scale_cap`.
    pub fn build_vr(space: &FiniteMetricSpace, max_dim: usize, scale_cap: f64) -> Result<Self> {
        Self::build_vr_with(
            space,
            VrOptions {
                scale_cap,
                ..VrOptions::new(max_dim)
            },
        )
    }

    pub fn build_vr_with(space: &FiniteMetricSpace, opts: VrOptions) -> Result<Self> {
        let n = space.len();
        let cap = opts.scale_cap;
        // higher neighbours of each vertex within the cap
        let upper: Vec<Vec<usize>> = (0..n)
            .map(|i| ((i + 1)..n).filter(|&j| space.dist(i, j) < cap).collect())
            .collect();
        let mut out: Vec<Simplex> = Vec::new();
        let limit = opts.simplex_limit;

        fn expand(
            space: &FiniteMetricSpace,
            upper: &[Vec<usize>],
            simplex: &mut Vec<usize>,
            appearance: f64,
            candidates: &[usize],
            max_dim: usize,
            out: &mut Vec<Simplex>,
            limit: usize,
        ) -> Result<()> {
            if out.len() >= limit {
                return Err(Error::SizeLimit { limit });
            }
            out.push(Simplex {
                vertices: simplex.clone(),
                appearance,
            });
            if simplex.len() > max_dim {
                return Ok(());
            }
            for (k, &u) in candidates.iter().enumerate() {
                let app = simplex.iter().map(|&v| space.dist(v, u)).fold(appearance, f64::max);
                let next: Vec<usize> = candidates[k + 1..]
                    .iter()
                    .copied()
                    .filter(|w| upper[u].binary_search(w).is_ok())
                    .collect();
                simplex.push(u);
                expand(space, upper, simplex, app, &next, max_dim, out, limit)?;
                simplex.pop();
            }
            Ok(())
        }

        if cap > 0.0 {
            for v in 0..n {
                let mut s = vec![v];
                expand(space, &upper, &mut s, 0.0, &upper[v], opts.max_dim, &mut out, limit)?;
            }
        }
        out.sort_by(filtration_order);
        let grid = distinct_sorted(out.iter().map(|s| s.appearance));
        Ok(Self {
            space: Some(space.clone()),
            max_dim: Some(opts.max_dim),
            scale_cap: cap,
            simplices: out,
            grid,
            convention: opts.convention,
        })
    }

    /// A filtration from explicit simplices; faces missing from the input
    /// are added with the smallest appearance of any listed coface.
    pub fn from_simplices(simplices: Vec<Simplex>, convention: Convention) -> Result<Self> {
        let mut best: HashMap<Vec<usize>, f64> = HashMap::new();
        for s in simplices {
            let mut v = s.vertices;
            if v.is_empty() {
                return Err(Error::Dimension("empty simplex".into()));
            }
            if !(s.appearance.is_finite() && s.appearance >= 0.0) {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("invalid appearance {} for {v:?}", s.appearance),
                });
            }
            v.sort_unstable();
            if v.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Dimension(format!("repeated vertex in simplex {v:?}")));
            }
            close_faces(&mut best, v, s.appearance);
        }
        let mut out: Vec<Simplex> = best
            .into_iter()
            .map(|(vertices, appearance)| Simplex { vertices, appearance })
            .collect();
        out.sort_by(filtration_order);
        let grid = distinct_sorted(out.iter().map(|s| s.appearance));
        Ok(Self {
            space: None,
            max_dim: None,
            scale_cap: f64::INFINITY,
            simplices: out,
            grid,
            convention,
        })
    }

    /// Reads the simplicial-complex text format: one simplex per line as
    /// `v0 v1 … vk appearance`, `#` comments and blank lines ignored.
    pub fn read_complex<R: BufRead>(reader: R, convention: Convention) -> Result<Self> {
        let mut simplices = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if tokens.len() < 2 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "expected vertices followed by an appearance value".into(),
                });
            }
            let (verts, app) = tokens.split_at(tokens.len() - 1);
            let appearance = app[0].parse::<f64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("invalid appearance {:?}", app[0]),
            })?;
            let vertices = verts
                .iter()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("invalid vertex {t:?}"),
                    })
                })
                .collect::<Result<Vec<usize>>>()?;
            simplices.push(Simplex { vertices, appearance });
        }
        Self::from_simplices(simplices, convention)
    }

    pub fn from_complex_str(text: &str, convention: Convention) -> Result<Self> {
        Self::read_complex(text.as_bytes(), convention)
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    pub fn space(&self) -> Option<&FiniteMetricSpace> {
        self.space.as_ref()
    }

    /// Dimension cap of a VR construction; `None` for explicit complexes.
    pub fn max_dim(&self) -> Option<usize> {
        self.max_dim
    }

    pub fn scale_cap(&self) -> f64 {
        self.scale_cap
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    /// Sorted distinct appearance values.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Distinct appearance values, ascending, starting at 0.
    pub fn critical_values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.grid.len() + 1);
        if self.grid.first() != Some(&0.0) {
            out.push(0.0);
        }
        out.extend_from_slice(&self.grid);
        out
    }

    /// The complex of simplices admitted at scale `t`.
    pub fn complex_at(&self, t: f64) -> SimplicialComplex {
        let conv = self.convention;
        let end = self.simplices.partition_point(|s| conv.admits(s.appearance, t));
        self.prefix_complex(end)
    }

    /// Snapshot on grid cell `k` of [`critical_values`](Self::critical_values):
    /// every simplex with appearance `≤ critical_values()[k]`.
    pub fn snapshot(&self, cell: usize) -> SimplicialComplex {
        let cv = self.critical_values();
        let threshold = cv[cell];
        let end = self.simplices.partition_point(|s| s.appearance <= threshold);
        self.prefix_complex(end)
    }

    /// Grid cell holding scale `t`, or `None` before the filtration starts.
    /// Open: cell `k` is `(g_k, g_{k+1}]`; closed: `[g_k, g_{k+1})`.
    pub fn cell_of(&self, t: f64) -> Option<usize> {
        cell_index(&self.critical_values(), self.convention, t)
    }

    fn prefix_complex(&self, end: usize) -> SimplicialComplex {
        // a cap at n - 1 or above cuts nothing
        let n = self.space.as_ref().map_or(usize::MAX, FiniteMetricSpace::len);
        let cap = self.max_dim.filter(|&d| d + 1 < n);
        SimplicialComplex::from_sorted_unchecked(self.simplices[..end].iter().map(|s| &s.vertices), cap)
    }

    /// The whole filtration as one complex.
    pub fn full_complex(&self) -> SimplicialComplex {
        self.prefix_complex(self.simplices.len())
    }
}

fn close_faces(best: &mut HashMap<Vec<usize>, f64>, s: Vec<usize>, appearance: f64) {
    if let Some(&old) = best.get(&s) {
        if old <= appearance {
            return;
        }
    }
    if s.len() > 1 {
        for i in 0..s.len() {
            let mut face = s.clone();
            face.remove(i);
            close_faces(best, face, appearance);
        }
    }
    best.insert(s, appearance);
}

fn distinct_sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Cell of `t` in a sorted grid: the number of grid values strictly below
/// `t` (open) or at most `t` (closed), minus one.
pub fn cell_index(grid: &[f64], convention: Convention, t: f64) -> Option<usize> {
    let count = match convention {
        Convention::Open => grid.partition_point(|&g| g < t),
        Convention::Closed => grid.partition_point(|&g| g <= t),
    };
    count.checked_sub(1)
}
