//! Laplacian spectra: exact and dense full solvers, the power method, the
//! evaluation policy used by descriptors, and the edge Laplacian.

mod dense;
pub mod exact;

pub use dense::eigenvalues_full;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::ColoredGraph;
use crate::persistence::UnionFind;

/// Deflation tolerance used when no explicit one is requested.
pub const DEFAULT_EIG_TOL: f64 = f64::EPSILON;

/// How a spectrum was obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectrumMeta {
    /// Exact characteristic-polynomial route; values are correctly rounded roots.
    Exact,
    /// Householder + QL in floating point.
    Dense,
    /// Power-method estimate of the largest eigenvalue only.
    PowerMethod { iterations: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Ascending.
    pub values: Vec<f64>,
    pub meta: SpectrumMeta,
}

impl Spectrum {
    pub fn new(values: Vec<f64>, meta: SpectrumMeta) -> Self {
        Spectrum { values, meta }
    }
}

/// Symmetric matrix stored as its packed lower triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix { n, data: vec![0.0; n * (n + 1) / 2] }
    }

    /// Builds from full rows, reading only the lower triangle.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let mut m = Self::zeros(rows.len());
        for (i, row) in rows.iter().enumerate() {
            for j in 0..=i {
                m.set(i, j, row[j]);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn idx(i: usize, j: usize) -> usize {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[Self::idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[Self::idx(i, j)] = x;
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for j in 0..i {
                let a = self.data[Self::idx(i, j)];
                y[i] += a * x[j];
                y[j] += a * x[i];
            }
            y[i] += self.data[Self::idx(i, i)] * x[i];
        }
        y
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let a = self.get(i, j);
                s += if i == j { a * a } else { 2.0 * a * a };
            }
        }
        s.sqrt()
    }
}

/// Local index of every vertex of `component` (sorted), plus the edges of
/// `g` with both ends inside it, relabeled.
fn local_edges(g: &ColoredGraph, component: &[usize]) -> Result<(Vec<usize>, Vec<(usize, usize)>)> {
    let mut verts = component.to_vec();
    verts.sort_unstable();
    verts.dedup();
    if let Some(&v) = verts.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { index: v, n: g.n() });
    }
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|&&(u, w)| local[u] != usize::MAX && local[w] != usize::MAX)
        .map(|&(u, w)| (local[u], local[w]))
        .collect();
    Ok((verts, edges))
}

fn integer_laplacian(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut l = vec![vec![0i64; n]; n];
    for &(u, w) in edges {
        l[u][u] += 1;
        l[w][w] += 1;
        l[u][w] -= 1;
        l[w][u] -= 1;
    }
    l
}

fn component_count(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut uf = UnionFind::new(n);
    let mut count = n;
    for &(u, w) in edges {
        let (a, b) = (uf.find(u), uf.find(w));
        if a != b {
            uf.link(a.max(b), a.min(b));
            count -= 1;
        }
    }
    count
}

/// `D - A` of the subgraph induced on `component`, rows in sorted vertex order.
pub fn laplacian(g: &ColoredGraph, component: &[usize]) -> Result<SymmetricMatrix> {
    let (verts, edges) = local_edges(g, component)?;
    let int = integer_laplacian(verts.len(), &edges);
    let mut m = SymmetricMatrix::zeros(verts.len());
    for (i, row) in int.iter().enumerate() {
        for j in 0..=i {
            m.set(i, j, row[j] as f64);
        }
    }
    Ok(m)
}

/// Non-zero Laplacian eigenvalues of the subgraph induced on `component`.
///
/// Zeros are removed by exact count (one per connected piece). The exact
/// route is used when it applies, the dense solver otherwise.
pub fn nonzero_laplacian_spectrum(g: &ColoredGraph, component: &[usize]) -> Result<Spectrum> {
    let (verts, edges) = local_edges(g, component)?;
    let n = verts.len();
    let int = integer_laplacian(n, &edges);
    if let Some(values) = exact::nonzero_eigenvalues(&int, n as u64) {
        return Ok(Spectrum::new(values, SpectrumMeta::Exact));
    }
    let zeros = component_count(n, &edges);
    let m = laplacian(g, component)?;
    let mut s = eigenvalues_full(&m, DEFAULT_EIG_TOL)?;
    s.values.drain(..zeros);
    Ok(s)
}

/// Result of [`power_method`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Largest eigenvalue of a positive semidefinite matrix by power iteration
/// from a seeded random start. Stops once `‖Mx - μx‖ ≤ tol·|μ|`.
pub fn power_method(m: &SymmetricMatrix, max_iter: usize, tol: f64, seed: u64) -> PowerEstimate {
    let n = m.dim();
    assert!(n >= 1, "power method on an empty matrix");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    normalize(&mut x);
    let mut mu = 0.0;
    for it in 1..=max_iter {
        let y = m.mul_vec(&x);
        mu = dot(&x, &y);
        let residual = y.iter().zip(&x).map(|(a, b)| (a - mu * b).powi(2)).sum::<f64>().sqrt();
        if residual <= tol * mu.abs() {
            return PowerEstimate { value: mu, iterations: it, converged: true };
        }
        x = y;
        if normalize(&mut x) == 0.0 {
            return PowerEstimate { value: 0.0, iterations: it, converged: true };
        }
    }
    PowerEstimate { value: mu, iterations: max_iter, converged: false }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectrumMode {
    Full,
    /// Power method for the largest eigenvalue on components above `threshold` vertices.
    Partial {
        threshold: usize,
    },
    /// Evaluate only an evenly spaced `fraction` of events with `inner`.
    Scheduled {
        fraction: f64,
        inner: Box<SpectrumMode>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumPolicy {
    pub mode: SpectrumMode,
    /// Power-method relative residual.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SpectrumPolicy {
    fn default() -> Self {
        SpectrumPolicy { mode: SpectrumMode::Full, tol: 1e-10, max_iter: 100_000, seed: 0 }
    }
}

impl SpectrumPolicy {
    pub fn full() -> Self {
        Self::default()
    }

    pub fn partial(threshold: usize) -> Self {
        SpectrumPolicy { mode: SpectrumMode::Partial { threshold }, ..Self::default() }
    }

    pub fn scheduled(fraction: f64, inner: SpectrumMode) -> Self {
        SpectrumPolicy { mode: SpectrumMode::Scheduled { fraction, inner: Box::new(inner) }, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        fn check(mode: &SpectrumMode, nested: bool) -> Result<()> {
            match mode {
                SpectrumMode::Full => Ok(()),
                SpectrumMode::Partial { threshold } if *threshold >= 1 => Ok(()),
                SpectrumMode::Partial { .. } => Err(Error::InvalidPolicy("partial threshold must be >= 1".into())),
                SpectrumMode::Scheduled { .. } if nested => {
                    Err(Error::InvalidPolicy("scheduled mode cannot be nested".into()))
                }
                SpectrumMode::Scheduled { fraction, inner } => {
                    if !(*fraction > 0.0 && *fraction <= 1.0) {
                        return Err(Error::InvalidPolicy(format!("schedule fraction {fraction} outside (0, 1]")));
                    }
                    check(inner, true)
                }
            }
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidPolicy(format!("tolerance {} must be positive", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidPolicy("max_iter must be positive".into()));
        }
        check(&self.mode, false)
    }

    /// Whether event `index` of `total` gets a spectrum under this policy.
    pub fn evaluates(&self, index: usize, total: usize) -> bool {
        match &self.mode {
            SpectrumMode::Scheduled { fraction, .. } => {
                scheduled_indices(total, *fraction).binary_search(&index).is_ok()
            }
            _ => true,
        }
    }
}

/// Evenly spaced event indices covering `fraction` of `total`, last one included:
/// with `m = ⌈total·fraction⌉`, the indices `⌊(j+1)·total/m⌋ - 1` for `j < m`.
pub fn scheduled_indices(total: usize, fraction: f64) -> Vec<usize> {
    if total == 0 {
        return Vec::new();
    }
    let m = ((total as f64 * fraction - 1e-12).ceil() as usize).clamp(1, total);
    (0..m).map(|j| (j + 1) * total / m - 1).collect()
}

/// The spectrum attached to one descriptor event, or `None` when the
/// schedule skips it.
pub fn spectrum_for_event(
    g: &ColoredGraph,
    component: &[usize],
    policy: &SpectrumPolicy,
    event_index: usize,
    total_events: usize,
) -> Result<Option<Spectrum>> {
    let mode = match &policy.mode {
        SpectrumMode::Scheduled { fraction, inner } => {
            if scheduled_indices(total_events, *fraction).binary_search(&event_index).is_err() {
                return Ok(None);
            }
            inner.as_ref()
        }
        m => m,
    };
    match mode {
        SpectrumMode::Partial { threshold } if component.len() > *threshold => {
            let m = laplacian(g, component)?;
            let est = power_method(&m, policy.max_iter, policy.tol, policy.seed);
            if !est.converged {
                return Err(Error::NonConvergence { size: component.len(), iterations: est.iterations });
            }
            Ok(Some(Spectrum::new(vec![est.value], SpectrumMeta::PowerMethod { iterations: est.iterations })))
        }
        _ => nonzero_laplacian_spectrum(g, component).map(Some),
    }
}

/// Non-zero eigenvalues of the edge Laplacian `∂ᵀ∂` of the subgraph induced
/// on `component`, with exactly `β₁ = |E| - |V| + c` zeros removed.
pub fn delta1_nonzero_spectrum(g: &ColoredGraph, component: &[usize]) -> Result<Spectrum> {
    let (verts, edges) = local_edges(g, component)?;
    let m = edges.len();
    let mut d1 = SymmetricMatrix::zeros(m);
    // orientation u -> w with u < w: ∂e = w - u
    for i in 0..m {
        d1.set(i, i, 2.0);
        let (a, b) = edges[i];
        for (j, &(c, d)) in edges.iter().enumerate().take(i) {
            let mut x = 0.0;
            if a == c || b == d {
                x += 1.0;
            }
            if a == d || b == c {
                x -= 1.0;
            }
            d1.set(i, j, x);
        }
    }
    let betti = m + component_count(verts.len(), &edges) - verts.len();
    let mut s = eigenvalues_full(&d1, DEFAULT_EIG_TOL)?;
    s.values.drain(..betti);
    Ok(s)
}
