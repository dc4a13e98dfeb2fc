//! Filtration functions and their realization on a concrete graph.
//!
//! Color-based specs and the structural degree / Forman–Ricci filtration both
//! lower to [`FiltrationValues`], which is what every downstream module reads.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColorId, ColoredGraph};

/// Which sublevel filtration of a graph is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiltrationKind {
    /// Vertices enter at `F_v`, edges at the max of their endpoints.
    Vertex,
    /// All vertices present at time 0, edges enter at `F_e`.
    Edge,
}

/// Pair of color functions `(f_v, f_e)`; `f_e` is keyed by unordered color pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct ColorFiltrationSpec {
    vertex: BTreeMap<ColorId, f64>,
    edge: BTreeMap<(ColorId, ColorId), f64>,
}

fn pair(a: &ColorId, b: &ColorId) -> (ColorId, ColorId) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

impl ColorFiltrationSpec {
    pub fn new<V, E>(vertex: V, edge: E) -> Result<Self>
    where
        V: IntoIterator<Item = (ColorId, f64)>,
        E: IntoIterator<Item = ((ColorId, ColorId), f64)>,
    {
        let mut spec = ColorFiltrationSpec { vertex: BTreeMap::new(), edge: BTreeMap::new() };
        for (c, x) in vertex {
            if !x.is_finite() {
                return Err(Error::InvalidFiltration(format!("f_v({c}) = {x} is not finite")));
            }
            if spec.vertex.insert(c.clone(), x).is_some() {
                return Err(Error::InvalidFiltration(format!("f_v({c}) given twice")));
            }
        }
        for ((a, b), x) in edge {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::InvalidFiltration(format!("f_e({a}|{b}) = {x} must be finite and > 0")));
            }
            if spec.edge.insert(pair(&a, &b), x).is_some() {
                return Err(Error::InvalidFiltration(format!("f_e({a}|{b}) given twice")));
            }
        }
        Ok(spec)
    }

    /// Convenience constructor from string keys, `f_e` keys written `"a|b"`.
    pub fn from_names(vertex: &[(&str, f64)], edge: &[(&str, f64)]) -> Result<Self> {
        let edge = edge.iter().map(|&(k, x)| Ok((split_key(k)?, x))).collect::<Result<Vec<_>>>()?;
        Self::new(vertex.iter().map(|&(c, x)| (ColorId::from(c), x)), edge)
    }

    pub fn vertex_value(&self, c: &ColorId) -> Result<f64> {
        self.vertex.get(c).copied().ok_or_else(|| Error::MissingColorKey(format!("f_v({c})")))
    }

    pub fn edge_value(&self, a: &ColorId, b: &ColorId) -> Result<f64> {
        self.edge.get(&pair(a, b)).copied().ok_or_else(|| Error::MissingColorKey(format!("f_e({a}|{b})")))
    }

    pub fn vertex_entries(&self) -> impl Iterator<Item = (&ColorId, f64)> {
        self.vertex.iter().map(|(c, &x)| (c, x))
    }

    pub fn edge_entries(&self) -> impl Iterator<Item = (&(ColorId, ColorId), f64)> {
        self.edge.iter().map(|(k, &x)| (k, x))
    }

    /// Applies `fv` to every vertex value and `fe` to every edge value.
    pub fn map_values(&self, mut fv: impl FnMut(f64) -> f64, mut fe: impl FnMut(f64) -> f64) -> Result<Self> {
        Self::new(
            self.vertex.iter().map(|(c, &x)| (c.clone(), fv(x))),
            self.edge.iter().map(|(k, &x)| (k.clone(), fe(x))),
        )
    }

    /// True when both `f_v` and `f_e` take pairwise distinct values.
    pub fn is_injective(&self) -> bool {
        distinct(self.vertex.values().copied()) && distinct(self.edge.values().copied())
    }

    /// Smallest gap between distinct values of `f_v`, and of `f_e` (∞ if fewer than two values).
    pub fn min_gaps(&self) -> (f64, f64) {
        (min_gap(self.vertex.values().copied()), min_gap(self.edge.values().copied()))
    }

    pub fn same_keys(&self, other: &Self) -> bool {
        self.vertex.keys().eq(other.vertex.keys()) && self.edge.keys().eq(other.edge.keys())
    }
}

fn sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v
}

fn distinct(values: impl Iterator<Item = f64>) -> bool {
    sorted(values).windows(2).all(|w| w[0] != w[1])
}

fn min_gap(values: impl Iterator<Item = f64>) -> f64 {
    sorted(values).windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

fn split_key(key: &str) -> Result<(ColorId, ColorId)> {
    let mut parts = key.split('|');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) if !a.is_empty() && !b.is_empty() => Ok((ColorId::from(a), ColorId::from(b))),
        _ => Err(Error::InvalidFiltration(format!("edge key {key:?} is not of the form \"a|b\""))),
    }
}

#[derive(Serialize, Deserialize)]
struct SpecDoc {
    f_v: BTreeMap<String, f64>,
    f_e: BTreeMap<String, f64>,
}

/// Parses a filtration JSON document. Edge keys may list the two colors in either order.
pub fn parse_filtration(bytes: &[u8]) -> Result<ColorFiltrationSpec> {
    let doc: SpecDoc = serde_json::from_slice(bytes)?;
    let edge = doc.f_e.iter().map(|(k, &x)| Ok((split_key(k)?, x))).collect::<Result<Vec<_>>>()?;
    ColorFiltrationSpec::new(doc.f_v.into_iter().map(|(c, x)| (ColorId::new(c), x)), edge)
}

/// Canonical JSON with lexicographically sorted `a|b` keys.
pub fn filtration_to_json(spec: &ColorFiltrationSpec) -> String {
    let doc = SpecDoc {
        f_v: spec.vertex.iter().map(|(c, &x)| (c.as_str().to_owned(), x)).collect(),
        f_e: spec.edge.iter().map(|((a, b), &x)| (format!("{a}|{b}"), x)).collect(),
    };
    serde_json::to_string(&doc).expect("filtration document serializes")
}

/// Per-vertex and per-edge filtration values realized on one graph. Edge
/// vectors are indexed like [`ColoredGraph::edges`].
#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationValues {
    /// `F_v(v)`.
    pub vertex: Vec<f64>,
    /// `F_v(e)`: max of the endpoint values.
    pub vertex_edge: Vec<f64>,
    /// `F_e(e)`.
    pub edge: Vec<f64>,
    /// Amount added to every raw edge value to make it positive (0 if none).
    pub edge_shift: f64,
}

impl FiltrationValues {
    /// Builds values from per-vertex and per-edge arrays, deriving `F_v(e)`.
    pub fn from_arrays(g: &ColoredGraph, vertex: Vec<f64>, edge: Vec<f64>) -> Self {
        assert_eq!(vertex.len(), g.n());
        assert_eq!(edge.len(), g.edge_count());
        let vertex_edge = g.edges().iter().map(|&(u, w)| vertex[u].max(vertex[w])).collect();
        FiltrationValues { vertex, vertex_edge, edge, edge_shift: 0.0 }
    }

    /// Under the edge filtration every vertex is born at time 0.
    pub fn vertex_birth_under_edge(&self, _v: usize) -> f64 {
        0.0
    }

    /// Adds `shift` to every edge value.
    pub fn shift_edges(mut self, shift: f64) -> Self {
        if shift != 0.0 {
            for x in &mut self.edge {
                *x += shift;
            }
            self.edge_shift += shift;
        }
        self
    }

    /// Shift `1 - min` needed to make all edge values ≥ 1, or 0 when already positive.
    pub fn positivity_shift(&self) -> f64 {
        let min = self.edge.iter().copied().fold(f64::INFINITY, f64::min);
        if min.is_finite() && min <= 0.0 {
            1.0 - min
        } else {
            0.0
        }
    }

    /// Applies [`Self::positivity_shift`].
    pub fn with_positive_edges(self) -> Self {
        let s = self.positivity_shift();
        self.shift_edges(s)
    }

    /// Values of the vertex or edge kind, for each edge.
    pub fn edge_times(&self, kind: FiltrationKind) -> &[f64] {
        match kind {
            FiltrationKind::Vertex => &self.vertex_edge,
            FiltrationKind::Edge => &self.edge,
        }
    }
}

/// Realizes a color spec on `g`.
pub fn induce(spec: &ColorFiltrationSpec, g: &ColoredGraph) -> Result<FiltrationValues> {
    let vertex = (0..g.n()).map(|v| spec.vertex_value(g.color(v))).collect::<Result<Vec<_>>>()?;
    let edge = g.edges().iter().map(|&(u, w)| spec.edge_value(g.color(u), g.color(w))).collect::<Result<Vec<_>>>()?;
    Ok(FiltrationValues::from_arrays(g, vertex, edge))
}

/// Degree as `F_v`, raw augmented Forman–Ricci curvature as `F_e` (unshifted).
pub fn degree_filtration(g: &ColoredGraph) -> FiltrationValues {
    let vertex = (0..g.n()).map(|v| g.degree(v) as f64).collect();
    FiltrationValues::from_arrays(g, vertex, forman_ricci_edge_values(g))
}

/// `4 - |N(u)| - |N(w)| + 3 |N(u) ∩ N(w)|` for every edge, in edge order.
pub fn forman_ricci_edge_values(g: &ColoredGraph) -> Vec<f64> {
    g.edges()
        .iter()
        .map(|&(u, w)| {
            let common = sorted_intersection_len(g.neighbors(u), g.neighbors(w));
            4.0 - g.degree(u) as f64 - g.degree(w) as f64 + 3.0 * common as f64
        })
        .collect()
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Sorted distinct critical values of a filtration.
#[derive(Clone, Debug, PartialEq)]
pub struct Timeline(Vec<f64>);

impl Timeline {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

pub fn timeline(values: &FiltrationValues, kind: FiltrationKind) -> Timeline {
    let mut v: Vec<f64> = match kind {
        FiltrationKind::Vertex => values.vertex.iter().chain(&values.vertex_edge).copied().collect(),
        FiltrationKind::Edge => std::iter::once(0.0).chain(values.edge.iter().copied()).collect(),
    };
    v.sort_by(f64::total_cmp);
    v.dedup();
    Timeline(v)
}

/// Sublevel subgraph at time `t`, reindexed densely; `vertices[i]` is the
/// original index of vertex `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredSubgraph {
    pub graph: ColoredGraph,
    pub vertices: Vec<usize>,
}

pub fn subgraph_at(g: &ColoredGraph, values: &FiltrationValues, kind: FiltrationKind, t: f64) -> FilteredSubgraph {
    let vertices: Vec<usize> = match kind {
        FiltrationKind::Vertex => (0..g.n()).filter(|&v| values.vertex[v] <= t).collect(),
        FiltrationKind::Edge => (0..g.n()).collect(),
    };
    let times = values.edge_times(kind);
    let graph = match kind {
        FiltrationKind::Edge => {
            g.with_edges(g.edges().iter().zip(times).filter(|(_, &x)| x <= t).map(|(&e, _)| e).collect())
        }
        FiltrationKind::Vertex => g.restricted(&vertices, |i| times[i] <= t),
    };
    FilteredSubgraph { graph, vertices }
}
