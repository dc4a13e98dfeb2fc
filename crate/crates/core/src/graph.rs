//! Vertex-colored simple graphs.
//!
//! Vertices are dense indices `0..n`. Colors are interned: the graph keeps an
//! ordered color set and each vertex stores an index into it. Edges are kept
//! once, as sorted `(min, max)` pairs, in lexicographic order.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical unordered edge, always `(min, max)`.
pub type Edge = (usize, usize);

/// Symbolic color name, an element of a graph's color set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorId(String);

impl ColorId {
    pub fn new(name: impl Into<String>) -> Self {
        ColorId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ColorId {
    fn from(s: &str) -> Self {
        ColorId(s.to_owned())
    }
}

/// An immutable simple undirected graph with one color per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    color_set: Vec<ColorId>,
    colors: Vec<usize>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

impl ColoredGraph {
    /// Builds a graph, validating simplicity and color membership. Edge pairs
    /// may come in either orientation; a pair given twice is an error.
    pub fn new<I>(color_set: Vec<ColorId>, vertex_colors: Vec<ColorId>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut lookup = HashMap::with_capacity(color_set.len());
        for (i, c) in color_set.iter().enumerate() {
            if c.0.is_empty() || c.0.contains('|') {
                return Err(Error::InvalidColorName(c.0.clone()));
            }
            if lookup.insert(c.clone(), i).is_some() {
                return Err(Error::DuplicateColor(c.0.clone()));
            }
        }
        let colors = vertex_colors
            .into_iter()
            .map(|c| lookup.get(&c).copied().ok_or(Error::UnknownColor(c.0)))
            .collect::<Result<Vec<_>>>()?;
        let n = colors.len();

        let mut seen = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { index: v, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
        }
        let edges: Vec<Edge> = seen.into_iter().collect();
        Ok(Self::from_parts(color_set, colors, edges))
    }

    /// Convenience constructor from string slices.
    pub fn from_names(color_set: &[&str], vertex_colors: &[&str], edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(
            color_set.iter().map(|&c| ColorId::from(c)).collect(),
            vertex_colors.iter().map(|&c| ColorId::from(c)).collect(),
            edges.iter().copied(),
        )
    }

    // Caller guarantees validity and canonical (sorted, deduplicated) edges.
    fn from_parts(color_set: Vec<ColorId>, colors: Vec<usize>, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); colors.len()];
        for &(u, w) in &edges {
            adjacency[u].push(w);
            adjacency[w].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        ColoredGraph { color_set, colors, edges, adjacency }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn color_set(&self) -> &[ColorId] {
        &self.color_set
    }

    pub fn color(&self, v: usize) -> &ColorId {
        &self.color_set[self.colors[v]]
    }

    /// Index of the color of `v` inside [`Self::color_set`].
    pub fn color_index(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (u, w) = (a.min(b), a.max(b));
        u != w && w < self.n() && self.adjacency[u].binary_search(&w).is_ok()
    }

    /// Position of an edge in [`Self::edges`].
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    /// Subgraph on the same vertex set keeping only the listed edges.
    pub(crate) fn with_edges(&self, edges: Vec<Edge>) -> Self {
        Self::from_parts(self.color_set.clone(), self.colors.clone(), edges)
    }

    /// Induced subgraph on `vertices` (sorted ascending), reindexed densely.
    pub(crate) fn restricted(&self, vertices: &[usize], keep_edge: impl Fn(usize) -> bool) -> Self {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, &(u, w))| local[u] != usize::MAX && local[w] != usize::MAX && keep_edge(i))
            .map(|(_, &(u, w))| (local[u], local[w]))
            .collect();
        let colors = vertices.iter().map(|&v| self.colors[v]).collect();
        Self::from_parts(self.color_set.clone(), colors, edges)
    }

    /// Number of independent cycles, `|E| - |V| + #components`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + connected_components(self).len() - self.n()
    }
}

/// A bijection on `0..n`, stored as the image of each index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPermutation(Vec<usize>);

impl VertexPermutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() {
                return Err(Error::NotAPermutation(format!("index {i} out of range")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAPermutation(format!("index {i} repeated")));
            }
        }
        Ok(VertexPermutation(image))
    }

    pub fn identity(n: usize) -> Self {
        VertexPermutation((0..n).collect())
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.shuffle(rng);
        VertexPermutation(image)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        VertexPermutation(inv)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Relabels `g` so that vertex `v` becomes `p(v)`; the color of `p(v)` in the
/// result is the color of `v` in `g`.
pub fn permute(g: &ColoredGraph, p: &VertexPermutation) -> Result<ColoredGraph> {
    if p.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: p.len() });
    }
    let mut colors = vec![0; g.n()];
    for v in 0..g.n() {
        colors[p.apply(v)] = g.colors[v];
    }
    let mut edges: Vec<Edge> = g
        .edges
        .iter()
        .map(|&(u, w)| {
            let (a, b) = (p.apply(u), p.apply(w));
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    Ok(ColoredGraph::from_parts(g.color_set.clone(), colors, edges))
}

/// Erdős–Rényi style graph with uniformly drawn colors; deterministic in `seed`.
pub fn random_colored_graph(n: usize, edge_prob: f64, colors: &[ColorId], seed: u64) -> Result<ColoredGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_colored_graph_with(n, edge_prob, colors, &mut rng)
}

/// As [`random_colored_graph`], drawing from a caller-supplied generator.
pub fn random_colored_graph_with(
    n: usize,
    edge_prob: f64,
    colors: &[ColorId],
    rng: &mut impl Rng,
) -> Result<ColoredGraph> {
    if colors.is_empty() {
        return Err(Error::EmptyColors);
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::Probability(edge_prob));
    }
    let mut color_set: Vec<ColorId> = Vec::new();
    for c in colors {
        if !color_set.contains(c) {
            color_set.push(c.clone());
        }
    }
    let vertex_colors: Vec<ColorId> = (0..n).map(|_| colors[rng.random_range(0..colors.len())].clone()).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for w in u + 1..n {
            if rng.random_bool(edge_prob) {
                edges.push((u, w));
            }
        }
    }
    ColoredGraph::new(color_set, vertex_colors, edges)
}

/// Maximal connected vertex sets, each sorted, ordered by smallest member.
pub fn connected_components(g: &ColoredGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..g.n() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut comp = Vec::new();
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    color_set: Vec<String>,
    vertices: Vec<VertexDoc>,
    edges: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    id: usize,
    color: String,
}

/// Parses and validates a graph JSON document.
pub fn parse_graph(bytes: &[u8]) -> Result<ColoredGraph> {
    let doc: GraphDoc = serde_json::from_slice(bytes)?;
    let n = doc.vertices.len();
    let mut slots: Vec<Option<String>> = vec![None; n];
    for v in doc.vertices {
        match slots.get_mut(v.id) {
            Some(slot @ None) => *slot = Some(v.color),
            _ => return Err(Error::VertexId { n, found: v.id }),
        }
    }
    let colors = slots.into_iter().map(|c| ColorId(c.expect("every slot filled"))).collect();
    ColoredGraph::new(
        doc.color_set.into_iter().map(ColorId).collect(),
        colors,
        doc.edges.into_iter().map(|[a, b]| (a, b)),
    )
}

/// Canonical JSON form: vertices by id, edges as sorted pairs.
pub fn graph_to_json(g: &ColoredGraph) -> String {
    let doc = GraphDoc {
        color_set: g.color_set.iter().map(|c| c.0.clone()).collect(),
        vertices: (0..g.n()).map(|id| VertexDoc { id, color: g.color(id).0.clone() }).collect(),
        edges: g.edges.iter().map(|&(u, w)| [u, w]).collect(),
    };
    serde_json::to_string(&doc).expect("graph document serializes")
}
