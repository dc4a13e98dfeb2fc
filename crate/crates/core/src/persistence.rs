//! 0- and 1-dimensional persistence of graph filtrations via union-find.
//!
//! One pass over the edges in filtration order produces a [`MergeTrace`]:
//! every union (with the elder-rule survivor) and every cycle-closing edge,
//! together with the component memberships at the end of each critical
//! value. PH pairs are read off the trace directly; the descriptor module
//! replays the same trace with its own survival rule.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::filtration::{FiltrationKind, FiltrationValues};
use crate::graph::{ColoredGraph, Edge};

/// A real number or `+∞`. NaN is never stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtendedReal(f64);

impl ExtendedReal {
    pub const INFINITY: ExtendedReal = ExtendedReal(f64::INFINITY);
    pub const ZERO: ExtendedReal = ExtendedReal(0.0);

    /// Panics unless `x` is finite.
    pub fn finite(x: f64) -> Self {
        assert!(x.is_finite(), "finite value expected, got {x}");
        ExtendedReal(x)
    }

    /// Accepts finite values and `+∞`.
    pub fn from_f64(x: f64) -> Option<Self> {
        (x.is_finite() || x == f64::INFINITY).then_some(ExtendedReal(x))
    }

    pub fn is_infinite(self) -> bool {
        self.0 == f64::INFINITY
    }

    pub fn value(self) -> Option<f64> {
        (!self.is_infinite()).then_some(self.0)
    }

    /// The underlying `f64`, with `+∞` as `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        self.0
    }

    /// `|a - b|` with `|∞ - ∞| = 0` and `|∞ - x| = ∞`.
    pub fn abs_diff(self, other: Self) -> Self {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => ExtendedReal::ZERO,
            (false, false) => ExtendedReal((self.0 - other.0).abs()),
            _ => ExtendedReal::INFINITY,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Eq for ExtendedReal {}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: Self) -> Self {
        ExtendedReal(self.0 + rhs.0)
    }
}

impl Add<f64> for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: f64) -> Self {
        ExtendedReal(self.0 + rhs)
    }
}

impl From<f64> for ExtendedReal {
    fn from(x: f64) -> Self {
        ExtendedReal::from_f64(x).expect("finite or +inf")
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// `(birth, death)` with `birth <= death`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PersistencePair {
    pub birth: f64,
    pub death: ExtendedReal,
}

impl PersistencePair {
    pub fn new(birth: f64, death: ExtendedReal) -> Self {
        debug_assert!(ExtendedReal::finite(birth) <= death);
        PersistencePair { birth, death }
    }

    fn sort_key(&self, other: &Self) -> Ordering {
        self.birth.total_cmp(&other.birth).then(self.death.cmp(&other.death))
    }
}

/// Sorts pairs by birth, then death.
pub fn sort_pairs(pairs: &mut [PersistencePair]) {
    pairs.sort_by(PersistencePair::sort_key);
}

/// Persistence diagram of one filtration, both dimensions, sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct PhDiagram {
    pub dim0: Vec<PersistencePair>,
    pub dim1: Vec<PersistencePair>,
}

/// Disjoint-set forest with path halving. The caller chooses which root
/// survives a union, so a root is always the representative vertex.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Attaches root `child` below root `root`.
    pub fn link(&mut self, child: usize, root: usize) {
        debug_assert!(self.parent[child] == child && self.parent[root] == root);
        self.parent[child] = root;
    }
}

/// Two components joined by an edge.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeEvent {
    pub time: f64,
    pub edge: Edge,
    /// Elder-rule representatives of the components containing `edge.0` and `edge.1`.
    pub roots: [usize; 2],
    /// Representative that survives under the elder rule.
    pub survivor: usize,
    /// Representative that dies under the elder rule.
    pub dying: usize,
    /// Index into [`MergeTrace::steps`].
    pub step: usize,
    /// Index into that step's `components`: the merged component at the end of the step.
    pub component: usize,
}

/// An edge whose endpoints were already connected: a new independent cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleEvent {
    pub time: f64,
    pub edge: Edge,
    pub step: usize,
    pub component: usize,
}

/// One critical value at which edges arrived, with the vertex sets (sorted)
/// of every component touched by those edges, as they stand at the end of it.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub time: f64,
    pub components: Vec<Vec<usize>>,
}

/// Ordered record of a union-find pass over one filtration.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeTrace {
    pub kind: FiltrationKind,
    /// Birth time of each vertex.
    pub births: Vec<f64>,
    pub merges: Vec<MergeEvent>,
    pub cycles: Vec<CycleEvent>,
    pub steps: Vec<TraceStep>,
    /// Components of the whole graph, sorted, ordered by smallest member.
    pub final_components: Vec<Vec<usize>>,
}

impl MergeTrace {
    /// The vertex set a merge or cycle event refers to.
    pub fn component(&self, step: usize, component: usize) -> &[usize] {
        &self.steps[step].components[component]
    }

    /// For every vertex, the index of its component in `final_components`.
    pub fn final_component_of(&self) -> Vec<usize> {
        let mut of = vec![0; self.births.len()];
        for (i, comp) in self.final_components.iter().enumerate() {
            for &v in comp {
                of[v] = i;
            }
        }
        of
    }
}

/// Runs the union-find pass with edges in canonical order inside each critical value.
pub fn merge_trace(g: &ColoredGraph, values: &FiltrationValues, kind: FiltrationKind) -> MergeTrace {
    merge_trace_with_order(g, values, kind, (0..g.edge_count()).collect())
}

/// As [`merge_trace`], but ties between equal edge times are broken by the
/// position of the edge index in `order` (a permutation of edge indices).
pub fn merge_trace_with_order(
    g: &ColoredGraph,
    values: &FiltrationValues,
    kind: FiltrationKind,
    mut order: Vec<usize>,
) -> MergeTrace {
    let n = g.n();
    let births: Vec<f64> = match kind {
        FiltrationKind::Vertex => values.vertex.clone(),
        FiltrationKind::Edge => vec![0.0; n],
    };
    let times = values.edge_times(kind);
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));

    // elder rule: earlier birth survives, then smaller vertex index
    let elder = |a: usize, b: usize| -> (usize, usize) {
        match births[a].total_cmp(&births[b]).then(a.cmp(&b)) {
            Ordering::Greater => (b, a),
            _ => (a, b),
        }
    };

    let mut uf = UnionFind::new(n);
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut merges = Vec::new();
    let mut cycles = Vec::new();
    let mut steps = Vec::new();

    let mut i = 0;
    while i < order.len() {
        let t = times[order[i]];
        let mut j = i;
        let first_merge = merges.len();
        let first_cycle = cycles.len();
        while j < order.len() && times[order[j]] == t {
            let (u, w) = g.edges()[order[j]];
            let (ru, rw) = (uf.find(u), uf.find(w));
            if ru == rw {
                cycles.push(CycleEvent { time: t, edge: (u, w), step: steps.len(), component: 0 });
            } else {
                let (survivor, dying) = elder(ru, rw);
                uf.link(dying, survivor);
                let mut moved = std::mem::take(&mut members[dying]);
                if moved.len() > members[survivor].len() {
                    std::mem::swap(&mut moved, &mut members[survivor]);
                }
                members[survivor].extend(moved);
                merges.push(MergeEvent {
                    time: t,
                    edge: (u, w),
                    roots: [ru, rw],
                    survivor,
                    dying,
                    step: steps.len(),
                    component: 0,
                });
            }
            j += 1;
        }

        let mut roots: Vec<usize> = order[i..j].iter().map(|&e| uf.find(g.edges()[e].0)).collect();
        roots.sort_unstable();
        roots.dedup();
        let components: Vec<Vec<usize>> = roots
            .iter()
            .map(|&r| {
                let mut c = members[r].clone();
                c.sort_unstable();
                c
            })
            .collect();
        let slot = |uf: &mut UnionFind, v: usize| roots.binary_search(&uf.find(v)).expect("touched root");
        for m in &mut merges[first_merge..] {
            m.component = slot(&mut uf, m.edge.0);
        }
        for c in &mut cycles[first_cycle..] {
            c.component = slot(&mut uf, c.edge.0);
        }
        steps.push(TraceStep { time: t, components });
        i = j;
    }

    let mut final_components: Vec<Vec<usize>> = (0..n)
        .filter(|&v| uf.find(v) == v)
        .map(|r| {
            let mut c = members[r].clone();
            c.sort_unstable();
            c
        })
        .collect();
    final_components.sort_unstable_by_key(|c| c[0]);

    MergeTrace { kind, births, merges, cycles, steps, final_components }
}

/// One pair per vertex under the elder rule, plus the trace that produced them.
pub fn compute_ph0(
    g: &ColoredGraph,
    values: &FiltrationValues,
    kind: FiltrationKind,
) -> (Vec<PersistencePair>, MergeTrace) {
    let trace = merge_trace(g, values, kind);
    (ph0_from_trace(&trace), trace)
}

pub fn ph0_from_trace(trace: &MergeTrace) -> Vec<PersistencePair> {
    let mut death = vec![ExtendedReal::INFINITY; trace.births.len()];
    for m in &trace.merges {
        death[m.dying] = ExtendedReal::finite(m.time);
    }
    let mut pairs: Vec<PersistencePair> =
        trace.births.iter().zip(death).map(|(&b, d)| PersistencePair::new(b, d)).collect();
    sort_pairs(&mut pairs);
    pairs
}

/// `(t, ∞)` for every edge closing a cycle, with the cycle events.
pub fn compute_ph1(
    g: &ColoredGraph,
    values: &FiltrationValues,
    kind: FiltrationKind,
) -> (Vec<PersistencePair>, Vec<CycleEvent>) {
    let trace = merge_trace(g, values, kind);
    (ph1_from_trace(&trace), trace.cycles)
}

pub fn ph1_from_trace(trace: &MergeTrace) -> Vec<PersistencePair> {
    let mut pairs: Vec<PersistencePair> =
        trace.cycles.iter().map(|c| PersistencePair::new(c.time, ExtendedReal::INFINITY)).collect();
    sort_pairs(&mut pairs);
    pairs
}

/// Both dimensions of one filtration.
pub fn compute_ph(g: &ColoredGraph, values: &FiltrationValues, kind: FiltrationKind) -> PhDiagram {
    let trace = merge_trace(g, values, kind);
    PhDiagram { dim0: ph0_from_trace(&trace), dim1: ph1_from_trace(&trace) }
}
