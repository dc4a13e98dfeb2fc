//! PH, RePHINE, SpectRe and LS diagrams built from a union-find trace.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::filtration::{induce, ColorFiltrationSpec, FiltrationKind, FiltrationValues};
use crate::graph::{ColoredGraph, Edge};
use crate::persistence::{merge_trace, ExtendedReal, MergeTrace};
use crate::spectral::{spectrum_for_event, SpectrumPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagramKind {
    Ph,
    Rephine,
    Spectre,
    Ls,
}

impl DiagramKind {
    pub fn name(self) -> &'static str {
        match self {
            DiagramKind::Ph => "PH",
            DiagramKind::Rephine => "RePHINE",
            DiagramKind::Spectre => "SpectRe",
            DiagramKind::Ls => "LS",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "PH" => Some(DiagramKind::Ph),
            "RePHINE" => Some(DiagramKind::Rephine),
            "SpectRe" => Some(DiagramKind::Spectre),
            "LS" => Some(DiagramKind::Ls),
            _ => None,
        }
    }

    fn has_alpha_gamma(self) -> bool {
        matches!(self, DiagramKind::Rephine | DiagramKind::Spectre)
    }

    fn has_rho(self) -> bool {
        matches!(self, DiagramKind::Spectre | DiagramKind::Ls)
    }
}

impl fmt::Display for DiagramKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Spectral component of a tuple.
#[derive(Clone, Debug, PartialEq)]
pub enum Rho {
    /// Kind without spectra.
    None,
    /// Ascending non-zero eigenvalues.
    Values(Vec<f64>),
    /// Not evaluated under a scheduled policy.
    Skipped,
}

impl Rho {
    pub fn values(&self) -> &[f64] {
        match self {
            Rho::Values(v) => v,
            _ => &[],
        }
    }

    fn canonical_cmp(&self, other: &Rho) -> Ordering {
        let rank = |r: &Rho| match r {
            Rho::None => 0,
            Rho::Values(_) => 1,
            Rho::Skipped => 2,
        };
        match (self, other) {
            (Rho::Values(a), Rho::Values(b)) => {
                for (x, y) in a.iter().zip(b) {
                    match x.total_cmp(y) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                a.len().cmp(&b.len())
            }
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

/// What produced a tuple; kept for tracing, ignored by comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Vertex(usize),
    Cycle(Edge),
    Unknown,
}

/// One diagram point. Fields a kind does not use are zero / [`Rho::None`].
#[derive(Clone, Debug, PartialEq)]
pub struct Tuple {
    pub birth: f64,
    pub death: ExtendedReal,
    pub alpha: f64,
    pub gamma: f64,
    pub rho: Rho,
    pub origin: Origin,
    /// Vertex without neighbours; `gamma` holds the sentinel 0.
    pub isolated: bool,
}

impl Tuple {
    pub fn new(birth: f64, death: ExtendedReal, alpha: f64, gamma: f64, rho: Rho) -> Self {
        Tuple { birth, death, alpha, gamma, rho, origin: Origin::Unknown, isolated: false }
    }

    /// Lexicographic on `(b, d, α, γ, ρ)`, with ∞ greatest.
    pub fn canonical_cmp(&self, other: &Tuple) -> Ordering {
        self.birth
            .total_cmp(&other.birth)
            .then(self.death.cmp(&other.death))
            .then(self.alpha.total_cmp(&other.alpha))
            .then(self.gamma.total_cmp(&other.gamma))
            .then_with(|| self.rho.canonical_cmp(&other.rho))
    }

    fn approx_eq(&self, other: &Tuple, tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= tol;
        let deaths = match (self.death.value(), other.death.value()) {
            (Some(a), Some(b)) => close(a, b),
            (None, None) => true,
            _ => false,
        };
        let rhos = match (&self.rho, &other.rho) {
            (Rho::Values(a), Rho::Values(b)) => a.len() == b.len() && a.iter().zip(b).all(|(x, y)| close(*x, *y)),
            (a, b) => std::mem::discriminant(a) == std::mem::discriminant(b),
        };
        close(self.birth, other.birth)
            && deaths
            && close(self.alpha, other.alpha)
            && close(self.gamma, other.gamma)
            && rhos
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiagramMeta {
    /// Shift added to edge values to make them positive.
    pub edge_shift: f64,
    /// Number of tuples carrying the isolated-vertex sentinel.
    pub isolated: usize,
    /// Number of tuples whose spectrum was skipped by the schedule.
    pub skipped: usize,
}

impl DiagramMeta {
    fn is_default(&self) -> bool {
        *self == DiagramMeta::default()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagram {
    pub kind: DiagramKind,
    pub dim0: Vec<Tuple>,
    pub dim1: Vec<Tuple>,
    pub meta: DiagramMeta,
}

impl Diagram {
    /// Builds a diagram in canonical order.
    pub fn new(kind: DiagramKind, dim0: Vec<Tuple>, dim1: Vec<Tuple>, meta: DiagramMeta) -> Self {
        canonicalize(Diagram { kind, dim0, dim1, meta })
    }

    pub fn len(&self) -> usize {
        self.dim0.len() + self.dim1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops components to reach a coarser kind: SpectRe to RePHINE or LS,
    /// RePHINE or LS to PH-style `(b, d)`.
    pub fn project(&self, kind: DiagramKind) -> Result<Diagram> {
        let allowed = match (self.kind, kind) {
            (a, b) if a == b => true,
            (DiagramKind::Spectre, _) => true,
            (_, DiagramKind::Ph) => true,
            _ => false,
        };
        if !allowed {
            return Err(Error::KindMismatch(self.kind.to_string(), kind.to_string()));
        }
        let map = |t: &Tuple| {
            let mut t = t.clone();
            if !kind.has_alpha_gamma() {
                t.alpha = 0.0;
                t.gamma = 0.0;
                t.isolated = false;
            }
            if !kind.has_rho() {
                t.rho = Rho::None;
            }
            t
        };
        let mut meta = self.meta.clone();
        if !kind.has_alpha_gamma() {
            meta.isolated = 0;
        }
        if !kind.has_rho() {
            meta.skipped = 0;
        }
        Ok(Diagram::new(kind, self.dim0.iter().map(map).collect(), self.dim1.iter().map(map).collect(), meta))
    }
}

/// Sorts both dimensions by [`Tuple::canonical_cmp`].
pub fn canonicalize(mut d: Diagram) -> Diagram {
    d.dim0.sort_by(Tuple::canonical_cmp);
    d.dim1.sort_by(Tuple::canonical_cmp);
    d
}

/// Equality of canonical forms, numbers compared within `tol`.
pub fn multiset_equal(a: &Diagram, b: &Diagram, tol: f64) -> Result<bool> {
    if a.kind != b.kind {
        return Err(Error::KindMismatch(a.kind.to_string(), b.kind.to_string()));
    }
    let (a, b) = (canonicalize(a.clone()), canonicalize(b.clone()));
    let same = |x: &[Tuple], y: &[Tuple]| x.len() == y.len() && x.iter().zip(y).all(|(s, t)| s.approx_eq(t, tol));
    Ok(same(&a.dim0, &b.dim0) && same(&a.dim1, &b.dim1))
}

/// Who dies when `α` and `γ` both tie.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    LowestIndexDies,
    HighestIndexDies,
}

fn gammas(g: &ColoredGraph, values: &FiltrationValues) -> Vec<Option<f64>> {
    let mut gamma: Vec<Option<f64>> = vec![None; g.n()];
    for (i, &(u, w)) in g.edges().iter().enumerate() {
        let x = values.edge[i];
        for v in [u, w] {
            gamma[v] = Some(gamma[v].map_or(x, |y: f64| y.min(x)));
        }
    }
    gamma
}

/// Per-vertex death time and the trace event that killed it, under the
/// α/γ kill rule replayed over the union-find merges.
struct Deaths {
    death: Vec<ExtendedReal>,
    /// `(step, component)` of the killing merge.
    event: Vec<Option<(usize, usize)>>,
}

fn replay_deaths(trace: &MergeTrace, alpha: &[f64], gamma: &[f64], tie: TieBreak) -> Deaths {
    let n = alpha.len();
    let mut death = vec![ExtendedReal::INFINITY; n];
    let mut event = vec![None; n];
    // union-find root -> vertex currently representing that component
    let mut rep: Vec<usize> = (0..n).collect();
    for m in &trace.merges {
        let (a, b) = (rep[m.roots[0]], rep[m.roots[1]]);
        let a_dies = match alpha[a].total_cmp(&alpha[b]) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => match gamma[a].total_cmp(&gamma[b]) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => match tie {
                    TieBreak::LowestIndexDies => a < b,
                    TieBreak::HighestIndexDies => a > b,
                },
            },
        };
        let (dies, lives) = if a_dies { (a, b) } else { (b, a) };
        death[dies] = ExtendedReal::finite(m.time);
        event[dies] = Some((m.step, m.component));
        rep[m.survivor] = lives;
    }
    Deaths { death, event }
}

fn check_edge_values(values: &FiltrationValues) -> Result<()> {
    if let Some(x) = values.edge.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::InvalidFiltration(format!("edge value {x} is not positive; shift it first")));
    }
    Ok(())
}

/// RePHINE and, when `policy` is given, SpectRe tuples over a prepared trace.
fn build(
    g: &ColoredGraph,
    values: &FiltrationValues,
    trace: &MergeTrace,
    tie: TieBreak,
    policy: Option<&SpectrumPolicy>,
) -> Result<Diagram> {
    check_edge_values(values)?;
    if let Some(p) = policy {
        p.validate()?;
    }
    let n = g.n();
    let gamma_opt = gammas(g, values);
    let gamma: Vec<f64> = gamma_opt.iter().map(|x| x.unwrap_or(0.0)).collect();
    let alpha = &values.vertex;
    let deaths = replay_deaths(trace, alpha, &gamma, tie);

    let total_events = trace.steps.len() + 1;
    let final_step = trace.steps.len();
    let final_of = trace.final_component_of();
    let mut cache: HashMap<(usize, usize), Rho> = HashMap::new();
    let mut rho_at = |step: usize, comp: usize| -> Result<Rho> {
        let Some(policy) = policy else { return Ok(Rho::None) };
        if let Some(r) = cache.get(&(step, comp)) {
            return Ok(r.clone());
        }
        let (vertices, local) = if step == final_step {
            let vs = &trace.final_components[comp];
            (vs.len(), g.restricted(vs, |_| true))
        } else {
            let t = trace.steps[step].time;
            let vs = trace.component(step, comp);
            (vs.len(), g.restricted(vs, |e| values.edge[e] <= t))
        };
        let all: Vec<usize> = (0..vertices).collect();
        let r = match spectrum_for_event(&local, &all, policy, step, total_events)? {
            Some(s) => Rho::Values(s.values),
            None => Rho::Skipped,
        };
        cache.insert((step, comp), r.clone());
        Ok(r)
    };

    let mut dim0 = Vec::with_capacity(n);
    for v in 0..n {
        let (step, comp) = deaths.event[v].unwrap_or((final_step, final_of[v]));
        let mut t = Tuple::new(0.0, deaths.death[v], alpha[v], gamma[v], rho_at(step, comp)?);
        t.origin = Origin::Vertex(v);
        t.isolated = gamma_opt[v].is_none();
        dim0.push(t);
    }
    let mut dim1 = Vec::with_capacity(trace.cycles.len());
    for c in &trace.cycles {
        let mut t = Tuple::new(1.0, ExtendedReal::finite(c.time), 0.0, 0.0, rho_at(c.step, c.component)?);
        t.origin = Origin::Cycle(c.edge);
        dim1.push(t);
    }
    let meta = DiagramMeta {
        edge_shift: values.edge_shift,
        isolated: dim0.iter().filter(|t| t.isolated).count(),
        skipped: dim0.iter().chain(&dim1).filter(|t| t.rho == Rho::Skipped).count(),
    };
    let kind = if policy.is_some() { DiagramKind::Spectre } else { DiagramKind::Rephine };
    Ok(Diagram::new(kind, dim0, dim1, meta))
}

/// RePHINE diagram over a given edge-filtration trace.
pub fn rephine_from_trace(
    g: &ColoredGraph,
    values: &FiltrationValues,
    trace: &MergeTrace,
    tie: TieBreak,
) -> Result<Diagram> {
    build(g, values, trace, tie, None)
}

/// SpectRe diagram over a given edge-filtration trace.
pub fn spectre_from_trace(
    g: &ColoredGraph,
    values: &FiltrationValues,
    trace: &MergeTrace,
    policy: &SpectrumPolicy,
    tie: TieBreak,
) -> Result<Diagram> {
    build(g, values, trace, tie, Some(policy))
}

pub fn rephine_from_values(g: &ColoredGraph, values: &FiltrationValues) -> Result<Diagram> {
    rephine_from_trace(g, values, &merge_trace(g, values, FiltrationKind::Edge), TieBreak::default())
}

pub fn spectre_from_values(g: &ColoredGraph, values: &FiltrationValues, policy: &SpectrumPolicy) -> Result<Diagram> {
    spectre_from_trace(g, values, &merge_trace(g, values, FiltrationKind::Edge), policy, TieBreak::default())
}

pub fn ls_from_values(g: &ColoredGraph, values: &FiltrationValues, policy: &SpectrumPolicy) -> Result<Diagram> {
    spectre_from_values(g, values, policy)?.project(DiagramKind::Ls)
}

pub fn compute_rephine(g: &ColoredGraph, spec: &ColorFiltrationSpec) -> Result<Diagram> {
    rephine_from_values(g, &induce(spec, g)?)
}

pub fn compute_spectre(g: &ColoredGraph, spec: &ColorFiltrationSpec, policy: &SpectrumPolicy) -> Result<Diagram> {
    spectre_from_values(g, &induce(spec, g)?, policy)
}

pub fn compute_ls(g: &ColoredGraph, spec: &ColorFiltrationSpec, policy: &SpectrumPolicy) -> Result<Diagram> {
    ls_from_values(g, &induce(spec, g)?, policy)
}

/// Plain persistence pairs `(b, d)` of either filtration kind, as a diagram.
pub fn ph_diagram(g: &ColoredGraph, values: &FiltrationValues, kind: FiltrationKind) -> Diagram {
    let ph = crate::persistence::compute_ph(g, values, kind);
    let to_tuple = |p: &crate::persistence::PersistencePair| Tuple::new(p.birth, p.death, 0.0, 0.0, Rho::None);
    let meta = DiagramMeta { edge_shift: values.edge_shift, ..DiagramMeta::default() };
    Diagram::new(DiagramKind::Ph, ph.dim0.iter().map(to_tuple).collect(), ph.dim1.iter().map(to_tuple).collect(), meta)
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn tuple_to_json(kind: DiagramKind, t: &Tuple) -> Value {
    let death = match t.death.value() {
        Some(d) => num(d),
        None => Value::String("inf".into()),
    };
    let mut row = vec![num(t.birth), death];
    if kind.has_alpha_gamma() {
        row.push(num(t.alpha));
        row.push(num(t.gamma));
    }
    if kind.has_rho() {
        row.push(match &t.rho {
            Rho::Values(v) => Value::Array(v.iter().map(|&x| num(x)).collect()),
            Rho::Skipped => Value::String("skipped".into()),
            Rho::None => Value::Array(Vec::new()),
        });
    }
    Value::Array(row)
}

/// Canonical JSON: `{"kind":..,"dim0":[..],"dim1":[..]}` plus a `meta`
/// object when any metadata is non-default.
pub fn diagram_to_json(d: &Diagram) -> String {
    let d = canonicalize(d.clone());
    let rows = |ts: &[Tuple]| Value::Array(ts.iter().map(|t| tuple_to_json(d.kind, t)).collect()).to_string();
    let meta = if d.meta.is_default() {
        String::new()
    } else {
        let m = json!({ "edge_shift": num(d.meta.edge_shift), "isolated": d.meta.isolated, "skipped": d.meta.skipped });
        format!(",\"meta\":{m}")
    };
    format!("{{\"kind\":\"{}\",\"dim0\":{},\"dim1\":{}{meta}}}", d.kind.name(), rows(&d.dim0), rows(&d.dim1))
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidDiagram(msg.into())
}

fn finite_number(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| bad(format!("{what} must be a finite number")))
}

fn tuple_from_json(kind: DiagramKind, v: &Value) -> Result<Tuple> {
    let row = v.as_array().ok_or_else(|| bad("tuple must be an array"))?;
    let width = 2 + 2 * kind.has_alpha_gamma() as usize + kind.has_rho() as usize;
    if row.len() != width {
        return Err(bad(format!("{} tuple needs {width} entries, got {}", kind.name(), row.len())));
    }
    let birth = finite_number(&row[0], "birth")?;
    let death = match &row[1] {
        Value::String(s) if s == "inf" => ExtendedReal::INFINITY,
        other => ExtendedReal::finite(finite_number(other, "death")?),
    };
    let (alpha, gamma) = if kind.has_alpha_gamma() {
        (finite_number(&row[2], "alpha")?, finite_number(&row[3], "gamma")?)
    } else {
        (0.0, 0.0)
    };
    let rho = if kind.has_rho() {
        match &row[width - 1] {
            Value::String(s) if s == "skipped" => Rho::Skipped,
            Value::Array(xs) => {
                let vals = xs.iter().map(|x| finite_number(x, "eigenvalue")).collect::<Result<Vec<f64>>>()?;
                if vals.windows(2).any(|w| w[0] > w[1]) {
                    return Err(bad("spectrum must be sorted ascending"));
                }
                Rho::Values(vals)
            }
            _ => return Err(bad("spectrum must be an array or \"skipped\"")),
        }
    } else {
        Rho::None
    };
    Ok(Tuple::new(birth, death, alpha, gamma, rho))
}

/// Parses diagram JSON; tuples are re-sorted into canonical order.
pub fn parse_diagram(bytes: &[u8]) -> Result<Diagram> {
    let root: Value = serde_json::from_slice(bytes)?;
    let obj = root.as_object().ok_or_else(|| bad("diagram must be an object"))?;
    let kind_name = obj.get("kind").and_then(Value::as_str).ok_or_else(|| bad("missing string field \"kind\""))?;
    let kind = DiagramKind::from_name(kind_name).ok_or_else(|| bad(format!("unknown kind {kind_name:?}")))?;
    let dim = |key: &str| -> Result<Vec<Tuple>> {
        let rows = obj.get(key).and_then(Value::as_array).ok_or_else(|| bad(format!("missing array field {key:?}")))?;
        rows.iter().map(|r| tuple_from_json(kind, r)).collect()
    };
    let (dim0, dim1) = (dim("dim0")?, dim("dim1")?);
    let mut meta = DiagramMeta::default();
    if let Some(m) = obj.get("meta") {
        let m = m.as_object().ok_or_else(|| bad("meta must be an object"))?;
        let count = |key: &str| -> Result<usize> {
            match m.get(key) {
                None => Ok(0),
                Some(v) => v.as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("meta.{key} must be a count"))),
            }
        };
        meta.edge_shift = match m.get("edge_shift") {
            None => 0.0,
            Some(v) => finite_number(v, "meta.edge_shift")?,
        };
        meta.isolated = count("isolated")?;
        meta.skipped = count("skipped")?;
    }
    for key in obj.keys() {
        if !matches!(key.as_str(), "kind" | "dim0" | "dim1" | "meta") {
            return Err(bad(format!("unexpected field {key:?}")));
        }
    }
    Ok(Diagram::new(kind, dim0, dim1, meta))
}
