//! Pairwise discrimination and stability sampling harnesses.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::descriptors::{multiset_equal, ph_diagram, rephine_from_values, spectre_from_values, Diagram, DiagramKind};
use crate::error::{Error, Result};
use crate::filtration::{degree_filtration, induce, ColorFiltrationSpec, FiltrationKind, FiltrationValues};
use crate::fixtures;
use crate::graph::{ColorId, ColoredGraph};
use crate::metrics::{d_b_r, d_b_spec_r, filtration_sup_distance};
use crate::persistence::ExtendedReal;
use crate::spectral::SpectrumPolicy;

/// Smallest edge value kept after a perturbation.
pub const EDGE_FLOOR: f64 = 1e-6;

/// Descriptor computed for each graph of a corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Descriptor {
    /// PH of the vertex filtration.
    Ph0,
    /// PH of the edge filtration.
    Ph1,
    Rephine,
    Spectre,
    Ls,
}

impl Descriptor {
    pub const ALL: [Descriptor; 5] =
        [Descriptor::Ph0, Descriptor::Ph1, Descriptor::Rephine, Descriptor::Spectre, Descriptor::Ls];

    pub fn name(self) -> &'static str {
        match self {
            Descriptor::Ph0 => "ph0",
            Descriptor::Ph1 => "ph1",
            Descriptor::Rephine => "rephine",
            Descriptor::Spectre => "spectre",
            Descriptor::Ls => "ls",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.name() == s)
    }
}

/// Where filtration values come from.
#[derive(Clone, Debug, PartialEq)]
pub enum FiltrationSource {
    /// Degree on vertices, augmented Forman–Ricci curvature on edges.
    DegreeForman,
    Spec(ColorFiltrationSpec),
}

/// Realizes `source` on every graph. Forman values are shifted by one common
/// amount so edge times stay comparable across the corpus.
pub fn corpus_values(graphs: &[&ColoredGraph], source: &FiltrationSource) -> Result<Vec<FiltrationValues>> {
    match source {
        FiltrationSource::Spec(spec) => graphs.iter().map(|g| induce(spec, g)).collect(),
        FiltrationSource::DegreeForman => {
            let raw: Vec<FiltrationValues> = graphs.iter().map(|g| degree_filtration(g)).collect();
            let min = raw.iter().flat_map(|v| v.edge.iter().copied()).fold(f64::INFINITY, f64::min);
            let shift = if min.is_finite() && min <= 0.0 { 1.0 - min } else { 0.0 };
            Ok(raw.into_iter().map(|v| v.shift_edges(shift)).collect())
        }
    }
}

/// Canonical diagram of one descriptor.
pub fn descriptor_diagram(
    g: &ColoredGraph,
    values: &FiltrationValues,
    descriptor: Descriptor,
    policy: &SpectrumPolicy,
) -> Result<Diagram> {
    match descriptor {
        Descriptor::Ph0 => Ok(ph_diagram(g, values, FiltrationKind::Vertex)),
        Descriptor::Ph1 => Ok(ph_diagram(g, values, FiltrationKind::Edge)),
        Descriptor::Rephine => rephine_from_values(g, values),
        Descriptor::Spectre => spectre_from_values(g, values, policy),
        Descriptor::Ls => spectre_from_values(g, values, policy)?.project(DiagramKind::Ls),
    }
}

/// A named list of graphs.
#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    pub name: String,
    pub graphs: Vec<(String, ColoredGraph)>,
}

impl Corpus {
    pub fn new(name: impl Into<String>, graphs: Vec<(String, ColoredGraph)>) -> Self {
        Corpus { name: name.into(), graphs }
    }

    fn refs(&self) -> Vec<&ColoredGraph> {
        self.graphs.iter().map(|(_, g)| g).collect()
    }
}

/// Built-in corpora: `star-path`, `swapped-stars`, `rook-shrikhande`.
pub fn builtin_corpus(name: &str) -> Option<Corpus> {
    let pair = |a: (&str, ColoredGraph), b: (&str, ColoredGraph)| {
        Corpus::new(name, vec![(a.0.to_string(), a.1), (b.0.to_string(), b.1)])
    };
    match name {
        "star-path" => Some(pair(("star", fixtures::star_mono()), ("path", fixtures::path_mono()))),
        "swapped-stars" => {
            Some(pair(("red-center", fixtures::star_red_center()), ("blue-center", fixtures::star_blue_center())))
        }
        "rook-shrikhande" => Some(pair(("rook4x4", fixtures::rook_4x4()), ("shrikhande", fixtures::shrikhande()))),
        _ => None,
    }
}

/// Random colored graphs with sizes in `sizes` and edge probability `p`.
pub fn random_corpus(
    count: usize,
    sizes: std::ops::RangeInclusive<usize>,
    p: f64,
    colors: &[&str],
    seed: u64,
) -> Result<Corpus> {
    let colors: Vec<ColorId> = colors.iter().map(|&c| ColorId::from(c)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graphs = (0..count)
        .map(|i| {
            let n = rng.random_range(sizes.clone());
            crate::graph::random_colored_graph_with(n, p, &colors, &mut rng).map(|g| (format!("random-{i}"), g))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Corpus::new(format!("random-{seed}"), graphs))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairVerdict {
    pub pair_id: usize,
    pub graph_a: usize,
    pub graph_b: usize,
    pub separated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminationReport {
    pub descriptor: Descriptor,
    pub corpus: String,
    pub graph_names: Vec<String>,
    pub pairs: usize,
    pub separated: usize,
    pub accuracy: f64,
    pub verdicts: Vec<PairVerdict>,
}

impl DiscriminationReport {
    pub fn separated_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.verdicts.iter().filter(|v| v.separated).map(|v| (v.graph_a, v.graph_b)).collect()
    }
}

fn verdicts_from(diagrams: &[Diagram], tol: f64) -> Result<Vec<PairVerdict>> {
    let mut out = Vec::new();
    for a in 0..diagrams.len() {
        for b in a + 1..diagrams.len() {
            let separated = !multiset_equal(&diagrams[a], &diagrams[b], tol)?;
            out.push(PairVerdict { pair_id: out.len(), graph_a: a, graph_b: b, separated });
        }
    }
    Ok(out)
}

fn report(corpus: &Corpus, descriptor: Descriptor, verdicts: Vec<PairVerdict>) -> DiscriminationReport {
    let pairs = verdicts.len();
    let separated = verdicts.iter().filter(|v| v.separated).count();
    DiscriminationReport {
        descriptor,
        corpus: corpus.name.clone(),
        graph_names: corpus.graphs.iter().map(|(n, _)| n.clone()).collect(),
        pairs,
        separated,
        accuracy: if pairs == 0 { 0.0 } else { separated as f64 / pairs as f64 },
        verdicts,
    }
}

/// Fraction of unordered graph pairs whose canonical diagrams differ.
pub fn discriminate(
    corpus: &Corpus,
    descriptor: Descriptor,
    source: &FiltrationSource,
    policy: &SpectrumPolicy,
    tol: f64,
) -> Result<DiscriminationReport> {
    let refs = corpus.refs();
    let values = corpus_values(&refs, source)?;
    let diagrams = refs
        .iter()
        .zip(&values)
        .map(|(g, v)| descriptor_diagram(g, v, descriptor, policy))
        .collect::<Result<Vec<_>>>()?;
    Ok(report(corpus, descriptor, verdicts_from(&diagrams, tol)?))
}

/// `pair_id,graph_a,graph_b,descriptor,separated` rows for every report.
pub fn reports_csv(reports: &[DiscriminationReport]) -> String {
    let mut out = String::from("pair_id,graph_a,graph_b,descriptor,separated\n");
    for r in reports {
        for v in &r.verdicts {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                v.pair_id,
                r.graph_names[v.graph_a],
                r.graph_names[v.graph_b],
                r.descriptor.name(),
                v.separated
            ));
        }
    }
    out
}

/// Accuracy per descriptor as JSON.
pub fn reports_summary_json(reports: &[DiscriminationReport]) -> String {
    let rows: Vec<_> = reports
        .iter()
        .map(|r| json!({"descriptor": r.descriptor.name(), "pairs": r.pairs, "separated": r.separated, "accuracy": r.accuracy}))
        .collect();
    let corpus = reports.first().map(|r| r.corpus.clone()).unwrap_or_default();
    json!({"corpus": corpus, "graphs": reports.first().map_or(0, |r| r.graph_names.len()), "descriptors": rows})
        .to_string()
}

/// Outcome of [`expressivity_ordering_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct OrderingCheck {
    pub holds: bool,
    /// A pair separated by `.1` but not by SpectRe.
    pub witness: Option<((usize, usize), Descriptor)>,
    pub rephine: DiscriminationReport,
    pub spectre: DiscriminationReport,
    pub ls: DiscriminationReport,
}

/// Checks that every pair RePHINE or LS separates is also separated by SpectRe.
pub fn expressivity_ordering_check(
    corpus: &Corpus,
    source: &FiltrationSource,
    policy: &SpectrumPolicy,
    tol: f64,
) -> Result<OrderingCheck> {
    let refs = corpus.refs();
    let values = corpus_values(&refs, source)?;
    let mut rephine = Vec::new();
    let mut spectre = Vec::new();
    let mut ls = Vec::new();
    for (g, v) in refs.iter().zip(&values) {
        rephine.push(rephine_from_values(g, v)?);
        let s = spectre_from_values(g, v, policy)?;
        ls.push(s.project(DiagramKind::Ls)?);
        spectre.push(s);
    }
    let rephine = report(corpus, Descriptor::Rephine, verdicts_from(&rephine, tol)?);
    let spectre = report(corpus, Descriptor::Spectre, verdicts_from(&spectre, tol)?);
    let ls = report(corpus, Descriptor::Ls, verdicts_from(&ls, tol)?);
    let strong = spectre.separated_pairs();
    let witness = [(&rephine, Descriptor::Rephine), (&ls, Descriptor::Ls)]
        .into_iter()
        .find_map(|(r, d)| r.separated_pairs().into_iter().find(|p| !strong.contains(p)).map(|p| (p, d)));
    Ok(OrderingCheck { holds: witness.is_none(), witness, rephine, spectre, ls })
}

/// Descriptor whose distance is compared with the stability bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityDescriptor {
    Rephine,
    Spectre,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilitySample {
    pub graph: ColoredGraph,
    pub f: ColorFiltrationSpec,
    pub g: ColorFiltrationSpec,
    pub descriptor: StabilityDescriptor,
    pub distance: ExtendedReal,
    /// `3‖f_e − g_e‖∞ + ‖f_v − g_v‖∞`.
    pub bound: f64,
    pub holds: bool,
    /// `f` is injective and `g` lies within half its minimum gaps.
    pub local: bool,
}

/// True when `f` is injective and `g` moves every value by less than half
/// of `f`'s minimum gap (vertex and edge values separately).
pub fn within_injectivity_cell(f: &ColorFiltrationSpec, g: &ColorFiltrationSpec) -> Result<bool> {
    let (dv, de) = filtration_sup_distance(f, g)?;
    let (gv, ge) = f.min_gaps();
    Ok(f.is_injective() && dv < gv / 2.0 && de < ge / 2.0)
}

/// Adds independent `U(-scale, scale)` noise to every value, keeping edge
/// values at least [`EDGE_FLOOR`].
pub fn perturb(f: &ColorFiltrationSpec, scale: f64, rng: &mut impl Rng) -> Result<ColorFiltrationSpec> {
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(Error::InvalidFiltration(format!("perturbation scale {scale} must be finite and >= 0")));
    }
    let mut noise = |x: f64| if scale == 0.0 { x } else { x + rng.random_range(-scale..scale) };
    let vertex: Vec<f64> = f.vertex_entries().map(|(_, x)| noise(x)).collect();
    let edge: Vec<f64> = f.edge_entries().map(|(_, x)| noise(x).max(EDGE_FLOOR)).collect();
    let (mut vi, mut ei) = (vertex.into_iter(), edge.into_iter());
    f.map_values(|_| vi.next().expect("same length"), |_| ei.next().expect("same length"))
}

/// Distance between the diagrams of `f` and `g` on `graph`, with the bound.
pub fn stability_pair(
    graph: &ColoredGraph,
    f: &ColorFiltrationSpec,
    g: &ColorFiltrationSpec,
    descriptor: StabilityDescriptor,
) -> Result<StabilitySample> {
    let (dv, de) = filtration_sup_distance(f, g)?;
    let bound = 3.0 * de + dv;
    let (vf, vg) = (induce(f, graph)?, induce(g, graph)?);
    let distance = match descriptor {
        StabilityDescriptor::Rephine => d_b_r(&rephine_from_values(graph, &vf)?, &rephine_from_values(graph, &vg)?)?,
        StabilityDescriptor::Spectre => {
            let p = SpectrumPolicy::full();
            d_b_spec_r(&spectre_from_values(graph, &vf, &p)?, &spectre_from_values(graph, &vg, &p)?)?
        }
    };
    Ok(StabilitySample {
        graph: graph.clone(),
        f: f.clone(),
        g: g.clone(),
        descriptor,
        distance,
        bound,
        holds: distance <= ExtendedReal::finite(bound + 1e-9),
        local: within_injectivity_cell(f, g)?,
    })
}

/// Draws a perturbation of `f` and measures the descriptor distance against
/// the stability bound. SpectRe sampling requires an injective `f`.
pub fn stability_sample(
    graph: &ColoredGraph,
    f: &ColorFiltrationSpec,
    perturb_scale: f64,
    descriptor: StabilityDescriptor,
    seed: u64,
) -> Result<StabilitySample> {
    if descriptor == StabilityDescriptor::Spectre && !f.is_injective() {
        return Err(Error::NotInjective);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = perturb(f, perturb_scale, &mut rng)?;
    stability_pair(graph, f, &g, descriptor)
}

/// A spec over every color of `colors` (and every unordered pair) with
/// values drawn from `vertex` and `edge` ranges. With `grid`, values are
/// multiples of 0.5 so that ties occur.
pub fn random_spec(
    colors: &[ColorId],
    vertex: std::ops::Range<f64>,
    edge: std::ops::Range<f64>,
    grid: bool,
    rng: &mut impl Rng,
) -> Result<ColorFiltrationSpec> {
    let mut draw = |r: &std::ops::Range<f64>| {
        let x = rng.random_range(r.clone());
        if grid {
            ((x * 2.0).round() / 2.0).max(r.start.max(0.5))
        } else {
            x
        }
    };
    let mut sorted: Vec<&ColorId> = colors.iter().collect();
    sorted.sort();
    sorted.dedup();
    let fv: Vec<(ColorId, f64)> = sorted.iter().map(|&c| (c.clone(), draw(&vertex))).collect();
    let mut fe = Vec::new();
    for (i, &a) in sorted.iter().enumerate() {
        for &b in &sorted[i..] {
            fe.push(((a.clone(), b.clone()), draw(&edge)));
        }
    }
    ColorFiltrationSpec::new(fv, fe)
}
