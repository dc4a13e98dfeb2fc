//! Seeded property suites with replayable failing instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bench::{perturb, random_spec, stability_pair, StabilityDescriptor};
use crate::descriptors::{compute_rephine, compute_spectre, diagram_to_json, multiset_equal, Diagram};
use crate::error::{Error, Result};
use crate::filtration::{filtration_to_json, parse_filtration, ColorFiltrationSpec};
use crate::graph::{
    connected_components, graph_to_json, parse_graph, permute, random_colored_graph_with, ColorId, ColoredGraph,
    VertexPermutation,
};
use crate::metrics::{d_b_r, d_b_spec_r};
use crate::persistence::ExtendedReal;
use crate::spectral::{delta1_nonzero_spectrum, nonzero_laplacian_spectrum, SpectrumPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    LaplacianDuality,
    MetricAxioms,
    Stability,
    Isomorphism,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::LaplacianDuality, Suite::MetricAxioms, Suite::Stability, Suite::Isomorphism];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LaplacianDuality => "lemma_b1",
            Suite::MetricAxioms => "metric_axioms",
            Suite::Stability => "stability",
            Suite::Isomorphism => "isomorphism",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// One generated input of a suite; serializes to the replay format.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub suite: Suite,
    pub seed: u64,
    pub graph: ColoredGraph,
    pub filtrations: Vec<ColorFiltrationSpec>,
    pub permutation: Option<VertexPermutation>,
}

impl Instance {
    pub fn to_json(&self) -> String {
        let graph: Value = serde_json::from_str(&graph_to_json(&self.graph)).expect("valid json");
        let filtrations: Vec<Value> = self
            .filtrations
            .iter()
            .map(|f| serde_json::from_str(&filtration_to_json(f)).expect("valid json"))
            .collect();
        json!({
            "suite": self.suite.name(),
            "seed": self.seed,
            "graph": graph,
            "filtrations": filtrations,
            "permutation": self.permutation.as_ref().map(|p| p.as_slice().to_vec()),
        })
        .to_string()
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let v: Value = serde_json::from_slice(bytes)?;
        let bad = |m: &str| Error::InvalidFiltration(format!("replay file: {m}"));
        let suite = v["suite"].as_str().and_then(Suite::from_name).ok_or_else(|| bad("unknown suite"))?;
        let seed = v["seed"].as_u64().ok_or_else(|| bad("missing seed"))?;
        let graph = parse_graph(v["graph"].to_string().as_bytes())?;
        let filtrations = v["filtrations"]
            .as_array()
            .ok_or_else(|| bad("missing filtrations"))?
            .iter()
            .map(|f| parse_filtration(f.to_string().as_bytes()))
            .collect::<Result<Vec<_>>>()?;
        let permutation = match &v["permutation"] {
            Value::Null => None,
            p => {
                let image: Vec<usize> = serde_json::from_value(p.clone())?;
                Some(VertexPermutation::new(image)?)
            }
        };
        let needed = match suite {
            Suite::LaplacianDuality => 0,
            Suite::Isomorphism => 1,
            Suite::Stability => 2,
            Suite::MetricAxioms => 3,
        };
        if filtrations.len() < needed {
            return Err(bad("too few filtrations for suite"));
        }
        if suite == Suite::Isomorphism && permutation.is_none() {
            return Err(bad("isomorphism instance needs a permutation"));
        }
        Ok(Instance { suite, seed, graph, filtrations, permutation })
    }
}

fn colors() -> Vec<ColorId> {
    vec![ColorId::from("red"), ColorId::from("blue")]
}

/// Random tree plus independent extra edges; always connected.
pub fn random_connected_graph(n: usize, extra_p: f64, colors: &[ColorId], rng: &mut impl Rng) -> Result<ColoredGraph> {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for u in 0..n {
        for w in u + 1..n {
            if rng.random_bool(extra_p) && !edges.contains(&(u, w)) {
                edges.push((u, w));
            }
        }
    }
    let vc: Vec<ColorId> = (0..n).map(|_| colors[rng.random_range(0..colors.len())].clone()).collect();
    ColoredGraph::new(colors.to_vec(), vc, edges)
}

/// Deterministic instance of `suite` for `seed`.
pub fn generate(suite: Suite, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cs = colors();
    let (graph, filtrations, permutation) = match suite {
        Suite::LaplacianDuality => {
            let n = rng.random_range(1..=12);
            let p = rng.random_range(0.0..0.5);
            (random_connected_graph(n, p, &cs, &mut rng)?, vec![], None)
        }
        Suite::MetricAxioms => {
            let n = rng.random_range(2..=8);
            let graph = random_colored_graph_with(n, 0.45, &cs, &mut rng)?;
            let grid = rng.random_bool(0.5);
            let fs =
                (0..3).map(|_| random_spec(&cs, 0.0..4.0, 0.5..4.0, grid, &mut rng)).collect::<Result<Vec<_>>>()?;
            (graph, fs, None)
        }
        Suite::Stability => {
            let n = rng.random_range(2..=9);
            let graph = random_colored_graph_with(n, 0.45, &cs, &mut rng)?;
            let local = rng.random_bool(0.5);
            let f = random_spec(&cs, 0.0..4.0, 0.5..4.0, !local, &mut rng)?;
            let scale = if local && f.is_injective() {
                let (gv, ge) = f.min_gaps();
                0.49 * gv.min(ge).min(1.0)
            } else {
                rng.random_range(0.0..2.0)
            };
            let g = perturb(&f, scale, &mut rng)?;
            (graph, vec![f, g], None)
        }
        Suite::Isomorphism => {
            let n = rng.random_range(1..=10);
            let graph = random_colored_graph_with(n, 0.4, &cs, &mut rng)?;
            let grid = rng.random_bool(0.5);
            let f = random_spec(&cs, 0.0..4.0, 0.5..4.0, grid, &mut rng)?;
            (graph, vec![f], Some(VertexPermutation::random(n, &mut rng)))
        }
    };
    Ok(Instance { suite, seed, graph, filtrations, permutation })
}

fn both_distances(x: &(Diagram, Diagram), y: &(Diagram, Diagram)) -> Result<[ExtendedReal; 2]> {
    Ok([d_b_r(&x.0, &y.0)?, d_b_spec_r(&x.1, &y.1)?])
}

/// Property violations found on `inst` (empty when it passes).
pub fn check(inst: &Instance) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let g = &inst.graph;
    match inst.suite {
        Suite::LaplacianDuality => {
            for comp in connected_components(g) {
                let d0 = nonzero_laplacian_spectrum(g, &comp)?.values;
                let d1 = delta1_nonzero_spectrum(g, &comp)?.values;
                let close = d0.len() == d1.len() && d0.iter().zip(&d1).all(|(a, b)| (a - b).abs() <= 1e-8);
                if !close {
                    bad.push(format!("component {comp:?}: Δ0 {d0:?} vs Δ1 {d1:?}"));
                }
                if d1.iter().any(|&x| x <= 1e-8) {
                    bad.push(format!("component {comp:?}: Δ1 zero count exceeds β1: {d1:?}"));
                }
                let degree_sum: usize = comp.iter().map(|&v| g.degree(v)).sum();
                let trace: f64 = d0.iter().sum();
                if (trace - degree_sum as f64).abs() > 1e-9 {
                    bad.push(format!("component {comp:?}: eigenvalue sum {trace} != degree sum {degree_sum}"));
                }
            }
        }
        Suite::MetricAxioms => {
            let p = SpectrumPolicy::full();
            let ds = inst
                .filtrations
                .iter()
                .map(|f| Ok((compute_rephine(g, f)?, compute_spectre(g, f, &p)?)))
                .collect::<Result<Vec<_>>>()?;
            let names = ["d_B^R", "d_B^SpecR"];
            for i in 0..ds.len() {
                let selfd = both_distances(&ds[i], &ds[i])?;
                for (k, d) in selfd.iter().enumerate() {
                    if *d != ExtendedReal::ZERO {
                        bad.push(format!("{}: d(x{i}, x{i}) = {d}", names[k]));
                    }
                }
                for j in 0..ds.len() {
                    if i == j {
                        continue;
                    }
                    let dij = both_distances(&ds[i], &ds[j])?;
                    let dji = both_distances(&ds[j], &ds[i])?;
                    let differs =
                        [!multiset_equal(&ds[i].0, &ds[j].0, 0.0)?, !multiset_equal(&ds[i].1, &ds[j].1, 0.0)?];
                    for k in 0..2 {
                        if dij[k] != dji[k] {
                            bad.push(format!("{}: asymmetric {} vs {}", names[k], dij[k], dji[k]));
                        }
                        if dij[k] < ExtendedReal::ZERO || (differs[k] && dij[k] == ExtendedReal::ZERO) {
                            bad.push(format!("{}: d(x{i}, x{j}) = {} for distinct diagrams", names[k], dij[k]));
                        }
                    }
                    for l in 0..ds.len() {
                        let dil = both_distances(&ds[i], &ds[l])?;
                        let djl = both_distances(&ds[j], &ds[l])?;
                        for k in 0..2 {
                            if dil[k] > dij[k] + djl[k] + 1e-9 {
                                bad.push(format!(
                                    "{}: triangle ({i},{j},{l}): {} > {} + {}",
                                    names[k], dil[k], dij[k], djl[k]
                                ));
                            }
                        }
                    }
                }
            }
        }
        Suite::Stability => {
            let (f, h) = (&inst.filtrations[0], &inst.filtrations[1]);
            let r = stability_pair(g, f, h, StabilityDescriptor::Rephine)?;
            if !r.holds {
                bad.push(format!("RePHINE: distance {} > bound {}", r.distance, r.bound));
            }
            if r.local {
                let s = stability_pair(g, f, h, StabilityDescriptor::Spectre)?;
                if !s.holds {
                    bad.push(format!("SpectRe (local): distance {} > bound {}", s.distance, s.bound));
                }
            }
        }
        Suite::Isomorphism => {
            let f = &inst.filtrations[0];
            let p = inst.permutation.as_ref().expect("isomorphism instance has a permutation");
            let h = permute(g, p)?;
            let policy = SpectrumPolicy::full();
            let (a, b) =
                (diagram_to_json(&compute_spectre(g, f, &policy)?), diagram_to_json(&compute_spectre(&h, f, &policy)?));
            if a != b {
                bad.push(format!("SpectRe changed under permutation:\n  {a}\n  {b}"));
            }
            let (a, b) = (diagram_to_json(&compute_rephine(g, f)?), diagram_to_json(&compute_rephine(&h, f)?));
            if a != b {
                bad.push(format!("RePHINE changed under permutation:\n  {a}\n  {b}"));
            }
        }
    }
    Ok(bad)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub instance: Instance,
    pub messages: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub suite: Suite,
    pub checked: usize,
    /// Instances where the property ran but only partly applied (e.g.
    /// stability samples outside the injectivity cell for SpectRe).
    pub local_samples: usize,
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs `count` instances whose seeds are drawn from `seed`.
pub fn run_suite(suite: Suite, count: usize, seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport { suite, checked: 0, local_samples: 0, failures: Vec::new() };
    for _ in 0..count {
        let inst = generate(suite, rng.random())?;
        if suite == Suite::Stability
            && crate::bench::within_injectivity_cell(&inst.filtrations[0], &inst.filtrations[1])?
        {
            report.local_samples += 1;
        }
        let messages = check(&inst)?;
        report.checked += 1;
        if !messages.is_empty() {
            report.failures.push(Failure { instance: inst, messages });
        }
    }
    Ok(report)
}
