//! `spectre`: compute persistence descriptors of colored graphs, compare
//! them, and run the verification suites.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use spectre_core::bench::{self, Corpus, Descriptor, FiltrationSource};
use spectre_core::descriptors::{diagram_to_json, parse_diagram, Diagram, Rho};
use spectre_core::filtration::parse_filtration;
use spectre_core::graph::parse_graph;
use spectre_core::metrics::diagram_distance;
use spectre_core::spectral::{SpectrumMode, SpectrumPolicy};
use spectre_core::verify::{self, Instance, Suite};
use spectre_core::Error;

#[derive(Parser)]
#[command(name = "spectre", version, about = "Persistence descriptors for vertex-colored graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one diagram of a graph.
    Diagram(DiagramArgs),
    /// Bottleneck distance between two diagram files of the same kind.
    Distance(DistanceArgs),
    /// Pairwise discrimination over a corpus of graphs.
    Discriminate(DiscriminateArgs),
    /// Run a seeded property suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ph0,
    Ph1,
    Rephine,
    Spectre,
    Ls,
}

impl Kind {
    fn descriptor(self) -> Descriptor {
        match self {
            Kind::Ph0 => Descriptor::Ph0,
            Kind::Ph1 => Descriptor::Ph1,
            Kind::Rephine => Descriptor::Rephine,
            Kind::Spectre => Descriptor::Spectre,
            Kind::Ls => Descriptor::Ls,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpectrumArg {
    Full,
    Partial,
    Scheduled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    #[value(name = "lemma_b1")]
    LaplacianDuality,
    #[value(name = "metric_axioms")]
    MetricAxioms,
    Stability,
    Isomorphism,
}

#[derive(Args)]
struct SpectrumFlags {
    /// Spectrum evaluation policy.
    #[arg(long, value_enum, default_value = "full")]
    spectrum: SpectrumArg,
    /// Fraction of filtration steps evaluated under `scheduled`.
    #[arg(long, default_value_t = 0.33)]
    sched_fraction: f64,
    /// Components above this size get only a power-method λ_max.
    #[arg(long, default_value_t = 9)]
    partial_threshold: usize,
    /// Power-method tolerance; multiset tolerance for `discriminate`.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SpectrumFlags {
    fn policy(&self) -> Result<SpectrumPolicy, Error> {
        let partial = SpectrumMode::Partial { threshold: self.partial_threshold };
        let mode = match self.spectrum {
            SpectrumArg::Full => SpectrumMode::Full,
            SpectrumArg::Partial => partial,
            SpectrumArg::Scheduled => {
                SpectrumMode::Scheduled { fraction: self.sched_fraction, inner: Box::new(partial) }
            }
        };
        let p = SpectrumPolicy { mode, tol: self.tol, seed: self.seed, ..SpectrumPolicy::default() };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Args)]
struct DiagramArgs {
    /// Graph JSON file.
    graph: PathBuf,
    /// `file:<path>` or `degree-forman`.
    #[arg(long)]
    filtration: String,
    #[arg(long, value_enum)]
    kind: Kind,
    #[command(flatten)]
    spectrum: SpectrumFlags,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct DistanceArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiscriminateArgs {
    /// Graph JSON files, directories of them, or `builtin:<name>`
    /// (star-path, swapped-stars, rook-shrikhande).
    #[arg(required = true)]
    inputs: Vec<String>,
    #[arg(long, default_value = "degree-forman")]
    filtration: String,
    /// Descriptors to evaluate; all when omitted.
    #[arg(long, value_enum)]
    kind: Vec<Kind>,
    #[command(flatten)]
    spectrum: SpectrumFlags,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Re-run one instance from a replay file instead of sampling.
    #[arg(long)]
    replay: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Violation(String),
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn filtration_source(arg: &str) -> CliResult<FiltrationSource> {
    if arg == "degree-forman" {
        return Ok(FiltrationSource::DegreeForman);
    }
    match arg.strip_prefix("file:") {
        Some(path) => Ok(FiltrationSource::Spec(parse_filtration(&read(Path::new(path))?)?)),
        None => Err(Failure::Input(format!("--filtration must be `degree-forman` or `file:<path>`, got {arg:?}"))),
    }
}

fn diagram_csv(d: &Diagram) -> String {
    let mut out = String::from("dim,birth,death,alpha,gamma,rho\n");
    for (dim, ts) in [(0, &d.dim0), (1, &d.dim1)] {
        for t in ts {
            let rho = match &t.rho {
                Rho::Values(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                Rho::Skipped => "skipped".into(),
                Rho::None => String::new(),
            };
            out.push_str(&format!("{dim},{},{},{},{},{rho}\n", t.birth, t.death, t.alpha, t.gamma));
        }
    }
    out
}

fn run_diagram(args: &DiagramArgs) -> CliResult<()> {
    let graph = parse_graph(&read(&args.graph)?)?;
    let source = filtration_source(&args.filtration)?;
    let policy = args.spectrum.policy()?;
    let values = bench::corpus_values(&[&graph], &source)?.remove(0);
    let d = bench::descriptor_diagram(&graph, &values, args.kind.descriptor(), &policy)?;
    let text = match args.format {
        Format::Json => diagram_to_json(&d),
        Format::Csv => diagram_csv(&d),
    };
    emit(args.out.as_deref(), text.trim_end())
}

fn run_distance(args: &DistanceArgs) -> CliResult<()> {
    let a = parse_diagram(&read(&args.a)?)?;
    let b = parse_diagram(&read(&args.b)?)?;
    let m = diagram_distance(&a, &b)?;
    let value = match m.value.value() {
        Some(x) => json!(x),
        None => json!("inf"),
    };
    let matching: Vec<[usize; 2]> = m.assignment.iter().map(|&(i, j)| [i, j]).collect();
    let matching = serde_json::to_string(&matching).expect("index pairs serialize");
    emit(args.out.as_deref(), &format!("{{\"value\":{value},\"matching\":{matching}}}"))
}

fn load_corpus(inputs: &[String]) -> CliResult<Corpus> {
    let mut graphs = Vec::new();
    for input in inputs {
        if let Some(name) = input.strip_prefix("builtin:") {
            let c = bench::builtin_corpus(name)
                .ok_or_else(|| Failure::Input(format!("unknown builtin corpus {name:?}")))?;
            graphs.extend(c.graphs);
            continue;
        }
        let path = Path::new(input);
        let files = if path.is_dir() {
            let mut fs: Vec<PathBuf> = fs::read_dir(path)
                .map_err(|e| Failure::Input(format!("cannot list {input}: {e}")))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            fs.sort();
            fs
        } else {
            vec![path.to_path_buf()]
        };
        for f in files {
            let g = parse_graph(&read(&f)?).map_err(|e| Failure::Input(format!("{}: {e}", f.display())))?;
            graphs.push((f.display().to_string(), g));
        }
    }
    let name = if inputs.len() == 1 { inputs[0].clone() } else { "corpus".into() };
    Ok(Corpus::new(name, graphs))
}

fn run_discriminate(args: &DiscriminateArgs) -> CliResult<()> {
    let corpus = load_corpus(&args.inputs)?;
    let source = filtration_source(&args.filtration)?;
    let policy = args.spectrum.policy()?;
    let kinds: Vec<Descriptor> = if args.kind.is_empty() {
        Descriptor::ALL.to_vec()
    } else {
        args.kind.iter().map(|k| k.descriptor()).collect()
    };
    let reports = kinds
        .iter()
        .map(|&d| bench::discriminate(&corpus, d, &source, &policy, args.spectrum.tol))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match args.format {
        Format::Csv => bench::reports_csv(&reports),
        Format::Json => bench::reports_summary_json(&reports),
    };
    emit(args.out.as_deref(), text.trim_end())
}

fn run_verify(args: &VerifyArgs) -> CliResult<()> {
    let suite = match args.suite {
        SuiteArg::LaplacianDuality => Suite::LaplacianDuality,
        SuiteArg::MetricAxioms => Suite::MetricAxioms,
        SuiteArg::Stability => Suite::Stability,
        SuiteArg::Isomorphism => Suite::Isomorphism,
    };
    let failures: Vec<(Instance, Vec<String>)>;
    let checked;
    if let Some(path) = &args.replay {
        let inst = Instance::from_json(&read(path)?)?;
        if inst.suite != suite {
            return Err(Failure::Input(format!("replay file is for suite {}", inst.suite.name())));
        }
        let msgs = verify::check(&inst)?;
        checked = 1;
        failures = if msgs.is_empty() { vec![] } else { vec![(inst, msgs)] };
    } else {
        let r = verify::run_suite(suite, args.count, args.seed)?;
        checked = r.checked;
        failures = r.failures.into_iter().map(|f| (f.instance, f.messages)).collect();
    }
    let rows: Vec<_> = failures
        .iter()
        .map(|(inst, msgs)| {
            let replay: serde_json::Value = serde_json::from_str(&inst.to_json()).expect("valid json");
            json!({"messages": msgs, "replay": replay})
        })
        .collect();
    let report = json!({"suite": suite.name(), "checked": checked, "passed": failures.is_empty(), "failures": rows});
    emit(args.out.as_deref(), &report.to_string())?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(format!("{} of {checked} instances violated {}", failures.len(), suite.name())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Diagram(a) => run_diagram(a),
        Command::Distance(a) => run_distance(a),
        Command::Discriminate(a) => run_discriminate(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(m)) => {
            eprintln!("property violation: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(3)
        }
    }
}
