//! `graphon`: densities, metrics, regularity partitions and set-system
//! dimensions of stepfunction graphons from the command line.
//!
//! Exit codes: 0 success, 2 input error, 3 failed hypothesis check,
//! 4 size guard.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use graphon_core::densities::{bigraph_density, density, induced_density};
use graphon_core::io::{
    bigraph_from_text, bigraphon_from_json, bigraphon_to_json, graph_from_text, graph_to_text,
    graphon_from_json, graphon_to_json, set_family_from_json, to_json,
};
use graphon_core::metrics::{
    average_net, neighborhood_metric, packing_dimension_estimate, packing_number,
    similarity_metric, MetricView, PackingMode,
};
use graphon_core::regularity::{
    edit_blowup_approx, partition_cut_error, thin_ultra_partition, ultra_strong_partition,
    weak_partition_via_net, PartitionReport,
};
use graphon_core::setsystems::{
    de_dimension, neighborhood_family, sym_diff_family, thinness_witness, transversal_number,
    vc_dimension,
};
use graphon_core::zoo::{
    binary_graphon, counterexample_u, half_graphon, metric_graphon, random_stepfunction,
    sphere_graphon, unit_interval_metric, BinaryGraphon, BinaryVariant, Seed,
};
use graphon_core::{
    cut_norm, Bigraph, CutNormMode, Error, Graph, Partition, StepBigraphon, StepGraphon,
};

#[derive(Parser)]
#[command(name = "graphon", version, about = "Stepfunction graphon toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Output format; matrices default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Force exact cut norms.
    #[arg(long, global = true, conflicts_with = "heuristic")]
    exact: bool,
    /// Use local-search cut norms (lower bounds).
    #[arg(long, global = true)]
    heuristic: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Homomorphism densities of a pattern.
    Density(DensityArgs),
    /// Regularity partitions.
    #[command(subcommand)]
    Partition(PartitionCmd),
    /// Neighborhood or similarity distances, packing numbers and nets.
    Metrics(MetricsArgs),
    /// VC dimension, DE dimension and transversal number of a set family.
    Vc(VcArgs),
    /// DE dimension of the neighborhood family and an excluded bigraph.
    Thinness(ThinnessArgs),
    /// Example graphons.
    #[command(subcommand)]
    Zoo(ZooCmd),
    /// Summary of a graphon.
    Report(ReportArgs),
}

#[derive(Args)]
struct DensityArgs {
    /// Graphon file.
    #[arg(long, conflicts_with_all = ["constant", "bigraphon"])]
    graphon: Option<PathBuf>,
    /// Bigraphon file (bigraph patterns only).
    #[arg(long, conflicts_with = "constant")]
    bigraphon: Option<PathBuf>,
    /// Constant graphon with this value.
    #[arg(long)]
    constant: Option<f64>,
    /// Pattern edge list; `.bigraph` files are read as bigraphs.
    #[arg(long)]
    pattern: PathBuf,
}

#[derive(Subcommand)]
enum PartitionCmd {
    /// Voronoi cells of an average net in the similarity metric.
    Weak {
        #[arg(long)]
        eps_net: f64,
        input: PathBuf,
    },
    /// Ultra-strong partition with L1 error at most eps.
    Ultra {
        #[arg(long)]
        eps: f64,
        input: PathBuf,
    },
    /// Thin partition of a 0-1 graphon excluding a bigraph, or with
    /// `--graph`, an edit-distance blow-up approximation of a graph.
    Thin {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        eps: f64,
        /// Graphon file.
        #[arg(required_unless_present = "graph", conflicts_with = "graph")]
        input: Option<PathBuf>,
        /// Graph edge list to approximate by a blow-up.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Where to write the edited graph.
        #[arg(long, requires = "graph")]
        blowup_out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MetricsArgs {
    input: PathBuf,
    /// Use the similarity metric of `W∘W` instead of the neighborhood metric.
    #[arg(long)]
    similarity: bool,
    /// Packing numbers and dimension slope over these radii (decreasing).
    #[arg(long, value_delimiter = ',')]
    packing: Option<Vec<f64>>,
    /// Greedy packings instead of exact ones.
    #[arg(long)]
    greedy: bool,
    /// Average net with this cost target.
    #[arg(long, conflicts_with = "packing")]
    net: Option<f64>,
}

#[derive(Args)]
struct VcArgs {
    /// Set family JSON.
    #[arg(long)]
    family: PathBuf,
}

#[derive(Args)]
struct ThinnessArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 4)]
    kmax: usize,
}

#[derive(Subcommand)]
enum ZooCmd {
    /// Hemisphere graphon on random points of the sphere.
    Sphere {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        n: usize,
    },
    /// Graphon `1 - d` of the evenly spaced unit-interval metric.
    Metric {
        #[arg(long)]
        k: usize,
    },
    /// Half graph with `w = 1` iff `i + j < n`.
    Half {
        #[arg(long)]
        n: usize,
    },
    /// Dyadic binary-digit graphons.
    Binary {
        #[arg(long)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = Variant::Sym)]
        variant: Variant,
    },
    /// The stepfunction with no finite-dimensional neighborhood family.
    Counterexample,
    /// Random stepfunction.
    Random {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        zero_one: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Sym,
    Asym,
}

#[derive(Args)]
struct ReportArgs {
    input: PathBuf,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(e) if e.is_hypothesis_failure() => 3,
            Some(e) if e.is_size_limit() => 4,
            _ => 2,
        };
        Failure { code, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome<()> {
    let c = &cli.common;
    let text = match &cli.command {
        Command::Density(a) => cmd_density(a)?,
        Command::Partition(p) => cmd_partition(p, c)?,
        Command::Metrics(a) => cmd_metrics(a, c)?,
        Command::Vc(a) => cmd_vc(a)?,
        Command::Thinness(a) => cmd_thinness(a)?,
        Command::Zoo(z) => cmd_zoo(z, c)?,
        Command::Report(a) => cmd_report(a, c)?,
    };
    emit(c.output.as_deref(), &text)
}

fn emit(path: Option<&Path>, text: &str) -> Outcome<()> {
    match path {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("cannot write {}", p.display()))
            .map_err(Failure::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> graphon_core::Result<T>) -> Outcome<T> {
    let text = read(path)?;
    Ok(parse(&text).with_context(|| format!("in {}", path.display()))?)
}

fn load_graphon(path: &Path) -> Outcome<StepGraphon> {
    load(path, graphon_from_json)
}

fn is_bigraph_file(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "bigraph")
}

fn check_eps(name: &str, eps: f64) -> Outcome<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(anyhow!("{name} must lie in (0, 1), got {eps}").into())
    }
}

fn cut_mode(c: &Common) -> Option<CutNormMode> {
    if c.exact {
        Some(CutNormMode::Exact)
    } else if c.heuristic {
        Some(CutNormMode::Heuristic)
    } else {
        None
    }
}

#[derive(Serialize)]
struct GraphDensities {
    t: f64,
    t_ind: f64,
}

#[derive(Serialize)]
struct BigraphDensities {
    t_bip: f64,
    t_bip_ind: f64,
}

fn cmd_density(a: &DensityArgs) -> Outcome<String> {
    if !a.pattern.exists() {
        return Err(anyhow!("cannot read {}: no such file", a.pattern.display()).into());
    }
    let bigraphon: StepBigraphon = match (&a.graphon, &a.bigraphon, a.constant) {
        (Some(p), None, None) => {
            let w = load_graphon(p)?;
            if !is_bigraph_file(&a.pattern) {
                let f: Graph = load(&a.pattern, graph_from_text)?;
                return Ok(to_json(&GraphDensities {
                    t: density(&f, &w)?,
                    t_ind: induced_density(&f, &w)?,
                }));
            }
            w.as_bigraphon()
        }
        (None, None, Some(p)) => {
            let w = StepGraphon::constant(p)?;
            if !is_bigraph_file(&a.pattern) {
                let f: Graph = load(&a.pattern, graph_from_text)?;
                return Ok(to_json(&GraphDensities {
                    t: density(&f, &w)?,
                    t_ind: induced_density(&f, &w)?,
                }));
            }
            w.as_bigraphon()
        }
        (None, Some(p), None) => {
            if !is_bigraph_file(&a.pattern) {
                return Err(anyhow!("a bigraphon needs a .bigraph pattern").into());
            }
            load(p, bigraphon_from_json)?
        }
        _ => return Err(anyhow!("give exactly one of --graphon, --bigraphon, --constant").into()),
    };
    let f: Bigraph = load(&a.pattern, bigraph_from_text)?;
    Ok(to_json(&BigraphDensities {
        t_bip: bigraph_density(&f, &bigraphon, false)?,
        t_bip_ind: bigraph_density(&f, &bigraphon, true)?,
    }))
}

#[derive(Serialize)]
struct PartitionOutput<'a> {
    mode: &'static str,
    report: &'a PartitionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    class_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    atoms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    atom_bound: Option<u128>,
}

#[derive(Serialize)]
struct EditOutput<'a> {
    mode: &'static str,
    n: usize,
    edits: usize,
    edit_bound: f64,
    base: Vec<(usize, usize)>,
    sizes: &'a [usize],
    internal: &'a [bool],
    classes: &'a [usize],
    thin: PartitionOutput<'a>,
}

fn cmd_partition(cmd: &PartitionCmd, c: &Common) -> Outcome<String> {
    match cmd {
        PartitionCmd::Weak { eps_net, input } => {
            if !(*eps_net >= 0.0) {
                return Err(anyhow!("eps-net must be nonnegative, got {eps_net}").into());
            }
            let w = load_graphon(input)?;
            let report = weak_partition_via_net(&w, *eps_net)?;
            let report = remeasure(&w, report, c)?;
            Ok(to_json(&PartitionOutput {
                mode: "weak",
                report: &report,
                m: None,
                class_bound: None,
                atoms: None,
                atom_bound: None,
            }))
        }
        PartitionCmd::Ultra { eps, input } => {
            check_eps("eps", *eps)?;
            let w = load_graphon(input)?;
            let u = ultra_strong_partition(&w, *eps)?;
            let report = remeasure(&w, u.report, c)?;
            Ok(to_json(&PartitionOutput {
                mode: "ultra",
                report: &report,
                m: Some(u.m),
                class_bound: Some(u.class_bound),
                atoms: None,
                atom_bound: None,
            }))
        }
        PartitionCmd::Thin {
            pattern,
            eps,
            input,
            graph,
            blowup_out,
        } => {
            check_eps("eps", *eps)?;
            let f: Bigraph = load(pattern, bigraph_from_text)?;
            if let Some(gpath) = graph {
                let g: Graph = load(gpath, graph_from_text)?;
                let e = edit_blowup_approx(&g, &f, *eps)?;
                if let Some(out) = blowup_out {
                    emit(Some(out), &graph_to_text(&e.graph))?;
                }
                return Ok(to_json(&EditOutput {
                    mode: "edit",
                    n: g.n(),
                    edits: e.edits,
                    edit_bound: e.edit_bound,
                    base: e.base.edges().collect(),
                    sizes: &e.sizes,
                    internal: &e.internal,
                    classes: &e.classes,
                    thin: PartitionOutput {
                        mode: "thin",
                        report: &e.thin.report,
                        m: Some(e.thin.m),
                        class_bound: None,
                        atoms: Some(e.thin.atoms),
                        atom_bound: Some(e.thin.atom_bound),
                    },
                }));
            }
            let input = input.as_deref().expect("clap requires input or --graph");
            let w = load_graphon(input)?;
            let t = thin_ultra_partition(&w, &f, *eps)?;
            let report = remeasure(&w, t.report, c)?;
            Ok(to_json(&PartitionOutput {
                mode: "thin",
                report: &report,
                m: Some(t.m),
                class_bound: None,
                atoms: Some(t.atoms),
                atom_bound: Some(t.atom_bound),
            }))
        }
    }
}

/// Recomputes the cut error when a cut-norm mode is forced.
fn remeasure(w: &StepGraphon, mut report: PartitionReport, c: &Common) -> Outcome<PartitionReport> {
    if let Some(mode) = cut_mode(c) {
        let r = w.difference(&graphon_core::aggregate(w, &report.partition)?)?;
        report.cut_error = cut_norm(&r, mode)?;
        report.exact = mode == CutNormMode::Exact;
    }
    Ok(report)
}

#[derive(Serialize)]
struct PackingOutput {
    metric: &'static str,
    exact: bool,
    slope: Option<f64>,
    table: Vec<PackingRow>,
}

#[derive(Serialize)]
struct PackingRow {
    eps: f64,
    count: usize,
}

#[derive(Serialize)]
struct NetOutput<'a> {
    metric: &'static str,
    centers: &'a [usize],
    cost: f64,
    trace: &'a [f64],
}

#[derive(Serialize)]
struct MatrixOutput {
    metric: &'static str,
    mu: Vec<f64>,
    dist: Vec<Vec<f64>>,
}

fn cmd_metrics(a: &MetricsArgs, c: &Common) -> Outcome<String> {
    let w = load_graphon(&a.input)?;
    let (name, m): (&'static str, MetricView) = if a.similarity {
        ("similarity", similarity_metric(&w))
    } else {
        ("neighborhood", neighborhood_metric(&w))
    };
    let mode = if a.greedy {
        PackingMode::Greedy
    } else {
        PackingMode::Exact
    };
    if let Some(grid) = &a.packing {
        let out = if grid.len() >= 2 {
            let est = packing_dimension_estimate(&m, grid, mode)?;
            PackingOutput {
                metric: name,
                exact: est.exact,
                slope: Some(est.slope),
                table: est
                    .table
                    .iter()
                    .map(|&(eps, count)| PackingRow { eps, count })
                    .collect(),
            }
        } else {
            let eps = *grid.first().ok_or_else(|| anyhow!("empty packing grid"))?;
            let p = packing_number(&m, eps, mode)?;
            PackingOutput {
                metric: name,
                exact: p.exact,
                slope: None,
                table: vec![PackingRow {
                    eps,
                    count: p.count(),
                }],
            }
        };
        return Ok(to_json(&out));
    }
    if let Some(eps) = a.net {
        let net = average_net(&m, eps)?;
        return Ok(to_json(&NetOutput {
            metric: name,
            centers: &net.centers,
            cost: net.cost,
            trace: &net.trace,
        }));
    }
    match c.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(m.to_csv()),
        Format::Json => Ok(to_json(&MatrixOutput {
            metric: name,
            mu: m.mu().to_vec(),
            dist: m.to_rows(),
        })),
    }
}

#[derive(Serialize)]
struct VcOutput {
    vc: Option<usize>,
    vc_sym_diff: Option<usize>,
    de: Option<usize>,
    transversal: Option<usize>,
    sets: usize,
    m: usize,
}

fn cmd_vc(a: &VcArgs) -> Outcome<String> {
    let h = load(&a.family, set_family_from_json)?;
    let de = if h.weights().is_some() {
        Some(de_dimension(&h)?)
    } else {
        None
    };
    let transversal = match transversal_number(&h) {
        Ok(t) => Some(t),
        Err(Error::NoTransversal) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(to_json(&VcOutput {
        vc: vc_dimension(&h)?,
        vc_sym_diff: vc_dimension(&sym_diff_family(&h))?,
        de,
        transversal,
        sets: h.len(),
        m: h.m(),
    }))
}

#[derive(Serialize)]
struct ThinnessOutput {
    de_dimension: usize,
    kmax: usize,
    distinct_neighborhoods: usize,
    witness: Option<WitnessOutput>,
}

#[derive(Serialize)]
struct WitnessOutput {
    n1: usize,
    n2: usize,
    edges: Vec<(usize, usize)>,
    t_bip_ind: f64,
}

fn cmd_thinness(a: &ThinnessArgs) -> Outcome<String> {
    let w = load_graphon(&a.input)?;
    let t = thinness_witness(&w, a.kmax)?;
    let witness = match t.witness {
        Some(f) => Some(WitnessOutput {
            t_bip_ind: bigraph_density(&f, &w.as_bigraphon(), true)?,
            n1: f.n1(),
            n2: f.n2(),
            edges: f.edges().collect(),
        }),
        None => None,
    };
    Ok(to_json(&ThinnessOutput {
        de_dimension: t.de_dimension,
        kmax: a.kmax,
        distinct_neighborhoods: neighborhood_family(&w)?.family.len(),
        witness,
    }))
}

fn cmd_zoo(z: &ZooCmd, c: &Common) -> Outcome<String> {
    let seed = Seed(c.seed);
    let w = match z {
        ZooCmd::Sphere { dim, n } => sphere_graphon(*dim, *n, seed)?.graphon,
        ZooCmd::Metric { k } => {
            if *k < 2 {
                return Err(anyhow!("k must be at least 2, got {k}").into());
            }
            let (dist, mu) = unit_interval_metric(*k);
            metric_graphon(&dist, &mu)?
        }
        ZooCmd::Half { n } => half_graphon(*n)?,
        ZooCmd::Binary { depth, variant } => {
            let v = match variant {
                Variant::Sym => BinaryVariant::Sym,
                Variant::Asym => BinaryVariant::Asym,
            };
            match binary_graphon(*depth, v)? {
                BinaryGraphon::Sym(w) => w,
                BinaryGraphon::Asym(b) => return Ok(bigraphon_to_json(&b)),
            }
        }
        ZooCmd::Counterexample => counterexample_u(),
        ZooCmd::Random { k, zero_one } => random_stepfunction(*k, seed, *zero_one)?,
    };
    Ok(graphon_to_json(&w))
}

#[derive(Serialize)]
struct Report {
    k: usize,
    zero_one: bool,
    edge_density: f64,
    triangle_density: f64,
    cut_distance_to_constant: f64,
    cut_exact: bool,
    neighborhood_diameter: f64,
    similarity_diameter: f64,
    distinct_neighborhoods: Option<usize>,
    vc: Option<usize>,
    de: Option<usize>,
}

fn cmd_report(a: &ReportArgs, c: &Common) -> Outcome<String> {
    let w = load_graphon(&a.input)?;
    let edge = density(&Graph::complete(2), &w)?;
    let p = Partition::trivial(w.mu().to_vec())?;
    let cut = match cut_mode(c) {
        Some(mode) => {
            let r = w.difference(&graphon_core::aggregate(&w, &p)?)?;
            (cut_norm(&r, mode)?, mode == CutNormMode::Exact)
        }
        None => {
            let v = partition_cut_error(&w, &p)?;
            (v.value, v.exact)
        }
    };
    let diameter = |m: &MetricView| m.to_rows().into_iter().flatten().fold(0.0, f64::max);
    let (distinct, vc, de) = if w.is_zero_one() {
        let fam = neighborhood_family(&w)?.family;
        (
            Some(fam.len()),
            within_limits(vc_dimension(&fam))?.flatten(),
            within_limits(de_dimension(&fam))?,
        )
    } else {
        (None, None, None)
    };
    Ok(to_json(&Report {
        k: w.k(),
        zero_one: w.is_zero_one(),
        edge_density: edge,
        triangle_density: density(&Graph::complete(3), &w)?,
        cut_distance_to_constant: cut.0,
        cut_exact: cut.1,
        neighborhood_diameter: diameter(&neighborhood_metric(&w)),
        similarity_diameter: diameter(&similarity_metric(&w)),
        distinct_neighborhoods: distinct,
        vc,
        de,
    }))
}

/// `None` when a size guard refuses the computation.
fn within_limits<T>(r: graphon_core::Result<T>) -> Outcome<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_size_limit() => Ok(None),
        Err(e) => Err(e.into()),
    }
}
