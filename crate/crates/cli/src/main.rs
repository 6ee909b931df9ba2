use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write as _;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use farey_lab::generators::{farey, generalised_halved_farey, halved_farey, LengthFunction};
use farey_lab::grainline::{
    check_grain_line, check_prime_axioms, density_report, extract_grain_line, is_free, is_well_structured,
    is_wildly_presented, GrainLine,
};
use farey_lab::harness::{criterion_count, run_all, run_criterion};
use farey_lab::immersion::{
    cut_bound_complete_in_halved, find_immersion_bruteforce, immerse_halved_farey, verify_immersion,
    wild_separations_to_grainline, ImmersionModel,
};
use farey_lab::io::{to_dot, to_dot_with};
use farey_lab::minors::{
    check_dive_trace, dive, find_subdivision, interval_projection, theorem31_experiment, SearchOptions, SearchReport,
};
use farey_lab::separations::{
    check_faithful, complete_immersion_from_blocks, edge_blocks, faithful_set, find_compound_separation,
    iterated_split, tree_cut_decomposition, CompoundSeparation,
};
use farey_lab::{Graph, Path, Vertex};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "farey-lab",
    version,
    about = "Farey graphs, grain lines, immersions and compound-separations"
)]
struct Cli {
    /// Seed for randomized suites.
    #[arg(long, global = true, env = "FAREY_LAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph.
    #[command(subcommand)]
    Gen(Gen),
    /// Check, extract or describe grain lines.
    #[command(subcommand)]
    Grainline(GrainlineCmd),
    /// Subdivisions, dives and the adversarial-length experiment.
    #[command(subcommand)]
    Minors(MinorsCmd),
    /// Edge-blocks and compound-separations.
    #[command(subcommand)]
    Sep(SepCmd),
    /// Strong immersions.
    #[command(subcommand)]
    Immerse(ImmerseCmd),
    /// Run the acceptance suite.
    #[command(subcommand)]
    Harness(HarnessCmd),
    /// Convert a graph or grain-line JSON file to DOT.
    Export { input: PathBuf },
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
    /// Grain-line JSON (halved and generalised graphs only).
    GrainLine,
}

#[derive(Args)]
struct GenOpts {
    #[arg(long)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write levels, `≤_L` and the paths to this file.
    #[arg(long)]
    metadata: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Gen {
    /// Halved Farey graph.
    Halved(GenOpts),
    /// Farey graph.
    Farey(GenOpts),
    /// Generalised halved Farey graph `F̆(ℓ)`.
    Ghf {
        #[arg(long)]
        lengths: LengthFunction,
        #[command(flatten)]
        opts: GenOpts,
    },
}

#[derive(Subcommand)]
enum GrainlineCmd {
    /// Validate the axioms; exits 2 with witnesses on failure.
    Check { input: PathBuf },
    /// Extract a grain line from a JSON list of paths.
    Extract { input: PathBuf },
    /// Structural predicates and the density diagnostic.
    Report { input: PathBuf },
}

#[derive(Args)]
struct Budget {
    /// Search node budget.
    #[arg(long, default_value_t = SearchOptions::default().budget)]
    budget: u64,
}

#[derive(Subcommand)]
enum MinorsCmd {
    /// Search for a subdivision of the pattern in the host.
    FindSubdivision {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[command(flatten)]
        budget: Budget,
    },
    /// Dive simultaneously into two grain lines and re-check the trace.
    Dive {
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        inner: PathBuf,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        /// Lengths of the outer line's construction, for the length check.
        #[arg(long)]
        lengths: Option<LengthFunction>,
    },
    /// Where the inner line's `L` sits in the outer `≤_L`.
    Project {
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        inner: PathBuf,
    },
    /// Adversarial lengths for the given families, then one subdivision
    /// search per family in the truncation.
    Thm31 {
        #[arg(long, value_delimiter = ',')]
        families: Vec<PathBuf>,
        #[arg(long)]
        horizon: usize,
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Subcommand)]
enum SepCmd {
    /// Edge-blocks at threshold `c`.
    Blocks {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        c: usize,
    },
    /// Tree-cut decomposition into edge-blocks.
    Tcd {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        c: usize,
    },
    /// A separation of `u` and `v` with at most `s` separator vertices and
    /// `f` cross edges.
    Find {
        input: PathBuf,
        #[arg(long)]
        u: Vertex,
        #[arg(long)]
        v: Vertex,
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Defaults to the number of edges.
        #[arg(long)]
        f: Option<usize>,
    },
    /// Peel pieces off along unitary separations.
    Peel {
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        steps: usize,
        /// Defaults to the number of edges.
        #[arg(long)]
        f: Option<usize>,
    },
    /// The unitary separations at `w` from the edge-blocks of `G − w`.
    Faithful {
        input: PathBuf,
        #[arg(long)]
        w: Vertex,
        #[arg(long, default_value_t = 2)]
        c: usize,
    },
    /// A strong `K^t` immersion through the edge-blocks of `G − X`.
    Clique {
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        x: Vec<Vertex>,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 2)]
        c: usize,
    },
}

#[derive(Subcommand)]
enum ImmerseCmd {
    /// Immerse the halved Farey graph of order `m` along a grain line.
    Build {
        #[arg(long)]
        order: usize,
        /// Grain-line JSON of the host.
        #[arg(long)]
        host: PathBuf,
    },
    /// Verify a model; exits 2 with the violations on failure.
    Verify { input: PathBuf },
    /// Exhaustive immersion search.
    Brute {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        strong: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// Counting bound for a complete graph on the given vertices of a
    /// halved Farey host.
    Bound {
        /// Grain-line JSON of the host.
        #[arg(long)]
        host: PathBuf,
        #[arg(long, value_delimiter = ',')]
        branch: Vec<Vertex>,
    },
    /// Grain line threaded through a chain of unitary separations.
    Wild {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        x: Vertex,
        #[arg(long)]
        y: Vertex,
        /// JSON list of separations in chain order.
        #[arg(long)]
        seps: PathBuf,
    },
}

#[derive(Subcommand)]
enum HarnessCmd {
    Acceptance {
        /// `all` or a criterion number.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Exit statuses: 1 malformed input, 2 a validation failure, 3 a search
/// that ran out of budget.
enum Failure {
    Input(String),
    Violation,
    Unknown,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    // Usage errors count as malformed input, not as a violation.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut out = Output::new(cli.out.clone());
    let result = run(cli.command, cli.seed, &mut out);
    if let Err(e) = out.flush() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violation) => ExitCode::from(2),
        Err(Failure::Unknown) => ExitCode::from(3),
    }
}

struct Output {
    path: Option<PathBuf>,
    text: String,
}

impl Output {
    fn new(path: Option<PathBuf>) -> Self {
        Output {
            path,
            text: String::new(),
        }
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Outcome {
        self.text.push_str(&serde_json::to_string_pretty(value)?);
        self.text.push('\n');
        Ok(())
    }

    fn raw(&mut self, s: &str) {
        self.text.push_str(s);
    }

    fn flush(&self) -> std::io::Result<()> {
        match &self.path {
            Some(p) => fs::write(p, &self.text),
            None => std::io::stdout().write_all(self.text.as_bytes()),
        }
    }
}

/// Reads JSON, reporting syntax and schema errors with their position.
fn read<T: DeserializeOwned>(path: &FsPath) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Input(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn run(command: Command, seed: u64, out: &mut Output) -> Outcome {
    match command {
        Command::Gen(g) => gen(g, out),
        Command::Grainline(c) => grainline(c, out),
        Command::Minors(c) => minors(c, out),
        Command::Sep(c) => sep(c, out),
        Command::Immerse(c) => immerse(c, out),
        Command::Harness(HarnessCmd::Acceptance { suite }) => harness(&suite, seed, out),
        Command::Export { input } => export(&input, out),
    }
}

fn gen(cmd: Gen, out: &mut Output) -> Outcome {
    let (leveled, opts) = match cmd {
        Gen::Farey(opts) => {
            if opts.metadata.is_some() || opts.format == Format::GrainLine {
                return Err(Failure::Input("the Farey graph carries no grain line".into()));
            }
            return emit_graph(&farey(opts.order), opts.format, out);
        }
        Gen::Halved(opts) => (halved_farey(opts.order), opts),
        Gen::Ghf { lengths, opts } => (generalised_halved_farey(&lengths, opts.order)?, opts),
    };
    if let Some(path) = &opts.metadata {
        fs::write(path, serde_json::to_string_pretty(&leveled.metadata())? + "\n")?;
    }
    match opts.format {
        Format::GrainLine => out.json(&leveled.grain_line()),
        f => emit_graph(leveled.graph(), f, out),
    }
}

fn emit_graph(g: &Graph, format: Format, out: &mut Output) -> Outcome {
    match format {
        Format::Dot => {
            out.raw(&to_dot(g));
            Ok(())
        }
        _ => out.json(g),
    }
}

fn grainline(cmd: GrainlineCmd, out: &mut Output) -> Outcome {
    match cmd {
        GrainlineCmd::Check { input } => {
            let gl: GrainLine = read(&input)?;
            let report = check_grain_line(&gl);
            out.json(&json!({ "valid": report.is_valid(), "violations": report.violations }))?;
            if report.is_valid() {
                Ok(())
            } else {
                Err(Failure::Violation)
            }
        }
        GrainlineCmd::Extract { input } => {
            let paths: Vec<Path> = read(&input)?;
            out.json(&extract_grain_line(&paths)?)
        }
        GrainlineCmd::Report { input } => {
            let gl: GrainLine = read(&input)?;
            let report = check_grain_line(&gl);
            if !report.is_valid() {
                out.json(&json!({ "valid": false, "violations": report.violations }))?;
                return Err(Failure::Violation);
            }
            let prime = check_prime_axioms(&gl)?;
            out.json(&json!({
                "valid": true,
                "horizon": gl.horizon(),
                "L": gl.order().len(),
                "gl2_prime": prime.gl2_prime,
                "gl3_prime": prime.gl3_prime,
                "well_structured": is_well_structured(&gl),
                "free": is_free(&gl),
                "wildly_presented": is_wildly_presented(&gl),
                "density": density_report(&gl),
            }))
        }
    }
}

/// Prints a search report; budget exhaustion exits 3.
fn search_result<M: Serialize>(r: &SearchReport<M>, out: &mut Output) -> Outcome {
    out.json(r)?;
    if r.outcome.is_unknown() {
        Err(Failure::Unknown)
    } else {
        Ok(())
    }
}

fn minors(cmd: MinorsCmd, out: &mut Output) -> Outcome {
    match cmd {
        MinorsCmd::FindSubdivision { pattern, host, budget } => {
            let (p, h): (Graph, Graph) = (read(&pattern)?, read(&host)?);
            search_result(
                &find_subdivision(&p, &h, &SearchOptions::with_budget(budget.budget)),
                out,
            )
        }
        MinorsCmd::Dive {
            outer,
            inner,
            k_max,
            lengths,
        } => {
            let (o, i): (GrainLine, GrainLine) = (read(&outer)?, read(&inner)?);
            let trace = dive(&o, &i, k_max)?;
            let failures = check_dive_trace(&o, &i, &trace, lengths.as_ref());
            out.json(&json!({ "trace": trace, "failures": failures }))?;
            if failures.is_empty() {
                Ok(())
            } else {
                Err(Failure::Violation)
            }
        }
        MinorsCmd::Project { outer, inner } => {
            let (o, i): (GrainLine, GrainLine) = (read(&outer)?, read(&inner)?);
            out.json(&interval_projection(&o, &i))
        }
        MinorsCmd::Thm31 {
            families,
            horizon,
            budget,
        } => {
            let lines = families
                .iter()
                .map(|p| read::<GrainLine>(p))
                .collect::<Result<Vec<_>, _>>()?;
            let report = theorem31_experiment(&lines, horizon, &SearchOptions::with_budget(budget.budget))?;
            out.json(&json!({ "report": report, "conclusive": false }))?;
            if report.exhaustive {
                Ok(())
            } else {
                Err(Failure::Unknown)
            }
        }
    }
}

fn sep(cmd: SepCmd, out: &mut Output) -> Outcome {
    match cmd {
        SepCmd::Blocks { input, c } => {
            let g: Graph = read(&input)?;
            out.json(&edge_blocks(&g, c))
        }
        SepCmd::Tcd { input, c } => {
            let g: Graph = read(&input)?;
            out.json(&tree_cut_decomposition(&g, c)?)
        }
        SepCmd::Find { input, u, v, s, f } => {
            let g: Graph = read(&input)?;
            let f = f.unwrap_or(g.edge_count());
            out.json(&find_compound_separation(&g, &u, &v, s, f)?)
        }
        SepCmd::Peel { input, steps, f } => {
            let g: Graph = read(&input)?;
            let f = f.unwrap_or(g.edge_count());
            let report = iterated_split(&g, f, steps)?;
            out.json(&report)?;
            if report.holds() {
                Ok(())
            } else {
                Err(Failure::Violation)
            }
        }
        SepCmd::Faithful { input, w, c } => {
            let g: Graph = read(&input)?;
            let seps = faithful_set(&g, &w, c)?;
            let report = check_faithful(&g, &w, &seps, c.saturating_sub(1))?;
            out.json(&json!({ "separations": seps, "report": report }))?;
            if report.is_faithful() {
                Ok(())
            } else {
                Err(Failure::Violation)
            }
        }
        SepCmd::Clique { input, x, t, c } => {
            let g: Graph = read(&input)?;
            let x: BTreeSet<Vertex> = x.into_iter().collect();
            out.json(&complete_immersion_from_blocks(&g, &x, t, c)?)
        }
    }
}

fn immerse(cmd: ImmerseCmd, out: &mut Output) -> Outcome {
    match cmd {
        ImmerseCmd::Build { order, host } => {
            let gl: GrainLine = read(&host)?;
            out.json(&immerse_halved_farey(&gl, order)?)
        }
        ImmerseCmd::Verify { input } => {
            let model: ImmersionModel = read(&input)?;
            let report = verify_immersion(&model);
            out.json(&json!({ "valid": report.is_valid(), "violations": report.violations }))?;
            if report.is_valid() {
                Ok(())
            } else {
                Err(Failure::Violation)
            }
        }
        ImmerseCmd::Brute {
            pattern,
            host,
            strong,
            budget,
        } => {
            let (p, h): (Graph, Graph) = (read(&pattern)?, read(&host)?);
            search_result(
                &find_immersion_bruteforce(&p, &h, strong, &SearchOptions::with_budget(budget.budget)),
                out,
            )
        }
        ImmerseCmd::Bound { host, branch } => {
            let gl: GrainLine = read(&host)?;
            let u: BTreeSet<Vertex> = branch.into_iter().collect();
            out.json(&cut_bound_complete_in_halved(&gl, &u)?)
        }
        ImmerseCmd::Wild { graph, x, y, seps } => {
            let g: Graph = read(&graph)?;
            let seps: Vec<CompoundSeparation> = read(&seps)?;
            out.json(&wild_separations_to_grainline(&g, &x, &y, &seps)?)
        }
    }
}

fn harness(suite: &str, seed: u64, out: &mut Output) -> Outcome {
    let results = if suite == "all" {
        run_all(seed)
    } else {
        let id: usize = suite
            .parse()
            .map_err(|_| Failure::Input(format!("suite must be `all` or 1..={}", criterion_count())))?;
        let r = run_criterion(id, seed)
            .ok_or_else(|| Failure::Input(format!("no criterion {id}; there are {}", criterion_count())))?;
        vec![r]
    };
    let passed = results.iter().all(|r| r.passed);
    out.json(&json!({ "seed": seed, "passed": passed, "criteria": results }))?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

/// Graph JSON goes out as plain DOT; grain-line JSON labels each edge with
/// its depth.
fn export(input: &FsPath, out: &mut Output) -> Outcome {
    let value: Value = read(input)?;
    if value.get("L").is_some() {
        let gl: GrainLine = serde_json::from_value(value)?;
        let depth: BTreeMap<_, _> = gl
            .paths()
            .iter()
            .enumerate()
            .flat_map(|(n, p)| p.edges().map(move |e| (e, n)))
            .collect();
        out.raw(&to_dot_with(&gl.host(), |e| {
            depth.get(e).map(|d| format!("label=\"{d}\""))
        }));
    } else {
        let g: Graph = serde_json::from_value(value)?;
        out.raw(&to_dot(&g));
    }
    Ok(())
}
