//! Command-line surface: density profiles, subdivision search, the
//! certificate pipeline, bound tables, generators, family trends, and
//! witness verification. Errors go to stderr as JSON; outputs are written
//! atomically when a path is given, otherwise to stdout.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use topograd::bounds::{bexp_bound_table, main1_bound_f, nd_bound_function, BoundTable};
use topograd::config::Config;
use topograd::density::{density_profile, family_trend, nabla_measure, Measure};
use topograd::error::Error;
use topograd::find::find_subdivision;
use topograd::generate::{self, GenOutput, GeneratorSpec, HostNoise};
use topograd::graph::{Graph, Rational};
use topograd::io::{
    parse_edge_list, profile_to_csv, rational_string, serialize_edge_list, witness_from_json,
    witness_to_json,
};
use topograd::pipeline::{run_pipeline, PipelineParams};
use topograd::witness::{verify_witness, DepthMode, Occurrence, SubdivisionSpec};

#[derive(Parser)]
#[command(name = "topograd", version, about = "Exact toolkit for depth-bounded subdivision density measures")]
struct Cli {
    /// Worker threads for the branch-set fan-out (default: TOPOGRAD_WORKERS or 1).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Node budget per search call.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Instance size up to which enumerative searches are guaranteed exact.
    #[arg(long, global = true)]
    exhaustive_bound: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the density profile of a graph as CSV.
    Density(DensityArgs),
    /// Search for a subdivision occurrence of a pattern.
    Find(FindArgs),
    /// Run the certificate pipeline (exit 0 completed, 2 halted at a stage).
    Pipeline(PipelineArgs),
    /// Evaluate a bound recurrence to a JSON table.
    Bounds(BoundsArgs),
    /// Generate graphs and planted instances.
    Gen(GenArgs),
    /// Fit the log-log growth of a density measure over a family directory.
    Trend(TrendArgs),
    /// Re-check a witness; exit 0 iff no violations.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DensityArgs {
    /// Graph file (edge-list format).
    file: PathBuf,
    #[arg(long)]
    kmax: u32,
    #[arg(long, value_enum, default_value_t = MeasureArg::All)]
    measure: MeasureArg,
    /// Output file (stdout when absent).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    All,
    Nabla,
    Induced,
    Exact,
}

#[derive(Args)]
struct FindArgs {
    file: PathBuf,
    #[arg(long)]
    pattern: PathBuf,
    /// Subdivision depth (ignored for --mode unbounded).
    #[arg(long, default_value_t = 0)]
    k: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Atmost)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = OccurrenceArg::Subgraph)]
    occurrence: OccurrenceArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Atmost,
    Exact,
    Unbounded,
}

#[derive(Clone, Copy, ValueEnum)]
enum OccurrenceArg {
    Subgraph,
    Induced,
}

#[derive(Args)]
struct PipelineArgs {
    file: PathBuf,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    r: u64,
    #[arg(long)]
    s: u64,
    #[arg(long)]
    relaxed: bool,
    /// Pattern whose depth-k subdivision seeds the run; a witness is
    /// searched unless --seed-witness provides one.
    #[arg(long)]
    seed_pattern: Option<PathBuf>,
    /// Witness JSON for the seed pattern.
    #[arg(long, requires = "seed_pattern")]
    seed_witness: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    mode: BoundsMode,
    /// f table as JSON (see README for the per-mode shapes).
    #[arg(long, required_if_eq_any = [("mode", "bexp"), ("mode", "nd")])]
    f: Option<PathBuf>,
    #[arg(long)]
    kmax: Option<u32>,
    /// Pattern file (main1 mode).
    #[arg(long)]
    pattern: Option<PathBuf>,
    /// Forbidden clique/biclique order s (main1 mode, provenance only).
    #[arg(long)]
    s: Option<u64>,
    /// The c constant as a rational string (main1 mode).
    #[arg(long)]
    c: Option<String>,
    /// The depth-0 constant d (main1 mode).
    #[arg(long)]
    d: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundsMode {
    Bexp,
    Nd,
    Main1,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    what: GenCommand,
}

#[derive(Subcommand)]
enum GenCommand {
    Complete {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Biclique {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Cycle {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Path {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Subdivide each pattern edge by the given numbers of vertices.
    Subdivision {
        #[arg(long)]
        pattern: PathBuf,
        /// Comma-separated per-edge counts in canonical edge order.
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where to write the ground-truth witness JSON.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Bipartite {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Plant a depth-k subdivision and surround it with noise.
    Planted {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        k: u32,
        /// Subdivide every edge exactly k times instead of at most k.
        #[arg(long)]
        exact_depth: bool,
        #[arg(long, default_value_t = 0)]
        noise_vertices: usize,
        #[arg(long, default_value_t = 0.0)]
        noise_prob: f64,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Rejection-sample graphs free of K_s, K_{s,s}, and induced
    /// subdivisions of the pattern.
    Filtered {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        edge_prob: f64,
        #[arg(long, default_value_t = 100_000)]
        max_attempts: usize,
        /// Directory for member_###.el files.
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct TrendArgs {
    /// Directory of .el graph files.
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum, default_value_t = MeasureArg::Nabla)]
    measure: MeasureArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    witness: PathBuf,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    pattern: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = Config::from_env();
    if let Some(w) = cli.workers {
        cfg.workers = w.max(1);
    }
    if let Some(b) = cli.budget {
        cfg.max_nodes = b;
    }
    if let Some(e) = cli.exhaustive_bound {
        cfg.exhaustive_bound = e;
    }
    match run(cli.command, &cfg) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{}", serde_json::to_string(&err).expect("error serializes"));
            ExitCode::from(1)
        }
    }
}

fn run(command: Command, cfg: &Config) -> Result<ExitCode, Error> {
    match command {
        Command::Density(args) => {
            let g = load_graph(&args.file)?;
            let text = match args.measure {
                MeasureArg::All => profile_to_csv(&density_profile(&g, args.kmax, cfg)?),
                single => {
                    let measure = single_measure(single);
                    let mut out = format!("k,{measure},complete\n");
                    for k in 0..=args.kmax {
                        let r = nabla_measure(&g, k, measure, cfg)?;
                        out.push_str(&format!(
                            "{},{},{}\n",
                            k,
                            rational_string::to_string(&r.value),
                            r.complete
                        ));
                    }
                    out
                }
            };
            emit(&args.output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Find(args) => {
            let g = load_graph(&args.file)?;
            let h = load_graph(&args.pattern)?;
            let spec = build_spec(args.mode, args.k, args.occurrence);
            match find_subdivision(&g, &h, spec, cfg)? {
                Some(witness) => {
                    emit(&args.output, &witness_to_json(&h, spec, &witness))?;
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    emit(&args.output, "none\n")?;
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Pipeline(args) => {
            let g = load_graph(&args.file)?;
            let params =
                PipelineParams { k: args.k, r: args.r, s: args.s, relaxed: args.relaxed };
            let seed = match &args.seed_pattern {
                None => None,
                Some(path) => {
                    let pattern = load_graph(path)?;
                    let witness = match &args.seed_witness {
                        Some(wpath) => {
                            let text = read_file(wpath)?;
                            let (_, w) = witness_from_json(&text, &pattern)?;
                            w
                        }
                        None => {
                            let spec = SubdivisionSpec::at_most(args.k, Occurrence::Subgraph);
                            find_subdivision(&g, &pattern, spec, cfg)?.ok_or_else(|| {
                                Error::InvalidInput(
                                    "seed pattern has no depth-k subdivision in the graph".into(),
                                )
                            })?
                        }
                    };
                    Some((pattern, witness))
                }
            };
            let cert = run_pipeline(
                &g,
                &params,
                seed.as_ref().map(|(p, w)| (p, w)),
                cfg,
            )?;
            let json = serde_json::to_string_pretty(&cert).expect("certificate serializes");
            emit(&args.output, &json)?;
            Ok(if cert.completed() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Bounds(args) => {
            let table = bounds_table(&args)?;
            let json = serde_json::to_string_pretty(&table).expect("table serializes");
            emit(&args.output, &json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen(args) => {
            gen_command(args.what, cfg)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Trend(args) => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(&args.family)
                .map_err(|e| Error::InvalidInput(format!("family dir: {e}")))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "el"))
                .collect();
            files.sort();
            let family: Vec<Graph> =
                files.iter().map(|p| load_graph(p)).collect::<Result<_, _>>()?;
            let estimate = family_trend(&family, args.k, single_measure(args.measure), cfg)?;
            let json = serde_json::to_string_pretty(&estimate).expect("trend serializes");
            emit(&args.output, &json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let g = load_graph(&args.graph)?;
            let pattern = load_graph(&args.pattern)?;
            let text = read_file(&args.witness)?;
            let (spec, witness) = witness_from_json(&text, &pattern)?;
            let violations = verify_witness(&g, &pattern, spec, &witness);
            println!("{}", serde_json::to_string_pretty(&violations).expect("serializes"));
            Ok(if violations.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
    }
}

fn single_measure(arg: MeasureArg) -> Measure {
    match arg {
        MeasureArg::Nabla | MeasureArg::All => Measure::Nabla,
        MeasureArg::Induced => Measure::NablaInduced,
        MeasureArg::Exact => Measure::NablaExact,
    }
}

fn build_spec(mode: ModeArg, k: u32, occurrence: OccurrenceArg) -> SubdivisionSpec {
    let depth = match mode {
        ModeArg::Atmost => DepthMode::AtMost(k),
        ModeArg::Exact => DepthMode::Exactly(k),
        ModeArg::Unbounded => DepthMode::Unbounded,
    };
    let occurrence = match occurrence {
        OccurrenceArg::Subgraph => Occurrence::Subgraph,
        OccurrenceArg::Induced => Occurrence::Induced,
    };
    SubdivisionSpec { depth, occurrence }
}

#[derive(Deserialize)]
struct NdEntry {
    k: u32,
    n: u64,
    value: String,
}

fn bounds_table(args: &BoundsArgs) -> Result<BoundTable, Error> {
    match args.mode {
        BoundsMode::Bexp => {
            let text = read_file(args.f.as_ref().expect("clap enforces --f"))?;
            let raw: Vec<String> = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidInput(format!("f table JSON: {e}")))?;
            let f = parse_rationals(&raw)?;
            let kmax = args.kmax.unwrap_or(f.len().saturating_sub(1) as u32);
            bexp_bound_table(&f, kmax)
        }
        BoundsMode::Nd => {
            let text = read_file(args.f.as_ref().expect("clap enforces --f"))?;
            let raw: Vec<NdEntry> = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidInput(format!("f table JSON: {e}")))?;
            let mut f = BTreeMap::new();
            let mut sizes = Vec::new();
            let mut kmax = 0;
            for entry in raw {
                let value = rational_string::from_string(&entry.value)
                    .map_err(Error::InvalidInput)?;
                kmax = kmax.max(entry.k);
                sizes.push(entry.n);
                f.insert((entry.k, entry.n), value);
            }
            let kmax = args.kmax.unwrap_or(kmax);
            nd_bound_function(&f, kmax, &sizes)
        }
        BoundsMode::Main1 => {
            let pattern = load_graph(args.pattern.as_ref().ok_or_else(|| {
                Error::InvalidInput("main1 mode needs --pattern".into())
            })?)?;
            let s = args.s.ok_or_else(|| Error::InvalidInput("main1 mode needs --s".into()))?;
            let c = rational_string::from_string(
                args.c.as_deref().ok_or_else(|| Error::InvalidInput("main1 mode needs --c".into()))?,
            )
            .map_err(Error::InvalidInput)?;
            let d = args.d.ok_or_else(|| Error::InvalidInput("main1 mode needs --d".into()))?;
            let kmax = args.kmax.unwrap_or(2);
            let f = main1_bound_f(&pattern, s, &c, d, kmax)?;
            bexp_bound_table(&f, kmax)
        }
    }
}

fn parse_rationals(raw: &[String]) -> Result<Vec<Rational>, Error> {
    raw.iter()
        .map(|s| rational_string::from_string(s).map_err(Error::InvalidInput))
        .collect()
}

fn gen_command(what: GenCommand, cfg: &Config) -> Result<(), Error> {
    let write_graph = |output: &Option<PathBuf>, g: &Graph| emit(output, &serialize_edge_list(g));
    match what {
        GenCommand::Complete { n, output } => {
            write_graph(&output, &generate::complete(n))
        }
        GenCommand::Biclique { s, t, output } => {
            write_graph(&output, &generate::biclique(s, t))
        }
        GenCommand::Cycle { n, output } => {
            if n < 3 {
                return Err(Error::InvalidSpec("cycle needs n >= 3".into()));
            }
            write_graph(&output, &generate::cycle(n))
        }
        GenCommand::Path { n, output } => write_graph(&output, &generate::path(n)),
        GenCommand::Subdivision { pattern, lengths, output, witness_out } => {
            let h = load_graph(&pattern)?;
            let spec = GeneratorSpec::Subdivision { pattern: h.clone(), lengths };
            match generate::generate(&spec, cfg)? {
                GenOutput::WithWitness(inst) => {
                    write_graph(&output, &inst.graph)?;
                    if let Some(path) = witness_out {
                        emit(&Some(path), &witness_to_json(&inst.pattern, inst.spec, &inst.witness))?;
                    }
                    Ok(())
                }
                _ => unreachable!("subdivision always yields a witness"),
            }
        }
        GenCommand::Gnp { n, p, seed, output } => {
            write_graph(&output, &generate::random_gnp(n, p, seed)?)
        }
        GenCommand::Bipartite { a, b, p, seed, output } => {
            write_graph(&output, &generate::random_bipartite(a, b, p, seed)?.0)
        }
        GenCommand::Planted {
            pattern,
            k,
            exact_depth,
            noise_vertices,
            noise_prob,
            seed,
            output,
            witness_out,
        } => {
            let h = load_graph(&pattern)?;
            let noise = HostNoise { extra_vertices: noise_vertices, edge_prob: noise_prob };
            let inst = generate::planted(&h, k, exact_depth, noise, seed)?;
            write_graph(&output, &inst.graph)?;
            if let Some(path) = witness_out {
                emit(&Some(path), &witness_to_json(&inst.pattern, inst.spec, &inst.witness))?;
            }
            Ok(())
        }
        GenCommand::Filtered {
            pattern,
            s,
            n,
            count,
            seed,
            edge_prob,
            max_attempts,
            output,
        } => {
            let h = load_graph(&pattern)?;
            let family =
                generate::filtered_family(&h, s, n, count, seed, edge_prob, max_attempts, cfg)?;
            std::fs::create_dir_all(&output)
                .map_err(|e| Error::InvalidInput(format!("create {output:?}: {e}")))?;
            for (i, g) in family.iter().enumerate() {
                let path = output.join(format!("member_{i:03}.el"));
                write_atomic(&path, &serialize_edge_list(g))?;
            }
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph, Error> {
    parse_edge_list(&read_file(path)?)
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("read {path:?}: {e}")))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => write_atomic(path, text),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

/// Write via a sibling temp file and rename, so partial output never
/// lands under the target name.
fn write_atomic(path: &Path, text: &str) -> Result<(), Error> {
    let tmp = path.with_extension("tmp-write");
    std::fs::write(&tmp, text).map_err(|e| Error::InvalidInput(format!("write {tmp:?}: {e}")))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| Error::InvalidInput(format!("rename into {path:?}: {e}")))?;
    Ok(())
}

