//! Command-line front end for the temporal graph cut solvers.
//!
//! Subcommands: `cut` (solve with one of stc/fstc/single/union/lap),
//! `wavelet` (signal-driven cut), `compress` (signal compression, wavelet
//! or Fourier), `synth` (benchmark generator), `oracle` (exact optimum by
//! enumeration) and `bench` (small quality/perf tables). JSON reports all
//! carry a schema-version field; outputs are reproducible given `--seed`.
//!
//! Exit codes: 2 for argument/validation errors, 3 when a solver fails to
//! converge, 4 when the oracle refuses an instance as too large.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;

use tempocut_core::baselines::{lap_baseline, single_baseline, union_baseline};
use tempocut_core::cuts::{
    kway_cut, score, stc_relax, sweep_round, CutError, CutReport, Objective, TemporalCut,
};
use tempocut_core::eigen::EigenError;
use tempocut_core::fstc::{default_rank, fstc_cut, FstcError};
use tempocut_core::graph::{GraphError, MultiplexParams, MultiplexView, TemporalGraph};
use tempocut_core::oracle::{brute_force_optimal, kway_metrics, OracleError};
use tempocut_core::synth::{format_labels, generate, SynthConfig};
use tempocut_core::wavelets::{
    best_wavelet_cut, compress, graph_fourier_compress, SignalSeries, WaveletError,
};

const SCHEMA_VERSION: &str = "tempocut/1";

#[derive(Parser)]
#[command(name = "tempocut", version, about = "Sparsest and normalized cuts on temporal graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for a temporal cut and write a JSON report.
    Cut(CutArgs),
    /// Signal-driven wavelet cut.
    Wavelet(WaveletArgs),
    /// Compress a dynamic signal (recursive wavelet cuts or Graph Fourier).
    Compress(CompressArgs),
    /// Generate a planted moving-partition benchmark instance.
    Synth(SynthArgs),
    /// Exact optimum by enumeration (small instances only).
    Oracle(OracleArgs),
    /// Run the bundled quality or performance table.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Stc,
    Fstc,
    Single,
    Union,
    Lap,
}

impl Method {
    fn name(&self) -> &'static str {
        match self {
            Method::Stc => "stc",
            Method::Fstc => "fstc",
            Method::Single => "single",
            Method::Union => "union",
            Method::Lap => "lap",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Sparsest,
    Normalized,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Sparsest => Objective::Sparsest,
            ObjectiveArg::Normalized => Objective::Normalized,
        }
    }
}

#[derive(Args)]
struct CutArgs {
    /// Temporal graph file (`n m` header, then `t u v w` lines).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long, value_enum, default_value = "sparsest")]
    objective: ObjectiveArg,
    /// Uniform swap cost.
    #[arg(long)]
    beta: f64,
    /// FSTC rank (defaults to min(n, 64)).
    #[arg(long)]
    rank: Option<usize>,
    /// Partition count; k > 2 runs the k-way extension (stc only).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct WaveletArgs {
    #[arg(long)]
    input: PathBuf,
    /// Signal CSV: n rows, m columns.
    #[arg(long)]
    signal: PathBuf,
    /// Graph-smoothness regularization weight.
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompressMethod {
    Wavelet,
    Fourier,
}

#[derive(Args)]
struct CompressArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    signal: PathBuf,
    /// Representation size (number of parts / eigenvectors).
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, value_enum, default_value = "wavelet")]
    method: CompressMethod,
    /// Emit `k,error` CSV rows for k in MIN:MAX instead of a single run.
    #[arg(long, value_parser = parse_range)]
    curve: Option<(usize, usize)>,
    #[arg(long)]
    output: PathBuf,
    /// Optional reconstruction CSV path.
    #[arg(long)]
    recon: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected MIN:MAX, got {s:?}"))?;
    let lo = a.parse().map_err(|e| format!("bad MIN: {e}"))?;
    let hi = b.parse().map_err(|e| format!("bad MAX: {e}"))?;
    if lo == 0 || hi < lo {
        return Err(format!("need 1 <= MIN <= MAX, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    n: usize,
    /// Planted partition size (defaults to n/2).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    h: usize,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Output prefix; writes PREFIX.graph and PREFIX.labels.
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    beta: f64,
    #[arg(long, value_enum, default_value = "sparsest")]
    objective: ObjectiveArg,
    /// JSON output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Quality,
    Perf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long)]
    out: PathBuf,
}

// ---------------------------------------------------------------------------
// error mapping
// ---------------------------------------------------------------------------

struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        Self { code: 2, message: msg.into() }
    }
}

fn eigen_code(e: &EigenError) -> i32 {
    match e {
        EigenError::NotConverged { .. } | EigenError::SolveNotConverged { .. } => 3,
        _ => 2,
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<EigenError> for CliError {
    fn from(e: EigenError) -> Self {
        CliError { code: eigen_code(&e), message: e.to_string() }
    }
}

impl From<CutError> for CliError {
    fn from(e: CutError) -> Self {
        let code = match &e {
            CutError::Eigen(inner) => eigen_code(inner),
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<FstcError> for CliError {
    fn from(e: FstcError) -> Self {
        let code = match &e {
            FstcError::Eigen(inner) => eigen_code(inner),
            FstcError::Cut(CutError::Eigen(inner)) => eigen_code(inner),
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<WaveletError> for CliError {
    fn from(e: WaveletError) -> Self {
        let code = match &e {
            WaveletError::Eigen(inner) => eigen_code(inner),
            WaveletError::Cut(CutError::Eigen(inner)) => eigen_code(inner),
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        let code = match &e {
            OracleError::TooLarge { .. } => 4,
            OracleError::Cut(CutError::Eigen(inner)) => eigen_code(inner),
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<tempocut_core::synth::SynthError> for CliError {
    fn from(e: tempocut_core::synth::SynthError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

fn labels_json(cut: &TemporalCut) -> serde_json::Value {
    let per_t: Vec<Vec<usize>> = (0..cut.m())
        .map(|t| (0..cut.n()).map(|v| cut.label(v, t)).collect())
        .collect();
    json!(per_t)
}

fn report_json(rep: &CutReport) -> serde_json::Value {
    json!({
        "cut_weight": rep.cut_weight,
        "swaps": rep.swaps,
        "objective": rep.objective,
        "objective_kind": rep.objective_kind.as_str(),
        "beta": rep.beta,
    })
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn load_instance(
    input: &PathBuf,
    beta: f64,
) -> Result<(TemporalGraph, MultiplexParams), CliError> {
    let tg = TemporalGraph::read_file(input)?;
    let params = MultiplexParams::uniform(beta)?;
    MultiplexView::new(&tg, &params)?;
    Ok((tg, params))
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn solve_binary(
    method: Method,
    tg: &TemporalGraph,
    params: &MultiplexParams,
    kind: Objective,
    rank: Option<usize>,
) -> Result<(TemporalCut, CutReport, Option<serde_json::Value>), CliError> {
    match method {
        Method::Stc => {
            let (v, lambda) = stc_relax(tg, params, kind)?;
            let (cut, rep) = sweep_round(v.as_slice().unwrap(), tg, params, kind)?;
            Ok((cut, rep, Some(json!({ "relaxed_eigenvalue": lambda }))))
        }
        Method::Fstc => {
            let r = rank.unwrap_or_else(|| default_rank(tg.n()));
            let (cut, rep, diag) = fstc_cut(tg, params, kind, r)?;
            let extra = json!({
                "rank": diag.rank,
                "lambda_tail_max": diag.lambda_tail_max,
                "error_bound": diag.error_bound,
                "q_top_eigenvalue": diag.q_top_eigenvalue,
                "rank_too_small": diag.rank_too_small,
            });
            Ok((cut, rep, Some(extra)))
        }
        Method::Single => {
            let cut = single_baseline(tg, params, kind)?;
            let rep = score(tg, &cut, params, kind)?;
            Ok((cut, rep, None))
        }
        Method::Union => {
            let cut = union_baseline(tg, params, kind)?;
            let rep = score(tg, &cut, params, kind)?;
            Ok((cut, rep, None))
        }
        Method::Lap => {
            let cut = lap_baseline(tg, params, kind)?;
            let rep = score(tg, &cut, params, kind)?;
            Ok((cut, rep, None))
        }
    }
}

fn cmd_cut(args: CutArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let (tg, params) = load_instance(&args.input, args.beta)?;
    let kind: Objective = args.objective.into();
    let k = args.k.unwrap_or(2);
    if k < 2 {
        return Err(CliError::usage(format!("--k must be at least 2, got {k}")));
    }

    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "method": args.method.name(),
        "objective": kind.as_str(),
        "parameters": {
            "beta": args.beta,
            "rank": args.rank,
            "k": k,
            "seed": args.seed,
        },
    });

    if k > 2 {
        if !matches!(args.method, Method::Stc) {
            return Err(CliError::usage(
                "k-way cuts (--k > 2) are supported by --method stc only",
            ));
        }
        let cut = kway_cut(&tg, &params, kind, k, args.seed)?;
        let metrics = kway_metrics(&tg, &cut, &params)?;
        out["labels"] = labels_json(&cut);
        out["kway"] = json!({
            "cut_weight": metrics.cut_weight,
            "sparsity": metrics.sparsity,
            "n_sparsity": metrics.n_sparsity,
        });
        out["wall_time_seconds"] = json!(started.elapsed().as_secs_f64());
        write_json(&args.output, &out)?;
        println!(
            "k-way cut: k={k} cut_weight={:.6} sparsity={:.6} -> {}",
            metrics.cut_weight,
            metrics.sparsity,
            args.output.display()
        );
        return Ok(());
    }

    let (cut, rep, extra) = solve_binary(args.method, &tg, &params, kind, args.rank)?;
    out["labels"] = labels_json(&cut);
    out["report"] = report_json(&rep);
    if let Some(extra) = extra {
        out["diagnostics"] = extra;
    }
    out["wall_time_seconds"] = json!(started.elapsed().as_secs_f64());
    write_json(&args.output, &out)?;
    println!(
        "{} {}: objective {:.9} -> {}",
        args.method.name(),
        kind,
        rep.objective,
        args.output.display()
    );
    Ok(())
}

fn cmd_wavelet(args: WaveletArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let (tg, params) = load_instance(&args.input, args.beta)?;
    let signal = SignalSeries::read_file(&args.signal)?;
    let (cut, energy) = best_wavelet_cut(&tg, &signal, args.alpha, &params)?;
    let out = json!({
        "schema_version": SCHEMA_VERSION,
        "labels": labels_json(&cut),
        "energy": energy,
        "alpha": args.alpha,
        "beta": args.beta,
        "wall_time_seconds": started.elapsed().as_secs_f64(),
    });
    write_json(&args.output, &out)?;
    println!("wavelet cut: energy {:.6} -> {}", energy, args.output.display());
    Ok(())
}

fn cmd_compress(args: CompressArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let (tg, params) = load_instance(&args.input, args.beta)?;
    let signal = SignalSeries::read_file(&args.signal)?;

    // (error, reconstruction, wavelet leaf summaries)
    let run_at =
        |k: usize| -> Result<(f64, SignalSeries, Option<serde_json::Value>), CliError> {
            match args.method {
                CompressMethod::Wavelet => {
                    let tree = compress(&tg, &signal, k, args.alpha, &params)?;
                    let leaves: Vec<serde_json::Value> = tree
                        .leaves()
                        .iter()
                        .map(|(members, mean)| json!({ "size": members.len(), "mean": mean }))
                        .collect();
                    Ok((tree.l2_error(), tree.reconstruct(), Some(json!(leaves))))
                }
                CompressMethod::Fourier => {
                    let recon = graph_fourier_compress(&tg, &params, &signal, k)?;
                    Ok((recon.l2_error(&signal), recon, None))
                }
            }
        };

    if let Some((lo, hi)) = args.curve {
        let mut csv = String::from("k,error\n");
        for k in lo..=hi.min(tg.node_count()) {
            let (err, _, _) = run_at(k)?;
            csv.push_str(&format!("{k},{err}\n"));
        }
        std::fs::write(&args.output, csv)?;
        println!("compression curve -> {}", args.output.display());
        return Ok(());
    }

    let (err, recon, leaves) = run_at(args.k)?;
    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "method": match args.method { CompressMethod::Wavelet => "wavelet", CompressMethod::Fourier => "fourier" },
        "k": args.k,
        "alpha": args.alpha,
        "beta": args.beta,
        "l2_error": err,
    });
    if let Some(leaves) = leaves {
        out["leaves"] = leaves;
    }
    out["wall_time_seconds"] = json!(started.elapsed().as_secs_f64());
    write_json(&args.output, &out)?;
    if let Some(path) = &args.recon {
        recon.write_file(path)?;
    }
    println!("compression: k={} error {:.9} -> {}", args.k, err, args.output.display());
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> Result<(), CliError> {
    let cfg = SynthConfig {
        n: args.n,
        k: args.k.unwrap_or(args.n / 2),
        h: args.h,
        eps: args.eps,
        m: args.m,
        seed: args.seed,
    };
    let (tg, truth) = generate(&cfg)?;
    let graph_path = format!("{}.graph", args.out);
    let labels_path = format!("{}.labels", args.out);
    std::fs::write(&graph_path, tg.to_text())?;
    std::fs::write(&labels_path, format_labels(&truth))?;
    println!("wrote {graph_path} and {labels_path}");
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let (tg, params) = load_instance(&args.input, args.beta)?;
    let kind: Objective = args.objective.into();
    let (cut, optimum) = brute_force_optimal(&tg, &params, kind)?;
    let out = json!({
        "schema_version": SCHEMA_VERSION,
        "objective_kind": kind.as_str(),
        "beta": args.beta,
        "optimum": optimum,
        "labels": labels_json(&cut),
        "wall_time_seconds": started.elapsed().as_secs_f64(),
    });
    match &args.output {
        Some(path) => {
            write_json(path, &out)?;
            println!("optimum {:.9} -> {}", optimum, path.display());
        }
        None => println!("{}", serde_json::to_string_pretty(&out).expect("serializable")),
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    std::fs::create_dir_all(&args.out)?;
    match args.suite {
        Suite::Quality => bench_quality(&args.out),
        Suite::Perf => bench_perf(&args.out),
    }
}

type BenchRun<'a> = Box<dyn Fn() -> Result<(), CliError> + 'a>;

const BUNDLED_INSTANCE: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/migration.tg"));

fn bench_quality(dir: &Path) -> Result<(), CliError> {
    let tg = TemporalGraph::parse_str(BUNDLED_INSTANCE)?;
    let methods = [Method::Stc, Method::Fstc, Method::Single, Method::Union, Method::Lap];
    for kind in [Objective::Sparsest, Objective::Normalized] {
        let mut csv = String::from("method,beta,objective\n");
        for method in methods {
            for beta in [0.5, 1.0, 2.0] {
                let params = MultiplexParams::uniform(beta)?;
                let row = match solve_binary(method, &tg, &params, kind, Some(tg.n())) {
                    Ok((_, rep, _)) => format!("{},{},{}\n", method.name(), beta, rep.objective),
                    Err(e) => {
                        eprintln!("bench: {} {} beta {}: {}", method.name(), kind, beta, e.message);
                        format!("{},{},\n", method.name(), beta)
                    }
                };
                csv.push_str(&row);
            }
        }
        let path = dir.join(format!("quality_{kind}.csv"));
        std::fs::write(&path, csv)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn bench_perf(dir: &Path) -> Result<(), CliError> {
    let mut csv = String::from("method,n,seconds\n");
    for n in [100usize, 300] {
        let cfg = SynthConfig { n, k: n / 2, h: 1, eps: 0.3, m: 4, seed: 7 };
        let (tg, _) = generate(&cfg)?;
        let params = MultiplexParams::uniform(0.1)?;
        let runs: Vec<(&str, BenchRun)> = vec![
            ("stc", Box::new(|| {
                let (v, _) = stc_relax(&tg, &params, Objective::Sparsest)?;
                sweep_round(v.as_slice().unwrap(), &tg, &params, Objective::Sparsest)?;
                Ok(())
            })),
            ("fstc32", Box::new(|| {
                fstc_cut(&tg, &params, Objective::Sparsest, 32.min(tg.n()))?;
                Ok(())
            })),
            ("single", Box::new(|| {
                single_baseline(&tg, &params, Objective::Sparsest)?;
                Ok(())
            })),
            ("union", Box::new(|| {
                union_baseline(&tg, &params, Objective::Sparsest)?;
                Ok(())
            })),
            ("lap", Box::new(|| {
                lap_baseline(&tg, &params, Objective::Sparsest)?;
                Ok(())
            })),
        ];
        for (name, run) in runs {
            let t0 = Instant::now();
            run()?;
            csv.push_str(&format!("{name},{n},{}\n", t0.elapsed().as_secs_f64()));
        }
    }
    let path = dir.join("perf.csv");
    std::fs::write(&path, csv)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn main() {
    if let Ok(threads) = std::env::var("TEMPOCUT_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Cut(args) => cmd_cut(args),
        Command::Wavelet(args) => cmd_wavelet(args),
        Command::Compress(args) => cmd_compress(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Bench(args) => cmd_bench(args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}
