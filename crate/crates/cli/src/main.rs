//! `grandlab` command-line tool.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grandlab::codes::BUILTIN_CODES;
use grandlab::patterngen::{
    distinct_partitions, fixed_count_partitions, level1_compositions, parity_partitions, segment_cap, Parity,
    TuningOffsets,
};
use grandlab::segmentation::find_segments;
use grandlab::sim::{
    build_decoder, ebno_to_sigma, resolve_code, run_trials_as, svg_plot, DecoderKind, PlotMetric, SegmentsSpec,
    SimReport, TrialConfig, CSV_HEADER,
};
use grandlab::{LinearCode, Real};

use config::{config_path, merge_args, parse_snr_range, read_file, read_pairs, render_pairs, write_atomic};

#[derive(Parser, Debug)]
#[command(name = "grandlab", version, about = "ORBGRAND and segmented ORBGRAND decoding toolkit")]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monte Carlo BLER and query statistics over AWGN.
    Simulate(SimulateArgs),
    /// Decode one received vector (one float per line).
    Decode(DecodeArgs),
    /// Show the segmentation chosen for a code.
    Segment(SegmentArgs),
    /// Print a partition stream, one partition per line.
    Partitions(PartitionsArgs),
    /// List the built-in codes.
    Codes,
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// key=value file; command-line flags take precedence.
    #[arg(long, value_name = "FILE")]
    config: Option<String>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Precision {
    F32,
    F64,
}

impl Precision {
    fn name(self) -> &'static str {
        match self {
            Precision::F32 => "f32",
            Precision::F64 => "f64",
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Built-in code name or code file.
    #[arg(long)]
    code: String,
    /// Comma-separated decoders: orbgrand, seg-orbgrand.
    #[arg(long, default_value = "seg-orbgrand")]
    decoder: String,
    /// auto, auto:P, or explicit index sets like 1-64/65-128.
    #[arg(long, default_value = "auto")]
    segments: String,
    /// Eb/N0 in dB: start:stop:step (inclusive), a value, or a comma list.
    #[arg(long, default_value = "5")]
    ebno: String,
    /// Abandonment threshold b.
    #[arg(long, default_value_t = 100_000)]
    max_queries: u64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Enables per-word offsets with this ρ.
    #[arg(long)]
    tuning_rho: Option<f64>,
    /// Reliability threshold ε of the offset rule.
    #[arg(long, default_value_t = 0.2)]
    tuning_eps: f64,
    /// Cap on the Hamming weight of tested patterns.
    #[arg(long)]
    max_weight: Option<usize>,
    /// Add batches of trials until this many block errors...
    #[arg(long, default_value_t = 50)]
    min_errors: u64,
    /// ...or this many trials in total (default: no extension).
    #[arg(long)]
    max_trials: Option<u64>,
    /// Worker threads (fallback GRANDLAB_THREADS, else all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Precision::F64)]
    precision: Precision,
    /// CSV destination (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// BLER plot destination.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Average-queries plot destination.
    #[arg(long)]
    svg_queries: Option<PathBuf>,
    #[command(flatten)]
    cfg: ConfigArgs,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[arg(long)]
    code: String,
    /// orbgrand or seg-orbgrand.
    #[arg(long, default_value = "seg-orbgrand")]
    decoder: String,
    #[arg(long, default_value = "auto")]
    segments: String,
    /// File with one received value per line ("-" for stdin).
    #[arg(long)]
    input: String,
    #[arg(long, default_value_t = 100_000)]
    max_queries: u64,
    #[arg(long)]
    max_weight: Option<usize>,
    #[arg(long)]
    tuning_rho: Option<f64>,
    #[arg(long, default_value_t = 0.2)]
    tuning_eps: f64,
    /// Noise standard deviation used by the offset rule.
    #[arg(long)]
    sigma: Option<f64>,
    /// Alternative to --sigma.
    #[arg(long)]
    ebno: Option<f64>,
    #[arg(long, value_enum, default_value_t = Precision::F64)]
    precision: Precision,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    cfg: ConfigArgs,
}

#[derive(Args, Debug)]
struct SegmentArgs {
    #[arg(long)]
    code: String,
    /// auto, auto:P, or explicit index sets.
    #[arg(long, default_value = "auto")]
    segments: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    cfg: ConfigArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StreamKind {
    Distinct,
    Fixed,
    Parity,
    Level1,
}

#[derive(Args, Debug)]
struct PartitionsArgs {
    #[arg(long, value_enum)]
    kind: StreamKind,
    /// Total (logistic) weight.
    #[arg(long)]
    w: usize,
    /// Part count for --kind fixed.
    #[arg(long)]
    t: Option<usize>,
    /// Largest allowed part (default: w).
    #[arg(long)]
    pmax: Option<usize>,
    /// even, odd or any for --kind parity.
    #[arg(long, default_value = "any")]
    parity: String,
    /// Per-segment parities for --kind level1, e.g. even,odd.
    #[arg(long)]
    parities: Option<String>,
    /// Per-segment lengths for --kind level1.
    #[arg(long)]
    lens: Option<String>,
    /// Per-segment offsets for --kind level1.
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    cfg: ConfigArgs,
}

enum Failure {
    Config(String),
    Runtime(String),
}

type Outcome = Result<(), Failure>;

fn config_err(e: impl ToString) -> Failure {
    Failure::Config(e.to_string())
}

fn runtime_err(e: impl ToString) -> Failure {
    Failure::Runtime(e.to_string())
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().collect();
    let args = match config_path(&raw) {
        None => raw,
        Some(path) => match read_file(&path).and_then(|t| read_pairs(&t)) {
            Ok(pairs) => merge_args(&raw, &pairs),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let res = match cli.cmd {
        Command::Simulate(a) => simulate(a),
        Command::Decode(a) => decode(a),
        Command::Segment(a) => segment(a),
        Command::Partitions(a) => partitions(a),
        Command::Codes => codes(),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Outcome {
    match out {
        Some(p) => write_atomic(p, text).map_err(|e| runtime_err(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn push_opt<V: ToString>(pairs: &mut Vec<(&'static str, String)>, key: &'static str, v: &Option<V>) {
    if let Some(v) = v {
        pairs.push((key, v.to_string()));
    }
}

fn push_path(pairs: &mut Vec<(&'static str, String)>, key: &'static str, v: &Option<PathBuf>) {
    if let Some(p) = v {
        pairs.push((key, p.display().to_string()));
    }
}

fn load_code(name: &str) -> Result<LinearCode, Failure> {
    resolve_code(name).map_err(config_err)
}

fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("GRANDLAB_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| config_err(format!("GRANDLAB_THREADS={v:?} is not a thread count"))),
        _ => Ok(None),
    }
}

fn simulate(a: SimulateArgs) -> Outcome {
    if a.cfg.dump_config {
        let mut p: Vec<(&'static str, String)> = vec![
            ("code", a.code.clone()),
            ("decoder", a.decoder.clone()),
            ("segments", a.segments.clone()),
            ("ebno", a.ebno.clone()),
            ("max-queries", a.max_queries.to_string()),
            ("trials", a.trials.to_string()),
            ("seed", a.seed.to_string()),
        ];
        push_opt(&mut p, "tuning-rho", &a.tuning_rho);
        p.push(("tuning-eps", a.tuning_eps.to_string()));
        push_opt(&mut p, "max-weight", &a.max_weight);
        p.push(("min-errors", a.min_errors.to_string()));
        push_opt(&mut p, "max-trials", &a.max_trials);
        push_opt(&mut p, "threads", &a.threads);
        p.push(("precision", a.precision.name().to_string()));
        push_path(&mut p, "out", &a.out);
        push_path(&mut p, "svg", &a.svg);
        push_path(&mut p, "svg-queries", &a.svg_queries);
        print!("{}", render_pairs(&p));
        return Ok(());
    }

    let decoders = a
        .decoder
        .split(',')
        .map(|d| DecoderKind::parse(d.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(config_err)?;
    let segments: SegmentsSpec = a.segments.parse().map_err(config_err)?;
    let ebno = parse_snr_range(&a.ebno).map_err(config_err)?;
    let threads = resolve_threads(a.threads)?;
    let code = load_code(&a.code)?;
    if decoders.contains(&DecoderKind::SegOrbgrand) {
        segments.resolve(&code).map_err(config_err)?;
    }
    let mut configs = Vec::new();
    for &dec in &decoders {
        let mut c = TrialConfig::new(&a.code, dec);
        c.segments = segments.clone();
        c.ebno_db = ebno.clone();
        c.max_queries = a.max_queries;
        c.trials = a.trials;
        c.seed = a.seed;
        c.tuning = a.tuning_rho.map(|rho| (a.tuning_eps, rho));
        c.max_weight = a.max_weight;
        c.min_block_errors = a.min_errors;
        c.max_trials = a.max_trials;
        c.threads = threads;
        c.validate().map_err(config_err)?;
        configs.push(c);
    }

    let mut report = SimReport::default();
    for c in &configs {
        for &e in &c.ebno_db {
            let mut point = c.clone();
            point.ebno_db = vec![e];
            let start = Instant::now();
            let rows = match a.precision {
                Precision::F32 => run_trials_as::<f32>(&point),
                Precision::F64 => run_trials_as::<f64>(&point),
            }
            .map_err(runtime_err)?
            .rows;
            for r in &rows {
                eprintln!(
                    "{} {} ebno={} trials={} bler={:.3e} avg_queries={:.1} ({:.1}s)",
                    r.code,
                    r.decoder.name(),
                    r.ebno_db,
                    r.trials,
                    r.bler(),
                    r.avg_queries,
                    start.elapsed().as_secs_f64()
                );
            }
            report.rows.extend(rows);
        }
    }
    let csv = report.to_csv();
    debug_assert!(csv.starts_with(CSV_HEADER));
    emit(a.out.as_ref(), &csv)?;
    if let Some(p) = &a.svg {
        write_atomic(p, &svg_plot(&report, PlotMetric::Bler)).map_err(runtime_err)?;
    }
    if let Some(p) = &a.svg_queries {
        write_atomic(p, &svg_plot(&report, PlotMetric::AvgQueries)).map_err(runtime_err)?;
    }
    Ok(())
}

fn decode(a: DecodeArgs) -> Outcome {
    if a.cfg.dump_config {
        let mut p: Vec<(&'static str, String)> = vec![
            ("code", a.code.clone()),
            ("decoder", a.decoder.clone()),
            ("segments", a.segments.clone()),
            ("input", a.input.clone()),
            ("max-queries", a.max_queries.to_string()),
        ];
        push_opt(&mut p, "max-weight", &a.max_weight);
        push_opt(&mut p, "tuning-rho", &a.tuning_rho);
        p.push(("tuning-eps", a.tuning_eps.to_string()));
        push_opt(&mut p, "sigma", &a.sigma);
        push_opt(&mut p, "ebno", &a.ebno);
        p.push(("precision", a.precision.name().to_string()));
        push_path(&mut p, "out", &a.out);
        print!("{}", render_pairs(&p));
        return Ok(());
    }

    let kind = DecoderKind::parse(a.decoder.trim()).map_err(config_err)?;
    let code = load_code(&a.code)?;
    let mut cfg = TrialConfig::new(&a.code, kind);
    cfg.segments = a.segments.parse().map_err(config_err)?;
    cfg.max_queries = a.max_queries;
    cfg.max_weight = a.max_weight;
    cfg.tuning = a.tuning_rho.map(|rho| (a.tuning_eps, rho));
    cfg.validate().map_err(config_err)?;
    let sigma = match (a.sigma, a.ebno) {
        (Some(s), _) if s > 0.0 && s.is_finite() => s,
        (Some(s), _) => return Err(config_err(format!("sigma {s} must be positive"))),
        (None, Some(e)) => ebno_to_sigma(e, code.rate()).map_err(config_err)?,
        (None, None) if cfg.tuning.is_some() => {
            return Err(config_err("tuning needs --sigma or --ebno"));
        }
        (None, None) => 1.0,
    };

    let text = if a.input == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(runtime_err)?
    } else {
        read_file(&a.input).map_err(runtime_err)?
    };
    let line = match a.precision {
        Precision::F32 => decode_line::<f32>(&cfg, &code, sigma, &text)?,
        Precision::F64 => decode_line::<f64>(&cfg, &code, sigma, &text)?,
    };
    emit(a.out.as_ref(), &line)
}

fn decode_line<T: Real + std::str::FromStr>(
    cfg: &TrialConfig,
    code: &LinearCode,
    sigma: f64,
    text: &str,
) -> Result<String, Failure> {
    let mut r: Vec<T> = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let x = l
            .parse::<T>()
            .map_err(|_| runtime_err(format!("input line {}: {l:?} is not a number", i + 1)))?;
        r.push(x);
    }
    if r.len() != code.n() {
        return Err(runtime_err(format!("input has {} values, code length is {}", r.len(), code.n())));
    }
    let dec = build_decoder::<T>(cfg, code, None, sigma).map_err(config_err)?;
    let res = dec.decode(&r).map_err(runtime_err)?;
    let record = serde_json::json!({
        "codeword_hex": res.codeword.as_ref().map(|c| c.to_hex()),
        "queries": res.queries,
        "abandoned": res.abandoned,
        "sed": res.sed.map(|d| d.as_f64()),
        "w_l": res.w_l,
    });
    Ok(format!("{record}\n"))
}

fn segment(a: SegmentArgs) -> Outcome {
    if a.cfg.dump_config {
        let mut p: Vec<(&'static str, String)> = vec![("code", a.code.clone()), ("segments", a.segments.clone())];
        push_path(&mut p, "out", &a.out);
        print!("{}", render_pairs(&p));
        return Ok(());
    }
    let spec: SegmentsSpec = a.segments.parse().map_err(config_err)?;
    let code = load_code(&a.code)?;
    let seg = match &spec {
        SegmentsSpec::Auto { max_p } => find_segments(code.parity_check(), *max_p),
        SegmentsSpec::Explicit(_) => spec.resolve(&code).map_err(config_err)?,
    };
    let text = format!(
        "code {} n {} k {} segments {} governed {}\n{}",
        code.name(),
        code.n(),
        code.k(),
        seg.p(),
        seg.governed_count(),
        seg.dump()
    );
    emit(a.out.as_ref(), &text)
}

fn parse_list<V: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<V>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<V>().map_err(|_| config_err(format!("bad {what} entry {t:?}"))))
        .collect()
}

fn format_parts(parts: &[usize]) -> String {
    if parts.is_empty() {
        return "{}".to_string();
    }
    parts.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn partitions(a: PartitionsArgs) -> Outcome {
    if a.cfg.dump_config {
        let kind = a.kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
        let mut p: Vec<(&'static str, String)> = vec![("kind", kind), ("w", a.w.to_string())];
        push_opt(&mut p, "t", &a.t);
        push_opt(&mut p, "pmax", &a.pmax);
        p.push(("parity", a.parity.clone()));
        push_opt(&mut p, "parities", &a.parities);
        push_opt(&mut p, "lens", &a.lens);
        push_opt(&mut p, "tau", &a.tau);
        push_path(&mut p, "out", &a.out);
        print!("{}", render_pairs(&p));
        return Ok(());
    }
    let pmax = a.pmax.unwrap_or(a.w);
    let mut out = String::new();
    let mut line = |parts: &[usize]| {
        out.push_str(&format_parts(parts));
        out.push('\n');
    };
    match a.kind {
        StreamKind::Distinct => distinct_partitions(a.w, pmax).for_each(|p| line(&p.parts)),
        StreamKind::Fixed => {
            let t = a.t.ok_or_else(|| config_err("--kind fixed needs --t"))?;
            fixed_count_partitions(a.w, t, pmax).for_each(|p| line(&p.parts));
        }
        StreamKind::Parity => {
            let parity: Parity = a.parity.parse().map_err(config_err)?;
            parity_partitions(a.w, parity, pmax).for_each(|p| line(&p.parts));
        }
        StreamKind::Level1 => {
            let parities: Vec<Parity> =
                parse_list(a.parities.as_deref().ok_or_else(|| config_err("--kind level1 needs --parities"))?, "parity")?;
            let lens: Vec<usize> =
                parse_list(a.lens.as_deref().ok_or_else(|| config_err("--kind level1 needs --lens"))?, "length")?;
            if lens.len() != parities.len() {
                return Err(config_err("--parities and --lens differ in length"));
            }
            let tau = match &a.tau {
                Some(t) => parse_list(t, "offset")?,
                None => vec![0; lens.len()],
            };
            if tau.len() != lens.len() {
                return Err(config_err("--tau and --lens differ in length"));
            }
            let caps: Vec<usize> = lens.iter().map(|&l| segment_cap(l)).collect();
            for (_, w) in level1_compositions(a.w, &parities, &caps, &TuningOffsets { tau }) {
                line(&w);
            }
        }
    }
    emit(a.out.as_ref(), &out)
}

fn codes() -> Outcome {
    let mut out = String::from("name n k rate\n");
    for name in BUILTIN_CODES {
        let c = load_code(name)?;
        out.push_str(&format!("{} {} {} {:.4}\n", c.name(), c.n(), c.k(), c.rate()));
    }
    emit(None, &out)
}
