//! AWGN/BPSK Monte Carlo simulation and the statistics around it.
//!
//! Every trial draws its message and noise from its own ChaCha8 stream keyed
//! by `(seed, Eb/N0, trial index)`, so results do not depend on the number of
//! worker threads and both decoders see identical noise.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::{builtin, load_code, LinearCode};
use crate::decode::{DecodeResult, DecoderOptions, Orbgrand, SegmentedOrbgrand, TuningParams};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::scalar::Real;
use crate::segmentation::{find_segments, Segmentation, DEFAULT_MAX_SEGMENTS};

/// `σ = sqrt(1 / (2 R 10^(Eb/N0 / 10)))`.
pub fn ebno_to_sigma(ebno_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter(format!("code rate {rate} outside (0, 1]")));
    }
    if !ebno_db.is_finite() {
        return Err(Error::InvalidParameter("Eb/N0 must be finite".into()));
    }
    Ok((1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0))).sqrt())
}

/// `r_i = x(c_i) + σ·N(0, 1)` with `x(0) = +1`, `x(1) = −1`.
pub fn awgn_bpsk<T: Real, R: Rng + ?Sized>(c: &BitVec, sigma: T, rng: &mut R) -> Vec<T> {
    c.iter()
        .map(|bit| {
            let x = if bit { -T::one() } else { T::one() };
            x + sigma * T::standard_normal(rng)
        })
        .collect()
}

/// Random stream for one trial.
pub fn trial_rng(seed: u64, ebno_db: f64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&ebno_db.to_bits().to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Number of compare-exchange stages of a bitonic sorter for `n` inputs.
pub fn bitonic_stages(n: usize) -> Result<usize> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("{n} is not a power of two ≥ 2")));
    }
    let m = n.trailing_zeros() as usize;
    Ok(m * (m + 1) / 2)
}

/// Wilson score interval for `k` successes in `n` trials at normal quantile `z`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    let lo = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// 95% Wilson interval.
pub fn wilson95(k: u64, n: u64) -> (f64, f64) {
    wilson_interval(k, n, 1.959_963_984_540_054)
}

/// Nearest-rank percentile of an ascending slice.
pub fn percentile(sorted: &[u64], pct: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let rank = ((pct / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    Orbgrand,
    SegOrbgrand,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Orbgrand => "orbgrand",
            DecoderKind::SegOrbgrand => "seg-orbgrand",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "orbgrand" => Ok(DecoderKind::Orbgrand),
            "seg-orbgrand" => Ok(DecoderKind::SegOrbgrand),
            other => Err(Error::InvalidParameter(format!("unknown decoder {other:?}"))),
        }
    }
}

/// How the segmented decoder obtains its segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentsSpec {
    /// Search the row space of `H`, with at most this many segments.
    Auto { max_p: usize },
    /// 1-based index sets partitioning the coordinates.
    Explicit(Vec<Vec<usize>>),
}

impl Default for SegmentsSpec {
    fn default() -> Self {
        SegmentsSpec::Auto {
            max_p: DEFAULT_MAX_SEGMENTS,
        }
    }
}

impl SegmentsSpec {
    pub fn resolve(&self, code: &LinearCode) -> Result<Segmentation> {
        match self {
            SegmentsSpec::Auto { max_p } => Ok(find_segments(code.parity_check(), *max_p)),
            SegmentsSpec::Explicit(sets) => Segmentation::from_index_sets(code.parity_check(), sets),
        }
    }
}

/// `auto`, `auto:P`, or explicit sets such as `1-64/65-128` (sets separated by
/// `/`, items by `,`, inclusive ranges with `-`).
impl FromStr for SegmentsSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: String| Error::InvalidParameter(format!("segments {s:?}: {msg}"));
        if s == "auto" {
            return Ok(SegmentsSpec::default());
        }
        if let Some(p) = s.strip_prefix("auto:") {
            let max_p: usize = p.parse().map_err(|_| bad("bad segment count".into()))?;
            if max_p == 0 {
                return Err(bad("segment count must be positive".into()));
            }
            return Ok(SegmentsSpec::Auto { max_p });
        }
        let mut sets = Vec::new();
        for set in s.split('/') {
            let mut idx = Vec::new();
            for item in set.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad(format!("bad index {t:?}")));
                match item.split_once('-') {
                    Some((a, b)) => {
                        let (a, b) = (num(a)?, num(b)?);
                        if a > b {
                            return Err(bad(format!("empty range {item:?}")));
                        }
                        idx.extend(a..=b);
                    }
                    None => idx.push(num(item)?),
                }
            }
            if idx.is_empty() {
                return Err(bad("empty segment".into()));
            }
            sets.push(idx);
        }
        Ok(SegmentsSpec::Explicit(sets))
    }
}

impl fmt::Display for SegmentsSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegmentsSpec::Auto { max_p } if *max_p == DEFAULT_MAX_SEGMENTS => f.write_str("auto"),
            SegmentsSpec::Auto { max_p } => write!(f, "auto:{max_p}"),
            SegmentsSpec::Explicit(sets) => {
                let parts: Vec<String> = sets.iter().map(|set| compress_ranges(set)).collect();
                f.write_str(&parts.join("/"))
            }
        }
    }
}

fn compress_ranges(set: &[usize]) -> String {
    let mut items = Vec::new();
    let mut i = 0;
    while i < set.len() {
        let mut j = i;
        while j + 1 < set.len() && set[j + 1] == set[j] + 1 {
            j += 1;
        }
        items.push(if j > i { format!("{}-{}", set[i], set[j]) } else { set[i].to_string() });
        i = j + 1;
    }
    items.join(",")
}

/// Builds a registry code by name, or reads a code file.
pub fn resolve_code(name_or_path: &str) -> Result<LinearCode> {
    match builtin(name_or_path) {
        Ok(c) => Ok(c),
        Err(Error::UnknownCode(_)) if Path::new(name_or_path).exists() => load_code(name_or_path),
        Err(e) => Err(e),
    }
}

/// One simulation campaign: a code, a decoder and a list of Eb/N0 points.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialConfig {
    /// Registry name or path of a code file.
    pub code: String,
    pub decoder: DecoderKind,
    pub segments: SegmentsSpec,
    pub ebno_db: Vec<f64>,
    /// Abandonment threshold `b`.
    pub max_queries: u64,
    pub trials: u64,
    pub seed: u64,
    /// `(ε, ρ)` of the offset rule.
    pub tuning: Option<(f64, f64)>,
    pub max_weight: Option<usize>,
    /// Keep adding batches of `trials` until this many block errors occur...
    pub min_block_errors: u64,
    /// ...or this many trials ran in total.
    pub max_trials: Option<u64>,
    /// Worker threads; `None` uses all cores.
    pub threads: Option<usize>,
}

impl TrialConfig {
    pub fn new(code: &str, decoder: DecoderKind) -> Self {
        TrialConfig {
            code: code.to_string(),
            decoder,
            segments: SegmentsSpec::default(),
            ebno_db: vec![5.0],
            max_queries: 100_000,
            trials: 1000,
            seed: 1,
            tuning: None,
            max_weight: None,
            min_block_errors: 50,
            max_trials: None,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.max_queries == 0 {
            return Err(Error::InvalidParameter("max queries must be at least 1".into()));
        }
        if self.ebno_db.is_empty() || self.ebno_db.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidParameter("Eb/N0 list must be non-empty and finite".into()));
        }
        if let Some((eps, rho)) = self.tuning {
            if !(eps > 0.0) || !(rho > 0.0) {
                return Err(Error::InvalidParameter("tuning needs eps > 0 and rho > 0".into()));
            }
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("threads must be at least 1".into()));
        }
        Ok(())
    }
}

/// Aggregates for one `(code, decoder, Eb/N0)` point.
#[derive(Clone, Debug, PartialEq)]
pub struct SimRow {
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub decoder: DecoderKind,
    /// Segment count used by the decoder (1 for plain ORBGRAND).
    pub segments: usize,
    pub ebno_db: f64,
    pub b: u64,
    pub trials: u64,
    pub block_errors: u64,
    pub miscorrections: u64,
    pub abandons: u64,
    pub avg_queries: f64,
    pub p50_queries: u64,
    pub p95_queries: u64,
    pub seed: u64,
    pub wall_time: Duration,
    /// Per-trial query counts, in trial order.
    pub queries: Vec<u64>,
}

impl SimRow {
    pub fn bler(&self) -> f64 {
        self.block_errors as f64 / self.trials as f64
    }

    pub fn abandon_rate(&self) -> f64 {
        self.abandons as f64 / self.trials as f64
    }

    pub fn bler_interval(&self) -> (f64, f64) {
        wilson95(self.block_errors, self.trials)
    }
}

pub const CSV_HEADER: &str = "code,n,k,decoder,segments,ebno_db,b,trials,block_errors,miscorrections,abandons,bler,avg_queries,p50_queries,p95_queries,seed";

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimReport {
    pub rows: Vec<SimRow>,
}

impl SimReport {
    /// CSV with a header line; wall time is left out so reruns compare equal.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&csv_line(r));
        }
        out
    }
}

pub fn csv_line(r: &SimRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{:.6e},{:.3},{},{},{}\n",
        r.code,
        r.n,
        r.k,
        r.decoder.name(),
        r.segments,
        r.ebno_db,
        r.b,
        r.trials,
        r.block_errors,
        r.miscorrections,
        r.abandons,
        r.bler(),
        r.avg_queries,
        r.p50_queries,
        r.p95_queries,
        r.seed
    )
}

/// Result of a single trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub miscorrected: bool,
    /// No codeword returned.
    pub abandoned: bool,
    pub queries: u64,
}

impl TrialOutcome {
    pub fn block_error(&self) -> bool {
        self.miscorrected || self.abandoned
    }
}

/// A decoder ready for the simulator.
#[derive(Clone, Debug)]
pub enum SimDecoder<T> {
    Plain(Orbgrand),
    Segmented(SegmentedOrbgrand<T>),
}

impl<T: Real> SimDecoder<T> {
    pub fn decode(&self, r: &[T]) -> Result<DecodeResult<T>> {
        match self {
            SimDecoder::Plain(d) => d.decode(r),
            SimDecoder::Segmented(d) => d.decode(r),
        }
    }

    pub fn segments(&self) -> usize {
        match self {
            SimDecoder::Plain(_) => 1,
            SimDecoder::Segmented(d) => d.segmentation().p(),
        }
    }
}

/// Builds the decoder described by `cfg` at noise level `sigma`.
pub fn build_decoder<T: Real>(
    cfg: &TrialConfig,
    code: &LinearCode,
    seg: Option<&Segmentation>,
    sigma: f64,
) -> Result<SimDecoder<T>> {
    let opts = DecoderOptions {
        max_queries: cfg.max_queries,
        max_weight: cfg.max_weight,
    };
    Ok(match cfg.decoder {
        DecoderKind::Orbgrand => SimDecoder::Plain(Orbgrand::new(code, opts)?),
        DecoderKind::SegOrbgrand => {
            let seg = match seg {
                Some(s) => s.clone(),
                None => cfg.segments.resolve(code)?,
            };
            let tuning = cfg.tuning.map(|(eps, rho)| TuningParams {
                eps: T::of(eps),
                rho: T::of(rho),
                sigma: T::of(sigma),
            });
            SimDecoder::Segmented(SegmentedOrbgrand::new(code, seg, opts, tuning)?)
        }
    })
}

/// Runs one trial: random message, BPSK over AWGN, decode.
pub fn run_one<T: Real>(
    code: &LinearCode,
    dec: &SimDecoder<T>,
    sigma: T,
    seed: u64,
    ebno_db: f64,
    trial: u64,
) -> Result<TrialOutcome> {
    let mut rng = trial_rng(seed, ebno_db, trial);
    let msg: Vec<bool> = (0..code.k()).map(|_| rng.random()).collect();
    let c = code.encode(&BitVec::from_bools(&msg))?;
    let r = awgn_bpsk(&c, sigma, &mut rng);
    let res = dec.decode(&r)?;
    Ok(TrialOutcome {
        miscorrected: res.codeword.as_ref().is_some_and(|d| d != &c),
        abandoned: res.codeword.is_none(),
        queries: res.queries,
    })
}

fn run_range<T: Real>(
    code: &LinearCode,
    dec: &SimDecoder<T>,
    sigma: T,
    seed: u64,
    ebno_db: f64,
    range: std::ops::Range<u64>,
) -> Result<Vec<TrialOutcome>> {
    range
        .into_par_iter()
        .map(|t| run_one(code, dec, sigma, seed, ebno_db, t))
        .collect()
}

fn with_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Simulates every Eb/N0 point of `cfg` with `f64` samples.
pub fn run_trials(cfg: &TrialConfig) -> Result<SimReport> {
    run_trials_as::<f64>(cfg)
}

/// Simulates every Eb/N0 point of `cfg` with samples of type `T`.
pub fn run_trials_as<T: Real>(cfg: &TrialConfig) -> Result<SimReport> {
    cfg.validate()?;
    let code = resolve_code(&cfg.code)?;
    let seg = match cfg.decoder {
        DecoderKind::SegOrbgrand => Some(cfg.segments.resolve(&code)?),
        DecoderKind::Orbgrand => None,
    };
    let mut report = SimReport::default();
    for &ebno in &cfg.ebno_db {
        let start = Instant::now();
        let sigma = ebno_to_sigma(ebno, code.rate())?;
        let dec = build_decoder::<T>(cfg, &code, seg.as_ref(), sigma)?;
        let sigma_t = T::of(sigma);
        let cap = cfg.max_trials.unwrap_or(cfg.trials).max(cfg.trials);
        let mut outcomes: Vec<TrialOutcome> = Vec::new();
        loop {
            let lo = outcomes.len() as u64;
            let hi = if lo == 0 { cfg.trials } else { (lo + cfg.trials).min(cap) };
            let batch = with_pool(cfg.threads, || {
                run_range(&code, &dec, sigma_t, cfg.seed, ebno, lo..hi)
            })??;
            outcomes.extend(batch);
            let errors = outcomes.iter().filter(|o| o.block_error()).count() as u64;
            if errors >= cfg.min_block_errors || outcomes.len() as u64 >= cap {
                break;
            }
        }
        report.rows.push(aggregate(cfg, &code, dec.segments(), ebno, &outcomes, start.elapsed()));
    }
    Ok(report)
}

fn aggregate(
    cfg: &TrialConfig,
    code: &LinearCode,
    segments: usize,
    ebno: f64,
    outcomes: &[TrialOutcome],
    wall_time: Duration,
) -> SimRow {
    let queries: Vec<u64> = outcomes.iter().map(|o| o.queries).collect();
    let mut sorted = queries.clone();
    sorted.sort_unstable();
    let trials = outcomes.len() as u64;
    let total: u64 = queries.iter().sum();
    SimRow {
        code: code.name().to_string(),
        n: code.n(),
        k: code.k(),
        decoder: cfg.decoder,
        segments,
        ebno_db: ebno,
        b: cfg.max_queries,
        trials,
        block_errors: outcomes.iter().filter(|o| o.block_error()).count() as u64,
        miscorrections: outcomes.iter().filter(|o| o.miscorrected).count() as u64,
        abandons: outcomes.iter().filter(|o| o.abandoned).count() as u64,
        avg_queries: total as f64 / trials as f64,
        p50_queries: percentile(&sorted, 50.0),
        p95_queries: percentile(&sorted, 95.0),
        seed: cfg.seed,
        wall_time,
        queries,
    }
}

/// Frequency table of queries-to-decision.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryHistogram {
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
}

impl QueryHistogram {
    pub fn from_queries(queries: &[u64]) -> Self {
        let mut counts = BTreeMap::new();
        for &q in queries {
            *counts.entry(q).or_insert(0) += 1;
        }
        QueryHistogram {
            counts,
            total: queries.len() as u64,
        }
    }

    pub fn fraction_above(&self, threshold: u64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let above: u64 = self.counts.range(threshold + 1..).map(|(_, c)| c).sum();
        above as f64 / self.total as f64
    }

    /// Relative frequencies over `[edges[i], edges[i + 1])`.
    pub fn binned(&self, edges: &[u64]) -> Vec<f64> {
        edges
            .windows(2)
            .map(|w| {
                let c: u64 = self.counts.range(w[0]..w[1]).map(|(_, c)| c).sum();
                c as f64 / self.total.max(1) as f64
            })
            .collect()
    }
}

/// One histogram per Eb/N0 point of `cfg`.
pub fn query_histogram(cfg: &TrialConfig) -> Result<Vec<(f64, QueryHistogram)>> {
    let report = run_trials(cfg)?;
    Ok(report
        .rows
        .iter()
        .map(|r| (r.ebno_db, QueryHistogram::from_queries(&r.queries)))
        .collect())
}

/// Distribution of the least reliable coordinates across segments.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentStats {
    /// `counts[j][trial]`.
    pub counts: Vec<Vec<usize>>,
    pub mean: Vec<f64>,
    /// Sample standard deviation.
    pub std: Vec<f64>,
}

impl SegmentStats {
    pub fn histogram(&self, j: usize) -> BTreeMap<usize, u64> {
        let mut h = BTreeMap::new();
        for &c in &self.counts[j] {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }
}

/// For each trial, counts how many of the `n/2` least reliable coordinates
/// fall in each segment.
pub fn segment_reliability_stats(
    code: &LinearCode,
    seg: &Segmentation,
    sigma: f64,
    trials: u64,
    seed: u64,
) -> Result<SegmentStats> {
    if seg.n() != code.n() {
        return Err(Error::DimensionMismatch {
            expected: code.n(),
            actual: seg.n(),
        });
    }
    if !(sigma > 0.0) || trials == 0 {
        return Err(Error::InvalidParameter("need sigma > 0 and trials ≥ 1".into()));
    }
    let n = code.n();
    let half = n / 2;
    let mut owner = vec![0usize; n];
    for (j, s) in seg.segments().iter().enumerate() {
        for &i in &s.indices {
            owner[i - 1] = j;
        }
    }
    let per_trial: Vec<Vec<usize>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            // The reliability profile does not depend on the codeword.
            let mut rng = trial_rng(seed, sigma, t);
            let r: Vec<f64> = awgn_bpsk(&BitVec::zeros(n), sigma, &mut rng);
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| r[a].abs().total_cmp(&r[b].abs()).then(a.cmp(&b)));
            let mut c = vec![0usize; seg.p()];
            for &i in &idx[..half] {
                c[owner[i]] += 1;
            }
            c
        })
        .collect();
    let p = seg.p();
    let counts: Vec<Vec<usize>> = (0..p).map(|j| per_trial.iter().map(|c| c[j]).collect()).collect();
    let mean: Vec<f64> = counts
        .iter()
        .map(|c| c.iter().sum::<usize>() as f64 / c.len() as f64)
        .collect();
    let std = counts
        .iter()
        .zip(&mean)
        .map(|(c, m)| {
            if c.len() < 2 {
                return 0.0;
            }
            let ss: f64 = c.iter().map(|&x| (x as f64 - m).powi(2)).sum();
            (ss / (c.len() - 1) as f64).sqrt()
        })
        .collect();
    Ok(SegmentStats { counts, mean, std })
}

/// Which quantity an SVG plot shows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotMetric {
    Bler,
    AvgQueries,
}

/// Log-scale line plot of a metric against Eb/N0, one line per decoder/code.
pub fn svg_plot(report: &SimReport, metric: PlotMetric) -> String {
    let (w, h, pad) = (640.0, 420.0, 60.0);
    let value = |r: &SimRow| match metric {
        PlotMetric::Bler => r.bler(),
        PlotMetric::AvgQueries => r.avg_queries,
    };
    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for r in &report.rows {
        let v = value(r);
        if v > 0.0 {
            series
                .entry(format!("{} {}", r.code, r.decoder.name()))
                .or_default()
                .push((r.ebno_db, v));
        }
    }
    let xs = report.rows.iter().map(|r| r.ebno_db);
    let (xmin, xmax) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let ys = series.values().flatten().map(|p| p.1.log10());
    let (ymin, ymax) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let (ylo, yhi) = if ymin.is_finite() { (ymin.floor(), ymax.ceil().max(ymin.floor() + 1.0)) } else { (0.0, 1.0) };
    let (xlo, xhi) = if xmin.is_finite() && xmax > xmin { (xmin, xmax) } else { (xmin - 0.5, xmin + 0.5) };
    let px = |x: f64| pad + (x - xlo) / (xhi - xlo) * (w - 2.0 * pad);
    let py = |y: f64| h - pad - (y - ylo) / (yhi - ylo) * (h - 2.0 * pad);
    let colours = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    let mut decade = ylo;
    while decade <= yhi + 1e-9 {
        let y = py(decade);
        let _ = writeln!(s, r##"<line x1="{pad}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="#ddd"/>"##, w - pad);
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">1e{}</text>"#, pad - 6.0, y + 4.0, decade as i64);
        decade += 1.0;
    }
    let mut xt: Vec<f64> = report.rows.iter().map(|r| r.ebno_db).collect();
    xt.sort_by(f64::total_cmp);
    xt.dedup();
    for x in xt {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{x}</text>"#, px(x), h - pad + 18.0);
    }
    let ylabel = match metric {
        PlotMetric::Bler => "BLER",
        PlotMetric::AvgQueries => "average queries",
    };
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">Eb/N0 (dB)</text>"#, w / 2.0, h - 15.0);
    let _ = writeln!(s, r#"<text x="15" y="{}" transform="rotate(-90 15 {})" text-anchor="middle">{ylabel}</text>"#, h / 2.0, h / 2.0);
    for (i, (name, pts)) in series.iter().enumerate() {
        let colour = colours[i % colours.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, v)| format!("{:.1},{:.1}", px(x), py(v.log10())))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#, path.join(" "));
        for p in &path {
            let (x, y) = p.split_once(',').unwrap_or(("0", "0"));
            let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="3" fill="{colour}"/>"#);
        }
        let ly = pad + 16.0 + 16.0 * i as f64;
        let _ = writeln!(s, r#"<text x="{}" y="{ly}" fill="{colour}">{name}</text>"#, w - pad - 8.0);
    }
    s.push_str("</svg>\n");
    s
}
