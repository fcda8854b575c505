//! ORBGRAND, segmented ORBGRAND and a maximum-likelihood reference decoder.
//!
//! BPSK maps bit 0 to +1 and bit 1 to −1; the hard decision of a sample is 0
//! when it is non-negative. A query is one membership test `H·(y ⊕ e) = 0`;
//! the hard decision itself is query 0.

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::patterngen::{
    distinct_partitions, tuning_offsets, FixedCountPartitions, TuningOffsets, TwoLevelStream,
};
use crate::scalar::Real;
use crate::segmentation::Segmentation;

/// Outcome of one decoding attempt.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult<T> {
    /// Always a codeword when present.
    pub codeword: Option<BitVec>,
    /// Membership tests after the hard decision.
    pub queries: u64,
    /// The query budget ran out. A result with no codeword that is not
    /// abandoned means a restricted pattern space was exhausted.
    pub abandoned: bool,
    pub sed: Option<T>,
    /// Logistic weight of the accepted pattern, in the decoder's own ranking
    /// (global ranks for ORBGRAND, per-segment ranks for the segmented decoder).
    pub w_l: Option<usize>,
}

impl<T> DecodeResult<T> {
    pub fn is_success(&self) -> bool {
        self.codeword.is_some()
    }
}

/// Search limits shared by both decoders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecoderOptions {
    /// Abandonment threshold `b`.
    pub max_queries: u64,
    /// Skip patterns flipping more bits than this.
    pub max_weight: Option<usize>,
}

impl DecoderOptions {
    pub fn new(max_queries: u64) -> Self {
        DecoderOptions {
            max_queries,
            max_weight: None,
        }
    }
}

/// Parameters of the low-reliability offset rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TuningParams<T> {
    /// Threshold below which `|r_i|` counts as low reliability.
    pub eps: T,
    pub rho: T,
    /// Channel noise standard deviation.
    pub sigma: T,
}

/// `θ(r)`: 1 where the sample is negative.
pub fn hard_decision<T: Real>(r: &[T]) -> BitVec {
    let bits: Vec<bool> = r.iter().map(|&x| x < T::zero()).collect();
    BitVec::from_bools(&bits)
}

/// `Σ i·z_i` over 1-based positions.
pub fn logistic_weight(z: &BitVec) -> usize {
    z.support().iter().sum()
}

/// Squared Euclidean distance between `r` and the BPSK image of `c`.
///
/// # Panics
/// If the lengths differ.
pub fn sed<T: Real>(r: &[T], c: &BitVec) -> T {
    assert_eq!(r.len(), c.len(), "received word and codeword lengths differ");
    r.iter()
        .zip(c.iter())
        .fold(T::zero(), |acc, (&ri, bit)| {
            let x = if bit { -T::one() } else { T::one() };
            acc + (ri - x) * (ri - x)
        })
}

/// Coordinates sorted by ascending `|r_i|`, globally and per segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReliabilityOrder {
    /// `global[rank − 1]` is a 1-based coordinate.
    pub global: Vec<usize>,
    /// `local[j][rank − 1]` is a 1-based coordinate of segment `j`.
    pub local: Vec<Vec<usize>>,
}

// 0-based coordinates, ties broken by coordinate.
fn ascending_reliability<T: Real>(r: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..r.len()).collect();
    idx.sort_by(|&a, &b| {
        r[a].abs()
            .partial_cmp(&r[b].abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    idx
}

fn local_orders(global: &[usize], seg: &Segmentation) -> Vec<Vec<usize>> {
    let mut owner = vec![0usize; seg.n()];
    for (j, s) in seg.segments().iter().enumerate() {
        for &i in &s.indices {
            owner[i - 1] = j;
        }
    }
    let mut local: Vec<Vec<usize>> = seg.segments().iter().map(|s| Vec::with_capacity(s.len())).collect();
    for &i in global {
        local[owner[i]].push(i);
    }
    local
}

pub fn reliability_order<T: Real>(r: &[T], seg: &Segmentation) -> Result<ReliabilityOrder> {
    if r.len() != seg.n() {
        return Err(Error::DimensionMismatch {
            expected: seg.n(),
            actual: r.len(),
        });
    }
    let global = ascending_reliability(r);
    let local = local_orders(&global, seg)
        .into_iter()
        .map(|v| v.into_iter().map(|i| i + 1).collect())
        .collect();
    Ok(ReliabilityOrder {
        global: global.into_iter().map(|i| i + 1).collect(),
        local,
    })
}

/// Columns of `H` packed into words, so a pattern's syndrome is the XOR of
/// its columns.
#[derive(Clone, Debug)]
struct ColumnSyndromes {
    words: usize,
    cols: Vec<u64>,
}

impl ColumnSyndromes {
    fn new(h: &BitMatrix) -> Self {
        let words = h.nrows().div_ceil(64).max(1);
        let mut cols = vec![0u64; h.ncols() * words];
        for (ri, row) in h.rows().iter().enumerate() {
            for c in row.ones_iter() {
                cols[c * words + ri / 64] |= 1 << (ri % 64);
            }
        }
        ColumnSyndromes { words, cols }
    }

    fn col(&self, c: usize) -> &[u64] {
        &self.cols[c * self.words..(c + 1) * self.words]
    }

    fn syndrome(&self, v: &BitVec) -> Vec<u64> {
        let mut acc = vec![0u64; self.words];
        for c in v.ones_iter() {
            xor_into(&mut acc, self.col(c));
        }
        acc
    }

    /// Columns reordered so entry `rank - 1` belongs to `order[rank - 1]`.
    fn permuted(&self, order: &[usize]) -> Vec<u64> {
        let mut table = Vec::with_capacity(order.len() * self.words);
        for &c in order {
            table.extend_from_slice(self.col(c));
        }
        table
    }
}

#[inline]
fn accumulate(acc: &mut [u64], table: &[u64], ranks: &[usize]) {
    if let [a] = acc {
        let mut x = *a;
        for &r in ranks {
            x ^= table[r - 1];
        }
        *a = x;
        return;
    }
    let w = acc.len();
    for &r in ranks {
        xor_into(acc, &table[(r - 1) * w..r * w]);
    }
}

fn xor_into(acc: &mut [u64], col: &[u64]) {
    for (a, c) in acc.iter_mut().zip(col) {
        *a ^= c;
    }
}

fn finish<T: Real>(r: &[T], y: &BitVec, flips: &[usize], queries: u64, w_l: usize) -> DecodeResult<T> {
    let mut c = y.clone();
    for &i in flips {
        c.flip_bit(i);
    }
    let d = sed(r, &c);
    DecodeResult {
        codeword: Some(c),
        queries,
        abandoned: false,
        sed: Some(d),
        w_l: Some(w_l),
    }
}

fn give_up<T>(queries: u64, abandoned: bool) -> DecodeResult<T> {
    DecodeResult {
        codeword: None,
        queries,
        abandoned,
        sed: None,
        w_l: None,
    }
}

fn check_len<T>(r: &[T], n: usize) -> Result<()> {
    if r.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: r.len(),
        });
    }
    Ok(())
}

/// Plain ORBGRAND: patterns by ascending logistic weight over the global
/// reliability order.
#[derive(Clone, Debug)]
pub struct Orbgrand {
    n: usize,
    cols: ColumnSyndromes,
    opts: DecoderOptions,
}

impl Orbgrand {
    pub fn new(code: &LinearCode, opts: DecoderOptions) -> Result<Self> {
        if opts.max_queries == 0 {
            return Err(Error::InvalidParameter("max_queries must be at least 1".into()));
        }
        Ok(Orbgrand {
            n: code.n(),
            cols: ColumnSyndromes::new(code.parity_check()),
            opts,
        })
    }

    pub fn decode<T: Real>(&self, r: &[T]) -> Result<DecodeResult<T>> {
        check_len(r, self.n)?;
        let y = hard_decision(r);
        let target = self.cols.syndrome(&y);
        if target.iter().all(|&w| w == 0) {
            return Ok(finish(r, &y, &[], 0, 0));
        }
        let order = ascending_reliability(r);
        let n = self.n;
        let b = self.opts.max_queries;
        let t_cap = self.opts.max_weight.unwrap_or(n).min(n);
        let table = self.cols.permuted(&order);
        let mut acc = vec![0u64; self.cols.words];
        let mut queries = 0u64;
        let mut flips = Vec::with_capacity(t_cap);
        for w in 1..=n * (n + 1) / 2 {
            let mut t = 1;
            while t <= t_cap && t * (t + 1) / 2 <= w {
                let mut parts = FixedCountPartitions::new(w, t, n);
                while let Some(p) = parts.advance() {
                    acc.fill(0);
                    accumulate(&mut acc, &table, p);
                    queries += 1;
                    if acc == target {
                        flips.clear();
                        flips.extend(p.iter().map(|&rank| order[rank - 1]));
                        return Ok(finish(r, &y, &flips, queries, w));
                    }
                    if queries >= b {
                        return Ok(give_up(queries, true));
                    }
                }
                t += 1;
            }
        }
        Ok(give_up(queries, false))
    }
}

/// Segmented ORBGRAND: two-level pattern generation with per-segment parities.
#[derive(Clone, Debug)]
pub struct SegmentedOrbgrand<T> {
    seg: Segmentation,
    cols: ColumnSyndromes,
    opts: DecoderOptions,
    tuning: Option<TuningParams<T>>,
}

impl<T: Real> SegmentedOrbgrand<T> {
    pub fn new(
        code: &LinearCode,
        seg: Segmentation,
        opts: DecoderOptions,
        tuning: Option<TuningParams<T>>,
    ) -> Result<Self> {
        if opts.max_queries == 0 {
            return Err(Error::InvalidParameter("max_queries must be at least 1".into()));
        }
        if seg.n() != code.n() {
            return Err(Error::DimensionMismatch {
                expected: code.n(),
                actual: seg.n(),
            });
        }
        for row in seg.rows() {
            if !code.parity_check().row_space_contains(row) {
                return Err(Error::InvalidParameter(
                    "segment row outside the dual code".into(),
                ));
            }
        }
        if let Some(tp) = &tuning {
            if !(tp.rho > T::zero()) || !(tp.eps > T::zero()) || !(tp.sigma > T::zero()) {
                return Err(Error::InvalidParameter(
                    "tuning needs positive eps, rho and sigma".into(),
                ));
            }
        }
        Ok(SegmentedOrbgrand {
            seg,
            cols: ColumnSyndromes::new(code.parity_check()),
            opts,
            tuning,
        })
    }

    pub fn segmentation(&self) -> &Segmentation {
        &self.seg
    }

    /// Offsets the tuning rule assigns to `r`; zero without tuning.
    pub fn offsets_for(&self, r: &[T]) -> Result<TuningOffsets> {
        check_len(r, self.seg.n())?;
        match &self.tuning {
            None => Ok(TuningOffsets::zero(self.seg.p())),
            Some(tp) => {
                let a: Vec<usize> = self
                    .seg
                    .segments()
                    .iter()
                    .map(|s| s.indices.iter().filter(|&&i| r[i - 1].abs() < tp.eps).count())
                    .collect();
                tuning_offsets(&a, tp.eps, tp.rho, tp.sigma, &self.seg.lens())
            }
        }
    }

    pub fn decode(&self, r: &[T]) -> Result<DecodeResult<T>> {
        let offsets = self.offsets_for(r)?;
        self.decode_with_offsets(r, &offsets)
    }

    pub fn decode_with_offsets(&self, r: &[T], offsets: &TuningOffsets) -> Result<DecodeResult<T>> {
        let n = self.seg.n();
        check_len(r, n)?;
        if offsets.tau.len() != self.seg.p() {
            return Err(Error::DimensionMismatch {
                expected: self.seg.p(),
                actual: offsets.tau.len(),
            });
        }
        let y = hard_decision(r);
        let target = self.cols.syndrome(&y);
        if target.iter().all(|&w| w == 0) {
            return Ok(finish(r, &y, &[], 0, 0));
        }
        let constraints = self.seg.constraints_for(&y)?;
        let local = local_orders(&ascending_reliability(r), &self.seg);
        let mut stream = TwoLevelStream::new(&constraints.parities, &self.seg.lens(), offsets);
        let b = self.opts.max_queries;
        let cap = self.opts.max_weight.unwrap_or(n);
        let p = self.seg.p();
        let tables: Vec<Vec<u64>> = local.iter().map(|o| self.cols.permuted(o)).collect();
        let mut acc = vec![0u64; self.cols.words];
        let mut queries = 0u64;
        while stream.advance() {
            if cap < n && (0..p).map(|j| stream.parts(j).len()).sum::<usize>() > cap {
                continue;
            }
            acc.fill(0);
            for (j, table) in tables.iter().enumerate() {
                accumulate(&mut acc, table, stream.parts(j));
            }
            queries += 1;
            if acc == target {
                let mut flips = Vec::new();
                let mut w_l = 0;
                for (j, order) in local.iter().enumerate() {
                    for &rank in stream.parts(j) {
                        flips.push(order[rank - 1]);
                        w_l += rank;
                    }
                }
                return Ok(finish(r, &y, &flips, queries, w_l));
            }
            if queries >= b {
                return Ok(give_up(queries, true));
            }
        }
        Ok(give_up(queries, false))
    }
}

/// ORBGRAND with abandonment threshold `b`.
pub fn orbgrand<T: Real>(code: &LinearCode, r: &[T], b: u64) -> Result<DecodeResult<T>> {
    Orbgrand::new(code, DecoderOptions::new(b))?.decode(r)
}

/// Segmented ORBGRAND with abandonment threshold `b` and optional offsets.
pub fn segmented_orbgrand<T: Real>(
    code: &LinearCode,
    seg: &Segmentation,
    r: &[T],
    b: u64,
    tuning: Option<&TuningOffsets>,
) -> Result<DecodeResult<T>> {
    let dec = SegmentedOrbgrand::<T>::new(code, seg.clone(), DecoderOptions::new(b), None)?;
    match tuning {
        Some(t) => dec.decode_with_offsets(r, t),
        None => dec.decode(r),
    }
}

/// Logistic weight of pattern `e` measured with per-segment ranks.
pub fn segmented_logistic_weight<T: Real>(r: &[T], seg: &Segmentation, e: &BitVec) -> Result<usize> {
    let order = reliability_order(r, seg)?;
    Ok(order
        .local
        .iter()
        .map(|l| {
            l.iter()
                .enumerate()
                .filter(|(_, &c)| e.get(c))
                .map(|(k, _)| k + 1)
                .sum::<usize>()
        })
        .sum())
}

/// Logistic weight of pattern `e` measured with global ranks of `r`.
pub fn global_logistic_weight<T: Real>(r: &[T], e: &BitVec) -> usize {
    ascending_reliability(r)
        .iter()
        .enumerate()
        .filter(|(_, &c)| e.bit(c))
        .map(|(k, _)| k + 1)
        .sum()
}

/// Largest dimension accepted by [`ml_bruteforce`].
pub const ML_MAX_K: usize = 22;

/// Codeword at minimum squared Euclidean distance from `r`, by enumerating
/// all `2^k` codewords. Ties go to the lexicographically smaller codeword.
pub fn ml_bruteforce<T: Real>(code: &LinearCode, r: &[T]) -> Result<(BitVec, T)> {
    check_len(r, code.n())?;
    if code.k() > ML_MAX_K {
        return Err(Error::InvalidParameter(format!(
            "exhaustive search needs k ≤ {ML_MAX_K}, got {}",
            code.k()
        )));
    }
    let g = code.generator();
    let mut c = BitVec::zeros(code.n());
    let mut best = (c.clone(), sed(r, &c));
    // Gray code walk over messages.
    for step in 1u64..1 << code.k() {
        c.xor_assign(g.row(step.trailing_zeros() as usize));
        let d = sed(r, &c);
        if d < best.1 || (d == best.1 && c < best.0) {
            best = (c.clone(), d);
        }
    }
    Ok(best)
}

/// SED increment shared by every pattern of logistic weight `w_l` when
/// `|r_{π(i)}| = i·δ` and the hard decision is all zeros; `None` if two
/// patterns disagree beyond a relative tolerance of 1e-9.
pub fn equidistant_sed_check<T: Real>(n: usize, delta: T, w_l: usize) -> Option<T> {
    let r: Vec<T> = (1..=n).map(|i| T::of(i as f64) * delta).collect();
    let base = sed(&r, &BitVec::zeros(n));
    let mut common: Option<T> = None;
    for z in distinct_partitions(w_l, n) {
        let e = BitVec::from_support(n, &z.parts).ok()?;
        let inc = sed(&r, &e) - base;
        match common {
            None => common = Some(inc),
            Some(c) => {
                let scale = c.abs().max(T::min_positive_value());
                if ((inc - c).abs() / scale).as_f64() > 1e-9 {
                    return None;
                }
            }
        }
    }
    common
}
