//! Integer-partition streams that schedule ORBGRAND error patterns.
//!
//! A pattern is described by the 1-based reliability ranks it flips. Plain
//! ORBGRAND walks distinct-part partitions of each logistic weight; the
//! segmented variant first splits the weight across segments (level 1) and
//! then partitions each share with a prescribed parity of part count (level 2).
//!
//! All streams are lazy and allocate only their state.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Required parity of the number of flipped bits in a segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    /// No governing parity row.
    Any,
}

impl Parity {
    /// Smallest nonzero logistic weight a sub-pattern can take: `{1}` for odd,
    /// `{1, 2}` for even, `{1}` when unconstrained.
    pub fn min_weight(self) -> usize {
        match self {
            Parity::Even => 3,
            Parity::Odd | Parity::Any => 1,
        }
    }

    /// Whether the segment may contribute no flipped bits at all.
    pub fn may_be_empty(self) -> bool {
        !matches!(self, Parity::Odd)
    }

    pub fn from_syndrome_bit(s: bool) -> Self {
        if s {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    fn admits_count(self, t: usize) -> bool {
        match self {
            Parity::Even => t.is_multiple_of(2),
            Parity::Odd => t % 2 == 1,
            Parity::Any => true,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Any => "any",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            "any" => Ok(Parity::Any),
            other => Err(Error::InvalidParameter(format!("unknown parity {other:?}"))),
        }
    }
}

/// A set of distinct positive parts in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionSet {
    pub parts: Vec<usize>,
}

impl PartitionSet {
    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Init,
    Running,
    Done,
}

/// Distinct-part partitions of `w` into exactly `t` parts, each `≤ p_max`.
///
/// Starts at `[1, 2, …, t−1, w − t(t−1)/2]` and repeatedly applies an
/// increment-and-decrement step (raise the second-to-last part, lower the
/// last) or, when that fails, re-initializes a longer suffix. Output is in
/// lexicographic order of the increasing part sequences.
#[derive(Clone, Debug)]
pub struct FixedCountPartitions {
    w: usize,
    t: usize,
    p_max: usize,
    p: Vec<usize>,
    phase: Phase,
}

impl FixedCountPartitions {
    pub fn new(w: usize, t: usize, p_max: usize) -> Self {
        FixedCountPartitions {
            w,
            t,
            p_max,
            p: Vec::with_capacity(t),
            phase: Phase::Init,
        }
    }

    /// Largest weight reachable with `t` distinct parts no larger than `p_max`.
    fn max_weight(t: usize, p_max: usize) -> Option<usize> {
        if t > p_max {
            return None;
        }
        t.checked_mul(p_max).map(|m| m - t * (t - 1) / 2)
    }

    /// Moves to the next partition and returns its parts.
    pub fn advance(&mut self) -> Option<&[usize]> {
        let found = match self.phase {
            Phase::Done => false,
            Phase::Init => self.start(),
            Phase::Running => self.step(),
        };
        if found {
            Some(&self.p)
        } else {
            self.phase = Phase::Done;
            None
        }
    }

    fn start(&mut self) -> bool {
        self.phase = Phase::Running;
        let (w, t) = (self.w, self.t);
        if t == 0 {
            self.phase = Phase::Done;
            return false;
        }
        if w < t * (t + 1) / 2 || match Self::max_weight(t, self.p_max) {
            Some(m) => w > m,
            None => t > self.p_max,
        } {
            return false;
        }
        self.p.clear();
        self.p.extend(1..t);
        self.p.push(w - t * (t - 1) / 2);
        if t == 1 {
            // A single part never changes.
            self.phase = Phase::Done;
            return self.p[0] <= self.p_max;
        }
        if self.p[t - 1] <= self.p[t - 2] {
            return false;
        }
        if self.p[t - 1] <= self.p_max {
            return true;
        }
        self.step()
    }

    fn step(&mut self) -> bool {
        let (w, t) = (self.w, self.t);
        if t < 2 {
            return false;
        }
        loop {
            let mut moved = false;
            for i in 1..t {
                let anchor = self.p[t - 1 - i];
                let pstar = if i == 1 {
                    self.p[t - 1] - 1
                } else {
                    let head: usize = self.p[..t - 1 - i].iter().sum();
                    let used = head + i * anchor + i * (i + 1) / 2;
                    match w.checked_sub(used) {
                        Some(v) => v,
                        None => continue,
                    }
                };
                if anchor + i < pstar {
                    for l in 1..=i {
                        self.p[t - 1 - i + (l - 1)] = anchor + l;
                    }
                    self.p[t - 1] = pstar;
                    if i == 1 {
                        self.skip_oversized();
                    }
                    moved = true;
                    break;
                }
            }
            if !moved {
                return false;
            }
            if self.p[t - 1] <= self.p_max {
                return true;
            }
        }
    }

    // Repeats the i = 1 step in one go while the last part stays above p_max;
    // every skipped state would have been discarded.
    fn skip_oversized(&mut self) {
        let t = self.t;
        let last = self.p[t - 1];
        if last <= self.p_max {
            return;
        }
        let prev = self.p[t - 2];
        // Further i = 1 steps k are legal while prev + k < last − k.
        let k_legal = (last - prev - 1) / 2;
        let k = (last - self.p_max).min(k_legal);
        self.p[t - 2] += k;
        self.p[t - 1] -= k;
    }
}

impl Iterator for FixedCountPartitions {
    type Item = PartitionSet;

    fn next(&mut self) -> Option<PartitionSet> {
        self.advance().map(|p| PartitionSet { parts: p.to_vec() })
    }
}

/// Distinct-part partitions of `w` whose part count has the given parity,
/// in ascending part count. `w = 0` yields the empty set for `Even` and `Any`.
#[derive(Clone, Debug)]
pub struct ParityPartitions {
    w: usize,
    p_max: usize,
    parity: Parity,
    t: usize,
    inner: Option<FixedCountPartitions>,
    empty_pending: bool,
}

impl ParityPartitions {
    pub fn new(w: usize, parity: Parity, p_max: usize) -> Self {
        let t = match parity {
            Parity::Even => 2,
            Parity::Odd | Parity::Any => 1,
        };
        ParityPartitions {
            w,
            p_max,
            parity,
            t,
            inner: None,
            empty_pending: w == 0 && parity.may_be_empty(),
        }
    }

    pub fn advance(&mut self) -> Option<&[usize]> {
        if self.empty_pending {
            self.empty_pending = false;
            return Some(&[]);
        }
        loop {
            if self.inner.is_none() {
                let t = self.t;
                if t == 0 || t * (t + 1) / 2 > self.w || t > self.p_max {
                    return None;
                }
                debug_assert!(self.parity.admits_count(t));
                self.inner = Some(FixedCountPartitions::new(self.w, t, self.p_max));
            }
            let inner = self.inner.as_mut().expect("set above");
            if inner.advance().is_some() {
                // Reborrow to satisfy the borrow checker across the loop.
                return self.inner.as_ref().map(|i| i.p.as_slice());
            }
            self.inner = None;
            self.t += if self.parity == Parity::Any { 1 } else { 2 };
        }
    }
}

impl Iterator for ParityPartitions {
    type Item = PartitionSet;

    fn next(&mut self) -> Option<PartitionSet> {
        self.advance().map(|p| PartitionSet { parts: p.to_vec() })
    }
}

/// All distinct-part partitions of `w` with parts `≤ p_max`, by part count.
pub fn distinct_partitions(w: usize, p_max: usize) -> ParityPartitions {
    ParityPartitions::new(w, Parity::Any, p_max)
}

pub fn fixed_count_partitions(w: usize, t: usize, p_max: usize) -> FixedCountPartitions {
    FixedCountPartitions::new(w, t, p_max)
}

pub fn parity_partitions(w: usize, parity: Parity, p_max: usize) -> ParityPartitions {
    ParityPartitions::new(w, parity, p_max)
}

/// Which segments contribute a nonempty sub-pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Base {
    pub flags: Vec<bool>,
    /// Smallest logistic weight this base can produce.
    pub min_total: usize,
}

/// Bases for the given segment parities, ascending in `min_total`, ties in
/// lexicographic flag order. Odd segments are always active.
pub fn enumerate_bases(parities: &[Parity]) -> Vec<Base> {
    enumerate_bases_with_offsets(parities, &vec![0; parities.len()])
}

/// As [`enumerate_bases`], with each active segment's minimum raised by `tau`.
pub fn enumerate_bases_with_offsets(parities: &[Parity], tau: &[usize]) -> Vec<Base> {
    assert_eq!(parities.len(), tau.len(), "one offset per segment");
    let free: Vec<usize> = (0..parities.len())
        .filter(|&j| parities[j].may_be_empty())
        .collect();
    let mut bases: Vec<Base> = (0u64..1 << free.len())
        .map(|mask| {
            let mut flags = vec![true; parities.len()];
            for (b, &j) in free.iter().enumerate() {
                flags[j] = mask >> b & 1 == 1;
            }
            let min_total = (0..parities.len())
                .filter(|&j| flags[j])
                .map(|j| parities[j].min_weight() + tau[j])
                .sum();
            Base { flags, min_total }
        })
        .collect();
    bases.sort_by(|a, b| a.min_total.cmp(&b.min_total).then(a.flags.cmp(&b.flags)));
    bases
}

/// Integer vectors with `lo ≤ v ≤ hi` componentwise and `Σ v = total`, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct BoundedCompositions {
    lo: Vec<usize>,
    hi: Vec<usize>,
    total: usize,
    cur: Vec<usize>,
    // suffix sums of lo and hi, length p + 1
    lo_tail: Vec<usize>,
    hi_tail: Vec<usize>,
    phase: Phase,
}

impl BoundedCompositions {
    pub fn new(lo: Vec<usize>, hi: Vec<usize>, total: usize) -> Self {
        assert_eq!(lo.len(), hi.len());
        let p = lo.len();
        let mut lo_tail = vec![0; p + 1];
        let mut hi_tail = vec![0; p + 1];
        for j in (0..p).rev() {
            lo_tail[j] = lo_tail[j + 1] + lo[j];
            hi_tail[j] = hi_tail[j + 1] + hi[j];
        }
        let empty = lo.iter().zip(&hi).any(|(l, h)| l > h)
            || total < lo_tail[0]
            || total > hi_tail[0];
        BoundedCompositions {
            cur: vec![0; p],
            lo,
            hi,
            total,
            lo_tail,
            hi_tail,
            phase: if empty { Phase::Done } else { Phase::Init },
        }
    }

    // Smallest completion of positions from..p summing to `rest`.
    fn fill_from(&mut self, from: usize, mut rest: usize) {
        for j in from..self.cur.len() {
            let v = self.lo[j].max(rest.saturating_sub(self.hi_tail[j + 1]));
            self.cur[j] = v;
            rest -= v;
        }
    }

    pub fn advance(&mut self) -> Option<&[usize]> {
        match self.phase {
            Phase::Done => return None,
            Phase::Init => {
                self.phase = Phase::Running;
                self.fill_from(0, self.total);
                return Some(&self.cur);
            }
            Phase::Running => {}
        }
        let p = self.cur.len();
        if p == 0 {
            self.phase = Phase::Done;
            return None;
        }
        // prefix = Σ cur[..j] inside the loop
        let mut prefix: usize = self.cur[..p - 1].iter().sum();
        for j in (0..p - 1).rev() {
            prefix -= self.cur[j];
            let v = self.cur[j] + 1;
            if v > self.hi[j] {
                continue;
            }
            let used = prefix + v;
            if used > self.total {
                continue;
            }
            let rest = self.total - used;
            if rest >= self.lo_tail[j + 1] && rest <= self.hi_tail[j + 1] {
                self.cur[j] = v;
                self.fill_from(j + 1, rest);
                return Some(&self.cur);
            }
        }
        self.phase = Phase::Done;
        None
    }
}

impl Iterator for BoundedCompositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        self.advance().map(<[usize]>::to_vec)
    }
}

/// Largest logistic weight of a sub-pattern in a segment of length `len`.
pub fn segment_cap(len: usize) -> usize {
    len * (len + 1) / 2
}

/// Per-segment offsets `τ` that postpone sub-patterns in segments with few
/// low-reliability symbols.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TuningOffsets {
    pub tau: Vec<usize>,
}

impl TuningOffsets {
    pub fn zero(p: usize) -> Self {
        TuningOffsets { tau: vec![0; p] }
    }
}

/// Level-1 sub-weight vectors of `w_l`, base by base.
///
/// Active segment `j` takes a sub-weight in `[w̲_j + τ_j, cap_j + τ_j]`;
/// level 2 later subtracts `τ_j` again, so offsets only delay patterns.
pub fn level1_compositions(
    w_l: usize,
    parities: &[Parity],
    caps: &[usize],
    offsets: &TuningOffsets,
) -> impl Iterator<Item = (Base, Vec<usize>)> {
    let bases = enumerate_bases_with_offsets(parities, &offsets.tau);
    let parities = parities.to_vec();
    let caps = caps.to_vec();
    let tau = offsets.tau.clone();
    bases.into_iter().flat_map(move |base| {
        let (lo, hi) = level1_bounds(&base.flags, &parities, &caps, &tau);
        BoundedCompositions::new(lo, hi, w_l).map(move |w| (base.clone(), w))
    })
}

fn level1_bounds(
    flags: &[bool],
    parities: &[Parity],
    caps: &[usize],
    tau: &[usize],
) -> (Vec<usize>, Vec<usize>) {
    let lo = (0..flags.len())
        .map(|j| if flags[j] { parities[j].min_weight() + tau[j] } else { 0 })
        .collect();
    let hi = (0..flags.len())
        .map(|j| if flags[j] { caps[j] + tau[j] } else { 0 })
        .collect();
    (lo, hi)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// `L · 2P(|r| < ε)` for `r ~ N(1, σ²)`.
pub fn expected_low_reliability<T: Real>(len: usize, eps: T, sigma: T) -> T {
    let (e, s) = (eps.as_f64(), sigma.as_f64());
    let p = normal_cdf((e - 1.0) / s) - normal_cdf((-e - 1.0) / s);
    T::of(len as f64 * 2.0 * p)
}

/// `τ_j = ⌈(max a − a_j) / (ρ μ_j)⌉` for given expected counts `mu`.
pub fn tuning_offsets_with_mu<T: Real>(a: &[usize], mu: &[T], rho: T) -> Result<TuningOffsets> {
    if a.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: mu.len(),
        });
    }
    if !(rho > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "tuning factor rho must be positive, got {rho}"
        )));
    }
    let max = a.iter().copied().max().unwrap_or(0);
    let mut tau = Vec::with_capacity(a.len());
    for (&aj, &m) in a.iter().zip(mu) {
        if max == aj {
            tau.push(0);
            continue;
        }
        let denom = rho * m;
        if !(denom > T::zero()) {
            return Err(Error::InvalidParameter(
                "expected low-reliability count must be positive".into(),
            ));
        }
        let v = (T::of((max - aj) as f64) / denom).ceil();
        tau.push(v.to_usize().unwrap_or(usize::MAX));
    }
    Ok(TuningOffsets { tau })
}

/// Offsets from low-reliability counts `a` (symbols with `|r| < ε`) per segment.
pub fn tuning_offsets<T: Real>(
    a: &[usize],
    eps: T,
    rho: T,
    sigma: T,
    lens: &[usize],
) -> Result<TuningOffsets> {
    if !(eps > T::zero()) || !(sigma > T::zero()) {
        return Err(Error::InvalidParameter(
            "tuning needs eps > 0 and sigma > 0".into(),
        ));
    }
    let mu: Vec<T> = lens
        .iter()
        .map(|&l| expected_low_reliability(l, eps, sigma))
        .collect();
    tuning_offsets_with_mu(a, &mu, rho)
}

/// One scheduled pattern of the segmented generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentedPattern {
    pub w_l: usize,
    /// Level-1 sub-weights, offsets included.
    pub sub_weights: Vec<usize>,
    /// Local 1-based ranks flipped in each segment.
    pub parts: Vec<Vec<usize>>,
}

/// Two-level generator over all logistic weights `1..=Σ(cap_j + τ_j)`.
///
/// Order: weight, then base (ascending minimum), then level-1 vector
/// (lexicographic), then the product of level-2 streams with the first
/// active segment varying fastest.
#[derive(Clone, Debug)]
pub struct TwoLevelStream {
    parities: Vec<Parity>,
    lens: Vec<usize>,
    caps: Vec<usize>,
    tau: Vec<usize>,
    bases: Vec<Base>,
    w_l: usize,
    w_max: usize,
    base_idx: usize,
    comps: Option<BoundedCompositions>,
    sub: Vec<usize>,
    streams: Vec<Option<ParityPartitions>>,
    active: Vec<usize>,
    in_product: bool,
}

impl TwoLevelStream {
    pub fn new(parities: &[Parity], lens: &[usize], offsets: &TuningOffsets) -> Self {
        assert_eq!(parities.len(), lens.len());
        assert_eq!(parities.len(), offsets.tau.len());
        let caps: Vec<usize> = lens.iter().map(|&l| segment_cap(l)).collect();
        let w_max = caps.iter().zip(&offsets.tau).map(|(c, t)| c + t).sum();
        TwoLevelStream {
            parities: parities.to_vec(),
            lens: lens.to_vec(),
            bases: enumerate_bases_with_offsets(parities, &offsets.tau),
            caps,
            tau: offsets.tau.clone(),
            w_l: 1,
            w_max,
            base_idx: 0,
            comps: None,
            sub: vec![0; parities.len()],
            streams: vec![None; parities.len()],
            active: Vec::with_capacity(parities.len()),
            in_product: false,
        }
    }

    pub fn max_weight(&self) -> usize {
        self.w_max
    }

    pub fn w_l(&self) -> usize {
        self.w_l
    }

    pub fn sub_weights(&self) -> &[usize] {
        &self.sub
    }

    pub fn segments(&self) -> usize {
        self.parities.len()
    }

    /// Current local ranks in segment `j`; empty for frozen segments.
    pub fn parts(&self, j: usize) -> &[usize] {
        match &self.streams[j] {
            Some(s) => s.current(),
            None => &[],
        }
    }

    /// Moves to the next pattern; `false` once every weight is exhausted.
    pub fn advance(&mut self) -> bool {
        if self.in_product && self.step_product() {
            return true;
        }
        self.in_product = false;
        loop {
            if let Some(comps) = self.comps.as_mut() {
                if let Some(w) = comps.advance() {
                    self.sub.copy_from_slice(w);
                    if self.start_product() {
                        self.in_product = true;
                        return true;
                    }
                    continue;
                }
                self.comps = None;
                self.base_idx += 1;
            }
            if self.w_l > self.w_max {
                self.w_l = self.w_max;
                return false;
            }
            if self.base_idx >= self.bases.len() {
                self.w_l += 1;
                self.base_idx = 0;
                if self.w_l > self.w_max {
                    self.w_l = self.w_max;
                    return false;
                }
            }
            let base = &self.bases[self.base_idx];
            if base.min_total > self.w_l {
                // Bases are sorted by minimum, later ones cannot fit either.
                self.base_idx = self.bases.len();
                continue;
            }
            let (lo, hi) = level1_bounds(&base.flags, &self.parities, &self.caps, &self.tau);
            self.comps = Some(BoundedCompositions::new(lo, hi, self.w_l));
        }
    }

    fn start_product(&mut self) -> bool {
        self.active.clear();
        for j in 0..self.parities.len() {
            if self.sub[j] == 0 {
                self.streams[j] = None;
                continue;
            }
            let mut s = ParityPartitions::new(self.sub[j] - self.tau[j], self.parities[j], self.lens[j]);
            if s.advance().is_none() {
                return false;
            }
            self.streams[j] = Some(s);
            self.active.push(j);
        }
        true
    }

    fn step_product(&mut self) -> bool {
        for idx in 0..self.active.len() {
            let j = self.active[idx];
            let s = self.streams[j].as_mut().expect("active stream");
            if s.advance().is_some() {
                return true;
            }
            let mut fresh = ParityPartitions::new(self.sub[j] - self.tau[j], self.parities[j], self.lens[j]);
            fresh.advance();
            self.streams[j] = Some(fresh);
        }
        false
    }
}

impl ParityPartitions {
    // Parts of the last item returned by `advance`.
    fn current(&self) -> &[usize] {
        match &self.inner {
            Some(i) => &i.p,
            None => &[],
        }
    }
}

impl Iterator for TwoLevelStream {
    type Item = SegmentedPattern;

    fn next(&mut self) -> Option<SegmentedPattern> {
        if !self.advance() {
            return None;
        }
        Some(SegmentedPattern {
            w_l: self.w_l,
            sub_weights: self.sub.clone(),
            parts: (0..self.segments()).map(|j| self.parts(j).to_vec()).collect(),
        })
    }
}
