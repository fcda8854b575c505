//! Splitting the coordinates of a code into disjoint segments whose error
//! sub-patterns have a known weight parity.
//!
//! A segment is either the support of a parity row in the row space of `H`
//! (its sub-pattern parity is the syndrome bit of that row) or the leftover
//! coordinates, which carry no constraint.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::patterngen::Parity;

/// Default largest number of segments tried by [`find_segments`].
pub const DEFAULT_MAX_SEGMENTS: usize = 3;

// Node budget for the disjoint-family search.
const SEARCH_BUDGET: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentKind {
    /// Governed by `rows[row]` of the segmentation.
    Governed { row: usize },
    Unconstrained,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    /// 1-based, ascending.
    pub indices: Vec<usize>,
    pub kind: SegmentKind,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_governed(&self) -> bool {
        matches!(self.kind, SegmentKind::Governed { .. })
    }
}

/// Disjoint segments covering `[1, n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segmentation {
    n: usize,
    rows: Vec<BitVec>,
    segments: Vec<Segment>,
}

/// Per-segment parity requirements for one received word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentConstraints {
    pub parities: Vec<Parity>,
}

/// Size of the pattern space left by the governed parities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchSpaceSize {
    Exact(u64),
    /// Too large for `u64`; the value is the exponent of two.
    Log2(usize),
}

impl Segmentation {
    /// One unconstrained segment: plain ORBGRAND.
    pub fn trivial(n: usize) -> Self {
        Segmentation {
            n,
            rows: Vec::new(),
            segments: vec![Segment {
                indices: (1..=n).collect(),
                kind: SegmentKind::Unconstrained,
            }],
        }
    }

    /// Builds segments from pairwise disjoint rows of the row space of `h`.
    /// Uncovered coordinates form one more segment, governed when their
    /// indicator also lies in the row space.
    pub fn from_rows(h: &BitMatrix, rows: &[BitVec]) -> Result<Self> {
        let n = h.ncols();
        let mut union = BitVec::zeros(n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: r.len(),
                });
            }
            if r.is_zero() {
                return Err(Error::InvalidParameter("segment row is zero".into()));
            }
            if !r.is_disjoint(&union) {
                return Err(Error::InvalidParameter(
                    "segment rows overlap".into(),
                ));
            }
            if !h.row_space_contains(r) {
                return Err(Error::InvalidParameter(
                    "segment row is not in the row space of H".into(),
                ));
            }
            union.xor_assign(r);
        }
        let mut sets: Vec<(BitVec, bool)> = rows.iter().map(|r| (r.clone(), true)).collect();
        let rest = union.xor(&BitVec::ones(n));
        if !rest.is_zero() {
            let governed = h.row_space_contains(&rest);
            sets.push((rest, governed));
        }
        Ok(Self::assemble(n, sets))
    }

    /// Builds segments from explicit 1-based index sets partitioning `[1, n]`.
    /// A set is governed when its indicator lies in the row space of `h`.
    pub fn from_index_sets(h: &BitMatrix, sets: &[Vec<usize>]) -> Result<Self> {
        let n = h.ncols();
        let mut union = BitVec::zeros(n);
        let mut out = Vec::with_capacity(sets.len());
        for s in sets {
            let v = BitVec::from_support(n, s)?;
            if v.is_zero() {
                return Err(Error::InvalidParameter("empty segment".into()));
            }
            if v.weight() != s.len() || !v.is_disjoint(&union) {
                return Err(Error::InvalidParameter(
                    "segments must be disjoint without repeated indices".into(),
                ));
            }
            union.xor_assign(&v);
            let governed = h.row_space_contains(&v);
            out.push((v, governed));
        }
        if union.weight() != n {
            return Err(Error::InvalidParameter(format!(
                "segments cover {} of {n} coordinates",
                union.weight()
            )));
        }
        Ok(Self::assemble(n, out))
    }

    // Orders segments by smallest coordinate and numbers the governing rows.
    fn assemble(n: usize, mut sets: Vec<(BitVec, bool)>) -> Self {
        sets.sort_by_key(|(v, _)| v.ones_iter().next());
        let mut rows = Vec::new();
        let mut segments = Vec::new();
        for (v, governed) in sets {
            let kind = if governed {
                rows.push(v.clone());
                SegmentKind::Governed { row: rows.len() - 1 }
            } else {
                SegmentKind::Unconstrained
            };
            segments.push(Segment {
                indices: v.support(),
                kind,
            });
        }
        Segmentation { n, rows, segments }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of segments.
    pub fn p(&self) -> usize {
        self.segments.len()
    }

    pub fn governed_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn lens(&self) -> Vec<usize> {
        self.segments.iter().map(Segment::len).collect()
    }

    /// Syndrome of `v` against the governing rows, in row order.
    pub fn row_syndrome(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: v.len(),
            });
        }
        Ok(BitVec::from_bools(
            &self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>(),
        ))
    }

    /// Maps governing-row syndrome bits to per-segment parities.
    pub fn segment_constraints(&self, row_syndrome: &BitVec) -> Result<SegmentConstraints> {
        if row_syndrome.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                actual: row_syndrome.len(),
            });
        }
        let parities = self
            .segments
            .iter()
            .map(|s| match s.kind {
                SegmentKind::Governed { row } => Parity::from_syndrome_bit(row_syndrome.bit(row)),
                SegmentKind::Unconstrained => Parity::Any,
            })
            .collect();
        Ok(SegmentConstraints { parities })
    }

    /// Constraints for the hard decision `y`: the error pattern `e` must make
    /// `y ⊕ e` satisfy every governing row.
    pub fn constraints_for(&self, y: &BitVec) -> Result<SegmentConstraints> {
        self.segment_constraints(&self.row_syndrome(y)?)
    }

    /// `2^(n − p′)` for `p′` governed segments.
    pub fn search_space_size(&self) -> SearchSpaceSize {
        let e = self.n - self.governed_count();
        if e > 62 {
            SearchSpaceSize::Log2(e)
        } else {
            SearchSpaceSize::Exact(1u64 << e)
        }
    }

    /// Human-readable listing, one segment per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (j, s) in self.segments.iter().enumerate() {
            let kind = match s.kind {
                SegmentKind::Governed { row } => format!("row {row}"),
                SegmentKind::Unconstrained => "unconstrained".to_string(),
            };
            let idx: Vec<String> = s.indices.iter().map(usize::to_string).collect();
            out.push_str(&format!(
                "segment {} size {} {}: {}\n",
                j + 1,
                s.len(),
                kind,
                idx.join(" ")
            ));
        }
        out
    }
}

impl fmt::Display for Segmentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

// (governed, -unconstrained, -largest, -sorted sizes) compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Score {
    governed: usize,
    unconstrained_neg: isize,
    largest_neg: isize,
    spread_neg: Vec<isize>,
}

fn score(sets: &[(BitVec, bool)]) -> Score {
    let mut sizes: Vec<isize> = sets.iter().map(|(v, _)| v.weight() as isize).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Score {
        governed: sets.iter().filter(|(_, g)| *g).count(),
        unconstrained_neg: -(sets.iter().filter(|(_, g)| !*g).count() as isize),
        largest_neg: -sizes.first().copied().unwrap_or(0),
        spread_neg: sizes.iter().map(|s| -s).collect(),
    }
}

/// Searches the row space of `h` for disjoint parity rows.
///
/// Candidates are the rows of `h` and of its reduced echelon form plus the
/// XOR of any two of them. Among families of at most `max_p` segments
/// (leftover coordinates included), prefers more governed segments, then
/// fewer unconstrained ones, then the most balanced sizes. Falls back to a
/// single segment.
pub fn find_segments(h: &BitMatrix, max_p: usize) -> Segmentation {
    let n = h.ncols();
    let max_p = max_p.max(1);
    let ones = BitVec::ones(n);

    let (rref, _) = h.rref();
    let mut base: BTreeSet<BitVec> = BTreeSet::new();
    for r in h.rows().iter().chain(rref.rows()) {
        if !r.is_zero() {
            base.insert(r.clone());
        }
    }
    let base: Vec<BitVec> = base.into_iter().collect();
    let mut pool: BTreeSet<BitVec> = base.iter().cloned().collect();
    for i in 0..base.len() {
        for j in i + 1..base.len() {
            let x = base[i].xor(&base[j]);
            if !x.is_zero() {
                pool.insert(x);
            }
        }
    }
    // Lighter rows first so small segments are tried early.
    let mut pool: Vec<BitVec> = pool.into_iter().collect();
    pool.sort_by(|a, b| a.weight().cmp(&b.weight()).then(a.cmp(b)));

    let trivial_sets = if h.row_space_contains(&ones) {
        vec![(ones.clone(), true)]
    } else {
        vec![(ones.clone(), false)]
    };
    let mut best = (score(&trivial_sets), trivial_sets);

    struct Search<'a> {
        pool: &'a [BitVec],
        h: &'a BitMatrix,
        ones: &'a BitVec,
        max_p: usize,
        budget: usize,
    }

    fn consider(
        s: &Search<'_>,
        chosen: &[usize],
        union: &BitVec,
        best: &mut (Score, Vec<(BitVec, bool)>),
    ) {
        let mut sets: Vec<(BitVec, bool)> =
            chosen.iter().map(|&i| (s.pool[i].clone(), true)).collect();
        let rest = union.xor(s.ones);
        if !rest.is_zero() {
            if sets.len() + 1 > s.max_p {
                return;
            }
            let governed = s.h.row_space_contains(&rest);
            sets.push((rest, governed));
        }
        let sc = score(&sets);
        if sc > best.0 {
            *best = (sc, sets);
        }
    }

    fn dfs(
        s: &mut Search<'_>,
        start: usize,
        chosen: &mut Vec<usize>,
        union: &BitVec,
        best: &mut (Score, Vec<(BitVec, bool)>),
    ) {
        for i in start..s.pool.len() {
            if s.budget == 0 {
                return;
            }
            s.budget -= 1;
            let cand = &s.pool[i];
            if !cand.is_disjoint(union) {
                continue;
            }
            let next = union.xor(cand);
            chosen.push(i);
            consider(s, chosen, &next, best);
            if chosen.len() < s.max_p {
                dfs(s, i + 1, chosen, &next, best);
            }
            chosen.pop();
        }
    }

    let mut search = Search {
        pool: &pool,
        h,
        ones: &ones,
        max_p,
        budget: SEARCH_BUDGET,
    };
    dfs(&mut search, 0, &mut Vec::new(), &BitVec::zeros(n), &mut best);
    Segmentation::assemble(n, best.1)
}
