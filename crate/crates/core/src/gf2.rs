//! Dense GF(2) vectors and matrices.
//!
//! Bits are packed into `u64` words. Public APIs address codeword coordinates
//! 1-based (`1..=len`); row indices of a [`BitMatrix`] are ordinary 0-based
//! slice indices.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A binary vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    /// Builds a vector from 0/1 values; any nonzero entry counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set_bit(i, true);
            }
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set_bit(i, true);
            }
        }
        v
    }

    /// Vector of length `len` with ones at the given 1-based coordinates.
    pub fn from_support(len: usize, coords: &[usize]) -> Result<Self> {
        let mut v = BitVec::zeros(len);
        for &c in coords {
            if c == 0 || c > len {
                return Err(Error::IndexOutOfRange { index: c, len });
            }
            v.set_bit(c - 1, true);
        }
        Ok(v)
    }

    fn clear_tail(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Bit at 1-based coordinate `coord`.
    ///
    /// Panics if `coord` is outside `1..=len`.
    pub fn get(&self, coord: usize) -> bool {
        assert!(
            coord >= 1 && coord <= self.len,
            "coordinate {coord} out of range 1..={}",
            self.len
        );
        self.bit(coord - 1)
    }

    /// Sets the bit at 1-based coordinate `coord`.
    pub fn set(&mut self, coord: usize, value: bool) {
        assert!(
            coord >= 1 && coord <= self.len,
            "coordinate {coord} out of range 1..={}",
            self.len
        );
        self.set_bit(coord - 1, value);
    }

    /// Flips the bit at 1-based coordinate `coord`.
    pub fn flip(&mut self, coord: usize) {
        assert!(
            coord >= 1 && coord <= self.len,
            "coordinate {coord} out of range 1..={}",
            self.len
        );
        self.flip_bit(coord - 1);
    }

    #[inline]
    pub(crate) fn bit(&self, i: usize) -> bool {
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set_bit(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub(crate) fn flip_bit(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Sorted 1-based coordinates of the nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        self.ones_iter().map(|i| i + 1).collect()
    }

    /// 0-based positions of set bits, ascending.
    pub(crate) fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    /// Bits in coordinate order.
    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bit(i))
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot product of unequal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of unequal lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Coordinate-wise AND.
    pub fn and(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "and of unequal lengths");
        BitVec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// `supp(self) ⊆ supp(other)`.
    pub fn is_subset_of(&self, other: &BitVec) -> bool {
        self.len == other.len && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Hex rendering, four coordinates per digit with coordinate 1 as the
    /// most significant bit of the first digit. The final digit is zero padded.
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.len.div_ceil(4));
        for chunk in (0..self.len).step_by(4) {
            let mut nibble = 0u32;
            for j in 0..4 {
                nibble <<= 1;
                if chunk + j < self.len && self.bit(chunk + j) {
                    nibble |= 1;
                }
            }
            s.push(char::from_digit(nibble, 16).unwrap());
        }
        s
    }
}

impl Ord for BitVec {
    /// Lexicographic in coordinate order, shorter vectors first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                if a != b {
                    let low = (a ^ b).trailing_zeros();
                    return ((a >> low) & 1).cmp(&((b >> low) & 1));
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BitVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    /// Parses `"0110"`; spaces are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(0u8),
                '1' => bits.push(1u8),
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::Parse {
                        line: 1,
                        msg: format!("unexpected character {c:?} in bit string"),
                    })
                }
            }
        }
        Ok(BitVec::from_bits(&bits))
    }
}

/// Dense binary matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i].set_bit(i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                actual: bad.len(),
            });
        }
        Ok(BitMatrix { cols, rows })
    }

    /// Convenience constructor from `"0101"`-style row strings.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|s| s.parse::<BitVec>())
            .collect::<Result<Vec<_>>>()?;
        let cols = rows.first().map_or(0, |r| r.len());
        BitMatrix::from_rows(cols, rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Column at 1-based coordinate `coord`, as a vector of length `nrows`.
    pub fn column(&self, coord: usize) -> Result<BitVec> {
        if coord == 0 || coord > self.cols {
            return Err(Error::IndexOutOfRange {
                index: coord,
                len: self.cols,
            });
        }
        let mut c = BitVec::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.bit(coord - 1) {
                c.set_bit(i, true);
            }
        }
        Ok(c)
    }

    /// Replaces row `dst` with `dst ⊕ src`.
    pub fn xor_rows(&mut self, dst: usize, src: usize) -> Result<()> {
        let len = self.rows.len();
        for idx in [dst, src] {
            if idx >= len {
                return Err(Error::IndexOutOfRange {
                    index: idx + 1,
                    len,
                });
            }
        }
        if dst == src {
            return Err(Error::InvalidParameter(
                "xor_rows needs distinct rows".into(),
            ));
        }
        let src_row = self.rows[src].clone();
        self.rows[dst].xor_assign(&src_row);
        Ok(())
    }

    /// `s_j = <h_j, v>` for every row.
    pub fn syndrome(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: v.len(),
            });
        }
        let mut s = BitVec::zeros(self.rows.len());
        for (j, h) in self.rows.iter().enumerate() {
            if h.dot(v) {
                s.set_bit(j, true);
            }
        }
        Ok(s)
    }

    /// Row vector times matrix: `msg · self`.
    pub fn left_mul(&self, msg: &BitVec) -> Result<BitVec> {
        if msg.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                actual: msg.len(),
            });
        }
        let mut out = BitVec::zeros(self.cols);
        for i in msg.ones_iter() {
            out.xor_assign(&self.rows[i]);
        }
        Ok(out)
    }

    /// `self · otherᵀ`.
    pub fn mul_transpose(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: other.cols,
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|a| other.syndrome(a))
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_rows(other.rows.len(), rows)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones_iter() {
                t.rows[j].set_bit(i, true);
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    /// Reduced row echelon form and the 1-based pivot columns.
    ///
    /// Pivots are taken left to right; zero rows collect at the bottom so the
    /// shape is unchanged.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].bit(col)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.bit(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col + 1);
            r += 1;
        }
        (
            BitMatrix {
                cols: self.cols,
                rows,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self · xᵀ = 0}`, one basis vector per row.
    pub fn nullspace(&self) -> BitMatrix {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p - 1] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::zeros(self.cols);
            v.set_bit(free, true);
            for (i, &p) in pivots.iter().enumerate() {
                if r.rows[i].bit(free) {
                    v.set_bit(p - 1, true);
                }
            }
            basis.push(v);
        }
        BitMatrix {
            cols: self.cols,
            rows: basis,
        }
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &BitVec) -> bool {
        if v.len() != self.cols {
            return false;
        }
        let (r, pivots) = self.rref();
        let mut rest = v.clone();
        for (i, &p) in pivots.iter().enumerate() {
            if rest.bit(p - 1) {
                rest.xor_assign(&r.rows[i]);
            }
        }
        rest.is_zero()
    }

    /// Text form: `"rows cols"` then one line of `0`/`1` per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows.len(), self.cols);
        for r in &self.rows {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the text form. Blank lines and lines starting with `#` are skipped.
    pub fn parse_text(text: &str) -> Result<BitMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing dimension header".into(),
        })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: hline,
                msg: format!("bad dimension header {header:?}: {e}"),
            })?;
        let [nrows, ncols] = dims[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: format!("dimension header must be \"rows cols\", got {header:?}"),
            });
        };
        let mut rows = Vec::with_capacity(nrows);
        for (line, l) in lines {
            if rows.len() == nrows {
                return Err(Error::Parse {
                    line,
                    msg: format!("more than {nrows} rows"),
                });
            }
            if l.len() != ncols || !l.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {ncols} characters of 0/1"),
                });
            }
            rows.push(l.parse::<BitVec>()?);
        }
        if rows.len() != nrows {
            return Err(Error::Parse {
                line: text.lines().count(),
                msg: format!("expected {nrows} rows, found {}", rows.len()),
            });
        }
        BitMatrix::from_rows(ncols, rows)
    }

    /// Parses the alist sparse format (`N M`, degree maxima, degree lists,
    /// then per-column and per-row index lists, 1-based, zero padded).
    pub fn parse_alist(text: &str) -> Result<BitMatrix> {
        let mut tokens = Vec::new();
        for (i, l) in text.lines().enumerate() {
            for t in l.split_whitespace() {
                let v = t.parse::<usize>().map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: format!("bad alist token {t:?}: {e}"),
                })?;
                tokens.push((i + 1, v));
            }
        }
        let mut it = tokens.into_iter();
        let mut next = |what: &str| {
            it.next().ok_or_else(|| Error::Parse {
                line: text.lines().count(),
                msg: format!("alist truncated while reading {what}"),
            })
        };
        let (_, ncols) = next("column count")?;
        let (_, nrows) = next("row count")?;
        let (_, max_col_deg) = next("max column degree")?;
        let (_, max_row_deg) = next("max row degree")?;
        let mut col_deg = Vec::with_capacity(ncols);
        for _ in 0..ncols {
            col_deg.push(next("column degrees")?.1);
        }
        let mut row_deg = Vec::with_capacity(nrows);
        for _ in 0..nrows {
            row_deg.push(next("row degrees")?.1);
        }
        let mut m = BitMatrix::zeros(nrows, ncols);
        for (c, &deg) in col_deg.iter().enumerate() {
            let mut seen = 0;
            for _ in 0..max_col_deg.max(deg) {
                let (line, r) = next("column lists")?;
                if r == 0 {
                    continue;
                }
                if r > nrows {
                    return Err(Error::Parse {
                        line,
                        msg: format!("row index {r} exceeds {nrows}"),
                    });
                }
                m.rows[r - 1].set_bit(c, true);
                seen += 1;
            }
            if seen != deg {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("column {} lists {seen} entries, degree says {deg}", c + 1),
                });
            }
        }
        // Row lists are optional in some writers; when present they must agree.
        for (r, &deg) in row_deg.iter().enumerate() {
            let mut listed = Vec::new();
            for _ in 0..max_row_deg.max(deg) {
                match it.next() {
                    Some((_, 0)) => {}
                    Some((_, c)) => listed.push(c),
                    None if r == 0 && listed.is_empty() => return Ok(m),
                    None => {
                        return Err(Error::Parse {
                            line: text.lines().count(),
                            msg: "alist truncated while reading row lists".into(),
                        })
                    }
                }
            }
            listed.sort_unstable();
            if listed != m.rows[r].support() {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("row {} list disagrees with column lists", r + 1),
                });
            }
        }
        Ok(m)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}
