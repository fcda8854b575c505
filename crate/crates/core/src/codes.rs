//! Binary linear block codes: construction, validation, encoding and files.
//!
//! Built-in families are extended BCH codes (natural polynomial-evaluation
//! parity-check form, overall parity bit appended as the last coordinate),
//! extended Hamming codes, and PAC codes with a Reed-Muller/polar rate profile.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// Names accepted by [`builtin`].
pub const BUILTIN_CODES: &[&str] = &[
    "ebch128_106",
    "ebch64_45",
    "ebch32_21",
    "ehamming8_4",
    "ehamming16_11",
    "pac64_44",
];

/// A binary `(n, k)` code with generator and parity-check matrices.
///
/// Invariants (checked on construction): `G·Hᵀ = 0`, `rank(G) = k` with `G`
/// having exactly `k` rows, and `rank(H) = n − k`. `H` may carry redundant rows.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearCode {
    name: String,
    n: usize,
    k: usize,
    g: BitMatrix,
    h: BitMatrix,
}

impl LinearCode {
    pub fn new(name: impl Into<String>, g: BitMatrix, h: BitMatrix) -> Result<Self> {
        let n = g.ncols();
        if n == 0 {
            return Err(Error::InvalidCode("zero block length".into()));
        }
        if h.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: h.ncols(),
            });
        }
        let k = g.nrows();
        if k == 0 {
            return Err(Error::DegenerateCode("dimension k = 0".into()));
        }
        let rg = g.rank();
        if rg != k {
            return Err(Error::InvalidCode(format!(
                "generator has {k} rows but rank {rg}"
            )));
        }
        let rh = h.rank();
        if rh != n - k {
            return Err(Error::InvalidCode(format!(
                "parity-check rank {rh} differs from n - k = {}",
                n - k
            )));
        }
        if !g.mul_transpose(&h)?.is_zero() {
            return Err(Error::InvalidCode("G·Hᵀ ≠ 0".into()));
        }
        Ok(LinearCode {
            name: name.into(),
            n,
            k,
            g,
            h,
        })
    }

    /// Derives `H` as the null space of `G`.
    pub fn from_generator(name: impl Into<String>, g: BitMatrix) -> Result<Self> {
        let h = g.nullspace();
        LinearCode::new(name, g, h)
    }

    /// Derives `G` as the null space of `H`.
    pub fn from_parity_check(name: impl Into<String>, h: BitMatrix) -> Result<Self> {
        let g = h.nullspace();
        LinearCode::new(name, g, h)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    /// `c = msg · G`.
    pub fn encode(&self, msg: &BitVec) -> Result<BitVec> {
        self.g.left_mul(msg)
    }

    pub fn is_codeword(&self, v: &BitVec) -> bool {
        v.len() == self.n && self.h.syndrome(v).map(|s| s.is_zero()).unwrap_or(false)
    }
}

/// GF(2^m) with log/antilog tables.
#[derive(Clone, Debug)]
pub struct Gf2mField {
    m: u32,
    poly: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Gf2mField {
    /// `poly` is the bitmask of the defining polynomial, e.g. `0b1000_1001`
    /// for `D^7 + D^3 + 1`. Fails unless `α` has order `2^m − 1`.
    pub fn new(m: u32, poly: u32) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::InvalidParameter(format!(
                "field degree m = {m} outside 2..=16"
            )));
        }
        if poly >> m != 1 {
            return Err(Error::NonPrimitivePolynomial {
                m,
                poly: poly as u64,
            });
        }
        let order = (1u32 << m) - 1;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; 1 << m];
        let mut x = 1u32;
        for i in 0..order {
            if log[x as usize] != u32::MAX {
                // α returned to an earlier power before 2^m − 1 steps.
                return Err(Error::NonPrimitivePolynomial {
                    m,
                    poly: poly as u64,
                });
            }
            log[x as usize] = i;
            exp.push(x);
            x <<= 1;
            if x >> m & 1 == 1 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(Error::NonPrimitivePolynomial {
                m,
                poly: poly as u64,
            });
        }
        Ok(Gf2mField { m, poly, exp, log })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn polynomial(&self) -> u32 {
        self.poly
    }

    /// Multiplicative order of α, `2^m − 1`.
    pub fn order(&self) -> u32 {
        self.exp.len() as u32
    }

    /// `α^e` as a bitmask element.
    pub fn alpha_pow(&self, e: u64) -> u32 {
        self.exp[(e % self.order() as u64) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.alpha_pow(s)
    }

    /// Exponents `{i·2^j mod (2^m − 1)}`, ascending.
    pub fn cyclotomic_coset(&self, i: u32) -> Vec<u32> {
        let q = self.order();
        let mut coset = Vec::new();
        let mut e = i % q;
        while !coset.contains(&e) {
            coset.push(e);
            e = (e * 2) % q;
        }
        coset.sort_unstable();
        coset
    }

    /// Minimal polynomial of `α^i` over GF(2), as a coefficient bitmask.
    pub fn minimal_polynomial(&self, i: u32) -> u64 {
        // Expand Π (x + α^c) with coefficients in GF(2^m), lowest degree first.
        let mut coeffs: Vec<u32> = vec![1];
        for c in self.cyclotomic_coset(i) {
            let root = self.alpha_pow(c as u64);
            let mut next = vec![0u32; coeffs.len() + 1];
            for (d, &a) in coeffs.iter().enumerate() {
                next[d + 1] ^= a;
                next[d] ^= self.mul(a, root);
            }
            coeffs = next;
        }
        coeffs.iter().enumerate().fold(0u64, |acc, (d, &a)| {
            debug_assert!(a <= 1, "minimal polynomial must be binary");
            acc | ((a as u64 & 1) << d)
        })
    }
}

/// A commonly used primitive polynomial for each degree 2..=16.
pub fn default_primitive_polynomial(m: u32) -> Option<u32> {
    Some(match m {
        2 => 0b111,
        3 => 0b1011,
        4 => 0b1_0011,
        5 => 0b10_0101,
        6 => 0b100_0011,
        7 => 0b1000_1001,
        8 => 0x11D,
        9 => 0x211,
        10 => 0x409,
        11 => 0x805,
        12 => 0x1053,
        13 => 0x201B,
        14 => 0x4443,
        15 => 0x8003,
        16 => 0x1100B,
        _ => return None,
    })
}

// Binary polynomials as coefficient vectors, lowest degree first.
fn poly_mul(a: &[bool], b: &[bool]) -> Vec<bool> {
    let mut out = vec![false; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= y;
            }
        }
    }
    out
}

fn mask_to_poly(mask: u64) -> Vec<bool> {
    let deg = 63 - mask.leading_zeros() as usize;
    (0..=deg).map(|d| mask >> d & 1 == 1).collect()
}

/// Appends rows that increase the rank of a running echelon basis.
struct IndependentRows {
    basis: Vec<(usize, BitVec)>,
    kept: Vec<BitVec>,
}

impl IndependentRows {
    fn new() -> Self {
        IndependentRows {
            basis: Vec::new(),
            kept: Vec::new(),
        }
    }

    fn offer(&mut self, row: BitVec) {
        let mut r = row.clone();
        for (pivot, b) in &self.basis {
            if r.bit(*pivot) {
                r.xor_assign(b);
            }
        }
        let lead = r.ones_iter().next();
        if let Some(p) = lead {
            self.basis.push((p, r));
            self.kept.push(row);
        }
    }
}

/// Extended narrow-sense BCH code of length `2^m` with designed
/// error-correction `t` over the field defined by `poly`.
///
/// `G` holds the shifts of the generator polynomial plus an overall parity
/// bit; `H` starts with the all-ones row followed by the bit planes of
/// `[1, β, β², …, β^{2^m−2}, 0]` for `β = α^i`, `i ∈ {1, 3, …, 2t−1}`,
/// one row per linearly independent plane.
pub fn ebch(m: u32, t: u32, poly: u32) -> Result<LinearCode> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("ebch needs m ≥ 3, got {m}")));
    }
    if t == 0 || (t as u64) * (m as u64) >= 1u64 << (m - 1) {
        return Err(Error::InvalidParameter(format!(
            "designed t = {t} outside 1 ≤ t < 2^(m−1)/m for m = {m}"
        )));
    }
    let field = Gf2mField::new(m, poly)?;
    let n0 = field.order() as usize;
    let n = n0 + 1;

    let mut leaders: Vec<u32> = Vec::new();
    let mut covered: Vec<u32> = Vec::new();
    for i in (1..2 * t).step_by(2) {
        if !covered.contains(&(i % field.order())) {
            covered.extend(field.cyclotomic_coset(i));
            leaders.push(i);
        }
    }

    let gen = leaders.iter().fold(vec![true], |acc, &i| {
        poly_mul(&acc, &mask_to_poly(field.minimal_polynomial(i)))
    });
    let r = gen.len() - 1;
    if r >= n0 {
        return Err(Error::DegenerateCode(format!(
            "generator degree {r} leaves no information bits"
        )));
    }
    let k = n0 - r;

    let mut g = BitMatrix::zeros(0, n);
    for shift in 0..k {
        let mut row = BitVec::zeros(n);
        for (d, &c) in gen.iter().enumerate() {
            if c {
                row.set_bit(shift + d, true);
            }
        }
        if row.weight() % 2 == 1 {
            row.set_bit(n0, true);
        }
        g.push_row(row)?;
    }

    let mut rows = IndependentRows::new();
    rows.offer(BitVec::ones(n));
    for &i in &leaders {
        for b in 0..m {
            let mut row = BitVec::zeros(n);
            for j in 0..n0 {
                if field.alpha_pow(i as u64 * j as u64) >> b & 1 == 1 {
                    row.set_bit(j, true);
                }
            }
            rows.offer(row);
        }
    }
    let h = BitMatrix::from_rows(n, rows.kept)?;
    LinearCode::new(format!("ebch{n}_{k}"), g, h)
}

/// Extended Hamming code `(2^m, 2^m − m − 1)`, minimum distance 4.
pub fn extended_hamming(m: u32) -> Result<LinearCode> {
    if !(2..=16).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "extended Hamming needs 2 ≤ m ≤ 16, got {m}"
        )));
    }
    let n = 1usize << m;
    let mut h = BitMatrix::zeros(0, n);
    h.push_row(BitVec::ones(n))?;
    for b in 0..m {
        let mut row = BitVec::zeros(n);
        for j in 1..n {
            if j >> b & 1 == 1 {
                row.set_bit(j - 1, true);
            }
        }
        h.push_row(row)?;
    }
    let g = h.nullspace();
    LinearCode::new(format!("ehamming{}_{}", n, n - m as usize - 1), g, h)
}

/// How the information set of a PAC code is chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum RateProfile {
    /// Rows of largest Hamming weight first (Reed-Muller rule); ties broken by
    /// Gaussian-approximation reliability at the given design Eb/N0 in dB.
    RmPolar { design_snr_db: f64 },
    /// Explicit 1-based information indices.
    Explicit(Vec<usize>),
}

// Chung's approximation of the GA φ function.
fn ga_phi(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x < 10.0 {
        (-0.4527 * x.powf(0.86) + 0.0218).exp()
    } else {
        (std::f64::consts::PI / x).sqrt() * (-x / 4.0).exp() * (1.0 - 10.0 / (7.0 * x))
    }
}

fn ga_phi_inv(y: f64) -> f64 {
    if y >= 1.0 {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while ga_phi(hi) > y {
        hi *= 2.0;
        if hi > 1e6 {
            return hi;
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if ga_phi(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Mean LLR of each synthetic channel of `F^{⊗log2 n}` (natural order) under
/// the Gaussian approximation.
pub fn ga_reliabilities(n: usize, rate: f64, design_snr_db: f64) -> Vec<f64> {
    let sigma2 = 1.0 / (2.0 * rate * 10f64.powf(design_snr_db / 10.0));
    let mu0 = 2.0 / sigma2;
    let levels = n.trailing_zeros();
    (0..n)
        .map(|i| {
            let mut mu = mu0;
            for b in 0..levels {
                if i >> b & 1 == 1 {
                    mu *= 2.0;
                } else {
                    let p = ga_phi(mu);
                    mu = ga_phi_inv(p * (2.0 - p));
                }
            }
            mu
        })
        .collect()
}

/// Polarization-adjusted convolutional code.
///
/// `G` = rows of `T·F^{⊗log2 n}` on the information set, where `T` is the
/// upper-triangular Toeplitz matrix of `conv_poly`. `H` rows are the columns
/// of `F^{⊗log2 n}·T⁻¹` on the frozen set, so `H` contains the all-ones row
/// whenever index 1 is frozen.
pub fn pac(n: usize, k: usize, conv_poly: &[u8], profile: &RateProfile) -> Result<LinearCode> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "PAC length {n} is not a power of two"
        )));
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "PAC dimension {k} outside 1..{n}"
        )));
    }
    if conv_poly.first() != Some(&1) {
        return Err(Error::InvalidParameter(
            "convolutional polynomial must start with 1".into(),
        ));
    }
    let info: Vec<usize> = match profile {
        RateProfile::Explicit(idx) => {
            if idx.len() != k {
                return Err(Error::InvalidParameter(format!(
                    "rate profile lists {} indices, expected {k}",
                    idx.len()
                )));
            }
            let mut v = Vec::with_capacity(k);
            for &i in idx {
                if i == 0 || i > n {
                    return Err(Error::IndexOutOfRange { index: i, len: n });
                }
                v.push(i - 1);
            }
            v.sort_unstable();
            v.dedup();
            if v.len() != k {
                return Err(Error::InvalidParameter(
                    "rate profile has repeated indices".into(),
                ));
            }
            v
        }
        RateProfile::RmPolar { design_snr_db } => {
            let rel = ga_reliabilities(n, k as f64 / n as f64, *design_snr_db);
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| {
                b.count_ones()
                    .cmp(&a.count_ones())
                    .then(rel[b].total_cmp(&rel[a]))
                    .then(a.cmp(&b))
            });
            let mut v = order[..k].to_vec();
            v.sort_unstable();
            v
        }
    };
    let mut is_info = vec![false; n];
    for &i in &info {
        is_info[i] = true;
    }

    let kernel_row = |r: usize| {
        let mut row = BitVec::zeros(n);
        for c in 0..n {
            if c & r == c {
                row.set_bit(c, true);
            }
        }
        row
    };
    let kernel_col = |c: usize| {
        let mut col = BitVec::zeros(n);
        for r in 0..n {
            if c & r == c {
                col.set_bit(r, true);
            }
        }
        col
    };

    let mut g = BitMatrix::zeros(0, n);
    for &i in &info {
        let mut row = BitVec::zeros(n);
        for (j, &c) in conv_poly.iter().enumerate() {
            if c != 0 && i + j < n {
                row.xor_assign(&kernel_row(i + j));
            }
        }
        g.push_row(row)?;
    }

    // Power series inverse of conv_poly modulo x^n.
    let mut inv = vec![0u8; n];
    inv[0] = 1;
    for d in 1..n {
        let mut acc = 0u8;
        for j in 1..=d.min(conv_poly.len() - 1) {
            acc ^= conv_poly[j] & inv[d - j];
        }
        inv[d] = acc;
    }

    let mut h = BitMatrix::zeros(0, n);
    for i in (0..n).filter(|&i| !is_info[i]) {
        let mut row = BitVec::zeros(n);
        for l in 0..=i {
            if inv[i - l] == 1 {
                row.xor_assign(&kernel_col(l));
            }
        }
        h.push_row(row)?;
    }
    LinearCode::new(format!("pac{n}_{k}"), g, h)
}

/// Looks up one of [`BUILTIN_CODES`].
pub fn builtin(name: &str) -> Result<LinearCode> {
    match name {
        "ebch128_106" => ebch(7, 3, 0b1000_1001),
        "ebch64_45" => ebch(6, 3, 0b100_0011),
        "ebch32_21" => ebch(5, 2, 0b10_0101),
        "ehamming8_4" => extended_hamming(3),
        "ehamming16_11" => extended_hamming(4),
        "pac64_44" => pac(
            64,
            44,
            &[1, 0, 1, 1, 0, 1, 1],
            &RateProfile::RmPolar { design_snr_db: 2.0 },
        ),
        other => Err(Error::UnknownCode(other.to_string())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MatrixKind {
    G,
    H,
}

/// Reads a code file.
///
/// A file holds one or two matrix sections in the text matrix format, each
/// introduced by a `# kind=G|H name=<label>` line. A missing matrix is derived
/// through the null space. Files ending in `.alist` are read as a parity-check
/// matrix in alist format.
pub fn load_code(path: impl AsRef<Path>) -> Result<LinearCode> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "alist") {
        let h = BitMatrix::parse_alist(&text)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "alist".into());
        return LinearCode::from_parity_check(name, h);
    }
    parse_code(&text)
}

/// Parses the contents of a code file; see [`load_code`].
pub fn parse_code(text: &str) -> Result<LinearCode> {
    let mut sections: Vec<(MatrixKind, Option<String>, String, usize)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix('#') {
            let mut kind = None;
            let mut name = None;
            for tok in rest.split_whitespace() {
                if let Some(v) = tok.strip_prefix("kind=") {
                    kind = Some(match v {
                        "G" => MatrixKind::G,
                        "H" => MatrixKind::H,
                        other => {
                            return Err(Error::Parse {
                                line: i + 1,
                                msg: format!("unknown matrix kind {other:?}"),
                            })
                        }
                    });
                } else if let Some(v) = tok.strip_prefix("name=") {
                    name = Some(v.to_string());
                }
            }
            if let Some(kind) = kind {
                sections.push((kind, name, String::new(), i + 1));
            }
            continue;
        }
        match sections.last_mut() {
            Some(sec) => {
                sec.2.push_str(line);
                sec.2.push('\n');
            }
            None if trimmed.is_empty() => {}
            None => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: "matrix data before a \"# kind=G|H\" header".into(),
                })
            }
        }
    }
    if sections.is_empty() || sections.len() > 2 {
        return Err(Error::Parse {
            line: 1,
            msg: "expected one or two \"# kind=G|H\" sections".into(),
        });
    }
    let name = sections
        .iter()
        .find_map(|s| s.1.clone())
        .unwrap_or_else(|| "unnamed".into());
    let mut g = None;
    let mut h = None;
    for (kind, _, body, start) in &sections {
        let m = BitMatrix::parse_text(body).map_err(|e| match e {
            Error::Parse { line, msg } => Error::Parse {
                line: line + start,
                msg,
            },
            other => other,
        })?;
        let slot = match kind {
            MatrixKind::G => &mut g,
            MatrixKind::H => &mut h,
        };
        if slot.replace(m).is_some() {
            return Err(Error::Parse {
                line: *start,
                msg: "duplicate matrix kind".into(),
            });
        }
    }
    match (g, h) {
        (Some(g), Some(h)) => LinearCode::new(name, g, h),
        (Some(g), None) => LinearCode::from_generator(name, g),
        (None, Some(h)) => LinearCode::from_parity_check(name, h),
        (None, None) => unreachable!("at least one section parsed"),
    }
}

/// Text written by [`save_code`]: both matrices, `G` first.
pub fn code_to_text(code: &LinearCode) -> String {
    format!(
        "# kind=G name={}\n{}# kind=H name={}\n{}",
        code.name(),
        code.generator().to_text(),
        code.name(),
        code.parity_check().to_text()
    )
}

/// Writes both matrices so that [`load_code`] restores the code exactly.
pub fn save_code(code: &LinearCode, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, code_to_text(code))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn all_codewords(code: &LinearCode) -> Vec<BitVec> {
        (0u32..1 << code.k())
            .map(|m| {
                let bits: Vec<u8> = (0..code.k()).map(|i| (m >> i & 1) as u8).collect();
                code.encode(&BitVec::from_bits(&bits)).unwrap()
            })
            .collect()
    }

    fn random_msg(rng: &mut ChaCha8Rng, k: usize) -> BitVec {
        let bits: Vec<u8> = (0..k).map(|_| rng.random_range(0..2)).collect();
        BitVec::from_bits(&bits)
    }

    #[test]
    fn field_rejects_non_primitive() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but α has order 5.
        assert!(matches!(
            Gf2mField::new(4, 0b11111),
            Err(Error::NonPrimitivePolynomial { .. })
        ));
        assert!(Gf2mField::new(4, 0b10011).is_ok());
        for m in 2..=16 {
            assert!(Gf2mField::new(m, default_primitive_polynomial(m).unwrap()).is_ok());
        }
    }

    #[test]
    fn minimal_polynomials_gf8() {
        let f = Gf2mField::new(3, 0b1011).unwrap();
        assert_eq!(f.minimal_polynomial(1), 0b1011);
        assert_eq!(f.minimal_polynomial(3), 0b1101);
        assert_eq!(f.minimal_polynomial(0), 0b11);
    }

    #[test]
    fn ebch_128_106_dimensions() {
        let c = ebch(7, 3, 0b1000_1001).unwrap();
        assert_eq!((c.n(), c.k()), (128, 106));
        assert_eq!(c.name(), "ebch128_106");
        let h = c.parity_check();
        assert_eq!(h.row(0), &BitVec::ones(128));
        assert_eq!(h.row(1).weight(), 64);
        assert!(!h.row(1).get(128));
    }

    #[test]
    fn ebch_8_4_is_extended_hamming_with_dmin_4() {
        let c = ebch(3, 1, 0b1011).unwrap();
        assert_eq!((c.n(), c.k()), (8, 4));
        let words = all_codewords(&c);
        let set: HashSet<_> = words.iter().cloned().collect();
        assert_eq!(set.len(), 16);
        let dmin = words.iter().filter(|w| !w.is_zero()).map(BitVec::weight).min();
        assert_eq!(dmin, Some(4));
        assert!(words.iter().all(|w| w.weight() % 2 == 0));
    }

    #[test]
    fn ebch_32_21_corrects_two_errors() {
        let c = ebch(5, 2, 0b10_0101).unwrap();
        assert_eq!((c.n(), c.k()), (32, 21));
        // Unextended (31,21) parity check: drop the all-ones row and the last coordinate.
        let h = c.parity_check();
        let inner: Vec<BitVec> = h.rows()[1..]
            .iter()
            .map(|r| BitVec::from_bits(&r.iter().take(31).map(u8::from).collect::<Vec<_>>()))
            .collect();
        let inner = BitMatrix::from_rows(31, inner).unwrap();
        let mut seen = HashSet::new();
        seen.insert(inner.syndrome(&BitVec::zeros(31)).unwrap());
        for i in 1..=31 {
            assert!(seen.insert(inner.syndrome(&BitVec::from_support(31, &[i]).unwrap()).unwrap()));
        }
        for i in 1..=31 {
            for j in i + 1..=31 {
                let e = BitVec::from_support(31, &[i, j]).unwrap();
                assert!(seen.insert(inner.syndrome(&e).unwrap()));
            }
        }
        assert_eq!(seen.len(), 1 + 31 + 465);
    }

    #[test]
    fn ebch_parameter_errors() {
        assert!(matches!(ebch(2, 1, 0b111), Err(Error::InvalidParameter(_))));
        assert!(matches!(ebch(5, 0, 0b10_0101), Err(Error::InvalidParameter(_))));
        assert!(matches!(ebch(5, 4, 0b10_0101), Err(Error::InvalidParameter(_))));
        assert!(matches!(
            ebch(4, 1, 0b11111),
            Err(Error::NonPrimitivePolynomial { .. })
        ));
    }

    #[test]
    fn ebch_random_encodings_are_even_weight_codewords() {
        let c = ebch(7, 3, 0b1000_1001).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let cw = c.encode(&random_msg(&mut rng, c.k())).unwrap();
            assert!(c.parity_check().syndrome(&cw).unwrap().is_zero());
            assert_eq!(cw.weight() % 2, 0);
        }
    }

    #[test]
    fn extended_hamming_small() {
        let c8 = extended_hamming(3).unwrap();
        assert_eq!((c8.n(), c8.k()), (8, 4));
        let c16 = extended_hamming(4).unwrap();
        assert_eq!((c16.n(), c16.k()), (16, 11));
        for c in [&c8, &c16] {
            let h = c.parity_check();
            for i in 1..=c.n() {
                let e = BitVec::from_support(c.n(), &[i]).unwrap();
                assert!(!h.syndrome(&e).unwrap().is_zero());
                for j in i + 1..=c.n() {
                    let e = BitVec::from_support(c.n(), &[i, j]).unwrap();
                    assert!(!h.syndrome(&e).unwrap().is_zero());
                }
            }
        }
        let dmin = all_codewords(&c8)
            .iter()
            .filter(|w| !w.is_zero())
            .map(BitVec::weight)
            .min();
        assert_eq!(dmin, Some(4));
    }

    #[test]
    fn encode_basics() {
        let c = extended_hamming(3).unwrap();
        assert!(c.encode(&BitVec::zeros(4)).unwrap().is_zero());
        assert_eq!(
            c.encode(&BitVec::zeros(5)),
            Err(Error::DimensionMismatch {
                expected: 4,
                actual: 5
            })
        );
    }

    #[test]
    fn pac_identity_precoding_is_polar() {
        let info: Vec<usize> = vec![4, 6, 7, 8];
        let c = pac(8, 4, &[1], &RateProfile::Explicit(info.clone())).unwrap();
        // Rows of F^{⊗3} (natural order) for indices 4, 6, 7, 8.
        let expect = ["11110000", "11001100", "10101010", "11111111"];
        for (row, e) in c.generator().rows().iter().zip(expect) {
            assert_eq!(row.to_string(), e);
        }
    }

    #[test]
    fn pac_64_44_is_valid() {
        let c = builtin("pac64_44").unwrap();
        assert_eq!((c.n(), c.k()), (64, 44));
        assert!(c.generator().mul_transpose(c.parity_check()).unwrap().is_zero());
        assert_eq!(c.parity_check().row(0), &BitVec::ones(64));
    }

    #[test]
    fn pac_profile_size_error() {
        assert!(matches!(
            pac(8, 4, &[1, 1], &RateProfile::Explicit(vec![1, 2, 3])),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn ga_orders_extremes() {
        let rel = ga_reliabilities(16, 0.5, 2.0);
        let worst = (0..16).min_by(|&a, &b| rel[a].total_cmp(&rel[b])).unwrap();
        let best = (0..16).max_by(|&a, &b| rel[a].total_cmp(&rel[b])).unwrap();
        assert_eq!((worst, best), (0, 15));
    }

    #[test]
    fn builtins_construct() {
        for name in BUILTIN_CODES {
            let c = builtin(name).unwrap();
            assert_eq!(&c.name(), name);
        }
        assert!(matches!(builtin("nope"), Err(Error::UnknownCode(_))));
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let c = builtin("ebch32_21").unwrap();
        save_code(&c, &path).unwrap();
        let back = load_code(&path).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn h_only_file_derives_generator() {
        let c = extended_hamming(4).unwrap();
        let text = format!("# kind=H name=h16\n{}", c.parity_check().to_text());
        let back = parse_code(&text).unwrap();
        assert_eq!(back.k(), 11);
        assert!(back.generator().mul_transpose(back.parity_check()).unwrap().is_zero());
        assert_eq!(back.name(), "h16");
    }

    #[test]
    fn corrupt_header_is_a_parse_error() {
        let c = extended_hamming(3).unwrap();
        let text = format!("# kind=H name=x\n{}", c.parity_check().to_text())
            .replacen("4 8", "4 x", 1);
        assert!(matches!(parse_code(&text), Err(Error::Parse { .. })));
        let short = format!("# kind=H name=x\n{}", c.parity_check().to_text())
            .replacen("4 8", "5 8", 1);
        assert!(matches!(parse_code(&short), Err(Error::Parse { .. })));
    }

    #[test]
    fn rank_deficient_file_is_rejected() {
        let text = "# kind=G name=bad\n2 4\n1100\n1100\n";
        assert!(matches!(parse_code(text), Err(Error::InvalidCode(_))));
    }
}
