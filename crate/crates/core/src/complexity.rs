//! Factor complexity, Sturmian census, letter frequencies and repetition /
//! palindrome search over finite prefixes.
//!
//! Every count here is taken over a prefix of length `N` (the horizon), so
//! `p_N(m)` is a lower bound for the complexity of the infinite word.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::reals::{RealError, RealSource};
use crate::words::{Symbol, WordStream};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexityError {
    #[error("maximum factor length {max_m} exceeds horizon {horizon}")]
    HorizonTooShort { max_m: usize, horizon: usize },
    #[error("Sturmian census needs a binary alphabet, got {0} letters")]
    NotBinary(usize),
    #[error("w-power exponent {num}/{den} must exceed 1")]
    BadExponent { num: u32, den: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityProfile {
    pub horizon: usize,
    /// `counts[m - 1] = p_N(m)`.
    pub counts: Vec<usize>,
}

impl ComplexityProfile {
    pub fn p(&self, m: usize) -> usize {
        if m == 0 {
            1
        } else {
            self.counts[m - 1]
        }
    }

    pub fn max_m(&self) -> usize {
        self.counts.len()
    }
}

fn bits_per_symbol(symbols: &[Symbol]) -> u32 {
    let max = symbols.iter().copied().max().unwrap_or(0) as u32;
    (32 - max.leading_zeros()).max(1)
}

/// Starting positions of one occurrence of each distinct length-`m` factor,
/// ordered by factor content when packed, by hash otherwise.
pub fn distinct_factor_starts(symbols: &[Symbol], m: usize) -> Vec<usize> {
    if m == 0 || m > symbols.len() {
        return if m == 0 { alloc::vec![0] } else { Vec::new() };
    }
    let bits = bits_per_symbol(symbols) as usize;
    if bits * m <= 64 {
        packed_starts::<u64>(symbols, m, bits)
    } else if bits * m <= 128 {
        packed_starts::<u128>(symbols, m, bits)
    } else {
        hashed_starts(symbols, m)
    }
}

trait Key: Copy + Ord {
    const ZERO: Self;
    fn push(self, s: Symbol, bits: usize, mask: Self) -> Self;
    fn mask(bits_total: usize) -> Self;
}

impl Key for u64 {
    const ZERO: Self = 0;
    fn push(self, s: Symbol, bits: usize, mask: Self) -> Self {
        ((self << bits) | s as u64) & mask
    }
    fn mask(t: usize) -> Self {
        if t >= 64 {
            u64::MAX
        } else {
            (1u64 << t) - 1
        }
    }
}

impl Key for u128 {
    const ZERO: Self = 0;
    fn push(self, s: Symbol, bits: usize, mask: Self) -> Self {
        ((self << bits) | s as u128) & mask
    }
    fn mask(t: usize) -> Self {
        if t >= 128 {
            u128::MAX
        } else {
            (1u128 << t) - 1
        }
    }
}

fn packed_starts<K: Key>(symbols: &[Symbol], m: usize, bits: usize) -> Vec<usize> {
    let mask = K::mask(bits * m);
    let mut keys: Vec<(K, usize)> = Vec::with_capacity(symbols.len() - m + 1);
    let mut key = K::ZERO;
    for (i, &s) in symbols.iter().enumerate() {
        key = key.push(s, bits, mask);
        if i + 1 >= m {
            keys.push((key, i + 1 - m));
        }
    }
    keys.sort_unstable();
    keys.dedup_by(|a, b| a.0 == b.0);
    keys.into_iter().map(|(_, s)| s).collect()
}

const HASH_MOD: u64 = (1 << 61) - 1;
const HASH_BASE: u64 = 0x1F3D_5B79_A2C4_E681 % HASH_MOD;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % HASH_MOD as u128) as u64
}

/// Rolling hash, sorted; equal-hash groups are verified by direct comparison
/// so the result is exact.
fn hashed_starts(symbols: &[Symbol], m: usize) -> Vec<usize> {
    let mut top = 1u64;
    for _ in 0..m - 1 {
        top = mulmod(top, HASH_BASE);
    }
    let mut h = 0u64;
    for &s in &symbols[..m] {
        h = (mulmod(h, HASH_BASE) + s as u64 + 1) % HASH_MOD;
    }
    let mut entries: Vec<(u64, usize)> = Vec::with_capacity(symbols.len() - m + 1);
    entries.push((h, 0));
    for i in m..symbols.len() {
        let out = mulmod(symbols[i - m] as u64 + 1, top);
        h = (h + HASH_MOD - out) % HASH_MOD;
        h = (mulmod(h, HASH_BASE) + symbols[i] as u64 + 1) % HASH_MOD;
        entries.push((h, i + 1 - m));
    }
    entries.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < entries.len() {
        let mut j = i + 1;
        while j < entries.len() && entries[j].0 == entries[i].0 {
            j += 1;
        }
        if j - i == 1 {
            out.push(entries[i].1);
        } else {
            let mut group: Vec<usize> = entries[i..j].iter().map(|e| e.1).collect();
            group.sort_unstable_by(|&a, &b| symbols[a..a + m].cmp(&symbols[b..b + m]));
            group.dedup_by(|a, b| symbols[*a..*a + m] == symbols[*b..*b + m]);
            out.extend(group);
        }
        i = j;
    }
    out
}

pub fn count_distinct_factors(symbols: &[Symbol], m: usize) -> usize {
    distinct_factor_starts(symbols, m).len()
}

pub fn complexity_of(symbols: &[Symbol], max_m: usize) -> Result<ComplexityProfile, ComplexityError> {
    if max_m > symbols.len() {
        return Err(ComplexityError::HorizonTooShort { max_m, horizon: symbols.len() });
    }
    let counts = (1..=max_m).map(|m| count_distinct_factors(symbols, m)).collect();
    Ok(ComplexityProfile { horizon: symbols.len(), counts })
}

pub fn complexity(w: &mut WordStream, max_m: usize, horizon: usize) -> Result<ComplexityProfile, ComplexityError> {
    if max_m > horizon {
        return Err(ComplexityError::HorizonTooShort { max_m, horizon });
    }
    complexity_of(w.symbols(horizon), max_m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SturmianCensus {
    pub horizon: usize,
    pub max_m: usize,
    /// `p_N(m)` for `1 ≤ m ≤ max_m + 1`.
    pub counts: Vec<usize>,
    /// Right-special factors of each length `1..=max_m`.
    pub right_special: Vec<Vec<Vec<Symbol>>>,
    /// Smallest `m` with `p_N(m + 1) = p_N(m)`, if any.
    pub stall: Option<usize>,
    pub sturmian: bool,
}

/// Right-special factors of length `m`: factors `v` with both `va` and `vb`
/// present in the prefix.
pub fn right_special_factors(symbols: &[Symbol], m: usize) -> Vec<Vec<Symbol>> {
    if m + 1 > symbols.len() {
        return Vec::new();
    }
    let mut starts = distinct_factor_starts(symbols, m + 1);
    starts.sort_unstable_by(|&a, &b| symbols[a..a + m + 1].cmp(&symbols[b..b + m + 1]));
    let mut out = Vec::new();
    let mut i = 0;
    while i < starts.len() {
        let v = &symbols[starts[i]..starts[i] + m];
        let mut j = i + 1;
        while j < starts.len() && &symbols[starts[j]..starts[j] + m] == v {
            j += 1;
        }
        if j - i >= 2 {
            out.push(v.to_vec());
        }
        i = j;
    }
    out
}

pub fn is_sturmian_up_to(w: &mut WordStream, max_m: usize, horizon: usize) -> Result<SturmianCensus, ComplexityError> {
    let letters = w.alphabet().len();
    if letters != 2 {
        return Err(ComplexityError::NotBinary(letters));
    }
    if max_m + 1 > horizon {
        return Err(ComplexityError::HorizonTooShort { max_m: max_m + 1, horizon });
    }
    let symbols = w.symbols(horizon);
    let counts: Vec<usize> = (1..=max_m + 1).map(|m| count_distinct_factors(symbols, m)).collect();
    let right_special: Vec<Vec<Vec<Symbol>>> = (1..=max_m).map(|m| right_special_factors(symbols, m)).collect();
    let stall = (0..max_m).find(|&i| counts[i + 1] == counts[i]).map(|i| i + 1);
    let sturmian = (0..max_m).all(|i| counts[i] == i + 2 && right_special[i].len() == 1);
    Ok(SturmianCensus { horizon, max_m, counts, right_special, stall, sturmian })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LetterFrequency {
    pub horizon: usize,
    pub counts: Vec<usize>,
}

impl LetterFrequency {
    pub fn ratio(&self, letter: Symbol) -> f64 {
        self.counts.get(letter as usize).copied().unwrap_or(0) as f64 / self.horizon as f64
    }

    pub fn ratios(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|i| self.ratio(i as Symbol)).collect()
    }
}

pub fn letter_frequency(w: &mut WordStream, horizon: usize) -> LetterFrequency {
    assert!(horizon >= 1, "horizon must be positive");
    let n = w.alphabet().len();
    let mut counts = alloc::vec![0usize; n];
    for &s in w.symbols(horizon) {
        counts[s as usize] += 1;
    }
    LetterFrequency { horizon, counts }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    Square,
    /// `xXxXx` with `x` a letter, i.e. length `2p + 1` with period `p`.
    Overlap,
    /// `W^⌊w⌋ W'` with `w = num / den > 1`.
    Power {
        num: u32,
        den: u32,
    },
    Palindrome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternHit {
    pub kind: PatternKind,
    pub start: usize,
    /// Length of the root `W` (the period); `None` for palindromes.
    pub root: Option<usize>,
    pub len: usize,
}

/// Total length of a `num/den`-power with root length `p`.
pub fn power_length(num: u32, den: u32, p: usize) -> usize {
    let whole = (num / den) as usize;
    let rem = (num % den) as usize;
    whole * p + (rem * p).div_ceil(den as usize)
}

pub fn find_patterns_in(symbols: &[Symbol], kind: PatternKind) -> Result<Vec<PatternHit>, ComplexityError> {
    match kind {
        PatternKind::Square => Ok(periodic_runs(symbols, kind, |p| 2 * p)),
        PatternKind::Overlap => Ok(periodic_runs(symbols, kind, |p| 2 * p + 1)),
        PatternKind::Power { num, den } => {
            if den == 0 || num <= den {
                return Err(ComplexityError::BadExponent { num, den });
            }
            Ok(periodic_runs(symbols, kind, |p| power_length(num, den, p)))
        }
        PatternKind::Palindrome => Ok(maximal_palindromes(symbols)),
    }
}

pub fn find_patterns(
    w: &mut WordStream,
    kind: PatternKind,
    horizon: usize,
) -> Result<Vec<PatternHit>, ComplexityError> {
    find_patterns_in(w.symbols(horizon), kind)
}

/// Every `(start, p)` such that `symbols[start..start + total(p)]` has period `p`.
fn periodic_runs(symbols: &[Symbol], kind: PatternKind, total: impl Fn(usize) -> usize) -> Vec<PatternHit> {
    let n = symbols.len();
    let mut hits = Vec::new();
    let mut p = 1;
    while total(p) <= n {
        let need = total(p) - p;
        let mut run = 0usize;
        for j in 0..n - p {
            if symbols[j] == symbols[j + p] {
                run += 1;
                if run >= need {
                    let start = j + 1 - need;
                    hits.push(PatternHit { kind, start, root: Some(p), len: total(p) });
                }
            } else {
                run = 0;
            }
        }
        p += 1;
    }
    hits.sort_by_key(|a| (a.start, a.len));
    hits
}

/// Maximal palindromes of length ≥ 2, one per center (Manacher).
fn maximal_palindromes(symbols: &[Symbol]) -> Vec<PatternHit> {
    let n = symbols.len();
    if n == 0 {
        return Vec::new();
    }
    // Interleaved positions 0..2n-1: even = letter, odd = gap.
    let m = 2 * n - 1;
    let at = |i: usize| -> Option<Symbol> { i.is_multiple_of(2).then(|| symbols[i / 2]) };
    let mut rad = alloc::vec![0usize; m];
    let (mut c, mut r) = (0usize, 0usize);
    for i in 0..m {
        let mut k = if i < r { rad[2 * c - i].min(r - i) } else { 0 };
        while i > k && i + k + 1 < m && at(i - k - 1) == at(i + k + 1) {
            k += 1;
        }
        rad[i] = k;
        if i + k > r {
            c = i;
            r = i + k;
        }
    }
    let mut hits = Vec::new();
    for (i, &k) in rad.iter().enumerate() {
        // Span in interleaved coordinates is [i-k, i+k]; trim to letters.
        let (mut lo, mut hi) = (i - k, i + k);
        if lo % 2 == 1 {
            lo += 1;
        }
        if hi % 2 == 1 {
            hi -= 1;
        }
        if hi < lo {
            continue;
        }
        let len = (hi - lo) / 2 + 1;
        if len >= 2 {
            hits.push(PatternHit { kind: PatternKind::Palindrome, start: lo / 2, root: None, len });
        }
    }
    hits.sort_by_key(|a| (a.start, a.len));
    hits
}

pub fn is_palindrome(s: &[Symbol]) -> bool {
    s.iter().eq(s.iter().rev())
}

pub fn longest(hits: &[PatternHit]) -> Option<PatternHit> {
    hits.iter().copied().max_by(|a, b| a.len.cmp(&b.len).then(b.start.cmp(&a.start)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Periodicity {
    pub preperiod: usize,
    pub period: usize,
}

impl Periodicity {
    /// Regenerates `len` symbols from the first `preperiod + period` ones.
    pub fn extend(&self, seed: &[Symbol], len: usize) -> Vec<Symbol> {
        (0..len)
            .map(
                |i| {
                    if i < self.preperiod {
                        seed[i]
                    } else {
                        seed[self.preperiod + (i - self.preperiod) % self.period]
                    }
                },
            )
            .collect()
    }
}

/// Smallest period `p ≤ max_period` (with smallest preperiod for it) such that
/// the prefix is `p`-periodic from some index on, with at least `min_repeats`
/// full periods observed.
pub fn eventual_period(symbols: &[Symbol], max_period: usize, min_repeats: usize) -> Option<Periodicity> {
    let n = symbols.len();
    for p in 1..=max_period.min(n) {
        let mut s = 0;
        for j in (0..n - p).rev() {
            if symbols[j] != symbols[j + p] {
                s = j + 1;
                break;
            }
        }
        if n - s >= p * min_repeats.max(1) {
            return Some(Periodicity { preperiod: s, period: p });
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub r_squared: f64,
}

/// Least-squares fit `y ≈ a x² + b x + c`.
pub fn fit_quadratic(xs: &[f64], ys: &[f64]) -> QuadraticFit {
    assert_eq!(xs.len(), ys.len());
    let mut s = [0.0f64; 5];
    let mut t = [0.0f64; 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let mut pw = 1.0;
        for (k, slot) in s.iter_mut().enumerate() {
            *slot += pw;
            if k < 3 {
                t[k] += pw * y;
            }
            pw *= x;
        }
    }
    // Normal equations in (c, b, a).
    let m = [[s[0], s[1], s[2]], [s[1], s[2], s[3]], [s[2], s[3], s[4]]];
    let det = det3(m);
    let solve = |col: usize| {
        let mut mm = m;
        for r in 0..3 {
            mm[r][col] = t[r];
        }
        det3(mm) / det
    };
    let (c, b, a) = (solve(0), solve(1), solve(2));
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let f = a * x * x + b * x + c;
        ss_res += (y - f) * (y - f);
        ss_tot += (y - mean) * (y - mean);
    }
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    QuadraticFit { a, b, c, r_squared }
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `max_m p(m)/m`: the smallest `C` with `p(m) ≤ C m` over the profile.
pub fn linear_constant(profile: &ComplexityProfile) -> f64 {
    profile.counts.iter().enumerate().map(|(i, &p)| p as f64 / (i + 1) as f64).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub m: usize,
    pub p: usize,
    pub per_m: f64,
    /// `p / (m (ln m)^η)`, undefined at `m = 1`.
    pub per_m_log: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub source: String,
    pub base: u32,
    pub horizon: usize,
    pub eta: f64,
    pub rows: Vec<GrowthRow>,
}

pub const DEFAULT_ETA: f64 = 1.0 / 11.0;

pub fn growth_rows(profile: &ComplexityProfile, eta: f64) -> Vec<GrowthRow> {
    profile
        .counts
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let m = i + 1;
            let lm = libm::log(m as f64);
            GrowthRow {
                m,
                p,
                per_m: p as f64 / m as f64,
                per_m_log: (m > 1).then(|| p as f64 / (m as f64 * libm::pow(lm, eta))),
            }
        })
        .collect()
}

pub fn complexity_growth_report(
    source: &RealSource,
    g: u32,
    max_m: usize,
    horizon: usize,
    eta: f64,
) -> Result<GrowthReport, RealError> {
    let digits = source.digits(g, horizon)?;
    let profile = complexity_of(digits.symbols(), max_m.min(horizon))
        .unwrap_or(ComplexityProfile { horizon, counts: Vec::new() });
    Ok(GrowthReport { source: source.describe(), base: g, horizon, eta, rows: growth_rows(&profile, eta) })
}

/// Orders two factors first by length then lexicographically.
pub fn shortlex(a: &[Symbol], b: &[Symbol]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}
