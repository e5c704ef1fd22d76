//! BBP-type series `Σ_{n ≥ n0} R(n) g^-n` with `R` rational: certified
//! evaluation, position-addressed digit extraction, and the orbit
//! `y_j = g y_{j-1} + R(n0 + j - 1) mod 1` with its star discrepancy.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::constants::Constant;
use crate::interval::{bits_for_digits, pow_u, to_base_digits, Interval, SeriesAcc};
use crate::words::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BbpError {
    #[error("base must be at least 2, got {0}")]
    BadBase(u32),
    #[error("denominator vanishes at n = {0}")]
    ZeroDenominator(u64),
    #[error("numerator degree must be below denominator degree")]
    DegreeTooHigh,
    #[error("term has k = 0 or no terms given")]
    BadTerm,
    #[error("no summation formula is available for {0}; it can only be evaluated")]
    FormulaNotProvided(String),
    #[error("digit position must be at least 1")]
    BadPosition,
    #[error("unknown spec name `{0}`")]
    UnknownSpec(String),
    #[error("point {0} lies outside [0, 1)")]
    PointOutOfRange(String),
    #[error("empty point set")]
    Empty,
    #[error("working precision exceeded {0} bits")]
    PrecisionCeiling(u64),
}

/// `c / (k n + m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BbpTerm {
    pub c: i64,
    pub k: u64,
    pub m: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BbpForm {
    Terms(Vec<BbpTerm>),
    /// `p(n) / q(n)`, coefficients in ascending degree.
    Polynomial {
        p: Vec<i64>,
        q: Vec<i64>,
    },
    /// Named value with no summation formula attached.
    Unavailable(Constant),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BbpSpec {
    name: String,
    base: u32,
    start: u64,
    form: BbpForm,
    /// Summed piece magnitudes satisfy `Σ |piece(n)| ≤ bound` for `n ≥ bound_from`.
    bound: BigInt,
    bound_from: u64,
}

pub const CATALOG: &[&str] = &["log2", "log2-b9", "log3", "pi16", "pi2-b64", "pi2-b81", "log2sq-b64", "zeta3-b4096"];

const CEILING_BITS: u64 = 1 << 22;

impl BbpSpec {
    pub fn from_terms(name: impl Into<String>, base: u32, start: u64, terms: Vec<BbpTerm>) -> Result<Self, BbpError> {
        if base < 2 {
            return Err(BbpError::BadBase(base));
        }
        if terms.is_empty() || terms.iter().any(|t| t.k == 0) {
            return Err(BbpError::BadTerm);
        }
        // k n + m is increasing in n; once it is ≥ 1 it stays so.
        let mut from = start;
        for t in &terms {
            let k = t.k as i128;
            let first_pos = if t.m >= 1 { 0 } else { ((1 - t.m as i128) + k - 1) / k };
            from = from.max(first_pos as u64);
        }
        for n in start..from {
            for t in &terms {
                if t.k as i128 * n as i128 + t.m as i128 == 0 {
                    return Err(BbpError::ZeroDenominator(n));
                }
            }
        }
        let bound = BigInt::from(terms.iter().map(|t| t.c.unsigned_abs() as u128).sum::<u128>());
        Ok(Self { name: name.into(), base, start, form: BbpForm::Terms(terms), bound, bound_from: from })
    }

    pub fn from_polynomials(
        name: impl Into<String>,
        base: u32,
        start: u64,
        p: Vec<i64>,
        q: Vec<i64>,
    ) -> Result<Self, BbpError> {
        if base < 2 {
            return Err(BbpError::BadBase(base));
        }
        let p = trim(p);
        let q = trim(q);
        if q.is_empty() || (!p.is_empty() && p.len() >= q.len()) {
            return Err(BbpError::DegreeTooHigh);
        }
        let lead = q.last().copied().unwrap_or(0).unsigned_abs() as u128;
        let rest: u128 = q[..q.len() - 1].iter().map(|c| c.unsigned_abs() as u128).sum();
        // Integer roots lie below 1 + rest/lead; from 2 rest/lead on,
        // |q(n)| ≥ lead n^d / 2 so |p(n)/q(n)| ≤ 2 Σ|p_i| / lead.
        let cauchy = 1 + rest.div_ceil(lead) as u64;
        for n in start..=cauchy.max(start) {
            if poly_eval(&q, n).is_zero() {
                return Err(BbpError::ZeroDenominator(n));
            }
        }
        let from = start.max(1).max((2 * rest).div_ceil(lead) as u64);
        let psum: u128 = p.iter().map(|c| c.unsigned_abs() as u128).sum();
        let bound = BigInt::from((2 * psum).div_ceil(lead));
        Ok(Self { name: name.into(), base, start, form: BbpForm::Polynomial { p, q }, bound, bound_from: from })
    }

    fn unavailable(name: &str, base: u32, c: Constant) -> Self {
        Self {
            name: name.to_string(),
            base,
            start: 0,
            form: BbpForm::Unavailable(c),
            bound: BigInt::zero(),
            bound_from: 0,
        }
    }

    pub fn builtin(name: &str) -> Result<Self, BbpError> {
        let t = |c, k, m| BbpTerm { c, k, m };
        match name {
            "log2" => Self::from_terms(name, 2, 1, alloc::vec![t(1, 1, 0)]),
            "log2-b9" => Self::from_terms(name, 9, 1, alloc::vec![t(6, 2, -1)]),
            "log3" => Self::from_terms(name, 4, 0, alloc::vec![t(1, 2, 1)]),
            "pi16" => Self::from_terms(name, 16, 0, alloc::vec![t(4, 8, 1), t(-2, 8, 4), t(-1, 8, 5), t(-1, 8, 6)]),
            "pi2-b64" => Ok(Self::unavailable(name, 64, Constant::PiSquared)),
            "pi2-b81" => Ok(Self::unavailable(name, 81, Constant::PiSquared)),
            "log2sq-b64" => Ok(Self::unavailable(name, 64, Constant::Log2Squared)),
            "zeta3-b4096" => Ok(Self::unavailable(name, 4096, Constant::Zeta3)),
            _ => Err(BbpError::UnknownSpec(name.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn form(&self) -> &BbpForm {
        &self.form
    }

    pub fn has_formula(&self) -> bool {
        !matches!(self.form, BbpForm::Unavailable(_))
    }

    fn require_formula(&self) -> Result<(), BbpError> {
        match self.form {
            BbpForm::Unavailable(_) => Err(BbpError::FormulaNotProvided(self.name.clone())),
            _ => Ok(()),
        }
    }

    /// The summands of `R(n)` as `(num, den)` pairs with `den > 0`.
    fn pieces(&self, n: u64) -> Vec<(BigInt, BigInt)> {
        match &self.form {
            BbpForm::Terms(terms) => terms
                .iter()
                .map(|t| normalize(BigInt::from(t.c), BigInt::from(t.k as i128 * n as i128 + t.m as i128)))
                .collect(),
            BbpForm::Polynomial { p, q } => alloc::vec![normalize(poly_eval(p, n), poly_eval(q, n))],
            BbpForm::Unavailable(_) => Vec::new(),
        }
    }

    /// `R(n)` as a single fraction `(num, den)` with `den > 0`.
    pub fn term(&self, n: u64) -> (BigInt, BigInt) {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (a, b) in self.pieces(n) {
            num = num * &b + a * &den;
            den *= b;
        }
        (num, den)
    }

    /// Enclosure of the value with width at most `2^-prec`.
    pub fn enclose(&self, prec: u64) -> Interval {
        if let BbpForm::Unavailable(c) = self.form {
            return c.enclose(prec);
        }
        self.sum_enclosure(self.start, 0, prec)
    }

    /// Encloses `Σ_{n ≥ first} R(n) g^(offset - n)`, where `n - offset ≥ 1`
    /// for `n ≥ first` unless `offset = 0`.
    fn sum_enclosure(&self, first: u64, offset: u64, prec: u64) -> Interval {
        let g = self.base;
        let lg = libm::log2(g as f64);
        let cbits = self.bound.bits() + 1;
        let last_for = |w: u64| -> u64 {
            let m = offset + libm::ceil((w + 3 + cbits) as f64 / lg) as u64 + 1;
            m.max(self.bound_from).max(first)
        };
        let m0 = last_for(prec + 64);
        let w = prec + 3 + 2 * (64 - (m0 - first + 8).leading_zeros() as u64);
        let last = last_for(w);
        let mut acc = SeriesAcc::new(w);
        let shift = g.is_power_of_two().then(|| g.trailing_zeros() as u64);
        let mut gpow = pow_u(g as u64, first - offset.min(first));
        for n in first..=last {
            let e = n - offset.min(n);
            for (num, den) in self.pieces(n) {
                match shift {
                    Some(s) if e * s <= w => acc.add_ratio_shifted(&num, &den, e * s),
                    _ => acc.add_ratio(&num, &(den * BigInt::from(gpow.clone()))),
                }
            }
            gpow *= g;
        }
        // Tail Σ_{n > last} bound g^(offset-n) ≤ 2 bound g^(offset-last-1) ≤ 2^-(w+2).
        acc.finish(1)
    }

    /// Integer part and the first `n` fractional base-`g` digits, certified.
    pub fn eval_digits(&self, n: usize) -> Result<(BigInt, Vec<Symbol>), BbpError> {
        let g = self.base;
        let gn = pow_u(g as u64, n as u64);
        let mut prec = bits_for_digits(g, n as u64) + 64;
        loop {
            if prec > CEILING_BITS {
                return Err(BbpError::PrecisionCeiling(CEILING_BITS));
            }
            if let Some(v) = self.enclose(prec).floor_of_multiple(&gn) {
                let (int, frac) = v.div_mod_floor(&BigInt::from(gn.clone()));
                let frac = frac.to_biguint().unwrap_or_default();
                return Ok((int, to_base_digits(&frac, g, n)));
            }
            prec *= 2;
        }
    }

    /// Fractional digits at positions `d .. d + k` (1-based), computed from
    /// `frac(g^(d-1) θ)` by modular exponentiation without earlier digits.
    pub fn extract_digits(&self, d: u64, k: usize) -> Result<Vec<Symbol>, BbpError> {
        self.require_formula()?;
        if d == 0 {
            return Err(BbpError::BadPosition);
        }
        let g = self.base;
        let chunk = ((56.0 / libm::log2(g as f64)) as usize).max(1);
        let mut out = Vec::with_capacity(k);
        let mut pos = d;
        while out.len() < k {
            let c = chunk.min(k - out.len());
            let digits = match self.extract_fast(pos, c) {
                Some(v) => v,
                None => self.extract_wide(pos, c)?,
            };
            out.extend(digits);
            pos += c as u64;
        }
        Ok(out)
    }

    /// 128-bit fixed point, wrapping mod 1. `None` when a denominator is too
    /// large or the error bound straddles a digit boundary.
    fn extract_fast(&self, d: u64, c: usize) -> Option<Vec<Symbol>> {
        let g = self.base as u64;
        let mut s: u128 = 0;
        let mut err: u128 = 0;
        for n in self.start..d {
            let e = d - 1 - n;
            for (num, den) in self.pieces(n) {
                let m = den.to_u64().filter(|&m| m < 1 << 63)?;
                let r0 = num.mod_floor(&den).to_u64()?;
                let r = mulmod(r0, powmod(g, e, m), m);
                s = s.wrapping_add(frac128(r, m));
                err += 1;
            }
        }
        let two128 = BigInt::one() << 128u32;
        let mut n = d.max(self.start);
        let mut gj = pow_u(g, n - d + 1);
        loop {
            if n >= self.bound_from && gj.bits() > 130 + self.bound.bits() {
                break;
            }
            for (num, den) in self.pieces(n) {
                let t = (&num << 128u32).div_floor(&(den * BigInt::from(gj.clone())));
                let t = t.mod_floor(&two128).to_u128()?;
                s = s.wrapping_add(t);
                err += 1;
            }
            n += 1;
            gj *= g;
        }
        let lo = s.wrapping_sub(1);
        let hi = s.wrapping_add(err + 1);
        if lo > hi {
            return None;
        }
        let gc = pow_u(g, c as u64);
        let a = (BigUint::from(lo) * &gc) >> 128u32;
        let b = (BigUint::from(hi) * &gc) >> 128u32;
        (a == b).then(|| to_base_digits(&a, self.base, c))
    }

    fn extract_wide(&self, d: u64, c: usize) -> Result<Vec<Symbol>, BbpError> {
        let g = self.base as u64;
        let count_bits = 64 - (d + 64).leading_zeros() as u64;
        let mut p = bits_for_digits(self.base, c as u64) + 32 + 2 * count_bits;
        loop {
            if p > CEILING_BITS {
                return Err(BbpError::PrecisionCeiling(CEILING_BITS));
            }
            let modulus = BigInt::one() << p;
            let mut s = BigInt::zero();
            let mut err = 0u64;
            for n in self.start..d {
                let e = BigUint::from(d - 1 - n);
                for (num, den) in self.pieces(n) {
                    let m = den.to_biguint().unwrap_or_default();
                    let r0 = num.mod_floor(&den).to_biguint().unwrap_or_default();
                    let r = (r0 * BigUint::from(g).modpow(&e, &m)) % &m;
                    s += (BigInt::from(r) << p) / &den;
                    err += 1;
                }
            }
            let mut n = d.max(self.start);
            let mut gj = pow_u(g, n - d + 1);
            loop {
                if n >= self.bound_from && gj.bits() > p + 2 + self.bound.bits() {
                    break;
                }
                for (num, den) in self.pieces(n) {
                    s += (&num << p).div_floor(&(den * BigInt::from(gj.clone())));
                    err += 1;
                }
                n += 1;
                gj *= g;
            }
            let s = s.mod_floor(&modulus);
            let lo: BigInt = &s - 1;
            let hi: BigInt = &s + (err + 1);
            if !lo.is_negative() && hi < modulus {
                let gc = BigInt::from(pow_u(g, c as u64));
                let a = (&lo * &gc) >> p;
                let b = (&hi * &gc) >> p;
                if a == b {
                    let a = a.to_biguint().unwrap_or_default();
                    return Ok(to_base_digits(&a, self.base, c));
                }
            }
            p *= 2;
        }
    }

    /// `y_0 = 0`, `y_j = g y_{j-1} + R(start + j - 1) mod 1` for `j ≤ n`.
    pub fn orbit(&self, n: usize) -> Result<Orbit, BbpError> {
        self.require_formula()?;
        let g = self.base;
        let p = bits_for_digits(g, n as u64) + 64 + 2 * (64 - (n as u64 + 2).leading_zeros() as u64);
        let modulus = BigInt::one() << p;
        let mut y = BigInt::zero();
        let mut points = Vec::with_capacity(n + 1);
        points.push(0u64);
        for j in 1..=n as u64 {
            let (num, den) = self.term(self.start + j - 1);
            y = y * g + (num << p).div_floor(&den);
            y = y.mod_floor(&modulus);
            let top = if p >= 64 { &y >> (p - 64) } else { &y << (64 - p) };
            points.push(top.to_u64().unwrap_or(u64::MAX));
        }
        Ok(Orbit { precision_bits: p, fixed: points })
    }

    /// Encloses `Σ_{n ≥ start+j} R(n) g^(start-1+j-n)`, the amount by which
    /// `y_j` falls short of `g^(start-1+j) θ` modulo 1.
    pub fn orbit_tail(&self, j: u64, prec: u64) -> Result<Interval, BbpError> {
        self.require_formula()?;
        Ok(self.sum_enclosure(self.start + j, self.start + j - 1, prec))
    }
}

/// Orbit points as 64-bit fixed-point fractions: `y_j ≈ fixed[j] / 2^64`,
/// each correct to within `2^-63`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub precision_bits: u64,
    pub fixed: Vec<u64>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.fixed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixed.is_empty()
    }

    pub fn value(&self, j: usize) -> f64 {
        (self.fixed[j] >> 11) as f64 / 9_007_199_254_740_992.0
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.fixed.len()).map(|j| self.value(j)).collect()
    }
}

/// Star discrepancy `max_i max(i/N - x_(i), x_(i) - (i-1)/N)` over sorted points.
pub fn star_discrepancy(points: &[f64]) -> Result<f64, BbpError> {
    if points.is_empty() {
        return Err(BbpError::Empty);
    }
    if let Some(&bad) = points.iter().find(|x| !(0.0..1.0).contains(*x)) {
        return Err(BbpError::PointOutOfRange(bad.to_string()));
    }
    let mut v = points.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    Ok(v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let i = i as f64 + 1.0;
            (i / n - x).max(x - (i - 1.0) / n)
        })
        .fold(0.0, f64::max))
}

fn frac128(r: u64, m: u64) -> u128 {
    let m = m as u128;
    let a = (r as u128) << 64;
    let hi = a / m;
    let lo = ((a % m) << 64) / m;
    (hi << 64) | lo
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(g: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = g % m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        e >>= 1;
    }
    acc
}

fn normalize(num: BigInt, den: BigInt) -> (BigInt, BigInt) {
    if den.is_negative() {
        (-num, -den)
    } else {
        (num, den)
    }
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_eval(c: &[i64], n: u64) -> BigInt {
    let x = BigInt::from(n);
    c.iter().rev().fold(BigInt::zero(), |acc, &a| acc * &x + a)
}
