//! Real numbers as certified digit providers.
//!
//! A [`RealSource`] can always produce an enclosure of its value of any
//! requested width. Digits are read off an enclosure only when both ends give
//! the same `floor(x g^n)`; otherwise the working precision is doubled. Some
//! sources also have an exact route (integer square roots, long division,
//! digit words read in their own base).

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::bbp::{BbpError, BbpSpec};
use crate::constants::Constant;
use crate::interval::{bits_for_digits, pow_u, to_base_digits, Interval, SeriesAcc};
use crate::words::{Alphabet, Symbol, Word, WordStream};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealError {
    #[error("precision ceiling of {0} bits reached before the result was certified")]
    PrecisionCeiling(u64),
    #[error("base must be at least 2, got {0}")]
    BadBase(u32),
    #[error("digits requested for a negative value")]
    Negative,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by a value that could not be separated from zero")]
    DivisionByZero,
    #[error("{0} is a perfect square")]
    PerfectSquare(BigUint),
    #[error("{a} and {g} are not coprime")]
    NotCoprime { a: u32, g: u32 },
    #[error("digit {digit} is out of range for base {base}")]
    DigitOutOfRange { digit: Symbol, base: u32 },
    #[error("period exceeds {0} digits")]
    PeriodTooLong(u64),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Bbp(#[from] BbpError),
}

/// Strictly increasing exponent sequences for lacunary series `Σ g^-u_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExponentSeq {
    /// `b^n`, `n ≥ 0`.
    Powers(u64),
    /// `n!`, `n ≥ 1`.
    Factorial,
    /// `n²`, `n ≥ 0` (the `n = 0` term is the integer part 1).
    Squares,
    /// `n(n+1)/2`, `n ≥ 1`.
    Triangular,
    /// `F_n`, `n ≥ 2`: 1, 2, 3, 5, 8, ...
    Fibonacci,
    /// `k² + 2Nk`, `k ≥ 1`.
    QuadraticTail(u64),
    /// A finite increasing list (the value is then rational).
    Explicit(Arc<Vec<u64>>),
}

impl ExponentSeq {
    /// All exponents `≤ limit`, ascending.
    pub fn up_to(&self, limit: u64) -> Vec<u64> {
        let mut out = Vec::new();
        match self {
            ExponentSeq::Powers(b) => {
                let mut e = 1u64;
                while e <= limit {
                    out.push(e);
                    match e.checked_mul(*b) {
                        Some(x) => e = x,
                        None => break,
                    }
                }
            }
            ExponentSeq::Factorial => {
                let (mut e, mut n) = (1u64, 1u64);
                while e <= limit {
                    out.push(e);
                    n += 1;
                    match e.checked_mul(n) {
                        Some(x) => e = x,
                        None => break,
                    }
                }
            }
            ExponentSeq::Squares => out.extend((0u64..).map(|n| n * n).take_while(|&e| e <= limit)),
            ExponentSeq::Triangular => out.extend((1u64..).map(|n| n * (n + 1) / 2).take_while(|&e| e <= limit)),
            ExponentSeq::Fibonacci => {
                let (mut a, mut b) = (1u64, 2u64);
                while a <= limit {
                    out.push(a);
                    let c = a.saturating_add(b);
                    a = b;
                    b = c;
                }
            }
            ExponentSeq::QuadraticTail(n) => {
                out.extend((1u64..).map(|k| k * k + 2 * n * k).take_while(|&e| e <= limit))
            }
            ExponentSeq::Explicit(v) => out.extend(v.iter().copied().take_while(|&e| e <= limit)),
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExponentSeq::Explicit(_))
    }

    pub fn describe(&self) -> String {
        match self {
            ExponentSeq::Powers(b) => format!("{b}^n"),
            ExponentSeq::Factorial => "n!".into(),
            ExponentSeq::Squares => "n^2".into(),
            ExponentSeq::Triangular => "tri".into(),
            ExponentSeq::Fibonacci => "fib".into(),
            ExponentSeq::QuadraticTail(n) => format!("k^2+{}k", 2 * n),
            ExponentSeq::Explicit(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }
}

pub type StreamFactory = Arc<dyn Fn() -> WordStream + Send + Sync>;

#[derive(Clone)]
enum Repr {
    Rational {
        num: BigInt,
        den: BigInt,
    },
    /// `(a + b √d) / c` with `c > 0` and `d` not a square.
    Quadratic {
        a: BigInt,
        b: BigInt,
        d: BigUint,
        c: BigInt,
    },
    Lacunary {
        base: u32,
        seq: ExponentSeq,
    },
    Bbp(BbpSpec),
    Constant(Constant),
    Eta,
    Stoneham {
        a: u32,
        g: u32,
    },
    /// `Σ_{n ≥ 1} e_n base^-n` for the digits `e_1 e_2 …` of a stream.
    DigitWord {
        base: u32,
        label: String,
        factory: StreamFactory,
    },
    /// `[0; v(w_1), v(w_2), …]` for a stream `w` and letter values `v`.
    WordCf {
        label: String,
        factory: StreamFactory,
        values: Vec<u64>,
    },
    Scaled(BigInt, RealSource),
    Sum(RealSource, RealSource),
    Product(RealSource, RealSource),
    Quotient(BigInt, RealSource),
}

#[derive(Clone)]
pub struct RealSource(Arc<Repr>);

impl fmt::Debug for RealSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealSource({})", self.describe())
    }
}

/// Integer part plus certified fractional digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub base: u32,
    pub integer: BigInt,
    pub digits: Vec<Symbol>,
}

impl Expansion {
    pub fn word(&self) -> Word {
        Word::new(Arc::new(Alphabet::digits(self.base)), self.digits.clone()).expect("digits below base")
    }

    pub fn fraction_string(&self) -> String {
        Alphabet::digits(self.base).render(&self.digits)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub guard_bits: u64,
    pub ceiling_bits: u64,
}

impl Default for Precision {
    fn default() -> Self {
        Self { guard_bits: 64, ceiling_bits: 1 << 24 }
    }
}

fn check_base(g: u32) -> Result<(), RealError> {
    if g < 2 {
        Err(RealError::BadBase(g))
    } else {
        Ok(())
    }
}

fn is_square(d: &BigUint) -> bool {
    let s = d.sqrt();
    &(&s * &s) == d
}

fn log_bits(x: u64) -> u64 {
    64 - x.leading_zeros() as u64
}

impl RealSource {
    fn wrap(r: Repr) -> Self {
        RealSource(Arc::new(r))
    }

    pub fn rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, RealError> {
        let (mut p, mut q) = (p.into(), q.into());
        if q.is_zero() {
            return Err(RealError::ZeroDenominator);
        }
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        let g = p.gcd(&q);
        if !g.is_zero() && !g.is_one() {
            p /= &g;
            q /= &g;
        }
        Ok(Self::wrap(Repr::Rational { num: p, den: q }))
    }

    pub fn sqrt(d: u64) -> Result<Self, RealError> {
        Self::quadratic(0, 1, d, 1)
    }

    /// `(a + b √d) / c`.
    pub fn quadratic(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        d: impl Into<BigUint>,
        c: impl Into<BigInt>,
    ) -> Result<Self, RealError> {
        let (mut a, mut b, d, mut c) = (a.into(), b.into(), d.into(), c.into());
        if c.is_zero() {
            return Err(RealError::ZeroDenominator);
        }
        if is_square(&d) {
            return Err(RealError::PerfectSquare(d));
        }
        if b.is_zero() {
            return Self::rational(a, c);
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(Self::wrap(Repr::Quadratic { a, b, d, c }))
    }

    /// `(1 + √5) / 2`.
    pub fn golden_ratio() -> Self {
        Self::quadratic(1, 1, 5u32, 2).expect("5 is not a square")
    }

    pub fn lacunary(base: u32, seq: ExponentSeq) -> Result<Self, RealError> {
        check_base(base)?;
        if let ExponentSeq::Powers(b) = seq {
            if b < 2 {
                return Err(RealError::Invalid(format!("exponent base {b} must be at least 2")));
            }
        }
        if let ExponentSeq::Explicit(v) = &seq {
            if v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(RealError::Invalid("exponents must be strictly increasing".into()));
            }
        }
        Ok(Self::wrap(Repr::Lacunary { base, seq }))
    }

    pub fn bbp(spec: BbpSpec) -> Self {
        Self::wrap(Repr::Bbp(spec))
    }

    pub fn constant(c: Constant) -> Self {
        Self::wrap(Repr::Constant(c))
    }

    /// `1 - Σ_{n ≥ 1} 3^-(n(n+1)/2)`.
    pub fn eta() -> Self {
        Self::wrap(Repr::Eta)
    }

    /// `Σ_{n ≥ 0} a^-n g^-(a^n)`, for coprime `a, g ≥ 2`.
    pub fn stoneham(a: u32, g: u32) -> Result<Self, RealError> {
        check_base(g)?;
        if a < 2 || a.gcd(&g) != 1 {
            return Err(RealError::NotCoprime { a, g });
        }
        Ok(Self::wrap(Repr::Stoneham { a, g }))
    }

    /// `0.e_1 e_2 …` in base `base`, where `e` is produced by `factory`.
    pub fn digit_word(base: u32, label: impl Into<String>, factory: StreamFactory) -> Result<Self, RealError> {
        check_base(base)?;
        Ok(Self::wrap(Repr::DigitWord { base, label: label.into(), factory }))
    }

    /// `[0; v(w_1), v(w_2), …]`; `values[s]` is the partial quotient for letter `s`.
    pub fn word_continued_fraction(
        label: impl Into<String>,
        factory: StreamFactory,
        values: Vec<u64>,
    ) -> Result<Self, RealError> {
        if values.is_empty() || values.contains(&0) {
            return Err(RealError::Invalid("partial quotients must be positive".into()));
        }
        Ok(Self::wrap(Repr::WordCf { label: label.into(), factory, values }))
    }

    pub fn scaled(m: impl Into<BigInt>, x: &RealSource) -> Self {
        let m = m.into();
        if m.is_one() {
            return x.clone();
        }
        match &*x.0 {
            Repr::Rational { num, den } => Self::rational(&m * num, den.clone()).expect("nonzero denominator"),
            Repr::Quadratic { a, b, d, c } if !m.is_zero() => {
                Self::quadratic(&m * a, &m * b, d.clone(), c.clone()).expect("same radicand")
            }
            _ => Self::wrap(Repr::Scaled(m, x.clone())),
        }
    }

    pub fn sum(x: &RealSource, y: &RealSource) -> Self {
        Self::wrap(Repr::Sum(x.clone(), y.clone()))
    }

    pub fn product(x: &RealSource, y: &RealSource) -> Self {
        Self::wrap(Repr::Product(x.clone(), y.clone()))
    }

    /// `a / x`.
    pub fn quotient(a: impl Into<BigInt>, x: &RealSource) -> Self {
        let a = a.into();
        if let Repr::Rational { num, den } = &*x.0 {
            if !num.is_zero() {
                return Self::rational(&a * den, num.clone()).expect("nonzero numerator");
            }
        }
        Self::wrap(Repr::Quotient(a, x.clone()))
    }

    pub fn describe(&self) -> String {
        match &*self.0 {
            Repr::Rational { num, den } => format!("rational:{num}/{den}"),
            Repr::Quadratic { a, b, d, c } => {
                if a.is_zero() && c.is_one() && b.is_one() {
                    format!("sqrt:{d}")
                } else {
                    format!("quad:{a},{b},{d},{c}")
                }
            }
            Repr::Lacunary { base, seq } => format!("lacunary:{}@{base}", seq.describe()),
            Repr::Bbp(s) => format!("bbp:{}", s.name()),
            Repr::Constant(c) => format!("const:{}", c.name()),
            Repr::Eta => "eta".into(),
            Repr::Stoneham { a, g } => format!("stoneham:{a},{g}"),
            Repr::DigitWord { label, .. } => label.clone(),
            Repr::WordCf { label, .. } => label.clone(),
            Repr::Scaled(m, x) => format!("mul:{m}:{}", x.describe()),
            Repr::Sum(x, y) => format!("sum({};{})", x.describe(), y.describe()),
            Repr::Product(x, y) => format!("prod({};{})", x.describe(), y.describe()),
            Repr::Quotient(a, x) => format!("div:{a}:{}", x.describe()),
        }
    }

    /// True when the value is known to be rational by construction.
    pub fn is_known_rational(&self) -> bool {
        match &*self.0 {
            Repr::Rational { .. } => true,
            Repr::Lacunary { seq, .. } => seq.is_finite(),
            Repr::Scaled(m, x) => m.is_zero() || x.is_known_rational(),
            Repr::Sum(x, y) | Repr::Product(x, y) => x.is_known_rational() && y.is_known_rational(),
            Repr::Quotient(_, x) => x.is_known_rational(),
            _ => false,
        }
    }

    /// Exact value when the source is a rational.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        match &*self.0 {
            Repr::Rational { num, den } => Some((num.clone(), den.clone())),
            _ => None,
        }
    }

    /// Enclosure of width at most `2^-prec`.
    pub fn enclose(&self, prec: u64) -> Result<Interval, RealError> {
        let iv = match &*self.0 {
            Repr::Rational { num, den } => Interval::ratio(num, den, prec),
            Repr::Quadratic { a, b, d, c } => {
                let w = prec + b.bits() + 3;
                let s = BigInt::from((d << (2 * w)).sqrt());
                let (x, y) = (b * &s, b * (&s + 1));
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                let shift = a << w;
                Interval::new(lo + &shift, hi + &shift, w).div_int(c)
            }
            Repr::Lacunary { base, seq } => lacunary_enclosure(*base, seq, prec),
            Repr::Bbp(spec) => spec.enclose(prec),
            Repr::Constant(c) => c.enclose(prec),
            Repr::Eta => {
                let l = lacunary_enclosure(3, &ExponentSeq::Triangular, prec);
                l.neg().add_int(&BigInt::one())
            }
            Repr::Stoneham { a, g } => stoneham_enclosure(*a, *g, prec),
            Repr::DigitWord { base, factory, .. } => {
                let mut w = factory();
                digit_word_enclosure(*base, &mut w, prec)?
            }
            Repr::WordCf { factory, values, .. } => {
                let mut w = factory();
                word_cf_enclosure(&mut w, values, prec)?
            }
            Repr::Scaled(m, x) => {
                if m.is_zero() {
                    Interval::integer(BigInt::zero())
                } else {
                    x.enclose(prec + m.bits() + 1)?.mul_int(m)
                }
            }
            Repr::Sum(x, y) => x.enclose(prec + 1)?.add(&y.enclose(prec + 1)?),
            Repr::Product(x, y) => {
                let mx = x.enclose(8)?.magnitude_log2().max(0) as u64;
                let my = y.enclose(8)?.magnitude_log2().max(0) as u64;
                let q = prec + mx.max(my) + 3;
                x.enclose(q)?.mul(&y.enclose(q)?).rescale(prec + 2)
            }
            Repr::Quotient(a, x) => {
                let mut pc = 16u64;
                let coarse = loop {
                    let iv = x.enclose(pc)?;
                    if !iv.contains_zero() {
                        break iv;
                    }
                    pc *= 2;
                    if pc > Precision::default().ceiling_bits {
                        return Err(RealError::DivisionByZero);
                    }
                };
                let low = coarse.lo().abs().min(coarse.hi().abs());
                let k = (pc as i64 + 1 - low.bits() as i64).max(0) as u64;
                let q = prec + a.bits() + 2 * k + 2;
                x.enclose(q)?.recip_mul(a, prec + 2).ok_or(RealError::DivisionByZero)?
            }
        };
        debug_assert!(iv.width_at_most(prec), "enclosure too wide for {}", self.describe());
        Ok(iv)
    }

    /// Integer part and `n` fractional digits in base `g`.
    pub fn expand(&self, g: u32, n: usize) -> Result<Expansion, RealError> {
        self.expand_with(g, n, Precision::default())
    }

    /// [`RealSource::expand`] under an explicit precision policy.
    pub fn expand_with(&self, g: u32, n: usize, policy: Precision) -> Result<Expansion, RealError> {
        check_base(g)?;
        if let Some(e) = self.native(g, n) {
            return e;
        }
        self.expand_certified(g, n, bits_for_digits(g, n as u64) + policy.guard_bits, policy)
    }

    /// Fractional digits `1..=n` in base `g`.
    pub fn digits(&self, g: u32, n: usize) -> Result<Word, RealError> {
        Ok(self.expand(g, n)?.word())
    }

    /// The interval route only, starting at `start_bits` of working precision.
    pub fn expand_certified(
        &self,
        g: u32,
        n: usize,
        start_bits: u64,
        policy: Precision,
    ) -> Result<Expansion, RealError> {
        check_base(g)?;
        let gn = pow_u(g as u64, n as u64);
        if let Repr::Rational { num, den } = &*self.0 {
            return split(g, n, &gn, (num * BigInt::from(gn.clone())).div_floor(den));
        }
        let mut p = start_bits.max(8);
        loop {
            if p > policy.ceiling_bits {
                return Err(RealError::PrecisionCeiling(policy.ceiling_bits));
            }
            if let Some(v) = self.enclose(p)?.floor_of_multiple(&gn) {
                return split(g, n, &gn, v);
            }
            p *= 2;
        }
    }

    /// `floor(k x)`, certified.
    pub fn floor_times(&self, k: impl Into<BigInt>) -> Result<BigInt, RealError> {
        let k = k.into();
        let x = Self::scaled(k, self);
        if let Repr::Rational { num, den } = &*x.0 {
            return Ok(num.div_floor(den));
        }
        if let Repr::Quadratic { a, b, d, c } = &*x.0 {
            return Ok(quadratic_floor(a, b, d, c, &BigUint::one()));
        }
        let mut p = 32u64;
        loop {
            if p > Precision::default().ceiling_bits {
                return Err(RealError::PrecisionCeiling(p / 2));
            }
            let (a, b) = x.enclose(p)?.floors();
            if a == b {
                return Ok(a);
            }
            p *= 2;
        }
    }

    fn native(&self, g: u32, n: usize) -> Option<Result<Expansion, RealError>> {
        match &*self.0 {
            Repr::Rational { num, den } => {
                if num.is_negative() {
                    return Some(Err(RealError::Negative));
                }
                let p = num.to_biguint()?;
                let q = den.to_biguint()?;
                Some(rational_expansion(&p, &q, g).map(|r| Expansion {
                    base: g,
                    integer: BigInt::from(r.integer.clone()),
                    digits: r.prefix(n),
                }))
            }
            Repr::Quadratic { a, b, d, c } => {
                let gn = pow_u(g as u64, n as u64);
                Some(split(g, n, &gn, quadratic_floor(a, b, d, c, &gn)))
            }
            Repr::Lacunary { base, seq } if *base == g => {
                let exps = seq.up_to(n as u64);
                let mut digits = alloc::vec![0 as Symbol; n];
                let mut integer = BigInt::zero();
                for e in exps {
                    if e == 0 {
                        integer += 1;
                    } else {
                        digits[e as usize - 1] = 1;
                    }
                }
                Some(Ok(Expansion { base: g, integer, digits }))
            }
            Repr::Eta if g == 3 => Some(Ok(Expansion { base: 3, integer: BigInt::zero(), digits: eta_digits(n) })),
            Repr::DigitWord { base, factory, .. } if *base == g => {
                let mut w = factory();
                let digits = w.symbols(n).to_vec();
                if let Some(&bad) = digits.iter().find(|&&s| s as u32 >= g) {
                    return Some(Err(RealError::DigitOutOfRange { digit: bad, base: g }));
                }
                Some(Ok(Expansion { base: g, integer: BigInt::zero(), digits }))
            }
            _ => None,
        }
    }
}

/// Base-3 digits of η: 1 at triangular positions, 2 elsewhere.
pub fn eta_digits(n: usize) -> Vec<Symbol> {
    let mut d = alloc::vec![2 as Symbol; n];
    let mut t = 1usize;
    let mut k = 2usize;
    while t <= n {
        d[t - 1] = 1;
        t += k;
        k += 1;
    }
    d
}

fn split(g: u32, n: usize, gn: &BigUint, v: BigInt) -> Result<Expansion, RealError> {
    if v.is_negative() {
        return Err(RealError::Negative);
    }
    let (int, frac) = v.div_mod_floor(&BigInt::from(gn.clone()));
    let frac = frac.to_biguint().unwrap_or_default();
    Ok(Expansion { base: g, integer: int, digits: to_base_digits(&frac, g, n) })
}

/// `floor(k (a + b √d) / c)`, exactly.
fn quadratic_floor(a: &BigInt, b: &BigInt, d: &BigUint, c: &BigInt, k: &BigUint) -> BigInt {
    let k = BigInt::from(k.clone());
    let bk = b * &k;
    let m = BigInt::from(d.clone()) * &bk * &bk;
    let m = m.to_biguint().unwrap_or_default();
    let s = m.sqrt();
    let s_int = BigInt::from(s.clone());
    let root_floor = if bk.sign() != Sign::Minus {
        s_int
    } else if &s * &s == m {
        -s_int
    } else {
        -s_int - 1
    };
    (a * &k + root_floor).div_floor(c)
}

fn lacunary_enclosure(base: u32, seq: &ExponentSeq, prec: u64) -> Interval {
    let w = prec + 2 * log_bits(prec + 64) + 4;
    let lg = libm::log2(base as f64);
    let last = libm::ceil((w + 3) as f64 / lg) as u64 + 1;
    let mut acc = SeriesAcc::new(w);
    let shift = base.is_power_of_two().then(|| base.trailing_zeros() as u64);
    let one = BigInt::one();
    for e in seq.up_to(last) {
        match shift {
            Some(s) if e * s <= w => acc.add_ratio_shifted(&one, &one, e * s),
            _ => acc.add_ratio(&one, &BigInt::from(pow_u(base as u64, e))),
        }
    }
    // Exponents beyond `last` contribute at most g^-last / (g - 1) < 2^-(w+2).
    acc.finish(1)
}

fn stoneham_enclosure(a: u32, g: u32, prec: u64) -> Interval {
    let w = prec + 8;
    let lg = libm::log2(g as f64);
    let mut acc = SeriesAcc::new(w);
    let one = BigInt::one();
    let mut an = 1u64;
    let mut apow = BigUint::one();
    loop {
        acc.add_ratio(&one, &BigInt::from(&apow * pow_u(g as u64, an)));
        // Remaining terms sum to less than 2 g^-(a^(n+1)).
        let next = an.saturating_mul(a as u64);
        if next as f64 * lg > (w + 3) as f64 {
            break;
        }
        an = next;
        apow *= a;
    }
    acc.finish(1)
}

fn digit_word_enclosure(base: u32, w: &mut WordStream, prec: u64) -> Result<Interval, RealError> {
    let k = libm::ceil((prec + 3) as f64 / libm::log2(base as f64)) as usize + 1;
    let syms = w.symbols(k);
    let mut v = BigUint::zero();
    for &s in syms {
        if s as u32 >= base {
            return Err(RealError::DigitOutOfRange { digit: s, base });
        }
        v = v * base + s;
    }
    let den = BigInt::from(pow_u(base as u64, k as u64));
    let v = BigInt::from(v);
    let lo = Interval::ratio(&v, &den, prec + 2);
    let hi = Interval::ratio(&(v + 1), &den, prec + 2);
    Ok(Interval::new(lo.lo().clone(), hi.hi().clone(), prec + 2))
}

fn word_cf_enclosure(w: &mut WordStream, values: &[u64], prec: u64) -> Result<Interval, RealError> {
    let target = BigUint::one() << (prec + 2);
    let (mut p0, mut q0) = (BigUint::one(), BigUint::zero());
    let (mut p1, mut q1) = (BigUint::zero(), BigUint::one());
    let mut i = 0usize;
    loop {
        let s = w.get(i) as usize;
        let a = *values.get(s).ok_or_else(|| RealError::Invalid(format!("no partial quotient for letter {s}")))?;
        let p2 = &p1 * a + &p0;
        let q2 = &q1 * a + &q0;
        p0 = core::mem::replace(&mut p1, p2);
        q0 = core::mem::replace(&mut q1, q2);
        i += 1;
        if &q0 * &q1 >= target && !q0.is_zero() {
            break;
        }
    }
    let a = Interval::ratio(&BigInt::from(p0), &BigInt::from(q0), prec + 2);
    let b = Interval::ratio(&BigInt::from(p1), &BigInt::from(q1), prec + 2);
    let lo = a.lo().min(b.lo()).clone();
    let hi = a.hi().max(b.hi()).clone();
    Ok(Interval::new(lo, hi, prec + 2))
}

/// Exact base-`g` expansion of a nonnegative rational: integer part,
/// preperiod and (possibly empty) period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionReport {
    pub base: u32,
    pub integer: BigUint,
    pub preperiod: Vec<Symbol>,
    pub period: Vec<Symbol>,
}

impl ExpansionReport {
    /// Fractional digit `i` (1-based).
    pub fn digit(&self, i: usize) -> Symbol {
        let t = self.preperiod.len();
        if i <= t {
            self.preperiod[i - 1]
        } else if self.period.is_empty() {
            0
        } else {
            self.period[(i - t - 1) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<Symbol> {
        (1..=n).map(|i| self.digit(i)).collect()
    }

    /// The value re-summed as a geometric series, reduced.
    pub fn resum(&self) -> (BigInt, BigInt) {
        let g = BigInt::from(self.base);
        let val = |ds: &[Symbol]| ds.iter().fold(BigInt::zero(), |acc, &d| acc * &g + d);
        let t = self.preperiod.len() as u64;
        let l = self.period.len() as u64;
        let gt = BigInt::from(pow_u(self.base as u64, t));
        // x = I + (Pre + Per / (g^l - 1)) / g^t
        let (num, den) = if l == 0 {
            (BigInt::from(self.integer.clone()) * &gt + val(&self.preperiod), gt)
        } else {
            let gl1 = BigInt::from(pow_u(self.base as u64, l)) - 1;
            let den = &gt * &gl1;
            let num = BigInt::from(self.integer.clone()) * &den + val(&self.preperiod) * &gl1 + val(&self.period);
            (num, den)
        };
        let d = num.gcd(&den);
        (num / &d, den / d)
    }
}

pub const MAX_PERIOD: u64 = 1 << 26;

pub fn rational_expansion(p: &BigUint, q: &BigUint, g: u32) -> Result<ExpansionReport, RealError> {
    check_base(g)?;
    if q.is_zero() {
        return Err(RealError::ZeroDenominator);
    }
    let d = p.gcd(q);
    let (p, q) = if d.is_zero() { (p.clone(), q.clone()) } else { (p / &d, q / &d) };
    let gb = BigUint::from(g);
    // Preperiod: steps needed to clear the part of q sharing primes with g.
    let mut t = 0u64;
    let mut coprime = q.clone();
    loop {
        let c = coprime.gcd(&gb);
        if c.is_one() {
            break;
        }
        coprime /= c;
        t += 1;
    }
    // Period: multiplicative order of g modulo the coprime part.
    let mut l = 0u64;
    if !coprime.is_one() {
        let mut x = &gb % &coprime;
        l = 1;
        while !x.is_one() {
            x = (x * &gb) % &coprime;
            l += 1;
            if l > MAX_PERIOD {
                return Err(RealError::PeriodTooLong(MAX_PERIOD));
            }
        }
    }
    let (integer, mut r) = p.div_rem(&q);
    let mut digits = Vec::with_capacity((t + l) as usize);
    for _ in 0..t + l {
        r *= &gb;
        let (dq, dr) = r.div_rem(&q);
        digits.push(dq.to_u16().unwrap_or(0));
        r = dr;
    }
    let period = digits.split_off(t as usize);
    Ok(ExpansionReport { base: g, integer, preperiod: digits, period })
}

/// `B(x, n)`: number of 1s among the first `n` fractional binary digits.
pub fn ones_count(x: &RealSource, n: usize) -> Result<usize, RealError> {
    Ok(x.expand(2, n)?.digits.iter().filter(|&&d| d == 1).count())
}

fn ones_prefix_counts(x: &RealSource, n: usize) -> Result<Vec<usize>, RealError> {
    let d = x.expand(2, n)?.digits;
    let mut out = Vec::with_capacity(n + 1);
    out.push(0);
    let mut c = 0;
    for s in d {
        c += (s == 1) as usize;
        out.push(c);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityRow {
    pub violations: Vec<usize>,
    /// Largest violated `n` plus one (1 when there is none).
    pub n0: usize,
}

impl InequalityRow {
    fn from_violations(violations: Vec<usize>) -> Self {
        let n0 = violations.last().map_or(1, |v| v + 1);
        Self { violations, n0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BInequalityReport {
    pub n_max: usize,
    pub sum: InequalityRow,
    pub product: InequalityRow,
    pub reciprocal: InequalityRow,
}

/// Checks, for `1 ≤ n ≤ n_max`:
/// `B(x+y,n) ≤ B(x,n)+B(y,n)+1`, `B(xy,n) ≤ B(x,n)B(y,n)+log2⌊x+y+1⌋`
/// and `B(x,n)B(A/x,n) ≥ n-1-⌊log2(x+A/x+1)⌋`.
pub fn check_b_inequalities(
    x: &RealSource,
    y: &RealSource,
    a: u64,
    n_max: usize,
) -> Result<BInequalityReport, RealError> {
    let bx = ones_prefix_counts(x, n_max)?;
    let by = ones_prefix_counts(y, n_max)?;
    let s = RealSource::sum(x, y);
    let bs = ones_prefix_counts(&s, n_max)?;
    let bp = ones_prefix_counts(&RealSource::product(x, y), n_max)?;
    let r = RealSource::quotient(a, x);
    let br = ones_prefix_counts(&r, n_max)?;
    let f = RealSource::sum(&s, &RealSource::rational(1, 1)?).floor_times(1)?;
    let log_f = libm::log2(f.to_f64().unwrap_or(f64::MAX));
    let z = RealSource::sum(&RealSource::sum(x, &r), &RealSource::rational(1, 1)?).floor_times(1)?;
    let floor_log_z = z.bits() as i64 - 1;
    let (mut vs, mut vp, mut vr) = (Vec::new(), Vec::new(), Vec::new());
    for n in 1..=n_max {
        if bs[n] > bx[n] + by[n] + 1 {
            vs.push(n);
        }
        if bp[n] as f64 > (bx[n] * by[n]) as f64 + log_f {
            vp.push(n);
        }
        if ((bx[n] * br[n]) as i64) < n as i64 - 1 - floor_log_z {
            vr.push(n);
        }
    }
    Ok(BInequalityReport {
        n_max,
        sum: InequalityRow::from_violations(vs),
        product: InequalityRow::from_violations(vp),
        reciprocal: InequalityRow::from_violations(vr),
    })
}

/// Fit of `B(x,n) ≥ C √n`: `C = min B(x,n)/√n` over `n ≥ n_from`, the first
/// index with `B(x,n) ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OnesGrowthFit {
    pub n_max: usize,
    pub n_from: usize,
    pub c: f64,
    pub counts: Vec<usize>,
}

pub fn ones_growth_fit(x: &RealSource, n_max: usize) -> Result<OnesGrowthFit, RealError> {
    let counts = ones_prefix_counts(x, n_max)?;
    let n_from = (1..=n_max).find(|&n| counts[n] >= 1).unwrap_or(n_max + 1);
    let c = (n_from..=n_max).map(|n| counts[n] as f64 / libm::sqrt(n as f64)).fold(f64::INFINITY, f64::min);
    Ok(OnesGrowthFit { n_max, n_from, c: if c.is_finite() { c } else { 0.0 }, counts })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalityReport {
    pub base: u32,
    pub block_len: usize,
    pub digits: usize,
    pub blocks: usize,
    /// Occurrences of each block value `0..g^m` among non-overlapping blocks.
    pub counts: Vec<u64>,
    pub max_deviation: f64,
    pub threshold: f64,
    pub consistent: bool,
    /// Fewer than 10 expected occurrences per block value.
    pub undersampled: bool,
}

pub const MAX_BLOCK_VALUES: u64 = 1 << 22;

pub fn normality_of_digits(digits: &[Symbol], g: u32, m: usize, threshold: f64) -> Result<NormalityReport, RealError> {
    check_base(g)?;
    if m == 0 {
        return Err(RealError::Invalid("block length must be positive".into()));
    }
    let cells = (g as u64).checked_pow(m as u32).filter(|&c| c <= MAX_BLOCK_VALUES);
    let cells = cells.ok_or_else(|| RealError::Invalid(format!("{g}^{m} block values is too many")))?;
    let mut counts = alloc::vec![0u64; cells as usize];
    let blocks = digits.len() / m;
    for b in digits.chunks_exact(m) {
        let v = b.iter().fold(0u64, |acc, &d| acc * g as u64 + d as u64);
        counts[v as usize] += 1;
    }
    let expect = 1.0 / cells as f64;
    let max_deviation = if blocks == 0 {
        1.0
    } else {
        counts.iter().map(|&c| libm::fabs(c as f64 / blocks as f64 - expect)).fold(0.0, f64::max)
    };
    Ok(NormalityReport {
        base: g,
        block_len: m,
        digits: digits.len(),
        blocks,
        counts,
        max_deviation,
        threshold,
        consistent: max_deviation < threshold,
        undersampled: (blocks as f64) < 10.0 * cells as f64,
    })
}

pub fn normality_stats(
    x: &RealSource,
    g: u32,
    m: usize,
    n: usize,
    threshold: f64,
) -> Result<NormalityReport, RealError> {
    let e = x.expand(g, n)?;
    normality_of_digits(&e.digits, g, m, threshold)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiouvilleWitness {
    pub a: u32,
    pub n: u64,
    pub p: BigUint,
    pub q: BigUint,
    /// `qθ - p` as the tail series `Σ_{k ≥ 1} a^-(2Nk + k²)`.
    pub residual: Interval,
    /// `qθ - p` from an enclosure of `θ`.
    pub residual_from_theta: Interval,
    /// `(θ - 1) / a^(2N)`.
    pub bound: Interval,
    pub holds: bool,
}

/// Rational approximation `p/q` to `θ = Σ_{n ≥ 0} a^-(n²)` with
/// `q = a^(N²)` and `p = Σ_{n ≤ N} a^(N² - n²)`.
pub fn liouville_witness(a: u32, n: u64) -> Result<LiouvilleWitness, RealError> {
    check_base(a)?;
    if n == 0 {
        return Err(RealError::Invalid("N must be at least 1".into()));
    }
    let n2 = n * n;
    let q = pow_u(a as u64, n2);
    let p = (0..=n).fold(BigUint::zero(), |acc, k| acc + pow_u(a as u64, n2 - k * k));
    let theta = RealSource::lacunary(a, ExponentSeq::Squares)?;
    let tail = RealSource::lacunary(a, ExponentSeq::QuadraticTail(n))?;
    let a2n = BigInt::from(pow_u(a as u64, 2 * n));
    let qi = BigInt::from(q.clone());
    let pi = BigInt::from(p.clone());
    let mut prec = bits_for_digits(a, n2 + 2 * n) + 64;
    loop {
        if prec > Precision::default().ceiling_bits {
            return Err(RealError::PrecisionCeiling(prec / 2));
        }
        let residual = tail.enclose(prec)?;
        let th = theta.enclose(prec + q.bits() + 2)?;
        let residual_from_theta = th.mul_int(&qi).add_int(&-&pi);
        let bound = th.add_int(&-BigInt::one()).div_int(&a2n);
        let positive = residual.is_positive();
        let below = residual.strictly_below(&bound);
        let decided_false = !residual.hi().is_positive() || bound.strictly_below(&residual);
        if (positive && below) || decided_false {
            let holds = positive && below && residual.overlaps(&residual_from_theta);
            return Ok(LiouvilleWitness { a, n, p, q, residual, residual_from_theta, bound, holds });
        }
        prec *= 2;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSearch {
    pub m_max: u64,
    pub horizon: usize,
    /// Smallest multiplier and the 1-based position of the first occurrence.
    pub found: Option<(u64, usize)>,
}

/// Default multiplier bound `2 g^(k+1)` for a block of length `k`.
pub fn default_multiplier_bound(g: u32, k: usize) -> u64 {
    (g as u64).saturating_pow(k as u32 + 1).saturating_mul(2)
}

/// Smallest `m ≤ m_max` such that `block` occurs among the first `horizon`
/// fractional base-`g` digits of `m x`.
pub fn block_search(
    x: &RealSource,
    g: u32,
    block: &[Symbol],
    horizon: usize,
    m_max: Option<u64>,
) -> Result<BlockSearch, RealError> {
    check_base(g)?;
    if let Some(&bad) = block.iter().find(|&&s| s as u32 >= g) {
        return Err(RealError::DigitOutOfRange { digit: bad, base: g });
    }
    let m_max = m_max.unwrap_or_else(|| default_multiplier_bound(g, block.len()));
    for m in 1..=m_max {
        let d = RealSource::scaled(m, x).expand(g, horizon)?.digits;
        let hit = if block.is_empty() { Some(0) } else { d.windows(block.len()).position(|w| w == block) };
        if let Some(pos) = hit {
            return Ok(BlockSearch { m_max, horizon, found: Some((m, pos + 1)) });
        }
    }
    Ok(BlockSearch { m_max, horizon, found: None })
}

/// A digit stream driven by `RealSource::expand`; batches double in size.
pub fn digit_stream(x: &RealSource, g: u32) -> Result<WordStream, RealError> {
    check_base(g)?;
    x.expand(g, 1)?;
    let x = x.clone();
    let alpha = Arc::new(Alphabet::digits(g));
    Ok(WordStream::new(alpha, Box::new(ExpandSource { x, g })))
}

struct ExpandSource {
    x: RealSource,
    g: u32,
}

impl crate::words::SymbolSource for ExpandSource {
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize) {
        let n = target.max(2 * buf.len()).max(64);
        let e = self.x.expand(self.g, n).expect("digit expansion failed after the first digit was certified");
        debug_assert_eq!(&e.digits[..buf.len()], &buf[..]);
        buf.extend_from_slice(&e.digits[buf.len()..]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digits_str(x: &RealSource, g: u32, n: usize) -> String {
        x.expand(g, n).unwrap().fraction_string()
    }

    #[test]
    fn sqrt2_golden_prefixes() {
        let s = RealSource::sqrt(2).unwrap();
        let e = s.expand(10, 29).unwrap();
        assert_eq!(e.integer, BigInt::from(1));
        assert_eq!(e.fraction_string(), "41421356237309504880168872420");
        assert_eq!(digits_str(&s, 2, 50), "01101010000010011110011001100111111100111011110011");
    }

    #[test]
    fn native_and_certified_agree() {
        let sources = [
            RealSource::sqrt(2).unwrap(),
            RealSource::golden_ratio(),
            RealSource::quadratic(-3, -2, 7u32, 5).unwrap(),
            RealSource::lacunary(2, ExponentSeq::Powers(2)).unwrap(),
            RealSource::lacunary(3, ExponentSeq::Factorial).unwrap(),
            RealSource::eta(),
            RealSource::rational(22, 7).unwrap(),
        ];
        for x in &sources {
            for g in [2u32, 3, 10, 16] {
                let Ok(a) = x.expand(g, 70) else { continue };
                let b = x.expand_certified(g, 70, 16, Precision::default()).unwrap();
                assert_eq!(a, b, "{} base {g}", x.describe());
            }
        }
    }

    #[test]
    fn negative_quadratic_is_rejected_for_digits() {
        let x = RealSource::quadratic(0, -1, 2u32, 1).unwrap();
        assert_eq!(x.expand(10, 5), Err(RealError::Negative));
        assert_eq!(x.floor_times(1).unwrap(), BigInt::from(-2));
        assert_eq!(RealSource::sqrt(4).unwrap_err(), RealError::PerfectSquare(BigUint::from(4u8)));
    }

    #[test]
    fn lacunary_prefix() {
        let x = RealSource::lacunary(2, ExponentSeq::Powers(2)).unwrap();
        assert_eq!(digits_str(&x, 2, 19), "1101000100000001000");
        assert_eq!(ones_count(&x, 19).unwrap(), 5);
        let f = RealSource::lacunary(2, ExponentSeq::Factorial).unwrap();
        assert_eq!(ones_count(&f, 6).unwrap(), 3);
        assert_eq!(ones_count(&f, 0).unwrap(), 0);
        let fib = RealSource::lacunary(10, ExponentSeq::Fibonacci).unwrap();
        assert_eq!(digits_str(&fib, 10, 13), "1110100100001");
    }

    #[test]
    fn rational_expansions() {
        let r = rational_expansion(&BigUint::from(137174210u32), &BigUint::from(1111111111u32), 10).unwrap();
        assert!(r.preperiod.is_empty());
        assert_eq!(Alphabet::digits(10).render(&r.period), "1234567890");
        let half = rational_expansion(&BigUint::from(1u8), &BigUint::from(2u8), 10).unwrap();
        assert_eq!((half.preperiod.as_slice(), half.period.len()), (&[5u16][..], 0));
        let sev = rational_expansion(&BigUint::from(1u8), &BigUint::from(7u8), 10).unwrap();
        assert_eq!(Alphabet::digits(10).render(&sev.period), "142857");
        let mixed = rational_expansion(&BigUint::from(1000u32), &BigUint::from(84u32), 10).unwrap();
        assert_eq!(mixed.resum(), (BigInt::from(250), BigInt::from(21)));
    }

    #[test]
    fn eta_matches_morphic_word() {
        let mut u = crate::words::builtin::nesterenko_word();
        let e = RealSource::eta();
        let via_series = e.expand_certified(3, 300, 64, Precision::default()).unwrap();
        assert_eq!(via_series.integer, BigInt::zero());
        assert_eq!(&via_series.digits[..], &u.symbols(301)[1..]);
        assert_eq!(eta_digits(10), [1, 2, 1, 2, 2, 1, 2, 2, 2, 1]);
    }

    #[test]
    fn liouville_small_cases() {
        let w = liouville_witness(2, 3).unwrap();
        assert_eq!((w.q.clone(), w.p.clone()), (BigUint::from(512u32), BigUint::from(801u32)));
        assert!(w.holds);
        let w = liouville_witness(10, 2).unwrap();
        assert_eq!((w.q.clone(), w.p.clone()), (BigUint::from(10000u32), BigUint::from(11001u32)));
        assert!(w.holds);
        assert!(liouville_witness(2, 1).unwrap().holds);
    }

    #[test]
    fn composite_enclosures() {
        let r2 = RealSource::sqrt(2).unwrap();
        let r3 = RealSource::sqrt(3).unwrap();
        let prod = RealSource::product(&r2, &r3);
        assert_eq!(digits_str(&prod, 10, 20), "44948974278317809819"); // √6
        let inv = RealSource::quotient(1, &r2);
        assert_eq!(digits_str(&inv, 10, 20), "70710678118654752440");
        let sum = RealSource::sum(&r2, &r3);
        assert_eq!(sum.expand(10, 10).unwrap().fraction_string(), "1462643699");
        assert_eq!(RealSource::golden_ratio().floor_times(32).unwrap(), BigInt::from(51));
    }

    #[test]
    fn normality_counts() {
        let third = RealSource::rational(1, 3).unwrap();
        let rep = normality_stats(&third, 10, 1, 1000, 0.01).unwrap();
        assert_eq!(rep.counts[3], 1000);
        assert!(!rep.consistent);
        assert!(normality_of_digits(&[0, 1], 2, 30, 0.1).is_err());
    }

    #[test]
    fn block_search_basics() {
        let s = RealSource::sqrt(2).unwrap();
        let r = block_search(&s, 10, &[7], 100, None).unwrap();
        assert_eq!(r.found.map(|f| f.0), Some(1));
    }
}
