//! Regular continued fractions: certified expansion of reals, word-driven
//! expansions, convergents, irrationality-exponent estimates and a search
//! for simultaneous approximations to `ξ` and `ξ²`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::interval::{div_floor, ln_biguint};
use crate::reals::{Precision, RealError, RealSource, StreamFactory};
use crate::words::WordStream;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContFracError {
    #[error("{0} is rational by construction")]
    NotIrrational(String),
    #[error("partial quotients must be distinct positive integers (got {0} and {1})")]
    BadValues(u64, u64),
    #[error("letter {0} has no partial quotient")]
    UnmappedLetter(u16),
    #[error("finite expansion has only {0} partial quotients")]
    Exhausted(usize),
    #[error("need at least {need} bits for X = {x}, got {got}")]
    InsufficientPrecision { x: u64, need: u64, got: u64 },
    #[error("empty grid")]
    EmptyGrid,
    #[error("estimate needs n >= 2")]
    TooFewTerms,
    #[error(transparent)]
    Real(#[from] RealError),
}

enum Origin {
    Real { x: RealSource, prec: u64, ceiling: u64 },
    Word { stream: WordStream, values: Vec<u64> },
    Finite,
}

/// `[a_0; a_1, a_2, …]` with the partial quotients produced on demand.
pub struct ContinuedFraction {
    a0: BigInt,
    quotients: Vec<BigUint>,
    origin: Origin,
}

impl core::fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "[{}; ", self.a0)?;
        for (i, a) in self.quotients.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "…]")
    }
}

/// `p_n / q_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub n: usize,
    pub p: BigInt,
    pub q: BigUint,
}

impl ContinuedFraction {
    /// Certified expansion of an irrational source.
    pub fn expand(x: &RealSource) -> Result<Self, ContFracError> {
        Self::expand_with(x, Precision::default())
    }

    pub fn expand_with(x: &RealSource, policy: Precision) -> Result<Self, ContFracError> {
        if x.is_known_rational() {
            return Err(ContFracError::NotIrrational(x.describe()));
        }
        let iv = x.enclose(64)?;
        let (f_lo, f_hi) = iv.floors();
        let mut prec = 64;
        let a0 = if f_lo == f_hi {
            f_lo
        } else {
            loop {
                prec *= 2;
                if prec > policy.ceiling_bits {
                    return Err(RealError::PrecisionCeiling(policy.ceiling_bits).into());
                }
                let (l, h) = x.enclose(prec)?.floors();
                if l == h {
                    break l;
                }
            }
        };
        Ok(Self {
            a0,
            quotients: Vec::new(),
            origin: Origin::Real { x: x.clone(), prec, ceiling: policy.ceiling_bits },
        })
    }

    /// `[0; v(w_1), v(w_2), …]` for a two-letter word, `v(a) = A`, `v(b) = B`.
    pub fn from_word(stream: WordStream, a: u64, b: u64) -> Result<Self, ContFracError> {
        if a == 0 || b == 0 || a == b {
            return Err(ContFracError::BadValues(a, b));
        }
        Self::from_word_values(stream, alloc::vec![a, b])
    }

    /// `[0; v(w_1), v(w_2), …]` with `v(s) = values[s]`.
    pub fn from_word_values(stream: WordStream, values: Vec<u64>) -> Result<Self, ContFracError> {
        if values.is_empty() || values.contains(&0) {
            return Err(ContFracError::BadValues(0, 0));
        }
        Ok(Self { a0: BigInt::zero(), quotients: Vec::new(), origin: Origin::Word { stream, values } })
    }

    /// A terminating expansion, for convergent arithmetic.
    pub fn finite(a0: BigInt, quotients: Vec<BigUint>) -> Result<Self, ContFracError> {
        if quotients.iter().any(Zero::is_zero) {
            return Err(ContFracError::BadValues(0, 0));
        }
        Ok(Self { a0, quotients, origin: Origin::Finite })
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    /// `a_1 … a_n`.
    pub fn quotients(&mut self, n: usize) -> Result<&[BigUint], ContFracError> {
        if self.quotients.len() < n {
            self.extend(n)?;
        }
        Ok(&self.quotients[..n])
    }

    fn extend(&mut self, n: usize) -> Result<(), ContFracError> {
        match &mut self.origin {
            Origin::Finite => return Err(ContFracError::Exhausted(self.quotients.len())),
            Origin::Word { stream, values } => {
                for i in self.quotients.len()..n {
                    let s = stream.get(i);
                    let v = *values.get(s as usize).ok_or(ContFracError::UnmappedLetter(s))?;
                    self.quotients.push(BigUint::from(v));
                }
            }
            Origin::Real { x, prec, ceiling } => {
                // Each q_k costs about 2 log2 q_k bits; start near that for
                // small quotients and double.
                *prec = (*prec).max(64 + 4 * n as u64);
                loop {
                    let iv = x.enclose(*prec)?;
                    let got = lockstep_euclid(iv.lo(), iv.hi(), iv.prec(), n);
                    debug_assert!(got.0 == self.a0);
                    debug_assert!(got.1.iter().zip(&self.quotients).all(|(a, b)| a == b));
                    if got.1.len() >= n {
                        self.quotients = got.1;
                        break;
                    }
                    if got.1.len() > self.quotients.len() {
                        self.quotients = got.1;
                    }
                    if *prec >= *ceiling {
                        return Err(RealError::PrecisionCeiling(*ceiling).into());
                    }
                    *prec = (*prec * 2).min(*ceiling);
                }
            }
        }
        Ok(())
    }

    /// Convergents `p_k / q_k` for `k = 0..=n`.
    pub fn convergents(&mut self, n: usize) -> Result<Vec<Convergent>, ContFracError> {
        let a0 = self.a0.clone();
        let qs = self.quotients(n)?;
        let mut out = Vec::with_capacity(n + 1);
        let (mut p0, mut q0) = (BigInt::one(), BigUint::zero());
        let (mut p1, mut q1) = (a0, BigUint::one());
        out.push(Convergent { n: 0, p: p1.clone(), q: q1.clone() });
        for (k, a) in qs.iter().enumerate() {
            let ai = BigInt::from(a.clone());
            let p2 = &ai * &p1 + &p0;
            let q2 = a * &q1 + &q0;
            p0 = core::mem::replace(&mut p1, p2);
            q0 = core::mem::replace(&mut q1, q2);
            out.push(Convergent { n: k + 1, p: p1.clone(), q: q1.clone() });
        }
        Ok(out)
    }
}

/// Shared partial quotients of `lo / 2^prec` and `hi / 2^prec`, i.e. those
/// valid for every number in between, up to `limit` of them.
fn lockstep_euclid(lo: &BigInt, hi: &BigInt, prec: u64, limit: usize) -> (BigInt, Vec<BigUint>) {
    let den = BigInt::one() << prec;
    let (mut n1, mut d1) = (lo.clone(), den.clone());
    let (mut n2, mut d2) = (hi.clone(), den);
    let a0 = div_floor(&n1, &d1);
    let mut out = Vec::new();
    if a0 != div_floor(&n2, &d2) {
        return (a0, out);
    }
    let mut a = a0.clone();
    loop {
        let r1 = &n1 - &a * &d1;
        let r2 = &n2 - &a * &d2;
        if r1.is_zero() || r2.is_zero() || out.len() >= limit {
            break;
        }
        // The complete quotient is d / r; the interval flips orientation.
        n1 = core::mem::replace(&mut d1, r1);
        n2 = core::mem::replace(&mut d2, r2);
        let b1 = n1.div_floor(&d1);
        let b2 = n2.div_floor(&d2);
        if b1 != b2 {
            break;
        }
        out.push(b1.to_biguint().expect("positive quotient"));
        a = b1;
    }
    (a0, out)
}

/// `κ_k = 1 + ln q_{k+1} / ln q_k`, the exponent realized by `p_k / q_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentEstimate {
    /// `(k, κ_k)` for every `k ≤ n` with `q_k ≥ 2`.
    pub kappas: Vec<(usize, f64)>,
    pub max: f64,
    pub last: f64,
    /// Least-squares slope of `κ_k` over the second half of the range.
    pub tail_slope: f64,
}

pub fn irrationality_exponent_estimate(
    cf: &mut ContinuedFraction,
    n: usize,
) -> Result<ExponentEstimate, ContFracError> {
    if n < 2 {
        return Err(ContFracError::TooFewTerms);
    }
    let convs = cf.convergents(n + 1)?;
    let kappas: Vec<(usize, f64)> = (1..=n)
        .filter(|&k| convs[k].q > BigUint::one())
        .map(|k| (k, 1.0 + ln_biguint(&convs[k + 1].q) / ln_biguint(&convs[k].q)))
        .collect();
    let max = kappas.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    let last = kappas.last().map_or(f64::NAN, |&(_, v)| v);
    let tail: Vec<(f64, f64)> = kappas.iter().filter(|&&(k, _)| 2 * k >= n).map(|&(k, v)| (k as f64, v)).collect();
    Ok(ExponentEstimate { kappas, max, last, tail_slope: slope(&tail) })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let m = pts.len() as f64;
    if pts.len() < 2 {
        return 0.0;
    }
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (m * sxy - sx * sy) / (m * sxx - sx * sx)
}

/// `1/Φ = (√5 − 1)/2`.
pub const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, PartialEq)]
pub struct RoyRow {
    pub x: u64,
    /// Smallest `x_0 ≤ X` attaining the minimum.
    pub best_x0: u64,
    /// `min_{x_0 ≤ X} max(‖x_0 ξ‖, ‖x_0 ξ²‖)`.
    pub distance: f64,
    /// `distance · X^{1/Φ}`.
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoyReport {
    pub a: u64,
    pub b: u64,
    pub precision_bits: u64,
    pub xi: f64,
    pub rows: Vec<RoyRow>,
    /// `max_X s(X)` over the grid.
    pub c_emp: f64,
    /// `max(‖ξ‖, ‖ξ²‖)`.
    pub first_distance: f64,
}

/// The value of `[0; A, B, A, A, B, …]` read off the Fibonacci word.
pub fn fibonacci_cf_value(a: u64, b: u64) -> Result<RealSource, ContFracError> {
    if a == 0 || b == 0 || a == b {
        return Err(ContFracError::BadValues(a, b));
    }
    let factory: StreamFactory = Arc::new(crate::words::builtin::fibonacci_word);
    Ok(RealSource::word_continued_fraction(format!("cf:fib:{a},{b}"), factory, alloc::vec![a, b])?)
}

/// Log-spaced integers from `lo` to `hi`, `per_decade` points per factor 10.
pub fn log_grid(lo: u64, hi: u64, per_decade: u32) -> Vec<u64> {
    let mut out = Vec::new();
    if lo == 0 || hi < lo || per_decade == 0 {
        return out;
    }
    let (l, h) = (libm::log10(lo as f64), libm::log10(hi as f64));
    let steps = libm::ceil((h - l) * per_decade as f64) as u32;
    for i in 0..=steps {
        let t = if steps == 0 { l } else { l + (h - l) * i as f64 / steps as f64 };
        let v = (libm::round(libm::pow(10.0, t)) as u64).clamp(lo, hi);
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}

/// Exhaustive search over `1 ≤ x_0 ≤ X` of `max(‖x_0 ξ‖, ‖x_0 ξ²‖)` for
/// every `X` in `grid`.
pub fn roy_check(a: u64, b: u64, grid: &[u64], precision_bits: u64) -> Result<RoyReport, ContFracError> {
    let mut grid: Vec<u64> = grid.iter().copied().filter(|&x| x > 0).collect();
    grid.sort_unstable();
    grid.dedup();
    let x_max = *grid.last().ok_or(ContFracError::EmptyGrid)?;
    let need = 2 * (64 - x_max.leading_zeros() as u64) + 64;
    if precision_bits < need {
        return Err(ContFracError::InsufficientPrecision { x: x_max, need, got: precision_bits });
    }
    let xi = fibonacci_cf_value(a, b)?;
    let xi2 = RealSource::product(&xi, &xi);
    let f1 = frac_fixed(&xi, precision_bits)?;
    let f2 = frac_fixed(&xi2, precision_bits)?;
    let dist = |x0: u64| -> u128 {
        let d = |f: u128| {
            let v = f.wrapping_mul(x0 as u128);
            v.min(v.wrapping_neg())
        };
        d(f1).max(d(f2))
    };
    let scale = libm::ldexp(1.0, -128);
    let mut rows = Vec::with_capacity(grid.len());
    let (mut best, mut best_x0) = (u128::MAX, 0u64);
    let mut x0 = 1u64;
    for &x in &grid {
        while x0 <= x {
            let d = dist(x0);
            if d < best {
                best = d;
                best_x0 = x0;
            }
            x0 += 1;
        }
        let distance = best as f64 * scale;
        rows.push(RoyRow { x, best_x0, distance, s: distance * libm::pow(x as f64, INV_PHI) });
    }
    let c_emp = rows.iter().map(|r| r.s).fold(0.0, f64::max);
    let xi_f = f1 as f64 * scale;
    Ok(RoyReport { a, b, precision_bits, xi: xi_f, rows, c_emp, first_distance: dist(1) as f64 * scale })
}

/// `frac(x)` as a 128-bit fixed-point fraction, truncated to `bits` bits.
fn frac_fixed(x: &RealSource, bits: u64) -> Result<u128, ContFracError> {
    let p = bits.max(128);
    let iv = x.enclose(p)?;
    let ip = iv.prec();
    let lo = iv.lo();
    let int = lo >> ip;
    let f = lo - (int << ip);
    let f = f >> (ip - 128);
    let mut v = match f.sign() {
        Sign::Minus => 0,
        _ => f.magnitude().to_u128().unwrap_or(u128::MAX),
    };
    if bits < 128 {
        v &= !((1u128 << (128 - bits)) - 1);
    }
    Ok(v)
}

/// `|x − p/q| < 1/(q q')` checked exactly against an enclosure of `x`.
pub fn convergent_gap_holds(x: &RealSource, c: &Convergent, q_next: &BigUint) -> Result<bool, ContFracError> {
    let q = BigInt::from(c.q.clone());
    let qq = &q * BigInt::from(q_next.clone());
    let prec = 2 * qq.bits() + 16;
    let iv = x.enclose(prec)?;
    let ip = iv.prec();
    // |x q q' − p q'| < 1, scaled by 2^ip.
    let pq = (&c.p * BigInt::from(q_next.clone())) << ip;
    let bound = BigInt::one() << ip;
    let lo = iv.lo() * &qq - &pq;
    let hi = iv.hi() * &qq - &pq;
    Ok(lo.abs() < bound && hi.abs() < bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibonacci::fib;
    use crate::reals::ExponentSeq;
    use crate::words::builtin;

    fn u(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn quadratic_expansions() {
        let mut s = ContinuedFraction::expand(&RealSource::sqrt(2).unwrap()).unwrap();
        assert_eq!(*s.a0(), BigInt::one());
        assert_eq!(s.quotients(100).unwrap(), u(&[2; 100]).as_slice());
        let mut p = ContinuedFraction::expand(&RealSource::golden_ratio()).unwrap();
        assert_eq!(p.quotients(60).unwrap(), u(&[1; 60]).as_slice());
        let mut s7 = ContinuedFraction::expand(&RealSource::sqrt(7).unwrap()).unwrap();
        assert_eq!(s7.quotients(8).unwrap(), u(&[1, 1, 1, 4, 1, 1, 1, 4]).as_slice());
        let r = RealSource::rational(3, 7).unwrap();
        assert!(matches!(ContinuedFraction::expand(&r), Err(ContFracError::NotIrrational(_))));
    }

    #[test]
    fn convergents_and_determinant() {
        let mut s = ContinuedFraction::expand(&RealSource::sqrt(2).unwrap()).unwrap();
        let c = s.convergents(3).unwrap();
        let pq: Vec<(i64, u64)> = c.iter().map(|c| (c.p.to_i64().unwrap(), c.q.to_u64().unwrap())).collect();
        assert_eq!(pq, [(1, 1), (3, 2), (7, 5), (17, 12)]);
        let mut phi = ContinuedFraction::expand(&RealSource::golden_ratio()).unwrap();
        let c = phi.convergents(40).unwrap();
        for (k, cv) in c.iter().enumerate() {
            assert_eq!(cv.p, BigInt::from(fib(k as u64 + 2)));
            assert_eq!(cv.q, fib(k as u64 + 1));
            if k > 0 {
                let det = &cv.p * BigInt::from(c[k - 1].q.clone()) - &c[k - 1].p * BigInt::from(cv.q.clone());
                assert_eq!(det, BigInt::from(if k % 2 == 1 { 1 } else { -1 }));
            }
        }
    }

    #[test]
    fn word_driven() {
        let mut cf = ContinuedFraction::from_word(builtin::fibonacci_word(), 1, 2).unwrap();
        let expect = u(&[1, 2, 1, 1, 2, 1, 2, 1, 1, 2, 1, 1, 2]);
        assert_eq!(cf.quotients(13).unwrap(), expect.as_slice());
        assert!(ContinuedFraction::from_word(builtin::fibonacci_word(), 2, 2).is_err());
        assert!(ContinuedFraction::from_word(builtin::fibonacci_word(), 0, 2).is_err());
        // Expanding the value recovers the word.
        let x = fibonacci_cf_value(1, 2).unwrap();
        let mut back = ContinuedFraction::expand(&x).unwrap();
        assert_eq!(*back.a0(), BigInt::zero());
        let mut cf = ContinuedFraction::from_word(builtin::fibonacci_word(), 1, 2).unwrap();
        assert_eq!(back.quotients(80).unwrap(), cf.quotients(80).unwrap());
    }

    #[test]
    fn gap_bound() {
        let x = RealSource::sqrt(3).unwrap();
        let mut cf = ContinuedFraction::expand(&x).unwrap();
        let c = cf.convergents(30).unwrap();
        for k in 0..30 {
            assert!(convergent_gap_holds(&x, &c[k], &c[k + 1].q).unwrap());
        }
        // p/q = 2/1 is not within 1/(1·1) of √3 + 1.
        let bad = Convergent { n: 0, p: BigInt::from(0), q: BigUint::one() };
        assert!(!convergent_gap_holds(&x, &bad, &BigUint::one()).unwrap());
    }

    #[test]
    fn exponent_estimates() {
        let mut s = ContinuedFraction::expand(&RealSource::sqrt(2).unwrap()).unwrap();
        let e = irrationality_exponent_estimate(&mut s, 200).unwrap();
        assert!((e.last - 2.0).abs() < 0.01);
        assert!(e.tail_slope < 0.0);
        let x = RealSource::lacunary(2, ExponentSeq::Factorial).unwrap();
        let mut l = ContinuedFraction::expand(&x).unwrap();
        let e = irrationality_exponent_estimate(&mut l, 8).unwrap();
        assert!(e.max > 3.0, "{e:?}");
        assert!(irrationality_exponent_estimate(&mut s, 1).is_err());
    }

    #[test]
    fn finite_expansion() {
        let mut f = ContinuedFraction::finite(BigInt::from(2), u(&[3])).unwrap();
        let c = f.convergents(1).unwrap();
        assert_eq!((c[1].p.clone(), c[1].q.clone()), (BigInt::from(7), BigUint::from(3u32)));
        assert_eq!(f.quotients(2).unwrap_err(), ContFracError::Exhausted(1));
    }

    #[test]
    fn roy_small_grid() {
        let grid = log_grid(10, 10_000, 4);
        assert_eq!(grid.first(), Some(&10));
        assert_eq!(grid.last(), Some(&10_000));
        let r = roy_check(1, 2, &grid, 128).unwrap();
        assert!(r.first_distance <= 0.5);
        assert!(r.rows.iter().all(|row| row.distance > 0.0 && row.s <= r.c_emp));
        assert!(r.rows.windows(2).all(|w| w[1].distance <= w[0].distance));
        assert!(matches!(roy_check(1, 2, &grid, 80), Err(ContFracError::InsufficientPrecision { .. })));
        assert!(roy_check(1, 2, &[], 128).is_err());
    }
}
