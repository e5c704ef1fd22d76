//! Closed dyadic intervals `[lo, hi] · 2^-prec` with exact big-integer
//! endpoints, and the rounding helpers used to build them.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `floor(a / b)` for `b > 0`.
pub fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// `ceil(a / b)` for `b > 0`.
pub fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// `floor(a / 2^k)`.
pub fn shr_floor(a: &BigInt, k: u64) -> BigInt {
    if a.sign() == Sign::Minus {
        -shr_ceil_nonneg(&-a, k)
    } else {
        a >> k
    }
}

/// `ceil(a / 2^k)`.
pub fn shr_ceil(a: &BigInt, k: u64) -> BigInt {
    if a.sign() == Sign::Minus {
        -((-a) >> k)
    } else {
        shr_ceil_nonneg(a, k)
    }
}

fn shr_ceil_nonneg(a: &BigInt, k: u64) -> BigInt {
    let q: BigInt = a >> k;
    if &(&q << k) == a {
        q
    } else {
        q + 1
    }
}

pub fn pow_u(base: u64, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// Number of bits of `|a|` (0 for zero).
pub fn bit_len(a: &BigInt) -> u64 {
    a.bits()
}

/// `ceil(n · log2(g))` as a safe upper bound on the bits of `g^n`.
pub fn bits_for_digits(g: u32, n: u64) -> u64 {
    if g.is_power_of_two() {
        return n * g.trailing_zeros() as u64;
    }
    let est = libm::ceil(n as f64 * libm::log2(g as f64)) as u64;
    est + 1
}

/// Closed interval `[lo · 2^-prec, hi · 2^-prec]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u64,
}

impl Interval {
    pub fn new(lo: BigInt, hi: BigInt, prec: u64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi, prec }
    }

    pub fn point(value: BigInt, prec: u64) -> Self {
        Self { lo: value.clone(), hi: value, prec }
    }

    pub fn integer(n: BigInt) -> Self {
        Self::point(n, 0)
    }

    /// Outward-rounded enclosure of `num / den` at `prec` bits (`den > 0`).
    pub fn ratio(num: &BigInt, den: &BigInt, prec: u64) -> Self {
        debug_assert!(den.is_positive());
        let scaled = num << prec;
        Self { lo: div_floor(&scaled, den), hi: div_ceil(&scaled, den), prec }
    }

    pub fn lo(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi(&self) -> &BigInt {
        &self.hi
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    /// True when `hi - lo ≤ 2^-bits` (as real numbers).
    pub fn width_at_most(&self, bits: u64) -> bool {
        let w = &self.hi - &self.lo;
        if bits >= self.prec {
            (w << (bits - self.prec)) <= BigInt::one()
        } else {
            w <= (BigInt::one() << (self.prec - bits))
        }
    }

    /// Re-expresses at another precision, rounding outward when coarsening.
    pub fn rescale(&self, prec: u64) -> Interval {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let k = prec - self.prec;
                Interval { lo: &self.lo << k, hi: &self.hi << k, prec }
            }
            Ordering::Less => {
                let k = self.prec - prec;
                Interval { lo: shr_floor(&self.lo, k), hi: shr_ceil(&self.hi, k), prec }
            }
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let p = self.prec.max(other.prec);
        let a = self.rescale(p);
        let b = other.rescale(p);
        Interval { lo: a.lo + b.lo, hi: a.hi + b.hi, prec: p }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn add_int(&self, n: &BigInt) -> Interval {
        let s = n << self.prec;
        Interval { lo: &self.lo + &s, hi: &self.hi + &s, prec: self.prec }
    }

    /// Exact product; the precision is the sum of both precisions.
    pub fn mul(&self, other: &Interval) -> Interval {
        let c = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let lo = c.iter().min().cloned().unwrap_or_default();
        let hi = c.iter().max().cloned().unwrap_or_default();
        Interval { lo, hi, prec: self.prec + other.prec }
    }

    pub fn mul_int(&self, k: &BigInt) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if k.is_negative() {
            Interval { lo: b, hi: a, prec: self.prec }
        } else {
            Interval { lo: a, hi: b, prec: self.prec }
        }
    }

    /// Outward-rounded `num / self` at `prec` bits, or `None` if the interval
    /// contains zero.
    pub fn recip_mul(&self, num: &BigInt, prec: u64) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        // num / (v · 2^-p) = num · 2^p / v
        let scaled = num << (self.prec + prec);
        let a_lo = div_floor(&scaled, &self.lo);
        let a_hi = div_floor(&scaled, &self.hi);
        let c_lo = div_ceil(&scaled, &self.lo);
        let c_hi = div_ceil(&scaled, &self.hi);
        let lo = a_lo.min(a_hi);
        let hi = c_lo.max(c_hi);
        Some(Interval { lo, hi, prec })
    }

    /// Outward-rounded division by a positive integer.
    pub fn div_int(&self, k: &BigInt) -> Interval {
        debug_assert!(k.is_positive());
        Interval { lo: div_floor(&self.lo, k), hi: div_ceil(&self.hi, k), prec: self.prec }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Smallest `k` with `max(|lo|, |hi|) · 2^-prec ≤ 2^k` (may be negative).
    pub fn magnitude_log2(&self) -> i64 {
        let m = self.lo.abs().max(self.hi.abs());
        m.bits() as i64 - self.prec as i64
    }

    /// `floor(lo)` and `floor(hi)` of the represented reals.
    pub fn floors(&self) -> (BigInt, BigInt) {
        (shr_floor(&self.lo, self.prec), shr_floor(&self.hi, self.prec))
    }

    /// `floor(x · k)` for every `x` in the interval, when that is unique.
    pub fn floor_of_multiple(&self, k: &BigUint) -> Option<BigInt> {
        let k = BigInt::from(k.clone());
        let a = shr_floor(&(&self.lo * &k), self.prec);
        let b = shr_floor(&(&self.hi * &k), self.prec);
        (a == b).then_some(a)
    }

    pub fn contains(&self, other: &Interval) -> bool {
        let p = self.prec.max(other.prec);
        let a = self.rescale(p);
        let b = other.rescale(p);
        a.lo <= b.lo && b.hi <= a.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        let p = self.prec.max(other.prec);
        let a = self.rescale(p);
        let b = other.rescale(p);
        a.lo <= b.hi && b.lo <= a.hi
    }

    /// True when every point of `self` is strictly below every point of `other`.
    pub fn strictly_below(&self, other: &Interval) -> bool {
        let p = self.prec.max(other.prec);
        self.rescale(p).hi < other.rescale(p).lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        let sum = &self.lo + &self.hi;
        to_f64_scaled(&sum, self.prec as i64 + 1)
    }
}

/// `a · 2^-shift` as the nearest-ish `f64` (truncated to 64 significant bits).
pub fn to_f64_scaled(a: &BigInt, shift: i64) -> f64 {
    let bits = a.bits() as i64;
    let drop = (bits - 64).max(0);
    let top = (a.abs() >> drop as u64).to_u64().unwrap_or(u64::MAX) as f64;
    let v = top * libm::exp2((drop - shift) as f64);
    if a.is_negative() {
        -v
    } else {
        v
    }
}

/// Natural logarithm of a positive big integer.
pub fn ln_biguint(a: &BigUint) -> f64 {
    let bits = a.bits() as i64;
    let drop = (bits - 64).max(0);
    let top = (a >> drop as u64).to_u64().unwrap_or(u64::MAX) as f64;
    libm::log(top) + drop as f64 * core::f64::consts::LN_2
}

/// Base-`g` digits of `value` (most significant first), left padded to `len`.
/// `value` must be below `g^len`.
pub fn to_base_digits(value: &BigUint, g: u32, len: usize) -> Vec<u16> {
    let mut out = Vec::with_capacity(len);
    if g <= 256 {
        let d = if value.is_zero() { Vec::new() } else { value.to_radix_be(g) };
        assert!(d.len() <= len, "value does not fit in {len} digits");
        out.resize(len - d.len(), 0);
        out.extend(d.into_iter().map(u16::from));
    } else {
        split_digits(value, g, len, &mut out);
    }
    out
}

fn split_digits(value: &BigUint, g: u32, len: usize, out: &mut Vec<u16>) {
    if len <= 32 {
        let mut v = value.clone();
        let mut tmp = alloc::vec![0u16; len];
        let gb = BigUint::from(g);
        for slot in tmp.iter_mut().rev() {
            let (q, r) = v.div_rem(&gb);
            *slot = r.to_u16().unwrap_or(0);
            v = q;
        }
        assert!(v.is_zero(), "value does not fit in {len} digits");
        out.extend(tmp);
        return;
    }
    let low = len / 2;
    let (hi, lo) = value.div_rem(&pow_u(g as u64, low as u64));
    split_digits(&hi, g, len - low, out);
    split_digits(&lo, g, low, out);
}

/// Running sum of outward-rounded series terms at a fixed precision.
#[derive(Debug, Clone)]
pub struct SeriesAcc {
    sum: BigInt,
    below: u64,
    above: u64,
    prec: u64,
}

impl SeriesAcc {
    pub fn new(prec: u64) -> Self {
        Self { sum: BigInt::zero(), below: 0, above: 0, prec }
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    /// Adds `num / den` (`den > 0`), truncated toward zero; the rounding
    /// error is tracked on the appropriate side.
    pub fn add_ratio(&mut self, num: &BigInt, den: &BigInt) {
        let t = (num.abs() << self.prec) / den;
        if num.is_negative() {
            self.sum -= t;
            self.below += 1;
        } else {
            self.sum += t;
            self.above += 1;
        }
    }

    /// Adds `num / (den · 2^down)` with `down ≤ prec`.
    pub fn add_ratio_shifted(&mut self, num: &BigInt, den: &BigInt, down: u64) {
        debug_assert!(down <= self.prec);
        let t = (num.abs() << (self.prec - down)) / den;
        if num.is_negative() {
            self.sum -= t;
            self.below += 1;
        } else {
            self.sum += t;
            self.above += 1;
        }
    }

    pub fn add_exact(&mut self, v: &BigInt) {
        self.sum += v;
    }

    /// Closes the sum with `tail_ulps` of slack on both sides.
    pub fn finish(self, tail_ulps: u64) -> Interval {
        Interval {
            lo: &self.sum - BigInt::from(self.below + tail_ulps),
            hi: &self.sum + BigInt::from(self.above + tail_ulps),
            prec: self.prec,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_shifts() {
        for a in -40i64..40 {
            for k in 0..5u64 {
                let d = 1i64 << k;
                let exact_floor = a.div_euclid(d);
                let exact_ceil = -((-a).div_euclid(d));
                assert_eq!(shr_floor(&BigInt::from(a), k), BigInt::from(exact_floor));
                assert_eq!(shr_ceil(&BigInt::from(a), k), BigInt::from(exact_ceil));
            }
        }
        assert_eq!(div_ceil(&BigInt::from(-7), &BigInt::from(2)), BigInt::from(-3));
        assert_eq!(div_floor(&BigInt::from(-7), &BigInt::from(2)), BigInt::from(-4));
    }

    #[test]
    fn ratio_encloses() {
        let iv = Interval::ratio(&BigInt::from(1), &BigInt::from(3), 10);
        assert_eq!(iv.lo(), &BigInt::from(341));
        assert_eq!(iv.hi(), &BigInt::from(342));
        assert!(iv.width_at_most(10));
        assert!(!iv.width_at_most(11));
    }

    #[test]
    fn reciprocal_brackets() {
        // x in [1.5, 2] → 1/x in [0.5, 0.667]
        let x = Interval::new(BigInt::from(3), BigInt::from(4), 1);
        let r = x.recip_mul(&BigInt::one(), 8).unwrap();
        assert!(r.lo() <= &BigInt::from(128) && r.hi() >= &BigInt::from(171));
        let neg = x.neg().recip_mul(&BigInt::one(), 8).unwrap();
        assert!(neg.hi() >= &BigInt::from(-128) && neg.lo() <= &BigInt::from(-171));
        assert!(Interval::new(BigInt::from(-1), BigInt::from(1), 0).recip_mul(&BigInt::one(), 4).is_none());
    }

    #[test]
    fn digits_in_large_bases() {
        let v = BigUint::from(4095u32 * 4096 + 17);
        assert_eq!(to_base_digits(&v, 4096, 3), [0, 4095, 17]);
        assert_eq!(to_base_digits(&BigUint::from(5u8), 2, 4), [0, 1, 0, 1]);
        let big = pow_u(1000, 70) - 1u32;
        let d = to_base_digits(&big, 1000, 70);
        assert!(d.iter().all(|&x| x == 999));
    }

    #[test]
    fn logs() {
        let v = pow_u(10, 100);
        assert!((ln_biguint(&v) - 100.0 * core::f64::consts::LN_10).abs() < 1e-9);
        assert!((to_f64_scaled(&BigInt::from(3), 1) - 1.5).abs() < 1e-15);
    }
}
