//! High-precision enclosures of a few classical constants, computed by series
//! that are independent of any digit-extraction formula.

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::interval::{pow_u, Interval, SeriesAcc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    /// Machin: `16 atan(1/5) - 4 atan(1/239)`.
    Pi,
    PiSquared,
    /// `2 atanh(1/3)`.
    Log2,
    Log2Squared,
    /// Apéry's series `5/2 Σ (-1)^(n+1) / (n³ C(2n, n))`.
    Zeta3,
}

impl Constant {
    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::PiSquared => "pi^2",
            Constant::Log2 => "log2",
            Constant::Log2Squared => "log2^2",
            Constant::Zeta3 => "zeta3",
        }
    }

    /// Enclosure of width at most `2^-prec`.
    pub fn enclose(self, prec: u64) -> Interval {
        match self {
            Constant::Pi => pi(prec),
            Constant::Log2 => log2(prec),
            Constant::Zeta3 => zeta3(prec),
            Constant::PiSquared => square(pi, prec),
            Constant::Log2Squared => square(log2, prec),
        }
    }
}

fn guard(prec: u64) -> u64 {
    prec + 8 + 2 * (64 - (prec + 64).leading_zeros() as u64)
}

/// `Σ_k s^k / ((2k+1) x^(2k+1))`: `atan(1/x)` when alternating, else `atanh(1/x)`.
fn arc_series(x: u64, alternating: bool, w: u64) -> Interval {
    let limit = BigUint::one() << w;
    let x2 = BigUint::from(x) * x;
    let mut pw = BigUint::from(x);
    let mut acc = SeriesAcc::new(w);
    let mut k = 0u64;
    loop {
        let den = &pw * (2 * k + 1);
        if den > limit {
            break;
        }
        let num = if alternating && k % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        acc.add_ratio(&num, &BigInt::from(den));
        pw *= &x2;
        k += 1;
    }
    // Remaining terms: each below 2^-w and shrinking by x² ≥ 4.
    acc.finish(2)
}

fn pi(prec: u64) -> Interval {
    let w = guard(prec) + 5;
    let a = arc_series(5, true, w).mul_int(&BigInt::from(16));
    let b = arc_series(239, true, w).mul_int(&BigInt::from(4));
    a.sub(&b)
}

fn log2(prec: u64) -> Interval {
    let w = guard(prec) + 1;
    arc_series(3, false, w).mul_int(&BigInt::from(2))
}

fn zeta3(prec: u64) -> Interval {
    let w = guard(prec) + 3;
    let limit = BigUint::one() << w;
    let mut binom = BigUint::from(2u32); // C(2, 1)
    let mut acc = SeriesAcc::new(w);
    let mut n = 1u64;
    loop {
        let den = &binom * pow_u(n, 3);
        if den > limit {
            break;
        }
        let num = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        acc.add_ratio(&num, &BigInt::from(den));
        // C(2n+2, n+1) = C(2n, n) (2n+1)(2n+2) / (n+1)²
        binom = binom * ((2 * n + 1) * (2 * n + 2)) / ((n + 1) * (n + 1));
        n += 1;
    }
    // Alternating with decreasing terms: tail below the first omitted term.
    let s = acc.finish(1).mul_int(&BigInt::from(5));
    Interval::new(s.lo().clone(), s.hi().clone(), s.prec() + 1)
}

fn square(f: fn(u64) -> Interval, prec: u64) -> Interval {
    // |x| < 16 for the constants squared here.
    let x = f(prec + 7);
    x.mul(&x).rescale(prec + 2)
}
