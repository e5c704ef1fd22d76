//! Fibonacci numbers, Zeckendorf representations, the rabbit sequence and
//! its Beatty-sequence description.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::reals::{RealError, RealSource};
use crate::words::{Alphabet, Symbol, WordStream};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibError {
    #[error("argument must be at least 1")]
    Zero,
    #[error(transparent)]
    Real(#[from] RealError),
}

/// `F_n` with `F_0 = 0`, `F_1 = 1` (fast doubling).
pub fn fib(n: u64) -> BigUint {
    fn pair(n: u64) -> (BigUint, BigUint) {
        if n == 0 {
            return (BigUint::zero(), BigUint::one());
        }
        let (a, b) = pair(n / 2);
        // F_2k = F_k (2 F_{k+1} - F_k), F_2k+1 = F_k² + F_{k+1}²
        let c = &a * (&b * 2u32 - &a);
        let d = &a * &a + &b * &b;
        if n.is_multiple_of(2) {
            (c, d)
        } else {
            let e = &c + &d;
            (d, e)
        }
    }
    pair(n).0
}

/// `F_n` for `n ≤ 93`.
pub fn fib_u64(n: u64) -> Option<u64> {
    if n == 0 {
        return Some(0);
    }
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 1..n {
        let c = a.checked_add(b)?;
        a = b;
        b = c;
    }
    Some(b)
}

/// `n = Σ F_{k_i}` with `k_1 > k_2 > … ≥ 2` and no two indices consecutive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zeckendorf {
    pub indices: Vec<u32>,
}

impl Zeckendorf {
    pub fn value(&self) -> u64 {
        self.indices.iter().map(|&k| fib_u64(k as u64).unwrap_or(0)).sum()
    }

    pub fn smallest_index(&self) -> u32 {
        *self.indices.last().expect("nonempty representation")
    }
}

/// Greedy decomposition.
pub fn zeckendorf(mut n: u64) -> Result<Zeckendorf, FibError> {
    if n == 0 {
        return Err(FibError::Zero);
    }
    let mut table: Vec<u64> = Vec::new();
    let mut k = 2u64;
    while let Some(f) = fib_u64(k) {
        if f > n {
            break;
        }
        table.push(f);
        k += 1;
    }
    let mut indices = Vec::new();
    for (i, &f) in table.iter().enumerate().rev() {
        if f <= n {
            indices.push(i as u32 + 2);
            n -= f;
        }
    }
    Ok(Zeckendorf { indices })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rabbit {
    A,
    Y,
}

/// `R_n` for `n ≥ 1`: `A` iff the smallest Zeckendorf index of `n` is even.
pub fn rabbit(n: u64) -> Result<Rabbit, FibError> {
    let z = zeckendorf(n)?;
    Ok(if z.smallest_index() % 2 == 0 { Rabbit::A } else { Rabbit::Y })
}

/// `(v_n)_{n ≥ 0}` over `{0, 1}` with `v_n = 0` iff `R_{n+1} = A`.
pub fn danilov_stream() -> WordStream {
    WordStream::from_fn(Arc::new(Alphabet::digits(2)), |n| match rabbit(n + 1) {
        Ok(Rabbit::A) => 0,
        _ => 1 as Symbol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeattyKind {
    Phi,
    PhiSquared,
}

/// A floor is accepted only when `k x` sits at least `2^-guard` above it;
/// the guard starts here and doubles with the working precision.
const FLOOR_GUARD_BITS: u64 = 20;

/// `⌊kΦ⌋` or `⌊kΦ²⌋` for `k = 1..=count`, from certified enclosures of Φ.
pub fn beatty_indices(kind: BeattyKind, count: u64) -> Result<Vec<u64>, FibError> {
    if count == 0 {
        return Err(FibError::Zero);
    }
    let x = match kind {
        BeattyKind::Phi => RealSource::golden_ratio(),
        BeattyKind::PhiSquared => RealSource::quadratic(3, 1, 5u32, 2)?,
    };
    let kbits = 64 - count.leading_zeros() as u64;
    let mut guard = FLOOR_GUARD_BITS;
    let mut prec = kbits + guard + 32;
    let mut iv = x.enclose(prec)?;
    let mut out = Vec::with_capacity(count as usize);
    let mut k = 1u64;
    while k <= count {
        let kb = BigInt::from(k);
        let ip = iv.prec();
        let lo = iv.lo() * &kb;
        let hi = iv.hi() * &kb;
        let f_lo: BigInt = &lo >> ip;
        let f_hi: BigInt = &hi >> ip;
        let margin = &lo - (&f_lo << ip);
        if f_lo == f_hi && margin >= (BigInt::one() << (ip - guard)) {
            out.push(u64::try_from(f_lo).expect("floor fits in u64"));
            k += 1;
        } else {
            prec *= 2;
            guard *= 2;
            if prec > 1 << 20 {
                return Err(FibError::Real(RealError::PrecisionCeiling(prec / 2)));
            }
            iv = x.enclose(prec)?;
        }
    }
    Ok(out)
}
