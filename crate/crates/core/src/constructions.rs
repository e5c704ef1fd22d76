//! Explicit normal-number constructions: Champernowne, Korobov–Stoneham and
//! Copeland–Erdős.

use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::interval::to_base_digits;
use crate::reals::{RealError, RealSource};
use crate::words::{Alphabet, Symbol, SymbolSource, WordStream};

/// Base-`g` digits of `n ≥ 1`, most significant first.
pub fn digits_of(mut n: u64, g: u32) -> Vec<Symbol> {
    let mut d = Vec::new();
    while n > 0 {
        d.push((n % g as u64) as Symbol);
        n /= g as u64;
    }
    d.reverse();
    d
}

pub fn digit_len(n: u64, g: u32) -> usize {
    digits_of(n, g).len()
}

struct ConcatSource<I> {
    numbers: I,
    g: u32,
}

impl<I: Iterator<Item = u64> + Send> SymbolSource for ConcatSource<I> {
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize) {
        while buf.len() < target {
            let n = self.numbers.next().expect("infinite sequence");
            buf.extend(digits_of(n, self.g));
        }
    }
}

/// `1 2 3 …` written in base `g` and concatenated.
pub fn champernowne_word(g: u32) -> WordStream {
    assert!(g >= 2, "base must be at least 2");
    WordStream::new(Arc::new(Alphabet::digits(g)), Box::new(ConcatSource { numbers: 1u64.., g }))
}

/// The primes written in base `g` and concatenated.
pub fn copeland_erdos_word(g: u32) -> WordStream {
    assert!(g >= 2, "base must be at least 2");
    WordStream::new(Arc::new(Alphabet::digits(g)), Box::new(ConcatSource { numbers: Primes::new(), g }))
}

pub fn champernowne(g: u32) -> Result<RealSource, RealError> {
    if g < 2 {
        return Err(RealError::BadBase(g));
    }
    RealSource::digit_word(g, format!("champernowne:{g}"), Arc::new(move || champernowne_word(g)))
}

pub fn copeland_erdos(g: u32) -> Result<RealSource, RealError> {
    if g < 2 {
        return Err(RealError::BadBase(g));
    }
    RealSource::digit_word(g, format!("copeland-erdos:{g}"), Arc::new(move || copeland_erdos_word(g)))
}

/// `Σ_{n ≥ 0} a^-n g^-(a^n)`; `a` and `g` must be coprime and at least 2.
pub fn korobov_stoneham(a: u32, g: u32) -> Result<RealSource, RealError> {
    RealSource::stoneham(a, g)
}

/// Positions `c_k = k + Σ_{j ≤ k} ⌊log2 j⌋` at which the binary Champernowne
/// block of `k` ends.
pub fn champernowne_positions(k_max: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(k_max as usize);
    let mut c = 0u64;
    for k in 1..=k_max {
        c += 64 - k.leading_zeros() as u64;
        out.push(c);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormulaCheck {
    pub positions: Vec<u64>,
    pub agrees: bool,
}

/// Compares `Σ_{k ≤ K} k 2^-c_k` with the binary Champernowne digits through
/// position `c_K`.
pub fn champernowne_closed_formula_check(k_max: u64) -> ClosedFormulaCheck {
    assert!(k_max >= 1, "K must be at least 1");
    let positions = champernowne_positions(k_max);
    let last = *positions.last().unwrap_or(&0);
    let mut num = BigUint::zero();
    for (i, &c) in positions.iter().enumerate() {
        num += BigUint::from(i as u64 + 1) << (last - c);
    }
    let formula = to_base_digits(&num, 2, last as usize);
    let mut w = champernowne_word(2);
    let agrees = w.symbols(last as usize) == formula.as_slice();
    ClosedFormulaCheck { positions, agrees }
}

const SEGMENT: u64 = 1 << 15;

/// Primes in increasing order from a segmented sieve.
pub struct Primes {
    base: Vec<u64>,
    base_limit: u64,
    lo: u64,
    pending: VecDeque<u64>,
}

impl Primes {
    pub fn new() -> Self {
        Self { base: Vec::new(), base_limit: 1, lo: 2, pending: VecDeque::new() }
    }

    fn ensure_base(&mut self, limit: u64) {
        if limit <= self.base_limit {
            return;
        }
        let limit = limit.max(2 * self.base_limit);
        let mut composite = alloc::vec![false; limit as usize + 1];
        let mut base = Vec::new();
        for i in 2..=limit as usize {
            if !composite[i] {
                base.push(i as u64);
                let mut j = i * i;
                while j <= limit as usize {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        self.base = base;
        self.base_limit = limit;
    }

    fn next_segment(&mut self) {
        let lo = self.lo;
        let hi = lo + SEGMENT;
        self.ensure_base(isqrt(hi) + 1);
        let mut composite = alloc::vec![false; SEGMENT as usize];
        for &p in &self.base {
            if p * p >= hi {
                break;
            }
            let mut j = (p * p).max(lo.div_ceil(p) * p);
            while j < hi {
                composite[(j - lo) as usize] = true;
                j += p;
            }
        }
        for (i, &c) in composite.iter().enumerate() {
            if !c {
                self.pending.push_back(lo + i as u64);
            }
        }
        self.lo = hi;
    }
}

impl Default for Primes {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for Primes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pending.is_empty() {
            self.next_segment();
        }
        self.pending.pop_front()
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = libm::sqrt(n as f64) as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn champernowne_prefixes() {
        let blocks =
            ["1", "10", "11", "100", "101", "110", "111", "1000", "1001", "1010", "1011", "1100", "1101", "1110"];
        let expect: alloc::string::String = blocks.concat();
        let mut w = champernowne_word(2);
        assert_eq!(w.prefix(expect.len()).to_string(), expect);
        let mut d = champernowne_word(10);
        assert_eq!(d.prefix(15).to_string(), "123456789101112");
    }

    #[test]
    fn closed_formula_positions() {
        let chk = champernowne_closed_formula_check(14);
        assert_eq!(&chk.positions[..4], &[1, 3, 5, 8]);
        assert!(chk.agrees);
        assert!(champernowne_closed_formula_check(1).agrees);
    }

    #[test]
    fn copeland_erdos_prefix() {
        let mut w = copeland_erdos_word(10);
        assert_eq!(w.prefix(14).to_string(), "23571113171923");
        let mut b = copeland_erdos_word(2);
        let expect = ["10", "11", "101", "111", "1011", "1101"].concat();
        assert_eq!(b.prefix(expect.len()).to_string(), expect);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let naive: Vec<u64> =
            (2u64..200_000).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect();
        let fast: Vec<u64> = Primes::new().take_while(|&p| p < 200_000).collect();
        assert_eq!(naive, fast);
    }

    #[test]
    fn stoneham_requires_coprime() {
        assert!(korobov_stoneham(2, 2).is_err());
        assert!(korobov_stoneham(3, 2).is_ok());
    }
}
