//! Power series truncated mod `X^N`, over `F_p` or over the integers.

use alloc::vec::Vec;

use thiserror::Error;

use crate::automata::Dfao;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("coefficient rings differ")]
    RingMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("integer coefficient overflow")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ring {
    Fp(u64),
    Integers,
}

impl Ring {
    pub fn fp(p: u64) -> Result<Ring, SeriesError> {
        let prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if prime && p < 1 << 31 {
            Ok(Ring::Fp(p))
        } else {
            Err(SeriesError::NotPrime(p))
        }
    }

    fn reduce(self, v: i128) -> Result<i64, SeriesError> {
        match self {
            Ring::Fp(p) => Ok(v.rem_euclid(p as i128) as i64),
            Ring::Integers => i64::try_from(v).map_err(|_| SeriesError::Overflow),
        }
    }
}

/// `c_0 + c_1 X + … + c_{N-1} X^{N-1} + O(X^N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: Ring,
    coeffs: Vec<i64>,
}

impl TruncatedSeries {
    /// Pads or truncates `coeffs` to `order` terms and reduces them.
    pub fn new(ring: Ring, mut coeffs: Vec<i64>, order: usize) -> Result<Self, SeriesError> {
        coeffs.resize(order, 0);
        let coeffs = coeffs.into_iter().map(|c| ring.reduce(c as i128)).collect::<Result<_, _>>()?;
        Ok(Self { ring, coeffs })
    }

    pub fn zero(ring: Ring, order: usize) -> Self {
        Self { ring, coeffs: alloc::vec![0; order] }
    }

    pub fn one(ring: Ring, order: usize) -> Self {
        Self::monomial(ring, order, 0, 1)
    }

    /// `c X^k`.
    pub fn monomial(ring: Ring, order: usize, k: usize, c: i64) -> Self {
        let mut s = Self::zero(ring, order);
        if k < order {
            s.coeffs[k] = ring.reduce(c as i128).unwrap_or(0);
        }
        s
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<usize, SeriesError> {
        if self.ring != other.ring {
            return Err(SeriesError::RingMismatch);
        }
        Ok(self.order().min(other.order()))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        let n = self.check(other)?;
        let coeffs = (0..n)
            .map(|i| self.ring.reduce(self.coeffs[i] as i128 + other.coeffs[i] as i128))
            .collect::<Result<_, _>>()?;
        Ok(Self { ring: self.ring, coeffs })
    }

    pub fn neg(&self) -> Result<Self, SeriesError> {
        let coeffs = self.coeffs.iter().map(|&c| self.ring.reduce(-(c as i128))).collect::<Result<_, _>>()?;
        Ok(Self { ring: self.ring, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let n = self.check(other)?;
        let mut out = alloc::vec![0i128; n];
        for (i, &a) in self.coeffs[..n].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs[..n - i].iter().enumerate() {
                // Over F_p (p < 2^31) products stay below 2^62, so the i128
                // sum cannot overflow before the final reduction.
                out[i + j] = out[i + j].checked_add(a as i128 * b as i128).ok_or(SeriesError::Overflow)?;
            }
        }
        let coeffs = out.into_iter().map(|c| self.ring.reduce(c)).collect::<Result<_, _>>()?;
        Ok(Self { ring: self.ring, coeffs })
    }

    pub fn pow(&self, mut k: u64) -> Result<Self, SeriesError> {
        let mut acc = Self::one(self.ring, self.order());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `f(X^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        let mut out = Self::zero(self.ring, self.order());
        for (i, &c) in self.coeffs.iter().enumerate() {
            match i.checked_mul(k) {
                Some(j) if j < out.order() => out.coeffs[j] = c,
                _ => break,
            }
        }
        out
    }

    /// Smallest `(preperiod, period)` with `period ≤ max_period` such that the
    /// coefficients repeat with that period from `preperiod` on, observed over
    /// at least `min_repeats` periods.
    pub fn ultimately_periodic(&self, max_period: usize, min_repeats: usize) -> Option<(usize, usize)> {
        let c = &self.coeffs;
        let n = c.len();
        for p in 1..=max_period.min(n) {
            let s = (0..n - p).rev().find(|&j| c[j] != c[j + p]).map_or(0, |j| j + 1);
            if n - s >= p * min_repeats.max(1) {
                return Some((s, p));
            }
        }
        None
    }
}

/// `Σ a_n X^n` over `F_2`, `a` the Prouhet–Thue–Morse sequence `0110…`.
pub fn ptm_series(order: usize) -> TruncatedSeries {
    let mut w = Dfao::builtin("ptm").expect("builtin").word();
    let coeffs = w.symbols(order).iter().map(|&s| s as i64).collect();
    TruncatedSeries { ring: Ring::Fp(2), coeffs }
}

/// Checks `(1+X)³F² + (1+X)²F + X ≡ 0 mod X^N` over `F_2`.
pub fn verify_ptm_cubic(order: usize) -> bool {
    let f = ptm_series(order);
    let r = Ring::Fp(2);
    let one_x = TruncatedSeries::new(r, alloc::vec![1, 1], order).expect("F_2");
    let x = TruncatedSeries::monomial(r, order, 1, 1);
    let lhs = (|| -> Result<TruncatedSeries, SeriesError> {
        let a = one_x.pow(3)?.mul(&f.mul(&f)?)?;
        let b = one_x.pow(2)?.mul(&f)?;
        a.add(&b)?.add(&x)
    })();
    lhs.map(|s| s.is_zero()).unwrap_or(false)
}

/// `Π_{2^k < N} (1 - z^(2^k)) mod z^N` over the integers, by sparse updates.
pub fn mahler_product(order: usize) -> TruncatedSeries {
    let mut c = alloc::vec![0i64; order];
    if order > 0 {
        c[0] = 1;
    }
    let mut step = 1usize;
    while step < order {
        for i in (step..order).rev() {
            c[i] -= c[i - step];
        }
        step *= 2;
    }
    TruncatedSeries { ring: Ring::Integers, coeffs: c }
}

/// Checks `f(z) - (1 - z) f(z²) ≡ 0 mod z^N`.
pub fn mahler_functional_check(f: &TruncatedSeries) -> bool {
    let n = f.order();
    let one_minus_z = match TruncatedSeries::new(f.ring(), alloc::vec![1, -1], n) {
        Ok(s) => s,
        Err(_) => return false,
    };
    one_minus_z.mul(&f.substitute_power(2)).and_then(|g| f.sub(&g)).map(|d| d.is_zero()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_two_arithmetic() {
        let r = Ring::fp(2).unwrap();
        let a = TruncatedSeries::new(r, alloc::vec![1, 1], 4).unwrap();
        assert_eq!(a.mul(&a).unwrap().coeffs(), [1, 0, 1, 0]);
        assert_eq!(a.pow(3).unwrap().coeffs(), [1, 1, 1, 1]);
        assert_eq!(a.mul(&TruncatedSeries::one(r, 4)).unwrap(), a);
        assert_eq!(a.add(&TruncatedSeries::one(Ring::Integers, 4)), Err(SeriesError::RingMismatch));
        assert!(Ring::fp(4).is_err());
    }

    #[test]
    fn ptm_identities() {
        assert_eq!(ptm_series(8).coeffs(), [0, 1, 1, 0, 1, 0, 0, 1]);
        for n in [4, 16, 256] {
            assert!(verify_ptm_cubic(n));
        }
        let m = mahler_product(8);
        assert_eq!(m.coeffs(), [1, -1, -1, 1, -1, 1, 1, -1]);
        assert!(mahler_functional_check(&mahler_product(512)));
        assert_eq!(mahler_product(1).coeffs(), [1]);
    }

    #[test]
    fn broken_series_fails_checks() {
        let mut f = ptm_series(64);
        f.coeffs[40] ^= 1;
        let r = Ring::Fp(2);
        let one_x = TruncatedSeries::new(r, alloc::vec![1, 1], 64).unwrap();
        let x = TruncatedSeries::monomial(r, 64, 1, 1);
        let lhs = one_x
            .pow(3)
            .unwrap()
            .mul(&f.mul(&f).unwrap())
            .unwrap()
            .add(&one_x.pow(2).unwrap().mul(&f).unwrap())
            .unwrap()
            .add(&x)
            .unwrap();
        assert!(!lhs.is_zero());
        let mut m = mahler_product(64);
        m.coeffs[33] = -m.coeffs[33];
        assert!(!mahler_functional_check(&m));
    }

    #[test]
    fn rational_series_detection() {
        // 1/(1 - X^3) = 1 + X^3 + X^6 + …
        let s = TruncatedSeries::new(Ring::Integers, (0..60).map(|i| (i % 3 == 0) as i64).collect(), 60).unwrap();
        assert_eq!(s.ultimately_periodic(10, 3), Some((0, 3)));
        assert_eq!(ptm_series(512).ultimately_periodic(64, 3), None);
    }
}
