//! Cross-checks against values computed here by unrelated methods.

use expansions_core::bbp::BbpSpec;
use expansions_core::interval::to_base_digits;
use expansions_core::reals::{eta_digits, RealSource};
use expansions_core::words::builtin;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// `atan(1/x) · 2^bits`, truncated series with a few guard bits.
fn atan_inv(x: u64, bits: u64) -> BigInt {
    let one = BigInt::from(1) << bits;
    let x2 = BigInt::from(x * x);
    let mut term = &one / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &x2;
        k += 1;
    }
    sum
}

/// `atanh(1/x) · 2^bits`.
fn atanh_inv(x: u64, bits: u64) -> BigInt {
    let one = BigInt::from(1) << bits;
    let x2 = BigInt::from(x * x);
    let mut term = &one / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        sum += &term / BigInt::from(2 * k + 1);
        term /= &x2;
        k += 1;
    }
    sum
}

fn frac_hex(v: &BigInt, bits: u64, n: usize) -> Vec<u16> {
    let f = v.mod_floor(&(BigInt::from(1) << bits));
    let top: BigUint = (f >> (bits - 4 * n as u64)).to_biguint().unwrap();
    to_base_digits(&top, 16, n)
}

#[test]
fn pi_hex_digits_match_machin() {
    let bits = 4 * 100 + 64;
    // π = 16 atan(1/5) − 4 atan(1/239)
    let pi = atan_inv(5, bits) * 16 - atan_inv(239, bits) * 4;
    let spec = BbpSpec::builtin("pi16").unwrap();
    let (int, digits) = spec.eval_digits(100).unwrap();
    assert_eq!(int, BigInt::from(3));
    // Guard against a carry sitting exactly at the cut.
    assert_eq!(digits[..98], frac_hex(&pi, bits, 100)[..98]);
    let far = spec.extract_digits(91, 8).unwrap();
    assert_eq!(far[..6], digits[90..96]);
}

#[test]
fn log3_matches_log2_plus_atanh() {
    let bits = 400u64;
    // log 3 = log 2 + 2 atanh(1/5), log 2 = 2 atanh(1/3)
    let l3 = atanh_inv(3, bits) * 2 + atanh_inv(5, bits) * 2;
    let x = RealSource::bbp(BbpSpec::builtin("log3").unwrap());
    let iv = x.enclose(bits).unwrap();
    let mid: BigInt = (iv.lo() + iv.hi()) >> 1u32;
    let at_bits: BigInt = mid >> (iv.prec() - bits) as u32;
    let diff: BigInt = at_bits - l3;
    assert!(diff.abs() < BigInt::from(1) << 8u32, "{diff}");
}

#[test]
fn two_log2_formulas_agree() {
    let a = RealSource::bbp(BbpSpec::builtin("log2").unwrap());
    let b = RealSource::bbp(BbpSpec::builtin("log2-b9").unwrap());
    let ia = a.enclose(400).unwrap();
    let ib = b.enclose(400).unwrap();
    assert!(ia.overlaps(&ib));
    let d = ia.sub(&ib);
    assert!(d.width_at_most(350));
}

#[test]
fn eta_lacunary_equals_morphic_word() {
    let mut w = builtin::nesterenko_word();
    let word = w.symbols(1001).to_vec();
    assert_eq!(eta_digits(1000), word[1..]);
    let x = RealSource::eta();
    assert_eq!(x.expand(3, 1000).unwrap().digits, word[1..]);
}

#[test]
fn sqrt2_digits_from_integer_sqrt() {
    let n = 500;
    let s = (BigUint::from(2u32) * BigUint::from(10u32).pow(2 * n as u32)).sqrt();
    let expect: Vec<u16> = s.to_string().bytes().skip(1).map(|b| (b - b'0') as u16).collect();
    assert_eq!(RealSource::sqrt(2).unwrap().expand(10, n).unwrap().digits, expect);
}
