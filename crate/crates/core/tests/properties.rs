use std::sync::Arc;

use expansions_core::complexity::complexity_of;
use expansions_core::contfrac::{convergent_gap_holds, ContinuedFraction};
use expansions_core::fibonacci::{beatty_indices, fib_u64, zeckendorf, BeattyKind};
use expansions_core::interval::bits_for_digits;
use expansions_core::reals::{ones_count, rational_expansion, ExponentSeq, Precision, RealSource};
use expansions_core::words::{Alphabet, Word};
use num_bigint::{BigInt, BigUint};
use num_traits::One;
use proptest::prelude::*;

fn non_square() -> impl Strategy<Value = u64> {
    (2u64..5000).prop_filter("square", |d| {
        let r = (*d as f64).sqrt() as u64;
        r * r != *d && (r + 1) * (r + 1) != *d
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn doubling_precision_keeps_digits(d in non_square(), g in 2u32..17, n in 1usize..300) {
        let x = RealSource::sqrt(d).unwrap();
        let bits = bits_for_digits(g, n as u64) + 64;
        let a = x.expand_certified(g, n, bits, Precision::default()).unwrap();
        let b = x.expand_certified(g, n, 2 * bits, Precision::default()).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a, x.expand(g, n).unwrap());
    }

    #[test]
    fn composite_sources_certify(a in 1i64..50, d in non_square(), g in 2u32..11, n in 1usize..120) {
        let x = RealSource::sum(&RealSource::sqrt(d).unwrap(), &RealSource::rational(a, 7).unwrap());
        let bits = bits_for_digits(g, n as u64) + 64;
        let e1 = x.expand_certified(g, n, bits, Precision::default()).unwrap();
        let e2 = x.expand_certified(g, n, 2 * bits, Precision::default()).unwrap();
        prop_assert_eq!(e1, e2);
    }

    #[test]
    fn rational_round_trip(p in 0u64..1_000_000, q in 1u64..100_000, g in 2u32..37) {
        let r = rational_expansion(&BigUint::from(p), &BigUint::from(q), g).unwrap();
        let (num, den) = r.resum();
        prop_assert_eq!(num * BigInt::from(q), den * BigInt::from(p));
        // The certified route agrees with the exact expansion.
        let x = RealSource::rational(p, q).unwrap();
        let e = x.expand(g, 40).unwrap();
        prop_assert_eq!(e.digits, r.prefix(40));
    }

    #[test]
    fn powers_of_two_ones_count(n in 1usize..4000) {
        let x = RealSource::lacunary(2, ExponentSeq::Powers(2)).unwrap();
        let expect = (usize::BITS - n.leading_zeros()) as usize;
        prop_assert_eq!(ones_count(&x, n).unwrap(), expect);
    }

    #[test]
    fn complexity_bounds(symbols in proptest::collection::vec(0u16..3, 12..400), m in 1usize..6) {
        let w = Word::new(Arc::new(Alphabet::digits(3)), symbols.clone()).unwrap();
        let prof = complexity_of(w.symbols(), 2 * m).unwrap();
        let len = symbols.len();
        for k in 1..=2 * m {
            prop_assert!(prof.p(k) <= 3usize.pow(k as u32));
            prop_assert!(prof.p(k) <= (len + 1).saturating_sub(k));
        }
        prop_assert!(prof.p(2 * m) <= prof.p(m) * prof.p(m));
    }

    #[test]
    fn zeckendorf_is_valid(n in 1u64..u64::MAX / 2) {
        let z = zeckendorf(n).unwrap();
        prop_assert_eq!(z.value(), n);
        prop_assert!(z.indices.iter().all(|&k| k >= 2));
        prop_assert!(z.indices.windows(2).all(|w| w[0] >= w[1] + 2));
    }

    #[test]
    fn continued_fraction_determinant(d in non_square(), n in 2usize..60) {
        let x = RealSource::sqrt(d).unwrap();
        let mut cf = ContinuedFraction::expand(&x).unwrap();
        let c = cf.convergents(n).unwrap();
        for k in 1..=n {
            let det = &c[k].p * BigInt::from(c[k - 1].q.clone()) - &c[k - 1].p * BigInt::from(c[k].q.clone());
            let sign = if k % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(det, sign);
            prop_assert!(c[k].q > c[k - 1].q || k == 1);
        }
        for k in 0..n {
            prop_assert!(convergent_gap_holds(&x, &c[k], &c[k + 1].q).unwrap());
        }
    }
}

#[test]
fn beatty_sequences_partition() {
    let n = 10_000u64;
    let a = beatty_indices(BeattyKind::Phi, n).unwrap();
    let b = beatty_indices(BeattyKind::PhiSquared, n).unwrap();
    let mut seen = vec![0u8; n as usize + 1];
    for v in a.iter().chain(&b).filter(|&&v| v <= n) {
        seen[*v as usize] += 1;
    }
    assert!(seen[1..].iter().all(|&c| c == 1));
    // ⌊kΦ²⌋ = ⌊kΦ⌋ + k.
    assert!(a.iter().zip(&b).enumerate().all(|(k, (x, y))| *y == x + k as u64 + 1));
}

#[test]
fn fibonacci_table_edges() {
    assert_eq!(fib_u64(93), Some(12_200_160_415_121_876_738));
    assert_eq!(fib_u64(94), None);
}
