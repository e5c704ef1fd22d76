//! Acceptance criteria. Each prints one PASS/FAIL line; the process exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use expansions::fixtures;
use expansions::{parse_source, parse_word};
use expansions_core::automata::{predicate_word, Dfao, Predicate};
use expansions_core::bbp::{star_discrepancy, BbpSpec};
use expansions_core::complexity::{complexity, find_patterns, find_patterns_in, PatternKind};
use expansions_core::contfrac::{irrationality_exponent_estimate, roy_check, ContinuedFraction, INV_PHI};
use expansions_core::fibonacci::{beatty_indices, fib_u64, rabbit, zeckendorf, BeattyKind, Rabbit};
use expansions_core::fpseries::{mahler_functional_check, mahler_product, ptm_series, verify_ptm_cubic};
use expansions_core::reals::{
    check_b_inequalities, eta_digits, liouville_witness, ones_growth_fit, rational_expansion, Precision, RealSource,
};
use expansions_core::words::{builtin, Symbol};
use num_bigint::{BigInt, BigUint};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Oracle = (&'static str, fn(u64) -> Symbol);
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn text(symbols: &[Symbol]) -> String {
    symbols.iter().map(|&s| char::from_digit(s as u32, 36).unwrap_or('?')).collect()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn golden_prefixes() -> Outcome {
    let sqrt2 = RealSource::sqrt(2).map_err(err)?;
    let dec = sqrt2.expand(10, 29).map_err(err)?;
    ensure(dec.integer == BigInt::from(1) && text(&dec.digits) == "41421356237309504880168872420", || {
        format!("sqrt(2) decimal {}", text(&dec.digits))
    })?;
    let bin = sqrt2.expand(2, 50).map_err(err)?;
    ensure(text(&bin.digits) == "01101010000010011110011001100111111100111011110011", || {
        format!("sqrt(2) binary {}", text(&bin.digits))
    })?;
    let cases = [
        ("dfao:ptm", "01101001100101101"),
        ("baum-sweet", "110110010100100110010"),
        ("paper-fold", "1101100111001001"),
        ("rudin-shapiro", "aaabaabaaaabbbab"),
        ("fib", "abaababaabaababaababaabaababaabaab"),
        ("copeland-erdos:10", "23571113171923"),
        ("dfao:powers2", "01101000100000001000"),
    ];
    for (spec, want) in cases {
        let got = parse_word(spec).map_err(err)?.prefix(want.chars().count()).to_string();
        ensure(got == want, || format!("{spec}: {got}"))?;
    }
    let ptm = builtin::thue_morse_word().prefix(17).to_string();
    ensure(ptm == "abbabaabbaababbab", || format!("morphic ptm {ptm}"))?;
    Ok(format!("{} words and both sqrt(2) expansions", cases.len()))
}

fn complexity_table() -> Outcome {
    let mut w = parse_word("powers2").map_err(err)?;
    let p = complexity(&mut w, 6, 1 << 12).map_err(err)?;
    ensure(p.counts == [2, 4, 6, 7, 9, 11], || format!("powers of 2: {:?}", p.counts))?;
    let mut f = builtin::fibonacci_word();
    let q = complexity(&mut f, 10, 1 << 12).map_err(err)?;
    ensure(q.counts.iter().enumerate().all(|(i, &c)| c == i + 2), || format!("fibonacci: {:?}", q.counts))?;
    Ok(format!("p = {:?}; fibonacci p(m) = m+1 for m <= 10", p.counts))
}

fn rational_period() -> Outcome {
    let r = rational_expansion(&BigUint::from(137_174_210u64), &BigUint::from(1_111_111_111u64), 10).map_err(err)?;
    ensure(r.preperiod.is_empty() && text(&r.period) == "1234567890", || {
        format!("preperiod {:?} period {}", r.preperiod, text(&r.period))
    })?;
    Ok("period 1234567890".into())
}

fn power_of_two(n: u64) -> Symbol {
    (n != 0 && n & (n - 1) == 0) as Symbol
}

fn popcount_parity(n: u64) -> Symbol {
    (n.count_ones() % 2) as Symbol
}

fn baum_sweet(n: u64) -> Symbol {
    let bits = format!("{n:b}");
    if n == 0 {
        return 1;
    }
    bits.split('1').all(|z| z.len() % 2 == 0) as Symbol
}

/// `u_n = a_{n+1}` where `a_m = 1` iff the odd part of `m` is `1 mod 4`.
fn paper_fold(n: u64) -> Symbol {
    let m = n + 1;
    ((m >> m.trailing_zeros()) % 4 == 1) as Symbol
}

fn rudin_shapiro_count(n: u64) -> Symbol {
    let bits = format!("{n:b}");
    (bits.as_bytes().windows(2).filter(|w| w == b"11").count() % 2) as Symbol
}

fn automata_oracles() -> Outcome {
    let n = 1usize << 16;
    let oracles: [Oracle; 4] =
        [("powers2", power_of_two), ("ptm", popcount_parity), ("baum_sweet", baum_sweet), ("paper_fold", paper_fold)];
    for (name, f) in oracles {
        let dfao = Dfao::builtin(name).map_err(err)?;
        let mut w = dfao.word();
        let got = w.symbols(n);
        if let Some(i) = (0..n).find(|&i| got[i] != f(i as u64)) {
            return Err(format!("{name} differs from its definition at n={i}"));
        }
        if let Some(i) = (0..n as u64).find(|&i| dfao.eval(i) != f(i)) {
            return Err(format!("{name} eval differs at n={i}"));
        }
    }
    for p in Predicate::ALL {
        if let Some(name) = p.automaton() {
            let mut a = Dfao::builtin(name).map_err(err)?.word();
            let mut b = predicate_word(p);
            ensure(a.symbols(n) == b.symbols(n), || format!("{name} vs {}", p.name()))?;
        }
    }
    let m = 1usize << 14;
    let mut rs = builtin::rudin_shapiro_word();
    let got = rs.symbols(m).to_vec();
    if let Some(i) = (0..m).find(|&i| got[i] != rudin_shapiro_count(i as u64)) {
        return Err(format!("rudin-shapiro morphic vs count differ at n={i}"));
    }
    let mut counted = predicate_word(Predicate::RudinShapiro11Count);
    ensure(counted.symbols(m) == &got[..], || "rudin-shapiro predicate stream".into())?;
    Ok(format!("4 automata on {n} positions, rudin-shapiro on {m}"))
}

fn ptm_trace() -> Outcome {
    let m = Dfao::builtin("ptm").map_err(err)?;
    let trace = m.trace(9);
    let digits: Vec<u32> = trace.iter().map(|s| s.digit).collect();
    let names: Vec<&str> =
        std::iter::once(trace[0].from).chain(trace.iter().map(|s| s.to)).map(|s| m.states()[s].as_str()).collect();
    ensure(digits == [1, 0, 0, 1], || format!("digits {digits:?}"))?;
    ensure(names == ["i", "a", "a", "a", "i"], || format!("states {names:?}"))?;
    ensure(m.eval(9) == 0, || "eval(9) != 0".into())?;
    Ok(format!("trace {}", names.join(" -> ")))
}

fn fibonacci_rabbits() -> Outcome {
    let z = zeckendorf(51).map_err(err)?;
    ensure(z.indices == [9, 7, 4, 2], || format!("zeckendorf(51) = {:?}", z.indices))?;
    ensure(rabbit(51).map_err(err)? == Rabbit::A, || "rabbit(51)".into())?;
    let phi = beatty_indices(BeattyKind::Phi, 10_000).map_err(err)?;
    ensure(phi[31] == 51, || format!("floor(32 phi) = {}", phi[31]))?;
    let rabbits: String = (1..=14)
        .map(|n| match rabbit(n) {
            Ok(Rabbit::A) => 'A',
            _ => 'Y',
        })
        .collect();
    ensure(rabbits == "AYAAYAYAAYAAYA", || format!("R_1..R_14 = {rabbits}"))?;
    for n in 1..=10_000u64 {
        let z = zeckendorf(n).map_err(err)?;
        ensure(z.value() == n && z.indices.windows(2).all(|w| w[0] >= w[1] + 2), || format!("zeckendorf({n})"))?;
    }
    let phi2 = beatty_indices(BeattyKind::PhiSquared, 10_000).map_err(err)?;
    let mut seen = vec![0u8; 10_001];
    for &v in phi.iter().chain(&phi2) {
        if v <= 10_000 {
            seen[v as usize] += 1;
        }
    }
    ensure(seen[1..].iter().all(|&c| c == 1), || "Beatty sequences do not partition 1..=10^4".into())?;
    ensure(fib_u64(10) == Some(55), || "F_10".into())?;
    Ok("zeckendorf(51) = {9,7,4,2}, R_51 = A, Beatty partition of 1..=10^4".into())
}

/// `atan(1/x) · 2^bits`, truncated.
fn atan_inv(x: u64, bits: u64) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut term = (BigInt::from(1) << bits) / BigInt::from(x);
    let mut sum = BigInt::from(0);
    let mut k = 0u64;
    while term > BigInt::from(0) {
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

fn bbp_checks() -> Outcome {
    let a = RealSource::bbp(BbpSpec::builtin("log2").map_err(err)?);
    let b = RealSource::bbp(BbpSpec::builtin("log2-b9").map_err(err)?);
    // 10^-100 < 2^-332.
    let (ia, ib) = (a.enclose(400).map_err(err)?, b.enclose(400).map_err(err)?);
    ensure(ia.overlaps(&ib) && ia.width_at_most(340) && ib.width_at_most(340), || "log2 formulas disagree".into())?;

    let bits = 4 * 110;
    let pi = atan_inv(5, bits) * 16 - atan_inv(239, bits) * 4;
    let frac: BigInt = &pi - (BigInt::from(3) << bits);
    let top = (frac >> (bits - 400)).to_biguint().ok_or("negative")?;
    let expect = format!("{top:0>100x}");
    let spec = BbpSpec::builtin("pi16").map_err(err)?;
    let (int, digits) = spec.eval_digits(100).map_err(err)?;
    let got: String = digits.iter().map(|&d| char::from_digit(d as u32, 16).unwrap_or('?')).collect();
    ensure(int == BigInt::from(3) && got == expect, || format!("pi hex {got}"))?;

    let reach = 2_000usize;
    let (_, long) = spec.eval_digits(reach + 8).map_err(err)?;
    let mut rng = StdRng::seed_from_u64(0x5eed_b8b9);
    for _ in 0..50 {
        let d = rng.random_range(1..=reach as u64);
        let got = spec.extract_digits(d, 6).map_err(err)?;
        let want = &long[d as usize - 1..d as usize + 5];
        ensure(got == want, || format!("extract at {d}: {got:?} vs {want:?}"))?;
    }
    Ok("log2 formulas within 2^-340; 100 hex digits of pi; 50 extractions".into())
}

fn orbit_checks() -> Outcome {
    let spec = BbpSpec::builtin("log2").map_err(err)?;
    let orbit = spec.orbit(10_000).map_err(err)?;
    let y = orbit.values();
    ensure(y[1] == 0.0 && y[2] == 0.5, || format!("y_1 = {}, y_2 = {}", y[1], y[2]))?;
    ensure(y.iter().all(|v| (0.0..1.0).contains(v)), || "orbit point outside [0,1)".into())?;
    let mut ds = Vec::new();
    for n in [100usize, 1_000, 10_000] {
        ds.push(star_discrepancy(&y[1..=n]).map_err(err)?);
    }
    ensure(ds[0] > ds[1] && ds[1] > ds[2], || format!("discrepancies {ds:?}"))?;
    Ok(format!("D* at 10^2, 10^3, 10^4 = {:.4}, {:.4}, {:.4}", ds[0], ds[1], ds[2]))
}

fn series_identities() -> Outcome {
    ensure(verify_ptm_cubic(4096), || "cubic fails mod X^4096".into())?;
    let f = ptm_series(8);
    ensure(f.coeffs() == [0, 1, 1, 0, 1, 0, 0, 1], || format!("ptm series {:?}", f.coeffs()))?;
    let m = mahler_product(2048);
    let mut ptm = Dfao::builtin("ptm").map_err(err)?.word();
    let a = ptm.symbols(2048);
    if let Some(i) = (0..2048).find(|&i| m.coeff(i) != 1 - 2 * a[i] as i64) {
        return Err(format!("mahler coefficient {i} = {}", m.coeff(i)));
    }
    ensure(mahler_functional_check(&m), || "f(z) != (1-z) f(z^2)".into())?;
    Ok("cubic mod X^4096, Mahler product mod z^2048".into())
}

fn pattern_census() -> Outcome {
    let mut ptm = parse_word("ptm").map_err(err)?;
    let overlaps = find_patterns(&mut ptm, PatternKind::Overlap, 10_000).map_err(err)?;
    ensure(overlaps.is_empty(), || format!("{} overlaps", overlaps.len()))?;
    let w: Vec<Symbol> = "01101001101001".bytes().map(|b| (b - b'0') as Symbol).collect();
    let hits = find_patterns_in(&w, PatternKind::Power { num: 7, den: 3 }).map_err(err)?;
    ensure(hits.iter().any(|h| h.start == 0 && h.root == Some(6) && h.len == 14), || format!("hits {hits:?}"))?;
    Ok("no overlaps in 10^4 symbols; 7/3-power with |W| = 6 found".into())
}

fn b_inequalities() -> Outcome {
    let x = RealSource::sqrt(2).map_err(err)?;
    let y = RealSource::sqrt(3).map_err(err)?;
    let r = check_b_inequalities(&x, &y, 1, 2000).map_err(err)?;
    let n0 = r.sum.n0.max(r.product.n0).max(r.reciprocal.n0);
    ensure(n0 <= 2000, || format!("n_0 = {n0}"))?;
    let fit = ones_growth_fit(&x, 10_000).map_err(err)?;
    ensure(fit.c > 0.0, || format!("C = {}", fit.c))?;
    Ok(format!(
        "n_0 = {n0} (sum {}, product {}, reciprocal {}); C = {:.4}",
        r.sum.n0, r.product.n0, r.reciprocal.n0, fit.c
    ))
}

fn liouville() -> Outcome {
    let cases = [(2u32, 3u64, 512u64, 801u64), (10, 2, 10_000, 11_001)];
    for (a, n, q, p) in cases {
        let w = liouville_witness(a, n).map_err(err)?;
        ensure(w.q == BigUint::from(q) && w.p == BigUint::from(p), || format!("({a},{n}): p={} q={}", w.p, w.q))?;
        ensure(w.holds, || format!("({a},{n}) inequality not certified"))?;
    }
    Ok("(2,3): 801/512, (10,2): 11001/10^4".into())
}

fn nesterenko() -> Outcome {
    let n = 1000;
    let mut word = vec![0 as Symbol];
    let mut k = 1;
    while word.len() <= n {
        word.push(1);
        word.extend(std::iter::repeat_n(2, k));
        k += 1;
    }
    let mut morphic = builtin::nesterenko_word();
    ensure(morphic.symbols(n + 1) == &word[..n + 1], || "morphic word".into())?;
    ensure(eta_digits(n) == word[1..=n], || "lacunary digits".into())?;
    let e = RealSource::eta().expand(3, n).map_err(err)?;
    ensure(e.digits == word[1..=n], || "certified expansion".into())?;
    Ok(format!("{n} base-3 digits"))
}

fn continued_fractions() -> Outcome {
    let mut phi = ContinuedFraction::expand(&RealSource::golden_ratio()).map_err(err)?;
    ensure(*phi.a0() == BigInt::from(1), || "phi a0".into())?;
    ensure(phi.quotients(100).map_err(err)?.iter().all(|a| *a == BigUint::from(1u32)), || "phi quotients".into())?;
    let mut s = ContinuedFraction::expand(&RealSource::sqrt(2).map_err(err)?).map_err(err)?;
    ensure(*s.a0() == BigInt::from(1), || "sqrt(2) a0".into())?;
    ensure(s.quotients(100).map_err(err)?.iter().all(|a| *a == BigUint::from(2u32)), || "sqrt(2) quotients".into())?;
    let c = s.convergents(100).map_err(err)?;
    for k in 1..c.len() {
        let det = &c[k].p * BigInt::from(c[k - 1].q.clone()) - &c[k - 1].p * BigInt::from(c[k].q.clone());
        let sign = if k % 2 == 1 { 1 } else { -1 };
        ensure(det == BigInt::from(sign), || format!("determinant at {k}"))?;
    }

    let roy = roy_report()?;

    let est = irrationality_exponent_estimate(&mut s, 50).map_err(err)?;
    let k50 = est.kappas.iter().find(|(k, _)| *k == 50).map(|&(_, v)| v).ok_or("no kappa_50")?;
    ensure((k50 - 2.0).abs() <= 0.01, || format!("kappa_50(sqrt 2) = {k50:.5}, |kappa - 2| > 0.01; {roy}"))?;
    Ok(format!("kappa_50 = {k50:.5}; {roy}"))
}

fn roy_report() -> Result<String, String> {
    let pinned = fixtures::load(&fixtures::fixtures_dir()).map_err(err)?.roy;
    let r = roy_check(pinned.a, pinned.b, &pinned.x_grid, pinned.precision_bits).map_err(err)?;
    let c = pinned.c_emp * (1.0 + 1e-12);
    for row in &r.rows {
        let bound = c * (row.x as f64).powf(-INV_PHI);
        ensure(row.s <= c, || format!("s({}) = {} above {}", row.x, row.s, pinned.c_emp))?;
        ensure((1..=row.x).contains(&row.best_x0) && row.distance <= bound, || {
            format!("no solution at X = {}", row.x)
        })?;
    }
    Ok(format!("roy s(X) <= {:.6} at {} grid points", pinned.c_emp, r.rows.len()))
}

fn certification() -> Outcome {
    let sources = [
        "sqrt:2",
        "sqrt:7",
        "phi",
        "eta",
        "quad:1,1,13,3",
        "lacunary:n!@3",
        "lacunary:n^2@2",
        "bbp:pi16",
        "bbp:log2",
        "bbp:log3",
        "const:zeta3",
        "const:pi",
        "champernowne:10",
        "copeland-erdos:2",
        "stoneham:2,3",
        "mul:3:sqrt:5",
        "div:1:sqrt:3",
        "sum(sqrt:2;sqrt:3)",
        "prod(phi;sqrt:2)",
        "cf:fib:1,2",
    ];
    let mut rng = StdRng::seed_from_u64(0xce27);
    let policy = Precision::default();
    for _ in 0..100 {
        let spec = sources[rng.random_range(0..sources.len())];
        let g = rng.random_range(2..=16u32);
        let n = rng.random_range(1..=300usize);
        let x = parse_source(spec).map_err(err)?;
        let start = (n as f64 * (g as f64).log2()).ceil() as u64 + 16;
        let a = x.expand_certified(g, n, start, policy).map_err(|e| format!("{spec} base {g} n {n}: {e}"))?;
        let b = x.expand_certified(g, n, 2 * start, policy).map_err(|e| format!("{spec} base {g} n {n}: {e}"))?;
        ensure(a == b, || format!("{spec} base {g} n {n} changed with precision"))?;
        let c = x.expand(g, n).map_err(err)?;
        ensure(a == c, || format!("{spec} base {g} n {n} differs from expand"))?;
    }
    Ok("100 queries stable under doubled precision".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 15] = [
        ("golden prefixes", 1, golden_prefixes),
        ("complexity table", 5, complexity_table),
        ("rational period", 1, rational_period),
        ("automata vs definitions", 30, automata_oracles),
        ("ptm trace", 1, ptm_trace),
        ("zeckendorf, rabbits, Beatty", 5, fibonacci_rabbits),
        ("bbp formulas", 30, bbp_checks),
        ("orbit and discrepancy", 30, orbit_checks),
        ("series identities", 10, series_identities),
        ("pattern census", 5, pattern_census),
        ("B(x,n) inequalities", 60, b_inequalities),
        ("Liouville witness", 1, liouville),
        ("Nesterenko eta", 5, nesterenko),
        ("continued fractions", 60, continued_fractions),
        ("certification", 60, certification),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let dt = t.elapsed();
        let outcome = match outcome {
            Ok(msg) if dt > Duration::from_secs(limit) => Err(format!("{msg}; took {dt:.2?} over {limit} s")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("criterion {}: PASS {name} ({msg}; {dt:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({msg}; {dt:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
