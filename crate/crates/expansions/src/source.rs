//! Textual descriptors for real numbers and infinite words.
//!
//! Reals: `rational:P/Q`, `sqrt:D`, `quad:A,B,D,C` (`(A + B√D)/C`), `phi`,
//! `lacunary:SEQ[@G]`, `bbp:NAME`, `const:NAME`, `eta`, `champernowne:G`,
//! `stoneham:A,G`, `copeland-erdos:G`, `mul:M:SRC`, `div:A:SRC`,
//! `word:WORD@G`, `cf:WORD:V0,V1,…`, `sum(A;B)`, `prod(A;B)`.
//!
//! Words: `fib`, `ptm`, `nesterenko`, `rudin-shapiro`, `powers2`,
//! `baum-sweet`, `paper-fold`, `dfao:NAME`, `const:LETTER`,
//! `champernowne:G`, `copeland-erdos:G`, `digits:SRC@G`.

use std::sync::Arc;

use expansions_core::automata::Dfao;
use expansions_core::bbp::BbpSpec;
use expansions_core::constants::Constant;
use expansions_core::constructions::{
    champernowne, champernowne_word, copeland_erdos, copeland_erdos_word, korobov_stoneham,
};
use expansions_core::reals::{digit_stream, ExponentSeq, RealError, RealSource, StreamFactory};
use expansions_core::words::{builtin, Alphabet, WordStream};
use num_bigint::{BigInt, BigUint};

#[derive(Debug, thiserror::Error)]
pub enum DescriptorError {
    #[error("unknown descriptor `{0}`")]
    Unknown(String),
    #[error("malformed descriptor `{0}`: {1}")]
    Malformed(String, String),
    #[error(transparent)]
    Real(#[from] RealError),
}

fn bad(d: &str, why: impl Into<String>) -> DescriptorError {
    DescriptorError::Malformed(d.to_string(), why.into())
}

fn num<T: std::str::FromStr>(d: &str, s: &str) -> Result<T, DescriptorError> {
    s.trim().parse().map_err(|_| bad(d, format!("`{s}` is not a number")))
}

/// Splits `BODY@G` into the body and an optional base.
fn split_base<'a>(d: &str, s: &'a str) -> Result<(&'a str, Option<u32>), DescriptorError> {
    match s.rsplit_once('@') {
        Some((body, g)) => Ok((body, Some(num(d, g)?))),
        None => Ok((s, None)),
    }
}

pub fn parse_exponents(d: &str, s: &str) -> Result<ExponentSeq, DescriptorError> {
    Ok(match s {
        "n!" => ExponentSeq::Factorial,
        "n^2" => ExponentSeq::Squares,
        "tri" => ExponentSeq::Triangular,
        "fib" => ExponentSeq::Fibonacci,
        _ => {
            if let Some(b) = s.strip_suffix("^n") {
                let b: u64 = num(d, b)?;
                if b < 2 {
                    return Err(bad(d, "power base must be at least 2"));
                }
                ExponentSeq::Powers(b)
            } else if let Some(list) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                let v: Vec<u64> = list.split(',').map(|e| num(d, e)).collect::<Result<_, _>>()?;
                if v.is_empty() || v.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(bad(d, "exponent list must be strictly increasing"));
                }
                ExponentSeq::Explicit(Arc::new(v))
            } else {
                return Err(bad(d, format!("unknown exponent sequence `{s}`")));
            }
        }
    })
}

fn parse_constant(d: &str, s: &str) -> Result<Constant, DescriptorError> {
    Ok(match s {
        "pi" => Constant::Pi,
        "pi^2" | "pi2" => Constant::PiSquared,
        "log2" => Constant::Log2,
        "log2^2" | "log2sq" => Constant::Log2Squared,
        "zeta3" => Constant::Zeta3,
        _ => return Err(bad(d, format!("unknown constant `{s}`"))),
    })
}

pub fn parse_source(d: &str) -> Result<RealSource, DescriptorError> {
    let d = d.trim();
    if d == "phi" {
        return Ok(RealSource::golden_ratio());
    }
    if d == "eta" {
        return Ok(RealSource::eta());
    }
    for (head, combine) in
        [("sum(", RealSource::sum as fn(&RealSource, &RealSource) -> RealSource), ("prod(", RealSource::product)]
    {
        if let Some(inner) = d.strip_prefix(head).and_then(|r| r.strip_suffix(')')) {
            let (a, b) = split_top_level(inner).ok_or_else(|| bad(d, "expected (A;B)"))?;
            return Ok(combine(&parse_source(a)?, &parse_source(b)?));
        }
    }
    let (kind, rest) = d.split_once(':').ok_or_else(|| DescriptorError::Unknown(d.to_string()))?;
    Ok(match kind {
        "rational" => {
            let (p, q) = rest.split_once('/').ok_or_else(|| bad(d, "expected P/Q"))?;
            RealSource::rational(num::<BigInt>(d, p)?, num::<BigInt>(d, q)?)?
        }
        "sqrt" => RealSource::sqrt(num(d, rest)?)?,
        "quad" => {
            let parts: Vec<&str> = rest.split(',').collect();
            let [a, b, r, c] = parts[..] else {
                return Err(bad(d, "expected A,B,D,C"));
            };
            RealSource::quadratic(
                num::<BigInt>(d, a)?,
                num::<BigInt>(d, b)?,
                num::<BigUint>(d, r)?,
                num::<BigInt>(d, c)?,
            )?
        }
        "lacunary" => {
            let (seq, g) = split_base(d, rest)?;
            RealSource::lacunary(g.unwrap_or(2), parse_exponents(d, seq)?)?
        }
        "bbp" => RealSource::bbp(BbpSpec::builtin(rest).map_err(|e| bad(d, e.to_string()))?),
        "const" => RealSource::constant(parse_constant(d, rest)?),
        "champernowne" => champernowne(num(d, rest)?)?,
        "copeland-erdos" => copeland_erdos(num(d, rest)?)?,
        "stoneham" => {
            let (a, g) = rest.split_once(',').ok_or_else(|| bad(d, "expected A,G"))?;
            korobov_stoneham(num(d, a)?, num(d, g)?)?
        }
        "mul" => {
            let (m, inner) = rest.split_once(':').ok_or_else(|| bad(d, "expected M:SRC"))?;
            RealSource::scaled(num::<BigInt>(d, m)?, &parse_source(inner)?)
        }
        "div" => {
            let (a, inner) = rest.split_once(':').ok_or_else(|| bad(d, "expected A:SRC"))?;
            RealSource::quotient(num::<BigInt>(d, a)?, &parse_source(inner)?)
        }
        "word" => {
            let (spec, g) = split_base(d, rest)?;
            let g = g.ok_or_else(|| bad(d, "expected WORD@G"))?;
            let spec = spec.to_string();
            let probe = parse_word(&spec)?;
            if probe.alphabet().len() > g as usize {
                return Err(bad(d, format!("word has {} letters, base {g} too small", probe.alphabet().len())));
            }
            let factory: StreamFactory = Arc::new(move || parse_word(&spec).expect("validated above"));
            RealSource::digit_word(g, d.to_string(), factory)?
        }
        "cf" => {
            let (spec, values) = rest.rsplit_once(':').ok_or_else(|| bad(d, "expected WORD:V0,V1,…"))?;
            let values: Vec<u64> = values.split(',').map(|v| num(d, v)).collect::<Result<_, _>>()?;
            let spec = spec.to_string();
            let probe = parse_word(&spec)?;
            if probe.alphabet().len() > values.len() {
                return Err(bad(d, "one partial quotient per letter is required"));
            }
            let factory: StreamFactory = Arc::new(move || parse_word(&spec).expect("validated above"));
            RealSource::word_continued_fraction(d.to_string(), factory, values)?
        }
        _ => return Err(DescriptorError::Unknown(d.to_string())),
    })
}

/// Splits `A;B` at the `;` not nested inside parentheses.
fn split_top_level(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

pub fn parse_word(d: &str) -> Result<WordStream, DescriptorError> {
    let d = d.trim();
    let dfao = |name: &str| -> Result<WordStream, DescriptorError> {
        Ok(Dfao::builtin(name).map_err(|e| bad(d, e.to_string()))?.word())
    };
    Ok(match d {
        "fib" => builtin::fibonacci_word(),
        "ptm" => builtin::thue_morse_word(),
        "nesterenko" => builtin::nesterenko_word(),
        "rudin-shapiro" => builtin::rudin_shapiro_word(),
        // The characteristic word of the powers of two read from n = 1,
        // i.e. the binary digits of Σ 2^-(2^n).
        "powers2" => dfao("powers2")?.skip(1),
        "baum-sweet" => dfao("baum_sweet")?,
        "paper-fold" => dfao("paper_fold")?,
        _ => {
            let (kind, rest) = d.split_once(':').ok_or_else(|| DescriptorError::Unknown(d.to_string()))?;
            match kind {
                "dfao" => dfao(rest)?,
                "const" => {
                    let alpha = Arc::new(Alphabet::new([rest]).map_err(|e| bad(d, e.to_string()))?);
                    WordStream::from_fn(alpha, |_| 0)
                }
                "champernowne" => champernowne_word(base_arg(d, rest)?),
                "copeland-erdos" => copeland_erdos_word(base_arg(d, rest)?),
                "digits" => {
                    let (src, g) = split_base(d, rest)?;
                    digit_stream(&parse_source(src)?, g.unwrap_or(10))?
                }
                _ => return Err(DescriptorError::Unknown(d.to_string())),
            }
        }
    })
}

fn base_arg(d: &str, s: &str) -> Result<u32, DescriptorError> {
    let g: u32 = num(d, s)?;
    if g < 2 {
        return Err(bad(d, "base must be at least 2"));
    }
    Ok(g)
}
