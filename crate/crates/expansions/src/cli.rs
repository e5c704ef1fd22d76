//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use expansions_core::automata::{Dfao, DigitOrder};
use expansions_core::bbp::{star_discrepancy, BbpError, BbpSpec};
use expansions_core::complexity::{complexity, find_patterns, find_patterns_in, is_sturmian_up_to, PatternKind};
use expansions_core::contfrac::{
    irrationality_exponent_estimate, log_grid, roy_check, ContFracError, ContinuedFraction,
};
use expansions_core::fibonacci::{beatty_indices, rabbit, zeckendorf, BeattyKind, FibError, Rabbit};
use expansions_core::fpseries::{mahler_functional_check, mahler_product, ptm_series, verify_ptm_cubic};
use expansions_core::reals::{normality_of_digits, Precision, RealError};
use expansions_core::words::{builtin, Alphabet, Word, WordStream};

use crate::fixtures;
use crate::formats::{BbpJson, DfaoJson, MorphismJson};
use crate::source::{parse_source, parse_word, DescriptorError};
use crate::table::{Cell, Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "expansions", version, about = "Digit expansions, automatic words and continued fractions")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
    /// Working-precision ceiling in bits for certified digits and quotients.
    #[arg(long, default_value_t = Precision::default().ceiling_bits, global = true)]
    pub max_bits: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prefix of a fixed point, morphic word or named word.
    Word(WordArgs),
    /// Automata with output: evaluate, list the output word, export JSON.
    #[command(subcommand)]
    Automaton(AutomatonCmd),
    /// Subword complexity p(1..M) over a prefix.
    Complexity(ComplexityArgs),
    /// Zeckendorf representations, rabbit sequence, Beatty sequences.
    #[command(subcommand)]
    Fib(FibCmd),
    /// Certified digits of a real number in one or more bases.
    Digits(DigitsArgs),
    /// Block frequencies of the digits of a real number.
    Normality(NormalityArgs),
    /// BBP-type series: digits, digit extraction, orbits.
    #[command(subcommand)]
    Bbp(BbpCmd),
    /// Truncated power series identities.
    #[command(subcommand)]
    Fpseries(FpCmd),
    /// Continued fractions.
    #[command(subcommand)]
    Cf(CfCmd),
    /// Squares, overlaps, fractional powers and palindromes in a word.
    Patterns(PatternArgs),
    /// Pinned empirical constants.
    #[command(subcommand)]
    Fixtures(FixtureCmd),
}

#[derive(Debug, Args)]
pub struct WordArgs {
    /// fib, ptm, nesterenko, rudin-shapiro, or a morphism JSON file.
    #[arg(long, conflicts_with = "spec")]
    pub morphism: Option<String>,
    /// Starting letter of the fixed point (default: first source letter).
    #[arg(long, requires = "morphism")]
    pub letter: Option<String>,
    /// Any word descriptor.
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long)]
    pub prefix: usize,
}

#[derive(Debug, Args)]
pub struct AutomatonSel {
    /// Builtin automaton: powers2, ptm, baum_sweet, paper_fold.
    #[arg(long, conflicts_with = "file")]
    pub name: Option<String>,
    /// Automaton JSON file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum AutomatonCmd {
    /// Output at n, optionally with the state trace.
    Eval {
        #[command(flatten)]
        sel: AutomatonSel,
        #[arg(long)]
        n: u64,
        /// Read digits most significant first.
        #[arg(long)]
        msd: bool,
        /// Print every transition taken.
        #[arg(long)]
        trace: bool,
    },
    /// Prefix of the output word a_0 a_1 ….
    Word {
        #[command(flatten)]
        sel: AutomatonSel,
        #[arg(long)]
        prefix: usize,
    },
    /// The automaton as JSON.
    Export {
        #[command(flatten)]
        sel: AutomatonSel,
    },
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    #[arg(long)]
    pub word: String,
    #[arg(long)]
    pub max_m: usize,
    #[arg(long)]
    pub horizon: usize,
    /// Also list right-special factors and test p(m) = m + 1.
    #[arg(long)]
    pub sturmian: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BeattyArg {
    Phi,
    Phi2,
}

#[derive(Debug, Subcommand)]
pub enum FibCmd {
    /// Fibonacci indices of the Zeckendorf representation of N.
    Zeckendorf { n: u64 },
    /// R_N of the rabbit sequence.
    Rabbit {
        n: u64,
        /// Print R_1 … R_n instead of R_n alone.
        #[arg(long)]
        all: bool,
    },
    /// ⌊kΦ⌋ or ⌊kΦ²⌋ for k = 1..count.
    Beatty {
        #[arg(long, value_enum)]
        kind: BeattyArg,
        #[arg(long)]
        count: u64,
    },
}

#[derive(Debug, Args)]
pub struct DigitsArgs {
    #[arg(long)]
    pub source: String,
    /// One base, or several separated by commas.
    #[arg(long, value_delimiter = ',', required = true)]
    pub base: Vec<u32>,
    #[arg(long)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct NormalityArgs {
    #[arg(long)]
    pub source: String,
    #[arg(long, default_value_t = 10)]
    pub base: u32,
    #[arg(long, default_value_t = 1)]
    pub block_len: usize,
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    /// Largest tolerated |frequency − g^-m|.
    #[arg(long, default_value_t = 0.01)]
    pub threshold: f64,
    /// One row per block value instead of the summary.
    #[arg(long)]
    pub blocks: bool,
}

#[derive(Debug, Args)]
pub struct BbpSel {
    /// Catalog name: log2, log2-b9, log3, pi16, pi2-b64, pi2-b81, log2sq-b64, zeta3-b4096.
    #[arg(long, conflicts_with = "file")]
    pub spec: Option<String>,
    /// BBP JSON file `{g, start, terms: [{c, k, m}]}`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum BbpCmd {
    /// Integer part and certified fractional digits.
    Eval {
        #[command(flatten)]
        sel: BbpSel,
        #[arg(long)]
        count: usize,
    },
    /// Digits from a position, without the earlier ones.
    Digit {
        #[command(flatten)]
        sel: BbpSel,
        /// 1-based position of the first digit.
        #[arg(long)]
        position: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Orbit y_0..y_count of the digit recurrence.
    Orbit {
        #[command(flatten)]
        sel: BbpSel,
        #[arg(long)]
        count: usize,
        /// Print the star discrepancy of y_1..y_count instead of the points.
        #[arg(long)]
        discrepancy: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum FpCmd {
    /// Checks the cubic over F_2 for the Thue–Morse series.
    VerifyPtm {
        #[arg(long)]
        order: usize,
    },
    /// Coefficients of Π (1 − z^(2^k)) and its functional equation.
    Mahler {
        #[arg(long)]
        order: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CfCmd {
    /// Partial quotients and convergents of a real number.
    Expand {
        #[arg(long)]
        source: String,
        #[arg(long)]
        terms: usize,
    },
    /// Continued fraction whose quotients are read off a word.
    FromWord {
        #[arg(long, default_value = "fib")]
        word: String,
        #[arg(long = "A")]
        a: u64,
        #[arg(long = "B")]
        b: u64,
        #[arg(long)]
        terms: usize,
    },
    /// κ_k = 1 + ln q_(k+1) / ln q_k.
    Exponent {
        #[arg(long)]
        source: String,
        #[arg(long)]
        terms: usize,
    },
    /// Simultaneous approximation statistic s(X) over a log grid.
    Roy {
        #[arg(long = "A", default_value_t = 1)]
        a: u64,
        #[arg(long = "B", default_value_t = 2)]
        b: u64,
        #[arg(long, default_value_t = 10)]
        xmin: u64,
        #[arg(long, default_value_t = 10_000)]
        xmax: u64,
        #[arg(long, default_value_t = 4)]
        per_decade: u32,
        #[arg(long, default_value_t = 128)]
        precision: u64,
    },
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    #[arg(long, conflicts_with = "literal")]
    pub word: Option<String>,
    /// A literal finite word; its alphabet is its sorted set of characters.
    #[arg(long)]
    pub literal: Option<String>,
    /// square, overlap, palindrome or power:NUM/DEN.
    #[arg(long)]
    pub kind: String,
    #[arg(long, default_value_t = 10_000)]
    pub horizon: usize,
}

#[derive(Debug, Subcommand)]
pub enum FixtureCmd {
    /// Recompute and write the pinned constants.
    Pin,
    /// Recompute and compare with the pinned constants.
    Check,
}

/// Command output before formatting.
enum Output {
    Text(String),
    Table(Table),
    Json(serde_json::Value),
}

impl Output {
    fn render(self, format: Format) -> String {
        match self {
            Output::Text(s) => match format {
                Format::Csv => format!("{s}\n"),
                Format::Json => format!("{}\n", serde_json::json!({ "value": s })),
                Format::Svg => {
                    let mut t = Table::new(["value"]);
                    t.push(vec![Cell::Text(s)]);
                    t.svg()
                }
            },
            Output::Table(t) => t.render(format),
            Output::Json(v) => format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")),
        }
    }
}

/// Marks an error as caused by bad arguments.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct Usage(pub String);

/// Runs the tool on `args` (including the program name), writing the
/// artifact to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let policy = Precision { ceiling_bits: cli.max_bits, ..Precision::default() };
    match execute(cli.command, policy) {
        Ok(o) => match out.write_all(o.render(cli.format).as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_FAILURE
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}

/// Maps an error to its exit code.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    fn real(r: &RealError) -> i32 {
        match r {
            RealError::PrecisionCeiling(_) | RealError::Bbp(BbpError::PrecisionCeiling(_)) => EXIT_PRECISION,
            _ => EXIT_USAGE,
        }
    }
    if let Some(r) = e.downcast_ref::<RealError>() {
        return real(r);
    }
    if let Some(d) = e.downcast_ref::<DescriptorError>() {
        return match d {
            DescriptorError::Real(r) => real(r),
            _ => EXIT_USAGE,
        };
    }
    if let Some(b) = e.downcast_ref::<BbpError>() {
        return if matches!(b, BbpError::PrecisionCeiling(_)) { EXIT_PRECISION } else { EXIT_USAGE };
    }
    if let Some(c) = e.downcast_ref::<ContFracError>() {
        return match c {
            ContFracError::Real(r) => real(r),
            _ => EXIT_USAGE,
        };
    }
    if let Some(f) = e.downcast_ref::<FibError>() {
        return match f {
            FibError::Real(r) => real(r),
            FibError::Zero => EXIT_USAGE,
        };
    }
    if e.downcast_ref::<std::io::Error>().is_some() || e.downcast_ref::<FixtureMismatch>().is_some() {
        return EXIT_FAILURE;
    }
    EXIT_USAGE
}

#[derive(Debug, thiserror::Error)]
#[error("pinned fixtures disagree: {0}")]
pub struct FixtureMismatch(String);

fn execute(cmd: Command, policy: Precision) -> anyhow::Result<Output> {
    match cmd {
        Command::Word(a) => word_cmd(a),
        Command::Automaton(c) => automaton_cmd(c),
        Command::Complexity(a) => complexity_cmd(a),
        Command::Fib(c) => fib_cmd(c),
        Command::Digits(a) => digits_cmd(a, policy),
        Command::Normality(a) => normality_cmd(a, policy),
        Command::Bbp(c) => bbp_cmd(c),
        Command::Fpseries(c) => fp_cmd(c),
        Command::Cf(c) => cf_cmd(c, policy),
        Command::Patterns(a) => patterns_cmd(a),
        Command::Fixtures(c) => fixtures_cmd(c),
    }
}

fn word_cmd(a: WordArgs) -> anyhow::Result<Output> {
    let mut stream = match (&a.morphism, &a.spec) {
        (Some(m), _) => morphism_stream(m, a.letter.as_deref())?,
        (None, Some(s)) => parse_word(s)?,
        (None, None) => bail!(Usage("one of --morphism or --spec is required".into())),
    };
    Ok(Output::Text(stream.prefix(a.prefix).to_string()))
}

fn morphism_stream(name: &str, letter: Option<&str>) -> anyhow::Result<WordStream> {
    let m = match name {
        "fib" => builtin::fibonacci_morphism(),
        "ptm" => builtin::thue_morse_morphism(),
        "nesterenko" => builtin::nesterenko_morphism(),
        "rudin-shapiro" => {
            if letter.is_some() {
                bail!(Usage("rudin-shapiro is a morphic image; --letter does not apply".into()));
            }
            return Ok(builtin::rudin_shapiro_word());
        }
        path => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading morphism {path}"))?;
            let j: MorphismJson = serde_json::from_str(&text).map_err(|e| Usage(format!("{path}: {e}")))?;
            j.to_morphism().map_err(|e| Usage(e.to_string()))?
        }
    };
    let start = letter.map(str::to_string).unwrap_or_else(|| m.source().glyphs()[0].clone());
    m.fixed_point_from(&start).map_err(|e| Usage(e.to_string()).into())
}

fn load_dfao(sel: &AutomatonSel) -> anyhow::Result<Dfao> {
    match (&sel.name, &sel.file) {
        (Some(n), _) => Dfao::builtin(n).map_err(|e| Usage(e.to_string()).into()),
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let j: DfaoJson = serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", p.display())))?;
            j.to_dfao().map_err(|e| Usage(e.to_string()).into())
        }
        (None, None) => bail!(Usage("one of --name or --file is required".into())),
    }
}

fn automaton_cmd(c: AutomatonCmd) -> anyhow::Result<Output> {
    match c {
        AutomatonCmd::Eval { sel, n, msd, trace } => {
            let a = load_dfao(&sel)?;
            let order = if msd { DigitOrder::MsdFirst } else { DigitOrder::LsdFirst };
            let value = a.output_alphabet().glyph(a.eval_with(n, order)).to_string();
            if !trace {
                return Ok(Output::Text(value));
            }
            if msd {
                bail!(Usage("--trace follows the least-significant-first reading".into()));
            }
            let mut t = Table::new(["step", "digit", "from", "to", "output"]);
            for (i, s) in a.trace(n).iter().enumerate() {
                t.push(vec![
                    (i + 1).into(),
                    s.digit.into(),
                    a.states()[s.from].clone().into(),
                    a.states()[s.to].clone().into(),
                    a.output_alphabet().glyph(a.output(s.to)).into(),
                ]);
            }
            Ok(Output::Table(t))
        }
        AutomatonCmd::Word { sel, prefix } => Ok(Output::Text(load_dfao(&sel)?.word().prefix(prefix).to_string())),
        AutomatonCmd::Export { sel } => Ok(Output::Json(serde_json::to_value(DfaoJson::from_dfao(&load_dfao(&sel)?))?)),
    }
}

fn complexity_cmd(a: ComplexityArgs) -> anyhow::Result<Output> {
    let mut w = parse_word(&a.word)?;
    if !a.sturmian {
        let prof = complexity(&mut w, a.max_m, a.horizon).map_err(|e| Usage(e.to_string()))?;
        let mut t = Table::new((1..=a.max_m).map(|m| format!("p({m})")));
        t.push(prof.counts.iter().map(|&c| c.into()).collect());
        return Ok(Output::Table(t));
    }
    let census = is_sturmian_up_to(&mut w, a.max_m, a.horizon).map_err(|e| Usage(e.to_string()))?;
    let alpha = w.alphabet().clone();
    let mut t = Table::new(["m", "p", "m_plus_1", "right_special"]);
    for m in 1..=a.max_m {
        let rs: Vec<String> = census.right_special[m - 1].iter().map(|v| alpha.render(v)).collect();
        t.push(vec![
            m.into(),
            census.counts[m - 1].into(),
            (census.counts[m - 1] == m + 1).into(),
            rs.join(" ").into(),
        ]);
    }
    Ok(Output::Table(t))
}

fn fib_cmd(c: FibCmd) -> anyhow::Result<Output> {
    match c {
        FibCmd::Zeckendorf { n } => {
            let z = zeckendorf(n)?;
            let mut t = Table::new(["n", "indices", "smallest", "rabbit"]);
            let idx: Vec<String> = z.indices.iter().map(u32::to_string).collect();
            let r = if z.smallest_index() % 2 == 0 { "A" } else { "Y" };
            t.push(vec![n.into(), idx.join(" ").into(), z.smallest_index().into(), r.into()]);
            Ok(Output::Table(t))
        }
        FibCmd::Rabbit { n, all } => {
            let glyph = |k| -> anyhow::Result<&'static str> {
                Ok(match rabbit(k)? {
                    Rabbit::A => "A",
                    Rabbit::Y => "Y",
                })
            };
            if all {
                let s = (1..=n).map(glyph).collect::<anyhow::Result<String>>()?;
                Ok(Output::Text(s))
            } else {
                Ok(Output::Text(glyph(n)?.to_string()))
            }
        }
        FibCmd::Beatty { kind, count } => {
            let k = match kind {
                BeattyArg::Phi => BeattyKind::Phi,
                BeattyArg::Phi2 => BeattyKind::PhiSquared,
            };
            let v = beatty_indices(k, count)?;
            let mut t = Table::new(["k", "floor"]);
            for (i, x) in v.into_iter().enumerate() {
                t.push(vec![(i + 1).into(), x.into()]);
            }
            Ok(Output::Table(t))
        }
    }
}

fn digits_cmd(a: DigitsArgs, policy: Precision) -> anyhow::Result<Output> {
    let x = parse_source(&a.source)?;
    let mut t = Table::new(["base", "integer", "digits"]);
    let mut texts = Vec::new();
    for &g in &a.base {
        let e = x.expand_with(g, a.count, policy)?;
        let digits = e.word().to_string();
        texts.push(format!("{}.{}", e.integer, digits));
        t.push(vec![g.into(), e.integer.into(), digits.into()]);
    }
    Ok(if texts.len() == 1 { Output::Text(texts.remove(0)) } else { Output::Table(t) })
}

fn normality_cmd(a: NormalityArgs, policy: Precision) -> anyhow::Result<Output> {
    let x = parse_source(&a.source)?;
    let e = x.expand_with(a.base, a.count, policy)?;
    let r = normality_of_digits(&e.digits, a.base, a.block_len, a.threshold)?;
    if a.blocks {
        let alpha = Alphabet::digits(a.base);
        let mut t = Table::new(["block", "count", "frequency"]);
        for (v, &c) in r.counts.iter().enumerate() {
            let mut digits = vec![0u16; a.block_len];
            let mut rest = v as u64;
            for d in digits.iter_mut().rev() {
                *d = (rest % a.base as u64) as u16;
                rest /= a.base as u64;
            }
            let f = if r.blocks == 0 { 0.0 } else { c as f64 / r.blocks as f64 };
            t.push(vec![alpha.render(&digits).into(), c.into(), f.into()]);
        }
        return Ok(Output::Table(t));
    }
    let mut t = Table::new([
        "source",
        "base",
        "block_len",
        "digits",
        "blocks",
        "max_deviation",
        "threshold",
        "consistent",
        "undersampled",
    ]);
    t.push(vec![
        x.describe().into(),
        r.base.into(),
        r.block_len.into(),
        r.digits.into(),
        r.blocks.into(),
        r.max_deviation.into(),
        r.threshold.into(),
        r.consistent.into(),
        r.undersampled.into(),
    ]);
    Ok(Output::Table(t))
}

fn load_bbp(sel: &BbpSel) -> anyhow::Result<BbpSpec> {
    match (&sel.spec, &sel.file) {
        (Some(n), _) => Ok(BbpSpec::builtin(n)?),
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let j: BbpJson = serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", p.display())))?;
            j.to_spec()
        }
        (None, None) => bail!(Usage("one of --spec or --file is required".into())),
    }
}

fn bbp_cmd(c: BbpCmd) -> anyhow::Result<Output> {
    match c {
        BbpCmd::Eval { sel, count } => {
            let s = load_bbp(&sel)?;
            let (int, digits) = s.eval_digits(count)?;
            Ok(Output::Text(format!("{int}.{}", Alphabet::digits(s.base()).render(&digits))))
        }
        BbpCmd::Digit { sel, position, count } => {
            let s = load_bbp(&sel)?;
            let digits = s.extract_digits(position, count)?;
            Ok(Output::Text(Alphabet::digits(s.base()).render(&digits)))
        }
        BbpCmd::Orbit { sel, count, discrepancy } => {
            let s = load_bbp(&sel)?;
            let orbit = s.orbit(count)?;
            let ys = orbit.values();
            if discrepancy {
                let d = star_discrepancy(&ys[1..])?;
                let mut t = Table::new(["n", "star_discrepancy", "precision_bits"]);
                t.push(vec![count.into(), d.into(), orbit.precision_bits.into()]);
                return Ok(Output::Table(t));
            }
            let mut t = Table::new(["j", "y"]);
            for (j, y) in ys.into_iter().enumerate() {
                t.push(vec![j.into(), y.into()]);
            }
            Ok(Output::Table(t))
        }
    }
}

fn fp_cmd(c: FpCmd) -> anyhow::Result<Output> {
    match c {
        FpCmd::VerifyPtm { order } => {
            let mut t = Table::new(["order", "cubic_vanishes"]);
            t.push(vec![order.into(), verify_ptm_cubic(order).into()]);
            Ok(Output::Table(t))
        }
        FpCmd::Mahler { order } => {
            let m = mahler_product(order);
            let a = ptm_series(order);
            let matches = (0..order).all(|n| m.coeff(n) == 1 - 2 * a.coeff(n));
            let mut t = Table::new(["order", "functional_equation", "coefficients_match_ptm"]);
            t.push(vec![order.into(), mahler_functional_check(&m).into(), matches.into()]);
            Ok(Output::Table(t))
        }
    }
}

fn convergent_table(cf: &mut ContinuedFraction, terms: usize) -> anyhow::Result<Table> {
    let convs = cf.convergents(terms)?;
    let qs = cf.quotients(terms)?.to_vec();
    let mut t = Table::new(["k", "a", "p", "q"]);
    for c in convs {
        let a: Cell = if c.n == 0 { cf.a0().clone().into() } else { qs[c.n - 1].clone().into() };
        t.push(vec![c.n.into(), a, c.p.into(), c.q.into()]);
    }
    Ok(t)
}

fn cf_cmd(c: CfCmd, policy: Precision) -> anyhow::Result<Output> {
    match c {
        CfCmd::Expand { source, terms } => {
            let mut cf = ContinuedFraction::expand_with(&parse_source(&source)?, policy)?;
            Ok(Output::Table(convergent_table(&mut cf, terms)?))
        }
        CfCmd::FromWord { word, a, b, terms } => {
            let mut cf = ContinuedFraction::from_word(parse_word(&word)?, a, b)?;
            Ok(Output::Table(convergent_table(&mut cf, terms)?))
        }
        CfCmd::Exponent { source, terms } => {
            let mut cf = ContinuedFraction::expand_with(&parse_source(&source)?, policy)?;
            let e = irrationality_exponent_estimate(&mut cf, terms)?;
            let mut t = Table::new(["k", "kappa"]);
            for (k, v) in e.kappas {
                t.push(vec![k.into(), v.into()]);
            }
            Ok(Output::Table(t))
        }
        CfCmd::Roy { a, b, xmin, xmax, per_decade, precision } => {
            let grid = log_grid(xmin, xmax, per_decade);
            if grid.is_empty() {
                bail!(Usage(format!("empty grid from {xmin} to {xmax}")));
            }
            let r = roy_check(a, b, &grid, precision)?;
            let mut t = Table::new(["X", "best_x0", "distance", "s"]);
            for row in r.rows {
                t.push(vec![row.x.into(), row.best_x0.into(), row.distance.into(), row.s.into()]);
            }
            Ok(Output::Table(t))
        }
    }
}

fn parse_kind(s: &str) -> anyhow::Result<PatternKind> {
    Ok(match s {
        "square" => PatternKind::Square,
        "overlap" => PatternKind::Overlap,
        "palindrome" => PatternKind::Palindrome,
        _ => {
            let frac = s.strip_prefix("power:").ok_or_else(|| Usage(format!("unknown pattern kind `{s}`")))?;
            let (n, d) = frac.split_once('/').ok_or_else(|| Usage(format!("expected power:NUM/DEN, got `{s}`")))?;
            let num = n.parse().map_err(|_| Usage(format!("bad numerator `{n}`")))?;
            let den = d.parse().map_err(|_| Usage(format!("bad denominator `{d}`")))?;
            PatternKind::Power { num, den }
        }
    })
}

fn patterns_cmd(a: PatternArgs) -> anyhow::Result<Output> {
    let kind = parse_kind(&a.kind)?;
    let (hits, alpha, symbols) = match (&a.word, &a.literal) {
        (Some(w), _) => {
            let mut s = parse_word(w)?;
            let hits = find_patterns(&mut s, kind, a.horizon).map_err(|e| Usage(e.to_string()))?;
            let alpha = s.alphabet().clone();
            (hits, alpha, s.symbols(a.horizon).to_vec())
        }
        (None, Some(text)) => {
            let mut letters: Vec<char> = text.chars().collect();
            letters.sort_unstable();
            letters.dedup();
            let alpha = std::sync::Arc::new(
                Alphabet::new(letters.iter().map(char::to_string)).map_err(|e| Usage(e.to_string()))?,
            );
            let w = Word::parse(alpha.clone(), text).map_err(|e| Usage(e.to_string()))?;
            let hits = find_patterns_in(w.symbols(), kind).map_err(|e| Usage(e.to_string()))?;
            (hits, alpha, w.into_symbols())
        }
        (None, None) => bail!(Usage("one of --word or --literal is required".into())),
    };
    let mut t = Table::new(["start", "len", "root", "factor"]);
    for h in hits {
        let root: Cell = h.root.map_or(Cell::Text(String::new()), Cell::from);
        let factor = alpha.render(&symbols[h.start..h.start + h.len]);
        t.push(vec![h.start.into(), h.len.into(), root, factor.into()]);
    }
    Ok(Output::Table(t))
}

fn fixtures_cmd(c: FixtureCmd) -> anyhow::Result<Output> {
    let dir = fixtures::fixtures_dir();
    let fresh = fixtures::compute()?;
    match c {
        FixtureCmd::Pin => {
            let path = fixtures::store(&dir, &fresh)?;
            Ok(Output::Text(format!("pinned {}", path.display())))
        }
        FixtureCmd::Check => {
            let pinned = fixtures::load(&dir)?;
            let diffs = fixtures::compare(&pinned, &fresh);
            if diffs.is_empty() {
                Ok(Output::Text("fixtures agree".into()))
            } else {
                Err(anyhow!(FixtureMismatch(diffs.join("; "))))
            }
        }
    }
}
