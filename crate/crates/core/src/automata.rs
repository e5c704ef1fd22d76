//! Deterministic finite automata with output (DFAO) reading base-`g` digits.
//!
//! An integer `n` is fed as its base-`g` expansion without leading zeros;
//! `n = 0` is the empty digit string, so `eval(0)` is the output of the
//! initial state. Digits are consumed least significant first by default,
//! following `n[a] = e_k … e_1[b]` with `b = e_0[a]`.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::words::{Alphabet, Symbol, WordStream};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("base must be at least 2, got {0}")]
    BadBase(u32),
    #[error("automaton needs at least one state")]
    NoStates,
    #[error("transition table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
    #[error("output symbol {0} outside the output alphabet")]
    OutputOutOfRange(Symbol),
    #[error("digit {digit} is not below base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("unknown builtin automaton `{0}`")]
    UnknownBuiltin(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DigitOrder {
    /// Least significant digit first.
    #[default]
    LsdFirst,
    /// Most significant digit first.
    MsdFirst,
}

/// One transition taken while reading an input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub digit: u32,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfao {
    name: String,
    base: u32,
    states: Vec<String>,
    initial: usize,
    /// `delta[state * base + digit]`.
    delta: Vec<usize>,
    outputs: Vec<Symbol>,
    output_alphabet: Arc<Alphabet>,
}

pub const BUILTINS: [&str; 4] = ["powers2", "ptm", "baum_sweet", "paper_fold"];

impl Dfao {
    pub fn new(
        name: impl Into<String>,
        base: u32,
        states: Vec<String>,
        initial: usize,
        delta: Vec<usize>,
        outputs: Vec<Symbol>,
        output_alphabet: Arc<Alphabet>,
    ) -> Result<Self, AutomatonError> {
        if base < 2 {
            return Err(AutomatonError::BadBase(base));
        }
        if states.is_empty() {
            return Err(AutomatonError::NoStates);
        }
        let q = states.len();
        if delta.len() != q * base as usize {
            return Err(AutomatonError::TableSize { expected: q * base as usize, found: delta.len() });
        }
        if let Some(&bad) = delta.iter().find(|&&t| t >= q) {
            return Err(AutomatonError::StateOutOfRange(bad));
        }
        if initial >= q {
            return Err(AutomatonError::StateOutOfRange(initial));
        }
        if outputs.len() != q {
            return Err(AutomatonError::TableSize { expected: q, found: outputs.len() });
        }
        if let Some(&bad) = outputs.iter().find(|&&o| o as usize >= output_alphabet.len()) {
            return Err(AutomatonError::OutputOutOfRange(bad));
        }
        Ok(Self { name: name.into(), base, states, initial, delta, outputs, output_alphabet })
    }

    /// The automata drawn for the powers of two, Prouhet–Thue–Morse,
    /// Baum–Sweet and paper-folding sequences.
    pub fn builtin(name: &str) -> Result<Self, AutomatonError> {
        let bin = Arc::new(Alphabet::from_chars("01").expect("valid alphabet"));
        let names = |s: &str| s.chars().map(|c| c.to_string()).collect::<Vec<_>>();
        // Rows are states, columns digits 0 and 1.
        let (states, delta, outputs): (Vec<String>, Vec<usize>, Vec<Symbol>) = match name {
            "powers2" => (
                names("iab"),
                // 0[i]=i 1[i]=a, 0[a]=a 1[a]=b, 0[b]=b 1[b]=b
                alloc::vec![0, 1, 1, 2, 2, 2],
                alloc::vec![0, 1, 0],
            ),
            "ptm" => (names("ia"), alloc::vec![0, 1, 1, 0], alloc::vec![0, 1]),
            "baum_sweet" => (
                names("iab"),
                // 0[i]=a 1[i]=i, 0[a]=i 1[a]=b, b absorbing
                alloc::vec![1, 0, 0, 2, 2, 2],
                alloc::vec![1, 0, 0],
            ),
            "paper_fold" => (
                names("iabc"),
                // 0[i]=a 1[i]=i, 0[a]=b 1[a]=c, b and c absorbing
                alloc::vec![1, 0, 2, 3, 2, 2, 3, 3],
                alloc::vec![1, 1, 1, 0],
            ),
            other => return Err(AutomatonError::UnknownBuiltin(other.to_string())),
        };
        Self::new(name, 2, states, 0, delta, outputs, bin)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transitions(&self) -> &[usize] {
        &self.delta
    }

    pub fn outputs(&self) -> &[Symbol] {
        &self.outputs
    }

    pub fn output_alphabet(&self) -> &Arc<Alphabet> {
        &self.output_alphabet
    }

    pub fn step(&self, state: usize, digit: u32) -> usize {
        self.delta[state * self.base as usize + digit as usize]
    }

    pub fn output(&self, state: usize) -> Symbol {
        self.outputs[state]
    }

    /// Base-`g` digits of `n`, least significant first; empty for `n = 0`.
    pub fn digits_lsd(&self, mut n: u64) -> Vec<u32> {
        let g = self.base as u64;
        let mut d = Vec::new();
        while n > 0 {
            d.push((n % g) as u32);
            n /= g;
        }
        d
    }

    pub fn eval(&self, n: u64) -> Symbol {
        self.eval_with(n, DigitOrder::LsdFirst)
    }

    pub fn eval_with(&self, n: u64, order: DigitOrder) -> Symbol {
        let g = self.base as u64;
        let mut state = self.initial;
        match order {
            DigitOrder::LsdFirst => {
                let mut n = n;
                while n > 0 {
                    state = self.step(state, (n % g) as u32);
                    n /= g;
                }
            }
            DigitOrder::MsdFirst => {
                for &d in self.digits_lsd(n).iter().rev() {
                    state = self.step(state, d);
                }
            }
        }
        self.output(state)
    }

    /// Runs an explicit digit string given least significant digit first.
    /// Leading zeros are allowed and appear at the end of the slice.
    pub fn eval_digits(&self, lsd_first: &[u32], order: DigitOrder) -> Result<Symbol, AutomatonError> {
        let mut state = self.initial;
        let mut feed = |d: u32| -> Result<(), AutomatonError> {
            if d >= self.base {
                return Err(AutomatonError::DigitOutOfRange { digit: d, base: self.base });
            }
            state = self.step(state, d);
            Ok(())
        };
        match order {
            DigitOrder::LsdFirst => lsd_first.iter().try_for_each(|&d| feed(d))?,
            DigitOrder::MsdFirst => lsd_first.iter().rev().try_for_each(|&d| feed(d))?,
        }
        Ok(self.output(state))
    }

    /// Transitions taken by the LSD-first evaluation of `n`.
    pub fn trace(&self, n: u64) -> Vec<TraceStep> {
        let mut state = self.initial;
        self.digits_lsd(n)
            .into_iter()
            .map(|digit| {
                let to = self.step(state, digit);
                let s = TraceStep { digit, from: state, to };
                state = to;
                s
            })
            .collect()
    }

    /// The output sequence `f(0[i]) f(1[i]) f(2[i]) …`.
    pub fn word(&self) -> WordStream {
        let m = self.clone();
        WordStream::from_fn(self.output_alphabet.clone(), move |n| m.eval(n))
    }
}

/// Arithmetic definitions of the builtin sequences, computed without any
/// automaton. They serve as independent oracles for [`Dfao::word`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    /// 1 iff `n` is a power of two.
    PowersOfTwo,
    /// Parity of the number of 1s in binary.
    PtmPopcount,
    /// 1 iff binary `n` has no block of consecutive 0s of odd length.
    BaumSweetBlocks,
    /// `a`/`b` as the count of (overlapping) `11` in binary is even/odd.
    RudinShapiro11Count,
    /// `u_n = a_{n+1}` with `a_{2^k} = 1` and `a_{2^k+j} = 1 - a_{2^k-j}`.
    PaperFoldRecursive,
}

impl Predicate {
    pub const ALL: [Predicate; 5] = [
        Predicate::PowersOfTwo,
        Predicate::PtmPopcount,
        Predicate::BaumSweetBlocks,
        Predicate::RudinShapiro11Count,
        Predicate::PaperFoldRecursive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::PowersOfTwo => "powers_of_two",
            Predicate::PtmPopcount => "ptm_popcount",
            Predicate::BaumSweetBlocks => "baum_sweet_blocks",
            Predicate::RudinShapiro11Count => "rudin_shapiro_11count",
            Predicate::PaperFoldRecursive => "paper_fold_recursive",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// The builtin automaton computing the same sequence, if any.
    pub fn automaton(self) -> Option<&'static str> {
        match self {
            Predicate::PowersOfTwo => Some("powers2"),
            Predicate::PtmPopcount => Some("ptm"),
            Predicate::BaumSweetBlocks => Some("baum_sweet"),
            Predicate::PaperFoldRecursive => Some("paper_fold"),
            Predicate::RudinShapiro11Count => None,
        }
    }
}

fn baum_sweet(n: u64) -> Symbol {
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            n >>= 1;
            continue;
        }
        let zeros = n.trailing_zeros();
        if zeros % 2 == 1 {
            return 0;
        }
        n >>= zeros;
    }
    1
}

/// Stream of a [`Predicate`]. The paper-folding recursion reads back the
/// values it already produced.
pub fn predicate_word(kind: Predicate) -> WordStream {
    let bin = Arc::new(Alphabet::from_chars("01").expect("valid alphabet"));
    match kind {
        Predicate::PowersOfTwo => WordStream::from_fn(bin, |n| n.is_power_of_two() as Symbol),
        Predicate::PtmPopcount => WordStream::from_fn(bin, |n| (n.count_ones() & 1) as Symbol),
        Predicate::BaumSweetBlocks => WordStream::from_fn(bin, baum_sweet),
        Predicate::RudinShapiro11Count => {
            let ab = Arc::new(Alphabet::from_chars("ab").expect("valid alphabet"));
            WordStream::from_fn(ab, |n| ((n & (n >> 1)).count_ones() & 1) as Symbol)
        }
        Predicate::PaperFoldRecursive => WordStream::new(bin, alloc::boxed::Box::new(PaperFoldSource)),
    }
}

struct PaperFoldSource;

impl crate::words::SymbolSource for PaperFoldSource {
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize) {
        // buf[n] = u_n = a_{n+1}.
        while buf.len() < target {
            let i = buf.len() as u64 + 1;
            let value = if i.is_power_of_two() {
                1
            } else {
                let p = 1u64 << (63 - i.leading_zeros());
                let j = i - p;
                1 - buf[(p - j - 1) as usize]
            };
            buf.push(value);
        }
    }
}
