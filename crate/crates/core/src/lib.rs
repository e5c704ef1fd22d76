//! Digit expansions, automatic and morphic words, and the numerical tools
//! around them: subword complexity, certified real arithmetic, BBP formulas,
//! power series over finite fields and continued fractions.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod automata;
pub mod bbp;
pub mod complexity;
pub mod constants;
pub mod constructions;
pub mod contfrac;
pub mod fibonacci;
pub mod fpseries;
pub mod interval;
pub mod reals;
pub mod words;
