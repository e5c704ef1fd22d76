//! File formats, descriptor parsing, tabular output and pinned fixtures for
//! the `expansions` command-line tool.

pub mod cli;
pub mod fixtures;
pub mod formats;
pub mod source;
pub mod table;

pub use source::{parse_source, parse_word, DescriptorError};
pub use table::{Cell, Format, Table};
