//! Text formats, Graphviz export and the command-line front end over
//! [`omegarepair_core`].

pub mod cli;
pub mod dot;
pub mod format;
pub mod report;

pub use format::{parse_kripke, parse_model, parse_nba, parse_rm, serialize_model, ModelFile, ParseError};
