//! Model serialization: the native line format and the UAI `MARKOV` format.

mod native;
mod uai;

pub use native::{emit_model, load_model};
pub use uai::{emit_uai, parse_uai};

use std::path::Path;

use crate::error::Result;
use crate::model::Model;

/// Reads a model file, choosing the parser from the first token
/// (`mapmp` or `MARKOV`).
pub fn read_model_file(path: &Path) -> Result<Model> {
    let text = std::fs::read_to_string(path)?;
    match text.split_whitespace().next() {
        Some("MARKOV") => parse_uai(&text),
        _ => load_model(&text),
    }
}

/// Tokens paired with their 1-based line numbers.
pub(crate) fn tokens(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .flat_map(|(k, line)| line.split_whitespace().map(move |t| (k + 1, t)))
        .collect()
}
