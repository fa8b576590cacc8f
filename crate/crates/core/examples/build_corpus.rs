//! Regenerates the JSON corpus from the builders.
//!
//! ```text
//! cargo run --example build_corpus [-- <output dir>]
//! ```
//!
//! Without an argument the corpus directory (`$FLOERFORGE_CORPUS` or the
//! crate's `corpus/`) is rewritten.

use std::path::PathBuf;

use floerforge::json::{corpus_dir, write_corpus};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(corpus_dir);
    for path in write_corpus(&dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
