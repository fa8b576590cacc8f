//! HF^+ of ±1 and 0 surgeries on the corpus knots, by both routes.
//!
//! ```text
//! cargo run --example zero_surgery
//! ```

use floerforge::json::load_corpus_knot;
use floerforge::surgery::{extract_invariants, surgery_hf, surgery_hf_reduced};

fn main() -> floerforge::Result<()> {
    for stem in ["unknot", "trefoil", "t2_3_mirror", "figure8", "t2_5", "k3"] {
        let knot = load_corpus_knot(stem)?;
        for n in [0, 1, -1] {
            let chain = surgery_hf(&knot, n)?;
            // The reduced-model route is an independent computation of the same group.
            assert_eq!(surgery_hf_reduced(&knot, n)?.decomposition, chain.decomposition);
            let inv = extract_invariants(&chain);
            let d: Vec<String> = inv.d.iter().map(ToString::to_string).collect();
            println!("{stem:>12}  n = {n:>2}  HF+ = {}   d = [{}]", chain.decomposition, d.join(", "));
        }
    }
    let j = load_corpus_knot("j_in_y")?;
    println!("{:>12}  n = -1  HF+ = {}", "J in Y", surgery_hf(&j, -1)?.decomposition);
    Ok(())
}
