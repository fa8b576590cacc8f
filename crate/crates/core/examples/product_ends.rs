//! End Floer homology of products M × R^4-type ends with a closed
//! three-manifold M.
//!
//! ```text
//! cargo run --example product_ends
//! ```

use floerforge::endfloer::{he_product_end, CassonHandle, SliceR4Spec};
use floerforge::json::load_corpus_knot;
use floerforge::surgery::{surgery_hf, HFPlusResult};

fn main() -> floerforge::Result<()> {
    let manifolds = [
        ("S^3", HFPlusResult::s3(), 0),
        ("S^1 x S^2", HFPlusResult::s1_times_s2(), 1),
        ("Poincaré sphere", surgery_hf(&load_corpus_knot("trefoil")?, 1)?, 0),
        ("-Σ(2,3,7)", surgery_hf(&load_corpus_knot("trefoil")?, -1)?, 0),
    ];
    for n in [3, 5, 7] {
        let r = SliceR4Spec::new(load_corpus_knot(&format!("k{n}"))?, CassonHandle::AllPositiveChain);
        for (name, m, b1) in &manifolds {
            let rep = he_product_end(m, *b1, &r, n, 3)?;
            let top = rep.max_nontrivial_grading.map_or("none".into(), |g| g.to_string());
            println!("n = {n}, M = {name:<16} HF+(M) = {:<20} top = {top}", m.decomposition.to_string());
        }
    }
    Ok(())
}
