//! Connected sums: the Künneth formula on HF^+, the 1-handle map and knot
//! complexes of connected sums.
//!
//! ```text
//! cargo run --example kunneth
//! ```

use floerforge::cfk::{connected_sum_knots, hfk_hat, knot_numerics};
use floerforge::json::load_corpus_knot;
use floerforge::surgery::{connected_sum_floer, one_handle_stabilize, surgery_hf, HFPlusResult};

fn main() -> floerforge::Result<()> {
    let poincare = surgery_hf(&load_corpus_knot("trefoil")?, 1)?;
    let sigma = surgery_hf(&load_corpus_knot("trefoil")?, -1)?;
    let pairs = [
        ("P", &poincare, "P", &poincare),
        ("-Σ(2,3,7)", &sigma, "-Σ(2,3,7)", &sigma),
        ("-Σ(2,3,7)", &sigma, "S^1 x S^2", &HFPlusResult::s1_times_s2()),
    ];
    for (na, a, nb, b) in pairs {
        println!("{na} # {nb}: {}", connected_sum_floer(a, b).decomposition);
    }
    let (stab, map) = one_handle_stabilize(&sigma);
    println!("-Σ(2,3,7) # S^1 x S^2 via the 1-handle: {} (image in the {} copy)", stab.decomposition, map.target_copy);

    let t3 = load_corpus_knot("trefoil")?;
    let t5 = load_corpus_knot("t2_5")?;
    let sum = connected_sum_knots(&t3, &t5)?;
    let n = knot_numerics(&sum)?;
    println!("T(2,3) # T(2,5): rank HFK = {}, tau {}, genus {}", hfk_hat(&sum).total(), n.tau, n.genus);
    println!("  zero-surgery: {}", surgery_hf(&sum, 0)?.decomposition);
    Ok(())
}
