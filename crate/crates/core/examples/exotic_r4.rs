//! End Floer homology of the slice R^4s built from K_n, their end sums and
//! pairwise comparisons.
//!
//! ```text
//! cargo run --example exotic_r4
//! ```

use floerforge::endfloer::{distinguish, he_end_sum, he_slice_r4, CassonHandle, EndFloerReport, EndSpec, SliceR4Spec};
use floerforge::json::load_corpus_knot;

const LEVELS: usize = 3;

fn slice(n: i64) -> floerforge::Result<SliceR4Spec> {
    Ok(SliceR4Spec::new(load_corpus_knot(&format!("k{n}"))?, CassonHandle::AllPositiveChain))
}

fn summary(rep: &EndFloerReport) -> String {
    match (rep.vanishes, rep.max_nontrivial_grading) {
        (Some(true), _) => "vanishes".into(),
        (_, Some(top)) => format!("top grading {top}, rank {} there", rep.per_grading[&top].rank),
        _ => "undetermined".into(),
    }
}

fn main() -> floerforge::Result<()> {
    for n in [3, 5, 7, 9] {
        let r = slice(n)?;
        println!(
            "R_{n}: {}; reversed: {}",
            summary(&he_slice_r4(&r, LEVELS)?),
            summary(&he_slice_r4(&r.reversed(), LEVELS)?)
        );
    }
    for (a, b) in [(3, 3), (3, 5), (3, 7)] {
        println!("R_{a} ♮ R_{b}: {}", summary(&he_end_sum(&[slice(a)?, slice(b)?], LEVELS)?));
    }
    let r3 = slice(3)?;
    println!("R_3 ♮ rev(R_3): {}", summary(&he_end_sum(&[r3.clone(), r3.reversed()], LEVELS)?));
    for (a, b) in [(3, 5), (5, 5)] {
        let v = distinguish(&EndSpec::Single(slice(a)?), &EndSpec::Single(slice(b)?), LEVELS)?;
        println!("R_{a} vs R_{b}: {}", serde_json::to_string(&v).expect("verdicts serialize"));
    }
    Ok(())
}
