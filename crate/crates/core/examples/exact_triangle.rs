//! Rank bookkeeping in the surgery exact triangle for the clasp changes of a
//! Whitehead double, and what exactness forces on the maps.
//!
//! ```text
//! cargo run --example exact_triangle
//! ```

use floerforge::cfk::Sign;
use floerforge::json::load_corpus_knot;
use floerforge::surgery::{exact_triangle_force, RankTable};
use floerforge::whitehead::clasp_triangle;

fn show(t: &RankTable) -> String {
    let parts: Vec<String> = t.iter().rev().map(|(g, r)| format!("F^{r}({g})")).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ⊕ ")
    }
}

fn main() -> floerforge::Result<()> {
    for stem in ["figure8", "wh_k3"] {
        let knot = load_corpus_knot(stem)?;
        for sign in [Sign::Plus, Sign::Minus] {
            let t = clasp_triangle(&knot, sign)?;
            let v = exact_triangle_force([&t.m1, &t.m2, &t.m3], t.shifts)?;
            println!("{stem}, clasp {sign}:");
            println!("  HF_red: {}  ->  {}  ->  {}", show(&t.m1), show(&t.m2), show(&t.m3));
            println!("  ranks (F, Φ, Ψ) = {:?}; F is {:?}", v.ranks, v.f);
        }
    }
    Ok(())
}
