//! Untwisted Whitehead doubles: knot Floer homology, box parameters and
//! iterated doubles.
//!
//! ```text
//! cargo run --example whitehead_doubles
//! ```

use floerforge::cfk::{builtin, hfk_hat, knot_numerics, reduced_basis_form, Sign};
use floerforge::json::load_corpus_knot;
use floerforge::whitehead::{box_parameters, iterate_double, negative_double_cfk, whitehead_double_cfk};

fn main() -> floerforge::Result<()> {
    for (name, knot) in
        [("figure8", builtin("figure8")?), ("K3", load_corpus_knot("k3")?), ("K5", load_corpus_knot("k5")?)]
    {
        let rb = reduced_basis_form(&knot)?;
        let pos = whitehead_double_cfk(&rb)?;
        let neg = negative_double_cfk(&rb)?;
        let n = knot_numerics(&pos)?;
        let boxes: Vec<String> = box_parameters(&pos)?.iter().map(ToString::to_string).collect();
        println!("Wh+({name}): rank HFK = {}, genus {}, tau {}", hfk_hat(&pos).total(), n.genus, n.tau);
        println!("  boxes B[k]: {}", boxes.join(" "));
        let negboxes: Vec<String> = box_parameters(&neg)?.iter().map(ToString::to_string).collect();
        println!("Wh-({name}): boxes B[k]: {}", negboxes.join(" "));
    }
    let f8 = builtin("figure8")?;
    for i in 1..=3 {
        let d = iterate_double(&f8, Sign::Plus, i)?;
        println!("Wh^{i}(figure8): {} boxes", box_parameters(&d)?.len());
    }
    Ok(())
}
