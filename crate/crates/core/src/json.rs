//! JSON corpus I/O.
//!
//! All output goes through [`to_canonical_json`]: values are converted to a
//! `serde_json::Value` first, whose maps are ordered by key, so identical
//! inputs produce byte-identical text. Gradings serialise as fraction strings.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::cfk::{
    builtin, mirror_knot, reduce_canonical, reduced_basis_form, slice_torus_sum, staircase_torus, KnotComplex, Sign,
};
use crate::error::{Error, Result};
use crate::whitehead::whitehead_double_cfk;

/// Environment variable overriding the corpus directory.
pub const CORPUS_ENV: &str = "FLOERFORGE_CORPUS";

/// The corpus directory: `$FLOERFORGE_CORPUS` if set, otherwise the
/// `corpus/` directory shipped with the crate.
pub fn corpus_dir() -> PathBuf {
    match std::env::var_os(CORPUS_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus"),
    }
}

/// Path of the corpus file `name.json`.
pub fn corpus_path(name: &str) -> PathBuf {
    corpus_dir().join(format!("{name}.json"))
}

pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn load_knot(path: &Path) -> Result<KnotComplex> {
    load_json(path)
}

/// Loads `name.json` from the corpus.
pub fn load_corpus_knot(name: &str) -> Result<KnotComplex> {
    load_knot(&corpus_path(name))
}

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, to_canonical_json(value)?)?;
    Ok(())
}

/// The odd `n` for which the corpus ships `T_{2,n}`, `K_n` and `Wh(K_n)`.
pub const CORPUS_TORUS_INDICES: [i64; 4] = [3, 5, 7, 9];

/// Every corpus entry, built from scratch: `(file stem, complex)`.
pub fn corpus_manifest() -> Result<Vec<(String, KnotComplex)>> {
    let mut out = vec![
        ("unknot".to_string(), builtin("unknot")?),
        ("figure8".to_string(), builtin("figure8")?),
        ("j_in_y".to_string(), builtin("J_in_Y")?),
        ("jprime_in_yprime".to_string(), builtin("Jprime_in_Yprime")?),
    ];
    for n in CORPUS_TORUS_INDICES {
        let t = staircase_torus(n, Sign::Plus)?;
        let stem = if n == 3 { "trefoil".to_string() } else { format!("t2_{n}") };
        out.push((stem, t.clone()));
        out.push((format!("t2_{n}_mirror"), mirror_knot(&t)));
        let k = reduce_canonical(&slice_torus_sum(n)?);
        out.push((format!("wh_k{n}"), whitehead_double_cfk(&reduced_basis_form(&k)?)?));
        out.push((format!("k{n}"), k));
    }
    Ok(out)
}

/// Writes every manifest entry into `dir`; returns the paths written.
pub fn write_corpus(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (stem, knot) in corpus_manifest()? {
        let path = dir.join(format!("{stem}.json"));
        write_json(&path, &knot)?;
        written.push(path);
    }
    Ok(written)
}
