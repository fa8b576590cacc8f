//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain error (the module's error text is
//! printed), 2 on usage, file or parse errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::cfk::{hfk_hat, knot_numerics, reduced_basis_form, KnotComplex, Sign};
use crate::endfloer::{distinguish, he_slice_r4, CassonHandle, EndFloerReport, EndSpec, SliceR4Spec, Verdict};
use crate::error::{Error, Result};
use crate::grading::Grading;
use crate::json::{load_json, load_knot, to_canonical_json};
use crate::surgery::{surgery_hf, surgery_hf_reduced, HFPlusResult};
use crate::verify::{render_table, verify_suite, Row, SUITE_LEVELS};
use crate::whitehead::{box_parameters, iterate_double};

#[derive(Parser, Debug)]
#[command(name = "floerforge", version, about = "Exact knot Floer and surgery computations over F2[U]")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// The full chain-level mapping cone.
    Chain,
    /// The cone with each A_s / B_s block reduced first.
    Reduced,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// HFK-hat, tau, genus and the filtered basis of a knot complex.
    Cfk {
        #[arg(long)]
        complex: PathBuf,
    },
    /// HF^+ of integer surgery (n in {-1, 0, 1}).
    Surgery {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, value_enum, default_value = "chain")]
        route: Route,
    },
    /// Iterated positive or negative Whitehead doubles.
    Double {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long, default_value_t = 1)]
        iterations: usize,
    },
    /// End Floer homology of a slice R^4.
    Endfloer {
        #[arg(long)]
        knot: PathBuf,
        /// ch+, ch-, mixed:<signs> (e.g. mixed:+-+), infinite-positive,
        /// infinite-both or undetermined.
        #[arg(long)]
        handle: String,
        #[arg(long, default_value_t = SUITE_LEVELS)]
        levels: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "+")]
        orientation: Sign,
    },
    /// Compares the end Floer homology of two ends under both orientations.
    Distinguish {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = SUITE_LEVELS)]
        levels: usize,
    },
    /// Runs the reproduction suite.
    Verify {
        /// Only run criteria whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((text, ok)) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text).map_err(Error::from),
                None => out.write_all(text.as_bytes()).map_err(Error::from),
            };
            match written {
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    2
                }
                Ok(()) if ok => 0,
                Ok(()) => 1,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Parse(_) => 2,
        _ => 1,
    }
}

/// Runs the command; returns the rendered output and whether it succeeded.
pub fn dispatch(cli: &Cli) -> Result<(String, bool)> {
    let format = cli.format;
    let json = format != Some(Format::Table);
    match &cli.command {
        Command::Cfk { complex } => {
            let out = cfk_summary(&load_knot(complex)?)?;
            Ok((if json { to_canonical_json(&out)? } else { cfk_table(&out) }, true))
        }
        Command::Surgery { complex, n, route } => {
            let k = load_knot(complex)?;
            let r = match route {
                Route::Chain => surgery_hf(&k, *n)?,
                Route::Reduced => surgery_hf_reduced(&k, *n)?,
            };
            Ok((if json { to_canonical_json(&r)? } else { surgery_table(&r) }, true))
        }
        Command::Double { complex, sign, iterations } => {
            let d = iterate_double(&load_knot(complex)?, *sign, *iterations)?;
            Ok((if json { to_canonical_json(&d)? } else { double_table(&d)? }, true))
        }
        Command::Endfloer { knot, handle, levels, orientation } => {
            let spec = SliceR4Spec {
                knot: load_knot(knot)?,
                handle: parse_handle(handle)?,
                orientation: *orientation,
                disk_label: None,
            };
            let r = he_slice_r4(&spec, *levels)?;
            Ok((if json { to_canonical_json(&r)? } else { report_table(&r) }, true))
        }
        Command::Distinguish { a, b, levels } => {
            let v = distinguish(&load_end_spec(a)?, &load_end_spec(b)?, *levels)?;
            Ok((if json { to_canonical_json(&v)? } else { verdict_table(&v) }, true))
        }
        Command::Verify { filter } => {
            let rows = verify_suite(filter.as_deref());
            let ok = rows.iter().all(|r| r.pass);
            let text = if format == Some(Format::Json) { to_canonical_json(&rows)? } else { verify_text(&rows) };
            Ok((text, ok))
        }
    }
}

/// Parses the `--handle` shorthand.
pub fn parse_handle(s: &str) -> Result<CassonHandle> {
    Ok(match s {
        "ch+" => CassonHandle::AllPositiveChain,
        "ch-" => CassonHandle::AllNegativeChain,
        "infinite-positive" => CassonHandle::HasInfinitePositiveChain,
        "infinite-both" => CassonHandle::HasInfinitePosAndNegChain,
        "undetermined" => CassonHandle::Undetermined,
        _ => match s.strip_prefix("mixed:") {
            Some(signs) if !signs.is_empty() => CassonHandle::FiniteMixedThenOneSign {
                signs: signs.chars().map(|c| c.to_string().parse()).collect::<Result<Vec<Sign>>>()?,
            },
            _ => return Err(Error::InvalidArgument(format!("unknown handle {s:?}"))),
        },
    })
}

/// Reads an end spec; a `"knot"` given as a string is a path to a knot
/// complex file, relative to the spec file.
pub fn load_end_spec(path: &Path) -> Result<EndSpec> {
    let mut v: Value = load_json(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut resolve = |spec: &mut Value| -> Result<()> {
        if let Some(Value::String(file)) = spec.get("knot") {
            let knot: KnotComplex = load_knot(&base.join(file))?;
            spec["knot"] = serde_json::to_value(knot)?;
        }
        Ok(())
    };
    match &mut v {
        Value::Array(items) => items.iter_mut().try_for_each(&mut resolve)?,
        other => resolve(other)?,
    }
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
pub struct HfkEntry {
    pub maslov: Grading,
    pub alexander: i64,
    pub rank: usize,
}

#[derive(Serialize)]
pub struct CfkSummary {
    pub hfk: Vec<HfkEntry>,
    pub total_rank: usize,
    /// Only for knots in S^3.
    pub tau: Option<i64>,
    pub genus: Option<i64>,
    /// `(m_j, A_j, d_j)` of the filtered basis, for tau = 0 knots in S^3.
    pub basis_pairs: Option<Vec<(Grading, i64, i64)>>,
}

pub fn cfk_summary(k: &KnotComplex) -> Result<CfkSummary> {
    let hat = hfk_hat(k);
    let numerics = knot_numerics(k).ok();
    let basis = match numerics {
        Some(n) if n.tau == 0 => {
            Some(reduced_basis_form(k)?.pairs().iter().map(|p| (p.maslov, p.alexander, p.length)).collect())
        }
        _ => None,
    };
    Ok(CfkSummary {
        hfk: hat.dims.iter().map(|((m, a), r)| HfkEntry { maslov: *m, alexander: *a, rank: *r }).collect(),
        total_rank: hat.total(),
        tau: numerics.map(|n| n.tau),
        genus: numerics.map(|n| n.genus),
        basis_pairs: basis,
    })
}

fn columns(header: [&str; 3], rows: &[[String; 3]]) -> String {
    let width = |i: usize| rows.iter().map(|r| r[i].chars().count()).chain([header[i].len()]).max().unwrap_or(0);
    let w = [width(0), width(1), width(2)];
    let mut out = String::new();
    for r in std::iter::once(&header.map(String::from)).chain(rows) {
        let line = format!("{:>w0$}  {:>w1$}  {:>w2$}", r[0], r[1], r[2], w0 = w[0], w1 = w[1], w2 = w[2]);
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn cfk_table(s: &CfkSummary) -> String {
    let mut rows: Vec<&HfkEntry> = s.hfk.iter().collect();
    rows.sort_by(|a, b| (b.maslov, b.alexander).cmp(&(a.maslov, a.alexander)));
    let body: Vec<[String; 3]> =
        rows.iter().map(|e| [e.maslov.to_string(), e.alexander.to_string(), e.rank.to_string()]).collect();
    let mut out = columns(["maslov", "alexander", "rank"], &body);
    out.push_str(&format!("total rank {}\n", s.total_rank));
    if let (Some(t), Some(g)) = (s.tau, s.genus) {
        out.push_str(&format!("tau {t}, genus {g}\n"));
    }
    out
}

fn surgery_table(r: &HFPlusResult) -> String {
    let mut rows: Vec<(Grading, String, String)> = Vec::new();
    for t in r.decomposition.towers() {
        rows.push((*t, "tower".into(), "1".into()));
    }
    let mut torsion: BTreeMap<(Grading, u32), usize> = BTreeMap::new();
    for t in r.decomposition.torsion() {
        *torsion.entry((t.grading, t.length)).or_insert(0) += 1;
    }
    for ((g, len), n) in torsion {
        let kind = if len == 1 { "F".to_string() } else { format!("F[U]/U^{len}") };
        rows.push((g, kind, n.to_string()));
    }
    rows.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let body: Vec<[String; 3]> = rows.into_iter().map(|(g, k, n)| [g.to_string(), k, n]).collect();
    let mut out = columns(["grading", "summand", "mult"], &body);
    out.push_str(&format!("HF+ = {} ({})\n", r.decomposition, r.spinc));
    out
}

fn double_table(k: &KnotComplex) -> Result<String> {
    let mut out = format!("{} generators\n", k.len());
    match box_parameters(k) {
        Ok(ks) => {
            let mut counts: BTreeMap<Grading, usize> = BTreeMap::new();
            for p in ks {
                *counts.entry(p).or_insert(0) += 1;
            }
            let body: Vec<[String; 3]> =
                counts.iter().rev().map(|(g, n)| [format!("B[{g}]"), g.to_string(), n.to_string()]).collect();
            out.push_str(&columns(["box", "k", "mult"], &body));
        }
        Err(_) => out.push_str(&cfk_table(&cfk_summary(k)?)),
    }
    Ok(out)
}

fn report_table(r: &EndFloerReport) -> String {
    let body: Vec<[String; 3]> = r
        .per_grading
        .iter()
        .rev()
        .map(|(g, e)| {
            let tag = serde_json::to_value(e.tag).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            [g.to_string(), e.rank.to_string(), tag]
        })
        .collect();
    let mut out = columns(["grading", "rank", "tag"], &body);
    let vanishes = match r.vanishes {
        Some(true) => "yes",
        Some(false) => "no",
        None => "undetermined",
    };
    out.push_str(&format!("vanishes: {vanishes}\n"));
    if let Some(g) = r.max_nontrivial_grading {
        out.push_str(&format!("max nontrivial grading: {g}\n"));
    }
    for line in &r.narrative {
        out.push_str(&format!("- {line}\n"));
    }
    out
}

fn verdict_table(v: &Verdict) -> String {
    match v {
        Verdict::Distinct { witness } => format!("distinct\nwitness: {witness}\n"),
        Verdict::IndistinguishableByThisInvariant { reason } => {
            format!("indistinguishable by end Floer homology\nreason: {reason}\n")
        }
    }
}

fn verify_text(rows: &[Row]) -> String {
    let passed = rows.iter().filter(|r| r.pass).count();
    format!("{}{passed}/{} criteria passed\n", render_table(rows), rows.len())
}
