//! Knot Floer complexes: bigraded free complexes over F2[U] with an Alexander
//! filtration and an optional flip involution.
//!
//! A generator `x` sits at Maslov grading `m(x)` and Alexander grading
//! `A(x)`; the element `U^p x` of CFK^infinity sits at filtration coordinates
//! `(i, j) = (-p, A(x) - p)`. An entry `x -> U^p y` therefore has horizontal
//! length `p` and vertical length `A(x) - A(y) + p`, and the filtration
//! condition says both are non-negative.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complex::{tensor_complexes, validate_complex, Arrow, FreeComplex, Generator};
use crate::error::{Error, Result};
use crate::f2::BitVec;
use crate::grading::Grading;
use crate::homology::{cancel_units, decompose_unchecked, graded_homology_dims};

/// The three-manifold a knot lives in, as far as the algorithms need it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ambient {
    pub name: String,
    pub b1: u32,
    /// Whether `HF_red` of the ambient manifold vanishes.
    pub reduced_trivial: bool,
}

impl Ambient {
    pub fn s3() -> Self {
        Ambient { name: "S3".into(), b1: 0, reduced_trivial: true }
    }

    pub fn is_s3(&self) -> bool {
        self.b1 == 0
    }
}

impl Default for Ambient {
    fn default() -> Self {
        Ambient::s3()
    }
}

/// A sign, used for torus knot chirality and clasp signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "pos" => Ok(Sign::Plus),
            "-" | "minus" | "neg" => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("invalid sign {s:?} (expected + or -)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawKnot", into = "RawKnot")]
pub struct KnotComplex {
    base: FreeComplex,
    alexander: Vec<i64>,
    flip: Option<Vec<usize>>,
    ambient: Ambient,
}

#[derive(Serialize, Deserialize)]
struct RawKnot {
    #[serde(flatten)]
    base: FreeComplex,
    alexander: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    flip: Option<Vec<(String, String)>>,
    #[serde(default)]
    ambient: Ambient,
}

impl TryFrom<RawKnot> for KnotComplex {
    type Error = Error;

    fn try_from(raw: RawKnot) -> Result<Self> {
        let base = raw.base;
        let mut alexander = Vec::with_capacity(base.len());
        for g in base.generators() {
            let a = raw
                .alexander
                .get(&g.name)
                .ok_or_else(|| Error::InvalidComplex(format!("no Alexander grading for {:?}", g.name)))?;
            alexander.push(*a);
        }
        if raw.alexander.len() != base.len() {
            return Err(Error::InvalidComplex("Alexander gradings name unknown generators".into()));
        }
        let flip = match raw.flip {
            None => None,
            Some(pairs) => {
                let mut perm = vec![usize::MAX; base.len()];
                for (a, b) in &pairs {
                    let ia =
                        base.index_of(a).ok_or_else(|| Error::InvalidComplex(format!("flip names unknown {a:?}")))?;
                    let ib =
                        base.index_of(b).ok_or_else(|| Error::InvalidComplex(format!("flip names unknown {b:?}")))?;
                    if perm[ia] != usize::MAX || perm[ib] != usize::MAX {
                        return Err(Error::InvalidComplex(format!("flip lists {a:?} or {b:?} twice")));
                    }
                    perm[ia] = ib;
                    perm[ib] = ia;
                }
                if let Some(i) = perm.iter().position(|p| *p == usize::MAX) {
                    return Err(Error::InvalidComplex(format!("flip misses generator {:?}", base.name(i))));
                }
                Some(perm)
            }
        };
        KnotComplex::new(base, alexander, flip, raw.ambient)
    }
}

impl From<KnotComplex> for RawKnot {
    fn from(k: KnotComplex) -> Self {
        let alexander = k.base.generators().iter().zip(&k.alexander).map(|(g, a)| (g.name.clone(), *a)).collect();
        let flip = k.flip.as_ref().map(|perm| {
            perm.iter()
                .enumerate()
                .filter(|(i, j)| i <= j)
                .map(|(i, &j)| (k.base.name(i).to_string(), k.base.name(j).to_string()))
                .collect()
        });
        RawKnot { base: k.base, alexander, flip, ambient: k.ambient }
    }
}

impl KnotComplex {
    /// Builds and validates a knot complex (d^2 = 0, homogeneity, filtration,
    /// and the flip conditions when a flip is given).
    pub fn new(base: FreeComplex, alexander: Vec<i64>, flip: Option<Vec<usize>>, ambient: Ambient) -> Result<Self> {
        if alexander.len() != base.len() {
            return Err(Error::InvalidComplex("one Alexander grading per generator required".into()));
        }
        if let Some(p) = &flip {
            if p.len() != base.len() || p.iter().any(|&j| j >= base.len()) {
                return Err(Error::InvalidComplex("flip is not a permutation of the generators".into()));
            }
        }
        let k = KnotComplex { base, alexander, flip, ambient };
        let problems = k.violations();
        if problems.is_empty() {
            Ok(k)
        } else {
            Err(Error::InvalidComplex(problems.join("; ")))
        }
    }

    /// Builds a knot complex from `(name, maslov, alexander)` triples and
    /// name-based arrows whose powers are implied by the gradings.
    pub fn from_table(
        gens: &[(&str, Grading, i64)],
        arrows: &[(&str, &str)],
        flip: &[(&str, &str)],
        ambient: Ambient,
    ) -> Result<Self> {
        let generators: Vec<Generator> =
            gens.iter().map(|(n, m, _)| Generator { name: n.to_string(), maslov: *m }).collect();
        let idx = |s: &str| {
            gens.iter().position(|g| g.0 == s).ok_or_else(|| Error::InvalidComplex(format!("unknown generator {s:?}")))
        };
        let mut targets = vec![Vec::new(); gens.len()];
        for (f, t) in arrows {
            targets[idx(f)?].push(idx(t)?);
        }
        let base = FreeComplex::from_graded_rows(generators, &targets)?;
        let flip = if flip.is_empty() {
            None
        } else {
            let mut perm: Vec<usize> = (0..gens.len()).collect();
            for (a, b) in flip {
                let (ia, ib) = (idx(a)?, idx(b)?);
                perm[ia] = ib;
                perm[ib] = ia;
            }
            Some(perm)
        };
        KnotComplex::new(base, gens.iter().map(|g| g.2).collect(), flip, ambient)
    }

    pub fn base(&self) -> &FreeComplex {
        &self.base
    }

    pub fn alexander(&self, i: usize) -> i64 {
        self.alexander[i]
    }

    pub fn alexanders(&self) -> &[i64] {
        &self.alexander
    }

    pub fn flip(&self) -> Option<&[usize]> {
        self.flip.as_deref()
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn with_ambient(mut self, ambient: Ambient) -> Self {
        self.ambient = ambient;
        self
    }

    /// All violated invariants, with generator names.
    pub fn violations(&self) -> Vec<String> {
        let c = &self.base;
        let report = validate_complex(c);
        let mut out: Vec<String> = report.homogeneity.into_iter().chain(report.d_squared).collect();
        let a = &self.alexander;
        for e in c.arrows() {
            if a[e.to] - i64::from(e.upower) > a[e.from] {
                out.push(format!(
                    "{} -> U^{} {} raises the Alexander filtration",
                    c.name(e.from),
                    e.upower,
                    c.name(e.to)
                ));
            }
        }
        if let Some(flip) = &self.flip {
            let arrows: HashMap<(usize, usize), u32> = c.arrows().iter().map(|e| ((e.from, e.to), e.upower)).collect();
            for (x, &ix) in flip.iter().enumerate() {
                if flip[ix] != x {
                    out.push(format!("flip is not an involution at {}", c.name(x)));
                    continue;
                }
                if a[ix] != -a[x] {
                    out.push(format!("flip: A({}) != -A({})", c.name(ix), c.name(x)));
                }
                if c.maslov(ix) != c.maslov(x) - Grading::int(2 * a[x]) {
                    out.push(format!("flip: m({}) != m({}) - 2A({})", c.name(ix), c.name(x), c.name(x)));
                }
            }
            if out.is_empty() {
                for e in c.arrows() {
                    let want = i64::from(e.upower) + a[e.from] - a[e.to];
                    let got = arrows.get(&(flip[e.from], flip[e.to])).map(|p| i64::from(*p));
                    if got != Some(want) {
                        out.push(format!(
                            "flip: {} -> {} has no partner {} -> U^{} {}",
                            c.name(e.from),
                            c.name(e.to),
                            c.name(flip[e.from]),
                            want,
                            c.name(flip[e.to])
                        ));
                    }
                }
            }
        }
        out
    }

    /// Maximum |A| over generators.
    pub fn max_abs_alexander(&self) -> i64 {
        self.alexander.iter().map(|a| a.abs()).max().unwrap_or(0)
    }

    /// Renames every generator to `prefix + name`.
    pub fn prefixed(&self, prefix: &str) -> KnotComplex {
        KnotComplex { base: self.base.prefixed(prefix), ..self.clone() }
    }

    /// Shifts Maslov gradings by `m` and Alexander gradings by `a`. A nonzero
    /// Alexander shift drops the flip.
    pub fn shifted(&self, m: Grading, a: i64) -> KnotComplex {
        KnotComplex {
            base: self.base.shifted(m),
            alexander: self.alexander.iter().map(|x| x + a).collect(),
            flip: if a == 0 { self.flip.clone() } else { None },
            ambient: self.ambient.clone(),
        }
    }
}

/// Direct sum of knot complexes in the same ambient manifold (the ambient of
/// the first operand is kept). The flip is the sum of the flips when both
/// operands have one.
pub fn direct_sum_knots(c1: &KnotComplex, c2: &KnotComplex) -> Result<KnotComplex> {
    let base = c1.base.direct_sum(&c2.base)?;
    let mut alexander = c1.alexander.clone();
    alexander.extend(&c2.alexander);
    let off = c1.len();
    let flip = match (&c1.flip, &c2.flip) {
        (Some(f1), Some(f2)) => Some(f1.iter().copied().chain(f2.iter().map(|j| j + off)).collect()),
        _ => None,
    };
    KnotComplex::new(base, alexander, flip, c1.ambient.clone())
}

/// The 1x1 box `B[k, j]`: `a, d` at `(k, j)`, `b` at `(k+1, j+1)`, `c` at
/// `(k-1, j-1)`, with `da = Ub + c`, `db = d`, `dc = Ud`. Carries the flip
/// `b <-> c` exactly when `j = 0`.
pub fn box_complex(k: Grading, j: i64) -> KnotComplex {
    box_named(k, j, "")
}

/// [`box_complex`] with generator names prefixed by `prefix`.
pub fn box_named(k: Grading, j: i64, prefix: &str) -> KnotComplex {
    let n = |s: &str| format!("{prefix}{s}");
    let (a, b, c, d) = (n("a"), n("b"), n("c"), n("d"));
    let gens = [(a.as_str(), k, j), (b.as_str(), k + 1, j + 1), (c.as_str(), k - 1, j - 1), (d.as_str(), k, j)];
    let arrows =
        [(a.as_str(), b.as_str()), (a.as_str(), c.as_str()), (b.as_str(), d.as_str()), (c.as_str(), d.as_str())];
    let flip: &[(&str, &str)] = if j == 0 { &[(b.as_str(), c.as_str())] } else { &[] };
    KnotComplex::from_table(&gens, &arrows, flip, Ambient::s3()).expect("box is a valid complex")
}

/// The staircase complex of the `(2, n)` torus knot (`sign = Plus`) or its
/// mirror (`sign = Minus`), for odd `n >= 3`.
///
/// For the positive knot: generators `x_0, ..., x_{2g}` with `g = (n-1)/2`,
/// `A(x_j) = g - j`, `m(x_j) = -j`, and `d x_{2l+1} = U x_{2l} + x_{2l+2}`.
/// The flip reverses the staircase.
pub fn staircase_torus(n: i64, sign: Sign) -> Result<KnotComplex> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!("staircase_torus needs odd n >= 3 (got {n})")));
    }
    let g = (n - 1) / 2;
    let names: Vec<String> = (0..=2 * g).map(|j| format!("x{j}")).collect();
    let gens: Vec<(&str, Grading, i64)> =
        (0..=2 * g).map(|j| (names[j as usize].as_str(), Grading::int(-j), g - j)).collect();
    let mut arrows = Vec::new();
    for l in 0..g {
        let odd = names[(2 * l + 1) as usize].as_str();
        arrows.push((odd, names[(2 * l) as usize].as_str()));
        arrows.push((odd, names[(2 * l + 2) as usize].as_str()));
    }
    let mut flip = Vec::new();
    for j in 0..g {
        flip.push((names[j as usize].as_str(), names[(2 * g - j) as usize].as_str()));
    }
    let positive = KnotComplex::from_table(&gens, &arrows, &flip, Ambient::s3())?;
    Ok(match sign {
        Sign::Plus => positive,
        Sign::Minus => mirror_knot(&positive),
    })
}

/// `T_{2,n} # -T_{2,n}` for odd `n >= 3`: a slice knot with `tau = 0` whose
/// reduced HFK-hat reaches grading `n - 1`.
pub fn slice_torus_sum(n: i64) -> Result<KnotComplex> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!("K_n needs odd n >= 3 (got {n})")));
    }
    let t = staircase_torus(n, Sign::Plus)?;
    connected_sum_knots(&t, &mirror_knot(&t))
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 4] = ["unknot", "figure8", "J_in_Y", "Jprime_in_Yprime"];

/// The built-in table complexes.
///
/// * `unknot`: one generator at `(0, 0)`;
/// * `figure8`: `x ⊕ B[0]`;
/// * `J_in_Y`: the genus-one knot `J` in the zero-surgery `Y` on the positive
///   clasp knot: `a(1/2, 1)`, `b(-1/2, 0)`, `c(-3/2, -1)`, `d(-1/2, 0)` with
///   `da = b`, `dc = Ub`;
/// * `Jprime_in_Yprime`: the analogous knot in zero-surgery on the
///   figure-eight knot: `a(1/2, 0)` and `b(-1/2, 0)` isolated, `c(3/2, 1) ->
///   d(1/2, 0)` and `e(-1/2, -1) -> U f` with `f(1/2, 0)`. These gradings are
///   the unique ones (up to renaming `a`, `b`) for which the mapping cone
///   reproduces `HF^+(Y')` and `-1`-surgery gives `S^1 x S^2`.
pub fn builtin(name: &str) -> Result<KnotComplex> {
    let h = Grading::half;
    let i = Grading::int;
    match name {
        "unknot" => KnotComplex::from_table(&[("x", i(0), 0)], &[], &[("x", "x")], Ambient::s3()),
        "figure8" => {
            let x = builtin("unknot")?;
            direct_sum_knots(&x, &box_complex(Grading::ZERO, 0))
        }
        "J_in_Y" => KnotComplex::from_table(
            &[("a", h(1), 1), ("b", h(-1), 0), ("c", h(-3), -1), ("d", h(-1), 0)],
            &[("a", "b"), ("c", "b")],
            &[("a", "c"), ("b", "b"), ("d", "d")],
            Ambient { name: "Y".into(), b1: 1, reduced_trivial: true },
        ),
        "Jprime_in_Yprime" => KnotComplex::from_table(
            &[("a", h(1), 0), ("b", h(-1), 0), ("c", h(3), 1), ("d", h(1), 0), ("e", h(-1), -1), ("f", h(1), 0)],
            &[("c", "d"), ("e", "f")],
            &[("a", "a"), ("b", "b"), ("c", "e"), ("d", "f")],
            Ambient { name: "Y'".into(), b1: 1, reduced_trivial: false },
        ),
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

/// The dual complex: gradings and Alexander gradings negated, arrows reversed
/// with the same powers. For knots in S^3 the Maslov grading is then
/// normalized so that the free summand of `H(CFK^-)` sits at grading 0.
pub fn mirror_knot(c: &KnotComplex) -> KnotComplex {
    let generators: Vec<Generator> =
        c.base.generators().iter().map(|g| Generator { name: g.name.clone(), maslov: -g.maslov }).collect();
    let arrows = c.base.arrows().iter().map(|a| Arrow { from: a.to, to: a.from, upower: a.upower }).collect();
    let base = FreeComplex::new(generators, arrows).expect("dual of a well-formed complex");
    let mut out = KnotComplex {
        base,
        alexander: c.alexander.iter().map(|a| -a).collect(),
        flip: c.flip.clone(),
        ambient: c.ambient.clone(),
    };
    if out.ambient.is_s3() {
        let h = decompose_unchecked(&out.base);
        if let [top] = h.towers() {
            out.base = out.base.shifted(-*top);
        }
    }
    out
}

/// Connected sum: tensor product of the complexes, Alexander gradings add,
/// `b1` adds, and the flip is the product flip when both operands have one.
/// At most one operand may live in a manifold with `b1 > 0`.
pub fn connected_sum_knots(c1: &KnotComplex, c2: &KnotComplex) -> Result<KnotComplex> {
    if c1.ambient.b1 > 0 && c2.ambient.b1 > 0 {
        return Err(Error::BothAmbientsNontrivial);
    }
    let base = tensor_complexes(&c1.base, &c2.base);
    let n2 = c2.len();
    let mut alexander = Vec::with_capacity(base.len());
    for a1 in &c1.alexander {
        for a2 in &c2.alexander {
            alexander.push(a1 + a2);
        }
    }
    let flip = match (&c1.flip, &c2.flip) {
        (Some(f1), Some(f2)) => Some((0..base.len()).map(|k| f1[k / n2] * n2 + f2[k % n2]).collect()),
        _ => None,
    };
    let ambient = if c1.ambient.b1 > 0 {
        Ambient { reduced_trivial: c1.ambient.reduced_trivial && c2.ambient.reduced_trivial, ..c1.ambient.clone() }
    } else if c2.ambient.b1 > 0 {
        Ambient { reduced_trivial: c1.ambient.reduced_trivial && c2.ambient.reduced_trivial, ..c2.ambient.clone() }
    } else {
        Ambient::s3()
    };
    KnotComplex::new(base, alexander, flip, ambient)
}

/// Filtered cancellation: removes every `U^0` entry that preserves the
/// Alexander grading (these are the filtration-preserving isomorphisms), in
/// the deterministic (source name, target name) order. The flip is kept when
/// it is still a valid flip on the surviving basis and dropped otherwise.
pub fn reduce_canonical(c: &KnotComplex) -> KnotComplex {
    let r = cancel_units(&c.base, |x, y| c.alexander[x] == c.alexander[y]);
    let alexander: Vec<i64> = r.kept.iter().map(|&i| c.alexander[i]).collect();
    let flip = c.flip.as_ref().and_then(|f| {
        let pos: HashMap<usize, usize> = r.kept.iter().enumerate().map(|(k, &o)| (o, k)).collect();
        r.kept.iter().map(|o| pos.get(&f[*o]).copied()).collect::<Option<Vec<usize>>>()
    });
    let out = KnotComplex { base: r.complex.clone(), alexander: alexander.clone(), flip, ambient: c.ambient.clone() };
    if out.flip.is_some() && !out.violations().is_empty() {
        KnotComplex { flip: None, ..out }
    } else {
        out
    }
}

/// Dimensions indexed by `(maslov, alexander)`.
pub type BigradedTable = BTreeMap<(Grading, i64), usize>;

/// Dimensions indexed by Maslov grading.
pub type GradedTable = BTreeMap<Grading, usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HfkHat {
    pub dims: BigradedTable,
    /// `dims` with the generator surviving to `HF-hat(S^3)` removed; only
    /// defined for knots in S^3.
    pub reduced: Option<BigradedTable>,
}

impl HfkHat {
    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }
}

/// Knot Floer homology hat: homology of the associated graded of `C / U C`
/// with respect to the Alexander grading.
pub fn hfk_hat(c: &KnotComplex) -> HfkHat {
    let dims = graded_homology_dims(
        &c.base,
        |x, y, p| p == 0 && c.alexander[x] == c.alexander[y],
        |i| (c.base.maslov(i), c.alexander[i]),
    );
    let reduced = if c.ambient.is_s3() {
        persistence(c).ok().and_then(|p| match p.essential.as_slice() {
            [e] => {
                let key = (c.base.maslov(*e), c.alexander[*e]);
                let mut r = dims.clone();
                match r.get_mut(&key) {
                    Some(v) if *v > 1 => *v -= 1,
                    Some(_) => {
                        r.remove(&key);
                    }
                    None => return None,
                }
                Some(r)
            }
            _ => None,
        })
    } else {
        None
    };
    HfkHat { dims, reduced }
}

/// Homology of the sub-complex of `C / U C` spanned by generators with
/// Alexander grading at most `i`.
pub fn filtration_homology(c: &KnotComplex, i: i64) -> GradedTable {
    let keep: Vec<usize> = (0..c.len()).filter(|&k| c.alexander[k] <= i).collect();
    let sub = c.base.restricted(&keep);
    graded_homology_dims(&sub, |_, _, p| p == 0, |k| sub.maslov(k))
}

/// Persistence pairing of the Alexander-filtered complex `C / U C`.
struct Persistence {
    /// `(y, z)` with `dy = z + (lower filtration)`.
    pairs: Vec<(usize, usize)>,
    essential: Vec<usize>,
}

/// Standard column reduction with generators ordered by `(A, index)`.
fn persistence(c: &KnotComplex) -> Result<Persistence> {
    let n = c.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (c.alexander[i], i));
    let mut pos = vec![0; n];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k;
    }
    // Columns in filtration order; entries are filtration positions.
    let mut cols: Vec<BitVec> = vec![BitVec::zeros(n); n];
    for a in c.base.arrows() {
        if a.upower == 0 {
            cols[pos[a.from]].toggle(pos[a.to]);
        }
    }
    let low = |v: &BitVec| v.ones().last();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut pairs = Vec::new();
    for j in 0..n {
        while let Some(l) = low(&cols[j]) {
            match owner.get(&l) {
                Some(&k) => {
                    let ck = cols[k].clone();
                    cols[j].xor_assign(&ck);
                }
                None => break,
            }
        }
        if let Some(l) = low(&cols[j]) {
            if l >= j {
                return Err(Error::InvalidComplex("U^0 differential is not filtered".into()));
            }
            owner.insert(l, j);
            pairs.push((order[j], order[l]));
        }
    }
    let essential = (0..n).filter(|&j| cols[j].is_zero() && !owner.contains_key(&j)).map(|j| order[j]).collect();
    Ok(Persistence { pairs, essential })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotNumerics {
    pub tau: i64,
    pub genus: i64,
}

/// tau (the filtration level at which the generator of `HF-hat(S^3)` is born)
/// and the genus (max |A| of the filtered-reduced complex).
pub fn knot_numerics(c: &KnotComplex) -> Result<KnotNumerics> {
    if !c.ambient.is_s3() {
        return Err(Error::NontrivialAmbient(c.ambient.name.clone()));
    }
    let p = persistence(c)?;
    let [e] = p.essential.as_slice() else {
        return Err(Error::InvalidComplex(format!(
            "C / UC has {} surviving classes; a knot in S^3 has exactly one",
            p.essential.len()
        )));
    };
    Ok(KnotNumerics { tau: c.alexander[*e], genus: reduce_canonical(c).max_abs_alexander() })
}

/// One pair `(y_j, z_j)` of a filtered basis: `y_j` at `(m_j, A_j)` and
/// `d y_j = z_j` with `z_j` at `(m_j - 1, A_j - d_j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisPair {
    pub maslov: Grading,
    pub alexander: i64,
    pub length: i64,
}

/// A filtered basis `x, y_j, z_j` of the reduced hat complex of a tau = 0 knot;
/// `x` sits at `(0, 0)` and only the pairs are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedBasisForm {
    pairs: Vec<BasisPair>,
}

impl ReducedBasisForm {
    pub fn new(mut pairs: Vec<BasisPair>) -> Result<Self> {
        if let Some(p) = pairs.iter().find(|p| p.length <= 0) {
            return Err(Error::InvalidArgument(format!("pair length must be positive: {p:?}")));
        }
        pairs.sort();
        Ok(ReducedBasisForm { pairs })
    }

    pub fn pairs(&self) -> &[BasisPair] {
        &self.pairs
    }

    /// The basis of the mirror knot: `(m, A, d) -> (1 - m, d - A, d)`.
    pub fn mirrored(&self) -> ReducedBasisForm {
        ReducedBasisForm::new(
            self.pairs
                .iter()
                .map(|p| BasisPair {
                    maslov: Grading::int(1) - p.maslov,
                    alexander: p.length - p.alexander,
                    length: p.length,
                })
                .collect(),
        )
        .expect("mirroring keeps lengths positive")
    }

    /// Largest `m_j`, i.e. the top grading of reduced HFK-hat.
    pub fn max_maslov(&self) -> Option<Grading> {
        self.pairs.iter().flat_map(|p| [p.maslov, p.maslov - 1]).max()
    }
}

/// Extracts the filtered basis of a tau = 0 knot in S^3.
pub fn reduced_basis_form(c: &KnotComplex) -> Result<ReducedBasisForm> {
    if !c.ambient.is_s3() {
        return Err(Error::NontrivialAmbient(c.ambient.name.clone()));
    }
    let r = reduce_canonical(c);
    let p = persistence(&r)?;
    let [e] = p.essential.as_slice() else {
        return Err(Error::PairingFailed(p.essential.iter().map(|&i| r.base.name(i).to_string()).collect()));
    };
    if r.alexander[*e] != 0 {
        return Err(Error::NonzeroTau(r.alexander[*e]));
    }
    if r.base.maslov(*e) != Grading::ZERO {
        return Err(Error::InvalidComplex(format!(
            "surviving generator {:?} is not in Maslov grading 0",
            r.base.name(*e)
        )));
    }
    let pairs = p
        .pairs
        .iter()
        .map(|&(y, z)| BasisPair {
            maslov: r.base.maslov(y),
            alexander: r.alexander[y],
            length: r.alexander[y] - r.alexander[z],
        })
        .filter(|bp| bp.length > 0)
        .collect();
    ReducedBasisForm::new(pairs)
}

/// A knot is nontrivial when its HFK-hat has total rank above one.
pub fn is_nontrivial(c: &KnotComplex) -> bool {
    hfk_hat(c).total() > 1
}
