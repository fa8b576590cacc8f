//! Finitely generated free graded complexes over F2[U].
//!
//! A complex is a list of named generators with Maslov gradings and a sparse
//! differential whose entries are single monomials `U^p`. `U` has Maslov
//! degree -2 and the differential has degree -1, so an entry `x -> y` of power
//! `p` must satisfy `m(y) - 2p = m(x) - 1`. Because of this homogeneity the
//! power of any entry (and of any entry of a degree-preserving map) is
//! determined by the gradings, which is what lets the algorithms in
//! [`crate::homology`] work on plain F2 bit rows.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::BitVec;
use crate::grading::Grading;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub maslov: Grading,
}

/// One differential entry `from -> U^upower * to`, by generator index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub upower: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawComplex", into = "RawComplex")]
pub struct FreeComplex {
    generators: Vec<Generator>,
    arrows: Vec<Arrow>,
}

#[derive(Serialize, Deserialize)]
struct RawArrow {
    from: String,
    to: String,
    upower: u32,
}

#[derive(Serialize, Deserialize)]
struct RawComplex {
    generators: Vec<Generator>,
    differential: Vec<RawArrow>,
}

impl TryFrom<RawComplex> for FreeComplex {
    type Error = Error;

    fn try_from(raw: RawComplex) -> Result<Self> {
        let arrows: Vec<(String, String, u32)> =
            raw.differential.into_iter().map(|a| (a.from, a.to, a.upower)).collect();
        FreeComplex::from_named(raw.generators, &arrows)
    }
}

impl From<FreeComplex> for RawComplex {
    fn from(c: FreeComplex) -> Self {
        let differential = c
            .arrows
            .iter()
            .map(|a| RawArrow {
                from: c.generators[a.from].name.clone(),
                to: c.generators[a.to].name.clone(),
                upower: a.upower,
            })
            .collect();
        RawComplex { generators: c.generators, differential }
    }
}

impl FreeComplex {
    /// Builds a complex from generators and index-based arrows. Names must be
    /// distinct and each ordered pair may carry at most one monomial.
    /// Homogeneity and d^2 = 0 are *not* checked here; see [`validate_complex`].
    pub fn new(generators: Vec<Generator>, mut arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &generators {
            if g.name.is_empty() {
                return Err(Error::InvalidComplex("empty generator name".into()));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(Error::InvalidComplex(format!("duplicate generator {:?}", g.name)));
            }
        }
        let n = generators.len();
        let mut pairs = HashSet::new();
        for a in &arrows {
            if a.from >= n || a.to >= n {
                return Err(Error::InvalidComplex(format!("arrow index out of range: {a:?}")));
            }
            if !pairs.insert((a.from, a.to)) {
                return Err(Error::InvalidComplex(format!(
                    "more than one monomial from {:?} to {:?}",
                    generators[a.from].name, generators[a.to].name
                )));
            }
        }
        arrows.sort();
        Ok(FreeComplex { generators, arrows })
    }

    /// Builds a complex from generators and name-based arrows.
    pub fn from_named<S: AsRef<str>>(generators: Vec<Generator>, arrows: &[(S, S, u32)]) -> Result<Self> {
        let index: HashMap<&str, usize> = generators.iter().enumerate().map(|(i, g)| (g.name.as_str(), i)).collect();
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::InvalidComplex(format!("arrow mentions unknown generator {s:?}")))
        };
        let arrows = arrows
            .iter()
            .map(|(f, t, p)| Ok(Arrow { from: lookup(f.as_ref())?, to: lookup(t.as_ref())?, upower: *p }))
            .collect::<Result<Vec<_>>>()?;
        FreeComplex::new(generators, arrows)
    }

    /// Builds a complex whose arrow powers are inferred from the gradings.
    /// Fails if an arrow cannot be homogeneous.
    pub fn from_graded_rows(generators: Vec<Generator>, targets: &[Vec<usize>]) -> Result<Self> {
        let mut arrows = Vec::new();
        for (x, ys) in targets.iter().enumerate() {
            for &y in ys {
                let p = implied_power(generators[x].maslov, generators[y].maslov, -1).ok_or_else(|| {
                    Error::InvalidComplex(format!(
                        "no homogeneous power from {:?} to {:?}",
                        generators[x].name, generators[y].name
                    ))
                })?;
                arrows.push(Arrow { from: x, to: y, upower: p });
            }
        }
        FreeComplex::new(generators, arrows)
    }

    pub fn empty() -> Self {
        FreeComplex { generators: Vec::new(), arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    pub fn maslov(&self, i: usize) -> Grading {
        self.generators[i].maslov
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Targets of the differential of each generator as bit rows.
    pub fn boundary_rows(&self) -> Vec<BitVec> {
        let n = self.len();
        let mut rows = vec![BitVec::zeros(n); n];
        for a in &self.arrows {
            rows[a.from].set(a.to, true);
        }
        rows
    }

    /// Shifts every Maslov grading by `by`.
    pub fn shifted(&self, by: Grading) -> FreeComplex {
        let mut c = self.clone();
        for g in &mut c.generators {
            g.maslov += by;
        }
        c
    }

    /// Renames every generator to `prefix + name`.
    pub fn prefixed(&self, prefix: &str) -> FreeComplex {
        let mut c = self.clone();
        for g in &mut c.generators {
            g.name = format!("{prefix}{}", g.name);
        }
        c
    }

    /// Direct sum; generator names must stay distinct.
    pub fn direct_sum(&self, other: &FreeComplex) -> Result<FreeComplex> {
        let off = self.len();
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        let mut arrows = self.arrows.clone();
        arrows.extend(other.arrows.iter().map(|a| Arrow { from: a.from + off, to: a.to + off, upower: a.upower }));
        FreeComplex::new(generators, arrows)
    }

    /// The sub-complex-or-quotient spanned by `keep` (in the given order);
    /// arrows leaving the set are dropped. The caller is responsible for the
    /// result being a complex.
    pub fn restricted(&self, keep: &[usize]) -> FreeComplex {
        let mut pos = vec![usize::MAX; self.len()];
        for (k, &i) in keep.iter().enumerate() {
            pos[i] = k;
        }
        let generators = keep.iter().map(|&i| self.generators[i].clone()).collect();
        let arrows = self
            .arrows
            .iter()
            .filter(|a| pos[a.from] != usize::MAX && pos[a.to] != usize::MAX)
            .map(|a| Arrow { from: pos[a.from], to: pos[a.to], upower: a.upower })
            .collect();
        FreeComplex::new(generators, arrows).expect("restriction of a well-formed complex")
    }

    /// Number of generators in each Maslov grading.
    pub fn graded_counts(&self) -> BTreeMap<Grading, usize> {
        let mut out = BTreeMap::new();
        for g in &self.generators {
            *out.entry(g.maslov).or_insert(0) += 1;
        }
        out
    }

    /// Connected components of the underlying undirected arrow graph, each a
    /// sorted list of generator indices, ordered by their smallest index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for a in &self.arrows {
            let (r1, r2) = (find(&mut parent, a.from), find(&mut parent, a.to));
            if r1 != r2 {
                parent[r1.max(r2)] = r1.min(r2);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }
}

/// The exponent `p >= 0` with `to - 2p = from + degree`, if there is one.
pub fn implied_power(from: Grading, to: Grading, degree: i64) -> Option<u32> {
    let p = to.half_gap(from + degree)?;
    u32::try_from(p).ok()
}

/// Outcome of [`validate_complex`]: every violation names the generators
/// involved.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub d_squared: Vec<String>,
    pub homogeneity: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.d_squared.is_empty() && self.homogeneity.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            let mut all = self.homogeneity;
            all.extend(self.d_squared);
            Err(Error::InvalidComplex(all.join("; ")))
        }
    }
}

/// Checks d^2 = 0 over F2[U] and grading homogeneity of every entry.
pub fn validate_complex(c: &FreeComplex) -> ValidationReport {
    let mut report = ValidationReport::default();
    for a in c.arrows() {
        let (mx, my) = (c.maslov(a.from), c.maslov(a.to));
        if my - Grading::int(2 * i64::from(a.upower)) != mx - 1 {
            report.homogeneity.push(format!(
                "{} (m={}) -> U^{} {} (m={}) does not lower grading by one",
                c.name(a.from),
                mx,
                a.upower,
                c.name(a.to),
                my
            ));
        }
    }
    let mut out: Vec<Vec<(usize, u32)>> = vec![Vec::new(); c.len()];
    for a in c.arrows() {
        out[a.from].push((a.to, a.upower));
    }
    for x in 0..c.len() {
        let mut parity: BTreeMap<(usize, u32), bool> = BTreeMap::new();
        for &(y, p) in &out[x] {
            for &(z, q) in &out[y] {
                let e = parity.entry((z, p + q)).or_insert(false);
                *e = !*e;
            }
        }
        for ((z, p), odd) in parity {
            if odd {
                report.d_squared.push(format!("d^2({}) contains U^{} {}", c.name(x), p, c.name(z)));
            }
        }
    }
    report
}

fn pair_name(a: &str, b: &str) -> String {
    let wrap = |s: &str| if s.contains('*') { format!("({s})") } else { s.to_string() };
    format!("{}*{}", wrap(a), wrap(b))
}

/// Tensor product over F2[U]. Generator `(i, j)` is named `a*b` (factors that
/// are themselves products are parenthesised) and sits at index
/// `i * c2.len() + j`. The differential obeys the Leibniz rule, which needs no
/// signs in characteristic two.
pub fn tensor_complexes(c1: &FreeComplex, c2: &FreeComplex) -> FreeComplex {
    let n2 = c2.len();
    let mut generators = Vec::with_capacity(c1.len() * n2);
    for g1 in c1.generators() {
        for g2 in c2.generators() {
            generators.push(Generator { name: pair_name(&g1.name, &g2.name), maslov: g1.maslov + g2.maslov });
        }
    }
    let mut arrows = Vec::new();
    for a in c1.arrows() {
        for j in 0..n2 {
            arrows.push(Arrow { from: a.from * n2 + j, to: a.to * n2 + j, upower: a.upower });
        }
    }
    for i in 0..c1.len() {
        for a in c2.arrows() {
            arrows.push(Arrow { from: i * n2 + a.from, to: i * n2 + a.to, upower: a.upower });
        }
    }
    FreeComplex::new(generators, arrows).expect("tensor of well-formed complexes is well-formed")
}
