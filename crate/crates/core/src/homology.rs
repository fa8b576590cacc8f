//! Homology of free complexes over F2[U] as graded F2[U]-modules.
//!
//! All reductions here operate on bit rows: because the complex is
//! grading-homogeneous, the power of `U` on any entry is implied by the
//! gradings of its endpoints, so adding `U^q` times one row to another is just
//! an XOR. The pivot `x -> y` of power `p` performs the base change
//! `x' <- x' + U^(p' - p) x` on every other generator hitting `y`, after which
//! `x` and `y` span a summand `F[U] --U^p--> F[U]` and are split off. Pivots are
//! taken in order of increasing power, so every base change has a
//! non-negative exponent; ties are broken by the (source name, target name)
//! pair, which makes intermediate bases reproducible.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::complex::{implied_power, validate_complex, FreeComplex, Generator};
use crate::error::Result;
use crate::f2::{rank_of_rows, BitVec};
use crate::grading::Grading;

/// A torsion summand `F[U]/U^length` whose top nonzero element sits in `grading`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Torsion {
    pub grading: Grading,
    pub length: u32,
}

impl Torsion {
    pub fn new(grading: Grading, length: u32) -> Self {
        assert!(length > 0, "torsion summands have positive length");
        Torsion { grading, length }
    }
}

/// A finitely generated graded F2[U]-module presented as towers plus torsion.
///
/// In the minus convention a tower is a free summand `F[U]` recorded by its top
/// grading; in the plus convention it is `T^+ = F[U, U^-1]/U F[U]` recorded by
/// its bottom grading. Both multisets are kept sorted, so structural equality
/// is module isomorphism.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "RawDecomposition")]
pub struct FUDecomposition {
    towers: Vec<Grading>,
    torsion: Vec<Torsion>,
}

#[derive(Deserialize)]
struct RawDecomposition {
    towers: Vec<Grading>,
    torsion: Vec<Torsion>,
}

impl From<RawDecomposition> for FUDecomposition {
    fn from(r: RawDecomposition) -> Self {
        FUDecomposition::new(r.towers, r.torsion)
    }
}

impl FUDecomposition {
    pub fn new(mut towers: Vec<Grading>, mut torsion: Vec<Torsion>) -> Self {
        towers.sort();
        torsion.sort();
        FUDecomposition { towers, torsion }
    }

    pub fn towers(&self) -> &[Grading] {
        &self.towers
    }

    pub fn torsion(&self) -> &[Torsion] {
        &self.torsion
    }

    pub fn is_empty(&self) -> bool {
        self.towers.is_empty() && self.torsion.is_empty()
    }

    pub fn shifted(&self, by: Grading) -> Self {
        FUDecomposition::new(
            self.towers.iter().map(|g| *g + by).collect(),
            self.torsion.iter().map(|t| Torsion::new(t.grading + by, t.length)).collect(),
        )
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut towers = self.towers.clone();
        towers.extend(&other.towers);
        let mut torsion = self.torsion.clone();
        torsion.extend(&other.torsion);
        FUDecomposition::new(towers, torsion)
    }

    /// Graded F2-dimensions of the torsion part: a summand of length `k`
    /// with top `g` contributes one dimension at `g, g-2, ..., g-2(k-1)`.
    pub fn torsion_ranks(&self) -> BTreeMap<Grading, u64> {
        let mut out = BTreeMap::new();
        for t in &self.torsion {
            for i in 0..i64::from(t.length) {
                *out.entry(t.grading - 2 * i).or_insert(0) += 1;
            }
        }
        out
    }

    /// Total F2-dimension of the torsion part.
    pub fn torsion_dimension(&self) -> u64 {
        self.torsion.iter().map(|t| u64::from(t.length)).sum()
    }
}

/// `T(d)` for a tower with end grading `d`, `F(g)` for a length-one torsion
/// summand, `F[U]/U^k(g)` for longer ones; repeated summands get an exponent.
impl fmt::Display for FUDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(String, usize)> = Vec::new();
        let mut push = |s: String| match parts.last_mut() {
            Some((last, n)) if *last == s => *n += 1,
            _ => parts.push((s, 1)),
        };
        for t in self.towers.iter().rev() {
            push(format!("T({t})"));
        }
        for t in self.torsion.iter().rev() {
            push(match t.length {
                1 => format!("F({})", t.grading),
                k => format!("F[U]/U^{k}({})", t.grading),
            });
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        let body: Vec<String> = parts.into_iter().map(|(s, n)| if n == 1 { s } else { format!("{s}^{n}") }).collect();
        f.write_str(&body.join(" ⊕ "))
    }
}

/// Which flavour a decomposition describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Minus,
    Plus,
}

/// Computes H(C) as an F2[U]-module (minus convention: free summands are
/// recorded by their top grading). Invalid complexes are rejected.
///
/// The complex is split into connected components first; components of the
/// same shape (same relative gradings and arrows) are reduced once.
pub fn homology_decomposition(c: &FreeComplex) -> Result<FUDecomposition> {
    validate_complex(c).into_result()?;
    Ok(decompose_unchecked(c))
}

pub(crate) fn decompose_unchecked(c: &FreeComplex) -> FUDecomposition {
    type ShapeKey = (Vec<Grading>, Vec<(usize, usize)>);
    let mut memo: HashMap<ShapeKey, FUDecomposition> = HashMap::new();
    let mut towers = Vec::new();
    let mut torsion = Vec::new();
    for comp in c.components() {
        let sub = c.restricted(&comp);
        let base = sub.maslov(0);
        let key: ShapeKey = (
            sub.generators().iter().map(|g| g.maslov - base).collect(),
            sub.arrows().iter().map(|a| (a.from, a.to)).collect(),
        );
        let rel = memo.entry(key).or_insert_with(|| pivot_reduce(&sub.shifted(-base))).shifted(base);
        towers.extend(rel.towers);
        torsion.extend(rel.torsion);
    }
    FUDecomposition::new(towers, torsion)
}

fn name_ranks(c: &FreeComplex) -> Vec<usize> {
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&a, &b| c.name(a).cmp(c.name(b)));
    let mut rank = vec![0; c.len()];
    for (r, i) in order.into_iter().enumerate() {
        rank[i] = r;
    }
    rank
}

fn power(c: &FreeComplex, x: usize, y: usize) -> u32 {
    implied_power(c.maslov(x), c.maslov(y), -1).expect("homogeneous entry")
}

fn pivot_reduce(c: &FreeComplex) -> FUDecomposition {
    let n = c.len();
    let rank = name_ranks(c);
    let mut rows = c.boundary_rows();
    let mut alive = vec![true; n];
    let mut torsion = Vec::new();
    loop {
        let mut best: Option<(u32, usize, usize, usize, usize)> = None;
        for x in (0..n).filter(|&x| alive[x]) {
            for y in rows[x].ones() {
                let key = (power(c, x, y), rank[x], rank[y], x, y);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        let Some((p, _, _, x, y)) = best else { break };
        let px = rows[x].clone();
        for z in 0..n {
            if z != x && alive[z] && rows[z].get(y) {
                rows[z].xor_assign(&px);
            }
        }
        if p > 0 {
            torsion.push(Torsion::new(c.maslov(y), p));
        }
        alive[x] = false;
        alive[y] = false;
        rows[x] = BitVec::zeros(n);
        rows[y] = BitVec::zeros(n);
        // The base changes above also rewrite coordinates (a vector with
        // coefficient on x' gains one on x); d^2 = 0 forces the resulting
        // x-coordinates to vanish, so the column is simply cleared.
        for row in rows.iter_mut() {
            row.set(x, false);
        }
    }
    let towers = (0..n).filter(|&i| alive[i]).map(|i| c.maslov(i)).collect();
    FUDecomposition::new(towers, torsion)
}

/// Re-expresses a decomposition in plus notation.
///
/// From the minus convention (universal coefficients for `HF^+` of the same
/// free complex): a free summand with top `t` becomes a tower `T^+` with bottom
/// `t + 2`, and a torsion summand `F[U]/U^k` with top `t` becomes the torsion
/// summand `F[U]/U^k` with top `t + 1`. The plus convention is left unchanged.
pub fn plus_presentation(h: &FUDecomposition, convention: Convention) -> FUDecomposition {
    match convention {
        Convention::Plus => h.clone(),
        Convention::Minus => FUDecomposition::new(
            h.towers.iter().map(|t| *t + 2).collect(),
            h.torsion.iter().map(|t| Torsion::new(t.grading + 1, t.length)).collect(),
        ),
    }
}

/// Graded dimensions of the homology of the sub-differential consisting of
/// the arrows accepted by `keep`. Generators are grouped by `key`; every kept
/// arrow must run between groups in a way that is determined by the source
/// group alone (as it is for homogeneous differentials of degree -1).
pub fn graded_homology_dims<K: Ord + Clone + Hash>(
    c: &FreeComplex,
    keep: impl Fn(usize, usize, u32) -> bool,
    key: impl Fn(usize) -> K,
) -> BTreeMap<K, usize> {
    let n = c.len();
    let mut rows = vec![BitVec::zeros(n); n];
    let mut target_group: HashMap<K, K> = HashMap::new();
    for a in c.arrows() {
        if keep(a.from, a.to, a.upower) {
            rows[a.from].set(a.to, true);
            let (kf, kt) = (key(a.from), key(a.to));
            let prev = target_group.entry(kf).or_insert_with(|| kt.clone());
            assert!(*prev == kt, "sub-differential is not homogeneous for the grouping");
        }
    }
    let mut groups: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        groups.entry(key(i)).or_default().push(i);
    }
    let out_rank: BTreeMap<K, usize> = groups
        .iter()
        .map(|(k, members)| (k.clone(), rank_of_rows(members.iter().map(|&i| rows[i].clone()).collect())))
        .collect();
    let mut dims: BTreeMap<K, i64> = groups.iter().map(|(k, m)| (k.clone(), m.len() as i64)).collect();
    for (k, r) in &out_rank {
        *dims.get_mut(k).unwrap() -= *r as i64;
        if let Some(t) = target_group.get(k) {
            *dims.get_mut(t).expect("target group exists") -= *r as i64;
        }
    }
    dims.into_iter()
        .filter(|(_, d)| *d != 0)
        .map(|(k, d)| (k, usize::try_from(d).expect("dimensions are non-negative")))
        .collect()
}

/// Homology of `C / U C` by Maslov grading.
pub fn hat_homology(c: &FreeComplex) -> BTreeMap<Grading, usize> {
    graded_homology_dims(c, |_, _, p| p == 0, |i| c.maslov(i))
}

/// Result of cancelling `U^0` entries while tracking the homotopy equivalence.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// The reduced complex; its generators keep their original names.
    pub complex: FreeComplex,
    /// Original index of each reduced generator.
    pub kept: Vec<usize>,
    /// Chain map original -> reduced: row `o` lists reduced generators.
    pub project: Vec<BitVec>,
    /// Chain map reduced -> original: row `z` lists original generators.
    pub include: Vec<BitVec>,
}

/// Cancels `U^0` entries `x -> y` for which `allowed(x, y)` holds (indices of
/// the input complex), smallest (source name, target name) first, until none
/// remain. Returns the reduced complex with the two mutually inverse (up to
/// homotopy) chain maps. All maps are degree-preserving, so their `U`-powers
/// are implied by gradings.
///
/// Connected components are reduced independently; since cancellations in one
/// component never touch another, this gives the same result as a global pass.
pub fn cancel_units(c: &FreeComplex, allowed: impl Fn(usize, usize) -> bool) -> Reduction {
    let n = c.len();
    let mut kept = Vec::new();
    let mut local_results = Vec::new();
    for comp in c.components() {
        let sub = c.restricted(&comp);
        let local = cancel_component(&sub, |x, y| allowed(comp[x], comp[y]));
        kept.extend(local.kept.iter().map(|&k| comp[k]));
        local_results.push((comp, local));
    }
    kept.sort_unstable();
    let mut reduced_pos = vec![usize::MAX; n];
    for (k, &o) in kept.iter().enumerate() {
        reduced_pos[o] = k;
    }
    let mut project = vec![BitVec::zeros(kept.len()); n];
    let mut include = vec![BitVec::zeros(n); kept.len()];
    for (comp, local) in &local_results {
        for (lo, row) in local.project.iter().enumerate() {
            for lk in row.ones() {
                project[comp[lo]].set(reduced_pos[comp[local.kept[lk]]], true);
            }
        }
        for (lk, row) in local.include.iter().enumerate() {
            let target = &mut include[reduced_pos[comp[local.kept[lk]]]];
            for lo in row.ones() {
                target.set(comp[lo], true);
            }
        }
    }
    let generators: Vec<Generator> = kept.iter().map(|&i| c.generators()[i].clone()).collect();
    let mut targets = vec![Vec::new(); kept.len()];
    for (comp, local) in &local_results {
        for a in local.complex.arrows() {
            targets[reduced_pos[comp[local.kept[a.from]]]].push(reduced_pos[comp[local.kept[a.to]]]);
        }
    }
    let complex = FreeComplex::from_graded_rows(generators, &targets).expect("cancellation preserves homogeneity");
    Reduction { complex, kept, project, include }
}

fn cancel_component(c: &FreeComplex, allowed: impl Fn(usize, usize) -> bool) -> Reduction {
    let n = c.len();
    let rank = name_ranks(c);
    let mut rows = c.boundary_rows();
    let mut alive = vec![true; n];
    let mut include: Vec<BitVec> = (0..n).map(|i| BitVec::from_indices(n, [i])).collect();
    let mut project = include.clone();
    loop {
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for x in (0..n).filter(|&x| alive[x]) {
            for y in rows[x].ones() {
                if power(c, x, y) == 0 && allowed(x, y) {
                    let key = (rank[x], rank[y], x, y);
                    if best.map_or(true, |b| key < b) {
                        best = Some(key);
                    }
                }
            }
        }
        let Some((_, _, x, y)) = best else { break };
        let px = rows[x].clone();
        let ix = include[x].clone();
        for z in 0..n {
            if z != x && alive[z] && rows[z].get(y) {
                rows[z].xor_assign(&px);
                include[z].xor_assign(&ix);
            }
        }
        for row in project.iter_mut() {
            if row.get(y) {
                row.xor_assign(&px);
            }
        }
        alive[x] = false;
        alive[y] = false;
        // As in `pivot_reduce`, the x-column vanishes once coordinates are
        // rewritten; stale bits must not be picked as pivots.
        for row in rows.iter_mut() {
            row.set(x, false);
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    let restrict = |v: &BitVec| {
        BitVec::from_indices(kept.len(), kept.iter().enumerate().filter(|(_, &o)| v.get(o)).map(|(k, _)| k))
    };
    let generators: Vec<Generator> = kept.iter().map(|&i| c.generators()[i].clone()).collect();
    let targets: Vec<Vec<usize>> = kept.iter().map(|&i| restrict(&rows[i]).ones().collect()).collect();
    let complex = FreeComplex::from_graded_rows(generators, &targets).expect("cancellation preserves homogeneity");
    Reduction {
        complex,
        project: project.iter().map(restrict).collect(),
        include: kept.iter().map(|&i| include[i].clone()).collect(),
        kept,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str, m: i64) -> Generator {
        Generator { name: name.into(), maslov: Grading::int(m) }
    }

    #[test]
    fn single_generator_is_a_tower() {
        let c = FreeComplex::new(vec![g("x", 3)], vec![]).unwrap();
        let h = homology_decomposition(&c).unwrap();
        assert_eq!(h, FUDecomposition::new(vec![Grading::int(3)], vec![]));
    }

    #[test]
    fn u_power_arrow_gives_torsion() {
        for k in 1..4u32 {
            // d y = U^k x with m(x) - 2k = m(y) - 1
            let c = FreeComplex::from_named(vec![g("y", 0), g("x", 2 * i64::from(k) - 1)], &[("y", "x", k)]).unwrap();
            let h = homology_decomposition(&c).unwrap();
            assert_eq!(h.torsion(), &[Torsion::new(Grading::int(2 * i64::from(k) - 1), k)]);
            assert!(h.towers().is_empty());
        }
    }

    #[test]
    fn box_is_acyclic() {
        let c = FreeComplex::from_named(
            vec![g("a", 0), g("b", 1), g("c", -1), g("d", 0)],
            &[("a", "b", 1), ("a", "c", 0), ("b", "d", 0), ("c", "d", 1)],
        )
        .unwrap();
        assert!(homology_decomposition(&c).unwrap().is_empty());
    }

    #[test]
    fn plus_presentation_shifts() {
        let h = FUDecomposition::new(vec![Grading::int(-2)], vec![Torsion::new(Grading::int(-1), 1)]);
        let p = plus_presentation(&h, Convention::Minus);
        assert_eq!(p.towers(), &[Grading::ZERO]);
        assert_eq!(p.torsion(), &[Torsion::new(Grading::ZERO, 1)]);
        assert_eq!(plus_presentation(&p, Convention::Plus), p);
        assert!(plus_presentation(&FUDecomposition::default(), Convention::Minus).is_empty());
    }

    #[test]
    fn cancellation_tracks_maps() {
        // a -> b (U^0), a -> c (U^1), b -> d (U^1), c -> d (U^0): cancel everything.
        let c = FreeComplex::from_named(
            vec![g("a", 0), g("b", -1), g("c", 1), g("d", 0)],
            &[("a", "b", 0), ("a", "c", 1), ("c", "d", 0), ("b", "d", 1)],
        )
        .unwrap();
        let r = cancel_units(&c, |_, _| true);
        assert!(r.complex.is_empty());
        let single = FreeComplex::new(vec![g("x", 0)], vec![]).unwrap();
        let r = cancel_units(&single, |_, _| true);
        assert_eq!(r.kept, vec![0]);
        assert_eq!(r.project[0], BitVec::from_indices(1, [0]));
    }

    #[test]
    fn hat_homology_of_torsion_pair() {
        let c = FreeComplex::from_named(vec![g("y", 0), g("x", 1)], &[("y", "x", 1)]).unwrap();
        let h = hat_homology(&c);
        assert_eq!(h.get(&Grading::ZERO), Some(&1));
        assert_eq!(h.get(&Grading::int(1)), Some(&1));
    }
}
