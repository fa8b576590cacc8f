//! The integer surgery mapping cone and Floer-homology bookkeeping around it.
//!
//! The cone is assembled in the minus flavour. For a knot generator `x` and an
//! integer `s`, the complex `A_s` is generated over F2[U] by `U^{k_x} x` with
//! `k_x = max(1, A(x) - s + 1)` (the part of CFK^infinity with `max(i, j - s) < 0`)
//! and `B_s` by `U x` (the part with `i < 0`). The plus-flavoured cone is the
//! quotient of the infinity cone by this one, so its homology is read off from
//! the minus homology by [`plus_presentation`].
//!
//! * `v_s: A_s -> B_s` is the inclusion: `U^{k_x} x -> U^{k_x - 1} (U x)`;
//! * `h_s: A_s -> B_{s+n}` translates by `U^s` and applies the flip:
//!   `U^{k_x} x -> U^{k_x + s - A(x) - 1} (U ιx)`.
//!
//! Both maps lower the grading by one once `B_s` is shifted by `σ(B_s)` and
//! `A_s` by `σ(B_s) + 1`, where `σ(B_{s+n}) = σ(B_s) + 2s`. The anchor `σ(B_0)` is
//! `-1/2` for `n = 0` (the torsion class of zero-surgery), `0` for `n = -1` and
//! `-1` for `n = +1`; these make zero-surgery on the unknot `T_(1/2) ⊕ T_(-1/2)`,
//! and `±1`-surgery on the unknot `T_(0)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cfk::KnotComplex;
use crate::complex::{tensor_complexes, FreeComplex, Generator};
use crate::error::{Error, Result};
use crate::f2::BitVec;
use crate::grading::Grading;
use crate::homology::{cancel_units, homology_decomposition, plus_presentation, Convention, FUDecomposition, Torsion};

/// Which side of the cone a summand lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// The truncated mapping cone as one free complex, with every generator
/// labelled by its summand and knot generator.
#[derive(Clone, Debug)]
pub struct MappingCone {
    pub n: i64,
    pub a_window: Vec<i64>,
    pub b_window: Vec<i64>,
    /// `σ(B_s)` for every `s` in the B window.
    pub b_shifts: BTreeMap<i64, Grading>,
    pub complex: FreeComplex,
    /// `(side, s, knot generator index)` per cone generator.
    pub labels: Vec<(Side, i64, usize)>,
    /// Entries of `v` and `h` as (A-generator, B-generator) index pairs. An
    /// entry hit by both maps cancels in the total differential.
    pub v_map: Vec<(usize, usize)>,
    pub h_map: Vec<(usize, usize)>,
}

fn b_shift(n: i64, t: i64) -> Grading {
    match n {
        0 => Grading::half(-1),
        -1 => {
            // σ(B_{s-1}) = σ(B_s) + 2s
            let mut g = Grading::ZERO;
            if t < 0 {
                for s in (t + 1..=0).rev() {
                    g += Grading::int(2 * s);
                }
            } else {
                for s in 1..=t {
                    g -= Grading::int(2 * s);
                }
            }
            g
        }
        1 => {
            // σ(B_{s+1}) = σ(B_s) + 2s
            let mut g = Grading::int(-1);
            if t > 0 {
                for s in 0..t {
                    g += Grading::int(2 * s);
                }
            } else {
                for s in t..0 {
                    g -= Grading::int(2 * s);
                }
            }
            g
        }
        _ => unreachable!("checked by caller"),
    }
}

fn a_power(alexander: i64, s: i64) -> i64 {
    (alexander - s + 1).max(1)
}

/// Builds the truncated cone for `n ∈ {-1, 0, 1}`.
///
/// With `b = max(g - 1, 0)` (`g` the largest |A| of the complex) the window
/// is `A_0 -> B_0` for `n = 0`, `A_{-b..b} -> B_{-b-1..b}` for `n = -1` and
/// `A_{-b..b} -> B_{-b+1..b}` for `n = 1`. Outside it `v_s` (for `s ≥ g`) or
/// `h_s` (for `s ≤ -g`) is an isomorphism and the omitted part is acyclic.
pub fn build_cone(c: &KnotComplex, n: i64) -> Result<MappingCone> {
    let flip = c.flip().ok_or(Error::MissingFlip)?;
    if !(-1..=1).contains(&n) {
        return Err(Error::UnsupportedSurgery(n));
    }
    let g = c.max_abs_alexander();
    let b = (g - 1).max(0);
    let (a_window, b_window): (Vec<i64>, Vec<i64>) = match n {
        0 => (vec![0], vec![0]),
        -1 => ((-b..=b).collect(), (-b - 1..=b).collect()),
        _ => ((-b..=b).collect(), (-b + 1..=b).collect()),
    };
    let base = c.base();
    let kn = c.len();
    let mut generators = Vec::new();
    let mut labels = Vec::new();
    let b_shifts: BTreeMap<i64, Grading> = b_window.iter().map(|&t| (t, b_shift(n, t))).collect();
    for &s in &a_window {
        let sigma = b_shift(n, s) + 1;
        for x in 0..kn {
            let k = a_power(c.alexander(x), s);
            generators.push(Generator {
                name: format!("A{s}:{}", base.name(x)),
                maslov: base.maslov(x) - Grading::int(2 * k) + sigma,
            });
            labels.push((Side::A, s, x));
        }
    }
    let b_offset = generators.len();
    for &s in &b_window {
        for x in 0..kn {
            generators
                .push(Generator { name: format!("B{s}:{}", base.name(x)), maslov: base.maslov(x) - 2 + b_shifts[&s] });
            labels.push((Side::B, s, x));
        }
    }
    let a_index = |s: i64, x: usize| a_window.iter().position(|&t| t == s).map(|p| p * kn + x);
    let b_index = |s: i64, x: usize| b_window.iter().position(|&t| t == s).map(|p| b_offset + p * kn + x);
    let total = generators.len();
    let mut rows = vec![BitVec::zeros(total); total];
    for a in base.arrows() {
        for &s in &a_window {
            rows[a_index(s, a.from).unwrap()].toggle(a_index(s, a.to).unwrap());
        }
        for &s in &b_window {
            rows[b_index(s, a.from).unwrap()].toggle(b_index(s, a.to).unwrap());
        }
    }
    let mut v_map = Vec::new();
    let mut h_map = Vec::new();
    for &s in &a_window {
        for x in 0..kn {
            let src = a_index(s, x).unwrap();
            if let Some(t) = b_index(s, x) {
                rows[src].toggle(t);
                v_map.push((src, t));
            }
            if let Some(t) = b_index(s + n, flip[x]) {
                rows[src].toggle(t);
                h_map.push((src, t));
            }
        }
    }
    let targets: Vec<Vec<usize>> = rows.iter().map(|r| r.ones().collect()).collect();
    let complex = FreeComplex::from_graded_rows(generators, &targets)
        .map_err(|e| Error::Inconsistent(format!("cone gradings: {e}")))?;
    Ok(MappingCone { n, a_window, b_window, b_shifts, complex, labels, v_map, h_map })
}

/// HF^+ of a surgery (plus notation), with its d-invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HFPlusResult {
    pub decomposition: FUDecomposition,
    pub spinc: String,
    pub d_invariants: Vec<Grading>,
}

/// Spin^c label used for zero-surgeries and other torsion-only results.
pub const TORSION_SPINC: &str = "torsion";
/// Spin^c label for ±1-surgery outputs, which sum the cone over all `[s]`.
pub const SUMMED_SPINC: &str = "[s0]-summed";

impl HFPlusResult {
    pub fn new(decomposition: FUDecomposition, spinc: &str) -> Self {
        let d_invariants = decomposition.towers().to_vec();
        HFPlusResult { decomposition, spinc: spinc.to_string(), d_invariants }
    }

    /// `HF^+(S^3) = T_(0)`, the unit for connected sums.
    pub fn s3() -> Self {
        HFPlusResult::new(FUDecomposition::new(vec![Grading::ZERO], vec![]), TORSION_SPINC)
    }

    /// `HF^+(S^1 x S^2) = T_(1/2) ⊕ T_(-1/2)`.
    pub fn s1_times_s2() -> Self {
        HFPlusResult::new(FUDecomposition::new(vec![Grading::half(1), Grading::half(-1)], vec![]), TORSION_SPINC)
    }

    pub fn hf_red(&self) -> BTreeMap<Grading, u64> {
        self.decomposition.torsion_ranks()
    }
}

fn spinc_label(n: i64) -> &'static str {
    if n == 0 {
        TORSION_SPINC
    } else {
        SUMMED_SPINC
    }
}

/// HF^+ of `n`-surgery computed from the chain-level cone.
pub fn surgery_hf(c: &KnotComplex, n: i64) -> Result<HFPlusResult> {
    let cone = build_cone(c, n)?;
    let minus = homology_decomposition(&cone.complex)?;
    Ok(HFPlusResult::new(plus_presentation(&minus, Convention::Minus), spinc_label(n)))
}

/// HF^+ of `n`-surgery computed by first replacing every `A_s` and `B_s` by a
/// reduced model (all `U^0` entries cancelled) and transferring `v` and `h`
/// through the cancellation homotopy equivalences. This is an independent
/// route to the same answer as [`surgery_hf`].
pub fn surgery_hf_reduced(c: &KnotComplex, n: i64) -> Result<HFPlusResult> {
    let cone = build_cone(c, n)?;
    let reduced = reduced_cone(&cone)?;
    let minus = homology_decomposition(&reduced)?;
    Ok(HFPlusResult::new(plus_presentation(&minus, Convention::Minus), spinc_label(n)))
}

/// The cone with every summand replaced by its reduced model.
pub fn reduced_cone(cone: &MappingCone) -> Result<FreeComplex> {
    let total = cone.complex.len();
    let mut blocks: BTreeMap<(Side, i64), Vec<usize>> = BTreeMap::new();
    for (i, (side, s, _)) in cone.labels.iter().enumerate() {
        blocks.entry((*side, *s)).or_default().push(i);
    }
    let mut block_of = vec![(Side::A, 0i64); total];
    let mut local_index = vec![0usize; total];
    for (key, members) in &blocks {
        for (k, &i) in members.iter().enumerate() {
            block_of[i] = *key;
            local_index[i] = k;
        }
    }
    let mut reductions = BTreeMap::new();
    for (key, members) in &blocks {
        reductions.insert(*key, cancel_units(&cone.complex.restricted(members), |_, _| true));
    }
    // Global numbering of reduced generators, block by block.
    let mut offset = BTreeMap::new();
    let mut generators = Vec::new();
    for (key, r) in &reductions {
        offset.insert(*key, generators.len());
        generators.extend(r.complex.generators().iter().cloned());
    }
    let mut targets: Vec<BitVec> = vec![BitVec::zeros(generators.len()); generators.len()];
    for (key, r) in &reductions {
        for a in r.complex.arrows() {
            targets[offset[key] + a.from].toggle(offset[key] + a.to);
        }
    }
    // Cross-block entries of the original cone.
    let mut cross: Vec<Vec<usize>> = vec![Vec::new(); total];
    for a in cone.complex.arrows() {
        if block_of[a.from] != block_of[a.to] {
            cross[a.from].push(a.to);
        }
    }
    for (key, r) in &reductions {
        if key.0 != Side::A {
            continue;
        }
        let members = &blocks[key];
        for (z, inc) in r.include.iter().enumerate() {
            let src = offset[key] + z;
            for lo in inc.ones() {
                for &t in &cross[members[lo]] {
                    let tb = block_of[t];
                    let proj = &reductions[&tb].project[local_index[t]];
                    for k in proj.ones() {
                        targets[src].toggle(offset[&tb] + k);
                    }
                }
            }
        }
    }
    let rows: Vec<Vec<usize>> = targets.iter().map(|r| r.ones().collect()).collect();
    FreeComplex::from_graded_rows(generators, &rows)
        .map_err(|e| Error::Inconsistent(format!("transferred cone maps are not homogeneous: {e}")))
}

/// `hf_red` as grading -> rank and the sorted d-invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub hf_red: BTreeMap<Grading, u64>,
    pub d: Vec<Grading>,
}

pub fn extract_invariants(r: &HFPlusResult) -> Invariants {
    Invariants { hf_red: r.hf_red(), d: r.decomposition.towers().to_vec() }
}

/// Description of the map induced by the 1-handle cobordism `Y -> Y # S^1 x S^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneHandleMap {
    /// The map is the inclusion `ξ -> ξ ⊗ θ_top` into this copy.
    pub target_copy: Grading,
    pub grading_shift: Grading,
}

/// `HF^+(Y # S^1 x S^2) = HF^+(Y) ⊗ (F_(1/2) ⊕ F_(-1/2))`, together with the
/// 1-handle map (inclusion into the `+1/2` copy).
pub fn one_handle_stabilize(r: &HFPlusResult) -> (HFPlusResult, OneHandleMap) {
    let up = r.decomposition.shifted(Grading::half(1));
    let down = r.decomposition.shifted(Grading::half(-1));
    let out = HFPlusResult::new(up.direct_sum(&down), &r.spinc);
    (out, OneHandleMap { target_copy: Grading::half(1), grading_shift: Grading::half(1) })
}

/// A free minus-flavour complex whose plus homology is `d`.
fn encode(d: &FUDecomposition, tag: &str) -> FreeComplex {
    let mut generators = Vec::new();
    let mut targets = Vec::new();
    for (i, t) in d.towers().iter().enumerate() {
        generators.push(Generator { name: format!("{tag}t{i}"), maslov: *t - 2 });
        targets.push(vec![]);
    }
    for (i, Torsion { grading, length }) in d.torsion().iter().enumerate() {
        let top = *grading - 1;
        let x = generators.len();
        generators.push(Generator { name: format!("{tag}x{i}"), maslov: top });
        targets.push(vec![]);
        generators
            .push(Generator { name: format!("{tag}y{i}"), maslov: top - Grading::int(2 * i64::from(*length)) + 1 });
        targets.push(vec![x]);
    }
    FreeComplex::from_graded_rows(generators, &targets).expect("encoding is homogeneous")
}

/// The indecomposable summands of a decomposition with their multiplicities.
fn summand_counts(d: &FUDecomposition) -> BTreeMap<FUDecomposition, u64> {
    let mut out = BTreeMap::new();
    for t in d.towers() {
        *out.entry(FUDecomposition::new(vec![*t], vec![])).or_insert(0) += 1;
    }
    for t in d.torsion() {
        *out.entry(FUDecomposition::new(vec![], vec![*t])).or_insert(0) += 1;
    }
    out
}

/// Kunneth formula for `HF^+(Y1 # Y2)`, normalized so that `T_(0)` is the
/// unit. Each side is encoded as a free complex; since the tensor product
/// distributes over direct sums, the homology is assembled from the tensor
/// products of pairs of distinct summands, weighted by multiplicity.
pub fn connected_sum_floer(r1: &HFPlusResult, r2: &HFPlusResult) -> HFPlusResult {
    let mut towers = Vec::new();
    let mut torsion = Vec::new();
    for (a, ca) in summand_counts(&r1.decomposition) {
        for (b, cb) in summand_counts(&r2.decomposition) {
            let t = tensor_complexes(&encode(&a, "p"), &encode(&b, "q"));
            let minus = homology_decomposition(&t).expect("tensor of valid complexes").shifted(Grading::int(2));
            let plus = plus_presentation(&minus, Convention::Minus);
            for _ in 0..ca * cb {
                towers.extend_from_slice(plus.towers());
                torsion.extend_from_slice(plus.torsion());
            }
        }
    }
    HFPlusResult::new(FUDecomposition::new(towers, torsion), &r1.spinc)
}

/// What exactness forces about one map of an exact triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapVerdict {
    ForcedInjectiveOnTop,
    ForcedZero,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleVerdict {
    /// `M1 -> M2`.
    pub f: MapVerdict,
    /// `M2 -> M3`.
    pub phi: MapVerdict,
    /// `M3 -> M1`.
    pub psi: MapVerdict,
    /// Ranks of `(F, Φ, Ψ)` forced by exactness.
    pub ranks: (u64, u64, u64),
}

pub type RankTable = BTreeMap<Grading, u64>;

fn dim(m: &RankTable) -> u64 {
    m.values().sum()
}

fn top(m: &RankTable) -> Option<Grading> {
    m.iter().filter(|(_, r)| **r > 0).map(|(g, _)| *g).max()
}

/// Exactness constraints on `M1 --F--> M2 --Φ--> M3 --Ψ--> M1`, where
/// `shifts = [shift(F), shift(Φ), shift(Ψ)]` are the homogeneous degrees
/// (`None` when a degree is not known).
///
/// Exactness fixes the ranks: `rank F = (a + b - c)/2` and cyclically, with
/// `a, b, c` the total dimensions. A map is forced zero when its rank is 0.
/// It is forced injective on the top-graded summand of its source when it is
/// injective outright, or when nothing in the previous module lands in that
/// grading under the previous map (so the top summand meets the kernel, which
/// is that image, trivially).
pub fn exact_triangle_force(modules: [&RankTable; 3], shifts: [Option<Grading>; 3]) -> Result<TriangleVerdict> {
    let d = modules.map(dim);
    let twice = |x: u64, y: u64, z: u64| -> Result<u64> {
        let v = i128::from(x) + i128::from(y) - i128::from(z);
        if v < 0 || v % 2 != 0 {
            return Err(Error::InconsistentTriangle(format!(
                "dimensions {}, {}, {} admit no exact triangle",
                d[0], d[1], d[2]
            )));
        }
        Ok((v / 2) as u64)
    };
    let ranks = [twice(d[0], d[1], d[2])?, twice(d[1], d[2], d[0])?, twice(d[2], d[0], d[1])?];
    let verdict = |i: usize| {
        let prev = (i + 2) % 3;
        if ranks[i] == 0 {
            return MapVerdict::ForcedZero;
        }
        if ranks[i] == d[i] {
            return MapVerdict::ForcedInjectiveOnTop;
        }
        let Some(t) = top(modules[i]) else { return MapVerdict::ForcedZero };
        let Some(shift) = shifts[prev] else { return MapVerdict::Undetermined };
        let hit = modules[prev].iter().any(|(g, r)| *r > 0 && *g + shift == t);
        if hit {
            MapVerdict::Undetermined
        } else {
            MapVerdict::ForcedInjectiveOnTop
        }
    };
    Ok(TriangleVerdict { f: verdict(0), phi: verdict(1), psi: verdict(2), ranks: (ranks[0], ranks[1], ranks[2]) })
}
