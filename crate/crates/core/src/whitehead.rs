//! Untwisted Whitehead doubles of tau = 0 knots and the clasp cobordism steps.
//!
//! Two independent descriptions of the positive double are provided: the
//! hat-level formula in terms of the filtration homologies `H(F(K, i))`
//! ([`hedden_hfk_double`]) and the full complex `x ⊕ ⊕_j B[m_j - 1]^{2 d_j}`
//! built from a filtered basis ([`whitehead_double_cfk`]).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cfk::{
    box_named, builtin, connected_sum_knots, direct_sum_knots, filtration_homology, knot_numerics, mirror_knot,
    reduced_basis_form, BigradedTable, GradedTable, KnotComplex, ReducedBasisForm, Sign,
};
use crate::error::{Error, Result};
use crate::f2::BitMatrix;
use crate::grading::Grading;
use crate::homology::{FUDecomposition, Torsion};
use crate::surgery::{one_handle_stabilize, surgery_hf, HFPlusResult, RankTable, TORSION_SPINC};

/// Ranks indexed by `(maslov, alexander)`, allowed to go negative while a
/// formula with formal negative exponents is being evaluated.
pub type FormalGradedRank = BTreeMap<(Grading, i64), i64>;

/// The filtration homologies `i -> H_*(F(K, i))` for `i ∈ [-g, g]`.
pub fn filtration_data(k: &KnotComplex, g: i64) -> BTreeMap<i64, GradedTable> {
    (-g..=g).map(|i| (i, filtration_homology(k, i))).collect()
}

/// HFK-hat of the positive untwisted Whitehead double of a slice-type knot of
/// genus `g`, from its filtration homologies:
///
/// * `s = 1`: `F^{-2g-2}_(1) ⊕ ⊕_i H_{*-1}(F(K, i))^2`
/// * `s = 0`: `F^{-4g-3}_(0) ⊕ ⊕_i H_*(F(K, i))^4`
/// * `s = -1`: `F^{-2g-2}_(-1) ⊕ ⊕_i H_{*+1}(F(K, i))^2`
///
/// The negative exponents are formal; the final table must be non-negative.
pub fn hedden_hfk_double(filtration: &BTreeMap<i64, GradedTable>, g: i64) -> Result<BigradedTable> {
    let mut acc = FormalGradedRank::new();
    let mut add = |m: Grading, s: i64, r: i64| *acc.entry((m, s)).or_insert(0) += r;
    add(Grading::int(1), 1, -(2 * g + 2));
    add(Grading::ZERO, 0, -(4 * g + 3));
    add(Grading::int(-1), -1, -(2 * g + 2));
    for i in -g..=g {
        let table = filtration
            .get(&i)
            .ok_or_else(|| Error::InvalidArgument(format!("filtration homology for i = {i} missing")))?;
        for (m, d) in table {
            let d = *d as i64;
            add(*m + 1, 1, 2 * d);
            add(*m, 0, 4 * d);
            add(*m - 1, -1, 2 * d);
        }
    }
    let mut out = BigradedTable::new();
    for ((m, s), r) in acc {
        if r < 0 {
            return Err(Error::NegativeRank { maslov: m.to_string(), alexander: s, rank: r });
        }
        if r > 0 {
            out.insert((m, s), r as usize);
        }
    }
    Ok(out)
}

/// `x ⊕ ⊕_j B[m_j - 1]^{2 d_j}` with `x` at `(0, 0)`; every box carries its
/// flip. Boxes are named `w{j}.{copy}.a` etc.
pub fn whitehead_double_cfk(rb: &ReducedBasisForm) -> Result<KnotComplex> {
    if rb.pairs().is_empty() {
        return Err(Error::TrivialKnot);
    }
    let mut out = builtin("unknot")?;
    for (j, p) in rb.pairs().iter().enumerate() {
        for copy in 0..2 * p.length {
            out = direct_sum_knots(&out, &box_named(p.maslov - 1, 0, &format!("w{j}.{copy}.")))?;
        }
    }
    Ok(out)
}

/// The negative double, `mirror(Wh(mirror K))`: `x ⊕ ⊕_j B[m_j]^{2 d_j}`.
pub fn negative_double_cfk(rb: &ReducedBasisForm) -> Result<KnotComplex> {
    Ok(mirror_knot(&whitehead_double_cfk(&rb.mirrored())?))
}

/// Doubles `k` (positive or negative clasp) `iterations` times.
pub fn iterate_double(k: &KnotComplex, sign: Sign, iterations: usize) -> Result<KnotComplex> {
    let mut cur = k.clone();
    for _ in 0..iterations {
        let rb = reduced_basis_form(&cur)?;
        cur = match sign {
            Sign::Plus => whitehead_double_cfk(&rb)?,
            Sign::Minus => negative_double_cfk(&rb)?,
        };
    }
    Ok(cur)
}

/// The parameters `k_i` of a genus-one complex of the form `x ⊕ ⊕_i B[k_i]`,
/// read off its filtered basis (each box contributes the pairs `(k_i, 0, 1)`
/// and `(k_i + 1, 1, 1)`).
pub fn box_parameters(k: &KnotComplex) -> Result<Vec<Grading>> {
    let rb = reduced_basis_form(k)?;
    let mut low: Vec<Grading> = Vec::new();
    let mut high: Vec<Grading> = Vec::new();
    for p in rb.pairs() {
        match (p.alexander, p.length) {
            (0, 1) => low.push(p.maslov),
            (1, 1) => high.push(p.maslov - 1),
            _ => return Err(Error::UnsupportedShape(format!("pair {p:?} does not come from a 1x1 box"))),
        }
    }
    low.sort();
    high.sort();
    if low != high {
        return Err(Error::UnsupportedShape("filtered basis does not split into 1x1 boxes".into()));
    }
    Ok(low)
}

/// The three Heegaard Floer groups predicted for a genus-one knot
/// `K = x ⊕ ⊕_i B[k_i]`:
///
/// 1. `HF^+(S^3_0(K) # S^1 x S^2) = T_(1) ⊕ T_(0)^2 ⊕ T_(-1) ⊕ ⊕_i (F_(k_i) ⊕ F_(k_i - 1))`
/// 2. `HF^+(S^3_0(Wh(K))) = T_(1/2) ⊕ T_(-1/2) ⊕ ⊕_i (F^2_(k_i - 1/2) ⊕ F^2_(k_i - 3/2))`
/// 3. `HF^+(Y_{-1}(J # K))`, the same as item 2.
pub fn three_manifold_predictions(ks: &[Grading]) -> [FUDecomposition; 3] {
    let h = Grading::half;
    let one = |g: Grading| Torsion::new(g, 1);
    let item1 = FUDecomposition::new(
        vec![Grading::int(1), Grading::ZERO, Grading::ZERO, Grading::int(-1)],
        ks.iter().flat_map(|k| [one(*k), one(*k - 1)]).collect(),
    );
    let item2 = FUDecomposition::new(
        vec![h(1), h(-1)],
        ks.iter().flat_map(|k| [one(*k + h(-1)), one(*k + h(-1)), one(*k + h(-3)), one(*k + h(-3))]).collect(),
    );
    [item1, item2.clone(), item2]
}

/// A graded F2-linear map between two levels, block by block: the block at
/// source grading `g` maps `V_i(g)` to `V_{i+1}(g + shift)`; `rows[r][c]` is
/// the coefficient of target basis vector `r` in the image of source vector `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedBlock {
    pub source_grading: Grading,
    pub rows: Vec<Vec<u8>>,
}

impl GradedBlock {
    pub fn to_matrix(&self, cols: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows.len(), cols);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if *v % 2 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }
}

/// The kind of map one step of a directed system induces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepKind {
    /// Positive-clasp 2-handle map: known to be injective on the top-graded
    /// summand, unknown below it.
    PositiveClasp,
    /// Negative-clasp map: the zero map.
    NegativeClasp,
    Zero,
    /// An isomorphism onto the next level (identity in the chosen bases).
    Iso,
    Explicit {
        blocks: Vec<GradedBlock>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDescriptor {
    #[serde(flatten)]
    pub kind: StepKind,
    pub grading_shift: Grading,
}

impl StepDescriptor {
    pub fn new(kind: StepKind, grading_shift: Grading) -> Self {
        StepDescriptor { kind, grading_shift }
    }

    /// Whether the map is known to vanish.
    pub fn is_zero(&self) -> bool {
        matches!(self.kind, StepKind::Zero | StepKind::NegativeClasp)
    }
}

fn require_level_shape(level: &HFPlusResult) -> Result<()> {
    let towers_ok = level.decomposition.towers() == [Grading::half(-1), Grading::half(1)];
    let torsion_ok = level.decomposition.torsion().iter().all(|t| t.length == 1);
    if towers_ok && torsion_ok {
        Ok(())
    } else {
        Err(Error::UnsupportedShape(format!(
            "expected T_(1/2) ⊕ T_(-1/2) ⊕ (length-one torsion), got {:?}",
            level.decomposition
        )))
    }
}

/// The step from `HF^+(S^3_0(K))` to `HF^+(S^3_0(Wh^±(K)))` for a genus-one
/// box-sum knot `K`, together with the target group.
///
/// Positive clasp: the target is `T_(1/2) ⊕ T_(-1/2) ⊕ (HF_red ⊗ V)` with
/// `V = F^2_(0) ⊕ F^2_(-1)`; the map has grading shift 0 and is injective on
/// the top summand. Negative clasp: `V = F^2_(1) ⊕ F^2_(0)` (the boxes of the
/// negative double sit one grading higher) and the map is zero.
pub fn clasp_step(sign: Sign, level: &HFPlusResult) -> Result<(StepDescriptor, HFPlusResult)> {
    require_level_shape(level)?;
    let (hi, lo) = match sign {
        Sign::Plus => (Grading::ZERO, Grading::int(-1)),
        Sign::Minus => (Grading::int(1), Grading::ZERO),
    };
    let torsion = level
        .decomposition
        .torsion()
        .iter()
        .flat_map(|t| {
            let mk = |d: Grading| Torsion::new(t.grading + d, 1);
            [mk(hi), mk(hi), mk(lo), mk(lo)]
        })
        .collect();
    let target = HFPlusResult::new(FUDecomposition::new(level.decomposition.towers().to_vec(), torsion), TORSION_SPINC);
    let kind = match sign {
        Sign::Plus => StepKind::PositiveClasp,
        Sign::Minus => StepKind::Zero,
    };
    Ok((StepDescriptor::new(kind, Grading::ZERO), target))
}

/// The reduced exact triangle attached to a clasp change.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleData {
    pub m1: RankTable,
    pub m2: RankTable,
    pub m3: RankTable,
    /// Grading shifts of `(F, Φ, Ψ)`; `None` when not known.
    pub shifts: [Option<Grading>; 3],
}

/// Computes the three `HF_red` groups of the surgery triangle
/// `S^3_0(K) # S^1 x S^2 -> S^3_0(Wh^±(K)) -> Y_{-1}(J # K)` with the engine
/// (`J ⊂ Y` for the positive clasp, `J' ⊂ Y'` for the negative one).
pub fn clasp_triangle(k: &KnotComplex, sign: Sign) -> Result<TriangleData> {
    let rb = reduced_basis_form(k)?;
    let (double, pattern) = match sign {
        Sign::Plus => (whitehead_double_cfk(&rb)?, builtin("J_in_Y")?),
        Sign::Minus => (negative_double_cfk(&rb)?, builtin("Jprime_in_Yprime")?),
    };
    let m1 = one_handle_stabilize(&surgery_hf(k, 0)?).0.hf_red();
    let m2 = surgery_hf(&double, 0)?.hf_red();
    let m3 = surgery_hf(&connected_sum_knots(&pattern, k)?, -1)?.hf_red();
    let half = Some(Grading::half(-1));
    Ok(TriangleData { m1, m2, m3, shifts: [half, None, half] })
}

/// Checks the genus-one box-sum shape that the doubling computations require.
pub fn is_genus_one_box_sum(k: &KnotComplex) -> bool {
    knot_numerics(k).map(|n| n.genus == 1 && n.tau == 0).unwrap_or(false) && box_parameters(k).is_ok()
}
