//! Directed systems of graded F2-vector spaces and end Floer reports.
//!
//! An exhaustion of an open 4-manifold by compact pieces `X_i` gives a
//! directed system of `HF_red(Y_i)` groups (`Y_i = ∂X_i`). After normalising
//! each level by `-b1(Y_i)/2` the cobordism maps become grading preserving and
//! the direct limit carries an absolute grading. This module computes that
//! limit (exactly where the data allows it, as a tagged lower bound otherwise)
//! for slice R^4s built from Casson handles, their end sums and product ends.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::cfk::{
    builtin, connected_sum_knots, is_nontrivial, knot_numerics, mirror_knot, reduced_basis_form, KnotComplex, Sign,
};
use crate::error::{Error, Result};
use crate::f2::BitMatrix;
use crate::grading::Grading;
use crate::homology::FUDecomposition;
use crate::surgery::{connected_sum_floer, surgery_hf, HFPlusResult, RankTable};
use crate::whitehead::{
    clasp_step, is_genus_one_box_sum, negative_double_cfk, whitehead_double_cfk, GradedBlock, StepDescriptor, StepKind,
};

/// A rank in `N ∪ {∞}`; `Infinite` sorts above every finite value and
/// absorbs addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl Rank {
    pub fn saturating_add(self, other: Rank) -> Rank {
        match (self, other) {
            (Rank::Finite(a), Rank::Finite(b)) => a.checked_add(b).map_or(Rank::Infinite, Rank::Finite),
            _ => Rank::Infinite,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Rank::Finite(0)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(n) => s.serialize_u64(*n),
            Rank::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Rank {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RankVisitor;
        impl Visitor<'_> for RankVisitor {
            type Value = Rank;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rank, E> {
                Ok(Rank::Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rank, E> {
                u64::try_from(v).map(Rank::Finite).map_err(|_| E::custom("rank must be non-negative"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rank, E> {
                match v {
                    "inf" | "∞" => Ok(Rank::Infinite),
                    _ => Err(E::custom(format!("unknown rank {v:?}"))),
                }
            }
        }
        d.deserialize_any(RankVisitor)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankTag {
    Exact,
    /// The true rank is at least the stated value.
    LowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankEntry {
    pub rank: Rank,
    pub tag: RankTag,
}

impl RankEntry {
    pub fn exact(rank: Rank) -> Self {
        RankEntry { rank, tag: RankTag::Exact }
    }

    pub fn lower_bound(rank: Rank) -> Self {
        RankEntry { rank, tag: RankTag::LowerBound }
    }
}

/// One level of an exhaustion: the group `HF_red(Y_i)` as a graded rank table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub b1: u32,
    pub module: RankTable,
    pub label: String,
}

/// Declared vanishing of `b2(X_i)` and `b3(X_i)`; when both hold the grading
/// shift of every step is forced to be `(b1(Y_{i+1}) - b1(Y_i)) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityFlags {
    pub b2_zero: bool,
    pub b3_zero: bool,
}

impl Default for AdmissibilityFlags {
    fn default() -> Self {
        AdmissibilityFlags { b2_zero: true, b3_zero: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustionSpec {
    pub levels: Vec<Level>,
    pub steps: Vec<StepDescriptor>,
    /// One entry per level; missing entries default to admissible.
    #[serde(default)]
    pub admissibility_flags: Vec<AdmissibilityFlags>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndFloerReport {
    pub per_grading: BTreeMap<Grading, RankEntry>,
    pub max_nontrivial_grading: Option<Grading>,
    /// `Some(true)`: the limit is zero; `Some(false)`: known to be nonzero;
    /// `None`: undetermined.
    pub vanishes: Option<bool>,
    pub narrative: Vec<String>,
}

impl EndFloerReport {
    pub fn vanishing(note: impl Into<String>) -> Self {
        EndFloerReport { vanishes: Some(true), narrative: vec![note.into()], ..Default::default() }
    }

    pub fn undetermined(note: impl Into<String>) -> Self {
        EndFloerReport { narrative: vec![note.into()], ..Default::default() }
    }

    pub fn is_undetermined(&self) -> bool {
        self.vanishes.is_none()
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.narrative.push(s.into());
        self
    }

    /// The data that is an invariant of the end (the narrative is not).
    /// Lower-bound entries are not invariants and are left out.
    fn signature(&self) -> (Option<bool>, Option<Grading>, Vec<(Grading, Rank)>) {
        let exact =
            self.per_grading.iter().filter(|(_, e)| e.tag == RankTag::Exact).map(|(g, e)| (*g, e.rank)).collect();
        (self.vanishes, self.max_nontrivial_grading, exact)
    }
}

/// Shifts every grading of a level down by `b1 / 2`.
pub fn normalize_level(module: &RankTable, b1: u32) -> RankTable {
    let by = Grading::half(i64::from(b1));
    module.iter().filter(|(_, r)| **r > 0).map(|(g, r)| (*g - by, *r)).collect()
}

/// The grading shift `(b1_j - b1_i) / 2` of an admissible cobordism from a
/// level with first Betti number `b1_i` to one with `b1_j`.
pub fn grading_shift(b1_i: u32, b1_j: u32) -> Grading {
    Grading::half(i64::from(b1_j) - i64::from(b1_i))
}

fn check_shifts(spec: &ExhaustionSpec) -> Result<()> {
    if spec.levels.is_empty() {
        return Err(Error::InvalidArgument("an exhaustion needs at least one level".into()));
    }
    if spec.steps.len() + 1 != spec.levels.len() {
        return Err(Error::InvalidArgument(format!(
            "{} levels need {} steps, got {}",
            spec.levels.len(),
            spec.levels.len() - 1,
            spec.steps.len()
        )));
    }
    let flags = |i: usize| spec.admissibility_flags.get(i).copied().unwrap_or_default();
    for (i, step) in spec.steps.iter().enumerate() {
        let admissible = [flags(i), flags(i + 1)].iter().all(|f| f.b2_zero && f.b3_zero);
        let expected = grading_shift(spec.levels[i].b1, spec.levels[i + 1].b1);
        if admissible && step.grading_shift != expected {
            return Err(Error::InconsistentShift {
                step: i,
                declared: step.grading_shift.to_string(),
                expected: expected.to_string(),
            });
        }
    }
    Ok(())
}

/// The matrix of one step restricted to normalised grading `g`
/// (`dim V_{i+1}(g) x dim V_i(g)`).
fn step_block(spec: &ExhaustionSpec, i: usize, g: Grading) -> Result<BitMatrix> {
    let norm = |j: usize| Grading::half(i64::from(spec.levels[j].b1));
    let dim = |j: usize| spec.levels[j].module.get(&(g + norm(j))).copied().unwrap_or(0) as usize;
    let (cols, rows) = (dim(i), dim(i + 1));
    let step = &spec.steps[i];
    Ok(match &step.kind {
        StepKind::Zero | StepKind::NegativeClasp => BitMatrix::zeros(rows, cols),
        StepKind::Iso => {
            if rows != cols {
                return Err(Error::InvalidArgument(format!(
                    "step {i} is declared an isomorphism but dimensions differ in grading {g} ({cols} -> {rows})"
                )));
            }
            BitMatrix::identity(rows)
        }
        StepKind::Explicit { blocks } => {
            let source = g + norm(i);
            match blocks.iter().find(|b| b.source_grading == source) {
                None => BitMatrix::zeros(rows, cols),
                Some(b) => {
                    if b.rows.len() != rows || b.rows.iter().any(|r| r.len() != cols) {
                        return Err(Error::InvalidArgument(format!(
                            "step {i}, block at grading {source}: expected a {rows}x{cols} matrix"
                        )));
                    }
                    b.to_matrix(cols)
                }
            }
        }
        StepKind::PositiveClasp => {
            return Err(Error::Inconsistent("positive-clasp maps are only known on the top summand".into()))
        }
    })
}

/// Direct limit of a finite presentation of a directed system.
///
/// Explicit, isomorphism and zero steps: at each normalised grading the ranks
/// of the composites `V_{L-2} -> V_{L-1}`, `V_{L-1} -> V_L` and
/// `V_{L-2} -> V_L` must agree (the system has stabilised on its tail) for
/// the rank to be reported as exact; otherwise the grading is undetermined.
/// Positive-clasp steps are only known on the top summand: the top grading is
/// reported exactly (∞ when the top rank grows at every step) and every other
/// grading as a lower bound.
pub fn colimit(spec: &ExhaustionSpec) -> Result<EndFloerReport> {
    check_shifts(spec)?;
    if !spec.steps.is_empty() && spec.steps.iter().all(StepDescriptor::is_zero) {
        return Ok(EndFloerReport::vanishing("every map in the system is zero"));
    }
    let clasp = spec.steps.iter().filter(|s| s.kind == StepKind::PositiveClasp).count();
    if clasp == 0 {
        explicit_colimit(spec)
    } else if clasp == spec.steps.len() {
        clasp_colimit(spec)
    } else {
        Ok(EndFloerReport::undetermined("positive-clasp steps mixed with other kinds; the composite is not determined"))
    }
}

fn normalized(spec: &ExhaustionSpec) -> Vec<RankTable> {
    spec.levels.iter().map(|l| normalize_level(&l.module, l.b1)).collect()
}

fn explicit_colimit(spec: &ExhaustionSpec) -> Result<EndFloerReport> {
    let levels = normalized(spec);
    let last = levels.len() - 1;
    if last < 2 {
        return Ok(EndFloerReport::undetermined(
            "stabilisation needs two consecutive composites (at least three levels)",
        ));
    }
    let mut gradings: Vec<Grading> = levels[last - 2..].iter().flat_map(|l| l.keys().copied()).collect();
    gradings.sort();
    gradings.dedup();
    let mut report = EndFloerReport::default();
    let mut unstable = Vec::new();
    for g in gradings {
        let a = step_block(spec, last - 2, g)?;
        let b = step_block(spec, last - 1, g)?;
        let (r1, r2, r12) = (a.rank(), b.rank(), b.mul(&a).rank());
        if r1 == r2 && r2 == r12 {
            if r12 > 0 {
                report.per_grading.insert(g, RankEntry::exact(Rank::Finite(r12 as u64)));
            }
        } else {
            unstable.push(g);
        }
    }
    if unstable.is_empty() {
        report.max_nontrivial_grading = report.per_grading.keys().next_back().copied();
        report.vanishes = Some(report.per_grading.is_empty());
        Ok(report.note("composite ranks stabilised on the last two steps"))
    } else {
        let list: Vec<String> = unstable.iter().map(Grading::to_string).collect();
        report.narrative.push(format!("ranks did not stabilise in gradings {}", list.join(", ")));
        // Exact entries above every unstable grading still pin down the top.
        let top_unstable = unstable.iter().max().copied();
        report.max_nontrivial_grading =
            report.per_grading.keys().next_back().copied().filter(|g| Some(*g) > top_unstable);
        Ok(report)
    }
}

fn clasp_colimit(spec: &ExhaustionSpec) -> Result<EndFloerReport> {
    let levels = normalized(spec);
    let mut tops = Vec::with_capacity(levels.len());
    for (i, l) in levels.iter().enumerate() {
        let Some((g, r)) = l.iter().next_back() else {
            return Err(Error::Inconsistent(format!("level {i} is zero but the clasp map is injective on its top")));
        };
        tops.push((*g, *r));
    }
    let top = tops[0].0;
    if let Some((i, (g, _))) = tops.iter().enumerate().find(|(_, (g, _))| *g != top) {
        return Err(Error::Inconsistent(format!("top grading moved from {top} to {g} at level {i}")));
    }
    if let Some(i) = tops.windows(2).position(|w| w[1].1 < w[0].1) {
        return Err(Error::Inconsistent(format!("top rank drops at step {i}; the map cannot be injective there")));
    }
    let ranks: Vec<String> = tops.iter().map(|(_, r)| r.to_string()).collect();
    let growing = tops.len() > 1 && tops.windows(2).all(|w| w[1].1 > w[0].1);
    let top_rank = if growing { Rank::Infinite } else { Rank::Finite(tops[0].1) };
    let mut report = EndFloerReport { vanishes: Some(false), max_nontrivial_grading: Some(top), ..Default::default() };
    for g in levels.iter().flat_map(|l| l.keys()) {
        if *g != top {
            report.per_grading.insert(*g, RankEntry::lower_bound(Rank::Finite(0)));
        }
    }
    report.per_grading.insert(top, RankEntry::exact(top_rank));
    Ok(report.note(format!("top-band ranks {} at grading {top}; maps injective on the top band", ranks.join(" -> "))))
}

/// Casson handles, summarised by the sign pattern of their double points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CassonHandle {
    /// `CH^+`: a linear chain of positive kinks.
    AllPositiveChain,
    /// `CH^-`: a linear chain of negative kinks.
    AllNegativeChain,
    /// A linear chain whose first kinks have the given signs; the last sign
    /// repeats forever.
    FiniteMixedThenOneSign {
        signs: Vec<Sign>,
    },
    HasInfinitePositiveChain,
    HasInfinitePosAndNegChain,
    Undetermined,
}

impl CassonHandle {
    /// The handle seen from the reversed orientation: every sign flips.
    /// `None` when the result leaves the taxonomy.
    pub fn flipped(&self) -> Option<CassonHandle> {
        Some(match self {
            CassonHandle::AllPositiveChain => CassonHandle::AllNegativeChain,
            CassonHandle::AllNegativeChain => CassonHandle::AllPositiveChain,
            CassonHandle::FiniteMixedThenOneSign { signs } => {
                CassonHandle::FiniteMixedThenOneSign { signs: signs.iter().map(|s| s.flipped()).collect() }
            }
            CassonHandle::HasInfinitePositiveChain => return None,
            CassonHandle::HasInfinitePosAndNegChain => CassonHandle::HasInfinitePosAndNegChain,
            CassonHandle::Undetermined => CassonHandle::Undetermined,
        })
    }

    /// The linear chain this handle reduces to, with the knot doublings that
    /// absorb its finite prefix.
    fn as_chain(&self) -> Option<(Vec<Sign>, Sign)> {
        match self {
            CassonHandle::AllPositiveChain => Some((vec![], Sign::Plus)),
            CassonHandle::AllNegativeChain => Some((vec![], Sign::Minus)),
            CassonHandle::FiniteMixedThenOneSign { signs } => {
                let (last, prefix) = signs.split_last()?;
                Some((prefix.to_vec(), *last))
            }
            _ => None,
        }
    }
}

fn plus() -> Sign {
    Sign::Plus
}

/// A slice R^4: a Casson handle attached to a slice disk complement for
/// `knot`, with an orientation (`-` is the orientation-reversed manifold).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceR4Spec {
    pub knot: KnotComplex,
    pub handle: CassonHandle,
    #[serde(default = "plus")]
    pub orientation: Sign,
    /// Which slice disk was used; it does not affect the invariant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk_label: Option<String>,
}

impl SliceR4Spec {
    pub fn new(knot: KnotComplex, handle: CassonHandle) -> Self {
        SliceR4Spec { knot, handle, orientation: Sign::Plus, disk_label: None }
    }

    pub fn reversed(&self) -> SliceR4Spec {
        SliceR4Spec { orientation: self.orientation.flipped(), ..self.clone() }
    }

    /// The same manifold described with orientation `+`: reversing the
    /// orientation mirrors the knot and flips every clasp sign.
    fn effective(&self) -> (KnotComplex, Option<CassonHandle>) {
        match self.orientation {
            Sign::Plus => (self.knot.clone(), Some(self.handle.clone())),
            Sign::Minus => (mirror_knot(&self.knot), self.handle.flipped()),
        }
    }
}

/// `HF^+(S^3_0(D^i(K)))` for `i = 1..=levels`, where `D` is the positive or
/// negative Whitehead double.
pub fn chain_levels(knot: &KnotComplex, sign: Sign, levels: usize) -> Result<Vec<HFPlusResult>> {
    let mut k = knot.clone();
    let mut out = Vec::with_capacity(levels);
    for _ in 0..levels {
        k = double(&k, sign)?;
        out.push(surgery_hf(&k, 0)?);
    }
    Ok(out)
}

fn double(k: &KnotComplex, sign: Sign) -> Result<KnotComplex> {
    let rb = reduced_basis_form(k)?;
    match sign {
        Sign::Plus => whitehead_double_cfk(&rb),
        Sign::Minus => negative_double_cfk(&rb),
    }
}

/// The exhaustion of the slice R^4 built from `knot` and a linear chain of
/// kinks of one sign: levels `HF_red(S^3_0(D^i(K)))`, `b1 = 1`, and clasp
/// steps whose predicted targets are checked against the computed levels.
pub fn chain_system(knot: &KnotComplex, sign: Sign, levels: usize) -> Result<ExhaustionSpec> {
    let groups = chain_levels(knot, sign, levels)?;
    let mut steps = Vec::new();
    for (i, w) in groups.windows(2).enumerate() {
        let (step, predicted) = clasp_step(sign, &w[0])?;
        if predicted.decomposition != w[1].decomposition {
            return Err(Error::Inconsistent(format!(
                "level {}: clasp prediction {:?} differs from the mapping cone {:?}",
                i + 2,
                predicted.decomposition,
                w[1].decomposition
            )));
        }
        steps.push(step);
    }
    let tag = if sign == Sign::Plus { "Wh" } else { "Wh-" };
    Ok(ExhaustionSpec {
        levels: groups
            .iter()
            .enumerate()
            .map(|(i, g)| Level { b1: 1, module: g.hf_red(), label: format!("S^3_0({tag}^{}(K))", i + 1) })
            .collect(),
        steps,
        admissibility_flags: vec![AdmissibilityFlags::default(); groups.len()],
    })
}

/// `max{m | HFK_red,m(K) != 0} - 1`.
pub fn top_parameter(knot: &KnotComplex) -> Result<Grading> {
    let rb = reduced_basis_form(knot)?;
    rb.max_maslov().map(|m| m - 1).ok_or(Error::TrivialKnot)
}

fn require_slice_candidate(knot: &KnotComplex) -> Result<()> {
    if !knot.ambient().is_s3() {
        return Err(Error::NontrivialAmbient(knot.ambient().name.clone()));
    }
    let tau = knot_numerics(knot)?.tau;
    if tau != 0 {
        return Err(Error::NonzeroTau(tau));
    }
    Ok(())
}

fn min_levels(levels: usize) -> Result<()> {
    if levels < 2 {
        return Err(Error::InvalidArgument("at least two levels are needed to see the maps".into()));
    }
    Ok(())
}

/// End Floer homology of a slice R^4 (in its unique spin^c structure),
/// computed from the first `levels` levels of its standard exhaustion.
pub fn he_slice_r4(spec: &SliceR4Spec, levels: usize) -> Result<EndFloerReport> {
    require_slice_candidate(&spec.knot)?;
    min_levels(levels)?;
    let (knot, handle) = spec.effective();
    let Some(handle) = handle else {
        return Ok(EndFloerReport::undetermined(
            "reversing the orientation turns the handle into one with an infinite negative chain, outside the \
             method's reach",
        ));
    };
    if !is_nontrivial(&knot) {
        return Ok(EndFloerReport::vanishing("trivial knot: the standard R^4, whose end Floer homology vanishes"));
    }
    if let Some((prefix, sign)) = handle.as_chain() {
        return chain_report(&knot, &prefix, sign, levels);
    }
    match handle {
        CassonHandle::HasInfinitePositiveChain | CassonHandle::HasInfinitePosAndNegChain => {
            if is_genus_one_box_sum(&knot) {
                let mut r = EndFloerReport { vanishes: Some(false), ..Default::default() };
                r.narrative.push(
                    "the knot is a Whitehead double and the handle contains an infinite positive chain: the \
                     limit along that chain is nonzero (no full table)"
                        .into(),
                );
                Ok(r)
            } else {
                Ok(EndFloerReport::undetermined(
                    "an infinite positive chain is only handled when the knot is itself a Whitehead double",
                ))
            }
        }
        CassonHandle::Undetermined => Ok(EndFloerReport::undetermined("the handle is outside the method's reach")),
        _ => Err(Error::InvalidArgument(format!("a finite-mixed handle needs at least one sign: {handle:?}"))),
    }
}

fn chain_report(knot: &KnotComplex, prefix: &[Sign], sign: Sign, levels: usize) -> Result<EndFloerReport> {
    let mut k = knot.clone();
    for s in prefix {
        k = double(&k, *s)?;
    }
    let system = chain_system(&k, sign, levels)?;
    let mut report = colimit(&system)?;
    if !prefix.is_empty() {
        let signs: Vec<String> = prefix.iter().map(Sign::to_string).collect();
        report.narrative.insert(0, format!("finite prefix [{}] absorbed by doubling the knot", signs.join(", ")));
    }
    if sign == Sign::Plus {
        let b = top_parameter(&k)?;
        if report.max_nontrivial_grading != Some(b - 1) {
            return Err(Error::Inconsistent(format!(
                "top grading {:?} differs from b - 1 = {}",
                report.max_nontrivial_grading,
                b - 1
            )));
        }
        report.narrative.push(format!("b = max grading of reduced HFK-hat - 1 = {b}; top grading b - 1 = {}", b - 1));
    }
    Ok(report)
}

/// How one end-sum operand enters the Kunneth formula.
enum Operand {
    /// The standard R^4 (trivial knot): a unit for the end sum.
    Standard,
    /// All maps of its system are zero.
    Zero,
    /// A positive chain on this knot.
    Positive(KnotComplex),
    Unknown(String),
}

fn classify(spec: &SliceR4Spec) -> Result<Operand> {
    require_slice_candidate(&spec.knot)?;
    let (knot, handle) = spec.effective();
    if !is_nontrivial(&knot) {
        return Ok(Operand::Standard);
    }
    let Some((prefix, sign)) = handle.as_ref().and_then(CassonHandle::as_chain) else {
        return Ok(Operand::Unknown(format!("handle {:?} is not a linear chain", handle)));
    };
    let mut k = knot;
    for s in &prefix {
        k = double(&k, *s)?;
    }
    Ok(match sign {
        Sign::Plus => Operand::Positive(k),
        Sign::Minus => Operand::Zero,
    })
}

/// End Floer homology of an end sum, via the Kunneth formula at each level.
pub fn he_end_sum(specs: &[SliceR4Spec], levels: usize) -> Result<EndFloerReport> {
    min_levels(levels)?;
    match specs {
        [] => return Err(Error::InvalidArgument("an end sum needs at least one operand".into())),
        [single] => return he_slice_r4(single, levels),
        _ => {}
    }
    let mut knots = Vec::new();
    let mut unknown = None;
    for s in specs {
        match classify(s)? {
            Operand::Standard => {}
            Operand::Zero => {
                return Ok(EndFloerReport::vanishing(
                    "one operand's maps are all zero, so every map of the tensored system is zero",
                ))
            }
            Operand::Positive(k) => knots.push(k),
            Operand::Unknown(why) => unknown = Some(why),
        }
    }
    if let Some(why) = unknown {
        return Ok(EndFloerReport::undetermined(why));
    }
    if knots.is_empty() {
        return Ok(EndFloerReport::vanishing("every operand is the standard R^4"));
    }
    let per_operand = knots.iter().map(|k| chain_levels(k, Sign::Plus, levels)).collect::<Result<Vec<_>>>()?;
    let b1 = u32::try_from(knots.len()).expect("operand count fits in u32");
    let mut spec = ExhaustionSpec { levels: vec![], steps: vec![], admissibility_flags: vec![] };
    for i in 0..levels {
        let sum = per_operand[1..].iter().fold(per_operand[0][i].clone(), |acc, l| connected_sum_floer(&acc, &l[i]));
        spec.levels.push(Level { b1, module: sum.hf_red(), label: format!("connected sum at level {}", i + 1) });
        spec.admissibility_flags.push(AdmissibilityFlags::default());
    }
    spec.steps = vec![StepDescriptor::new(StepKind::PositiveClasp, Grading::ZERO); levels - 1];
    let report = colimit(&spec)?;
    Ok(report.note(format!("Kunneth product of {} positive-chain systems", knots.len())))
}

/// Drops the reduced part of a level, keeping its towers.
fn towers_only(r: &HFPlusResult) -> HFPlusResult {
    HFPlusResult::new(FUDecomposition::new(r.decomposition.towers().to_vec(), vec![]), &r.spinc)
}

fn top_reduced(r: &HFPlusResult) -> Option<Grading> {
    r.hf_red().into_iter().filter(|(_, v)| *v > 0).map(|(g, _)| g).next_back()
}

/// End Floer homology of `(M x R) ♮ R_n`, summed over torsion spin^c
/// structures, where `M` is described by its torsion `HF^+` and `b1`.
///
/// `f(M)` is computed with the Kunneth engine as `top(HF_red(M # Y_1 # S^1 x
/// S^2)) - n`. The two dominance conditions of the argument are checked
/// explicitly; when either fails the report is undetermined and names it.
pub fn he_product_end(m: &HFPlusResult, b1: u32, r: &SliceR4Spec, n: i64, levels: usize) -> Result<EndFloerReport> {
    require_slice_candidate(&r.knot)?;
    min_levels(levels)?;
    let (knot, handle) = r.effective();
    if handle != Some(CassonHandle::AllPositiveChain) {
        return Err(Error::InvalidArgument("product ends are computed for CH^+ slice R^4s only".into()));
    }
    let b = top_parameter(&knot)?;
    if b != Grading::int(n - 2) {
        return Err(Error::InvalidArgument(format!("the knot has b = {b}, but K_{n} has b = {}", n - 2)));
    }
    let ys = chain_levels(&knot, Sign::Plus, levels)?;
    let s1s2 = HFPlusResult::s1_times_s2();
    let mut notes = Vec::new();
    let mut f = None;
    let mut spec = ExhaustionSpec { levels: vec![], steps: vec![], admissibility_flags: vec![] };
    for (i, y) in ys.iter().enumerate() {
        let level = connected_sum_floer(m, y);
        let stabilized = connected_sum_floer(&level, &s1s2);
        let rest = connected_sum_floer(&connected_sum_floer(m, &towers_only(y)), &s1s2);
        let (Some(top), rest_top) = (top_reduced(&stabilized), top_reduced(&rest)) else {
            return Err(Error::Inconsistent(format!("level {} has no reduced part", i + 1)));
        };
        if rest_top.is_some_and(|t| t >= top) {
            return Ok(EndFloerReport::undetermined(format!(
                "dominance condition 1 fails at level {}: HF_red(M) contributes in grading {} >= {top}; n is \
                 too small",
                i + 1,
                rest_top.expect("checked")
            )));
        }
        let fi = top - n;
        if f.is_some_and(|f0| f0 != fi) {
            return Ok(EndFloerReport::undetermined(format!("condition 1 fails: f(M) moves at level {}", i + 1)));
        }
        f = Some(fi);
        spec.levels.push(Level { b1: b1 + 1, module: level.hf_red(), label: format!("M # Y_{}", i + 1) });
        spec.admissibility_flags.push(AdmissibilityFlags::default());
    }
    let f = f.expect("at least two levels");
    notes.push(format!("f(M) = {f} (computed with the Kunneth engine)"));

    // Condition 2: the -1 surgery on J # Wh(K_n) in the triangle.
    let j = builtin("J_in_Y")?;
    let wh = double(&knot, Sign::Plus)?;
    let y_minus = surgery_hf(&connected_sum_knots(&j, &wh)?, -1)?;
    let third = connected_sum_floer(m, &y_minus);
    let third_rest = connected_sum_floer(m, &towers_only(&y_minus));
    let want = Grading::int(n) + f - Grading::half(1);
    match (top_reduced(&third), top_reduced(&third_rest)) {
        (Some(t), rest) if t == want && rest.is_none_or(|r| r < t) => {
            notes.push(format!("dominance condition 2 holds: top of HF_red(M # Y_-1(J # Wh(K))) is {t}"));
        }
        (t, rest) => {
            return Ok(EndFloerReport::undetermined(format!(
                "dominance condition 2 fails: top of HF_red(M # Y_-1(J # Wh(K))) is {t:?} (want {want}), \
                 M-only contribution {rest:?}"
            )))
        }
    }

    spec.steps = vec![StepDescriptor::new(StepKind::PositiveClasp, grading_shift(b1 + 1, b1 + 1)); levels - 1];
    let mut report = colimit(&spec)?;
    let expected = Grading::int(n) + f - 1 - Grading::half(i64::from(b1));
    if report.max_nontrivial_grading != Some(expected) {
        return Err(Error::Inconsistent(format!(
            "top grading {:?} differs from n + f(M) - 1 - b1/2 = {expected}",
            report.max_nontrivial_grading
        )));
    }
    report.narrative.extend(notes);
    report.narrative.push(format!("top grading n + f(M) - 1 - b1(M)/2 = {expected}"));
    Ok(report)
}

/// An end to compare: a single slice R^4 or an end sum of several.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EndSpec {
    Single(SliceR4Spec),
    Sum(Vec<SliceR4Spec>),
}

impl EndSpec {
    pub fn reversed(&self) -> EndSpec {
        match self {
            EndSpec::Single(s) => EndSpec::Single(s.reversed()),
            EndSpec::Sum(v) => EndSpec::Sum(v.iter().map(SliceR4Spec::reversed).collect()),
        }
    }

    pub fn report(&self, levels: usize) -> Result<EndFloerReport> {
        match self {
            EndSpec::Single(s) => he_slice_r4(s, levels),
            EndSpec::Sum(v) => he_end_sum(v, levels),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Distinct { witness: String },
    IndistinguishableByThisInvariant { reason: String },
}

fn describe(r: &EndFloerReport) -> String {
    match (r.vanishes, r.max_nontrivial_grading) {
        (Some(true), _) => "vanishes".into(),
        (_, Some(g)) => format!("top grading {g}"),
        (Some(false), None) => "nonzero".into(),
        (None, _) => "undetermined".into(),
    }
}

/// Compares two ends by their end Floer homology, allowing either
/// orientation of `b`.
pub fn distinguish(a: &EndSpec, b: &EndSpec, levels: usize) -> Result<Verdict> {
    let ra = a.report(levels)?;
    let rb = b.report(levels)?;
    let rb_rev = b.reversed().report(levels)?;
    if let Some(r) = [&ra, &rb, &rb_rev].into_iter().find(|r| r.is_undetermined()) {
        return Ok(Verdict::IndistinguishableByThisInvariant {
            reason: format!("a report is undetermined: {}", r.narrative.join("; ")),
        });
    }
    if ra.signature() == rb.signature() {
        return Ok(Verdict::IndistinguishableByThisInvariant { reason: format!("both {}", describe(&ra)) });
    }
    if ra.signature() == rb_rev.signature() {
        return Ok(Verdict::IndistinguishableByThisInvariant {
            reason: format!("both {} after reversing the orientation of the second", describe(&ra)),
        });
    }
    Ok(Verdict::Distinct {
        witness: format!("first: {}; second: {}; second reversed: {}", describe(&ra), describe(&rb), describe(&rb_rev)),
    })
}

/// The system restricted to the levels `indices` (strictly increasing), each
/// new step being the composite of the old ones as an explicit map. Only for
/// systems whose maps are fully known (no positive-clasp steps).
pub fn restrict_to_subsequence(spec: &ExhaustionSpec, indices: &[usize]) -> Result<ExhaustionSpec> {
    check_shifts(spec)?;
    if indices.is_empty() || indices.windows(2).any(|w| w[0] >= w[1]) || indices[indices.len() - 1] >= spec.levels.len()
    {
        return Err(Error::InvalidArgument(format!("bad subsequence {indices:?}")));
    }
    let flags = |i: usize| spec.admissibility_flags.get(i).copied().unwrap_or_default();
    let mut steps = Vec::new();
    for w in indices.windows(2) {
        let (a, b) = (w[0], w[1]);
        let norm_a = Grading::half(i64::from(spec.levels[a].b1));
        let mut blocks = Vec::new();
        for g in normalize_level(&spec.levels[a].module, spec.levels[a].b1).keys() {
            let mut m = step_block(spec, a, *g)?;
            for i in a + 1..b {
                m = step_block(spec, i, *g)?.mul(&m);
            }
            let rows = (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| u8::from(m.get(r, c))).collect()).collect();
            blocks.push(GradedBlock { source_grading: *g + norm_a, rows });
        }
        let shift = spec.steps[a..b].iter().fold(Grading::ZERO, |acc, s| acc + s.grading_shift);
        steps.push(StepDescriptor::new(StepKind::Explicit { blocks }, shift));
    }
    Ok(ExhaustionSpec {
        levels: indices.iter().map(|&i| spec.levels[i].clone()).collect(),
        steps,
        admissibility_flags: indices.iter().map(|&i| flags(i)).collect(),
    })
}
