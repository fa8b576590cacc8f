//! Acceptance suite: one line `PASS <criterion>` or `FAIL <criterion>` per
//! criterion, exit status nonzero if any fails. Every expected value is either
//! a literal known value or computed here by an independent oracle.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use floerforge::cfk::{
    builtin, connected_sum_knots, hfk_hat, knot_numerics, reduced_basis_form, slice_torus_sum, staircase_torus,
    KnotComplex, Sign, BUILTIN_NAMES,
};
use floerforge::complex::FreeComplex;
use floerforge::endfloer::{
    colimit, distinguish, he_end_sum, he_product_end, he_slice_r4, restrict_to_subsequence, CassonHandle,
    EndFloerReport, EndSpec, Rank, RankTag, SliceR4Spec, Verdict,
};
use floerforge::homology::{homology_decomposition, FUDecomposition, Torsion};
use floerforge::json::{corpus_manifest, load_corpus_knot};
use floerforge::surgery::{
    build_cone, exact_triangle_force, one_handle_stabilize, surgery_hf, surgery_hf_reduced, HFPlusResult, MapVerdict,
    RankTable,
};
use floerforge::whitehead::{
    box_parameters, clasp_triangle, filtration_data, hedden_hfk_double, negative_double_cfk,
    three_manifold_predictions, whitehead_double_cfk,
};
use floerforge::{tensor_complexes, Grading};

const LEVELS: usize = 3;

fn g(n: i64) -> Grading {
    Grading::int(n)
}

fn h(n: i64) -> Grading {
    Grading::half(n)
}

fn k(n: i64) -> KnotComplex {
    load_corpus_knot(&format!("k{n}")).unwrap()
}

fn wh(n: i64) -> KnotComplex {
    load_corpus_knot(&format!("wh_k{n}")).unwrap()
}

fn r(n: i64) -> SliceR4Spec {
    SliceR4Spec::new(k(n), CassonHandle::AllPositiveChain)
}

fn top(report: &EndFloerReport) -> Grading {
    report.max_nontrivial_grading.expect("top grading")
}

/// Checks a chain-level answer against a dense truncation of the cone.
fn assert_cone_agrees(knot: &KnotComplex, n: i64, result: &FUDecomposition) {
    let cone = build_cone(knot, n).unwrap().complex;
    let limit = common::truncation_limit(&cone, 5);
    assert_eq!(common::below(common::truncated_plus(&cone, 5), limit), common::plus_dims(result, limit));
}

/// 1. Zero-surgeries on the unknot, the trefoil staircase and the figure-eight.
fn zero_surgery() {
    let cases = [
        ("unknot", builtin("unknot").unwrap(), FUDecomposition::new(vec![h(1), h(-1)], vec![])),
        ("T(2,3)", staircase_torus(3, Sign::Plus).unwrap(), FUDecomposition::new(vec![h(-3), h(-1)], vec![])),
        ("figure8", builtin("figure8").unwrap(), FUDecomposition::new(vec![h(1), h(-1)], vec![Torsion::new(h(-1), 1)])),
    ];
    for (name, knot, want) in cases {
        let got = surgery_hf(&knot, 0).unwrap().decomposition;
        assert_eq!(got, want, "{name}");
        assert_eq!(surgery_hf_reduced(&knot, 0).unwrap().decomposition, want, "{name} (reduced route)");
        assert_cone_agrees(&knot, 0, &want);
    }
}

/// `V_0` of the staircase `T(2, 2g + 1)`: `ceil(g / 2)`; zero for its mirror.
fn v0_staircase(genus: i64) -> i64 {
    (genus + 1) / 2
}

/// 2. The built-in J in Y: Y_{-1}(J) looks like zero-surgery on the unknot.
fn builtin_j_in_y() {
    let j = builtin("J_in_Y").unwrap();
    let got = surgery_hf(&j, -1).unwrap();
    let s1s2 = FUDecomposition::new(vec![h(1), h(-1)], vec![]);
    assert_eq!(got.decomposition, s1s2);
    assert_eq!(surgery_hf(&builtin("unknot").unwrap(), 0).unwrap().decomposition, s1s2);
    assert!(got.hf_red().is_empty());
    // Zero-surgery d-invariants: d_{1/2} = 1/2 - 2 V_0(K), d_{-1/2} = -1/2 + 2 V_0(mirror K).
    let y = surgery_hf(&staircase_torus(3, Sign::Plus).unwrap(), 0).unwrap();
    let d_plus = h(1) - 2 * v0_staircase(1);
    let d_minus = h(-1) + 2 * 0;
    assert_eq!((d_plus, d_minus), (h(-3), h(-1)));
    assert_eq!(FUDecomposition::new(vec![d_plus, d_minus], vec![]), y.decomposition);
    assert!(y.hf_red().is_empty());
    // Same formula on Y_{-1}(J) = S^3_0(U): V_0 = 0 on both sides.
    assert!(got.d_invariants.contains(&(h(-1) + 2 * 0)));
    assert!(got.d_invariants.contains(&(h(1) - 2 * 0)));
}

/// The three groups for `x ⊕ ⊕ B[k_i]`, written out from the box parameters.
fn three_groups(ks: &[Grading]) -> [FUDecomposition; 3] {
    let one = |gr: Grading| Torsion::new(gr, 1);
    let item1 =
        FUDecomposition::new(vec![g(1), g(0), g(0), g(-1)], ks.iter().flat_map(|k| [one(*k), one(*k - 1)]).collect());
    let item2 = FUDecomposition::new(
        vec![h(1), h(-1)],
        ks.iter().flat_map(|k| [one(*k - h(1)), one(*k - h(1)), one(*k - h(3)), one(*k - h(3))]).collect(),
    );
    [item1, item2.clone(), item2]
}

/// 3. The three-manifold groups for Wh(K_n), formula versus mapping cone.
fn three_manifolds() {
    let j = builtin("J_in_Y").unwrap();
    for n in [3, 5] {
        let knot = wh(n);
        let ks = box_parameters(&knot).unwrap();
        assert_eq!(ks.len() as i64, 8 * (n - 2), "n={n}");
        assert_eq!(ks.last(), Some(&g(n - 2)));
        let want = three_groups(&ks);
        assert_eq!(three_manifold_predictions(&ks), want, "formulas, n={n}");
        let item1 = one_handle_stabilize(&surgery_hf(&knot, 0).unwrap()).0.decomposition;
        let double = whitehead_double_cfk(&reduced_basis_form(&knot).unwrap()).unwrap();
        let item2 = surgery_hf(&double, 0).unwrap().decomposition;
        let item3 = surgery_hf(&connected_sum_knots(&j, &knot).unwrap(), -1).unwrap().decomposition;
        assert_eq!([item1, item2, item3], want, "cone, n={n}");
    }
}

/// 4. Exactness forces the clasp maps.
fn exact_triangle() {
    let dim = |t: &RankTable| t.values().sum::<u64>();
    for n in [3, 5] {
        let knot = wh(n);
        let boxes = box_parameters(&knot).unwrap().len() as u64;
        let p = clasp_triangle(&knot, Sign::Plus).unwrap();
        assert_eq!((dim(&p.m1), dim(&p.m2), dim(&p.m3)), (2 * boxes, 4 * boxes, 4 * boxes));
        let v = exact_triangle_force([&p.m1, &p.m2, &p.m3], p.shifts).unwrap();
        assert_eq!(v.f, MapVerdict::ForcedInjectiveOnTop, "positive clasp, n={n}");
        let m = clasp_triangle(&knot, Sign::Minus).unwrap();
        assert_eq!((dim(&m.m1), dim(&m.m2), dim(&m.m3)), (2 * boxes, 4 * boxes, 6 * boxes));
        let v = exact_triangle_force([&m.m1, &m.m2, &m.m3], m.shifts).unwrap();
        assert_eq!(v.f, MapVerdict::ForcedZero, "negative clasp, n={n}");
        // The bare rank pattern 2n -> 4n -> 6n already forces F = 0.
        let t = |gr: i64, r: i64| -> RankTable { [(g(gr), r as u64)].into() };
        let v = exact_triangle_force([&t(0, 2 * n), &t(1, 4 * n), &t(0, 6 * n)], [None; 3]).unwrap();
        assert_eq!(v.f, MapVerdict::ForcedZero, "pattern, n={n}");
    }
}

/// 5. Whitehead doubles against the filtration-homology formula.
fn doubling_oracle() {
    for (name, knot) in [("figure8", builtin("figure8").unwrap()), ("K3", k(3)), ("K5", k(5))] {
        let genus = knot_numerics(&knot).unwrap().genus;
        let want = common::hedden_oracle(&knot, genus);
        let rb = reduced_basis_form(&knot).unwrap();
        let double = whitehead_double_cfk(&rb).unwrap();
        let dims = hfk_hat(&double).dims;
        assert_eq!(dims, want, "{name}");
        assert_eq!(hedden_hfk_double(&filtration_data(&knot, genus), genus).unwrap(), want, "{name}");
        assert_eq!(dims.values().sum::<usize>(), want.values().sum::<usize>());
        let top = rb.max_maslov().unwrap();
        assert_eq!(box_parameters(&double).unwrap().last(), Some(&(top - 1)), "{name}");
        if let Some(n) = name.strip_prefix('K') {
            assert_eq!(top, g(n.parse::<i64>().unwrap() - 1), "{name}");
        }
    }
}

/// 6. End Floer homology of the slice R^4s.
fn end_invariants() {
    let mut tops = Vec::new();
    for n in [3, 5, 7, 9] {
        let rep = he_slice_r4(&r(n), LEVELS).unwrap();
        assert_eq!(top(&rep), g(n - 3), "R_{n}");
        assert_eq!(rep.per_grading[&g(n - 3)].rank, Rank::Infinite);
        assert_eq!(rep.per_grading[&g(n - 3)].tag, RankTag::Exact);
        tops.push(top(&rep));
        let neg = SliceR4Spec::new(k(n), CassonHandle::AllNegativeChain);
        assert_eq!(he_slice_r4(&neg, LEVELS).unwrap().vanishes, Some(true), "CH- on K_{n}");
    }
    tops.dedup();
    assert_eq!(tops.len(), 4, "pairwise distinct");
    for n in [3, 5] {
        let sum = [r(n), r(n).reversed()];
        assert_eq!(he_end_sum(&sum, LEVELS).unwrap().vanishes, Some(true));
        let rev: Vec<SliceR4Spec> = sum.iter().map(SliceR4Spec::reversed).collect();
        assert_eq!(he_end_sum(&rev, LEVELS).unwrap().vanishes, Some(true));
    }
    let single = |s| EndSpec::Single(s);
    assert!(matches!(distinguish(&single(r(3)), &single(r(5)), LEVELS).unwrap(), Verdict::Distinct { .. }));
    for n in [3, 5] {
        assert!(matches!(
            distinguish(&single(r(n)), &single(r(n)), LEVELS).unwrap(),
            Verdict::IndistinguishableByThisInvariant { .. }
        ));
    }
}

/// `∂² = 0` and homogeneity, checked directly on the arrow list.
fn assert_chain_complex(c: &FreeComplex, what: &str) {
    let mut square: BTreeMap<(usize, usize, u32), bool> = BTreeMap::new();
    for a in c.arrows() {
        assert_eq!(c.maslov(a.to), c.maslov(a.from) - 1 + 2 * i64::from(a.upower), "{what}: homogeneity");
        for b in c.arrows().iter().filter(|b| b.from == a.to) {
            *square.entry((a.from, b.to, a.upower + b.upower)).or_default() ^= true;
        }
    }
    assert!(square.values().all(|odd| !odd), "{what}: d^2 != 0");
}

/// Alexander polynomial of T(2, n) as exponent -> coefficient.
fn alexander_torus(n: i64) -> BTreeMap<i64, i64> {
    let genus = (n - 1) / 2;
    (0..n).map(|j| (j - genus, if j % 2 == 0 { 1 } else { -1 })).collect()
}

/// 7. Structural properties.
fn properties() {
    let mut builders: Vec<(String, KnotComplex)> =
        BUILTIN_NAMES.iter().map(|n| (n.to_string(), builtin(n).unwrap())).collect();
    for n in [3, 5, 7] {
        builders.push((format!("T(2,{n})"), staircase_torus(n, Sign::Plus).unwrap()));
        builders.push((format!("mirror T(2,{n})"), staircase_torus(n, Sign::Minus).unwrap()));
        builders.push((format!("K_{n}"), slice_torus_sum(n).unwrap()));
    }
    let f8 = reduced_basis_form(&builtin("figure8").unwrap()).unwrap();
    builders.push(("Wh(figure8)".into(), whitehead_double_cfk(&f8).unwrap()));
    builders.push(("Wh-(figure8)".into(), negative_double_cfk(&f8).unwrap()));
    for (name, b) in &builders {
        assert_chain_complex(b.base(), name);
    }
    for (na, a) in &builders {
        for (nb, b) in &builders {
            assert_chain_complex(&tensor_complexes(a.base(), b.base()), &format!("{na} ⊗ {nb}"));
        }
    }
    // Conjugation symmetry on every knot in S^3 in the corpus.
    for (stem, knot) in corpus_manifest().unwrap() {
        if !knot.ambient().is_s3() {
            continue;
        }
        let dims = hfk_hat(&knot).dims;
        for ((m, s), d) in &dims {
            assert_eq!(dims.get(&(*m - 2 * *s, -s)), Some(d), "{stem}");
        }
    }
    // Euler characteristic of the staircases.
    for n in [3, 5, 7, 9] {
        for sign in [Sign::Plus, Sign::Minus] {
            let mut chi: BTreeMap<i64, i64> = BTreeMap::new();
            for ((m, s), d) in hfk_hat(&staircase_torus(n, sign).unwrap()).dims {
                let parity = m.to_integer().unwrap().rem_euclid(2);
                *chi.entry(s).or_default() += if parity == 0 { d as i64 } else { -(d as i64) };
            }
            chi.retain(|_, c| *c != 0);
            assert_eq!(chi, alexander_torus(n), "T(2,{n}) {sign:?}");
        }
    }
    // Truncation N versus N + 1 on cones and random complexes.
    let mut complexes: Vec<(FreeComplex, FUDecomposition)> = Vec::new();
    for (stem, n) in [("trefoil", 0), ("figure8", 1), ("t2_5", -1), ("j_in_y", -1), ("k3", 0)] {
        let knot = load_corpus_knot(stem).unwrap();
        complexes.push((build_cone(&knot, n).unwrap().complex, surgery_hf(&knot, n).unwrap().decomposition));
    }
    for seed in 0..20 {
        let (c, known) = common::random_complex(seed);
        assert_eq!(homology_decomposition(&c).unwrap(), known, "seed {seed}");
        let plus = floerforge::plus_presentation(&known, floerforge::Convention::Minus);
        complexes.push((c, plus));
    }
    for (c, plus) in &complexes {
        for n in 3..6 {
            let limit = common::truncation_limit(c, n);
            let at_n = common::below(common::truncated_plus(c, n), limit);
            assert_eq!(at_n, common::below(common::truncated_plus(c, n + 1), limit));
            assert_eq!(at_n, common::plus_dims(plus, limit));
        }
    }
    // Colimits are unchanged by passing to cofinal subsequences.
    for seed in [11, 22, 33] {
        let (spec, limit) = common::tail_idempotent_system(seed, 7);
        let full = colimit(&spec).unwrap();
        let ranks: BTreeMap<Grading, u64> = full
            .per_grading
            .iter()
            .map(|(gr, e)| match e.rank {
                Rank::Finite(n) => (*gr, n),
                Rank::Infinite => panic!("finite system reported an infinite rank"),
            })
            .collect();
        assert_eq!(ranks, limit, "seed {seed}");
        for indices in [vec![4, 5, 6], vec![0, 2, 4, 5, 6], vec![1, 3, 4, 5, 6]] {
            let sub = colimit(&restrict_to_subsequence(&spec, &indices).unwrap()).unwrap();
            assert_eq!(sub.per_grading, full.per_grading, "seed {seed} {indices:?}");
        }
    }
}

/// 8. Product ends: top grading n + f(M) - 1 - b1(M)/2 with f(S^3) = -2.
fn product_end() {
    let s3 = HFPlusResult::s3();
    let mut tops = Vec::new();
    for n in [5, 7] {
        let product = top(&he_product_end(&s3, 0, &r(n), n, LEVELS).unwrap());
        assert_eq!(product, top(&he_slice_r4(&r(n), LEVELS).unwrap()), "n={n}");
        assert_eq!(product, g(n - 2 - 1), "n={n}");
        tops.push(product);
    }
    assert_ne!(tops[0], tops[1]);
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 8] = [
        ("zero-surgery", zero_surgery),
        ("builtin-j-in-y", builtin_j_in_y),
        ("three-manifolds", three_manifolds),
        ("exact-triangle", exact_triangle),
        ("doubling-oracle", doubling_oracle),
        ("end-invariants", end_invariants),
        ("properties", properties),
        ("product-end", product_end),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let ok = catch_unwind(AssertUnwindSafe(check)).is_ok();
        println!("{} {name}", if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
