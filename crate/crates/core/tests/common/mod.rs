//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's reduction code: homology is computed from dense ranks of
//! graded differentials, and random complexes come with their answer.

#![allow(dead_code)]

use std::collections::BTreeMap;

use floerforge::cfk::KnotComplex;
use floerforge::complex::{FreeComplex, Generator};
use floerforge::endfloer::{AdmissibilityFlags, ExhaustionSpec, Level};
use floerforge::homology::{FUDecomposition, Torsion};
use floerforge::surgery::RankTable;
use floerforge::whitehead::{GradedBlock, StepDescriptor, StepKind};
use floerforge::Grading;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Rank over F2 of a dense matrix given by rows.
pub fn rank_f2(mut rows: Vec<Vec<bool>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col]) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Homology dimensions of a graded F2 complex given as generators (by
/// grading) and a list of nonzero matrix entries `(source, target)`.
pub fn graded_homology(gradings: &[Grading], entries: &[(usize, usize)]) -> BTreeMap<Grading, u64> {
    let mut by_grading: BTreeMap<Grading, Vec<usize>> = BTreeMap::new();
    for (i, g) in gradings.iter().enumerate() {
        by_grading.entry(*g).or_default().push(i);
    }
    let rank_from = |g: Grading| -> usize {
        let (Some(src), Some(dst)) = (by_grading.get(&g), by_grading.get(&(g - 1))) else { return 0 };
        let pos: BTreeMap<usize, usize> = dst.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        let idx: BTreeMap<usize, usize> = src.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        let mut rows = vec![vec![false; dst.len()]; src.len()];
        for (s, t) in entries {
            if let (Some(r), Some(c)) = (idx.get(s), pos.get(t)) {
                rows[*r][*c] ^= true;
            }
        }
        rank_f2(rows)
    };
    by_grading
        .iter()
        .map(|(g, gens)| (*g, (gens.len() - rank_from(*g) - rank_from(*g + 1)) as u64))
        .filter(|(_, d)| *d > 0)
        .collect()
}

/// The plus complex of `c` truncated at `U^-n`: generators `U^-k x`
/// (`1 <= k <= n`) in grading `m(x) + 2k`; its homology is `HF^+` in
/// gradings below `min m + 2n - 1`.
pub fn truncated_plus(c: &FreeComplex, n: i64) -> BTreeMap<Grading, u64> {
    let mut gradings = Vec::new();
    let mut id = BTreeMap::new();
    for x in 0..c.len() {
        for k in 1..=n {
            id.insert((x, k), gradings.len());
            gradings.push(c.maslov(x) + 2 * k);
        }
    }
    let mut entries = Vec::new();
    for a in c.arrows() {
        for k in 1..=n {
            if let Some(t) = id.get(&(a.to, k - i64::from(a.upower))) {
                entries.push((id[&(a.from, k)], *t));
            }
        }
    }
    graded_homology(&gradings, &entries)
}

/// Largest grading below which [`truncated_plus`] at level `n` is exact.
pub fn truncation_limit(c: &FreeComplex, n: i64) -> Grading {
    let min = c.generators().iter().map(|g| g.maslov).min().unwrap_or(Grading::ZERO);
    min + 2 * n - 1
}

/// Graded dimensions of a plus-convention module below `limit`.
pub fn plus_dims(d: &FUDecomposition, limit: Grading) -> BTreeMap<Grading, u64> {
    let mut out: BTreeMap<Grading, u64> = BTreeMap::new();
    for t in d.towers() {
        let mut g = *t;
        while g < limit {
            *out.entry(g).or_default() += 1;
            g = g + 2;
        }
    }
    for t in d.torsion() {
        for i in 0..i64::from(t.length) {
            *out.entry(t.grading - 2 * i).or_default() += 1;
        }
    }
    out.retain(|g, v| *g < limit && *v > 0);
    out
}

/// Restricts a graded table to gradings below `limit`.
pub fn below(m: BTreeMap<Grading, u64>, limit: Grading) -> BTreeMap<Grading, u64> {
    m.into_iter().filter(|(g, _)| *g < limit).collect()
}

/// Homology of `C / UC` (hat flavour) from the power-zero arrows.
pub fn hat_dims(c: &FreeComplex) -> BTreeMap<Grading, u64> {
    let gradings: Vec<Grading> = c.generators().iter().map(|g| g.maslov).collect();
    let entries: Vec<(usize, usize)> = c.arrows().iter().filter(|a| a.upower == 0).map(|a| (a.from, a.to)).collect();
    graded_homology(&gradings, &entries)
}

/// A random complex over F2[U] with known homology: a direct sum of free
/// generators and pairs `x -> U^k y`, scrambled by random graded base changes.
/// Returns the complex and its minus-convention decomposition.
pub fn random_complex(seed: u64) -> (FreeComplex, FUDecomposition) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut gens: Vec<Grading> = Vec::new();
    let mut pairs = Vec::new();
    let mut towers = Vec::new();
    let mut torsion = Vec::new();
    for _ in 0..rng.gen_range(1..=6) {
        let g = Grading::int(rng.gen_range(-4..=4));
        if rng.gen_bool(0.35) {
            gens.push(g);
            towers.push(g);
        } else {
            // x at g, y at g - 1 + 2k, d x = U^k y.
            let k: i64 = rng.gen_range(0..=3);
            pairs.push((gens.len(), gens.len() + 1));
            gens.push(g);
            gens.push(g - 1 + 2 * k);
            if k > 0 {
                torsion.push(Torsion::new(g - 1 + 2 * k, k as u32));
            }
        }
    }
    let n = gens.len();
    let mut rows = vec![vec![false; n]; n];
    for (x, y) in pairs {
        rows[x][y] = true;
    }
    scramble(&mut rng, &gens, &mut rows);
    let generators: Vec<Generator> =
        gens.iter().enumerate().map(|(i, g)| Generator { name: format!("g{i}"), maslov: *g }).collect();
    let targets: Vec<Vec<usize>> =
        rows.iter().map(|r| r.iter().enumerate().filter(|(_, b)| **b).map(|(j, _)| j).collect()).collect();
    let c = FreeComplex::from_graded_rows(generators, &targets).expect("homogeneous by construction");
    (c, FUDecomposition::new(towers, torsion))
}

/// Random base changes `e_i <- e_i + U^q e_j` (`m(e_j) = m(e_i) + 2q`,
/// `q >= 0`) applied to the differential `rows[source][target]`.
fn scramble(rng: &mut StdRng, gens: &[Grading], rows: &mut [Vec<bool>]) {
    let n = gens.len();
    for _ in 0..4 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let diff = gens[j] - gens[i];
        let ok = i != j && diff.to_integer().is_some_and(|d| d >= 0 && d % 2 == 0);
        if !ok {
            continue;
        }
        // d e'_i = d e_i + U^q d e_j.
        let row_j = rows[j].clone();
        for (a, b) in rows[i].iter_mut().zip(&row_j) {
            *a ^= b;
        }
        // e_i = e'_i + U^q e'_j: every arrow into e_i also reaches e_j.
        for r in rows.iter_mut() {
            if r[i] {
                r[j] ^= true;
            }
        }
    }
}

/// `H_*(F(K, i))` by dense ranks of the hat complex restricted to `A <= i`.
pub fn dense_filtration(k: &KnotComplex, i: i64) -> BTreeMap<Grading, u64> {
    let keep: Vec<usize> = (0..k.len()).filter(|&x| k.alexander(x) <= i).collect();
    let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(p, x)| (*x, p)).collect();
    let gradings: Vec<Grading> = keep.iter().map(|x| k.base().maslov(*x)).collect();
    let entries: Vec<(usize, usize)> = k
        .base()
        .arrows()
        .iter()
        .filter(|a| a.upower == 0)
        .filter_map(|a| Some((*pos.get(&a.from)?, *pos.get(&a.to)?)))
        .collect();
    graded_homology(&gradings, &entries)
}

/// HFK-hat of the positive untwisted double of a slice-type knot of genus g,
/// from the filtration homologies (formal negative exponents included).
pub fn hedden_oracle(k: &KnotComplex, g: i64) -> BTreeMap<(Grading, i64), usize> {
    let mut acc: BTreeMap<(Grading, i64), i64> = BTreeMap::new();
    *acc.entry((Grading::int(1), 1)).or_default() -= 2 * g + 2;
    *acc.entry((Grading::ZERO, 0)).or_default() -= 4 * g + 3;
    *acc.entry((Grading::int(-1), -1)).or_default() -= 2 * g + 2;
    for i in -g..=g {
        for (m, d) in dense_filtration(k, i) {
            let d = d as i64;
            *acc.entry((m + 1, 1)).or_default() += 2 * d;
            *acc.entry((m, 0)).or_default() += 4 * d;
            *acc.entry((m - 1, -1)).or_default() += 2 * d;
        }
    }
    assert!(acc.values().all(|r| *r >= 0), "negative rank in {acc:?}");
    acc.into_iter().filter(|(_, r)| *r > 0).map(|(k, r)| (k, r as usize)).collect()
}

/// A random `n x n` idempotent over F2 of rank `r`: `S diag(1^r, 0) S^-1`.
pub fn idempotent(rng: &mut StdRng, n: usize, r: usize) -> Vec<Vec<u8>> {
    let mut s: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect();
    let mut inv = s.clone();
    for _ in 0..4 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            continue;
        }
        // S <- S E (column b += column a); S^-1 <- E^-1 S^-1 (row a += row b).
        for row in s.iter_mut() {
            row[b] ^= row[a];
        }
        let rb = inv[b].clone();
        for (x, y) in inv[a].iter_mut().zip(&rb) {
            *x ^= y;
        }
    }
    let mut p = vec![vec![0u8; n]; n];
    for (i, row) in p.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..r).fold(0, |acc, t| acc ^ (s[i][t] & inv[t][j]));
        }
    }
    p
}

/// A system of `levels` copies of a graded space whose first steps are random
/// and whose last steps are a fixed idempotent per grading; its direct limit
/// has the idempotent's rank in each grading.
pub fn tail_idempotent_system(seed: u64, levels: usize) -> (ExhaustionSpec, BTreeMap<Grading, u64>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let b1 = rng.gen_range(0..3u32);
    let mut module = RankTable::new();
    let mut limit = BTreeMap::new();
    let mut tail = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let grading = Grading::half(rng.gen_range(-6..=6));
        if module.contains_key(&grading) {
            continue;
        }
        let n = rng.gen_range(1..=4usize);
        let rank = rng.gen_range(0..=n);
        module.insert(grading, n as u64);
        if rank > 0 {
            limit.insert(grading - Grading::half(i64::from(b1)), rank as u64);
        }
        tail.push(GradedBlock { source_grading: grading, rows: idempotent(&mut rng, n, rank) });
    }
    let mut steps = Vec::new();
    for i in 0..levels - 1 {
        let blocks = if i + 3 < levels {
            module
                .iter()
                .map(|(gr, n)| {
                    let n = *n as usize;
                    GradedBlock {
                        source_grading: *gr,
                        rows: (0..n).map(|_| (0..n).map(|_| u8::from(rng.gen_bool(0.5))).collect()).collect(),
                    }
                })
                .collect()
        } else {
            tail.clone()
        };
        steps.push(StepDescriptor::new(StepKind::Explicit { blocks }, Grading::ZERO));
    }
    let level = Level { b1, module, label: String::new() };
    let flags = vec![AdmissibilityFlags::default(); levels];
    (ExhaustionSpec { levels: vec![level; levels], steps, admissibility_flags: flags }, limit)
}
