//! Separation routines. Every routine reports cuts sorted by decreasing
//! violation with ties broken by [`CutKind`] order (triangles before
//! independent sets, then lexicographically), so output does not depend on
//! the number of worker threads.

use std::cmp::Ordering;
use std::collections::HashSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Cut, CutKind};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::scalar::Real;
use crate::tolerances::Tolerances;

/// Separated cuts plus the number of distinct violated cuts that were
/// found before truncation to the requested limit.
#[derive(Debug, Clone, Default)]
pub struct Separation {
    pub cuts: Vec<Cut>,
    pub found: usize,
}

type Candidate = (f64, CutKind);

fn rank_cmp(a: &Candidate, b: &Candidate) -> Ordering {
    b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal).then_with(|| a.1.cmp(&b.1))
}

fn keep_top(cands: &mut Vec<Candidate>, limit: usize) {
    if cands.len() > limit {
        if limit == 0 {
            cands.clear();
            return;
        }
        cands.select_nth_unstable_by(limit - 1, rank_cmp);
        cands.truncate(limit);
    }
    cands.sort_by(rank_cmp);
}

fn finish(mut cands: Vec<Candidate>, found: usize, limit: usize, n: usize) -> Separation {
    keep_top(&mut cands, limit);
    Separation {
        cuts: cands
            .into_iter()
            .map(|(v, kind)| Cut::from_kind(kind, n).with_violation(v))
            .collect(),
        found,
    }
}

/// The `limit` most violated triangle cuts.
pub fn separate_triangles<T: Real>(x: &SymMatrix<T>, k: usize, limit: usize) -> Vec<Cut> {
    separate_triangles_excluding(x, k, limit, Tolerances::DEFAULT.separation, &HashSet::new()).cuts
}

pub fn separate_triangles_excluding<T: Real>(
    x: &SymMatrix<T>,
    k: usize,
    limit: usize,
    tol: f64,
    exclude: &HashSet<CutKind>,
) -> Separation {
    let n = x.order();
    let kk = k as f64;
    let rhs = (kk - 1.0) / kk;
    let per_apex: Vec<(Vec<Candidate>, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = x.row(i);
            let mut cands = Vec::new();
            let mut found = 0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let xj = x.row(j);
                let aij = xi[j].to_f64_lossy();
                for l in (j + 1)..n {
                    if l == i {
                        continue;
                    }
                    let v = aij + xi[l].to_f64_lossy() - xj[l].to_f64_lossy() - rhs;
                    if v > tol {
                        let kind = CutKind::Triangle { i, j, l };
                        if !exclude.contains(&kind) {
                            found += 1;
                            cands.push((v, kind));
                        }
                    }
                }
            }
            keep_top(&mut cands, limit);
            (cands, found)
        })
        .collect();
    let found = per_apex.iter().map(|p| p.1).sum();
    let cands = per_apex.into_iter().flat_map(|p| p.0).collect();
    finish(cands, found, limit, n)
}

fn is_violation<T: Real>(x: &SymMatrix<T>, set: &[usize], k: usize) -> f64 {
    let mut s = 0.0;
    for (a, &p) in set.iter().enumerate() {
        for &q in &set[a + 1..] {
            s += x.get(p, q).to_f64_lossy();
        }
    }
    (1.0 - k as f64) / 2.0 - s
}

/// Exhaustive independent-set separation; only offered for `k ≤ 3`.
pub fn separate_indepset_exact<T: Real>(x: &SymMatrix<T>, k: usize, limit: usize) -> Result<Vec<Cut>> {
    Ok(separate_indepset_exact_excluding(x, k, limit, Tolerances::DEFAULT.separation, &HashSet::new())?.cuts)
}

pub fn separate_indepset_exact_excluding<T: Real>(
    x: &SymMatrix<T>,
    k: usize,
    limit: usize,
    tol: f64,
    exclude: &HashSet<CutKind>,
) -> Result<Separation> {
    if !(2..=3).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "exact independent set separation is limited to k in {{2, 3}}, got {k}"
        )));
    }
    let n = x.order();
    let size = k + 1;
    let per_first: Vec<(Vec<Candidate>, usize)> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut cands = Vec::new();
            let mut found = 0;
            let mut set = vec![a; size];
            let mut visit = |set: &[usize]| {
                let v = is_violation(x, set, k);
                if v > tol {
                    let kind = CutKind::IndepSet(set.to_vec());
                    if !exclude.contains(&kind) {
                        found += 1;
                        cands.push((v, kind));
                    }
                }
            };
            for b in (a + 1)..n {
                set[1] = b;
                for c in (b + 1)..n {
                    set[2] = c;
                    if size == 3 {
                        visit(&set);
                        continue;
                    }
                    for d in (c + 1)..n {
                        set[3] = d;
                        visit(&set);
                    }
                }
            }
            keep_top(&mut cands, limit);
            (cands, found)
        })
        .collect();
    let found = per_first.iter().map(|p| p.1).sum();
    let cands = per_first.into_iter().flat_map(|p| p.0).collect();
    Ok(finish(cands, found, limit, n))
}

/// Greedy independent-set search from every start vertex: repeatedly add
/// the outside vertex with the smallest total `Y = X + J/k` weight to the
/// current set (ties to the smallest index).
pub fn separate_indepset_greedy<T: Real>(x: &SymMatrix<T>, k: usize, limit: usize) -> Vec<Cut> {
    separate_indepset_greedy_excluding(x, k, limit, Tolerances::DEFAULT.separation, &HashSet::new()).cuts
}

pub fn separate_indepset_greedy_excluding<T: Real>(
    x: &SymMatrix<T>,
    k: usize,
    limit: usize,
    tol: f64,
    exclude: &HashSet<CutKind>,
) -> Separation {
    let n = x.order();
    let cands = greedy_candidates(x, k, tol, exclude);
    let found = cands.len();
    finish(cands, found, limit, n)
}

fn greedy_candidates<T: Real>(x: &SymMatrix<T>, k: usize, tol: f64, exclude: &HashSet<CutKind>) -> Vec<Candidate> {
    let n = x.order();
    if k + 1 > n {
        return Vec::new();
    }
    let shift = 1.0 / k as f64;
    let sets: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|start| {
            let mut set = vec![start];
            let mut score: Vec<f64> = (0..n).map(|u| x.get(u, start).to_f64_lossy() + shift).collect();
            let mut inside = vec![false; n];
            inside[start] = true;
            while set.len() < k + 1 {
                let mut best: Option<usize> = None;
                for u in 0..n {
                    if !inside[u] && best.is_none_or(|b| score[u] < score[b]) {
                        best = Some(u);
                    }
                }
                let u = best.expect("k + 1 <= n");
                inside[u] = true;
                set.push(u);
                for (w, s) in score.iter_mut().enumerate() {
                    *s += x.get(w, u).to_f64_lossy() + shift;
                }
            }
            set.sort_unstable();
            set
        })
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for set in sets {
        let v = is_violation(x, &set, k);
        let kind = CutKind::IndepSet(set);
        if v > tol && !exclude.contains(&kind) && seen.insert(kind.clone()) {
            out.push((v, kind));
        }
    }
    out
}

/// Draws one set by the randomized greedy rule: a uniform start vertex,
/// then `k` picks with probability proportional to `1 / (Σ_{j∈C} y_ij + ε)`.
/// The result is in selection order.
pub fn sample_independent_set<T: Real, R: Rng + ?Sized>(y: &SymMatrix<T>, k: usize, eps: f64, rng: &mut R) -> Vec<usize> {
    let n = y.order();
    let start = rng.gen_range(0..n);
    let mut chosen = vec![start];
    let mut rest: Vec<usize> = (0..n).filter(|&v| v != start).collect();
    let mut acc: Vec<f64> = rest.iter().map(|&i| y.get(i, start).to_f64_lossy()).collect();
    for _ in 0..k {
        if rest.is_empty() {
            break;
        }
        // Y is entrywise nonnegative on the base set; the floor only guards
        // against round-off pushing a sum below −ε.
        let weights: Vec<f64> = acc.iter().map(|&s| 1.0 / (s + eps).max(f64::MIN_POSITIVE)).collect();
        let dist = WeightedIndex::new(&weights).expect("positive finite weights");
        let pick = dist.sample(rng);
        let v = rest.remove(pick);
        acc.remove(pick);
        chosen.push(v);
        for (s, &i) in acc.iter_mut().zip(&rest) {
            *s += y.get(i, v).to_f64_lossy();
        }
    }
    chosen
}

/// Probabilistic independent-set separation with `n_r` repetitions.
pub fn separate_indepset_prob<T: Real>(x: &SymMatrix<T>, k: usize, n_r: usize, eps: f64, seed: u64) -> Vec<Cut> {
    separate_indepset_prob_excluding(x, k, n_r, eps, seed, Tolerances::DEFAULT.separation, &HashSet::new()).cuts
}

pub fn separate_indepset_prob_excluding<T: Real>(
    x: &SymMatrix<T>,
    k: usize,
    n_r: usize,
    eps: f64,
    seed: u64,
    tol: f64,
    exclude: &HashSet<CutKind>,
) -> Separation {
    let n = x.order();
    let cands = prob_candidates(x, k, n_r, eps, seed, tol, exclude);
    let found = cands.len();
    finish(cands, found, usize::MAX, n)
}

fn prob_candidates<T: Real>(
    x: &SymMatrix<T>,
    k: usize,
    n_r: usize,
    eps: f64,
    seed: u64,
    tol: f64,
    exclude: &HashSet<CutKind>,
) -> Vec<Candidate> {
    let n = x.order();
    if n_r == 0 || k + 1 > n {
        return Vec::new();
    }
    let shift = T::one() / T::from_count(k);
    let y = x.map(|v| v + shift);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for _ in 0..n_r {
        let mut set = sample_independent_set(&y, k, eps, &mut rng);
        set.sort_unstable();
        let kind = CutKind::IndepSet(set);
        if !seen.insert(kind.clone()) {
            continue;
        }
        let CutKind::IndepSet(set) = &kind else { unreachable!() };
        let v = is_violation(x, set, k);
        if v > tol && !exclude.contains(&kind) {
            out.push((v, kind));
        }
    }
    out
}

/// Most violated BQP cuts over all distinct `i < j`, `l` in `1..=2n`.
pub fn separate_bqp<T: Real>(x: &SymMatrix<T>, limit: usize) -> Vec<Cut> {
    separate_bqp_excluding(x, limit, Tolerances::DEFAULT.separation, &HashSet::new()).cuts
}

pub fn separate_bqp_excluding<T: Real>(
    x: &SymMatrix<T>,
    limit: usize,
    tol: f64,
    exclude: &HashSet<CutKind>,
) -> Separation {
    let q = x.order();
    assert!(q % 2 == 1 && q >= 3, "BQP separation needs a matrix of order 2n + 1");
    let n = (q - 1) / 2;
    let per_l: Vec<(Vec<Candidate>, usize)> = (1..q)
        .into_par_iter()
        .map(|l| {
            let xl = x.row(l);
            let xll = xl[l].to_f64_lossy();
            let mut cands = Vec::new();
            let mut found = 0;
            for i in 1..q {
                if i == l {
                    continue;
                }
                let xi = x.row(i);
                let base = xl[i].to_f64_lossy() - xll;
                for j in (i + 1)..q {
                    if j == l {
                        continue;
                    }
                    let v = base + xl[j].to_f64_lossy() - xi[j].to_f64_lossy();
                    if v > tol {
                        let kind = CutKind::Bqp { i, j, l };
                        if !exclude.contains(&kind) {
                            found += 1;
                            cands.push((v, kind));
                        }
                    }
                }
            }
            keep_top(&mut cands, limit);
            (cands, found)
        })
        .collect();
    let found = per_l.iter().map(|p| p.1).sum();
    let cands = per_l.into_iter().flat_map(|p| p.0).collect();
    finish(cands, found, limit, n)
}

/// Settings for the pooled triangle and independent-set separation used
/// for equipartition problems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpSeparationParams {
    pub limit: usize,
    pub tol: f64,
    /// Repetitions of the probabilistic independent-set heuristic.
    pub n_r: usize,
    /// Sensitivity of the probabilistic heuristic.
    pub eps: f64,
    pub seed: u64,
    /// Exhaustive independent-set search is used for `k ≤ 3` when the number
    /// of candidate sets is at most this; otherwise the heuristics run.
    pub exact_is_max_sets: u64,
}

fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for t in 0..r {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc.min(u64::MAX as u128) as u64
}

/// Triangle and independent-set candidates ranked together.
pub fn separate_ep_pooled<T: Real>(
    x: &SymMatrix<T>,
    k: usize,
    params: &EpSeparationParams,
    exclude: &HashSet<CutKind>,
) -> Separation {
    let n = x.order();
    let tri = separate_triangles_excluding(x, k, params.limit, params.tol, exclude);
    let (is_cands, is_found) = if k <= 3 && binomial(n, k + 1) <= params.exact_is_max_sets {
        let s = separate_indepset_exact_excluding(x, k, params.limit, params.tol, exclude).expect("k <= 3");
        (to_candidates(s.cuts), s.found)
    } else {
        let mut cands = greedy_candidates(x, k, params.tol, exclude);
        let mut seen: HashSet<CutKind> = cands.iter().map(|c| c.1.clone()).collect();
        for c in prob_candidates(x, k, params.n_r, params.eps, params.seed, params.tol, exclude) {
            if seen.insert(c.1.clone()) {
                cands.push(c);
            }
        }
        let found = cands.len();
        (cands, found)
    };
    let mut all = to_candidates(tri.cuts);
    all.extend(is_cands);
    finish(all, tri.found + is_found, params.limit, n)
}

fn to_candidates(cuts: Vec<Cut>) -> Vec<Candidate> {
    cuts.into_iter().map(|c| (c.violation_at_add, c.kind)).collect()
}
