//! Shared fixtures: random instances and QP oracles for the projection sets.
#![allow(dead_code)]

use gpp_core::cuts::Cut;
use gpp_core::graph::{gen_gnp_degree, gen_spinglass, GraphInstance, PartitionSpec};
use gpp_core::linalg::SymMatrix;
use gpp_core::oracle::SymProjectionQp;
use gpp_core::relaxation::{gangster_indices, BaseSetDescriptor, Relaxation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_sym(rng: &mut impl Rng, q: usize, lo: f64, hi: f64) -> SymMatrix<f64> {
    let mut m = SymMatrix::zeros(q);
    for i in 0..q {
        for j in i..q {
            m.set(i, j, rng.gen_range(lo..hi));
        }
    }
    m
}

/// Random assignment of `0..n` to parts with the given sizes.
pub fn random_partition(rng: &mut impl Rng, sizes: &[usize]) -> Vec<usize> {
    let mut part: Vec<usize> = sizes.iter().enumerate().flat_map(|(p, &s)| std::iter::repeat_n(p, s)).collect();
    part.shuffle(rng);
    part
}

/// Adds the base-set constraints to a projection QP.
pub fn add_base_constraints(qp: &mut SymProjectionQp, base: &BaseSetDescriptor<f64>) {
    let q = qp.order;
    match *base {
        BaseSetDescriptor::Ep { diag, lo, hi, .. } => {
            for i in 0..q {
                qp.add_eq(&[((i, i), 1.0)], diag);
                for j in (i + 1)..q {
                    qp.add_le(&[((i, j), 1.0)], hi);
                    qp.add_le(&[((i, j), -1.0)], -lo);
                }
            }
        }
        BaseSetDescriptor::Bp { n, m1, .. } => {
            qp.add_eq(&[((0, 0), 1.0)], 1.0);
            for a in 1..q {
                qp.add_eq(&[((0, a), 1.0), ((a, a), -1.0)], 0.0);
            }
            for v in 0..n {
                qp.add_eq(&[((1 + v, 1 + v), 1.0), ((1 + n + v, 1 + n + v), 1.0)], 1.0);
            }
            let trace: Vec<_> = (1..=n).map(|a| ((a, a), 1.0)).collect();
            qp.add_eq(&trace, m1 as f64);
            for (a, b) in gangster_indices(n) {
                qp.add_eq(&[((a, b), 1.0)], 0.0);
            }
            for i in 0..q {
                for j in i..q {
                    qp.add_le(&[((i, j), 1.0)], 1.0);
                    qp.add_le(&[((i, j), -1.0)], 0.0);
                }
            }
        }
    }
}

pub fn add_cut(qp: &mut SymProjectionQp, cut: &Cut, k: usize) {
    let (terms, rhs) = cut.linear_form::<f64>(k);
    qp.add_le(&terms, rhs);
}

/// `Π_{𝒳 ∩ ⋂ cuts}(m)` by the active-set oracle, started from `start`.
pub fn oracle_projection(
    m: &SymMatrix<f64>,
    base: &BaseSetDescriptor<f64>,
    cuts: &[Cut],
    k: usize,
    start: &SymMatrix<f64>,
) -> SymMatrix<f64> {
    let mut qp = SymProjectionQp::new(m);
    add_base_constraints(&mut qp, base);
    for c in cuts {
        add_cut(&mut qp, c, k);
    }
    qp.solve(start).expect("oracle QP")
}

/// Integer-weight instance number `t` of the validity suite: `n ≤ 12`,
/// equipartitions with `k ∈ {2, 3, 4}` and bisections `m = (⌈0.6n⌉, rest)`.
pub fn validity_instance(t: usize) -> (GraphInstance, PartitionSpec) {
    const COMBOS: [(usize, usize); 14] = [
        (8, 2),
        (9, 3),
        (12, 4),
        (10, 0),
        (12, 2),
        (6, 3),
        (8, 4),
        (9, 0),
        (10, 2),
        (12, 3),
        (6, 0),
        (6, 2),
        (12, 0),
        (8, 0),
    ];
    let (n, k) = COMBOS[t % COMBOS.len()];
    let seed = 1000 + t as u64;
    let spin = (t / COMBOS.len()) % 2 == 1;
    let g = if spin && n == 9 {
        gen_spinglass(2, 3, 0.5, seed).unwrap()
    } else if spin && n == 8 {
        gen_spinglass(3, 2, 0.5, seed).unwrap()
    } else {
        let base = gen_gnp_degree(n, (n as f64 * 0.45).max(2.0), seed).unwrap();
        let mut r = rng(seed);
        let weighted = t % 2 == 1;
        let edges: Vec<_> = base
            .edges()
            .iter()
            .map(|e| (e.u, e.v, if weighted { r.gen_range(1..=4) as f64 } else { 1.0 }))
            .collect();
        GraphInstance::new(n, edges, format!("{}_{}", base.name(), if weighted { "w" } else { "u" })).unwrap()
    };
    let spec = if k == 0 {
        PartitionSpec::bisection(n, (0.6 * n as f64).ceil() as usize).unwrap()
    } else {
        PartitionSpec::equipartition(n, k).unwrap()
    };
    (g, spec)
}

/// Lifted partition in the relaxation's matrix space.
pub fn lift(rel: &Relaxation<f64>, part: &[usize]) -> SymMatrix<f64> {
    rel.lift(part)
}
