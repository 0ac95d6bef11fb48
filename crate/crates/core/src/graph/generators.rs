//! Random instance families. All generators draw from `ChaCha8Rng` seeded
//! with a 64-bit seed, so output is identical across platforms.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GraphInstance;
use crate::error::{Error, Result};

/// Erdős–Rényi graph with edge probability `target_degree / (n − 1)`.
pub fn gen_gnp_degree(n: usize, target_degree: f64, seed: u64) -> Result<GraphInstance> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n = {n} must be at least 2")));
    }
    let p = target_degree / (n - 1) as f64;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "target degree {target_degree} gives edge probability {p} outside (0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j, 1.0));
            }
        }
    }
    GraphInstance::new(n, edges, format!("gnp_{n}_{target_degree}_s{seed}"))
}

/// Unit disk graph on `n` uniform points of the unit square.
pub fn gen_unit_disk(n: usize, d: f64, seed: u64) -> Result<GraphInstance> {
    if !(d > 0.0 && d <= std::f64::consts::SQRT_2) {
        return Err(Error::InvalidParameter(format!("radius {d} outside (0, sqrt 2]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
            if (dx * dx + dy * dy).sqrt() <= d {
                edges.push((i, j, 1.0));
            }
        }
    }
    GraphInstance::new(n, edges, format!("udg_{n}_{d}_s{seed}"))
}

/// Toroidal grid of side `n_r` in dimension 2 or 3 with weights `−1` with
/// probability `neg_fraction`, else `+1`. Parallel edges from wrap-around
/// at `n_r = 2` are merged before weights are drawn.
pub fn gen_spinglass(dim: usize, n_r: usize, neg_fraction: f64, seed: u64) -> Result<GraphInstance> {
    if !(dim == 2 || dim == 3) {
        return Err(Error::InvalidParameter(format!("dimension {dim} must be 2 or 3")));
    }
    if n_r < 2 {
        return Err(Error::InvalidParameter(format!("side length {n_r} must be at least 2")));
    }
    if !(0.0..=1.0).contains(&neg_fraction) {
        return Err(Error::InvalidParameter(format!("negative fraction {neg_fraction} outside [0, 1]")));
    }
    let n = n_r.pow(dim as u32);
    let mut pairs = BTreeSet::new();
    for v in 0..n {
        let mut stride = 1;
        for _ in 0..dim {
            let coord = (v / stride) % n_r;
            let next = if coord + 1 == n_r { v - coord * stride } else { v + stride };
            pairs.insert((v.min(next), v.max(next)));
            stride *= n_r;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(a, b)| (a, b, if rng.gen::<f64>() < neg_fraction { -1.0 } else { 1.0 }))
        .collect();
    GraphInstance::new(n, edges, format!("spinglass{dim}d_{n_r}_s{seed}"))
}
