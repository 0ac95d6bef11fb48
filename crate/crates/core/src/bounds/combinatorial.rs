//! Exhaustive optimum for tiny graphs and a swap local search upper bound.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{GraphInstance, PartitionSpec};

/// Largest `n` accepted by [`enumerate_optimum`].
pub const ENUMERATION_LIMIT: usize = 16;

fn neighbours(g: &GraphInstance) -> Vec<Vec<(usize, f64)>> {
    let mut adj = vec![Vec::new(); g.n()];
    for e in g.edges() {
        adj[e.u].push((e.v, e.w));
        adj[e.v].push((e.u, e.w));
    }
    adj
}

struct Enumerator<'a> {
    adj: Vec<Vec<(usize, f64)>>,
    sizes: &'a [usize],
    fill: Vec<usize>,
    part_of: Vec<usize>,
    best: f64,
    best_part: Vec<usize>,
}

impl Enumerator<'_> {
    fn go(&mut self, v: usize, cut: f64) {
        if v == self.part_of.len() {
            if cut < self.best {
                self.best = cut;
                self.best_part.clone_from(&self.part_of);
            }
            return;
        }
        for p in 0..self.sizes.len() {
            if self.fill[p] == self.sizes[p] {
                continue;
            }
            // Parts of equal size are interchangeable: only open the first
            // empty one among them.
            if self.fill[p] == 0 && (0..p).any(|q| self.fill[q] == 0 && self.sizes[q] == self.sizes[p]) {
                continue;
            }
            let added: f64 = self.adj[v]
                .iter()
                .filter(|&&(u, _)| u < v && self.part_of[u] != p)
                .map(|&(_, w)| w)
                .sum();
            self.part_of[v] = p;
            self.fill[p] += 1;
            self.go(v + 1, cut + added);
            self.fill[p] -= 1;
        }
    }
}

/// Minimum cut weight over all partitions with the prescribed part sizes,
/// with a minimising assignment (`part_of[v]` = 0-based part).
pub fn enumerate_optimum(g: &GraphInstance, spec: &PartitionSpec) -> Result<(f64, Vec<usize>)> {
    let n = g.n();
    spec.validate_for(n)?;
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge { n, limit: ENUMERATION_LIMIT });
    }
    let mut e = Enumerator {
        adj: neighbours(g),
        sizes: &spec.m,
        fill: vec![0; spec.m.len()],
        part_of: vec![0; n],
        best: f64::INFINITY,
        best_part: Vec::new(),
    };
    e.go(0, 0.0);
    Ok((e.best, e.best_part))
}

/// Best of `restarts` random balanced assignments, each improved by
/// best-improvement pairwise swaps until no swap lowers the cut.
pub fn heuristic_upper_bound(g: &GraphInstance, spec: &PartitionSpec, seed: u64, restarts: usize) -> Result<(f64, Vec<usize>)> {
    let n = g.n();
    spec.validate_for(n)?;
    let adj = neighbours(g);
    let k = spec.m.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for _ in 0..restarts.max(1) {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut part_of = vec![0; n];
        let mut it = order.into_iter();
        for (p, &size) in spec.m.iter().enumerate() {
            for v in it.by_ref().take(size) {
                part_of[v] = p;
            }
        }
        // conn[v][p] = weight from v into part p.
        let mut conn = vec![vec![0.0; k]; n];
        for (v, nb) in adj.iter().enumerate() {
            for &(u, w) in nb {
                conn[v][part_of[u]] += w;
            }
        }
        loop {
            let mut best_swap: Option<(f64, usize, usize)> = None;
            for u in 0..n {
                for v in (u + 1)..n {
                    let (pu, pv) = (part_of[u], part_of[v]);
                    if pu == pv {
                        continue;
                    }
                    let w_uv: f64 = adj[u].iter().filter(|t| t.0 == v).map(|t| t.1).sum();
                    let gain = conn[u][pv] - conn[u][pu] + conn[v][pu] - conn[v][pv] - 2.0 * w_uv;
                    if gain > 1e-12 && best_swap.is_none_or(|b| gain > b.0) {
                        best_swap = Some((gain, u, v));
                    }
                }
            }
            let Some((_, u, v)) = best_swap else { break };
            let (pu, pv) = (part_of[u], part_of[v]);
            for &(x, w) in &adj[u] {
                conn[x][pu] -= w;
                conn[x][pv] += w;
            }
            for &(x, w) in &adj[v] {
                conn[x][pv] -= w;
                conn[x][pu] += w;
            }
            part_of[u] = pv;
            part_of[v] = pu;
        }
        let value = g.cut_weight(&part_of);
        if best.as_ref().is_none_or(|b| value < b.0) {
            best = Some((value, part_of));
        }
    }
    Ok(best.expect("at least one restart"))
}
