//! Grouping cuts into classes with pairwise disjoint supports by colouring
//! the conflict graph with the DSATUR heuristic.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap, HashSet};

use super::Cut;

/// Colour classes of the cut conflict graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CutClustering {
    pub clusters: Vec<Vec<usize>>,
}

impl CutClustering {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

/// Deterministic DSATUR colouring; two cuts conflict when their supports
/// share a matrix position.
pub fn cluster_cuts(cuts: &[Cut]) -> CutClustering {
    let m = cuts.len();
    let mut by_pos: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (c, cut) in cuts.iter().enumerate() {
        for &p in cut.support() {
            by_pos.entry(p).or_default().push(c);
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for members in by_pos.values() {
        for (a, &u) in members.iter().enumerate() {
            for &v in &members[a + 1..] {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }

    let mut color: Vec<Option<usize>> = vec![None; m];
    let mut neighbour_colors: Vec<HashSet<usize>> = vec![HashSet::new(); m];
    // Highest saturation first, then highest degree, then lowest index.
    let key = |v: usize, sat: usize, adj: &Vec<Vec<usize>>| (Reverse(sat), Reverse(adj[v].len()), v);
    let mut queue: BTreeSet<(Reverse<usize>, Reverse<usize>, usize)> = (0..m).map(|v| key(v, 0, &adj)).collect();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    while let Some(top) = queue.pop_first() {
        let v = top.2;
        let c = (0..).find(|c| !neighbour_colors[v].contains(c)).expect("unbounded range");
        color[v] = Some(c);
        if c == clusters.len() {
            clusters.push(Vec::new());
        }
        clusters[c].push(v);
        for &u in &adj[v] {
            if color[u].is_none() {
                let old = neighbour_colors[u].len();
                if neighbour_colors[u].insert(c) {
                    queue.remove(&key(u, old, &adj));
                    queue.insert(key(u, old + 1, &adj));
                }
            }
        }
    }
    for cl in &mut clusters {
        cl.sort_unstable();
    }
    let clustering = CutClustering { clusters };
    assert_disjoint(cuts, &clustering);
    clustering
}

fn assert_disjoint(cuts: &[Cut], clustering: &CutClustering) {
    for cl in &clustering.clusters {
        let mut used = HashSet::new();
        for &c in cl {
            for p in cuts[c].support() {
                assert!(used.insert(*p), "cluster contains cuts with overlapping supports");
            }
        }
    }
}
