//! Graph generators for randomized and exhaustive testing.
//!
//! Generated graphs use `X` and `Y` as the distinguished cause and effect,
//! and `A`, `B`, `C`, ... for the remaining nodes.

use std::collections::HashSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::admg::{Admg, NodeId, NodeSet};

/// `X`, `Y`, then letters from `A` upward (skipping `X` and `Y`).
pub fn node_names(n: usize) -> Vec<String> {
    assert!(n >= 2, "need at least the cause and effect");
    let extra = ('A'..='Z').filter(|c| *c != 'X' && *c != 'Y');
    let mut names = vec!["X".to_string(), "Y".to_string()];
    names.extend(extra.take(n - 2).map(String::from));
    assert_eq!(names.len(), n, "at most 26 generated nodes");
    names
}

fn build(names: &[String], directed: &[(usize, usize)], bidirected: &[(usize, usize)]) -> Admg {
    let ids: Vec<NodeId> = names.iter().map(|s| NodeId::new(s).expect("generated name")).collect();
    let nodes: NodeSet = ids.iter().cloned().collect();
    let pair = |&(a, b): &(usize, usize)| (ids[a].clone(), ids[b].clone());
    let d: Vec<_> = directed.iter().map(pair).collect();
    let b: Vec<_> = bidirected.iter().map(pair).collect();
    Admg::new(&nodes, &d, &b).expect("generated graphs are acyclic")
}

/// A random ADMG on `n` nodes: a uniformly random topological order, each
/// forward pair joined by a directed arc with probability `p_directed` and,
/// independently, by a bidirected arc with probability `p_bidirected`.
pub fn random_admg<R: Rng + ?Sized>(n: usize, p_directed: f64, p_bidirected: f64, rng: &mut R) -> Admg {
    let names = node_names(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut directed = Vec::new();
    let mut bidirected = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p_directed) {
                directed.push((order[i], order[j]));
            }
            if rng.random_bool(p_bidirected) {
                bidirected.push((order[i], order[j]));
            }
        }
    }
    build(&names, &directed, &bidirected)
}

pub fn has_directed_path(g: &Admg, from: &str, to: &str) -> bool {
    let (Ok(a), Ok(b)) = (NodeSet::from_names(&[from]), NodeSet::from_names(&[to])) else {
        return false;
    };
    g.reaches_avoiding(&a, &b, &NodeSet::new()).unwrap_or(false)
}

/// Like [`random_admg`], resampling until `X` has a directed path to `Y`.
pub fn random_admg_with_path<R: Rng + ?Sized>(n: usize, p_directed: f64, p_bidirected: f64, rng: &mut R) -> Admg {
    loop {
        let g = random_admg(n, p_directed, p_bidirected, rng);
        if has_directed_path(&g, "X", "Y") {
            return g;
        }
    }
}

/// Bit layout of a labeled graph: directed `a -> b` at `a * n + b`,
/// bidirected `{a, b}` after all directed bits.
fn encode(n: usize, directed: &[(usize, usize)], bidirected: &[(usize, usize)], perm: &[usize]) -> u128 {
    let mut code = 0u128;
    for &(a, b) in directed {
        code |= 1 << (perm[a] * n + perm[b]);
    }
    for &(a, b) in bidirected {
        let (p, q) = (perm[a].min(perm[b]), perm[a].max(perm[b]));
        code |= 1 << (n * n + p * n + q);
    }
    code
}

/// Visits one representative of every ADMG on `X`, `Y` and `extra`
/// interchangeable nodes, up to renaming of the interchangeable ones. With
/// `require_path`, only graphs with a directed `X → Y` path are visited.
/// Returns the number of graphs visited.
pub fn for_each_small_admg(extra: usize, require_path: bool, mut visit: impl FnMut(&Admg)) -> usize {
    let n = extra + 2;
    assert!(n * n * 2 <= 128, "too many nodes for exhaustive generation");
    let names = node_names(n);
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let perms: Vec<Vec<usize>> = (2..n)
        .permutations(extra)
        .map(|p| {
            let mut full = vec![0, 1];
            full.extend(p);
            full
        })
        .collect();
    let mut seen: HashSet<u128> = HashSet::new();
    let mut count = 0;

    // Every ADMG has a topological order in which the interchangeable nodes
    // appear as A, B, C, ..., so it suffices to place X and Y among the slots.
    for (sx, sy) in (0..n).cartesian_product(0..n) {
        if sx == sy || (require_path && sx > sy) {
            continue;
        }
        let mut slot_label = Vec::with_capacity(n);
        let mut next = 2;
        for s in 0..n {
            if s == sx {
                slot_label.push(0);
            } else if s == sy {
                slot_label.push(1);
            } else {
                slot_label.push(next);
                next += 1;
            }
        }
        let total = 4u64.pow(pairs.len() as u32);
        let mut directed = Vec::with_capacity(pairs.len());
        let mut bidirected = Vec::with_capacity(pairs.len());
        for code in 0..total {
            directed.clear();
            bidirected.clear();
            let mut c = code;
            for &(i, j) in &pairs {
                let (a, b) = (slot_label[i], slot_label[j]);
                if c & 1 == 1 {
                    directed.push((a, b));
                }
                if c & 2 == 2 {
                    bidirected.push((a, b));
                }
                c >>= 2;
            }
            if require_path && !reaches(n, &directed, 0, 1) {
                continue;
            }
            let canonical = perms.iter().map(|p| encode(n, &directed, &bidirected, p)).min().expect("identity");
            if seen.insert(canonical) {
                count += 1;
                visit(&build(&names, &directed, &bidirected));
            }
        }
    }
    count
}

fn reaches(n: usize, directed: &[(usize, usize)], from: usize, to: usize) -> bool {
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        for &(a, b) in directed {
            if a == v && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    false
}
