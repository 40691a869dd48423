//! Search for admissible front-door reducible triples.
//!
//! Super-cause candidates `S'` (subsets of the universe containing `x`) are
//! visited by increasing size, then lexicographically. For each, the nonempty
//! subsets of the candidate mediator region are visited in the same order and
//! checked against the three conditions, cheapest first.

use itertools::Itertools;

use crate::admg::{Admg, NodeId, NodeSet};
use crate::criterion::{check_fdr_triple, fdr1_mask, fdr2_mask, fdr3_mask, region_mask, shrink_to_ancestral, FdrTriple};
use crate::error::{Error, Result};

/// Largest graph `brute_force_triples` accepts by default.
pub const BRUTE_FORCE_NODE_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Splits work across `S'` candidates. Without the `parallel` feature
    /// this runs sequentially.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Work counters. Both execution modes report the counts a sequential scan
/// would have produced.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub s_candidates_visited: u64,
    pub m_candidates_visited: u64,
    pub fdr1_checks: u64,
    pub fdr2_checks: u64,
    pub fdr3_msep_queries: u64,
    /// Sum of `2^|Z(S')| - 1` over the visited `S'`.
    pub enumeration_bound: u128,
}

impl SearchStats {
    fn add(&mut self, o: &SearchStats) {
        self.s_candidates_visited += o.s_candidates_visited;
        self.m_candidates_visited += o.m_candidates_visited;
        self.fdr1_checks += o.fdr1_checks;
        self.fdr2_checks += o.fdr2_checks;
        self.fdr3_msep_queries += o.fdr3_msep_queries;
        self.enumeration_bound = self.enumeration_bound.saturating_add(o.enumeration_bound);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// `None` means FAIL.
    pub result: Option<FdrTriple>,
    pub stats: SearchStats,
    /// Node count after dropping everything outside `{x} ∪ An(y)`.
    pub shrunken_graph_size: usize,
    /// Set when `x` has no directed path to `y`; the search is skipped.
    pub no_directed_path: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub triples: Vec<FdrTriple>,
    pub stats: SearchStats,
    pub shrunken_graph_size: usize,
    pub no_directed_path: bool,
}

fn region_term(z: usize) -> u128 {
    if z >= 128 {
        u128::MAX
    } else {
        (1u128 << z) - 1
    }
}

struct Prepared {
    g: Admg,
    y: Vec<bool>,
    candidates: Vec<Vec<bool>>,
    no_directed_path: bool,
}

fn prepare(g: &Admg, x: &NodeId, y: &NodeId) -> Result<Prepared> {
    let shrunk = shrink_to_ancestral(g, x, y)?;
    let xi = shrunk.index(x)?;
    let yi = shrunk.index(y)?;
    let n = shrunk.len();
    let mut ym = vec![false; n];
    ym[yi] = true;
    let mut xm = vec![false; n];
    xm[xi] = true;
    let no_directed_path = !shrunk.reaches_avoiding_mask(&xm, &ym, &vec![false; n]);

    // In the shrunken graph the universe is every node except y.
    let rest: Vec<usize> = (0..n).filter(|&i| i != xi && i != yi).collect();
    let mut candidates = Vec::new();
    for k in 0..=rest.len() {
        for combo in rest.iter().combinations(k) {
            let mut s = xm.clone();
            for &i in combo {
                s[i] = true;
            }
            candidates.push(s);
        }
    }
    Ok(Prepared { g: shrunk, y: ym, candidates, no_directed_path })
}

/// Scans every mediator candidate for one `S'`, stopping after `stop_after`
/// hits.
fn scan(g: &Admg, s: &[bool], y: &[bool], stop_after: Option<usize>) -> (Vec<FdrTriple>, SearchStats) {
    let z = region_mask(g, s, y);
    let zi: Vec<usize> = (0..g.len()).filter(|&i| z[i]).collect();
    let mut st = SearchStats {
        s_candidates_visited: 1,
        enumeration_bound: region_term(zi.len()),
        ..Default::default()
    };
    let mut hits = Vec::new();
    if stop_after == Some(0) {
        return (hits, st);
    }
    let n = g.len();
    let x_set = g.set_of(s);
    let y_set = g.set_of(y);
    'outer: for k in 1..=zi.len() {
        for combo in zi.iter().combinations(k) {
            let mut m = vec![false; n];
            for &i in combo {
                m[i] = true;
            }
            st.m_candidates_visited += 1;
            st.fdr1_checks += 1;
            if !fdr1_mask(g, s, y, &m) {
                continue;
            }
            st.fdr2_checks += 1;
            if !fdr2_mask(g, s, &m) {
                continue;
            }
            if fdr3_mask(g, s, y, &m, &mut st.fdr3_msep_queries).is_some() {
                continue;
            }
            let t = FdrTriple {
                x_star: x_set.clone(),
                y_star: y_set.clone(),
                m_star: g.set_of(&m),
            };
            assert!(
                check_fdr_triple(g, &t).map(|r| r.all()).unwrap_or(false),
                "search returned a triple failing the criterion: {t}"
            );
            hits.push(t);
            if stop_after == Some(hits.len()) {
                break 'outer;
            }
        }
    }
    (hits, st)
}

fn run(p: &Prepared, limit: Option<usize>, exec: Execution) -> (Vec<FdrTriple>, SearchStats) {
    match exec {
        Execution::Parallel if cfg!(feature = "parallel") => run_parallel(p, limit),
        _ => run_sequential(p, limit),
    }
}

fn run_sequential(p: &Prepared, limit: Option<usize>) -> (Vec<FdrTriple>, SearchStats) {
    let mut out = Vec::new();
    let mut stats = SearchStats::default();
    for s in &p.candidates {
        let remaining = limit.map(|l| l - out.len());
        if remaining == Some(0) {
            break;
        }
        let (hits, st) = scan(&p.g, s, &p.y, remaining);
        stats.add(&st);
        out.extend(hits);
    }
    (out, stats)
}

#[cfg(feature = "parallel")]
fn run_parallel(p: &Prepared, limit: Option<usize>) -> (Vec<FdrTriple>, SearchStats) {
    use rayon::prelude::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    // Any candidate past one that alone satisfies the limit is never needed.
    let cutoff = AtomicUsize::new(usize::MAX);
    let partial: Vec<Option<(Vec<FdrTriple>, SearchStats)>> = p
        .candidates
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            if i > cutoff.load(Ordering::Relaxed) {
                return None;
            }
            let r = scan(&p.g, s, &p.y, limit);
            if limit.is_some_and(|l| r.0.len() >= l) {
                cutoff.fetch_min(i, Ordering::Relaxed);
            }
            Some(r)
        })
        .collect();

    let mut out = Vec::new();
    let mut stats = SearchStats::default();
    for (i, slot) in partial.into_iter().enumerate() {
        let remaining = limit.map(|l| l - out.len());
        if remaining == Some(0) {
            break;
        }
        let (hits, st) = slot.expect("candidates before the cutoff are always scanned");
        match remaining {
            Some(r) if hits.len() > r => {
                // Rescan so the counters stop where a sequential scan would.
                let (hits, st) = scan(&p.g, &p.candidates[i], &p.y, Some(r));
                stats.add(&st);
                out.extend(hits);
            }
            _ => {
                stats.add(&st);
                out.extend(hits);
            }
        }
    }
    (out, stats)
}

#[cfg(not(feature = "parallel"))]
fn run_parallel(p: &Prepared, limit: Option<usize>) -> (Vec<FdrTriple>, SearchStats) {
    run_sequential(p, limit)
}

pub fn find_triple(g: &Admg, x: &NodeId, y: &NodeId) -> Result<SearchOutcome> {
    find_triple_with(g, x, y, Execution::default())
}

/// The canonically first admissible triple with `Y* = {y}`, or FAIL.
pub fn find_triple_with(g: &Admg, x: &NodeId, y: &NodeId, exec: Execution) -> Result<SearchOutcome> {
    let e = enumerate_triples_with(g, x, y, Some(1), exec)?;
    Ok(SearchOutcome {
        result: e.triples.into_iter().next(),
        stats: e.stats,
        shrunken_graph_size: e.shrunken_graph_size,
        no_directed_path: e.no_directed_path,
    })
}

pub fn enumerate_triples(g: &Admg, x: &NodeId, y: &NodeId, limit: Option<usize>) -> Result<Enumeration> {
    enumerate_triples_with(g, x, y, limit, Execution::default())
}

/// Every admissible triple in canonical order, truncated to `limit`.
pub fn enumerate_triples_with(
    g: &Admg,
    x: &NodeId,
    y: &NodeId,
    limit: Option<usize>,
    exec: Execution,
) -> Result<Enumeration> {
    let p = prepare(g, x, y)?;
    let shrunken_graph_size = p.g.len();
    if p.no_directed_path {
        return Ok(Enumeration {
            triples: Vec::new(),
            stats: SearchStats::default(),
            shrunken_graph_size,
            no_directed_path: true,
        });
    }
    let (triples, stats) = run(&p, limit, exec);
    debug_assert!(stats.m_candidates_visited as u128 <= stats.enumeration_bound);
    Ok(Enumeration { triples, stats, shrunken_graph_size, no_directed_path: false })
}

/// `Σ (2^|Z(S')| - 1)` over every `S'` in the search space.
pub fn eq10_bound(g: &Admg, x: &NodeId, y: &NodeId) -> Result<u128> {
    let p = prepare(g, x, y)?;
    Ok(p.candidates
        .iter()
        .map(|s| region_term(region_mask(&p.g, s, &p.y).iter().filter(|&&b| b).count()))
        .fold(0u128, u128::saturating_add))
}

pub fn brute_force_triples(g: &Admg, x: &NodeId, y: &NodeId) -> Result<Vec<FdrTriple>> {
    brute_force_triples_capped(g, x, y, BRUTE_FORCE_NODE_CAP)
}

/// Every triple `(S, {y}, M)` with `x ∈ S` passing the criterion on `g`
/// itself, with no shrinking and no restriction of `S` or `M`.
pub fn brute_force_triples_capped(g: &Admg, x: &NodeId, y: &NodeId, cap: usize) -> Result<Vec<FdrTriple>> {
    let xi = g.index(x)?;
    let yi = g.index(y)?;
    if xi == yi {
        return Err(Error::SameNode(x.to_string()));
    }
    if g.len() > cap {
        return Err(Error::CapExceeded { what: "brute-force node count", size: g.len() as u128, cap: cap as u128 });
    }
    let n = g.len();
    let others: Vec<usize> = (0..n).filter(|&i| i != xi && i != yi).collect();
    let mut ym = vec![false; n];
    ym[yi] = true;
    let y_set = g.set_of(&ym);
    let mut out = Vec::new();
    // Each other node goes to S, to M, or to neither.
    let total = 3usize.pow(others.len() as u32);
    for code in 0..total {
        let mut s = vec![false; n];
        let mut m = vec![false; n];
        s[xi] = true;
        let mut c = code;
        for &i in &others {
            match c % 3 {
                1 => s[i] = true,
                2 => m[i] = true,
                _ => {}
            }
            c /= 3;
        }
        if !m.contains(&true) {
            continue;
        }
        let mut q = 0;
        if fdr1_mask(g, &s, &ym, &m) && fdr2_mask(g, &s, &m) && fdr3_mask(g, &s, &ym, &m, &mut q).is_none() {
            out.push(FdrTriple { x_star: g.set_of(&s), y_star: y_set.clone(), m_star: g.set_of(&m) });
        }
    }
    out.sort();
    Ok(out)
}

/// Convenience: the admissible super-cause/mediator pairs as name sets.
pub fn triple_sets(ts: &[FdrTriple]) -> Vec<(NodeSet, NodeSet)> {
    ts.iter().map(|t| (t.x_star.clone(), t.m_star.clone())).collect()
}
