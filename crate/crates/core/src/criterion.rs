//! The front-door reducibility conditions, the candidate sets the search draws
//! from, and the classic single-variable criteria.

use std::collections::BTreeMap;
use std::fmt;

use crate::admg::{Admg, NodeId, NodeSet};
use crate::error::{Error, Result};
use crate::msep::{m_separated_cut, Cuts};

/// Super-cause, super-effect and super-mediator sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FdrTriple {
    pub x_star: NodeSet,
    pub y_star: NodeSet,
    pub m_star: NodeSet,
}

impl FdrTriple {
    /// Builds a triple, rejecting empty or overlapping sets.
    pub fn new(x_star: NodeSet, y_star: NodeSet, m_star: NodeSet) -> Result<Self> {
        if x_star.is_empty() || y_star.is_empty() || m_star.is_empty() {
            return Err(Error::Precondition("triple sets must be nonempty".into()));
        }
        if !x_star.is_disjoint(&y_star) || !x_star.is_disjoint(&m_star) || !y_star.is_disjoint(&m_star) {
            return Err(Error::Precondition(format!(
                "triple sets must be disjoint: X*={x_star} Y*={y_star} M*={m_star}"
            )));
        }
        Ok(FdrTriple { x_star, y_star, m_star })
    }

    fn masks(&self, g: &Admg) -> Result<(Vec<bool>, Vec<bool>, Vec<bool>)> {
        Ok((g.mask(&self.x_star)?, g.mask(&self.y_star)?, g.mask(&self.m_star)?))
    }
}

impl fmt::Display for FdrTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X*={} Y*={} M*={}", self.x_star, self.y_star, self.m_star)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FdrReport {
    pub fdr1: bool,
    pub fdr2: bool,
    pub fdr3: bool,
    /// First mediator, in canonical order, whose FDR3 separation fails.
    pub failing_mediator: Option<NodeId>,
}

impl FdrReport {
    pub fn all(&self) -> bool {
        self.fdr1 && self.fdr2 && self.fdr3
    }
}

pub(crate) fn fdr1_mask(g: &Admg, x: &[bool], y: &[bool], m: &[bool]) -> bool {
    !g.reaches_avoiding_mask(x, y, m)
}

pub(crate) fn fdr2_mask(g: &Admg, x: &[bool], m: &[bool]) -> bool {
    let none = vec![false; g.len()];
    m_separated_cut(g, x, m, &none, Cuts { cut_in: None, cut_out: Some(x) })
}

/// Index of the first failing mediator, counting each separation query
/// through `queries`.
pub(crate) fn fdr3_mask(g: &Admg, x: &[bool], y: &[bool], m: &[bool], queries: &mut u64) -> Option<usize> {
    let n = g.len();
    for i in (0..n).filter(|&i| m[i]) {
        let mut single = vec![false; n];
        single[i] = true;
        let given: Vec<bool> = (0..n).map(|v| x[v] || (m[v] && v != i)).collect();
        *queries += 1;
        let cuts = Cuts { cut_in: Some(x), cut_out: Some(&single) };
        if !m_separated_cut(g, y, &single, &given, cuts) {
            return Some(i);
        }
    }
    None
}

/// No directed path from `X*` to `Y*` survives deleting `M*`.
pub fn check_fdr1(g: &Admg, t: &FdrTriple) -> Result<bool> {
    let (x, y, m) = t.masks(g)?;
    Ok(fdr1_mask(g, &x, &y, &m))
}

/// `X*` and `M*` are m-separated once arcs out of `X*` are removed.
pub fn check_fdr2(g: &Admg, t: &FdrTriple) -> Result<bool> {
    let (x, _, m) = t.masks(g)?;
    Ok(fdr2_mask(g, &x, &m))
}

/// Per mediator `M_i`: `Y*` and `M_i` are m-separated given `X*` and the
/// other mediators, with arcs into `X*` and out of `M_i` removed.
pub fn check_fdr3(g: &Admg, t: &FdrTriple) -> Result<(bool, Option<NodeId>)> {
    let (x, y, m) = t.masks(g)?;
    let mut q = 0;
    Ok(match fdr3_mask(g, &x, &y, &m, &mut q) {
        None => (true, None),
        Some(i) => (false, Some(g.name(i).clone())),
    })
}

pub fn check_fdr_triple(g: &Admg, t: &FdrTriple) -> Result<FdrReport> {
    let fdr1 = check_fdr1(g, t)?;
    let fdr2 = check_fdr2(g, t)?;
    let (fdr3, failing_mediator) = check_fdr3(g, t)?;
    Ok(FdrReport { fdr1, fdr2, fdr3, failing_mediator })
}

/// `{x} ∪ (An(Y*) \ Y*)`: every super-cause candidate is a subset of this
/// set containing `x`.
pub fn super_cause_universe(g: &Admg, x: &NodeId, y_star: &NodeSet) -> Result<NodeSet> {
    g.index(x)?;
    let mut u = g.ancestors(y_star)?.difference(y_star);
    u.insert(x.clone());
    Ok(u)
}

/// Descendants of `s` that are ancestors of `Y*`, minus `s`, `Y*` and
/// anything bidirected-adjacent to either.
pub fn candidate_mediator_region(g: &Admg, s: &NodeSet, y_star: &NodeSet) -> Result<NodeSet> {
    let sm = g.mask(s)?;
    let ym = g.mask(y_star)?;
    Ok(g.set_of(&region_mask(g, &sm, &ym)))
}

pub(crate) fn region_mask(g: &Admg, s: &[bool], y: &[bool]) -> Vec<bool> {
    let an = g.ancestors_mask(y.to_vec());
    let de = g.descendants_mask(s.to_vec());
    let mut out: Vec<bool> = (0..g.len()).map(|i| an[i] && de[i] && !s[i] && !y[i]).collect();
    for &(a, b) in g.bidirected_idx() {
        if s[a] || y[a] {
            out[b] = false;
        }
        if s[b] || y[b] {
            out[a] = false;
        }
    }
    out
}

/// Induced subgraph on `x` and the ancestors of `y`.
pub fn shrink_to_ancestral(g: &Admg, x: &NodeId, y: &NodeId) -> Result<Admg> {
    let xi = g.index(x)?;
    let yi = g.index(y)?;
    if xi == yi {
        return Err(Error::SameNode(x.to_string()));
    }
    let mut seed = vec![false; g.len()];
    seed[yi] = true;
    let mut keep = g.ancestors_mask(seed);
    keep[xi] = true;
    Ok(g.induced_by_mask(&keep))
}

/// The single-variable front-door criterion: `m` intercepts every directed
/// `x → y` path, `x` has no backdoor path into `m`, and every backdoor path
/// from `m` to `y` is blocked by `x`.
pub fn check_classic_frontdoor(g: &Admg, x: &NodeId, y: &NodeId, m: &NodeSet) -> Result<bool> {
    g.index(x)?;
    g.index(y)?;
    if x == y {
        return Err(Error::SameNode(x.to_string()));
    }
    if m.is_empty() {
        return Ok(false);
    }
    let t = FdrTriple::new(NodeSet::singleton(x.clone()), NodeSet::singleton(y.clone()), m.clone())?;
    Ok(check_fdr_triple(g, &t)?.all())
}

/// The backdoor criterion for `u` relative to `(x, y)`: no member of `u`
/// descends from `x`, and `u` blocks every path from `x` to `y` that starts
/// with an arrowhead into `x`.
pub fn check_backdoor(g: &Admg, x: &NodeId, y: &NodeId, u: &NodeSet) -> Result<bool> {
    g.index(x)?;
    g.index(y)?;
    if x == y {
        return Err(Error::SameNode(x.to_string()));
    }
    if u.contains(x) || u.contains(y) {
        return Err(Error::Precondition(format!("adjustment set {u} must exclude {x} and {y}")));
    }
    let xs = NodeSet::singleton(x.clone());
    if !g.descendants(&xs)?.is_disjoint(u) {
        return Ok(false);
    }
    let (xm, ym, um) = (g.mask(&xs)?, g.mask(&NodeSet::singleton(y.clone()))?, g.mask(u)?);
    Ok(m_separated_cut(g, &xm, &ym, &um, Cuts { cut_in: None, cut_out: Some(&xm) }))
}

/// Three-node front-door graph on super-nodes, with the members each stands
/// for.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedGraph {
    pub graph: Admg,
    pub members: BTreeMap<NodeId, NodeSet>,
}

/// Collapses a reducible triple into the graph `Xs → Ms → Ys`, `Xs <-> Ys`.
/// The bidirected arc is always present.
pub fn project_to_frontdoor(g: &Admg, t: &FdrTriple) -> Result<ReducedGraph> {
    let report = check_fdr_triple(g, t)?;
    if !report.all() {
        return Err(Error::NotReducible(t.to_string()));
    }
    let graph = Admg::from_names(&["Xs", "Ms", "Ys"], &[("Xs", "Ms"), ("Ms", "Ys")], &[("Xs", "Ys")])
        .expect("fixed front-door shape");
    let id = |s: &str| NodeId::new(s).expect("fixed name");
    let members = BTreeMap::from([
        (id("Xs"), t.x_star.clone()),
        (id("Ms"), t.m_star.clone()),
        (id("Ys"), t.y_star.clone()),
    ]);
    Ok(ReducedGraph { graph, members })
}
