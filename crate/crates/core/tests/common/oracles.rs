//! Independent reference implementations used by the integration and
//! acceptance tests. Nothing here calls into the library's graph algorithms
//! beyond reading arcs and evaluating the criterion.

#![allow(dead_code)]

use std::collections::BTreeSet;

use fdrkit::{check_fdr_triple, Admg, FdrTriple, NodeId, NodeSet};

/// Arc list view of an ADMG indexed by position in `node_ids()`.
pub struct Arcs {
    pub n: usize,
    pub directed: Vec<(usize, usize)>,
    pub bidirected: Vec<(usize, usize)>,
}

impl Arcs {
    pub fn of(g: &Admg) -> Arcs {
        let ids = g.node_ids();
        let pos = |v: &NodeId| ids.iter().position(|w| w == v).unwrap();
        Arcs {
            n: ids.len(),
            directed: g.directed_arcs().map(|(a, b)| (pos(a), pos(b))).collect(),
            bidirected: g.bidirected_arcs().map(|(a, b)| (pos(a), pos(b))).collect(),
        }
    }

    pub fn ancestors(&self, seed: &[usize]) -> Vec<bool> {
        let mut an = vec![false; self.n];
        for &s in seed {
            an[s] = true;
        }
        loop {
            let mut changed = false;
            for &(a, b) in &self.directed {
                if an[b] && !an[a] {
                    an[a] = true;
                    changed = true;
                }
            }
            if !changed {
                return an;
            }
        }
    }

    pub fn descendants(&self, seed: &[usize]) -> Vec<bool> {
        let mut de = vec![false; self.n];
        for &s in seed {
            de[s] = true;
        }
        loop {
            let mut changed = false;
            for &(a, b) in &self.directed {
                if de[a] && !de[b] {
                    de[b] = true;
                    changed = true;
                }
            }
            if !changed {
                return de;
            }
        }
    }
}

/// An edge step along a path: the far node and whether each end carries an
/// arrowhead (`near`, `far`).
fn steps(a: &Arcs, v: usize) -> Vec<(usize, bool, bool)> {
    let mut out = Vec::new();
    for &(p, c) in &a.directed {
        if p == v {
            out.push((c, false, true));
        }
        if c == v {
            out.push((p, true, false));
        }
    }
    for &(p, q) in &a.bidirected {
        if p == v {
            out.push((q, true, true));
        }
        if q == v {
            out.push((p, true, true));
        }
    }
    out
}

/// m-separation by enumerating every simple path between `x` and `y` and
/// checking each interior node: colliders must be ancestors of `z`,
/// non-colliders must be outside `z`.
pub fn msep_by_paths(a: &Arcs, x: &[usize], y: &[usize], z: &[usize]) -> bool {
    let walk = PathWalk {
        a,
        an_z: a.ancestors(z),
        in_z: (0..a.n).map(|i| z.contains(&i)).collect(),
        is_x: (0..a.n).map(|i| x.contains(&i)).collect(),
        is_y: (0..a.n).map(|i| y.contains(&i)).collect(),
    };
    for &s in x {
        let mut on_path = vec![false; a.n];
        on_path[s] = true;
        if walk.connects(s, None, &mut on_path) {
            return false;
        }
    }
    true
}

struct PathWalk<'a> {
    a: &'a Arcs,
    an_z: Vec<bool>,
    in_z: Vec<bool>,
    is_x: Vec<bool>,
    is_y: Vec<bool>,
}

impl PathWalk<'_> {
    /// Depth-first over simple paths; `arrow_in` is whether the last edge
    /// has an arrowhead at `v`, `None` at the source.
    fn connects(&self, v: usize, arrow_in: Option<bool>, on_path: &mut Vec<bool>) -> bool {
        for (w, near, far) in steps(self.a, v) {
            if on_path[w] || self.is_x[w] {
                continue;
            }
            if let Some(arrow) = arrow_in {
                let ok = if arrow && near { self.an_z[v] } else { !self.in_z[v] };
                if !ok {
                    continue;
                }
            }
            if self.is_y[w] {
                return true;
            }
            on_path[w] = true;
            let found = self.connects(w, Some(far), on_path);
            on_path[w] = false;
            if found {
                return true;
            }
        }
        false
    }
}

pub fn set(names: &[&str]) -> NodeSet {
    NodeSet::from_names(names).unwrap()
}

pub fn id(name: &str) -> NodeId {
    NodeId::new(name).unwrap()
}

pub fn all_subsets(items: &[NodeId]) -> Vec<NodeSet> {
    (0u32..1 << items.len())
        .map(|bits| (0..items.len()).filter(|i| bits >> i & 1 == 1).map(|i| items[i].clone()).collect())
        .collect()
}

/// Super-cause universe `{x} ∪ (An(y) \ {y})`, computed from arcs.
pub fn universe(g: &Admg, x: &str, y: &str) -> Vec<NodeId> {
    let a = Arcs::of(g);
    let ids = g.node_ids();
    let yi = ids.iter().position(|v| v.as_str() == y).unwrap();
    let an = a.ancestors(&[yi]);
    ids.iter()
        .enumerate()
        .filter(|&(i, v)| (an[i] && i != yi) || v.as_str() == x)
        .map(|(_, v)| v.clone())
        .collect()
}

/// Candidate mediator region for `s`, computed from arcs: descendants of `s`
/// that are ancestors of `y`, minus `s`, `y` and their bidirected neighbours.
pub fn region(g: &Admg, s: &NodeSet, y: &str) -> Vec<NodeId> {
    let a = Arcs::of(g);
    let ids = g.node_ids();
    let si: Vec<usize> = (0..a.n).filter(|&i| s.contains(&ids[i])).collect();
    let yi = ids.iter().position(|v| v.as_str() == y).unwrap();
    let an = a.ancestors(&[yi]);
    let de = a.descendants(&si);
    let mut blocked: BTreeSet<usize> = si.iter().copied().collect();
    blocked.insert(yi);
    for &(p, q) in &a.bidirected {
        if si.contains(&p) || p == yi {
            blocked.insert(q);
        }
        if si.contains(&q) || q == yi {
            blocked.insert(p);
        }
    }
    (0..a.n).filter(|i| an[*i] && de[*i] && !blocked.contains(i)).map(|i| ids[i].clone()).collect()
}

/// Every criterion-passing triple whose super-cause lies in the universe and
/// whose mediator set lies in that super-cause's region.
pub fn restricted_brute_force(g: &Admg, x: &str, y: &str) -> Vec<FdrTriple> {
    let xid = id(x);
    let rest: Vec<NodeId> = universe(g, x, y).into_iter().filter(|v| *v != xid).collect();
    let mut out = Vec::new();
    for mut s in all_subsets(&rest) {
        s.insert(xid.clone());
        for m in all_subsets(&region(g, &s, y)) {
            if m.is_empty() {
                continue;
            }
            let t = FdrTriple::new(s.clone(), set(&[y]), m).unwrap();
            if check_fdr_triple(g, &t).unwrap().all() {
                out.push(t);
            }
        }
    }
    out.sort();
    out
}

/// Renames every node through `f`, keeping the arcs.
pub fn rename(g: &Admg, f: impl Fn(&str) -> String) -> Admg {
    let nodes: Vec<String> = g.node_ids().iter().map(|v| f(v.as_str())).collect();
    let d: Vec<(String, String)> = g.directed_arcs().map(|(a, b)| (f(a.as_str()), f(b.as_str()))).collect();
    let b: Vec<(String, String)> = g.bidirected_arcs().map(|(a, b)| (f(a.as_str()), f(b.as_str()))).collect();
    let nodes: NodeSet = nodes.iter().map(|s| id(s)).collect();
    let d: Vec<_> = d.iter().map(|(a, b)| (id(a), id(b))).collect();
    let b: Vec<_> = b.iter().map(|(a, b)| (id(a), id(b))).collect();
    Admg::new(&nodes, &d, &b).unwrap()
}

pub fn rename_set(s: &NodeSet, f: impl Fn(&str) -> String) -> NodeSet {
    s.iter().map(|v| id(&f(v.as_str()))).collect()
}

/// `p(observed | do(fixed))` by summing the full product of tables over every
/// assignment of every variable, latents included. Returned as a map from
/// assignments of the non-intervened observed variables (canonical order) to
/// probability.
pub fn naive_interventional(
    m: &fdrkit::DiscreteScm,
    fixed: &std::collections::BTreeMap<NodeId, usize>,
) -> std::collections::BTreeMap<Vec<usize>, f64> {
    let cards = m.cardinalities();
    let cpts = m.cpts();
    let vars: Vec<NodeId> = cards.keys().cloned().collect();
    let observed: Vec<usize> = (0..vars.len()).filter(|&i| m.graph().contains(&vars[i]) && !fixed.contains_key(&vars[i])).collect();
    let card: Vec<usize> = vars.iter().map(|v| cards[v]).collect();
    let mut out = std::collections::BTreeMap::new();
    let mut values = vec![0usize; vars.len()];
    loop {
        let consistent = fixed.iter().all(|(v, &x)| values[vars.iter().position(|w| w == v).unwrap()] == x);
        if consistent {
            let mut p = 1.0;
            for (i, v) in vars.iter().enumerate() {
                if fixed.contains_key(v) {
                    continue;
                }
                let cpt = &cpts[v];
                let row = cpt.parents.iter().fold(0, |acc, q| {
                    let j = vars.iter().position(|w| w == q).unwrap();
                    acc * card[j] + values[j]
                });
                p *= cpt.table[row * card[i] + values[i]];
            }
            let key: Vec<usize> = observed.iter().map(|&i| values[i]).collect();
            *out.entry(key).or_insert(0.0) += p;
        }
        let mut k = vars.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            values[k] += 1;
            if values[k] < card[k] {
                break;
            }
            values[k] = 0;
        }
    }
}
