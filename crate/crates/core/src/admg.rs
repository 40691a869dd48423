//! Acyclic directed mixed graphs.
//!
//! Nodes are named by [`NodeId`]s and always iterated in lexicographic
//! (canonical) order. Directed arcs carry causation; bidirected arcs stand
//! for a latent common cause of their two endpoints. Graphs are immutable:
//! every surgery returns a new graph sharing the node table where possible.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Name of a variable, matching `[A-Za-z0-9_]+`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(Arc<str>);

impl NodeId {
    pub fn new(name: &str) -> Result<Self> {
        if is_valid_name(name) {
            Ok(NodeId(Arc::from(name)))
        } else {
            Err(Error::InvalidName(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl FromStr for NodeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        NodeId::new(s)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An ordered set of nodes.
///
/// Sets compare by cardinality first and lexicographically second, which is
/// the canonical enumeration order used by the triple search.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct NodeSet(BTreeSet<NodeId>);

impl NodeSet {
    pub fn new() -> Self {
        NodeSet(BTreeSet::new())
    }

    pub fn singleton(node: NodeId) -> Self {
        NodeSet(BTreeSet::from([node]))
    }

    /// Builds a set from names, validating each.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        names.iter().map(|n| NodeId::new(n.as_ref())).collect()
    }

    /// Parses a comma-separated list; the empty string yields the empty set.
    pub fn parse_list(list: &str) -> Result<Self> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(NodeId::new)
            .collect()
    }

    pub fn insert(&mut self, node: NodeId) -> bool {
        self.0.insert(node)
    }

    pub fn remove(&mut self, node: &NodeId) -> bool {
        self.0.remove(node)
    }

    pub fn contains(&self, node: &NodeId) -> bool {
        self.0.contains(node)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &NodeId> + ExactSizeIterator + '_ {
        self.0.iter()
    }

    pub fn first(&self) -> Option<&NodeId> {
        self.0.first()
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0.difference(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn without(&self, node: &NodeId) -> NodeSet {
        let mut out = self.clone();
        out.0.remove(node);
        out
    }

    pub fn names(&self) -> Vec<String> {
        self.0.iter().map(|n| n.to_string()).collect()
    }
}

impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        NodeSet(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<&'a NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = &'a NodeId>>(iter: I) -> Self {
        NodeSet(iter.into_iter().cloned().collect())
    }
}

impl IntoIterator for NodeSet {
    type Item = NodeId;
    type IntoIter = std::collections::btree_set::IntoIter<NodeId>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a NodeSet {
    type Item = &'a NodeId;
    type IntoIter = std::collections::btree_set::Iter<'a, NodeId>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(n.as_str())?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Maximal bidirected-connected blocks of a graph, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CComponentPartition {
    pub blocks: Vec<NodeSet>,
}

/// An acyclic directed mixed graph.
#[derive(Clone)]
pub struct Admg {
    names: Arc<[NodeId]>,
    directed: Vec<(usize, usize)>,
    bidirected: Vec<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    spouses: Vec<Vec<usize>>,
}

impl PartialEq for Admg {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.directed == other.directed
            && self.bidirected == other.bidirected
    }
}

impl Eq for Admg {}

impl fmt::Debug for Admg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir: Vec<String> = self
            .directed
            .iter()
            .map(|&(a, b)| format!("{}->{}", self.names[a], self.names[b]))
            .collect();
        let bi: Vec<String> = self
            .bidirected
            .iter()
            .map(|&(a, b)| format!("{}<->{}", self.names[a], self.names[b]))
            .collect();
        f.debug_struct("Admg")
            .field("nodes", &self.names)
            .field("directed", &dir)
            .field("bidirected", &bi)
            .finish()
    }
}

impl Admg {
    /// Validates and canonicalizes a graph.
    pub fn new(
        nodes: &NodeSet,
        directed: &[(NodeId, NodeId)],
        bidirected: &[(NodeId, NodeId)],
    ) -> Result<Self> {
        let names: Arc<[NodeId]> = nodes.iter().cloned().collect();
        let lookup = |n: &NodeId| -> Result<usize> {
            names
                .binary_search(n)
                .map_err(|_| Error::UnknownNode(n.to_string()))
        };

        let mut dir = Vec::with_capacity(directed.len());
        let mut seen = BTreeSet::new();
        for (a, b) in directed {
            let (i, j) = (lookup(a)?, lookup(b)?);
            if i == j {
                return Err(Error::SelfLoop(a.to_string()));
            }
            if !seen.insert((i, j)) {
                return Err(Error::DuplicateArc(format!("{a} -> {b}")));
            }
            dir.push((i, j));
        }
        let mut bi = Vec::with_capacity(bidirected.len());
        let mut seen = BTreeSet::new();
        for (a, b) in bidirected {
            let (i, j) = (lookup(a)?, lookup(b)?);
            if i == j {
                return Err(Error::SelfLoop(a.to_string()));
            }
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                return Err(Error::DuplicateArc(format!("{a} <-> {b}")));
            }
            bi.push(key);
        }
        let g = Self::from_parts(names, dir, bi);
        if let Some(cycle) = g.find_cycle() {
            return Err(Error::Cycle {
                cycle: cycle.into_iter().map(|i| g.names[i].to_string()).collect(),
            });
        }
        Ok(g)
    }

    /// Convenience constructor from string names; unmentioned arc endpoints
    /// must appear in `nodes`.
    pub fn from_names(
        nodes: &[&str],
        directed: &[(&str, &str)],
        bidirected: &[(&str, &str)],
    ) -> Result<Self> {
        let ns = NodeSet::from_names(nodes)?;
        let pair = |&(a, b): &(&str, &str)| -> Result<(NodeId, NodeId)> {
            Ok((NodeId::new(a)?, NodeId::new(b)?))
        };
        let d = directed.iter().map(pair).collect::<Result<Vec<_>>>()?;
        let b = bidirected.iter().map(pair).collect::<Result<Vec<_>>>()?;
        Admg::new(&ns, &d, &b)
    }

    fn from_parts(
        names: Arc<[NodeId]>,
        mut directed: Vec<(usize, usize)>,
        mut bidirected: Vec<(usize, usize)>,
    ) -> Self {
        directed.sort_unstable();
        directed.dedup();
        bidirected.sort_unstable();
        bidirected.dedup();
        let n = names.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let mut spouses = vec![Vec::new(); n];
        for &(a, b) in &directed {
            children[a].push(b);
            parents[b].push(a);
        }
        for &(a, b) in &bidirected {
            spouses[a].push(b);
            spouses[b].push(a);
        }
        for v in parents.iter_mut().chain(spouses.iter_mut()) {
            v.sort_unstable();
        }
        Admg {
            names,
            directed,
            bidirected,
            parents,
            children,
            spouses,
        }
    }

    fn find_cycle(&self) -> Option<Vec<usize>> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let n = self.names.len();
        let mut state = vec![0u8; n];
        let mut stack: Vec<(usize, usize)> = Vec::new();
        let mut path: Vec<usize> = Vec::new();
        for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            stack.push((root, 0));
            state[root] = 1;
            path.push(root);
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&w) = self.children[v].get(*next) {
                    *next += 1;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            stack.push((w, 0));
                            path.push(w);
                        }
                        1 => {
                            let start = path.iter().position(|&p| p == w).unwrap();
                            let mut cycle = path[start..].to_vec();
                            cycle.push(w);
                            return Some(cycle);
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                    path.pop();
                }
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn nodes(&self) -> NodeSet {
        self.names.iter().collect()
    }

    /// Node names in canonical order.
    pub fn node_ids(&self) -> &[NodeId] {
        &self.names
    }

    pub fn contains(&self, node: &NodeId) -> bool {
        self.names.binary_search(node).is_ok()
    }

    pub fn directed_arcs(&self) -> impl Iterator<Item = (&NodeId, &NodeId)> + '_ {
        self.directed
            .iter()
            .map(|&(a, b)| (&self.names[a], &self.names[b]))
    }

    pub fn bidirected_arcs(&self) -> impl Iterator<Item = (&NodeId, &NodeId)> + '_ {
        self.bidirected
            .iter()
            .map(|&(a, b)| (&self.names[a], &self.names[b]))
    }

    pub fn num_directed(&self) -> usize {
        self.directed.len()
    }

    pub fn num_bidirected(&self) -> usize {
        self.bidirected.len()
    }

    pub fn has_directed(&self, from: &NodeId, to: &NodeId) -> bool {
        match (self.index(from), self.index(to)) {
            (Ok(a), Ok(b)) => self.directed.binary_search(&(a, b)).is_ok(),
            _ => false,
        }
    }

    pub fn has_bidirected(&self, a: &NodeId, b: &NodeId) -> bool {
        match (self.index(a), self.index(b)) {
            (Ok(a), Ok(b)) => self.bidirected.binary_search(&(a.min(b), a.max(b))).is_ok(),
            _ => false,
        }
    }

    /// Directed parents of `node` in canonical order.
    pub fn parents(&self, node: &NodeId) -> Result<NodeSet> {
        let i = self.index(node)?;
        Ok(self.parents[i].iter().map(|&p| &self.names[p]).collect())
    }

    pub fn children(&self, node: &NodeId) -> Result<NodeSet> {
        let i = self.index(node)?;
        Ok(self.children[i].iter().map(|&p| &self.names[p]).collect())
    }

    pub(crate) fn index(&self, node: &NodeId) -> Result<usize> {
        self.names
            .binary_search(node)
            .map_err(|_| Error::UnknownNode(node.to_string()))
    }

    pub(crate) fn name(&self, i: usize) -> &NodeId {
        &self.names[i]
    }

    pub(crate) fn mask(&self, set: &NodeSet) -> Result<Vec<bool>> {
        let mut m = vec![false; self.names.len()];
        for n in set {
            m[self.index(n)?] = true;
        }
        Ok(m)
    }

    pub(crate) fn set_of(&self, mask: &[bool]) -> NodeSet {
        mask.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| &self.names[i])
            .collect()
    }

    pub(crate) fn parent_idx(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub(crate) fn child_idx(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub(crate) fn spouse_idx(&self, i: usize) -> &[usize] {
        &self.spouses[i]
    }

    pub(crate) fn bidirected_idx(&self) -> &[(usize, usize)] {
        &self.bidirected
    }

    /// Reflexive closure along directed arcs, following `step`.
    fn closure<'a>(&'a self, seed: Vec<bool>, step: impl Fn(usize) -> &'a [usize]) -> Vec<bool> {
        let mut seen = seed;
        let mut stack: Vec<usize> = (0..seen.len()).filter(|&i| seen[i]).collect();
        while let Some(v) = stack.pop() {
            for &w in step(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub(crate) fn ancestors_mask(&self, seed: Vec<bool>) -> Vec<bool> {
        self.closure(seed, |v| &self.parents[v])
    }

    pub(crate) fn descendants_mask(&self, seed: Vec<bool>) -> Vec<bool> {
        self.closure(seed, |v| &self.children[v])
    }

    /// `An(s)`, including `s` itself.
    pub fn ancestors(&self, s: &NodeSet) -> Result<NodeSet> {
        let m = self.mask(s)?;
        Ok(self.set_of(&self.ancestors_mask(m)))
    }

    /// `De(s)`, including `s` itself.
    pub fn descendants(&self, s: &NodeSet) -> Result<NodeSet> {
        let m = self.mask(s)?;
        Ok(self.set_of(&self.descendants_mask(m)))
    }

    /// Kahn's algorithm, releasing the canonically smallest ready node first.
    pub fn topological_order(&self) -> Vec<NodeId> {
        let n = self.names.len();
        let mut indeg: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&i| indeg[i] == 0).map(Reverse).collect();
        let mut out = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            out.push(self.names[v].clone());
            for &c in &self.children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.push(Reverse(c));
                }
            }
        }
        debug_assert_eq!(out.len(), n);
        out
    }

    /// Nodes outside `a` joined to some member of `a` by a bidirected arc.
    pub fn bidirected_neighbors(&self, a: &NodeSet) -> Result<NodeSet> {
        let m = self.mask(a)?;
        let mut out = vec![false; m.len()];
        for &(i, j) in &self.bidirected {
            if m[i] && !m[j] {
                out[j] = true;
            }
            if m[j] && !m[i] {
                out[i] = true;
            }
        }
        Ok(self.set_of(&out))
    }

    pub fn induced_subgraph(&self, keep: &NodeSet) -> Result<Admg> {
        let m = self.mask(keep)?;
        Ok(self.induced_by_mask(&m))
    }

    pub(crate) fn induced_by_mask(&self, keep: &[bool]) -> Admg {
        if keep.iter().all(|&b| b) {
            return self.clone();
        }
        let mut remap = vec![usize::MAX; keep.len()];
        let mut names = Vec::new();
        for (i, &k) in keep.iter().enumerate() {
            if k {
                remap[i] = names.len();
                names.push(self.names[i].clone());
            }
        }
        let pick = |arcs: &[(usize, usize)]| -> Vec<(usize, usize)> {
            arcs.iter()
                .filter(|&&(a, b)| keep[a] && keep[b])
                .map(|&(a, b)| (remap[a], remap[b]))
                .collect()
        };
        Admg::from_parts(names.into(), pick(&self.directed), pick(&self.bidirected))
    }

    /// Removes every arc with an arrowhead into `s`: directed arcs with head
    /// in `s` and bidirected arcs touching `s`.
    pub fn cut_incoming(&self, s: &NodeSet) -> Result<Admg> {
        let m = self.mask(s)?;
        Ok(self.cut_incoming_mask(&m))
    }

    pub(crate) fn cut_incoming_mask(&self, m: &[bool]) -> Admg {
        let dir = self.directed.iter().copied().filter(|&(_, b)| !m[b]).collect();
        let bi = self
            .bidirected
            .iter()
            .copied()
            .filter(|&(a, b)| !m[a] && !m[b])
            .collect();
        Admg::from_parts(self.names.clone(), dir, bi)
    }

    /// Removes every directed arc with tail in `s`; bidirected arcs stay.
    pub fn cut_outgoing(&self, s: &NodeSet) -> Result<Admg> {
        let m = self.mask(s)?;
        Ok(self.cut_outgoing_mask(&m))
    }

    pub(crate) fn cut_outgoing_mask(&self, m: &[bool]) -> Admg {
        let dir = self.directed.iter().copied().filter(|&(a, _)| !m[a]).collect();
        Admg::from_parts(self.names.clone(), dir, self.bidirected.clone())
    }

    pub fn c_components(&self) -> CComponentPartition {
        let n = self.names.len();
        let mut comp = vec![usize::MAX; n];
        let mut blocks = Vec::new();
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut members = vec![false; n];
            let mut stack = vec![root];
            comp[root] = id;
            while let Some(v) = stack.pop() {
                members[v] = true;
                for &w in &self.spouses[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            blocks.push(self.set_of(&members));
        }
        blocks.sort_by(|a, b| a.first().cmp(&b.first()));
        CComponentPartition { blocks }
    }

    /// Whether a directed path from `src` to `dst` exists once `avoid` is
    /// deleted. Source nodes inside `avoid` are skipped.
    pub fn reaches_avoiding(&self, src: &NodeSet, dst: &NodeSet, avoid: &NodeSet) -> Result<bool> {
        let s = self.mask(src)?;
        let d = self.mask(dst)?;
        let a = self.mask(avoid)?;
        Ok(self.reaches_avoiding_mask(&s, &d, &a))
    }

    pub(crate) fn reaches_avoiding_mask(&self, src: &[bool], dst: &[bool], avoid: &[bool]) -> bool {
        let n = self.names.len();
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        for i in 0..n {
            if src[i] && !avoid[i] {
                seen[i] = true;
                stack.push(i);
            }
        }
        while let Some(v) = stack.pop() {
            if dst[v] {
                return true;
            }
            for &w in &self.children[v] {
                if !seen[w] && !avoid[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }
}
