//! m-separation and the graphical preconditions of the three do-calculus
//! rules.
//!
//! m-separation is decided by a reachability search directly on the mixed
//! graph. [`latent_projection_dag`] builds the equivalent DAG with one latent
//! parent per bidirected arc, used by the SCM oracle.

use crate::admg::{Admg, NodeId, NodeSet};
use crate::error::{Error, Result};

/// A DAG obtained from an ADMG by giving each bidirected arc its own latent
/// parent.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentizedDag {
    /// The observed and latent nodes with directed arcs only.
    pub base: Admg,
    pub latent_nodes: NodeSet,
    /// `(latent, a, b)` for each original arc `a <-> b`, in canonical arc order.
    pub latent_arcs: Vec<(NodeId, NodeId, NodeId)>,
}

impl LatentizedDag {
    /// Recovers the bidirected arcs by contracting each latent's child pair.
    pub fn recontract(&self) -> Vec<(NodeId, NodeId)> {
        self.latent_arcs
            .iter()
            .map(|(l, _, _)| {
                let kids = self.base.children(l).expect("latent node in base");
                let mut it = kids.into_iter();
                let a = it.next().expect("two children");
                let b = it.next().expect("two children");
                (a, b)
            })
            .collect()
    }
}

/// Fresh latent names `L_<a>_<b>`, prefixed with underscores until they
/// collide with nothing already in `taken`.
pub(crate) fn latent_names(g: &Admg) -> Vec<NodeId> {
    let mut taken: std::collections::BTreeSet<String> =
        g.node_ids().iter().map(|n| n.to_string()).collect();
    g.bidirected_arcs()
        .map(|(a, b)| {
            let mut name = format!("L_{a}_{b}");
            while taken.contains(&name) {
                name.insert(0, '_');
            }
            taken.insert(name.clone());
            NodeId::new(&name).expect("latent names are valid identifiers")
        })
        .collect()
}

pub fn latent_projection_dag(g: &Admg) -> LatentizedDag {
    let latents = latent_names(g);
    let mut nodes = g.nodes();
    nodes.extend_from(&latents);
    let mut directed: Vec<(NodeId, NodeId)> = g
        .directed_arcs()
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();
    let mut latent_arcs = Vec::with_capacity(latents.len());
    for (l, (a, b)) in latents.iter().zip(g.bidirected_arcs()) {
        directed.push((l.clone(), a.clone()));
        directed.push((l.clone(), b.clone()));
        latent_arcs.push((l.clone(), a.clone(), b.clone()));
    }
    let base = Admg::new(&nodes, &directed, &[]).expect("latentization preserves acyclicity");
    LatentizedDag {
        base,
        latent_nodes: latents.into_iter().collect(),
        latent_arcs,
    }
}

impl NodeSet {
    fn extend_from(&mut self, items: &[NodeId]) {
        for n in items {
            self.insert(n.clone());
        }
    }
}

/// Arcs to ignore during a separation query: directed arcs into `cut_in`,
/// bidirected arcs touching `cut_in`, directed arcs out of `cut_out`.
#[derive(Clone, Copy)]
pub(crate) struct Cuts<'a> {
    pub cut_in: Option<&'a [bool]>,
    pub cut_out: Option<&'a [bool]>,
}

impl Cuts<'_> {
    pub(crate) const NONE: Cuts<'static> = Cuts { cut_in: None, cut_out: None };

    fn directed_kept(&self, from: usize, to: usize) -> bool {
        !self.cut_in.is_some_and(|c| c[to]) && !self.cut_out.is_some_and(|c| c[from])
    }

    fn bidirected_kept(&self, a: usize, b: usize) -> bool {
        !self.cut_in.is_some_and(|c| c[a] || c[b])
    }
}

/// Reachability along m-connecting walks, directly on the mixed graph.
///
/// A state is a node plus whether the arc used to enter it has an arrowhead
/// there. Leaving through another arrowhead makes the node a collider, which
/// passes only if it is an ancestor of `z`; any other node passes only if it
/// is outside `z`. This is d-separation on the graph with one latent parent
/// per bidirected arc, without building that graph.
pub(crate) fn m_separated_cut(g: &Admg, x: &[bool], y: &[bool], z: &[bool], cuts: Cuts<'_>) -> bool {
    let n = g.len();
    let mut anc_z = z.to_vec();
    let mut stack: Vec<usize> = (0..n).filter(|&i| z[i]).collect();
    while let Some(v) = stack.pop() {
        for &p in g.parent_idx(v) {
            if !anc_z[p] && cuts.directed_kept(p, v) {
                anc_z[p] = true;
                stack.push(p);
            }
        }
    }

    // visited[v][0]: entered by a tail, [1]: entered by an arrowhead.
    let mut visited = vec![[false; 2]; n];
    let mut queue: Vec<(usize, usize)> = Vec::new();
    // Sources behave like nodes entered by a tail: never colliders.
    for v in (0..n).filter(|&i| x[i]) {
        visited[v][0] = true;
        queue.push((v, 0));
    }
    while let Some((v, head)) = queue.pop() {
        let source = x[v];
        if !source && y[v] {
            return false;
        }
        let pass_noncollider = source || !z[v];
        let pass_collider = !source && head == 1 && anc_z[v];
        let mut visit = |w: usize, w_head: usize, queue: &mut Vec<(usize, usize)>| {
            if !visited[w][w_head] {
                visited[w][w_head] = true;
                queue.push((w, w_head));
            }
        };
        // Leaving by a tail at v (v -> c): never a collider at v.
        if pass_noncollider {
            for &c in g.child_idx(v) {
                if cuts.directed_kept(v, c) {
                    visit(c, 1, &mut queue);
                }
            }
        }
        // Leaving by an arrowhead at v (v <- p or v <-> s).
        if pass_noncollider && (head == 0 || source) || pass_collider {
            for &p in g.parent_idx(v) {
                if cuts.directed_kept(p, v) {
                    visit(p, 0, &mut queue);
                }
            }
            for &s in g.spouse_idx(v) {
                if cuts.bidirected_kept(v, s) {
                    visit(s, 1, &mut queue);
                }
            }
        }
    }
    true
}

/// Unchecked m-separation on index masks over the nodes of `g`.
pub(crate) fn m_separated_mask(g: &Admg, x: &[bool], y: &[bool], z: &[bool]) -> bool {
    m_separated_cut(g, x, y, z, Cuts::NONE)
}

pub fn m_separated(g: &Admg, x: &NodeSet, y: &NodeSet, z: &NodeSet) -> Result<bool> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Precondition("m-separation needs nonempty endpoint sets".into()));
    }
    if !x.is_disjoint(y) {
        return Err(Error::Precondition(format!("{x} and {y} overlap")));
    }
    if !z.is_disjoint(x) || !z.is_disjoint(y) {
        return Err(Error::Precondition(format!(
            "conditioning set {z} overlaps {x} or {y}"
        )));
    }
    let (xm, ym, zm) = (g.mask(x)?, g.mask(y)?, g.mask(z)?);
    Ok(m_separated_mask(g, &xm, &ym, &zm))
}

fn pairwise_disjoint(sets: [&NodeSet; 4]) -> Result<()> {
    for i in 0..4 {
        for j in i + 1..4 {
            if !sets[i].is_disjoint(sets[j]) {
                return Err(Error::Precondition(format!(
                    "rule arguments must be pairwise disjoint ({} vs {})",
                    sets[i], sets[j]
                )));
            }
        }
    }
    Ok(())
}

/// Rule 1: `(Y ⊥ Z | X, W)` in the graph with arrows into `X` removed.
pub fn rule1_precondition(g: &Admg, y: &NodeSet, z: &NodeSet, x: &NodeSet, w: &NodeSet) -> Result<bool> {
    pairwise_disjoint([y, z, x, w])?;
    if y.is_empty() || z.is_empty() {
        return Ok(true);
    }
    m_separated(&g.cut_incoming(x)?, y, z, &x.union(w))
}

/// Rule 2: `(Y ⊥ Z | X, W)` with arrows into `X` and out of `Z` removed.
pub fn rule2_precondition(g: &Admg, y: &NodeSet, z: &NodeSet, x: &NodeSet, w: &NodeSet) -> Result<bool> {
    pairwise_disjoint([y, z, x, w])?;
    if y.is_empty() || z.is_empty() {
        return Ok(true);
    }
    let h = g.cut_incoming(x)?.cut_outgoing(z)?;
    m_separated(&h, y, z, &x.union(w))
}

/// Rule 3: `(Y ⊥ Z | X, W)` with arrows into `X` and into `Z(W)` removed,
/// where `Z(W)` are the `Z` nodes that are not ancestors of `W` once arrows
/// into `X` are gone.
pub fn rule3_precondition(g: &Admg, y: &NodeSet, z: &NodeSet, x: &NodeSet, w: &NodeSet) -> Result<bool> {
    pairwise_disjoint([y, z, x, w])?;
    if y.is_empty() || z.is_empty() {
        return Ok(true);
    }
    let gx = g.cut_incoming(x)?;
    let zw = z.difference(&gx.ancestors(w)?);
    let h = gx.cut_incoming(&zw)?;
    m_separated(&h, y, z, &x.union(w))
}
