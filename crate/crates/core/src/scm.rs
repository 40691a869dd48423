//! Exact discrete structural causal models over an ADMG.
//!
//! Each bidirected arc becomes an explicit latent root with its own
//! distribution. Observational and interventional distributions are computed
//! exactly by variable elimination over the latents.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::admg::{Admg, NodeId, NodeSet};
use crate::criterion::FdrTriple;
use crate::error::{Error, Result};
use crate::msep::{latent_projection_dag, LatentizedDag};

/// Default upper bound on the number of cells in any joint table.
pub const DEFAULT_MAX_JOINT: u128 = 1 << 22;

/// Smallest probability `random_scm` lets through before renormalizing.
const MIN_PROB: f64 = 1e-3;

/// The joint-table cap, overridable through `FDRKIT_MAX_JOINT`.
pub fn max_joint_cells() -> u128 {
    std::env::var("FDRKIT_MAX_JOINT")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_JOINT)
}

/// A conditional probability table. Row `r` holds the distribution of the
/// variable given the `r`-th parent assignment, parents read most significant
/// first; entry `r * card + value`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt {
    pub parents: Vec<NodeId>,
    pub table: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteScm {
    graph: Admg,
    dag: LatentizedDag,
    observed: Vec<bool>,
    cards: Vec<usize>,
    parents: Vec<Vec<usize>>,
    tables: Vec<Vec<f64>>,
}

/// Intervention targets and the values they are fixed to.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DoAssignment {
    pub assignments: BTreeMap<NodeId, usize>,
}

impl DoAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, node: NodeId, value: usize) -> Self {
        self.assignments.insert(node, value);
        self
    }
}

/// A dense table over the product space of `variables`, first variable most
/// significant.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub variables: Vec<NodeId>,
    pub cards: Vec<usize>,
    pub table: Vec<f64>,
}

impl Distribution {
    fn index(&self, values: &[usize]) -> usize {
        values.iter().zip(&self.cards).fold(0, |acc, (&v, &c)| acc * c + v)
    }

    /// Probability of a full assignment, given in `variables` order.
    pub fn get(&self, values: &[usize]) -> f64 {
        assert_eq!(values.len(), self.variables.len(), "assignment arity");
        self.table[self.index(values)]
    }

    pub fn total(&self) -> f64 {
        self.table.iter().sum()
    }

    /// Sums out everything but `keep`, producing a table in `keep` order.
    pub fn marginal(&self, keep: &[NodeId]) -> Result<Distribution> {
        let pos: Vec<usize> = keep
            .iter()
            .map(|k| {
                self.variables
                    .iter()
                    .position(|v| v == k)
                    .ok_or_else(|| Error::UnknownNode(k.to_string()))
            })
            .collect::<Result<_>>()?;
        let cards: Vec<usize> = pos.iter().map(|&p| self.cards[p]).collect();
        let mut table = vec![0.0; cards.iter().product()];
        let mut values = vec![0usize; self.cards.len()];
        for &p in &self.table {
            let idx = pos.iter().zip(&cards).fold(0, |acc, (&q, &c)| acc * c + values[q]);
            table[idx] += p;
            odometer(&mut values, &self.cards);
        }
        Ok(Distribution { variables: keep.to_vec(), cards, table })
    }
}

/// Advances `values` to the next assignment, last position fastest.
fn odometer(values: &mut [usize], cards: &[usize]) {
    for i in (0..values.len()).rev() {
        values[i] += 1;
        if values[i] < cards[i] {
            return;
        }
        values[i] = 0;
    }
}

/// A nonnegative function over a set of variables (sorted indices).
#[derive(Debug, Clone)]
struct Factor {
    vars: Vec<usize>,
    cards: Vec<usize>,
    table: Vec<f64>,
}

impl Factor {
    fn unit() -> Factor {
        Factor { vars: Vec::new(), cards: Vec::new(), table: vec![1.0] }
    }

    fn strides_in(&self, vars: &[usize]) -> Vec<usize> {
        let mut own = vec![0usize; self.vars.len()];
        let mut s = 1;
        for i in (0..self.vars.len()).rev() {
            own[i] = s;
            s *= self.cards[i];
        }
        vars.iter()
            .map(|v| self.vars.iter().position(|w| w == v).map_or(0, |p| own[p]))
            .collect()
    }

    fn product(&self, other: &Factor) -> Factor {
        let mut pairs: Vec<(usize, usize)> = self
            .vars
            .iter()
            .copied()
            .zip(self.cards.iter().copied())
            .chain(other.vars.iter().copied().zip(other.cards.iter().copied()))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let (vars, cards): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
        let sa = self.strides_in(&vars);
        let sb = other.strides_in(&vars);
        let size: usize = cards.iter().product();
        let mut table = Vec::with_capacity(size);
        let mut values = vec![0usize; vars.len()];
        for _ in 0..size {
            let ia: usize = values.iter().zip(&sa).map(|(v, s)| v * s).sum();
            let ib: usize = values.iter().zip(&sb).map(|(v, s)| v * s).sum();
            table.push(self.table[ia] * other.table[ib]);
            odometer(&mut values, &cards);
        }
        Factor { vars, cards, table }
    }

    fn sum_out(&self, var: usize) -> Factor {
        let keep: Vec<usize> = (0..self.vars.len()).filter(|&i| self.vars[i] != var).collect();
        let vars: Vec<usize> = keep.iter().map(|&i| self.vars[i]).collect();
        let cards: Vec<usize> = keep.iter().map(|&i| self.cards[i]).collect();
        let mut table = vec![0.0; cards.iter().product()];
        let mut values = vec![0usize; self.vars.len()];
        for &p in &self.table {
            let idx = keep.iter().fold(0, |acc, &i| acc * self.cards[i] + values[i]);
            table[idx] += p;
            odometer(&mut values, &self.cards);
        }
        Factor { vars, cards, table }
    }

    fn restrict(&self, var: usize, value: usize) -> Factor {
        let Some(pos) = self.vars.iter().position(|&v| v == var) else {
            return self.clone();
        };
        let keep: Vec<usize> = (0..self.vars.len()).filter(|&i| i != pos).collect();
        let vars: Vec<usize> = keep.iter().map(|&i| self.vars[i]).collect();
        let cards: Vec<usize> = keep.iter().map(|&i| self.cards[i]).collect();
        let mut table = Vec::with_capacity(cards.iter().product());
        let mut values = vec![0usize; self.vars.len()];
        for &p in &self.table {
            if values[pos] == value {
                table.push(p);
            }
            odometer(&mut values, &self.cards);
        }
        Factor { vars, cards, table }
    }
}

fn random_rows(rng: &mut ChaCha8Rng, card: usize, rows: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(rows * card);
    for _ in 0..rows {
        let draw: Vec<f64> = (0..card).map(|_| rng.random::<f64>()).collect();
        let sum: f64 = draw.iter().sum();
        let clamped: Vec<f64> = draw.iter().map(|d| (d / sum).max(MIN_PROB)).collect();
        let sum: f64 = clamped.iter().sum();
        table.extend(clamped.iter().map(|c| c / sum));
    }
    table
}

impl DiscreteScm {
    /// Assembles a model from per-variable cardinalities and tables.
    ///
    /// `cards` must cover every observed node; latent cardinalities default
    /// to the largest observed one (at least 2). Missing tables are drawn as
    /// in [`random_scm`] from `seed`, which is then required.
    pub fn from_parts(
        graph: &Admg,
        cards: &BTreeMap<NodeId, usize>,
        cpts: &BTreeMap<NodeId, Cpt>,
        seed: Option<u64>,
    ) -> Result<DiscreteScm> {
        let dag = latent_projection_dag(graph);
        let base = &dag.base;
        let n = base.len();
        for name in cards.keys().chain(cpts.keys()) {
            if !base.contains(name) {
                return Err(Error::UnknownNode(name.to_string()));
            }
        }
        let latent_default = graph
            .node_ids()
            .iter()
            .filter_map(|v| cards.get(v))
            .copied()
            .max()
            .unwrap_or(2)
            .max(2);
        let observed: Vec<bool> = (0..n).map(|i| graph.contains(base.name(i))).collect();
        let mut card_v = Vec::with_capacity(n);
        for (i, &obs) in observed.iter().enumerate() {
            let name = base.name(i);
            let c = match cards.get(name) {
                Some(&c) => c,
                None if obs => return Err(Error::Model(format!("missing cardinality for `{name}`"))),
                None => latent_default,
            };
            if c < 2 {
                return Err(Error::Model(format!("cardinality of `{name}` must be at least 2")));
            }
            card_v.push(c);
        }
        let parents: Vec<Vec<usize>> = (0..n).map(|i| base.parent_idx(i).to_vec()).collect();

        let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
        let mut tables = Vec::with_capacity(n);
        for i in 0..n {
            let name = base.name(i);
            let rows: usize = parents[i].iter().map(|&p| card_v[p]).product();
            let table = match cpts.get(name) {
                Some(cpt) => {
                    let expect: Vec<&NodeId> = parents[i].iter().map(|&p| base.name(p)).collect();
                    if cpt.parents.iter().collect::<Vec<_>>() != expect {
                        return Err(Error::Model(format!(
                            "`{name}` parents must be [{}]",
                            expect.iter().join(", ")
                        )));
                    }
                    check_table(name, &cpt.table, rows, card_v[i])?;
                    cpt.table.clone()
                }
                None => {
                    let rng = rng.as_mut().ok_or_else(|| {
                        Error::Model(format!("no table for `{name}` and no seed to generate one"))
                    })?;
                    random_rows(rng, card_v[i], rows)
                }
            };
            tables.push(table);
        }
        Ok(DiscreteScm { graph: graph.clone(), dag, observed, cards: card_v, parents, tables })
    }

    pub fn graph(&self) -> &Admg {
        &self.graph
    }

    pub fn latentized(&self) -> &LatentizedDag {
        &self.dag
    }

    pub fn cardinalities(&self) -> BTreeMap<NodeId, usize> {
        (0..self.cards.len()).map(|i| (self.dag.base.name(i).clone(), self.cards[i])).collect()
    }

    pub fn cardinality(&self, node: &NodeId) -> Result<usize> {
        Ok(self.cards[self.dag.base.index(node)?])
    }

    pub fn cpts(&self) -> BTreeMap<NodeId, Cpt> {
        (0..self.cards.len())
            .map(|i| {
                let cpt = Cpt {
                    parents: self.parents[i].iter().map(|&p| self.dag.base.name(p).clone()).collect(),
                    table: self.tables[i].clone(),
                };
                (self.dag.base.name(i).clone(), cpt)
            })
            .collect()
    }

    fn cpt_factor(&self, i: usize) -> Factor {
        // Parents are sorted, but the variable itself may sit anywhere among
        // them; reorder the table into sorted-variable layout.
        let mut vars = self.parents[i].clone();
        vars.push(i);
        let cards_raw: Vec<usize> = vars.iter().map(|&v| self.cards[v]).collect();
        let raw = Factor { vars: vars.clone(), cards: cards_raw, table: self.tables[i].clone() };
        let mut sorted = vars;
        sorted.sort_unstable();
        let cards: Vec<usize> = sorted.iter().map(|&v| self.cards[v]).collect();
        let strides = raw.strides_in(&sorted);
        let size: usize = cards.iter().product();
        let mut table = Vec::with_capacity(size);
        let mut values = vec![0usize; sorted.len()];
        for _ in 0..size {
            let idx: usize = values.iter().zip(&strides).map(|(v, s)| v * s).sum();
            table.push(raw.table[idx]);
            odometer(&mut values, &cards);
        }
        Factor { vars: sorted, cards, table }
    }

    /// Eliminates every latent after fixing `fixed`, leaving a table over
    /// the other observed variables in canonical order.
    fn infer(&self, fixed: &BTreeMap<usize, usize>) -> Result<Distribution> {
        let n = self.cards.len();
        let out_vars: Vec<usize> = (0..n).filter(|&i| self.observed[i] && !fixed.contains_key(&i)).collect();
        let size: u128 = out_vars.iter().map(|&i| self.cards[i] as u128).product();
        let cap = max_joint_cells();
        if size > cap {
            return Err(Error::CapExceeded { what: "joint table", size, cap });
        }
        let mut factors: Vec<Factor> = (0..n)
            .filter(|i| !fixed.contains_key(i))
            .map(|i| {
                let mut f = self.cpt_factor(i);
                for (&v, &val) in fixed {
                    f = f.restrict(v, val);
                }
                f
            })
            .collect();
        for l in (0..n).filter(|&i| !self.observed[i]) {
            let (with, without): (Vec<Factor>, Vec<Factor>) =
                factors.into_iter().partition(|f| f.vars.contains(&l));
            factors = without;
            let merged = with.iter().fold(Factor::unit(), |acc, f| acc.product(f));
            factors.push(merged.sum_out(l));
        }
        let joint = factors.iter().fold(Factor::unit(), |acc, f| acc.product(f));
        debug_assert_eq!(joint.vars, out_vars);
        Ok(Distribution {
            variables: out_vars.iter().map(|&i| self.dag.base.name(i).clone()).collect(),
            cards: joint.cards,
            table: joint.table,
        })
    }
}

fn check_table(name: &NodeId, table: &[f64], rows: usize, card: usize) -> Result<()> {
    if table.len() != rows * card {
        return Err(Error::Model(format!(
            "table for `{name}` has {} entries, expected {}",
            table.len(),
            rows * card
        )));
    }
    for (r, row) in table.chunks(card).enumerate() {
        if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::Model(format!("table for `{name}` row {r} has an entry outside [0, 1]")));
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::Model(format!("table for `{name}` row {r} sums to {s}")));
        }
    }
    Ok(())
}

/// A model on `g` with every variable (latents included) of cardinality
/// `card` and tables drawn uniformly, clamped away from zero.
pub fn random_scm(g: &Admg, card: usize, seed: u64) -> Result<DiscreteScm> {
    if card < 2 {
        return Err(Error::Precondition("cardinality must be at least 2".into()));
    }
    let cards = g.node_ids().iter().map(|v| (v.clone(), card)).collect();
    DiscreteScm::from_parts(g, &cards, &BTreeMap::new(), Some(seed))
}

/// Observational distribution over the observed variables.
pub fn joint_distribution(m: &DiscreteScm) -> Result<Distribution> {
    m.infer(&BTreeMap::new())
}

/// Distribution of the non-intervened observed variables under `d`.
pub fn interventional_distribution(m: &DiscreteScm, d: &DoAssignment) -> Result<Distribution> {
    let mut fixed = BTreeMap::new();
    for (node, &value) in &d.assignments {
        let i = m.graph.index(node)?;
        let bi = m.dag.base.index(node)?;
        debug_assert_eq!(m.graph.name(i), m.dag.base.name(bi));
        if value >= m.cards[bi] {
            return Err(Error::Precondition(format!("value {value} out of range for `{node}`")));
        }
        fixed.insert(bi, value);
    }
    m.infer(&fixed)
}

fn ordered(s: &NodeSet) -> Vec<NodeId> {
    s.iter().cloned().collect()
}

fn format_assignment(vars: &[NodeId], values: &[usize]) -> String {
    vars.iter().zip(values).map(|(v, x)| format!("{v}={x}")).join(",")
}

fn all_assignments(cards: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let size: usize = cards.iter().product();
    let mut values = vec![0usize; cards.len()];
    (0..size).map(move |_| {
        let cur = values.clone();
        odometer(&mut values, cards);
        cur
    })
}

fn check_triple_nodes(m: &DiscreteScm, t: &FdrTriple) -> Result<()> {
    for v in t.x_star.iter().chain(t.y_star.iter()).chain(t.m_star.iter()) {
        m.graph.index(v)?;
    }
    Ok(())
}

/// The adjustment `Σ_m p(m|x*) Σ_x' p(y*|x',m) p(x')` from the observational
/// joint, as a distribution over `Y*` in canonical order.
pub fn fdr_adjustment(m: &DiscreteScm, t: &FdrTriple, x_star_value: &[usize]) -> Result<Distribution> {
    let joint = joint_distribution(m)?;
    fdr_adjustment_from(&joint, t, x_star_value)
}

fn fdr_adjustment_from(joint: &Distribution, t: &FdrTriple, x_value: &[usize]) -> Result<Distribution> {
    let (xs, ms, ys) = (ordered(&t.x_star), ordered(&t.m_star), ordered(&t.y_star));
    if x_value.len() != xs.len() {
        return Err(Error::Precondition(format!("expected {} values for {}", xs.len(), t.x_star)));
    }
    let vars: Vec<NodeId> = xs.iter().chain(&ms).chain(&ys).cloned().collect();
    let p = joint.marginal(&vars)?;
    let (nx, nm) = (xs.len(), ms.len());
    let xc = &p.cards[..nx];
    let mc = &p.cards[nx..nx + nm];
    let yc = &p.cards[nx + nm..];
    if x_value.iter().zip(xc).any(|(&v, &c)| v >= c) {
        return Err(Error::Precondition(format!("value out of range for {}", t.x_star)));
    }
    let (sx, sm, sy): (usize, usize, usize) = (xc.iter().product(), mc.iter().product(), yc.iter().product());
    let at = |x: usize, mm: usize, y: usize| p.table[(x * sm + mm) * sy + y];
    let xi = x_value.iter().zip(xc).fold(0, |acc, (&v, &c)| acc * c + v);

    let p_x: Vec<f64> = (0..sx).map(|x| (0..sm * sy).map(|k| p.table[x * sm * sy + k]).sum()).collect();
    let p_xm: Vec<f64> = (0..sx * sm).map(|k| (0..sy).map(|y| p.table[k * sy + y]).sum()).collect();
    if p_x[xi] <= 0.0 {
        return Err(Error::ZeroProbability(format!("p({}) = 0", format_assignment(&xs, x_value))));
    }
    let x_of = |x: usize| -> Vec<usize> { decode(x, xc) };
    let mut out = vec![0.0; sy];
    for mm in 0..sm {
        let w_m = p_xm[xi * sm + mm] / p_x[xi];
        if w_m == 0.0 {
            continue;
        }
        for x2 in 0..sx {
            if p_x[x2] == 0.0 {
                continue;
            }
            let denom = p_xm[x2 * sm + mm];
            if denom <= 0.0 {
                let mut vals = x_of(x2);
                vals.extend(decode(mm, mc));
                let names: Vec<NodeId> = xs.iter().chain(&ms).cloned().collect();
                return Err(Error::ZeroProbability(format!("p({}) = 0", format_assignment(&names, &vals))));
            }
            for (y, o) in out.iter_mut().enumerate() {
                *o += w_m * (at(x2, mm, y) / denom) * p_x[x2];
            }
        }
    }
    Ok(Distribution { variables: ys, cards: yc.to_vec(), table: out })
}

fn decode(mut idx: usize, cards: &[usize]) -> Vec<usize> {
    let mut v = vec![0; cards.len()];
    for i in (0..cards.len()).rev() {
        v[i] = idx % cards[i];
        idx /= cards[i];
    }
    v
}

/// `p(Y* | do(X* = x))` by truncated factorization.
pub fn causal_effect(m: &DiscreteScm, x_star: &NodeSet, x_value: &[usize], y_star: &NodeSet) -> Result<Distribution> {
    let xs = ordered(x_star);
    if xs.len() != x_value.len() {
        return Err(Error::Precondition(format!("expected {} values for {x_star}", xs.len())));
    }
    let d = DoAssignment { assignments: xs.into_iter().zip(x_value.iter().copied()).collect() };
    interventional_distribution(m, &d)?.marginal(&ordered(y_star))
}

/// Largest absolute gap between the adjustment formula and the true
/// interventional distribution, over every `x*` and `y*`.
pub fn equivalence_check(m: &DiscreteScm, t: &FdrTriple) -> Result<f64> {
    check_triple_nodes(m, t)?;
    let joint = joint_distribution(m)?;
    let xc: Vec<usize> = t.x_star.iter().map(|v| m.cardinality(v)).collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for xv in all_assignments(&xc) {
        let adj = fdr_adjustment_from(&joint, t, &xv)?;
        let truth = causal_effect(m, &t.x_star, &xv, &t.y_star)?;
        for (a, b) in adj.table.iter().zip(&truth.table) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

/// Scans seeds `seed, seed + 1, ...` for a random model on which the
/// adjustment for `t` is off by more than `tol`. Returns the smallest such
/// seed and its gap.
pub fn counterexample_search(
    g: &Admg,
    t: &FdrTriple,
    trials: u64,
    seed: u64,
    card: usize,
    tol: f64,
) -> Result<Option<(u64, f64)>> {
    let probe = |i: u64| -> Option<Result<(u64, f64)>> {
        let s = seed.wrapping_add(i);
        match random_scm(g, card, s).and_then(|m| equivalence_check(&m, t)) {
            Ok(d) if d > tol => Some(Ok((s, d))),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        }
    };
    #[cfg(feature = "parallel")]
    let hit = {
        use rayon::prelude::*;
        (0..trials).into_par_iter().find_map_first(probe)
    };
    #[cfg(not(feature = "parallel"))]
    let hit = (0..trials).find_map(probe);
    hit.transpose()
}

/// The non-front-door graph identified by an explicit formula: `V → X`,
/// `V → U`, `V → Y`, `X → U`, `U → Y`, `X <-> Y`.
pub fn eq11_reference_graph() -> Admg {
    Admg::from_names(
        &["U", "V", "X", "Y"],
        &[("V", "X"), ("V", "U"), ("V", "Y"), ("X", "U"), ("U", "Y")],
        &[("X", "Y")],
    )
    .expect("reference graph is valid")
}

/// Maps reference roles `[U, V, X, Y]` onto the nodes of `g`.
fn match_reference(g: &Admg) -> Option<[NodeId; 4]> {
    let r = eq11_reference_graph();
    if g.len() != 4 || g.num_directed() != r.num_directed() || g.num_bidirected() != r.num_bidirected() {
        return None;
    }
    let ids = g.node_ids().to_vec();
    ids.iter().cloned().permutations(4).find_map(|p| {
        let map = |v: &NodeId| p[r.index(v).expect("reference node")].clone();
        let ok = r.directed_arcs().all(|(a, b)| g.has_directed(&map(a), &map(b)))
            && r.bidirected_arcs().all(|(a, b)| g.has_bidirected(&map(a), &map(b)));
        ok.then(|| [p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()])
    })
}

/// `p(y | do(x)) = Σ_{u,v,x'} p(y|u,v,x') p(u|v,x) p(v,x')` evaluated from
/// the observational joint. Rows of the result are indexed by `x`; each row
/// is a distribution over `y`.
pub fn eval_eq11(m: &DiscreteScm) -> Result<Distribution> {
    let [u, v, x, y] = match_reference(&m.graph).ok_or_else(|| {
        Error::GraphMismatch("expected V->X, V->U, V->Y, X->U, U->Y, X<->Y up to renaming".into())
    })?;
    let joint = joint_distribution(m)?;
    let p = joint.marginal(&[v.clone(), x.clone(), u.clone(), y.clone()])?;
    let (cv, cx, cu, cy) = (p.cards[0], p.cards[1], p.cards[2], p.cards[3]);
    let at = |vv: usize, xx: usize, uu: usize, yy: usize| p.table[((vv * cx + xx) * cu + uu) * cy + yy];
    let p_vx = |vv: usize, xx: usize| -> f64 { (0..cu * cy).map(|k| at(vv, xx, k / cy, k % cy)).sum() };
    let p_vxu = |vv: usize, xx: usize, uu: usize| -> f64 { (0..cy).map(|yy| at(vv, xx, uu, yy)).sum() };
    let zero = |what: String| Error::ZeroProbability(what);

    let mut table = vec![0.0; cx * cy];
    for xx in 0..cx {
        for vv in 0..cv {
            let pvx = p_vx(vv, xx);
            for x2 in 0..cx {
                let w = p_vx(vv, x2);
                if w == 0.0 {
                    continue;
                }
                if pvx <= 0.0 {
                    return Err(zero(format!("p({v}={vv},{x}={xx}) = 0")));
                }
                for uu in 0..cu {
                    let pu = p_vxu(vv, xx, uu) / pvx;
                    if pu == 0.0 {
                        continue;
                    }
                    let denom = p_vxu(vv, x2, uu);
                    if denom <= 0.0 {
                        return Err(zero(format!("p({u}={uu},{v}={vv},{x}={x2}) = 0")));
                    }
                    for yy in 0..cy {
                        table[xx * cy + yy] += at(vv, x2, uu, yy) / denom * pu * w;
                    }
                }
            }
        }
    }
    Ok(Distribution { variables: vec![x, y], cards: vec![cx, cy], table })
}
