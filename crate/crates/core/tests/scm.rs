mod common;

use std::collections::BTreeMap;

use common::golden::ADMISSIBLE;
use common::oracles::{id, naive_interventional, set};
use fdrkit::figures::figure;
use fdrkit::generate::random_admg;
use fdrkit::{
    causal_effect, counterexample_search, enumerate_triples, equivalence_check, eval_eq11, find_triple,
    interventional_distribution, joint_distribution, random_scm, rule2_precondition, DoAssignment, FdrTriple,
    NodeId, NodeSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn assignments(cards: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &c in cards {
        out = out.into_iter().flat_map(|p| (0..c).map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    out
}

#[test]
fn inference_matches_naive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for seed in 0..40 {
        let n = rng.random_range(2..=5);
        let g = random_admg(n, 0.4, 0.3, &mut rng);
        let m = random_scm(&g, rng.random_range(2..=3), seed).unwrap();
        let mut fixed = BTreeMap::new();
        for v in g.node_ids() {
            if rng.random_bool(0.3) {
                fixed.insert(v.clone(), rng.random_range(0..m.cardinality(v).unwrap()));
            }
        }
        let d = DoAssignment { assignments: fixed.clone() };
        let got = interventional_distribution(&m, &d).unwrap();
        let want = naive_interventional(&m, &fixed);
        assert_eq!(got.table.len(), want.len());
        for (key, p) in &want {
            assert!((got.get(key) - p).abs() < 1e-12, "{g:?} {fixed:?}");
        }
        assert!((joint_distribution(&m).unwrap().total() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn adjustment_is_exact_for_every_admissible_example_triple() {
    for (name, _) in ADMISSIBLE.iter().chain(&[("fig1a", &[][..]), ("fig1b", &[][..])]) {
        let g = figure(name);
        let triples = enumerate_triples(&g, &id("X"), &id("Y"), None).unwrap().triples;
        assert!(!triples.is_empty(), "{name}");
        for t in &triples {
            for seed in 0..20 {
                let m = random_scm(&g, 2, 1000 + seed).unwrap();
                let diff = equivalence_check(&m, t).unwrap();
                assert!(diff <= 1e-9, "{name} {t} seed {seed}: {diff}");
            }
        }
    }
}

#[test]
fn non_front_door_formula_identifies_fig3c() {
    let g = figure("fig3c");
    assert!(find_triple(&g, &id("X"), &id("Y")).unwrap().result.is_none());
    for seed in 0..20 {
        let m = random_scm(&g, 2, seed).unwrap();
        let formula = eval_eq11(&m).unwrap();
        for x in 0..2 {
            let truth = naive_interventional(&m, &BTreeMap::from([(id("X"), x)]));
            for y in 0..2 {
                let p: f64 = truth.iter().filter(|(k, _)| k[2] == y).map(|(_, p)| p).sum();
                assert!((formula.get(&[x, y]) - p).abs() < 1e-9, "seed {seed}");
            }
        }
    }
}

#[test]
fn fig3b_grouping_has_a_counterexample() {
    let g = figure("fig3b");
    let t = FdrTriple::new(set(&["X"]), set(&["Y"]), set(&["M", "U"])).unwrap();
    let (seed, diff) = counterexample_search(&g, &t, 200, 0, 2, 1e-6).unwrap().expect("violating model");
    assert!(diff > 1e-6);
    let m = random_scm(&g, 2, seed).unwrap();
    assert_eq!(equivalence_check(&m, &t).unwrap(), diff);
}

#[test]
fn minimal_missed_triple_is_a_valid_adjustment() {
    let g = fdrkit::parse_graph("A -> B\nA -> Y\nB -> Y\nX -> B\n").unwrap();
    let t = FdrTriple::new(set(&["X"]), set(&["Y"]), set(&["A", "B"])).unwrap();
    for seed in 0..20 {
        assert!(equivalence_check(&random_scm(&g, 2, seed).unwrap(), &t).unwrap() <= 1e-9);
    }
}

/// `p(y | do(x), do(z), w)` against `p(y | do(x), z, w)` for every value.
fn rule2_gap(m: &fdrkit::DiscreteScm, y: &NodeId, z: &NodeId, x: &NodeSet, w: &NodeSet) -> f64 {
    let xs: Vec<NodeId> = x.iter().cloned().collect();
    let ws: Vec<NodeId> = w.iter().cloned().collect();
    let card = |v: &NodeId| m.cardinality(v).unwrap();
    let mut worst = 0.0f64;
    for xv in assignments(&xs.iter().map(card).collect::<Vec<_>>()) {
        let base: BTreeMap<NodeId, usize> = xs.iter().cloned().zip(xv).collect();
        let dx = interventional_distribution(m, &DoAssignment { assignments: base.clone() }).unwrap();
        let mut keep = vec![z.clone(), y.clone()];
        keep.extend(ws.iter().cloned());
        let pzyw = dx.marginal(&keep).unwrap();
        for zv in 0..card(z) {
            let mut both = base.clone();
            both.insert(z.clone(), zv);
            let dxz = interventional_distribution(m, &DoAssignment { assignments: both }).unwrap();
            let mut keep2 = vec![y.clone()];
            keep2.extend(ws.iter().cloned());
            let pyw = dxz.marginal(&keep2).unwrap();
            for wv in assignments(&ws.iter().map(card).collect::<Vec<_>>()) {
                let pw_do: f64 = (0..card(y)).map(|yv| pyw.get(&[vec![yv], wv.clone()].concat())).sum();
                let pzw: f64 = (0..card(y)).map(|yv| pzyw.get(&[vec![zv, yv], wv.clone()].concat())).sum();
                for yv in 0..card(y) {
                    let a = pyw.get(&[vec![yv], wv.clone()].concat()) / pw_do;
                    let b = pzyw.get(&[vec![zv, yv], wv.clone()].concat()) / pzw;
                    worst = worst.max((a - b).abs());
                }
            }
        }
    }
    worst
}

#[test]
fn rule2_precondition_licenses_the_exchange() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut licensed = 0;
    let mut refuted = 0;
    for seed in 0..200 {
        let n = rng.random_range(3..=5);
        let g = random_admg(n, 0.5, 0.3, &mut rng);
        let ids = g.node_ids().to_vec();
        let y = ids[rng.random_range(0..n)].clone();
        let z = loop {
            let c = ids[rng.random_range(0..n)].clone();
            if c != y {
                break c;
            }
        };
        let (mut x, mut w) = (NodeSet::new(), NodeSet::new());
        for v in ids.iter().filter(|v| **v != y && **v != z) {
            match rng.random_range(0..3) {
                0 => x.insert(v.clone()),
                1 => w.insert(v.clone()),
                _ => false,
            };
        }
        let (ys, zs) = (NodeSet::singleton(y.clone()), NodeSet::singleton(z.clone()));
        let m = random_scm(&g, 2, seed).unwrap();
        let gap = rule2_gap(&m, &y, &z, &x, &w);
        if rule2_precondition(&g, &ys, &zs, &x, &w).unwrap() {
            licensed += 1;
            assert!(gap < 1e-9, "{g:?} y={y} z={z} x={x} w={w}: {gap}");
        } else if gap > 1e-6 {
            refuted += 1;
        }
    }
    assert!(licensed > 20 && refuted > 20, "weak corpus: {licensed} licensed, {refuted} refuted");
}

#[test]
fn causal_effect_of_a_root_is_conditioning() {
    let g = figure("frontdoor");
    let m = random_scm(&g, 2, 5).unwrap();
    let joint = joint_distribution(&m).unwrap().marginal(&[id("X"), id("Y")]).unwrap();
    let g2 = fdrkit::parse_graph("X -> M\nM -> Y\n").unwrap();
    let m2 = random_scm(&g2, 2, 5).unwrap();
    let j2 = joint_distribution(&m2).unwrap().marginal(&[id("X"), id("Y")]).unwrap();
    for x in 0..2 {
        let px: f64 = (0..2).map(|y| j2.get(&[x, y])).sum();
        let e = causal_effect(&m2, &set(&["X"]), &[x], &set(&["Y"])).unwrap();
        for y in 0..2 {
            assert!((e.get(&[y]) - j2.get(&[x, y]) / px).abs() < 1e-12);
        }
    }
    // With confounding the two differ.
    let e = causal_effect(&m, &set(&["X"]), &[0], &set(&["Y"])).unwrap();
    let px: f64 = (0..2).map(|y| joint.get(&[0, y])).sum();
    assert!((e.get(&[0]) - joint.get(&[0, 0]) / px).abs() > 1e-6);
}
