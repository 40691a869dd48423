mod common;

use common::oracles::{msep_by_paths, Arcs};
use fdrkit::generate::random_admg;
use fdrkit::{latent_projection_dag, m_separated, Admg, NodeSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn names(g: &Admg, idx: &[usize]) -> NodeSet {
    idx.iter().map(|&i| g.node_ids()[i].clone()).collect()
}

/// Random disjoint `(x, y, z)` with nonempty `x` and `y`.
fn random_query(n: usize, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let nx = rng.random_range(1..n);
    let ny = rng.random_range(1..=n - nx);
    let nz = rng.random_range(0..=n - nx - ny);
    let x = order[..nx].to_vec();
    let y = order[nx..nx + ny].to_vec();
    let z = order[nx + ny..nx + ny + nz].to_vec();
    (x, y, z)
}

fn corpus(count: usize, seed: u64) -> Vec<Admg> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=6);
            let pd = rng.random_range(0.1..0.7);
            let pb = rng.random_range(0.0..0.5);
            random_admg(n, pd, pb, &mut rng)
        })
        .collect()
}

#[test]
fn agrees_with_path_enumeration_for_all_singleton_queries() {
    for g in corpus(300, 11) {
        let a = Arcs::of(&g);
        let n = g.len();
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                let rest: Vec<usize> = (0..n).filter(|&i| i != x && i != y).collect();
                for bits in 0u32..1 << rest.len() {
                    let z: Vec<usize> = (0..rest.len()).filter(|i| bits >> i & 1 == 1).map(|i| rest[i]).collect();
                    let want = msep_by_paths(&a, &[x], &[y], &z);
                    let got = m_separated(&g, &names(&g, &[x]), &names(&g, &[y]), &names(&g, &z)).unwrap();
                    assert_eq!(got, want, "{g:?} x={x} y={y} z={z:?}");
                }
            }
        }
    }
}

#[test]
fn agrees_with_path_enumeration_for_set_queries_on_cut_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for g in corpus(300, 13) {
        let n = g.len();
        for _ in 0..30 {
            let (x, y, z) = random_query(n, &mut rng);
            let cut: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.3)).collect();
            let h = match rng.random_range(0..3) {
                0 => g.clone(),
                1 => g.cut_incoming(&names(&g, &cut)).unwrap(),
                _ => g.cut_outgoing(&names(&g, &cut)).unwrap(),
            };
            let want = msep_by_paths(&Arcs::of(&h), &x, &y, &z);
            let got = m_separated(&h, &names(&h, &x), &names(&h, &y), &names(&h, &z)).unwrap();
            assert_eq!(got, want, "{h:?} x={x:?} y={y:?} z={z:?}");
        }
    }
}

#[test]
fn latent_projection_preserves_separation() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for g in corpus(200, 15) {
        let dag = latent_projection_dag(&g).base;
        assert_eq!(dag.num_bidirected(), 0);
        for _ in 0..30 {
            let (x, y, z) = random_query(g.len(), &mut rng);
            let (xs, ys, zs) = (names(&g, &x), names(&g, &y), names(&g, &z));
            assert_eq!(
                m_separated(&g, &xs, &ys, &zs).unwrap(),
                m_separated(&dag, &xs, &ys, &zs).unwrap(),
                "{g:?} {xs} {ys} {zs}"
            );
        }
    }
}
