mod common;

use common::{average, c4_table, components, dot, generic_increasing, random_vector, run, v};
use diffpoly::enumeration::{polytope, Completeness, PolytopeConfig, VertexKind};
use diffpoly::ops::{block_sweep, spread_over};
use diffpoly::rational::{int, rat};
use diffpoly::{DiffusionGraph, PopulationVector, Rational};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn pv(values: Vec<Rational>) -> PopulationVector {
    PopulationVector::new(values).unwrap()
}

/// Every connected labeled graph on `n` vertices that contains a triangle.
fn graphs_with_triangles(n: usize) -> Vec<DiffusionGraph> {
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    (1u32..1 << pairs.len())
        .filter_map(|mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, e)| *e)
                .collect();
            let g = DiffusionGraph::new(n, edges).ok()?;
            let triangle = (1..=n).any(|a| {
                (a + 1..=n).any(|b| (b + 1..=n).any(|c| g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c)))
            });
            triangle.then_some(g)
        })
        .collect()
}

#[test]
fn pruning_preserves_vertices_on_small_graphs() {
    let mut rng = StdRng::seed_from_u64(21);
    for n in [3, 4] {
        let graphs = graphs_with_triangles(n);
        assert!(!graphs.is_empty());
        for g in graphs {
            let rho = pv(random_vector(&mut rng, n, 40));
            let mut cfg = PolytopeConfig::for_graph(&g);
            cfg.classify = false;
            cfg.triangle_prune = false;
            let full = polytope(&g, &rho, &cfg).unwrap();
            cfg.triangle_prune = true;
            let pruned = polytope(&g, &rho, &cfg).unwrap();
            assert_eq!(full.points(), pruned.points(), "{g} from {rho}");
        }
    }
}

#[test]
fn sweeps_converge_to_block_values() {
    let mut rng = StdRng::seed_from_u64(22);
    let cases: Vec<(DiffusionGraph, Vec<usize>)> = vec![
        (DiffusionGraph::path(3).unwrap(), vec![1, 2, 3]),
        (DiffusionGraph::complete(3).unwrap(), vec![1, 2, 3]),
        (DiffusionGraph::path(4).unwrap(), vec![2, 3, 4]),
        (DiffusionGraph::cycle(4).unwrap(), vec![1, 2, 4]),
        (DiffusionGraph::new(4, [(1, 2), (1, 3), (1, 4)]).unwrap(), vec![2, 1, 4]),
        (DiffusionGraph::path(4).unwrap(), vec![1, 2, 3, 4]),
        (DiffusionGraph::cycle(4).unwrap(), vec![1, 2, 3, 4]),
    ];
    let bound = rat(1, 1i64 << 50);
    for (g, block) in cases {
        let pass = block_sweep(&g, &block).unwrap();
        for _ in 0..20 {
            let rho = random_vector(&mut rng, g.n(), 100);
            let target = average(&rho, &block);
            let initial = spread_over(&pv(rho.clone()), &block);
            let mut state = rho.clone();
            // One pass per extra vertex beyond three keeps the same bound.
            for _ in 0..50 * (block.len() - 2) {
                state = pass.ops().iter().fold(state, |s, op| average(&s, &op.support()));
            }
            for &i in &block {
                let gap = &state[i - 1] - &target[i - 1];
                let gap = if gap < int(0) { -gap } else { gap };
                assert!(gap <= &bound * &initial, "{g} block {block:?}");
            }
        }
    }
}

#[test]
fn uniform_start_is_the_only_vertex() {
    let k4 = DiffusionGraph::complete(4).unwrap();
    let r = polytope(&k4, &PopulationVector::uniform(4), &PolytopeConfig::for_graph(&k4)).unwrap();
    assert_eq!(r.vertices.len(), 1);
    assert_eq!(r.completeness, Completeness::Proven);
}

#[test]
fn complete_graph_vertices_use_short_pair_sequences() {
    let mut rng = StdRng::seed_from_u64(23);
    for n in [3, 4] {
        let g = DiffusionGraph::complete(n).unwrap();
        let rho = generic_increasing(&mut rng, n);
        let r = polytope(&g, &pv(rho.clone()), &PolytopeConfig::for_graph(&g)).unwrap();
        for vert in &r.vertices {
            assert!(!vert.sequence.contains_block());
            assert!(vert.sequence.len() <= n * (n - 1) / 2);
            let ops: Vec<Vec<usize>> = vert.sequence.ops().iter().map(|o| o.support()).collect();
            let refs: Vec<&[usize]> = ops.iter().map(|o| o.as_slice()).collect();
            assert_eq!(run(&rho, &refs).as_slice(), vert.point.components());
            assert_eq!(vert.kind, Some(VertexKind::Nonlocal));
        }
    }
}

#[test]
fn cycle_table_is_exact_for_symmetric_starts() {
    let c4 = DiffusionGraph::cycle(4).unwrap();
    for w in [[1, 2, 3, 4], [131, 319, 681, 869], [15, 239, 761, 985]] {
        let total: i64 = w.iter().sum();
        let rho: Vec<Rational> = w.iter().map(|&x| rat(x, total)).collect();
        let r = polytope(&c4, &pv(rho.clone()), &PolytopeConfig::for_graph(&c4)).unwrap();
        let table = c4_table().into_iter().map(|(_, ops)| run(&rho, &ops)).collect();
        assert_eq!(components(&r.points()), table);
    }
}

/// From (1,2,4,8)/15 the point reached by B12 then B14 lies strictly below every
/// table point in the direction rho_2 − rho_1, so the table hull misses part of
/// the polytope.
#[test]
fn cycle_table_is_incomplete_for_asymmetric_starts() {
    let rho = v(&[(1, 15), (2, 15), (4, 15), (8, 15)]);
    let escaped = run(&rho, &[&[1, 2], &[1, 4]]);
    assert_eq!(escaped, v(&[(19, 60), (1, 10), (4, 15), (19, 60)]));
    let f = [int(-1), int(1), int(0), int(0)];
    let table_min = c4_table()
        .into_iter()
        .map(|(_, ops)| dot(&f, &run(&rho, &ops)))
        .min()
        .unwrap();
    assert_eq!(table_min, rat(-1, 5));
    assert_eq!(dot(&f, &escaped), rat(-13, 60));

    let c4 = DiffusionGraph::cycle(4).unwrap();
    let r = polytope(&c4, &pv(rho), &PolytopeConfig::for_graph(&c4)).unwrap();
    assert_eq!(r.vertices.len(), 20);
    assert_eq!(r.find(&pv(escaped)).and_then(|x| x.kind), Some(VertexKind::LocalFinite));
}

#[test]
fn shallow_search_is_depth_bounded() {
    let p3 = DiffusionGraph::path(3).unwrap();
    let rho = PopulationVector::parse("0,2/7,5/7").unwrap();
    let mut cfg = PolytopeConfig::for_graph(&p3);
    cfg.use_blocks = false;
    cfg.max_depth = 2;
    let r = polytope(&p3, &rho, &cfg).unwrap();
    assert_eq!(r.completeness, Completeness::DepthBounded);
}
