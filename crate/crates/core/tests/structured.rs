mod common;

use common::{dot, generic_increasing, pv, sparse_subsets, subset_point};
use diffpoly::enumeration::{polytope, PolytopeConfig};
use diffpoly::geometry::{extreme_points, Witness};
use diffpoly::optimize::{energy, gardner_limit, monotone_extremal_check, optimize_over, Method, Objective};
use diffpoly::rational::int;
use diffpoly::structured::{
    class_representatives, commutation_classes, counts_table_csv, kn_extreme_points, pn_polytope, Permutation,
};
use diffpoly::DiffusionGraph;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn total_classes(n: usize) -> usize {
    Permutation::all(n).iter().map(|p| commutation_classes(p).len()).sum()
}

#[test]
fn three_site_vertices_match_commutation_classes() {
    let mut rng = StdRng::seed_from_u64(31);
    for _ in 0..10 {
        let rho = pv(generic_increasing(&mut rng, 3));
        assert_eq!(kn_extreme_points(&rho).unwrap().vertices.len(), total_classes(3));
    }
}

/// Four sites have 43 commutation classes but some class points fall inside the
/// hull of the others, so the vertex count is smaller and depends on the start.
#[test]
fn four_site_vertices_come_from_classes() {
    assert_eq!(total_classes(4), 43);
    assert_eq!(class_representatives(4).len(), 43);
    let mut rng = StdRng::seed_from_u64(32);
    let k4 = DiffusionGraph::complete(4).unwrap();
    for _ in 0..2 {
        let rho = pv(generic_increasing(&mut rng, 4));
        let k = kn_extreme_points(&rho).unwrap();
        assert_eq!(k.candidates, 43);
        assert!(k.vertices.len() < 43);
        let r = polytope(&k4, &rho, &PolytopeConfig::for_graph(&k4)).unwrap();
        let mut ours: Vec<_> = k.vertices.iter().map(|s| s.point.clone()).collect();
        ours.sort();
        assert_eq!(ours, r.points());
    }
}

#[test]
fn every_subset_point_is_extreme() {
    let mut rng = StdRng::seed_from_u64(33);
    for n in 3..=6 {
        let rho = generic_increasing(&mut rng, n);
        let points: Vec<_> = (0u32..1 << (n - 1))
            .map(|mask| {
                let a: Vec<usize> = (1..n).filter(|b| mask >> (b - 1) & 1 == 1).collect();
                pv(subset_point(&rho, &a))
            })
            .collect();
        for cert in extreme_points(&points).unwrap() {
            assert!(cert.is_extreme, "n={n}: {} is a combination", cert.point);
            let Witness::Separating { functional, threshold } = &cert.witness else {
                panic!()
            };
            assert!(dot(functional, cert.point.components()) > *threshold);
            for q in points.iter().filter(|q| **q != cert.point) {
                assert!(dot(functional, q.components()) <= *threshold);
            }
        }
    }
}

#[test]
fn inherited_vertices_are_the_sparse_subsets() {
    let mut rng = StdRng::seed_from_u64(34);
    for n in 3..=7 {
        let p = pn_polytope(&pv(generic_increasing(&mut rng, n))).unwrap();
        let sparse = p
            .subsets
            .iter()
            .filter(|a| a.windows(2).all(|w| w[1] > w[0] + 1))
            .count();
        let expected: usize = (0..=n as u32 / 2).map(|k| sparse_subsets(n, k)).sum();
        assert_eq!(sparse, expected);
        assert_eq!(p.generic_count, 1 << (n - 1));
    }
}

#[test]
fn counts_table() {
    let csv = counts_table_csv(8).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,A0,A1,A2,A3,A4,total,fibonacci");
    assert!(lines.contains(&"5,1,4,3,0,0,8,8"));
    assert!(lines.contains(&"8,1,7,15,10,1,34,34"));
}

#[test]
fn energy_ordering_across_graphs() {
    let mut rng = StdRng::seed_from_u64(35);
    let w = Objective::new((1..=4).map(int).collect()).unwrap();
    let graphs = [
        (DiffusionGraph::complete(4).unwrap(), Method::Structured),
        (DiffusionGraph::cycle(4).unwrap(), Method::Enumerate),
        (DiffusionGraph::path(4).unwrap(), Method::Structured),
    ];
    for _ in 0..3 {
        let rho = pv(generic_increasing(&mut rng, 4));
        let bound = gardner_limit(&w, &rho).unwrap();
        let start = energy(&w, &rho).unwrap();
        let mut previous = bound.clone();
        for (g, method) in &graphs {
            let r = optimize_over(g, &rho, &w, *method).unwrap();
            assert!(r.optimal_energy >= previous, "{g}");
            assert!(r.optimal_energy <= start);
            previous = r.optimal_energy.clone();
            for vert in &r.optimal_vertices {
                assert_eq!(energy(&w, &vert.point).unwrap(), r.optimal_energy);
                assert!(
                    monotone_extremal_check(g, &vert.sequence, &w, &rho).unwrap(),
                    "{g}: {}",
                    vert.sequence
                );
            }
        }
    }
}
