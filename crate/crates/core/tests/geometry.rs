mod common;

use common::{combine, dot, random_vector};
use diffpoly::geometry::{extreme_points, is_in_hull, minimize, vertices, Witness};
use diffpoly::rational::{int, rat};
use diffpoly::{PopulationVector, Rational};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn cloud(rng: &mut StdRng, n: usize, size: usize) -> Vec<PopulationVector> {
    (0..size)
        .map(|_| PopulationVector::new(random_vector(rng, n, 12)).unwrap())
        .collect()
}

/// Checks a witness by substitution, without the library's verifier.
fn witness_holds(p: &PopulationVector, others: &[PopulationVector], inside: bool, w: &Witness) -> bool {
    match (inside, w) {
        (true, Witness::Combination { terms }) => {
            let parts: Vec<_> = terms
                .iter()
                .map(|t| (t.weight.clone(), t.point.components().to_vec()))
                .collect();
            terms
                .iter()
                .all(|t| t.weight >= Rational::zero() && others.contains(&t.point))
                && terms.iter().map(|t| t.weight.clone()).sum::<Rational>() == int(1)
                && combine(&parts) == p.components()
        }
        (false, Witness::Separating { functional, threshold }) => {
            dot(functional, p.components()) > *threshold
                && others.iter().all(|q| dot(functional, q.components()) <= *threshold)
        }
        _ => false,
    }
}

#[test]
fn membership_witnesses_are_sound() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..300 {
        let n = rng.gen_range(2..=5);
        let size = rng.gen_range(1..12);
        let members = cloud(&mut rng, n, size);
        let p = PopulationVector::new(random_vector(&mut rng, n, 12)).unwrap();
        let m = is_in_hull(&p, &members).unwrap();
        assert!(witness_holds(&p, &members, m.inside, m.witness.as_ref().unwrap()));
    }
}

#[test]
fn large_member_sets_agree_with_witnesses() {
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..10 {
        let members = cloud(&mut rng, 5, 150);
        let p = PopulationVector::new(random_vector(&mut rng, 5, 12)).unwrap();
        let m = is_in_hull(&p, &members).unwrap();
        assert!(witness_holds(&p, &members, m.inside, m.witness.as_ref().unwrap()));
    }
}

#[test]
fn certificates_are_sound() {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..100 {
        let n = rng.gen_range(2..=4);
        let pts = cloud(&mut rng, n, 10);
        for cert in extreme_points(&pts).unwrap() {
            let others: Vec<_> = pts.iter().filter(|q| **q != cert.point).cloned().collect();
            assert!(witness_holds(&cert.point, &others, !cert.is_extreme, &cert.witness));
        }
    }
}

#[test]
fn vertex_set_ignores_order_and_duplicates() {
    let mut rng = StdRng::seed_from_u64(10);
    for _ in 0..100 {
        let pts = cloud(&mut rng, 3, 9);
        let base = vertices(&pts).unwrap();
        let mut shuffled = pts.clone();
        shuffled.extend(pts.iter().take(4).cloned());
        for k in (1..shuffled.len()).rev() {
            shuffled.swap(k, rng.gen_range(0..=k));
        }
        assert_eq!(vertices(&shuffled).unwrap(), base);
    }
}

#[test]
fn minimum_is_attained_at_a_vertex() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..20 {
        let pts = cloud(&mut rng, 4, 8);
        let w: Vec<Rational> = (0..4).map(|_| int(rng.gen_range(-5..=5))).collect();
        let best = minimize(&w, &pts).unwrap();
        let by_hand = pts.iter().map(|p| dot(&w, p.components())).min().unwrap();
        assert_eq!(best.value, by_hand);
        for _ in 0..100 {
            let raw: Vec<i64> = (0..pts.len()).map(|_| rng.gen_range(0..10)).collect();
            let total: i64 = raw.iter().sum::<i64>().max(1);
            let mix: Vec<_> = raw
                .iter()
                .zip(&pts)
                .map(|(&x, p)| (rat(x, total), p.components().to_vec()))
                .collect();
            if raw.iter().sum::<i64>() > 0 {
                assert!(dot(&w, &combine(&mix)) >= best.value);
            }
        }
    }
}
