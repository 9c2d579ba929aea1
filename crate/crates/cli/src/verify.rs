//! Built-in verification suites. Each check prints one line.

use std::collections::BTreeSet;
use std::time::Instant;

use clap::ValueEnum;
use diffpoly::enumeration::{polytope, triangle_decomposition, PolytopeConfig, VertexKind};
use diffpoly::optimize::{optimize_over, Method, Objective};
use diffpoly::presets::exp_proxy;
use diffpoly::rational::{int, Rational};
use diffpoly::structured::{
    a2_closed_form, binomial, count_commuting_subsets, fibonacci, fibonacci_nonlocal_count, kn_extreme_points,
    pn_polytope, subset_decomposition, triangular, DecompositionCase, KnReference,
};
use diffpoly::{apply_sequence, AveragingOp, DiffusionGraph, OperationSequence, PopulationVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    K3,
    P3,
    Pn,
    Counts,
    C4,
    Decomposition,
    Triangle,
    Energy,
    All,
}

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

type Outcome = Result<(bool, String), diffpoly::Error>;

fn check(out: &mut Vec<Check>, name: impl Into<String>, f: impl FnOnce() -> Outcome) {
    let name = name.into();
    let start = Instant::now();
    let (pass, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let line = Check {
        name,
        pass,
        detail: format!("{detail} [{:.2?}]", start.elapsed()),
    };
    println!(
        "{:<4}  {:<34}  {}",
        if line.pass { "PASS" } else { "FAIL" },
        line.name,
        line.detail
    );
    out.push(line);
}

fn pv(s: &str) -> PopulationVector {
    PopulationVector::parse(s).expect("literal")
}

fn seq(ops: &[(usize, usize)]) -> OperationSequence {
    OperationSequence(ops.iter().map(|&(i, j)| AveragingOp::pair(i, j)).collect())
}

fn block_seq(ops: &[&[usize]]) -> OperationSequence {
    OperationSequence(
        ops.iter()
            .map(|s| {
                if s.len() == 2 {
                    AveragingOp::pair(s[0], s[1])
                } else {
                    AveragingOp::block(s.iter().copied())
                }
            })
            .collect(),
    )
}

fn sorted(points: impl IntoIterator<Item = PopulationVector>) -> Vec<PopulationVector> {
    let set: BTreeSet<PopulationVector> = points.into_iter().collect();
    set.into_iter().collect()
}

/// Strictly increasing normalized vector from distinct random integers.
pub fn random_generic(rng: &mut StdRng, n: usize) -> PopulationVector {
    let mut values = BTreeSet::new();
    while values.len() < n {
        values.insert(rng.gen_range(1..=1000i64));
    }
    PopulationVector::normalized(values.into_iter().map(int).collect()).expect("positive weights")
}

fn k3(out: &mut Vec<Check>) {
    let rho = pv("0,2/7,5/7");
    let k3 = DiffusionGraph::complete(3).expect("graph");
    let listed = [
        vec![],
        vec![(1, 2)],
        vec![(2, 3)],
        vec![(1, 2), (1, 3)],
        vec![(2, 3), (1, 3)],
        vec![(1, 2), (1, 3), (2, 3)],
        vec![(2, 3), (1, 3), (1, 2)],
    ];
    let expected = || -> Result<Vec<PopulationVector>, diffpoly::Error> {
        Ok(sorted(
            listed
                .iter()
                .map(|s| apply_sequence(&k3, &seq(s), &rho))
                .collect::<Result<Vec<_>, _>>()?,
        ))
    };
    check(out, "k3: enumeration", || {
        let r = polytope(&k3, &rho, &PolytopeConfig::for_graph(&k3))?;
        Ok((
            sorted(r.points()) == expected()?,
            format!("{} vertices", r.vertices.len()),
        ))
    });
    check(out, "k3: reduced-word construction", || {
        let k = kn_extreme_points(&rho)?;
        let pts = sorted(k.vertices.into_iter().map(|s| s.point));
        Ok((pts == expected()?, format!("{} vertices", pts.len())))
    });
}

/// Name, edges, finite sequences reaching the listed vertices.
type P3Case = (&'static str, [(usize, usize); 2], Vec<Vec<(usize, usize)>>);

fn p3(out: &mut Vec<Check>) {
    let rho = pv("0,2/7,5/7");
    let bar = PopulationVector::uniform(3);
    let cases: [P3Case; 3] = [
        (
            "p3 (a) B12,B23",
            [(1, 2), (2, 3)],
            vec![vec![], vec![(1, 2)], vec![(2, 3)]],
        ),
        (
            "p3 (b) B12,B13",
            [(1, 2), (1, 3)],
            vec![vec![], vec![(1, 2)], vec![(1, 2), (1, 3)]],
        ),
        (
            "p3 (c) B13,B23",
            [(1, 3), (2, 3)],
            vec![
                vec![],
                vec![(1, 3)],
                vec![(2, 3)],
                vec![(1, 3), (2, 3)],
                vec![(2, 3), (1, 3)],
            ],
        ),
    ];
    for (idx, (name, edges, finite)) in cases.into_iter().enumerate() {
        let bar = bar.clone();
        let rho = rho.clone();
        check(out, name, move || {
            let g = DiffusionGraph::new(3, edges)?;
            let r = polytope(&g, &rho, &PolytopeConfig::for_graph(&g))?;
            let mut expected: Vec<PopulationVector> = finite
                .iter()
                .map(|s| apply_sequence(&g, &seq(s), &rho))
                .collect::<Result<_, _>>()?;
            if idx < 2 {
                expected.push(bar.clone());
            }
            let mut ok = sorted(r.points()) == sorted(expected);
            if idx < 2 {
                ok &= r.find(&bar).and_then(|v| v.kind) == Some(VertexKind::Asymptotic);
            } else {
                for s in [vec![(1, 3)], vec![(1, 3), (2, 3)]] {
                    let p = apply_sequence(&g, &seq(&s), &rho)?;
                    ok &= r.find(&p).and_then(|v| v.kind) == Some(VertexKind::LocalFinite);
                }
            }
            Ok((ok, format!("{} vertices", r.vertices.len())))
        });
    }
}

fn pn(out: &mut Vec<Check>, max_n: usize, rng: &mut StdRng) {
    for n in 3..=max_n {
        let rho = random_generic(rng, n);
        check(out, format!("pn n={n}: hypercube"), || {
            let p = pn_polytope(&rho)?;
            let count_ok = p.result.vertices.len() == 1 << (n - 1);
            let edges = p.edges()?;
            let mut degree = vec![0usize; p.result.vertices.len()];
            let mut flips_ok = true;
            for &(i, j) in &edges {
                degree[i] += 1;
                degree[j] += 1;
                let a: BTreeSet<_> = p.subsets[i].iter().collect();
                let b: BTreeSet<_> = p.subsets[j].iter().collect();
                flips_ok &= a.symmetric_difference(&b).count() == 1;
            }
            let degree_ok = degree.iter().all(|&d| d == n - 1);
            Ok((
                count_ok && flips_ok && degree_ok,
                format!("{} vertices, {} edges", p.result.vertices.len(), edges.len()),
            ))
        });
        if n <= 5 {
            check(out, format!("pn n={n}: matches enumeration"), || {
                let g = DiffusionGraph::path(n)?;
                let r = polytope(&g, &rho, &PolytopeConfig::for_graph(&g))?;
                let p = pn_polytope(&rho)?;
                Ok((
                    sorted(r.points()) == sorted(p.result.points()),
                    r.completeness.to_string(),
                ))
            });
        }
        check(out, format!("pn n={n}: four-point witnesses"), || {
            decompositions_hold(&rho)
        });
    }
}

fn decompositions_hold(rho: &PopulationVector) -> Outcome {
    let n = rho.dim();
    let mut count = 0;
    let mut ok = true;
    for mask in 0u32..1 << (n - 1) {
        let a: Vec<usize> = (1..n).filter(|b| mask >> (b - 1) & 1 == 1).collect();
        for i in (1..n).filter(|i| !a.contains(i)) {
            let w = subset_decomposition(&a, i, rho)?;
            ok &= w.verify();
            if w.case == DecompositionCase::General {
                ok &= w.internals.as_ref().is_some_and(|x| x.window_holds());
            }
            count += 1;
        }
    }
    Ok((ok, format!("{count} decompositions")))
}

fn counts(out: &mut Vec<Check>, max_n: usize, rng: &mut StdRng) {
    check(out, format!("counts: Fibonacci n=3..{max_n}"), || {
        let mut ok = true;
        for n in 3..=max_n as u64 {
            ok &= fibonacci_nonlocal_count(n)? == fibonacci(n + 1);
            for k in 0..=n / 2 {
                let brute = (0u64..1 << (n - 1))
                    .filter(|m| m.count_ones() as u64 == k && m & (m >> 1) == 0)
                    .count() as u128;
                ok &= count_commuting_subsets(n, k)? == brute;
            }
        }
        Ok((ok, String::new()))
    });
    check(out, "counts: A2 = T(n-3), n=3..12", || {
        let ok = (3..=12u64).all(|n| a2_closed_form(n) == triangular(n - 3) && binomial(n - 2, 2) == triangular(n - 3));
        Ok((ok, String::new()))
    });
    for n in 3..=max_n.min(6) {
        let rho = random_generic(rng, n);
        check(out, format!("counts n={n}: classified nonlocal"), || {
            let reference = KnReference::new(&rho)?;
            let p = pn_polytope(&rho)?;
            let mut nonlocal = 0u128;
            let mut ok = true;
            for v in &p.result.vertices {
                let is_kn = reference.is_vertex(&v.point)?;
                nonlocal += u128::from(is_kn);
                ok &= is_kn == (v.kind == Some(VertexKind::Nonlocal));
            }
            Ok((
                ok && nonlocal == fibonacci(n as u64 + 1),
                format!("{nonlocal} nonlocal"),
            ))
        });
    }
}

/// C4 extreme points: (column, sequence).
pub fn table_one() -> Vec<(usize, OperationSequence)> {
    let rows: [(usize, &[&[usize]]); 18] = [
        (0, &[]),
        (0, &[&[1, 2]]),
        (0, &[&[2, 3]]),
        (0, &[&[3, 4]]),
        (0, &[&[1, 2], &[3, 4]]),
        (0, &[&[1, 2], &[3, 4], &[1, 4]]),
        (1, &[&[1, 2, 3]]),
        (1, &[&[2, 3, 4]]),
        (2, &[&[1, 2, 3], &[1, 4]]),
        (2, &[&[2, 3, 4], &[1, 4]]),
        (2, &[&[1, 2, 3], &[1, 2, 4]]),
        (2, &[&[2, 3, 4], &[1, 3, 4]]),
        (2, &[&[1, 2], &[3, 4], &[1, 3, 4]]),
        (2, &[&[1, 2], &[3, 4], &[1, 2, 4]]),
        (2, &[&[2, 3, 4], &[1, 4], &[1, 2]]),
        (2, &[&[1, 2, 3], &[1, 4], &[2, 3, 4]]),
        (2, &[&[2, 3, 4], &[1, 4], &[1, 2, 3]]),
        (2, &[&[1, 2, 3], &[2, 3], &[1, 4], &[3, 4]]),
    ];
    rows.iter().map(|(c, s)| (*c, block_seq(s))).collect()
}

/// The table is exact for reversal-symmetric starts (rho_i + rho_{5-i} constant);
/// other increasing starts pick up one or two further vertices.
fn c4(out: &mut Vec<Check>) {
    let rho = pv("1/10,2/10,3/10,4/10");
    check(out, "c4: table of 18", || {
        let c4 = DiffusionGraph::cycle(4)?;
        let r = polytope(&c4, &rho, &PolytopeConfig::for_graph(&c4))?;
        let table: Vec<(usize, PopulationVector)> = table_one()
            .into_iter()
            .map(|(c, s)| apply_sequence(&c4, &s, &rho).map(|p| (c, p)))
            .collect::<Result<_, _>>()?;
        let same = sorted(r.points()) == sorted(table.iter().map(|(_, p)| p.clone()));
        let kn = KnReference::new(&rho)?;
        let p4 = pn_polytope(&rho)?;
        let mut columns = [0usize; 3];
        let mut columns_ok = true;
        for (c, p) in &table {
            let col = if kn.is_vertex(p)? {
                0
            } else if p4.result.find(p).is_some() {
                1
            } else {
                2
            };
            columns[col] += 1;
            columns_ok &= col == *c;
        }
        Ok((
            same && columns_ok && columns == [6, 2, 10],
            format!("{} vertices, columns {:?}", r.vertices.len(), columns),
        ))
    });
}

fn decomposition(out: &mut Vec<Check>, max_n: usize, rng: &mut StdRng, trials: usize) {
    for n in 3..=max_n {
        let rhos: Vec<PopulationVector> = (0..trials).map(|_| random_generic(rng, n)).collect();
        check(out, format!("decomposition n={n}: {trials} starts"), || {
            let mut ok = true;
            let mut total = 0;
            for rho in &rhos {
                let (pass, _) = decompositions_hold(rho)?;
                ok &= pass;
                total += 1;
            }
            Ok((ok, format!("{total} starts")))
        });
    }
}

fn random_triple(rng: &mut StdRng) -> (Rational, Rational, Rational) {
    loop {
        let a: i64 = rng.gen_range(0..500);
        let b: i64 = rng.gen_range(0..500);
        let c: i64 = rng.gen_range(0..500);
        if a < b && b < c {
            let s = a + b + c;
            return (
                Rational::new(a.into(), s.into()),
                Rational::new(b.into(), s.into()),
                Rational::new(c.into(), s.into()),
            );
        }
    }
}

fn triangle(out: &mut Vec<Check>, rng: &mut StdRng) {
    let triples: Vec<_> = (0..1000).map(|_| random_triple(rng)).collect();
    check(out, "triangle: 1000 identities", || {
        let mut ok = true;
        for (a, b, c) in &triples {
            ok &= triangle_decomposition(a, b, c).is_ok();
        }
        Ok((ok, String::new()))
    });
    for n in [3, 4] {
        let rho = random_generic(rng, n);
        check(out, format!("triangle: pruning safe on K{n}"), || {
            let g = DiffusionGraph::complete(n)?;
            let mut cfg = PolytopeConfig::for_graph(&g);
            cfg.classify = false;
            cfg.triangle_prune = false;
            let full = polytope(&g, &rho, &cfg)?;
            cfg.triangle_prune = true;
            let pruned = polytope(&g, &rho, &cfg)?;
            Ok((
                full.points() == pruned.points(),
                format!("{} vertices", full.vertices.len()),
            ))
        });
    }
}

fn energy_comparison(out: &mut Vec<Check>) {
    let rho = match exp_proxy(4) {
        Ok(r) => r,
        Err(e) => {
            check(out, "energy", || Err(e));
            return;
        }
    };
    let w = Objective::new((1..=4).map(int).collect()).expect("weights");
    let runs = [
        ("complete:4", Method::Structured, 68.0),
        ("cycle:4", Method::Enumerate, 63.0),
        ("path:4", Method::Structured, 50.0),
    ];
    for (spec, method, target) in runs {
        let rho = rho.clone();
        let w = w.clone();
        check(out, format!("energy: {spec}"), move || {
            let g = DiffusionGraph::from_builder_spec(spec)?;
            let r = optimize_over(&g, &rho, &w, method)?;
            let pct = diffpoly::rational::to_f64(&r.recovered_fraction) * 100.0;
            let mut ok = (pct - target).abs() <= 1.0;
            if spec == "path:4" {
                ok &= r.optimal_vertices.len() == 1 && r.optimal_vertex().point == PopulationVector::uniform(4);
            }
            Ok((ok, format!("{}%", r.recovered_percent)))
        });
    }
}

/// Runs the suite, printing one line per check. Returns whether all passed.
pub fn run(suite: Suite, n: Option<usize>, seed: u64) -> Result<bool, Failure> {
    if let Some(n) = n {
        if !(3..=12).contains(&n) {
            return Err(Failure::Input(format!("--n {n} outside 3..=12")));
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::K3 {
        k3(&mut out);
    }
    if all || suite == Suite::P3 {
        p3(&mut out);
    }
    if all || suite == Suite::Pn {
        pn(&mut out, n.unwrap_or(5).min(7), &mut rng);
    }
    if all || suite == Suite::Counts {
        counts(&mut out, n.unwrap_or(8), &mut rng);
    }
    if all || suite == Suite::C4 {
        c4(&mut out);
    }
    if all || suite == Suite::Decomposition {
        decomposition(&mut out, n.unwrap_or(5).min(6), &mut rng, 5);
    }
    if all || suite == Suite::Triangle {
        triangle(&mut out, &mut rng);
    }
    if all || suite == Suite::Energy {
        energy_comparison(&mut out);
    }
    let failed = out.iter().filter(|c| !c.pass).count();
    println!("{} checks, {} failed", out.len(), failed);
    Ok(failed == 0)
}
