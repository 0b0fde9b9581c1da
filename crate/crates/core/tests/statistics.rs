//! Monte Carlo checks of the samplers and experiment harness against
//! independent exact values.

use rayon::prelude::*;

use hyperlab::branching::{sample_process, tally_distance, ValueTally};
use hyperlab::butterfly::{count_labelled_copies, rooted_value};
use hyperlab::mclab::{chi_square_binomial, run, sweep, ExperimentSpec, Statistic, Tolerances};
use hyperlab::rng::SplitMix64;
use hyperlab::sampler::{potential_edges, sample_with};
use hyperlab::{Family, Hypergraph, ValueDistribution};

#[test]
fn edge_counts_are_binomial() {
    for (n, d, p) in [(12, 1, 0.3), (25, 2, 0.01)] {
        let counts: Vec<u64> = (0..4000)
            .map(|t| sample_with(d, n, p, &mut SplitMix64::for_trial(5, t)).unwrap().edge_count() as u64)
            .collect();
        let total = potential_edges(n, d).unwrap() as u64;
        let fit = chi_square_binomial(&counts, total, p);
        assert!(fit.p_value > 1e-3, "n={n} d={d}: {fit:?}");
    }
}

#[test]
fn every_potential_edge_is_equally_likely() {
    // d = 1, n = 6: 15 potential edges, each present with probability p
    let (n, p, trials) = (6, 0.2, 20_000u64);
    let mut hits = [0u64; 15];
    for t in 0..trials {
        let h = sample_with(1, n, p, &mut SplitMix64::for_trial(8, t)).unwrap();
        for e in h.edges() {
            hits[hyperlab::sampler::rank(e, n, 1).unwrap() as usize] += 1;
        }
    }
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    for (r, &h) in hits.iter().enumerate() {
        let f = h as f64 / trials as f64;
        assert!((f - p).abs() < 4.5 * se, "edge {r}: {f}");
    }
}

#[test]
fn branching_root_degree_has_poisson_mean() {
    let (d, mu) = (2, 1.3);
    let samples = 100_000u64;
    let level_one: u64 = (0..samples)
        .into_par_iter()
        .map(|t| {
            let h = sample_process(d, 1, mu, &mut SplitMix64::for_trial(3, t)).unwrap();
            (h.n() - 1) as u64
        })
        .sum();
    let mean = level_one as f64 / samples as f64;
    // μ·d vertices per level, variance μ·d²
    let se = (mu * (d * d) as f64 / samples as f64).sqrt();
    assert!((mean - mu * d as f64).abs() < 4.0 * se, "{mean}");
}

fn empirical_tv(d: usize, r: u32, s: u8, mu: f64, samples: u64) -> f64 {
    let mut dist = ValueDistribution::exact(d, r, s, mu).unwrap();
    let mut tally = ValueTally::default();
    for t in 0..samples {
        let h = sample_process(d, r, mu, &mut SplitMix64::for_trial(17, t)).unwrap();
        tally.add(rooted_value(&h, 0, r, dist.table_mut()));
    }
    tally_distance(&tally, &dist)
}

#[test]
fn branching_process_converges_to_exact_law() {
    for (d, mu) in [(1, 1.0), (2, 0.75)] {
        let tv = empirical_tv(d, 2, 2, mu, 1_000_000);
        assert!(tv < 0.02, "d={d}: tv {tv}");
    }
}

#[test]
fn exact_law_sums_to_one_and_matches_samples() {
    let dist = ValueDistribution::exact(2, 2, 2, 1.5).unwrap();
    assert!((dist.total_mass() - 1.0).abs() < 1e-9);
    // the support is large, so the empirical TV carries a bias of about 0.01
    let tv = empirical_tv(2, 2, 2, 1.5, 1_000_000);
    assert!(tv < 0.02, "tv {tv}");
}

fn spec(family: &str, n: u64, trials: u64, statistics: Vec<Statistic>) -> ExperimentSpec {
    ExperimentSpec { family: family.into(), n: vec![n], trials, seed: 4242, statistics, tolerances: Tolerances::default() }
}

#[test]
fn triangle_cored_components_at_the_double_jump() {
    let n = 10_000u64;
    let report = run(&spec("dj:d=1,lambda=1", n, 3000, vec![Statistic::UnicyclicCycle { edges: 3 }])).unwrap();
    let s = &report.points[0].statistics[0];
    // expected triangles: C(n,3) p^3 via the labelled-copy count of K_3
    let triangle = Hypergraph::build(1, 3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
    let copies = count_labelled_copies(&triangle).unwrap() as f64;
    let p = 1.0 / n as f64;
    let expected = (n as f64) * (n - 1) as f64 * (n - 2) as f64 / 6.0 * copies * p.powi(3);
    assert!((expected - 1.0 / 6.0).abs() < 1e-3);
    assert!((s.predicted_finite.unwrap() - expected).abs() < 1e-9);
    assert!((s.mean - expected).abs() < 4.0 * s.std_error, "{} ± {}", s.mean, s.std_error);
}

#[test]
fn connectivity_sweep_is_monotone() {
    let template: Family = "lw:d=1,c=1".parse().unwrap();
    let grid = [0.25, 0.5, 1.0, 2.0, 4.0];
    let rows = sweep(&template, "c", &grid, &spec("lw:d=1,c=1", 2000, 300, vec![Statistic::Connected])).unwrap();
    assert_eq!(rows.len(), grid.len());
    for w in rows.windows(2) {
        let slack = 3.0 * (w[0].std_error.powi(2) + w[1].std_error.powi(2)).sqrt() + 1e-9;
        assert!(w[1].estimate + slack >= w[0].estimate, "{rows:?}");
    }
    assert_eq!(rows[0].estimate, 0.0);
    assert!(rows[4].estimate > 0.95);
}

#[test]
fn serial_and_parallel_reports_agree() {
    let s = spec(
        "fw:d=1,vstar=2,l=1,c=0",
        800,
        50,
        vec![Statistic::FullyMarked { l: 1 }, Statistic::Dl { l: 1 }, Statistic::MuBoundViolation { l: 1 }],
    );
    let a = hyperlab::mclab::run_with_threads(&s, 1).unwrap();
    let b = hyperlab::mclab::run_with_threads(&s, 3).unwrap();
    assert_eq!(serde_json::to_vec(&a).unwrap(), serde_json::to_vec(&b).unwrap());
}
