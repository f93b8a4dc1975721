//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with: cargo test -p finetti --test acceptance -- --nocapture

mod common;

use std::time::Instant;

use common::{enumerate_event_prob, fleet, tuple_pool, urn_path_prob};
use finetti::definetti::{
    bayes_expansion_check, conditional_law_given_counts, df_bound, df_gap,
    empirical_product_moment_exact, mc_joint_estimate_with_workers, MomentExpansion,
};
use finetti::ensemble::convergence_sweep;
use finetti::error::Error;
use finetti::measures::{Alphabet, Event};
use finetti::models::{JointTable, Model, PolyaUrn};
use finetti::rational::{rat, Rational};
use finetti::recovery::{recover_atoms_prony, recover_mixing_grid};
use num::{One, Signed, Zero};

fn pass(criterion: usize, name: &str, started: Instant, checks: usize) {
    println!(
        "[acceptance] criterion {criterion} ({name}): PASS in {:.2}s ({checks} checks)",
        started.elapsed().as_secs_f64()
    );
}

/// Criterion 1: the approximation bound holds with exact rational comparison
/// over the whole fleet, n in 2..=50, k in {2,3,4}, ten event tuples per k.
#[test]
fn criterion_1_df_bound_suite() {
    let started = Instant::now();
    let mut checks = 0usize;
    for (name, model) in fleet() {
        for k in [2usize, 3, 4] {
            for events in tuple_pool(&model, k) {
                let joint = model.joint_event_prob(&events).unwrap().into_ratio();
                let expansion = MomentExpansion::new(&model, &events).unwrap();
                for n in 2..=50u64 {
                    let moment = expansion.evaluate(n).unwrap().into_ratio();
                    let gap = (&moment - &joint).abs();
                    let bound = df_bound(k, n);
                    assert!(
                        gap <= bound,
                        "bound violated: {name}, k={k}, n={n}, gap {gap} > {bound}"
                    );
                    checks += 1;
                }
            }
        }
    }
    assert_eq!(checks, 6 * 3 * 10 * 49);
    pass(1, "DF bound suite", started, checks);
}

/// Partitions of size 1..=3 over the model's alphabet (as far as it allows).
fn partitions_for(model: &Model) -> Vec<Vec<Event>> {
    let a = model.alphabet();
    let single = |s: usize| a.singleton(s).unwrap();
    let mut out = vec![vec![single(1)]];
    out.push(vec![single(0), single(1)]);
    if a.size() >= 3 {
        out.push(vec![single(0), single(1), single(2)]);
    }
    out
}

/// Multiplicity vectors of the partition's length with total in 1..=4.
fn multiplicity_vectors(classes: usize) -> Vec<Vec<u64>> {
    finetti::comb::vectors_summing_at_most(classes, 4)
        .into_iter()
        .filter(|v| v.iter().sum::<u64>() >= 1)
        .collect()
}

/// Criterion 2: the Bayes expansion reproduces the joint probability and the
/// expectation expansion reproduces the empirical moment, exactly.
#[test]
fn criterion_2_bayes_expansion_identity() {
    let started = Instant::now();
    let mut checks = 0usize;
    for (name, model) in fleet() {
        for partition in partitions_for(&model) {
            let vectors = multiplicity_vectors(partition.len());
            for n in 2..=12u64 {
                let counts = model.count_distribution(n, &partition).unwrap();
                for mults in &vectors {
                    let k: u64 = mults.iter().sum();
                    if k > n {
                        continue;
                    }
                    let mut lhs = Rational::zero();
                    let mut rhs = Rational::zero();
                    for (t, mass) in counts.entries() {
                        let cond = conditional_law_given_counts(n, t, mults).unwrap();
                        lhs += cond.ratio() * mass.ratio();
                        let mut factor = Rational::one();
                        for (&ti, &ki) in t.iter().zip(mults) {
                            if ki > 0 {
                                factor *= num::pow::pow(rat(ti as i64, n as i64), ki as usize);
                            }
                        }
                        rhs += factor * mass.ratio();
                    }
                    let pattern: Vec<Event> = partition
                        .iter()
                        .zip(mults)
                        .flat_map(|(e, &ki)| std::iter::repeat_n(e.clone(), ki as usize))
                        .collect();
                    let joint = model.joint_event_prob(&pattern).unwrap().into_ratio();
                    let moment = empirical_product_moment_exact(&model, n, &pattern)
                        .unwrap()
                        .into_ratio();
                    assert_eq!(lhs, joint, "{name}: lhs != joint at n={n}, k={mults:?}");
                    assert_eq!(rhs, moment, "{name}: rhs != moment at n={n}, k={mults:?}");
                    checks += 1;
                    // Exercise the public operation on the small patterns.
                    if k <= 2 {
                        let check = bayes_expansion_check(&model, n, &partition, mults).unwrap();
                        assert!(check.equal(), "{name}: op cross-check failed");
                    }
                }
            }
        }
    }
    pass(2, "Bayes-expansion identity", started, checks);
}

/// Criterion 3: the conditional law matches brute-force enumeration of all
/// ordered placements of class labels, for every count/multiplicity
/// combination with N <= 6.
#[test]
fn criterion_3_conditional_law_oracle() {
    let started = Instant::now();
    let mut checks = 0usize;
    for classes in 1usize..=3 {
        for n in 1..=6u64 {
            for mults in finetti::comb::vectors_summing_at_most(classes, n) {
                // Tally, per count vector, total placements and placements
                // whose prefix realizes the pattern (k_1 labels of class 0,
                // then k_2 of class 1, ...).
                let labels = classes + 1; // last label is the residual
                let mut totals: std::collections::BTreeMap<Vec<u64>, (u64, u64)> =
                    Default::default();
                let mut seq = vec![0usize; n as usize];
                'outer: loop {
                    let mut counts = vec![0u64; classes];
                    for &l in &seq {
                        if l < classes {
                            counts[l] += 1;
                        }
                    }
                    let mut pos = 0usize;
                    let mut matches = true;
                    for (class, &ki) in mults.iter().enumerate() {
                        for _ in 0..ki {
                            if seq[pos] != class {
                                matches = false;
                            }
                            pos += 1;
                        }
                    }
                    let entry = totals.entry(counts).or_insert((0, 0));
                    entry.0 += 1;
                    if matches {
                        entry.1 += 1;
                    }
                    let mut i = seq.len();
                    loop {
                        if i == 0 {
                            break 'outer;
                        }
                        i -= 1;
                        seq[i] += 1;
                        if seq[i] < labels {
                            break;
                        }
                        seq[i] = 0;
                    }
                }
                for (t, (total, favorable)) in totals {
                    let oracle = rat(favorable as i64, total as i64);
                    let got = conditional_law_given_counts(n, &t, &mults).unwrap();
                    assert_eq!(*got.ratio(), oracle, "N={n}, t={t:?}, k={mults:?}");
                    checks += 1;
                }
            }
        }
    }
    // Spot values from the closed form.
    assert_eq!(
        *conditional_law_given_counts(4, &[2], &[2]).unwrap().ratio(),
        rat(1, 6)
    );
    assert_eq!(
        *conditional_law_given_counts(5, &[2, 1], &[1, 1])
            .unwrap()
            .ratio(),
        rat(1, 10)
    );
    pass(3, "conditional-law oracle", started, checks + 2);
}

/// Criterion 4: the balanced urn's closed forms, cross-checked against path
/// enumeration.
#[test]
fn criterion_4_urn_closed_forms() {
    let started = Instant::now();
    let urn = Model::Polya(PolyaUrn::new(vec![1, 1]).unwrap());
    let mut checks = 0usize;
    for k in 1..=6usize {
        let ones = vec![1usize; k];
        let direct = urn.joint_prob(&ones).unwrap().into_ratio();
        assert_eq!(direct, rat(1, k as i64 + 1), "all-ones at k={k}");
        assert_eq!(
            direct,
            urn_path_prob(&[1, 1], &ones),
            "path oracle at k={k}"
        );
        checks += 2;
    }
    let c = urn.alphabet().singleton(1).unwrap();
    let table = finetti::recovery::moments_from_model(&urn, &[c], 6).unwrap();
    let moments = table.one_dimensional().unwrap();
    let expected: Vec<Rational> = (1..=7).map(|d| rat(1, d)).collect();
    assert_eq!(moments, expected, "urn moments");
    checks += 1;
    pass(4, "urn closed forms", started, checks);
}

/// Criterion 5: Prony recovery round-trips the two-atom mixture within 1e-9
/// and flags the degenerate Hankel system.
#[test]
fn criterion_5_prony_round_trip() {
    let started = Instant::now();
    let moments = vec![rat(1, 1), rat(1, 2), rat(17, 50), rat(13, 50)];
    let atomic = recover_atoms_prony(&moments, 2).unwrap();
    assert!((atomic.atoms[0] - 0.2).abs() < 1e-9);
    assert!((atomic.atoms[1] - 0.8).abs() < 1e-9);
    assert!((atomic.weights[0] - 0.5).abs() < 1e-9);
    assert!((atomic.weights[1] - 0.5).abs() < 1e-9);
    let degenerate = vec![rat(1, 1), rat(1, 2), rat(1, 4), rat(1, 8)];
    assert!(matches!(
        recover_atoms_prony(&degenerate, 2),
        Err(Error::RankDeficient { order: 2 })
    ));
    pass(5, "Prony round-trip", started, 5);
}

/// Criterion 6: grid recovery of the uniform-measure moments hits every
/// moment within 1e-6 and returns a valid simplex point.
#[test]
fn criterion_6_grid_recovery() {
    let started = Instant::now();
    let moments: Vec<Rational> = (0..=8).map(|k| rat(1, k + 1)).collect();
    let grid = recover_mixing_grid(&moments, 101, 1e-12, 100_000).unwrap();
    assert!(grid.residual < 1e-6, "residual {}", grid.residual);
    for k in 1..=8usize {
        let fit: f64 = grid
            .grid
            .iter()
            .zip(&grid.weights)
            .map(|(&p, &w)| w * p.powi(k as i32))
            .sum();
        let target = 1.0 / (k as f64 + 1.0);
        assert!(
            (fit - target).abs() < 1e-6,
            "moment {k} off by {}",
            fit - target
        );
    }
    let total: f64 = grid.weights.iter().sum();
    assert!((total - 1.0).abs() <= 1e-12, "weights sum to {total}");
    assert!(grid.weights.iter().all(|&w| w >= 0.0));
    pass(6, "grid recovery", started, 11);
}

/// Criterion 7: the Monte-Carlo estimate lands within 0.01 of the exact
/// value 0.3408 and is byte-identical across 1, 4, and 8 workers.
#[test]
fn criterion_7_monte_carlo() {
    let started = Instant::now();
    let (_, mixture) = fleet().into_iter().nth(1).unwrap();
    let b = mixture.alphabet().singleton(1).unwrap();
    let events = [b.clone(), b];
    // Exact target: E[mu_200({1})^2] = 17/50 + (1/2 - 17/50)/200 = 0.3408.
    let exact = empirical_product_moment_exact(&mixture, 200, &events)
        .unwrap()
        .to_f64();
    assert_eq!(exact, 0.3408);
    let reference = mc_joint_estimate_with_workers(&mixture, 200, 50_000, &events, 0, 1).unwrap();
    assert!(
        (reference.estimate - 0.3408).abs() < 0.01,
        "estimate {} too far from 0.3408",
        reference.estimate
    );
    for workers in [4usize, 8] {
        let est =
            mc_joint_estimate_with_workers(&mixture, 200, 50_000, &events, 0, workers).unwrap();
        assert_eq!(
            est.estimate.to_bits(),
            reference.estimate.to_bits(),
            "estimate differs at {workers} workers"
        );
        assert_eq!(est.std_error.to_bits(), reference.std_error.to_bits());
    }
    pass(7, "Monte-Carlo estimate", started, 5);
}

/// Criterion 8: the convergence sweep of the two-coin mixture at degree 2
/// gives exactly (2/125, 1/125, 1/250, 1/500) with n * discrepancy = 4/25.
#[test]
fn criterion_8_convergence_sweep() {
    let started = Instant::now();
    let (_, mixture) = fleet().into_iter().nth(1).unwrap();
    let c = mixture.alphabet().singleton(1).unwrap();
    let sweep = convergence_sweep(&mixture, &[c], &[10, 20, 40, 80], 2).unwrap();
    let expected = [rat(2, 125), rat(1, 125), rat(1, 250), rat(1, 500)];
    for (row, want) in sweep.rows.iter().zip(&expected) {
        assert_eq!(&row.discrepancy, want, "discrepancy at n={}", row.n);
        assert!(
            row.discrepancy <= rat(1, row.n as i64),
            "discrepancy exceeds 1/n at n={}",
            row.n
        );
        assert_eq!(
            &row.discrepancy * rat(row.n as i64, 1),
            rat(4, 25),
            "scaled discrepancy at n={}",
            row.n
        );
    }
    assert_eq!(sweep.max_scaled, rat(4, 25));
    pass(8, "convergence sweep", started, 9);
}

/// Criterion 9: the skewed joint table reports deviation exactly 3/10 and is
/// rejected by the gap computation; every fleet model reports exactly zero
/// for k <= 4.
#[test]
fn criterion_9_exchangeability_detector() {
    let started = Instant::now();
    let a = Alphabet::new(2).unwrap();
    let table = Model::Table(
        JointTable::new(
            a,
            2,
            [
                (vec![0, 0], rat(1, 4)),
                (vec![0, 1], rat(1, 10)),
                (vec![1, 0], rat(2, 5)),
                (vec![1, 1], rat(1, 4)),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap(),
    );
    assert_eq!(table.exchangeability_deviation(2).unwrap(), rat(3, 10));
    let b = a.singleton(1).unwrap();
    assert!(matches!(
        df_gap(&table, 2, &[b.clone(), b]),
        Err(Error::NotExchangeable { .. })
    ));
    let mut checks = 2usize;
    for (name, model) in fleet() {
        for k in 1..=4usize {
            assert!(
                model.exchangeability_deviation(k).unwrap().is_zero(),
                "{name} deviates at k={k}"
            );
            checks += 1;
        }
    }
    pass(9, "exchangeability detector", started, checks);
}

/// The event-probability route agrees with raw Cartesian enumeration — a
/// cross-check of the urn's atom decomposition used throughout the suite.
#[test]
fn joint_event_prob_matches_enumeration_oracle() {
    let started = Instant::now();
    let mut checks = 0usize;
    for (name, model) in fleet() {
        for k in [2usize, 3] {
            for events in tuple_pool(&model, k) {
                assert_eq!(
                    model.joint_event_prob(&events).unwrap().into_ratio(),
                    enumerate_event_prob(&model, &events),
                    "{name}, tuple {events:?}"
                );
                checks += 1;
            }
        }
    }
    pass(0, "event-probability enumeration oracle", started, checks);
}
