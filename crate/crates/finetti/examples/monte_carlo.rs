//! Statistical approximation of a joint probability: average the products of
//! empirical masses over many independent experiments. The estimator is a
//! pure function of the seed — worker threads change wall time, not bits.
//!
//! Run with: cargo run -p finetti --release --example monte_carlo

use finetti::definetti::{empirical_product_moment_exact, mc_joint_estimate_with_workers};
use finetti::measures::Dist;
use finetti::models::{FiniteMixture, Model};
use finetti::rational::rat;

fn main() -> finetti::Result<()> {
    let mixture = Model::Mixture(FiniteMixture::new(vec![
        (rat(1, 2), Dist::new(vec![rat(4, 5), rat(1, 5)])?),
        (rat(1, 2), Dist::new(vec![rat(1, 5), rat(4, 5)])?),
    ])?);
    let b = mixture.alphabet().singleton(1)?;
    let events = [b.clone(), b.clone()];

    let n = 200;
    let reps = 50_000;
    // What the estimator converges to is E[mu_n(B)^2], not the joint
    // probability itself; the difference is the O(1/n) approximation gap.
    let target = empirical_product_moment_exact(&mixture, n as u64, &events)?;
    println!(
        "exact E[mu_{n}({{1}})^2] = {target} = {:.6}",
        target.to_f64()
    );
    println!(
        "joint P(X_1 = X_2 = 1) = {}",
        mixture.joint_event_prob(&events)?
    );

    println!("\nestimates over {reps} experiments of {n} draws:");
    for seed in 0..3u64 {
        let est = mc_joint_estimate_with_workers(&mixture, n, reps, &events, seed, 4)?;
        println!(
            "  seed {seed}: estimate = {:.6}  std error = {:.6}  |error| = {:.6}",
            est.estimate,
            est.std_error,
            (est.estimate - target.to_f64()).abs()
        );
    }

    println!("\nworker invariance at seed 0:");
    let reference = mc_joint_estimate_with_workers(&mixture, n, reps, &events, 0, 1)?;
    for workers in [1usize, 2, 4, 8] {
        let est = mc_joint_estimate_with_workers(&mixture, n, reps, &events, 0, workers)?;
        println!(
            "  {workers} worker(s): {:.17}  bit-identical: {}",
            est.estimate,
            est.estimate.to_bits() == reference.estimate.to_bits()
        );
    }
    Ok(())
}
