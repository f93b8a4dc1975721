//! The law of the empirical measure as a point cloud on the simplex, and its
//! moment convergence to the mixing measure at rate 1/n.
//!
//! Run with: cargo run -p finetti --example pushforward_convergence

use finetti::ensemble::{convergence_sweep, moment_discrepancy, pushforward_ensemble};
use finetti::measures::Dist;
use finetti::models::{FiniteMixture, Model, PolyaUrn};
use finetti::rational::rat;

fn main() -> finetti::Result<()> {
    let urn = Model::Polya(PolyaUrn::new(vec![1, 1])?);
    let c = urn.alphabet().singleton(1)?;

    // At n = 3 the urn's empirical mass of {1} is uniform on {0, 1/3, 2/3, 1}.
    let e = pushforward_ensemble(&urn, 3, std::slice::from_ref(&c))?;
    println!("urn(1,1) pushforward at n = 3:");
    for (point, mass) in e.support() {
        println!(
            "  mu({{1}}) = {:<4} with mass {}",
            point[0].to_string(),
            mass
        );
    }

    // Its polynomial expectations approach the uniform moments 1/(k+1).
    println!("\nsecond moment under the ensemble vs under the mixing measure:");
    for n in [3u64, 6, 12, 24, 48] {
        let e = pushforward_ensemble(&urn, n, std::slice::from_ref(&c))?;
        let second = e.poly_expectation(&[2])?;
        println!(
            "  n = {n:<3} E_ensemble[x^2] = {:<10} (uniform gives 1/3, off by {:.5})",
            second.to_string(),
            (second.to_f64() - 1.0 / 3.0).abs()
        );
    }
    let e = pushforward_ensemble(&urn, 12, std::slice::from_ref(&c))?;
    println!(
        "max discrepancy up to degree 4 at n = 12: {}",
        moment_discrepancy(&e, &urn, 4)?
    );

    // A sweep shows the 1/n rate: discrepancy * n stays constant.
    let mixture = Model::Mixture(FiniteMixture::new(vec![
        (rat(1, 2), Dist::new(vec![rat(4, 5), rat(1, 5)])?),
        (rat(1, 2), Dist::new(vec![rat(1, 5), rat(4, 5)])?),
    ])?);
    let c = mixture.alphabet().singleton(1)?;
    let sweep = convergence_sweep(&mixture, &[c], &[10, 20, 40, 80, 160], 2)?;
    println!("\ntwo-coin mixture, degree-2 sweep:");
    println!(
        "{:>6} {:>12} {:>8} {:>10}",
        "n", "discrepancy", "bound", "n * disc"
    );
    for row in &sweep.rows {
        println!(
            "{:>6} {:>12} {:>8} {:>10}",
            row.n,
            row.discrepancy.to_string(),
            row.bound.to_string(),
            (&row.discrepancy * rat(row.n as i64, 1)).to_string()
        );
    }
    println!("largest scaled discrepancy: {}", sweep.max_scaled);

    // Concentration: how many support points carry all but epsilon of the
    // mass. The mixture's ensemble piles up near 1/5 and 4/5, so few points
    // suffice even though the support has n + 1 points.
    let e = pushforward_ensemble(&mixture, 40, &[mixture.alphabet().singleton(1)?])?;
    println!(
        "\nmixture ensemble at n = 40: support size {}",
        e.support().len()
    );
    for den in [10i64, 100, 1000] {
        let count = e.concentration_profile(&rat(1, den))?;
        println!("  points covering 1 - 1/{den} of the mass: {count}");
    }
    Ok(())
}
