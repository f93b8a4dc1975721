//! From a model to its mixing measure and back: extract exact moments,
//! validate them as a Hausdorff moment sequence, then recover the mixing
//! measure — exactly (atomic, Prony) and on a grid (nonnegative least
//! squares).
//!
//! Run with: cargo run -p finetti --example moment_recovery

use finetti::measures::Dist;
use finetti::models::{FiniteMixture, Model, PolyaUrn};
use finetti::rational::{rat, Rational};
use finetti::recovery::{
    check_complete_monotonicity, moments_from_model, recover_atoms_prony, recover_mixing_grid,
    DEFAULT_GRID_MAX_ITERS, DEFAULT_GRID_SIZE, DEFAULT_GRID_TOL,
};

fn main() -> finetti::Result<()> {
    // The two-coin mixture puts mass 1/2 at p = 1/5 and 1/2 at p = 4/5.
    let mixture = Model::Mixture(FiniteMixture::new(vec![
        (rat(1, 2), Dist::new(vec![rat(4, 5), rat(1, 5)])?),
        (rat(1, 2), Dist::new(vec![rat(1, 5), rat(4, 5)])?),
    ])?);
    let c = mixture.alphabet().singleton(1)?;
    let table = moments_from_model(&mixture, std::slice::from_ref(&c), 4)?;
    let moments = table.one_dimensional().expect("single-class partition");
    println!("mixture moments m_k = E[mu({{1}})^k]: {}", join(&moments));

    let cm = check_complete_monotonicity(&moments)?;
    println!("completely monotone: {}", cm.ok);

    // Exact atomic recovery: two atoms suffice, and they are the component
    // masses of {1} with the mixture weights.
    let atomic = recover_atoms_prony(&moments, 2)?;
    println!(
        "Prony recovery: atoms ({:.10}, {:.10}) weights ({:.10}, {:.10})",
        atomic.atoms[0], atomic.atoms[1], atomic.weights[0], atomic.weights[1]
    );

    // Asking for more atoms than the measure has is detected exactly.
    let point_moments: Vec<Rational> = (0..4usize).map(|k| num::pow::pow(rat(1, 2), k)).collect();
    match recover_atoms_prony(&point_moments, 2) {
        Err(e) => println!("point-mass moments with r = 2: {e}"),
        Ok(_) => unreachable!("rank deficiency must be detected"),
    }

    // Grid recovery of the uniform mixing measure (the urn's): moments
    // 1/(k+1) matched by nonnegative weights on a 101-point grid.
    let urn = Model::Polya(PolyaUrn::new(vec![1, 1])?);
    let c = urn.alphabet().singleton(1)?;
    let urn_moments = moments_from_model(&urn, &[c], 8)?
        .one_dimensional()
        .expect("single-class partition");
    println!("\nurn moments: {}", join(&urn_moments));
    let grid = recover_mixing_grid(
        &urn_moments,
        DEFAULT_GRID_SIZE,
        DEFAULT_GRID_TOL,
        DEFAULT_GRID_MAX_ITERS,
    )?;
    let support: Vec<(f64, f64)> = grid
        .grid
        .iter()
        .zip(&grid.weights)
        .filter(|(_, &w)| w > 1e-12)
        .map(|(&p, &w)| (p, w))
        .collect();
    println!(
        "grid recovery: residual {:.3e} in {} iterations, {} support points",
        grid.residual,
        grid.iterations,
        support.len()
    );
    for (p, w) in support {
        println!("  p = {p:<6} w = {w:.6}");
    }
    println!("(moment match is the contract; many grid measures share these 8 moments)");
    Ok(())
}

fn join(moments: &[Rational]) -> String {
    moments
        .iter()
        .map(Rational::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}
