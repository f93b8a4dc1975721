//! The finite approximation bound in action: the expected product of
//! empirical masses approaches the joint probability at rate C(k,2)/n, and
//! the exact gap never exceeds the bound.
//!
//! Run with: cargo run -p finetti --example df_gap_bound

use finetti::definetti::df_gap;
use finetti::measures::Dist;
use finetti::models::{FiniteMixture, Model, PolyaUrn};
use finetti::rational::{rat, to_f64};

fn main() -> finetti::Result<()> {
    let mixture = Model::Mixture(FiniteMixture::new(vec![
        (rat(1, 2), Dist::new(vec![rat(4, 5), rat(1, 5)])?),
        (rat(1, 2), Dist::new(vec![rat(1, 5), rat(4, 5)])?),
    ])?);
    let b = mixture.alphabet().singleton(1)?;
    let pair = [b.clone(), b.clone()];

    println!("mixture, events ({{1}}, {{1}}): E[mu_n^2] vs P(X_1 = X_2 = 1) = 17/50");
    println!(
        "{:>6} {:>14} {:>12} {:>10} {:>8}",
        "n", "moment", "gap", "bound", "holds"
    );
    for n in [2u64, 5, 10, 20, 50, 100, 1000] {
        let r = df_gap(&mixture, n, &pair)?;
        println!(
            "{n:>6} {:>14} {:>12} {:>10} {:>8}",
            r.empirical_moment.to_string(),
            r.gap.to_string(),
            r.bound.to_string(),
            r.holds
        );
    }

    // The bound is exact-arithmetic sharp on the scaled gap: n * gap is
    // constant for this mixture (the variance of the mixing measure).
    let g10 = df_gap(&mixture, 10, &pair)?.gap;
    let g1000 = df_gap(&mixture, 1000, &pair)?.gap;
    println!("\nn * gap at n = 10:   {}", g10 * rat(10, 1));
    println!("n * gap at n = 1000: {}", g1000 * rat(1000, 1));

    // Higher-order tuples on an urn: the gap stays within C(k,2)/n too.
    let urn = Model::Polya(PolyaUrn::new(vec![2, 3])?);
    let c = urn.alphabet().singleton(0)?;
    println!("\nurn (2,3), repeated event {{0}}, n = 30:");
    for k in 2..=4usize {
        let tuple = vec![c.clone(); k];
        let r = df_gap(&urn, 30, &tuple)?;
        println!(
            "  k = {k}: |gap| = {:<12.6} bound = {:<8.4} holds = {}",
            to_f64(&r.gap).abs(),
            to_f64(&r.bound),
            r.holds
        );
    }
    Ok(())
}
