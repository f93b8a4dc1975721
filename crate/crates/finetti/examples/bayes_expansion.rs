//! Conditioning on occupancy counts: the conditional law of a pattern given
//! counts is pure combinatorics, and expanding over the count-vector law
//! reproduces the joint probability (and, with powers in place of the
//! conditional law, the empirical product moment) exactly.
//!
//! Run with: cargo run -p finetti --example bayes_expansion

use finetti::definetti::{bayes_expansion_check, conditional_law_given_counts, tail_mass};
use finetti::measures::Dist;
use finetti::models::{FiniteMixture, Model, PolyaUrn};
use finetti::rational::rat;

fn main() -> finetti::Result<()> {
    // Given 2 of 4 samples in a class, the chance the first two samples are
    // both in it: (2/4)(1/3) = 1/6. No model enters this computation.
    let v = conditional_law_given_counts(4, &[2], &[2])?;
    println!("P(first two in class | 2 of 4 in class)        = {v}");
    let v = conditional_law_given_counts(5, &[2, 1], &[1, 1])?;
    println!("P(1st in C1, 2nd in C2 | counts (2,1) of 5)    = {v}");
    let v = conditional_law_given_counts(3, &[1], &[2])?;
    println!("P(first two in class | only 1 of 3 in class)   = {v} (impossible)");

    // The two expansions over the count law, cross-checked exactly.
    let coin = Model::Mixture(FiniteMixture::iid(Dist::new(vec![rat(1, 2), rat(1, 2)])?));
    let urn = Model::Polya(PolyaUrn::new(vec![1, 1])?);
    println!("\nexpansions over the count-vector law (pattern: class {{1}} twice, N = 8):");
    for (name, model) in [("iid coin", &coin), ("urn(1,1)", &urn)] {
        let b = model.alphabet().singleton(1)?;
        let check = bayes_expansion_check(model, 8, &[b], &[2])?;
        println!("  {name}:");
        println!(
            "    sum_t P(pattern|Y=t) P(Y=t) = {:<8} = joint probability?   {}",
            check.lhs.to_string(),
            check.lhs_matches_joint
        );
        println!(
            "    sum_t (t/N)^2      P(Y=t) = {:<8} = empirical moment?    {}",
            check.rhs.to_string(),
            check.rhs_matches_moment
        );
    }
    println!("  (the two sums differ by O(1/N); each matches its own closed form exactly)");

    // Tail mass: how much probability sits on count vectors with a starved
    // class. This is what makes the two expansions close: starved classes
    // carry negligible weight in both.
    println!("\ntail mass P(some class count <= m), urn(1,1), N = 12:");
    let b = urn.alphabet().singleton(1)?;
    for m in [0u64, 1, 2, 3] {
        let t = tail_mass(&urn, 12, std::slice::from_ref(&b), m)?;
        println!("  m = {m}: {t}");
    }
    Ok(())
}
