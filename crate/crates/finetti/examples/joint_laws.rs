//! Exact joint laws of the three model families, and the permutation test
//! that tells exchangeable models apart from a skewed joint table.
//!
//! Run with: cargo run -p finetti --example joint_laws

use std::collections::BTreeMap;

use finetti::measures::{Alphabet, Dist, Event};
use finetti::models::{FiniteMixture, JointTable, Model, PolyaUrn};
use finetti::rational::rat;

fn main() -> finetti::Result<()> {
    // A mixture of two biased coins: draw one of them once, then flip it iid.
    let mixture = Model::Mixture(FiniteMixture::new(vec![
        (rat(1, 2), Dist::new(vec![rat(4, 5), rat(1, 5)])?),
        (rat(1, 2), Dist::new(vec![rat(1, 5), rat(4, 5)])?),
    ])?);

    // A two-color urn starting from one ball of each color.
    let urn = Model::Polya(PolyaUrn::new(vec![1, 1])?);

    // An explicit two-step law that favors (1, 0) over (0, 1).
    let alphabet = Alphabet::new(2)?;
    let table = Model::Table(JointTable::new(
        alphabet,
        2,
        BTreeMap::from([
            (vec![0, 0], rat(1, 4)),
            (vec![0, 1], rat(1, 10)),
            (vec![1, 0], rat(2, 5)),
            (vec![1, 1], rat(1, 4)),
        ]),
    )?);

    println!("prefix probabilities P(X_1 = 1, ..., X_k = 1):");
    for (name, model) in [("mixture", &mixture), ("urn", &urn)] {
        let row: Vec<String> = (1..=6)
            .map(|k| model.joint_prob(&vec![1; k]).unwrap().to_string())
            .collect();
        println!("  {name:8} {}", row.join("  "));
    }
    println!("  (the urn gives 1/(k+1): its mixing measure is uniform on [0,1])");

    // Joint probabilities of overlapping events.
    let ones = alphabet.singleton(1)?;
    let both = alphabet.full_event();
    let events: Vec<Event> = vec![ones.clone(), both, ones.clone()];
    println!("\nP(X_1 = 1, X_2 anything, X_3 = 1):");
    println!("  mixture  {}", mixture.joint_event_prob(&events)?);
    println!("  urn      {}", urn.joint_event_prob(&events)?);

    // Exchangeability: exact max deviation over permuted tuples.
    println!("\nexchangeability deviation of the 2-dimensional marginal:");
    for (name, model) in [("mixture", &mixture), ("urn", &urn), ("table", &table)] {
        println!("  {name:8} {}", model.exchangeability_deviation(2)?);
    }
    println!("  (the table is off by |P(1,0) - P(0,1)| = 3/10 and would be rejected");
    println!("   by every operation that assumes exchangeability)");
    Ok(())
}
