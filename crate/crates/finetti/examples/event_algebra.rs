//! Event algebra underneath everything: atoms of an event tuple, the
//! disjointified rewriting of a joint event, and the finite-additivity
//! identity it satisfies under any distribution.
//!
//! Run with: cargo run -p finetti --example event_algebra

use finetti::measures::{atoms_of, disjointify_event_tuple, Alphabet, Dist, Event};
use finetti::rational::{rat, Rational};

fn main() -> finetti::Result<()> {
    let alphabet = Alphabet::new(3)?;
    let b1 = Event::new(alphabet, [0, 1])?;
    let b2 = Event::new(alphabet, [1, 2])?;

    // The 2^k atoms: intersections of each event or its complement. Index by
    // inclusion mask; bit i set means "inside B_{i+1}".
    println!("atoms of B1 = {{0,1}}, B2 = {{1,2}} over {{0,1,2}}:");
    let atoms = atoms_of(&[b1.clone(), b2.clone()])?;
    for (mask, atom) in atoms.iter().enumerate() {
        println!("  mask {mask:02b} -> {:?}", atom.members());
    }

    // The joint event {X1 in B1, X2 in B2} as a disjoint union of tuples
    // whose entries are disjoint-or-equal atoms. Tuples hitting an empty
    // atom are dropped.
    let tuples = disjointify_event_tuple(&[b1.clone(), b2.clone()])?;
    println!("\ndisjointified tuples for (B1, B2):");
    for t in &tuples {
        let parts: Vec<String> = t.iter().map(|e| format!("{:?}", e.members())).collect();
        println!("  ({})", parts.join(", "));
    }

    // Finite additivity: for any distribution, summing the product of atom
    // masses over the tuples reproduces the product of event masses exactly.
    let d = Dist::new(vec![rat(1, 6), rat(1, 3), rat(1, 2)])?;
    let product = d.prob(&b1)?.into_ratio() * d.prob(&b2)?.into_ratio();
    let rebuilt: Rational = tuples
        .iter()
        .map(|t| {
            t.iter()
                .map(|e| d.prob(e).unwrap().into_ratio())
                .product::<Rational>()
        })
        .sum();
    println!("\nunder d = (1/6, 1/3, 1/2):");
    println!("  d(B1) d(B2)              = {product}");
    println!("  sum over tuples of prods = {rebuilt}");
    assert_eq!(product, rebuilt);

    // Equal events collapse to a single tuple; their overlap is themselves.
    let ones = alphabet.singleton(1)?;
    let equal = disjointify_event_tuple(&[ones.clone(), ones])?;
    println!(
        "\n(B, B) with B = {{1}} disjointifies to {} tuple(s)",
        equal.len()
    );
    Ok(())
}
