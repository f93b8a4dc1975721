//! Shared model fleet and brute-force oracles for the integration suites.
//!
//! Each suite uses its own subset of these helpers.
#![allow(dead_code)]

use finetti::measures::{Dist, Event};
use finetti::models::{FiniteMixture, Model, PolyaUrn};
use finetti::rational::{rat, Rational};
use num::{One, Zero};

/// Six exchangeable models: three mixtures (one degenerate), one iid, two
/// Pólya urns, over alphabets of size 2 and 3.
pub fn fleet() -> Vec<(&'static str, Model)> {
    vec![
        (
            "iid fair coin",
            Model::Mixture(FiniteMixture::iid(
                Dist::new(vec![rat(1, 2), rat(1, 2)]).unwrap(),
            )),
        ),
        (
            "two-coin mixture",
            Model::Mixture(
                FiniteMixture::new(vec![
                    (rat(1, 2), Dist::new(vec![rat(4, 5), rat(1, 5)]).unwrap()),
                    (rat(1, 2), Dist::new(vec![rat(1, 5), rat(4, 5)]).unwrap()),
                ])
                .unwrap(),
            ),
        ),
        (
            "degenerate mixture",
            Model::Mixture(
                FiniteMixture::new(vec![
                    (rat(1, 2), Dist::new(vec![rat(1, 1), rat(0, 1)]).unwrap()),
                    (rat(1, 2), Dist::new(vec![rat(0, 1), rat(1, 1)]).unwrap()),
                ])
                .unwrap(),
            ),
        ),
        (
            "three-state mixture",
            Model::Mixture(
                FiniteMixture::new(vec![
                    (
                        rat(1, 3),
                        Dist::new(vec![rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap(),
                    ),
                    (
                        rat(2, 3),
                        Dist::new(vec![rat(1, 10), rat(3, 10), rat(3, 5)]).unwrap(),
                    ),
                ])
                .unwrap(),
            ),
        ),
        (
            "urn (1,1)",
            Model::Polya(PolyaUrn::new(vec![1, 1]).unwrap()),
        ),
        (
            "urn (2,3,1)",
            Model::Polya(PolyaUrn::new(vec![2, 3, 1]).unwrap()),
        ),
    ]
}

/// All nonempty events over the model's alphabet, in mask order.
pub fn event_pool(model: &Model) -> Vec<Event> {
    let alphabet = model.alphabet();
    let s = alphabet.size();
    (1..(1usize << s))
        .map(|mask| Event::new(alphabet, (0..s).filter(|&st| mask & (1 << st) != 0)).unwrap())
        .collect()
}

/// A fixed pool of ten deterministic event tuples of length `k`.
pub fn tuple_pool(model: &Model, k: usize) -> Vec<Vec<Event>> {
    let pool = event_pool(model);
    (0..10)
        .map(|t| {
            (0..k)
                .map(|j| pool[(3 * t + 5 * j + t * j + 1) % pool.len()].clone())
                .collect()
        })
        .collect()
}

/// Brute-force urn prefix probability by multiplying draw-by-draw odds.
pub fn urn_path_prob(counts: &[u64], states: &[usize]) -> Rational {
    let mut counts = counts.to_vec();
    let mut p = Rational::one();
    for &s in states {
        let total: u64 = counts.iter().sum();
        p *= rat(counts[s] as i64, total as i64);
        counts[s] += 1;
    }
    p
}

/// Brute-force joint event probability by enumerating the Cartesian product
/// of member states.
pub fn enumerate_event_prob(model: &Model, events: &[Event]) -> Rational {
    let mut total = Rational::zero();
    let mut choice = vec![0usize; events.len()];
    loop {
        let states: Vec<usize> = events
            .iter()
            .zip(&choice)
            .map(|(e, &c)| e.members()[c])
            .collect();
        total += model.joint_prob(&states).unwrap().into_ratio();
        let mut i = events.len();
        loop {
            if i == 0 {
                return total;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < events[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}
