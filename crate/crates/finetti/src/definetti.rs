//! Empirical measures, exact empirical product moments, the finite
//! approximation bound, conditional laws given counts, the Bayes-expansion
//! identity, tail-mass diagnostics, and the Monte-Carlo estimator.
//!
//! The central quantity is `E[mu_n(B_1) ... mu_n(B_k)]`, the expected product
//! of empirical masses over a sample of size `n`. Expanding the product over
//! sample positions and grouping position tuples by their collision pattern
//! (the set partition induced by equal indices) turns it into a finite sum
//! over set partitions: for an exchangeable model each pattern with `m`
//! blocks contributes `n(n-1)...(n-m+1)/n^k` times the joint probability of
//! the block-intersected events. The distance to the plain joint probability
//! `P(X_1 in B_1, ..., X_k in B_k)` is controlled by `C(k,2)/n`, because
//! tuples with a repeated index number at most `C(k,2) n^{k-1}`.

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::comb;
use crate::error::{Error, Result};
use crate::measures::{Alphabet, Event, Prob};
use crate::models::Model;
use crate::rational::Rational;

/// Cap on the tuple length for exact product moments (Bell(8) = 4140
/// collision patterns are enumerated).
pub const MAX_MOMENT_K: usize = 8;

/// Cap on the sample size of [`bayes_expansion_check`].
pub const MAX_BAYES_N: u64 = 16;

/// The empirical measure of a sample: mass `1/n` at each observed state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalMeasure {
    alphabet: Alphabet,
    counts: Vec<u64>,
    n: u64,
}

impl EmpiricalMeasure {
    /// Tallies a nonempty sample of states.
    pub fn from_sample(alphabet: Alphabet, sample: &[usize]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut counts = vec![0u64; alphabet.size()];
        for &s in sample {
            if s >= alphabet.size() {
                return Err(Error::StateOutOfRange {
                    state: s,
                    size: alphabet.size(),
                });
            }
            counts[s] += 1;
        }
        Ok(EmpiricalMeasure {
            alphabet,
            counts,
            n: sample.len() as u64,
        })
    }

    /// Sample size.
    pub fn len(&self) -> u64 {
        self.n
    }

    /// True when built from no observations (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Exact empirical mass of an event: the fraction of the sample in it.
    pub fn eval(&self, event: &Event) -> Result<Prob> {
        self.alphabet.check_matches(event.alphabet())?;
        let hits: u64 = event.members().iter().map(|&s| self.counts[s]).sum();
        Ok(Prob::from_exact(Rational::new(hits.into(), self.n.into())))
    }
}

/// Convenience wrapper: the empirical mass of `event` in `sample`.
pub fn empirical_eval(alphabet: Alphabet, sample: &[usize], event: &Event) -> Result<Prob> {
    EmpiricalMeasure::from_sample(alphabet, sample)?.eval(event)
}

/// The collision-pattern expansion of an empirical product moment for one
/// fixed event tuple, reusable across sample sizes.
///
/// `block_sums[m-1]` collects the joint probabilities of all patterns with
/// exactly `m` blocks, so evaluating at a sample size `n` only costs the
/// falling factorials.
#[derive(Debug, Clone)]
pub struct MomentExpansion {
    k: usize,
    block_sums: Vec<Rational>,
    // Joint tables define no law beyond their horizon, so empirical moments
    // of larger samples are meaningless for them.
    max_sample: Option<u64>,
}

impl MomentExpansion {
    /// Expands the moment of `events` under `model` over collision patterns.
    pub fn new(model: &Model, events: &[Event]) -> Result<Self> {
        let k = events.len();
        if k == 0 {
            return Err(Error::InvalidParameter(
                "event tuple must be nonempty".into(),
            ));
        }
        if k > MAX_MOMENT_K {
            return Err(Error::TooManyEvents {
                len: k,
                cap: MAX_MOMENT_K,
            });
        }
        // Collapsing a position tuple onto its distinct indices relies on
        // permutation invariance of the sequence law.
        model.require_exchangeable(k)?;
        let max_sample = match model {
            Model::Table(t) => Some(t.horizon() as u64),
            _ => None,
        };
        let mut block_sums = vec![Rational::zero(); k];
        for pattern in comb::set_partitions(k) {
            let m = comb::block_count(&pattern);
            let mut blocks: Vec<Event> = Vec::with_capacity(m);
            for b in 0..m {
                let mut it = (0..k).filter(|&i| pattern[i] == b);
                let first = it.next().expect("blocks are nonempty");
                let mut event = events[first].clone();
                for i in it {
                    event = event.intersect(&events[i])?;
                }
                blocks.push(event);
            }
            if blocks.iter().any(Event::is_empty) {
                continue; // impossible pattern, contributes zero
            }
            block_sums[m - 1] += model.joint_event_prob(&blocks)?.into_ratio();
        }
        Ok(MomentExpansion {
            k,
            block_sums,
            max_sample,
        })
    }

    /// Tuple length the expansion was built for.
    pub fn tuple_len(&self) -> usize {
        self.k
    }

    /// Exact `E[mu_n(B_1) ... mu_n(B_k)]` at sample size `n`.
    pub fn evaluate(&self, n: u64) -> Result<Prob> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "sample size must be at least 1".into(),
            ));
        }
        if let Some(max) = self.max_sample {
            if n > max {
                return Err(Error::HorizonExceeded {
                    horizon: max as usize,
                    requested: n as usize,
                });
            }
        }
        let mut total = Rational::zero();
        for (idx, sum) in self.block_sums.iter().enumerate() {
            let m = (idx + 1) as u64;
            if sum.is_zero() {
                continue;
            }
            total += Rational::from_integer(comb::falling(n, m)) * sum;
        }
        let tuples = Rational::from_integer(num::pow::pow(BigInt::from(n), self.k));
        Ok(Prob::from_exact(total / tuples))
    }
}

/// Exact expected product of empirical masses, `E[mu_n(B_1) ... mu_n(B_k)]`.
///
/// ```
/// use finetti::definetti::empirical_product_moment_exact;
/// use finetti::measures::Dist;
/// use finetti::models::{FiniteMixture, Model};
/// use finetti::rational::rat;
///
/// let coin = Model::Mixture(FiniteMixture::iid(
///     Dist::new(vec![rat(1, 2), rat(1, 2)]).unwrap(),
/// ));
/// let b = coin.alphabet().singleton(1).unwrap();
/// let moment = empirical_product_moment_exact(&coin, 10, &[b.clone(), b]).unwrap();
/// assert_eq!(*moment.ratio(), rat(11, 40)); // p^2 + p(1-p)/n
/// ```
pub fn empirical_product_moment_exact(model: &Model, n: u64, events: &[Event]) -> Result<Prob> {
    MomentExpansion::new(model, events)?.evaluate(n)
}

/// The finite approximation gap for one event tuple at one sample size,
/// together with the proof-backed bound `C(k,2)/n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfGapReport {
    /// Exact joint probability `P(X_1 in B_1, ..., X_k in B_k)`.
    pub joint: Prob,
    /// Exact empirical product moment `E[mu_n(B_1) ... mu_n(B_k)]`.
    pub empirical_moment: Prob,
    /// Signed difference `empirical_moment - joint`.
    pub gap: Rational,
    /// The bound `C(k,2)/n` (zero at `k = 1`, where the moment is exact).
    pub bound: Rational,
    /// Whether `|gap| <= bound`. True for every exchangeable model; a
    /// violation signals an implementation bug, not an interesting input.
    pub holds: bool,
}

/// The bound `C(k,2)/n` on the empirical-moment gap.
pub fn df_bound(k: usize, n: u64) -> Rational {
    Rational::new(comb::binomial(k as u64, 2), BigInt::from(n))
}

/// Compares the empirical product moment with the exact joint probability.
///
/// Rejects models that cannot be verified exchangeable, since the comparison
/// is meaningless without permutation invariance.
pub fn df_gap(model: &Model, n: u64, events: &[Event]) -> Result<DfGapReport> {
    model.require_exchangeable(events.len())?;
    let joint = model.joint_event_prob(events)?;
    let empirical_moment = empirical_product_moment_exact(model, n, events)?;
    let gap = empirical_moment.ratio() - joint.ratio();
    let bound = df_bound(events.len(), n);
    let holds = gap.abs() <= bound;
    Ok(DfGapReport {
        joint,
        empirical_moment,
        gap,
        bound,
        holds,
    })
}

/// Conditional probability of a disjointified pattern given the occupancy
/// counts of its classes: with `t_i` observations in class `i` and the
/// pattern asking for `k_i` of them,
/// `prod_i t_i!/(t_i - k_i)!  /  (N (N-1) ... (N-k+1))`,
/// and zero as soon as some class cannot supply its quota (`t_i < k_i`).
///
/// Pure combinatorics: no model enters, only exchangeability of positions.
pub fn conditional_law_given_counts(
    sample_size: u64,
    counts: &[u64],
    multiplicities: &[u64],
) -> Result<Prob> {
    if counts.len() != multiplicities.len() {
        return Err(Error::InvalidParameter(format!(
            "{} counts vs {} multiplicities",
            counts.len(),
            multiplicities.len()
        )));
    }
    let total: u64 = counts.iter().sum();
    if total > sample_size {
        return Err(Error::CountsExceedSampleSize { total, sample_size });
    }
    let k: u64 = multiplicities.iter().sum();
    if k > sample_size {
        return Err(Error::InvalidParameter(format!(
            "pattern length {k} exceeds sample size {sample_size}"
        )));
    }
    if counts.iter().zip(multiplicities).any(|(&t, &ki)| t < ki) {
        return Ok(Prob::zero());
    }
    let mut num = BigInt::one();
    for (&t, &ki) in counts.iter().zip(multiplicities) {
        num *= comb::falling(t, ki);
    }
    Ok(Prob::from_exact(Rational::new(
        num,
        comb::falling(sample_size, k),
    )))
}

/// Both expansions of a repeated-event pattern over the count-vector law,
/// with exact cross-checks against their closed counterparts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BayesExpansionCheck {
    /// `sum_t P(pattern | Y = t) P(Y = t)`.
    pub lhs: Prob,
    /// `sum_t prod_i (t_i/N)^{k_i} P(Y = t)`.
    pub rhs: Prob,
    /// The joint probability the lhs must reproduce.
    pub joint: Prob,
    /// The empirical product moment the rhs must reproduce.
    pub empirical_moment: Prob,
    /// `lhs == joint`, exactly.
    pub lhs_matches_joint: bool,
    /// `rhs == empirical_moment`, exactly.
    pub rhs_matches_moment: bool,
}

impl BayesExpansionCheck {
    /// True when both cross-checks hold.
    pub fn equal(&self) -> bool {
        self.lhs_matches_joint && self.rhs_matches_moment
    }
}

/// Expands the probability of the pattern "`k_i` observations in `C_i`" by
/// conditioning on the count vector, and its moment counterpart by expanding
/// the expectation, verifying both against the direct computations.
pub fn bayes_expansion_check(
    model: &Model,
    sample_size: u64,
    partition: &[Event],
    multiplicities: &[u64],
) -> Result<BayesExpansionCheck> {
    if sample_size > MAX_BAYES_N {
        return Err(Error::ExactCapExceeded {
            cap: MAX_BAYES_N,
            requested: sample_size,
        });
    }
    if multiplicities.len() != partition.len() {
        return Err(Error::InvalidParameter(format!(
            "{} multiplicities vs {} partition classes",
            multiplicities.len(),
            partition.len()
        )));
    }
    let k: u64 = multiplicities.iter().sum();
    if k == 0 || k > sample_size || k as usize > MAX_MOMENT_K {
        return Err(Error::InvalidParameter(format!(
            "total multiplicity {k} must lie in 1..=min(N, {MAX_MOMENT_K})"
        )));
    }
    let counts = model.count_distribution(sample_size, partition)?;
    let mut lhs = Rational::zero();
    let mut rhs = Rational::zero();
    for (t, mass) in counts.entries() {
        let cond = conditional_law_given_counts(sample_size, t, multiplicities)?;
        lhs += cond.ratio() * mass.ratio();
        let mut factor = Rational::one();
        for (&ti, &ki) in t.iter().zip(multiplicities) {
            if ki > 0 {
                factor *= num::pow::pow(Rational::new(ti.into(), sample_size.into()), ki as usize);
            }
            if factor.is_zero() {
                break;
            }
        }
        rhs += factor * mass.ratio();
    }
    let pattern: Vec<Event> = partition
        .iter()
        .zip(multiplicities)
        .flat_map(|(e, &ki)| std::iter::repeat_n(e.clone(), ki as usize))
        .collect();
    let joint = model.joint_event_prob(&pattern)?;
    let empirical_moment = empirical_product_moment_exact(model, sample_size, &pattern)?;
    let lhs = Prob::from_exact(lhs);
    let rhs = Prob::from_exact(rhs);
    Ok(BayesExpansionCheck {
        lhs_matches_joint: lhs == joint,
        rhs_matches_moment: rhs == empirical_moment,
        lhs,
        rhs,
        joint,
        empirical_moment,
    })
}

/// Exact probability that some partition class receives at most `m`
/// observations out of `sample_size`. Monotone nondecreasing in `m`.
pub fn tail_mass(model: &Model, sample_size: u64, partition: &[Event], m: u64) -> Result<Prob> {
    let counts = model.count_distribution(sample_size, partition)?;
    let mut total = Rational::zero();
    for (t, mass) in counts.entries() {
        if t.iter().any(|&ti| ti <= m) {
            total += mass.ratio();
        }
    }
    Ok(Prob::from_exact(total))
}

/// A Monte-Carlo estimate with its sample standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    /// Average of the per-experiment moment products.
    pub estimate: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    /// Number of experiments averaged.
    pub reps: u64,
}

/// Statistical estimate of the joint probability: run `reps` independent
/// experiments of `n` draws each and average the products of empirical
/// masses.
///
/// Experiment `j` draws from stream `j` of `seed` and partial sums are
/// combined by a pairwise tree in experiment order, so the result is a pure
/// function of `(model, n, reps, events, seed)` — bit-identical no matter how
/// many worker threads compute the experiments.
pub fn mc_joint_estimate(
    model: &Model,
    n: usize,
    reps: u64,
    events: &[Event],
    seed: u64,
) -> Result<McEstimate> {
    mc_joint_estimate_with_workers(model, n, reps, events, seed, 1)
}

/// As [`mc_joint_estimate`], spreading the experiments over `workers`
/// threads. Workers affect wall time only, never the result.
pub fn mc_joint_estimate_with_workers(
    model: &Model,
    n: usize,
    reps: u64,
    events: &[Event],
    seed: u64,
    workers: usize,
) -> Result<McEstimate> {
    if reps < 2 {
        return Err(Error::InvalidParameter(
            "need at least 2 repetitions".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidParameter(
            "sample size must be at least 1".into(),
        ));
    }
    if events.is_empty() {
        return Err(Error::InvalidParameter(
            "event tuple must be nonempty".into(),
        ));
    }
    let alphabet = model.alphabet();
    for e in events {
        alphabet.check_matches(e.alphabet())?;
    }
    // Fail fast on unsampleable models instead of inside a worker.
    model.sample_stream(n, seed, 0)?;

    let workers = workers.max(1).min(reps as usize);
    let mut values = vec![0.0f64; reps as usize];
    let member_masks: Vec<Vec<bool>> = events
        .iter()
        .map(|e| alphabet.states().map(|s| e.contains(s)).collect())
        .collect();
    let experiment = |j: u64| -> f64 {
        let sample = model
            .sample_stream(n, seed, j)
            .expect("sampling validated before dispatch");
        let mut counts = vec![0u64; alphabet.size()];
        for &s in &sample {
            counts[s] += 1;
        }
        let mut product = 1.0;
        for mask in &member_masks {
            let hits: u64 = counts
                .iter()
                .zip(mask)
                .filter_map(|(&c, &inside)| inside.then_some(c))
                .sum();
            product *= hits as f64 / n as f64;
        }
        product
    };
    if workers == 1 {
        for (j, slot) in values.iter_mut().enumerate() {
            *slot = experiment(j as u64);
        }
    } else {
        let chunk = values.len().div_ceil(workers);
        std::thread::scope(|scope| {
            for (c, slice) in values.chunks_mut(chunk).enumerate() {
                let experiment = &experiment;
                scope.spawn(move || {
                    for (off, slot) in slice.iter_mut().enumerate() {
                        *slot = experiment((c * chunk + off) as u64);
                    }
                });
            }
        });
    }
    let estimate = pairwise_sum(&values) / reps as f64;
    let deviations: Vec<f64> = values
        .iter()
        .map(|v| (v - estimate) * (v - estimate))
        .collect();
    let variance = pairwise_sum(&deviations) / (reps as f64 - 1.0);
    let std_error = (variance / reps as f64).sqrt();
    Ok(McEstimate {
        estimate,
        std_error,
        reps,
    })
}

/// Pairwise (tree) summation: deterministic and more accurate than a running
/// sum, independent of how the inputs were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Dist;
    use crate::models::{FiniteMixture, PolyaUrn};
    use crate::rational::rat;

    fn coin() -> Model {
        Model::Mixture(FiniteMixture::iid(
            Dist::new(vec![rat(1, 2), rat(1, 2)]).unwrap(),
        ))
    }

    fn two_coin_mixture() -> Model {
        Model::Mixture(
            FiniteMixture::new(vec![
                (rat(1, 2), Dist::new(vec![rat(4, 5), rat(1, 5)]).unwrap()),
                (rat(1, 2), Dist::new(vec![rat(1, 5), rat(4, 5)]).unwrap()),
            ])
            .unwrap(),
        )
    }

    fn ones(model: &Model) -> Event {
        model.alphabet().singleton(1).unwrap()
    }

    #[test]
    fn empirical_evaluation() {
        let a = Alphabet::new(2).unwrap();
        let b = a.singleton(1).unwrap();
        assert_eq!(
            *empirical_eval(a, &[1, 1, 0, 1], &b).unwrap().ratio(),
            rat(3, 4)
        );
        assert_eq!(
            *empirical_eval(a, &[1, 0], &a.full_event()).unwrap().ratio(),
            rat(1, 1)
        );
        assert_eq!(*empirical_eval(a, &[0, 0], &b).unwrap().ratio(), rat(0, 1));
        assert!(matches!(
            empirical_eval(a, &[], &b),
            Err(Error::EmptySample)
        ));
    }

    #[test]
    fn moment_of_mixture_matches_closed_form() {
        let m = two_coin_mixture();
        let b = ones(&m);
        let got = empirical_product_moment_exact(&m, 10, &[b.clone(), b]).unwrap();
        assert_eq!(*got.ratio(), rat(89, 250)); // m2 + (m1 - m2)/n
    }

    #[test]
    fn degree_one_moment_is_the_marginal() {
        for model in [
            coin(),
            two_coin_mixture(),
            Model::Polya(PolyaUrn::new(vec![2, 1]).unwrap()),
        ] {
            let b = ones(&model);
            for n in [1u64, 3, 17] {
                assert_eq!(
                    empirical_product_moment_exact(&model, n, std::slice::from_ref(&b)).unwrap(),
                    model.joint_event_prob(std::slice::from_ref(&b)).unwrap(),
                );
            }
        }
    }

    /// Oracle: expand E[prod mu_n(B_i)] by raw enumeration of position
    /// tuples in [n]^k.
    fn naive_moment(model: &Model, n: u64, events: &[Event]) -> Rational {
        let k = events.len();
        let mut total = Rational::zero();
        let mut tuple = vec![0u64; k];
        loop {
            // P(X_{l_1} in B_1, ..., X_{l_k} in B_k) for this position tuple:
            // group events by position and intersect, then use
            // exchangeability to relabel the distinct positions as a prefix.
            let mut by_position: std::collections::BTreeMap<u64, Event> = Default::default();
            for (i, &pos) in tuple.iter().enumerate() {
                by_position
                    .entry(pos)
                    .and_modify(|e| *e = e.intersect(&events[i]).unwrap())
                    .or_insert_with(|| events[i].clone());
            }
            let blocks: Vec<Event> = by_position.into_values().collect();
            total += model.joint_event_prob(&blocks).unwrap().into_ratio();
            let mut i = k;
            loop {
                if i == 0 {
                    let den = num::pow::pow(BigInt::from(n), k);
                    return total / Rational::from_integer(den);
                }
                i -= 1;
                tuple[i] += 1;
                if tuple[i] < n {
                    break;
                }
                tuple[i] = 0;
            }
        }
    }

    #[test]
    fn collision_pattern_expansion_matches_naive_enumeration() {
        let urn = Model::Polya(PolyaUrn::new(vec![1, 2]).unwrap());
        let models = [coin(), two_coin_mixture(), urn];
        for model in &models {
            let a = model.alphabet();
            let b1 = a.singleton(1).unwrap();
            let b0 = a.singleton(0).unwrap();
            let full = a.full_event();
            let tuples: Vec<Vec<Event>> = vec![
                vec![b1.clone(), b1.clone()],
                vec![b1.clone(), b0.clone()],
                vec![b1.clone(), full.clone(), b0.clone()],
                vec![b1.clone(), b1.clone(), b1.clone()],
            ];
            for events in &tuples {
                for n in 1..=6u64 {
                    assert_eq!(
                        empirical_product_moment_exact(model, n, events)
                            .unwrap()
                            .into_ratio(),
                        naive_moment(model, n, events),
                        "tuple {events:?} at n={n}",
                    );
                }
            }
        }
    }

    #[test]
    fn gap_report_for_the_two_coin_mixture() {
        let m = two_coin_mixture();
        let b = ones(&m);
        let report = df_gap(&m, 10, &[b.clone(), b]).unwrap();
        assert_eq!(*report.joint.ratio(), rat(17, 50));
        assert_eq!(*report.empirical_moment.ratio(), rat(89, 250));
        assert_eq!(report.gap, rat(2, 125));
        assert_eq!(report.bound, rat(1, 10));
        assert!(report.holds);
    }

    #[test]
    fn gap_is_zero_at_k_one() {
        let m = two_coin_mixture();
        let report = df_gap(&m, 7, &[ones(&m)]).unwrap();
        assert!(report.gap.is_zero());
        assert!(report.bound.is_zero());
        assert!(report.holds);
    }

    #[test]
    fn exchangeable_table_moments_stop_at_the_horizon() {
        let a = Alphabet::new(2).unwrap();
        let quarter = rat(1, 4);
        let probs: std::collections::BTreeMap<Vec<usize>, Rational> = [
            (vec![0, 0], quarter.clone()),
            (vec![0, 1], quarter.clone()),
            (vec![1, 0], quarter.clone()),
            (vec![1, 1], quarter),
        ]
        .into_iter()
        .collect();
        let table = Model::Table(crate::models::JointTable::new(a, 2, probs).unwrap());
        let b = a.singleton(1).unwrap();
        let events = [b.clone(), b];
        // Within the horizon the table behaves like the iid coin.
        assert_eq!(
            empirical_product_moment_exact(&table, 2, &events).unwrap(),
            empirical_product_moment_exact(&coin(), 2, &events).unwrap(),
        );
        // Beyond it there is no sample law to take moments of.
        assert!(matches!(
            empirical_product_moment_exact(&table, 3, &events),
            Err(Error::HorizonExceeded { .. })
        ));
    }

    #[test]
    fn non_exchangeable_table_is_rejected() {
        let a = Alphabet::new(2).unwrap();
        let probs = std::collections::BTreeMap::from([
            (vec![0, 0], rat(1, 4)),
            (vec![0, 1], rat(1, 10)),
            (vec![1, 0], rat(2, 5)),
            (vec![1, 1], rat(1, 4)),
        ]);
        let t = Model::Table(crate::models::JointTable::new(a, 2, probs).unwrap());
        let b = a.singleton(1).unwrap();
        assert!(matches!(
            df_gap(&t, 2, &[b.clone(), b]),
            Err(Error::NotExchangeable { .. })
        ));
    }

    #[test]
    fn conditional_law_spot_values() {
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
        assert!(conditional_law_given_counts(3, &[1], &[2])
            .unwrap()
            .ratio()
            .is_zero());
        assert!(matches!(
            conditional_law_given_counts(3, &[4], &[1]),
            Err(Error::CountsExceedSampleSize { .. })
        ));
    }

    #[test]
    fn bayes_expansion_on_the_coin() {
        let c = coin();
        let b = ones(&c);
        let check = bayes_expansion_check(&c, 4, &[b], &[2]).unwrap();
        assert_eq!(*check.lhs.ratio(), rat(1, 4));
        // Oracle: E[(Y/4)^2] over Y ~ Binomial(4, 1/2) is 5/16.
        assert_eq!(*check.rhs.ratio(), rat(5, 16));
        assert!(check.lhs_matches_joint);
        assert!(check.rhs_matches_moment);
        assert!(check.equal());
    }

    #[test]
    fn bayes_expansion_on_degenerate_mixture() {
        let m = Model::Mixture(
            FiniteMixture::new(vec![
                (rat(1, 2), Dist::new(vec![rat(1, 1), rat(0, 1)]).unwrap()),
                (rat(1, 2), Dist::new(vec![rat(0, 1), rat(1, 1)]).unwrap()),
            ])
            .unwrap(),
        );
        let b = ones(&m);
        let check = bayes_expansion_check(&m, 4, &[b], &[2]).unwrap();
        assert_eq!(*check.lhs.ratio(), rat(1, 2));
        assert_eq!(*check.rhs.ratio(), rat(1, 2));
        assert!(check.equal());
    }

    #[test]
    fn bayes_expansion_on_the_urn() {
        let urn = Model::Polya(PolyaUrn::new(vec![1, 1]).unwrap());
        let b = ones(&urn);
        let check = bayes_expansion_check(&urn, 3, &[b], &[1]).unwrap();
        assert_eq!(*check.lhs.ratio(), rat(1, 2));
        assert_eq!(*check.rhs.ratio(), rat(1, 2));
        assert!(check.equal());
    }

    #[test]
    fn bayes_expansion_rejects_overlap() {
        let c = coin();
        let a = c.alphabet();
        let b = a.singleton(1).unwrap();
        let overlap = a.full_event();
        assert!(matches!(
            bayes_expansion_check(&c, 4, &[b, overlap], &[1, 1]),
            Err(Error::OverlappingPartition)
        ));
    }

    #[test]
    fn tail_mass_values() {
        let c = coin();
        let b = ones(&c);
        assert_eq!(
            *tail_mass(&c, 4, std::slice::from_ref(&b), 0)
                .unwrap()
                .ratio(),
            rat(1, 16)
        );
        assert_eq!(
            *tail_mass(&c, 4, std::slice::from_ref(&b), 4)
                .unwrap()
                .ratio(),
            rat(1, 1)
        );
        let always_one = Model::Mixture(FiniteMixture::iid(
            Dist::new(vec![rat(0, 1), rat(1, 1)]).unwrap(),
        ));
        let b = ones(&always_one);
        assert!(tail_mass(&always_one, 8, std::slice::from_ref(&b), 7)
            .unwrap()
            .ratio()
            .is_zero());
    }

    #[test]
    fn tail_mass_is_monotone_in_m() {
        let urn = Model::Polya(PolyaUrn::new(vec![2, 1]).unwrap());
        let b = ones(&urn);
        let mut last = Rational::zero();
        for m in 0..=6u64 {
            let t = tail_mass(&urn, 6, std::slice::from_ref(&b), m)
                .unwrap()
                .into_ratio();
            assert!(t >= last);
            last = t;
        }
    }

    #[test]
    fn mc_estimate_degenerate_model() {
        let m = Model::Mixture(FiniteMixture::iid(
            Dist::new(vec![rat(1, 1), rat(0, 1)]).unwrap(),
        ));
        let b = m.alphabet().singleton(0).unwrap();
        let est = mc_joint_estimate(&m, 20, 10, &[b], 1).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn mc_estimate_is_worker_invariant() {
        let m = two_coin_mixture();
        let b = ones(&m);
        let events = [b.clone(), b];
        let one = mc_joint_estimate_with_workers(&m, 50, 400, &events, 9, 1).unwrap();
        for workers in [2, 4, 8] {
            let w = mc_joint_estimate_with_workers(&m, 50, 400, &events, 9, workers).unwrap();
            assert_eq!(one.estimate.to_bits(), w.estimate.to_bits());
            assert_eq!(one.std_error.to_bits(), w.std_error.to_bits());
        }
    }

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500500.0);
    }
}
