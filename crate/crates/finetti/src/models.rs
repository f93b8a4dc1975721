//! Exchangeable sequence models with exact finite-dimensional joint laws.
//!
//! Three model families are provided:
//!
//! * [`FiniteMixture`] — draw a distribution once, then sample iid from it.
//!   Exchangeable by construction; its mixing measure is finitely supported.
//! * [`PolyaUrn`] — reinforcement dynamics: draw a color, put it back with
//!   one extra ball of the same color. Exchangeable; its joint law has the
//!   rising-factorial closed form and its count law is Dirichlet-multinomial.
//! * [`JointTable`] — an explicit joint law over fixed-length sequences,
//!   deliberately allowed to be non-exchangeable so the permutation checker
//!   has something to reject.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::comb;
use crate::error::{Error, Result};
use crate::measures::{atoms_of, Alphabet, Dist, Event, Prob, MAX_TUPLE};
use crate::rational::Rational;
use crate::rng::CounterRng;

/// Default cap on the sample size for exact count-vector enumeration.
pub const DEFAULT_EXACT_CAP: u64 = 64;

/// Cap on the marginal dimension of the exchangeability checker
/// (`s^k * k!` terms are enumerated).
pub const MAX_EXCHANGEABILITY_K: usize = 6;

/// Current exact-mode sample-size cap: `FINETTI_MAX_EXACT_N` when set and
/// parseable, otherwise [`DEFAULT_EXACT_CAP`].
pub fn exact_n_cap() -> u64 {
    std::env::var("FINETTI_MAX_EXACT_N")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_EXACT_CAP)
}

/// A finitely supported mixture of iid laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMixture {
    alphabet: Alphabet,
    components: Vec<(Rational, Dist)>,
}

impl FiniteMixture {
    /// A mixture from `(weight, distribution)` pairs. Weights must be
    /// nonnegative and sum to exactly 1; all distributions must share one
    /// alphabet.
    pub fn new(components: Vec<(Rational, Dist)>) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::InvalidModel(
                "mixture needs at least one component".into(),
            ));
        };
        let alphabet = first.alphabet();
        for (w, d) in &components {
            alphabet.check_matches(d.alphabet())?;
            if w.is_negative() {
                return Err(Error::InvalidModel(format!("negative mixture weight {w}")));
            }
        }
        let total: Rational = components.iter().map(|(w, _)| w).sum();
        if !total.is_one() {
            return Err(Error::InvalidModel(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        Ok(FiniteMixture {
            alphabet,
            components,
        })
    }

    /// The iid model: a single-component mixture.
    pub fn iid(dist: Dist) -> Self {
        let alphabet = dist.alphabet();
        FiniteMixture {
            alphabet,
            components: vec![(Rational::one(), dist)],
        }
    }

    /// Component `(weight, distribution)` pairs.
    pub fn components(&self) -> &[(Rational, Dist)] {
        &self.components
    }
}

/// A Pólya urn with one color per state and integer initial counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyaUrn {
    counts: Vec<u64>,
}

impl PolyaUrn {
    /// An urn from initial counts, one per color, each at least 1.
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        Alphabet::new(counts.len())?;
        if counts.contains(&0) {
            return Err(Error::InvalidModel(
                "urn counts must all be at least 1".into(),
            ));
        }
        Ok(PolyaUrn { counts })
    }

    /// Initial counts per color.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Total initial count of the colors in an event.
    fn event_count(&self, event: &Event) -> u64 {
        event.members().iter().map(|&s| self.counts[s]).sum()
    }
}

/// An explicit joint law over state sequences of a fixed length (the
/// horizon). Shorter queries marginalize the table exactly; longer ones are
/// rejected. Sequences absent from the table carry probability zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointTable {
    alphabet: Alphabet,
    horizon: usize,
    probs: BTreeMap<Vec<usize>, Rational>,
}

impl JointTable {
    /// A table from sequence probabilities. Values must be nonnegative and
    /// sum to exactly 1; every key must have length `horizon` with states in
    /// the alphabet.
    pub fn new(
        alphabet: Alphabet,
        horizon: usize,
        probs: BTreeMap<Vec<usize>, Rational>,
    ) -> Result<Self> {
        if horizon == 0 || horizon > MAX_TUPLE {
            return Err(Error::InvalidModel(format!(
                "horizon {horizon} outside 1..={MAX_TUPLE}"
            )));
        }
        for (key, p) in &probs {
            if key.len() != horizon {
                return Err(Error::InvalidModel(format!(
                    "key {key:?} has length {}, expected {horizon}",
                    key.len()
                )));
            }
            if let Some(&state) = key.iter().find(|&&s| s >= alphabet.size()) {
                return Err(Error::StateOutOfRange {
                    state,
                    size: alphabet.size(),
                });
            }
            if p.is_negative() {
                return Err(Error::InvalidModel(format!(
                    "negative probability at {key:?}"
                )));
            }
        }
        let total: Rational = probs.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidModel(format!("table sums to {total}, not 1")));
        }
        Ok(JointTable {
            alphabet,
            horizon,
            probs,
        })
    }

    /// Sequence length the table stores.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Stored sequence probabilities.
    pub fn probs(&self) -> &BTreeMap<Vec<usize>, Rational> {
        &self.probs
    }

    fn check_horizon(&self, requested: usize) -> Result<()> {
        if requested > self.horizon {
            Err(Error::HorizonExceeded {
                horizon: self.horizon,
                requested,
            })
        } else {
            Ok(())
        }
    }
}

/// One of the three model families, under a common query interface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    /// Finitely supported mixture of iid laws.
    Mixture(FiniteMixture),
    /// Pólya urn.
    Polya(PolyaUrn),
    /// Explicit fixed-horizon joint law.
    Table(JointTable),
}

/// The exact distribution of the occupancy counts of a disjoint partition.
///
/// Entries map a count vector `(t_1, ..., t_n)` over the partition classes to
/// its probability; the residual class (the complement of the union) absorbs
/// the remaining `N - sum(t)` observations. Zero-probability vectors are
/// omitted. Masses sum to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountDistribution {
    sample_size: u64,
    partition: Vec<Event>,
    entries: BTreeMap<Vec<u64>, Prob>,
}

impl CountDistribution {
    /// Sample size `N`.
    pub fn sample_size(&self) -> u64 {
        self.sample_size
    }

    /// The partition the counts refer to.
    pub fn partition(&self) -> &[Event] {
        &self.partition
    }

    /// Count vectors with nonzero probability, in lexicographic order.
    pub fn entries(&self) -> &BTreeMap<Vec<u64>, Prob> {
        &self.entries
    }

    /// Probability of one count vector (zero when absent).
    pub fn prob(&self, counts: &[u64]) -> Prob {
        self.entries.get(counts).cloned().unwrap_or_else(Prob::zero)
    }
}

/// Checks that the events are pairwise disjoint and share the model alphabet.
fn check_partition(alphabet: Alphabet, partition: &[Event]) -> Result<()> {
    if partition.is_empty() {
        return Err(Error::InvalidParameter("partition must be nonempty".into()));
    }
    for e in partition {
        alphabet.check_matches(e.alphabet())?;
    }
    for i in 0..partition.len() {
        for j in i + 1..partition.len() {
            if !partition[i].is_disjoint(&partition[j]) {
                return Err(Error::OverlappingPartition);
            }
        }
    }
    Ok(())
}

impl Model {
    /// The state space of the model.
    pub fn alphabet(&self) -> Alphabet {
        match self {
            Model::Mixture(m) => m.alphabet,
            Model::Polya(u) => Alphabet::new(u.counts.len()).expect("validated at construction"),
            Model::Table(t) => t.alphabet,
        }
    }

    /// True for the families that are exchangeable by construction.
    pub fn exchangeable_by_construction(&self) -> bool {
        !matches!(self, Model::Table(_))
    }

    /// Exact probability of observing the state prefix `states`.
    ///
    /// ```
    /// use finetti::models::{Model, PolyaUrn};
    /// use finetti::rational::rat;
    ///
    /// let urn = Model::Polya(PolyaUrn::new(vec![1, 1]).unwrap());
    /// assert_eq!(*urn.joint_prob(&[1, 1]).unwrap().ratio(), rat(1, 3));
    /// ```
    pub fn joint_prob(&self, states: &[usize]) -> Result<Prob> {
        let alphabet = self.alphabet();
        if states.is_empty() {
            return Ok(Prob::one());
        }
        if states.len() > MAX_TUPLE {
            return Err(Error::TooManyEvents {
                len: states.len(),
                cap: MAX_TUPLE,
            });
        }
        if let Some(&state) = states.iter().find(|&&s| s >= alphabet.size()) {
            return Err(Error::StateOutOfRange {
                state,
                size: alphabet.size(),
            });
        }
        match self {
            Model::Mixture(m) => {
                let mut total = Rational::zero();
                for (w, d) in &m.components {
                    if w.is_zero() {
                        continue;
                    }
                    let prod: Rational = states.iter().map(|&s| d.state_prob(s)).product();
                    total += w * prod;
                }
                Ok(Prob::from_exact(total))
            }
            Model::Polya(u) => {
                let mut color_counts = vec![0u64; alphabet.size()];
                for &s in states {
                    color_counts[s] += 1;
                }
                let k = states.len() as u64;
                let mut num = BigInt::one();
                for (color, &m) in color_counts.iter().enumerate() {
                    num *= comb::rising(u.counts[color], m);
                }
                let den = comb::rising(u.total(), k);
                Ok(Prob::from_exact(Rational::new(num, den)))
            }
            Model::Table(t) => {
                t.check_horizon(states.len())?;
                // Marginalize over the unconstrained tail coordinates.
                let total = t
                    .probs
                    .iter()
                    .filter(|(key, _)| key[..states.len()] == *states)
                    .map(|(_, p)| p)
                    .sum();
                Ok(Prob::from_exact(total))
            }
        }
    }

    /// Exact probability of the joint event `{X_1 in B_1, ..., X_k in B_k}`.
    ///
    /// For mixtures this is the weighted product of component event masses.
    /// For urns the events are decomposed into disjoint atoms first, since
    /// merging colors of an urn again gives an urn; the sum over disjointified
    /// assignments is accumulated positionwise rather than materialized.
    pub fn joint_event_prob(&self, events: &[Event]) -> Result<Prob> {
        let alphabet = self.alphabet();
        if events.is_empty() {
            return Ok(Prob::one());
        }
        if events.len() > MAX_TUPLE {
            return Err(Error::TooManyEvents {
                len: events.len(),
                cap: MAX_TUPLE,
            });
        }
        for e in events {
            alphabet.check_matches(e.alphabet())?;
        }
        match self {
            Model::Mixture(m) => {
                let mut total = Rational::zero();
                for (w, d) in &m.components {
                    if w.is_zero() {
                        continue;
                    }
                    let mut prod = Rational::one();
                    for e in events {
                        prod *= d.prob(e)?.into_ratio();
                        if prod.is_zero() {
                            break;
                        }
                    }
                    total += w * prod;
                }
                Ok(Prob::from_exact(total))
            }
            Model::Polya(u) => {
                // Distinct events -> atoms; each position may take any
                // nonempty atom inside its event. The urn probability of an
                // assignment depends only on per-atom multiplicities, so walk
                // positions keeping a map multiplicity-vector -> assignment
                // count.
                let mut distinct: Vec<&Event> = Vec::new();
                let position_of: Vec<usize> = events
                    .iter()
                    .map(|e| {
                        distinct.iter().position(|d| **d == *e).unwrap_or_else(|| {
                            distinct.push(e);
                            distinct.len() - 1
                        })
                    })
                    .collect();
                let owned: Vec<Event> = distinct.iter().map(|e| (*e).clone()).collect();
                let atoms = atoms_of(&owned)?;
                let nonempty: Vec<usize> =
                    (0..atoms.len()).filter(|&m| !atoms[m].is_empty()).collect();
                let atom_weight: Vec<u64> =
                    nonempty.iter().map(|&m| u.event_count(&atoms[m])).collect();
                let choices: Vec<Vec<usize>> = (0..distinct.len())
                    .map(|j| {
                        nonempty
                            .iter()
                            .enumerate()
                            .filter(|(_, &mask)| mask & (1 << j) != 0)
                            .map(|(idx, _)| idx)
                            .collect()
                    })
                    .collect();
                let mut states: BTreeMap<Vec<u64>, u128> = BTreeMap::new();
                states.insert(vec![0; nonempty.len()], 1);
                for &j in &position_of {
                    let mut next: BTreeMap<Vec<u64>, u128> = BTreeMap::new();
                    for (mult, ways) in &states {
                        for &atom_idx in &choices[j] {
                            let mut m = mult.clone();
                            m[atom_idx] += 1;
                            *next.entry(m).or_insert(0) += ways;
                        }
                    }
                    states = next;
                }
                let k = events.len() as u64;
                let den = comb::rising(u.total(), k);
                let mut num = BigInt::zero();
                for (mult, ways) in &states {
                    let mut term = BigInt::from(*ways);
                    for (idx, &c) in mult.iter().enumerate() {
                        if c > 0 {
                            term *= comb::rising(atom_weight[idx], c);
                        }
                        if term.is_zero() {
                            break;
                        }
                    }
                    num += term;
                }
                Ok(Prob::from_exact(Rational::new(num, den)))
            }
            Model::Table(t) => {
                t.check_horizon(events.len())?;
                let total = t
                    .probs
                    .iter()
                    .filter(|(key, _)| events.iter().enumerate().all(|(i, e)| e.contains(key[i])))
                    .map(|(_, p)| p)
                    .sum();
                Ok(Prob::from_exact(total))
            }
        }
    }

    /// Exact distribution of the occupancy counts of `partition` in a sample
    /// of size `sample_size`.
    ///
    /// The partition is completed internally with the residual atom, so the
    /// returned count vectors satisfy `sum(t) <= sample_size`. Sample sizes
    /// beyond [`exact_n_cap`] are rejected with a pointer to Monte Carlo.
    pub fn count_distribution(
        &self,
        sample_size: u64,
        partition: &[Event],
    ) -> Result<CountDistribution> {
        let alphabet = self.alphabet();
        check_partition(alphabet, partition)?;
        let cap = exact_n_cap();
        if sample_size > cap {
            return Err(Error::ExactCapExceeded {
                cap,
                requested: sample_size,
            });
        }
        if sample_size == 0 {
            return Err(Error::InvalidParameter(
                "sample size must be at least 1".into(),
            ));
        }
        let mut entries: BTreeMap<Vec<u64>, Prob> = BTreeMap::new();
        match self {
            Model::Table(t) => {
                t.check_horizon(sample_size as usize)?;
                // Group the marginalized sequence law by count vector.
                let n = sample_size as usize;
                let mut acc: BTreeMap<Vec<u64>, Rational> = BTreeMap::new();
                for (key, p) in &t.probs {
                    if p.is_zero() {
                        continue;
                    }
                    let mut counts = vec![0u64; partition.len()];
                    for &state in &key[..n] {
                        if let Some(i) = partition.iter().position(|e| e.contains(state)) {
                            counts[i] += 1;
                        }
                    }
                    *acc.entry(counts).or_insert_with(Rational::zero) += p;
                }
                for (counts, p) in acc {
                    entries.insert(counts, Prob::from_exact(p));
                }
            }
            Model::Mixture(_) | Model::Polya(_) => {
                let residual: Event = {
                    let mut members: Vec<usize> = alphabet.states().collect();
                    members.retain(|&s| partition.iter().all(|e| !e.contains(s)));
                    Event::new(alphabet, members).expect("residual states are valid")
                };
                for counts in comb::vectors_summing_at_most(partition.len(), sample_size) {
                    let rest = sample_size - counts.iter().sum::<u64>();
                    let mut cells = counts.clone();
                    cells.push(rest);
                    let mass = match self {
                        Model::Mixture(m) => {
                            let coeff = comb::multinomial(sample_size, &cells);
                            let coeff = Rational::from_integer(coeff);
                            let mut total = Rational::zero();
                            for (w, d) in &m.components {
                                if w.is_zero() {
                                    continue;
                                }
                                let mut prod = Rational::one();
                                for (event, &t) in
                                    partition.iter().chain([&residual]).zip(cells.iter())
                                {
                                    if t == 0 {
                                        continue; // p^0 = 1 even when p = 0
                                    }
                                    let p = d.prob(event)?.into_ratio();
                                    if p.is_zero() {
                                        prod = Rational::zero();
                                        break;
                                    }
                                    prod *= num::pow::pow(p, t as usize);
                                }
                                total += w * prod;
                            }
                            &coeff * total
                        }
                        Model::Polya(u) => {
                            let mut num = comb::multinomial(sample_size, &cells);
                            for (event, &t) in partition.iter().chain([&residual]).zip(cells.iter())
                            {
                                if t > 0 {
                                    num *= comb::rising(u.event_count(event), t);
                                }
                                if num.is_zero() {
                                    break;
                                }
                            }
                            Rational::new(num, comb::rising(u.total(), sample_size))
                        }
                        Model::Table(_) => unreachable!(),
                    };
                    if !mass.is_zero() {
                        entries.insert(counts, Prob::from_exact(mass));
                    }
                }
            }
        }
        debug_assert!(
            entries
                .values()
                .map(|p| p.ratio())
                .sum::<Rational>()
                .is_one(),
            "count distribution masses must sum to 1"
        );
        Ok(CountDistribution {
            sample_size,
            partition: partition.to_vec(),
            entries,
        })
    }

    /// Draws `n` states deterministically from `(model, n, seed)`.
    ///
    /// Mixtures draw a component once and then sample iid states from it;
    /// urns follow their reinforcement dynamics; tables can sample only up to
    /// their horizon.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<usize>> {
        self.sample_stream(n, seed, 0)
    }

    /// As [`Model::sample`], with an explicit stream index so that parallel
    /// experiments draw from independent substreams of one master seed.
    pub fn sample_stream(&self, n: usize, seed: u64, stream: u64) -> Result<Vec<usize>> {
        let mut rng = CounterRng::new(seed, stream);
        match self {
            Model::Mixture(m) => {
                let weights: Vec<f64> = m
                    .components
                    .iter()
                    .map(|(w, _)| crate::rational::to_f64(w))
                    .collect();
                let dist = &m.components[pick_cumulative(&weights, rng.next_f64())].1;
                let state_probs: Vec<f64> =
                    dist.probs().iter().map(crate::rational::to_f64).collect();
                Ok((0..n)
                    .map(|_| pick_cumulative(&state_probs, rng.next_f64()))
                    .collect())
            }
            Model::Polya(u) => {
                let mut counts = u.counts.clone();
                let mut total = u.total();
                let mut out = Vec::with_capacity(n);
                for _ in 0..n {
                    let mut r = rng.next_below(total);
                    let mut color = 0;
                    while r >= counts[color] {
                        r -= counts[color];
                        color += 1;
                    }
                    out.push(color);
                    counts[color] += 1;
                    total += 1;
                }
                Ok(out)
            }
            Model::Table(t) => {
                t.check_horizon(n)?;
                let u = rng.next_f64();
                let mut acc = 0.0;
                let mut chosen: Option<&Vec<usize>> = None;
                for (key, p) in &t.probs {
                    acc += crate::rational::to_f64(p);
                    if u < acc {
                        chosen = Some(key);
                        break;
                    }
                }
                let key = chosen
                    .unwrap_or_else(|| t.probs.keys().next_back().expect("table is nonempty"));
                Ok(key[..n].to_vec())
            }
        }
    }

    /// Exact maximal deviation from exchangeability on the `k`-dimensional
    /// marginal: the largest `|P(X_{sigma(1)}, ...) - P(X_1, ...)|` over all
    /// permutations and state tuples. Zero if and only if the marginal is
    /// permutation invariant.
    pub fn exchangeability_deviation(&self, k: usize) -> Result<Rational> {
        if k == 0 || k > MAX_EXCHANGEABILITY_K {
            return Err(Error::InvalidParameter(format!(
                "exchangeability check supports k in 1..={MAX_EXCHANGEABILITY_K}, got {k}"
            )));
        }
        if let Model::Table(t) = self {
            t.check_horizon(k)?;
        }
        let s = self.alphabet().size();
        // Permuting coordinates keeps a tuple inside its multiset orbit, so
        // the maximal deviation is the widest probability range within an
        // orbit.
        let mut orbit_range: BTreeMap<Vec<usize>, (Rational, Rational)> = BTreeMap::new();
        let mut tuple = vec![0usize; k];
        loop {
            let p = self.joint_prob(&tuple)?.into_ratio();
            let mut key = tuple.clone();
            key.sort_unstable();
            orbit_range
                .entry(key)
                .and_modify(|(lo, hi)| {
                    if p < *lo {
                        *lo = p.clone();
                    }
                    if p > *hi {
                        *hi = p.clone();
                    }
                })
                .or_insert_with(|| (p.clone(), p));
            // Odometer over state tuples.
            let mut i = k;
            loop {
                if i == 0 {
                    return Ok(orbit_range
                        .values()
                        .map(|(lo, hi)| hi - lo)
                        .max()
                        .unwrap_or_else(Rational::zero));
                }
                i -= 1;
                tuple[i] += 1;
                if tuple[i] < s {
                    break;
                }
                tuple[i] = 0;
            }
        }
    }

    /// Verifies that the model may be used where exchangeability is assumed,
    /// checking tables by exhaustive permutation testing up to dimension `k`.
    pub fn require_exchangeable(&self, k: usize) -> Result<()> {
        match self {
            Model::Mixture(_) | Model::Polya(_) => Ok(()),
            Model::Table(t) => {
                let check_k = k.min(t.horizon);
                if check_k > MAX_EXCHANGEABILITY_K {
                    return Err(Error::InvalidParameter(format!(
                        "cannot verify exchangeability beyond k={MAX_EXCHANGEABILITY_K}"
                    )));
                }
                let deviation = self.exchangeability_deviation(check_k)?;
                if deviation.is_zero() {
                    Ok(())
                } else {
                    Err(Error::NotExchangeable {
                        deviation,
                        k: check_k,
                    })
                }
            }
        }
    }
}

/// Index of the first cumulative bucket exceeding `u`; the last bucket when
/// rounding leaves `u` past the total.
fn pick_cumulative(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}
