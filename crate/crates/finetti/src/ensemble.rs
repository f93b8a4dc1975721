//! Pushforward ensembles: the law of the empirical measure as a finitely
//! supported distribution over simplex points, and its convergence to the
//! mixing measure in moment discrepancy.
//!
//! For a sample of size `n` the empirical masses of a disjoint partition take
//! values `t/n`, so the pushforward of the sample law under the empirical
//! measure is a finite distribution over such points. Its polynomial
//! expectations are exactly the empirical product moments, hence they
//! approach the mixing measure's moments at rate `C(D,2)/n` — the same bound
//! as the per-tuple approximation, applied degree by degree. Convergence is
//! quantified on polynomial moments because those determine the mixing
//! measure; no transport metric is involved.

use num::{Signed, Zero};

use crate::comb;
use crate::definetti::{df_bound, MomentExpansion, MAX_MOMENT_K};
use crate::error::{Error, Result};
use crate::measures::{Event, Prob};
use crate::models::Model;
use crate::rational::Rational;

/// Cap on the discrepancy degree (all multi-indices up to it are scanned).
pub const MAX_DISCREPANCY_DEGREE: u64 = 6;

/// The pushforward of a model's sample law under the empirical measure of a
/// partition: finitely many simplex points `t/n`, each carrying the
/// probability of its count vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ensemble {
    sample_size: u64,
    partition: Vec<Event>,
    support: Vec<(Vec<Rational>, Prob)>,
}

impl Ensemble {
    /// Sample size `n` the ensemble was built at.
    pub fn sample_size(&self) -> u64 {
        self.sample_size
    }

    /// The partition whose empirical masses are tracked.
    pub fn partition(&self) -> &[Event] {
        &self.partition
    }

    /// Support points (coordinates over the partition classes) with their
    /// masses, in lexicographic point order.
    pub fn support(&self) -> &[(Vec<Rational>, Prob)] {
        &self.support
    }

    /// Exact expectation of the monomial `prod_i x_i^{k_i}` under the
    /// ensemble.
    pub fn poly_expectation(&self, index: &[u64]) -> Result<Prob> {
        if index.len() != self.partition.len() {
            return Err(Error::InvalidParameter(format!(
                "index length {} vs {} partition classes",
                index.len(),
                self.partition.len()
            )));
        }
        let total: u64 = index.iter().sum();
        if total as usize > MAX_MOMENT_K {
            return Err(Error::InvalidParameter(format!(
                "total degree {total} exceeds {MAX_MOMENT_K}"
            )));
        }
        let mut acc = Rational::zero();
        for (point, mass) in &self.support {
            let mut term = mass.ratio().clone();
            for (x, &k) in point.iter().zip(index) {
                if k > 0 {
                    term *= num::pow::pow(x.clone(), k as usize);
                }
                if term.is_zero() {
                    break;
                }
            }
            acc += term;
        }
        Ok(Prob::from_exact(acc))
    }

    /// Fewest support points whose combined mass reaches `1 - epsilon`,
    /// greedily by mass with lexicographic point order breaking ties.
    pub fn concentration_profile(&self, epsilon: &Rational) -> Result<usize> {
        if epsilon.is_negative()
            || epsilon.is_zero()
            || *epsilon >= Rational::from_integer(1.into())
        {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie strictly between 0 and 1, got {epsilon}"
            )));
        }
        // Support is stored in lexicographic point order, and the sort below
        // is stable, so equal masses stay lexicographically ordered.
        let mut by_mass: Vec<&(Vec<Rational>, Prob)> = self.support.iter().collect();
        by_mass.sort_by(|a, b| b.1.cmp(&a.1));
        let target = Rational::from_integer(1.into()) - epsilon;
        let mut acc = Rational::zero();
        for (taken, (_, mass)) in by_mass.iter().enumerate() {
            acc += mass.ratio();
            if acc >= target {
                return Ok(taken + 1);
            }
        }
        Ok(self.support.len())
    }
}

/// Materializes the pushforward ensemble of `model` at sample size `n`:
/// support point `t/n` carries the exact probability of count vector `t`.
pub fn pushforward_ensemble(model: &Model, n: u64, partition: &[Event]) -> Result<Ensemble> {
    let counts = model.count_distribution(n, partition)?;
    let support = counts
        .entries()
        .iter()
        .map(|(t, mass)| {
            let point: Vec<Rational> = t
                .iter()
                .map(|&ti| Rational::new(ti.into(), n.into()))
                .collect();
            (point, mass.clone())
        })
        .collect();
    Ok(Ensemble {
        sample_size: n,
        partition: partition.to_vec(),
        support,
    })
}

/// Largest deviation between ensemble moments and mixing-measure moments over
/// all multi-indices of total degree `1..=max_degree`. Exact; bounded by
/// `C(D,2)/n` degree-wise.
pub fn moment_discrepancy(ensemble: &Ensemble, model: &Model, max_degree: u64) -> Result<Rational> {
    if max_degree == 0 || max_degree > MAX_DISCREPANCY_DEGREE {
        return Err(Error::InvalidParameter(format!(
            "degree must lie in 1..={MAX_DISCREPANCY_DEGREE}, got {max_degree}"
        )));
    }
    model.require_exchangeable(max_degree as usize)?;
    let mut worst = Rational::zero();
    for index in comb::vectors_summing_at_most(ensemble.partition.len(), max_degree) {
        if index.iter().all(|&k| k == 0) {
            continue; // both sides are exactly 1
        }
        let under_ensemble = ensemble.poly_expectation(&index)?.into_ratio();
        let pattern: Vec<Event> = ensemble
            .partition
            .iter()
            .zip(&index)
            .flat_map(|(e, &k)| std::iter::repeat_n(e.clone(), k as usize))
            .collect();
        let under_mixing = model.joint_event_prob(&pattern)?.into_ratio();
        let deviation = (under_ensemble - under_mixing).abs();
        if deviation > worst {
            worst = deviation;
        }
    }
    Ok(worst)
}

/// One row of a convergence sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    /// Sample size of the row.
    pub n: u64,
    /// Moment discrepancy at this sample size.
    pub discrepancy: Rational,
    /// The bound `C(D,2)/n`.
    pub bound: Rational,
}

/// A convergence sweep over sample sizes, with the largest scaled
/// discrepancy `n * discrepancy` observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceSweep {
    /// Degree the discrepancies were computed at.
    pub degree: u64,
    /// Rows in the order the sample sizes were given.
    pub rows: Vec<SweepRow>,
    /// `max_n n * discrepancy(n)` — stays bounded as `n` grows.
    pub max_scaled: Rational,
}

/// Sweeps the moment discrepancy over `n_list`, reusing one collision-pattern
/// expansion per multi-index across all sample sizes. Because the expansion
/// route avoids materializing count distributions, the sweep is not subject
/// to the exact-mode sample-size cap.
pub fn convergence_sweep(
    model: &Model,
    partition: &[Event],
    n_list: &[u64],
    degree: u64,
) -> Result<ConvergenceSweep> {
    if degree == 0 || degree > MAX_DISCREPANCY_DEGREE {
        return Err(Error::InvalidParameter(format!(
            "degree must lie in 1..={MAX_DISCREPANCY_DEGREE}, got {degree}"
        )));
    }
    if n_list.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one sample size".into(),
        ));
    }
    model.require_exchangeable(degree as usize)?;
    for i in 0..partition.len() {
        for j in i + 1..partition.len() {
            if !partition[i].is_disjoint(&partition[j]) {
                return Err(Error::OverlappingPartition);
            }
        }
    }
    let mut expansions: Vec<(MomentExpansion, Rational)> = Vec::new();
    for index in comb::vectors_summing_at_most(partition.len(), degree) {
        if index.iter().all(|&k| k == 0) {
            continue;
        }
        let pattern: Vec<Event> = partition
            .iter()
            .zip(&index)
            .flat_map(|(e, &k)| std::iter::repeat_n(e.clone(), k as usize))
            .collect();
        let exact = model.joint_event_prob(&pattern)?.into_ratio();
        expansions.push((MomentExpansion::new(model, &pattern)?, exact));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    let mut max_scaled = Rational::zero();
    for &n in n_list {
        let mut worst = Rational::zero();
        for (expansion, exact) in &expansions {
            let deviation = (expansion.evaluate(n)?.into_ratio() - exact).abs();
            if deviation > worst {
                worst = deviation;
            }
        }
        let scaled = &worst * Rational::from_integer(n.into());
        if scaled > max_scaled {
            max_scaled = scaled;
        }
        rows.push(SweepRow {
            n,
            discrepancy: worst,
            bound: df_bound(degree as usize, n),
        });
    }
    Ok(ConvergenceSweep {
        degree,
        rows,
        max_scaled,
    })
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
    fn coin_ensemble_support() {
        let c = coin();
        let e = pushforward_ensemble(&c, 2, &[ones(&c)]).unwrap();
        let masses: Vec<(Vec<Rational>, Rational)> = e
            .support()
            .iter()
            .map(|(p, m)| (p.clone(), m.ratio().clone()))
            .collect();
        assert_eq!(
            masses,
            vec![
                (vec![rat(0, 1)], rat(1, 4)),
                (vec![rat(1, 2)], rat(1, 2)),
                (vec![rat(1, 1)], rat(1, 4)),
            ]
        );
    }

    #[test]
    fn urn_ensemble_is_uniform() {
        let urn = Model::Polya(PolyaUrn::new(vec![1, 1]).unwrap());
        let e = pushforward_ensemble(&urn, 3, &[ones(&urn)]).unwrap();
        assert_eq!(e.support().len(), 4);
        for (_, mass) in e.support() {
            assert_eq!(*mass.ratio(), rat(1, 4));
        }
    }

    #[test]
    fn point_mass_model_gives_point_ensemble() {
        let m = Model::Mixture(FiniteMixture::iid(
            Dist::new(vec![rat(0, 1), rat(1, 1)]).unwrap(),
        ));
        let e = pushforward_ensemble(&m, 5, &[ones(&m)]).unwrap();
        assert_eq!(e.support().len(), 1);
        assert_eq!(e.support()[0].0, vec![rat(1, 1)]);
    }

    #[test]
    fn poly_expectation_values() {
        let c = coin();
        let e = pushforward_ensemble(&c, 2, &[ones(&c)]).unwrap();
        assert_eq!(*e.poly_expectation(&[0]).unwrap().ratio(), rat(1, 1));
        assert_eq!(*e.poly_expectation(&[2]).unwrap().ratio(), rat(3, 8));
        // Degree one is the plain marginal.
        assert_eq!(
            e.poly_expectation(&[1]).unwrap(),
            c.joint_event_prob(&[ones(&c)]).unwrap()
        );
    }

    #[test]
    fn discrepancy_of_the_two_coin_mixture() {
        let m = two_coin_mixture();
        let e = pushforward_ensemble(&m, 10, &[ones(&m)]).unwrap();
        assert_eq!(moment_discrepancy(&e, &m, 2).unwrap(), rat(2, 125));
        assert!(moment_discrepancy(&e, &m, 1).unwrap().is_zero());
    }

    #[test]
    fn degenerate_ensemble_has_zero_discrepancy() {
        let m = Model::Mixture(FiniteMixture::iid(
            Dist::new(vec![rat(0, 1), rat(1, 1)]).unwrap(),
        ));
        let e = pushforward_ensemble(&m, 6, &[ones(&m)]).unwrap();
        assert!(moment_discrepancy(&e, &m, 4).unwrap().is_zero());
    }

    #[test]
    fn sweep_matches_closed_form() {
        let m = two_coin_mixture();
        let sweep = convergence_sweep(&m, &[ones(&m)], &[10, 20, 40], 2).unwrap();
        let discrepancies: Vec<Rational> =
            sweep.rows.iter().map(|r| r.discrepancy.clone()).collect();
        assert_eq!(discrepancies, vec![rat(2, 125), rat(1, 125), rat(1, 250)]);
        let bounds: Vec<Rational> = sweep.rows.iter().map(|r| r.bound.clone()).collect();
        assert_eq!(bounds, vec![rat(1, 10), rat(1, 20), rat(1, 40)]);
        assert_eq!(sweep.max_scaled, rat(4, 25));
    }

    #[test]
    fn sweep_degree_one_is_identically_zero() {
        let urn = Model::Polya(PolyaUrn::new(vec![2, 3]).unwrap());
        let sweep = convergence_sweep(&urn, &[ones(&urn)], &[3, 9, 27], 1).unwrap();
        assert!(sweep.rows.iter().all(|r| r.discrepancy.is_zero()));
        assert!(sweep.max_scaled.is_zero());
    }

    #[test]
    fn urn_sweep_respects_bound() {
        let urn = Model::Polya(PolyaUrn::new(vec![1, 1]).unwrap());
        let sweep = convergence_sweep(&urn, &[ones(&urn)], &[10], 2).unwrap();
        let row = &sweep.rows[0];
        assert!(row.discrepancy <= row.bound);
        // E[(Y/10)^2] - 1/3 for the uniform count law.
        let e = pushforward_ensemble(&urn, 10, &[ones(&urn)]).unwrap();
        let second = e.poly_expectation(&[2]).unwrap().into_ratio();
        assert_eq!(row.discrepancy, (second - rat(1, 3)).abs());
    }

    #[test]
    fn concentration_profile_counts() {
        let c = coin();
        let e = pushforward_ensemble(&c, 2, &[ones(&c)]).unwrap();
        assert_eq!(e.concentration_profile(&rat(1, 4)).unwrap(), 2);
        // Tiny epsilon needs the whole support.
        assert_eq!(e.concentration_profile(&rat(1, 1000)).unwrap(), 3);
        let point = Model::Mixture(FiniteMixture::iid(
            Dist::new(vec![rat(0, 1), rat(1, 1)]).unwrap(),
        ));
        let pe = pushforward_ensemble(&point, 4, &[ones(&point)]).unwrap();
        assert_eq!(pe.concentration_profile(&rat(1, 2)).unwrap(), 1);
    }

    #[test]
    fn concentration_profile_is_monotone_in_epsilon() {
        let urn = Model::Polya(PolyaUrn::new(vec![1, 2]).unwrap());
        let e = pushforward_ensemble(&urn, 8, &[ones(&urn)]).unwrap();
        let mut last = usize::MAX;
        for den in [20i64, 10, 5, 3, 2] {
            let count = e.concentration_profile(&rat(1, den)).unwrap();
            assert!(count <= last);
            last = count;
        }
    }
}
