//! Moment extraction, Hausdorff complete-monotonicity validation, and
//! mixing-measure recovery from moments.
//!
//! The moments of the mixing measure are exactly the joint probabilities of
//! repeated-event patterns, so they are computable in exact arithmetic for
//! every model in this crate. Recovery inverts that map: a grid solver
//! matches moments with a nonnegatively weighted measure on a fixed grid, and
//! an atomic (Prony-type) solver recovers point masses exactly up to float
//! root-finding. Recovery quality is judged by moment residual, not by
//! distance between measures — distinct measures can share all low-order
//! moments, and only the full moment sequence identifies the mixing measure.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num::{One, Signed, Zero};

use crate::comb;
use crate::error::{Error, Result};
use crate::measures::{Event, Prob};
use crate::models::Model;
use crate::rational::{self, Rational};

/// Cap on the total moment order.
pub const MAX_MOMENT_ORDER: u64 = 8;

/// Cap on the atom count of the Prony solver.
pub const MAX_PRONY_ATOMS: usize = 4;

/// Default grid size of the grid solver.
pub const DEFAULT_GRID_SIZE: usize = 101;

/// Default stationarity tolerance of the grid solver.
pub const DEFAULT_GRID_TOL: f64 = 1e-12;

/// Default iteration cap of the grid solver.
pub const DEFAULT_GRID_MAX_ITERS: usize = 100_000;

/// Exact multi-indexed moments of the mixing measure over a partition:
/// entry `(k_1, ..., k_n)` is `E[mu(C_1)^{k_1} ... mu(C_n)^{k_n}]` under the
/// mixing measure, equal to the joint probability of the repeated pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentTable {
    partition: Vec<Event>,
    max_order: u64,
    entries: BTreeMap<Vec<u64>, Prob>,
}

impl MomentTable {
    /// The partition the indices refer to.
    pub fn partition(&self) -> &[Event] {
        &self.partition
    }

    /// Largest total order stored.
    pub fn max_order(&self) -> u64 {
        self.max_order
    }

    /// All entries, in lexicographic index order.
    pub fn entries(&self) -> &BTreeMap<Vec<u64>, Prob> {
        &self.entries
    }

    /// Entry at one multi-index, if within the stored order.
    pub fn get(&self, index: &[u64]) -> Option<&Prob> {
        self.entries.get(index)
    }

    /// For a single-class partition, the raw sequence `m_0, ..., m_D`.
    pub fn one_dimensional(&self) -> Option<Vec<Rational>> {
        if self.partition.len() != 1 {
            return None;
        }
        Some(
            (0..=self.max_order)
                .map(|k| self.entries[&vec![k]].ratio().clone())
                .collect(),
        )
    }
}

/// Extracts the exact moment table of `model` over `partition` up to total
/// order `max_order`.
pub fn moments_from_model(
    model: &Model,
    partition: &[Event],
    max_order: u64,
) -> Result<MomentTable> {
    if max_order == 0 || max_order > MAX_MOMENT_ORDER {
        return Err(Error::InvalidParameter(format!(
            "moment order must lie in 1..={MAX_MOMENT_ORDER}, got {max_order}"
        )));
    }
    for i in 0..partition.len() {
        for j in i + 1..partition.len() {
            if !partition[i].is_disjoint(&partition[j]) {
                return Err(Error::OverlappingPartition);
            }
        }
    }
    model.require_exchangeable(max_order as usize)?;
    let mut entries = BTreeMap::new();
    for index in comb::vectors_summing_at_most(partition.len(), max_order) {
        let pattern: Vec<Event> = partition
            .iter()
            .zip(&index)
            .flat_map(|(e, &k)| std::iter::repeat_n(e.clone(), k as usize))
            .collect();
        let value = model.joint_event_prob(&pattern)?;
        entries.insert(index, value);
    }
    Ok(MomentTable {
        partition: partition.to_vec(),
        max_order,
        entries,
    })
}

/// Outcome of the complete-monotonicity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CmCheck {
    /// True when every signed difference is nonnegative.
    pub ok: bool,
    /// First `(j, k)` with `(-1)^j  Delta^j m_k < 0`, scanning by difference
    /// order then index; `None` when the sequence passes.
    pub first_violation: Option<(usize, usize)>,
}

/// Classical Hausdorff criterion: `(m_k)` is the moment sequence of some
/// measure on `[0, 1]` iff `(-1)^j Delta^j m_k >= 0` for all `j + k <= D`.
/// Exact on rational input. Requires `m_0 = 1`.
pub fn check_complete_monotonicity(moments: &[Rational]) -> Result<CmCheck> {
    let Some(first) = moments.first() else {
        return Err(Error::InvalidParameter(
            "moment sequence must be nonempty".into(),
        ));
    };
    if !first.is_one() {
        return Err(Error::BadLeadingMoment(first.clone()));
    }
    let mut row: Vec<Rational> = moments.to_vec();
    for j in 0..moments.len() {
        let sign_ok = |v: &Rational| {
            if j % 2 == 0 {
                !v.is_negative()
            } else {
                !v.is_positive()
            }
        };
        for (k, v) in row.iter().enumerate() {
            if !sign_ok(v) {
                return Ok(CmCheck {
                    ok: false,
                    first_violation: Some((j, k)),
                });
            }
        }
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    Ok(CmCheck {
        ok: true,
        first_violation: None,
    })
}

/// A nonnegatively weighted measure on a fixed grid in `[0, 1]`, the output
/// of [`recover_mixing_grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridMeasure {
    /// Grid points, uniform over `[0, 1]` including both endpoints.
    pub grid: Vec<f64>,
    /// Nonnegative weights summing to 1 (renormalized exactly at the end).
    pub weights: Vec<f64>,
    /// Euclidean norm of the moment mismatch over orders `1..=D`.
    pub residual: f64,
    /// Active-set iterations performed.
    pub iterations: usize,
}

/// Recovers a grid measure matching a 1-D moment sequence `m_0, ..., m_D`
/// (with `m_0 = 1`) by nonnegative least squares over the moment system.
///
/// The solver is Lawson–Hanson active-set NNLS on the system that includes
/// the order-0 row (which carries the mass constraint), followed by an exact
/// renormalization of the weights. Its objective decreases strictly at every
/// active-set iteration. `tol` bounds the dual feasibility (largest gradient
/// entry) accepted as optimal; hitting `max_iters` first is reported as
/// non-convergence with the residual reached.
///
/// Moments that fail the complete-monotonicity test are rejected up front:
/// they are not the moments of any measure on `[0, 1]`.
pub fn recover_mixing_grid(
    moments: &[Rational],
    grid_size: usize,
    tol: f64,
    max_iters: usize,
) -> Result<GridMeasure> {
    let cm = check_complete_monotonicity(moments)?;
    if let Some((j, k)) = cm.first_violation {
        return Err(Error::NotCompletelyMonotone { j, k });
    }
    if grid_size < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid size {grid_size} < 2"
        )));
    }
    let order = moments.len() - 1;
    if order == 0 {
        return Err(Error::InvalidParameter(
            "need at least one moment beyond m_0".into(),
        ));
    }
    let grid: Vec<f64> = (0..grid_size)
        .map(|g| g as f64 / (grid_size - 1) as f64)
        .collect();
    // Rows k = 0..=D of the moment system; row 0 pins total mass.
    let rows = order + 1;
    let a = DMatrix::from_fn(rows, grid_size, |k, g| grid[g].powi(k as i32));
    let b = DVector::from_fn(rows, |k, _| rational::to_f64(&moments[k]));
    let nnls = nnls_lawson_hanson(&a, &b, tol, max_iters)?;
    let mut weights = nnls.solution;
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::RecoveryFailed("all grid weights vanished".into()));
    }
    for w in &mut weights {
        *w /= total;
    }
    let mut residual_sq = 0.0;
    for k in 1..=order {
        let fit: f64 = grid
            .iter()
            .zip(&weights)
            .map(|(&p, &w)| w * p.powi(k as i32))
            .sum();
        let miss = fit - rational::to_f64(&moments[k]);
        residual_sq += miss * miss;
    }
    Ok(GridMeasure {
        grid,
        weights,
        residual: residual_sq.sqrt(),
        iterations: nnls.iterations,
    })
}

struct NnlsOutcome {
    solution: Vec<f64>,
    iterations: usize,
}

/// Lawson–Hanson nonnegative least squares: `min |Ax - b|` over `x >= 0`.
fn nnls_lawson_hanson(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    tol: f64,
    max_iters: usize,
) -> Result<NnlsOutcome> {
    let n = a.ncols();
    let mut passive = vec![false; n];
    let mut x = DVector::zeros(n);
    let mut prev_obj = f64::INFINITY;
    for outer in 0..max_iters {
        let residual = b - a * &x;
        let gradient = a.transpose() * &residual;
        let candidate = (0..n)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| gradient[i].total_cmp(&gradient[j]));
        match candidate {
            Some(j) if gradient[j] > tol => passive[j] = true,
            _ => {
                return Ok(NnlsOutcome {
                    solution: x.iter().copied().collect(),
                    iterations: outer,
                })
            }
        }
        // Solve on the passive set; shrink it until that solution is feasible.
        loop {
            let z = solve_on_support(a, b, &passive);
            let blocking = (0..n)
                .filter(|&j| passive[j] && z[j] <= 0.0)
                .min_by(|&i, &j| {
                    let ai = x[i] / (x[i] - z[i]);
                    let aj = x[j] / (x[j] - z[j]);
                    ai.total_cmp(&aj)
                });
            match blocking {
                None => {
                    x = z;
                    break;
                }
                Some(jb) => {
                    let alpha = x[jb] / (x[jb] - z[jb]);
                    x = &x + (z - &x) * alpha;
                    for j in 0..n {
                        if passive[j] && x[j] <= f64::EPSILON {
                            x[j] = 0.0;
                            passive[j] = false;
                        }
                    }
                }
            }
        }
        let obj = (b - a * &x).norm_squared();
        // Each active-set pass strictly improves the fit; tiny float slack.
        debug_assert!(
            obj <= prev_obj + 1e-12 * prev_obj.max(1.0),
            "objective rose from {prev_obj} to {obj}"
        );
        prev_obj = obj;
    }
    Err(Error::NoConvergence {
        iterations: max_iters,
        residual: (b - a * &x).norm(),
    })
}

/// Least-squares solution supported on the passive columns, zero elsewhere.
fn solve_on_support(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let cols: Vec<usize> = (0..a.ncols()).filter(|&j| passive[j]).collect();
    let sub = a.select_columns(cols.iter());
    let solution = sub
        .svd(true, true)
        .solve(b, 1e-13)
        .expect("SVD solve on a finite system");
    let mut z = DVector::zeros(a.ncols());
    for (idx, &j) in cols.iter().enumerate() {
        z[j] = solution[idx];
    }
    z
}

/// An atomic measure on `[0, 1]`: strictly increasing atoms with positive
/// weights summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    /// Atom locations, ascending.
    pub atoms: Vec<f64>,
    /// Positive weights summing to 1.
    pub weights: Vec<f64>,
}

/// Recovers an `r`-atom measure on `[0, 1]` from its moments
/// `m_0, ..., m_{2r-1}` by the Prony construction.
///
/// The Hankel system for the coefficients of the degree-`r` polynomial whose
/// roots are the atoms is solved in exact rational arithmetic, so a measure
/// with fewer than `r` atoms is detected as exact rank deficiency. Roots come
/// from the companion-matrix eigenvalues, accepted within a `1e-10` window
/// around `[0, 1]` and clamped; weights solve the Vandermonde moment system.
pub fn recover_atoms_prony(moments: &[Rational], r: usize) -> Result<AtomicMeasure> {
    if r == 0 || r > MAX_PRONY_ATOMS {
        return Err(Error::InvalidParameter(format!(
            "atom count must lie in 1..={MAX_PRONY_ATOMS}, got {r}"
        )));
    }
    if moments.len() < 2 * r {
        return Err(Error::InvalidParameter(format!(
            "need {} moments (m_0..m_{}), got {}",
            2 * r,
            2 * r - 1,
            moments.len()
        )));
    }
    if !moments[0].is_one() {
        return Err(Error::BadLeadingMoment(moments[0].clone()));
    }
    // Hankel system H c = -(m_r, ..., m_{2r-1}) for the monic annihilator
    // x^r + c_{r-1} x^{r-1} + ... + c_0.
    let mut system: Vec<Vec<Rational>> = (0..r)
        .map(|row| {
            let mut coeffs: Vec<Rational> = (0..r).map(|col| moments[row + col].clone()).collect();
            coeffs.push(-moments[r + row].clone());
            coeffs
        })
        .collect();
    let coeffs = solve_exact(&mut system).ok_or(Error::RankDeficient { order: r })?;

    // Companion matrix of the monic annihilator; its eigenvalues are the atoms.
    let companion = DMatrix::from_fn(r, r, |i, j| {
        if j == r - 1 {
            -rational::to_f64(&coeffs[i])
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let eigen = companion.complex_eigenvalues();
    const WINDOW: f64 = 1e-10;
    let mut atoms = Vec::with_capacity(r);
    for lambda in eigen.iter() {
        if lambda.im.abs() > WINDOW {
            return Err(Error::RecoveryFailed(format!(
                "complex root {} + {}i is not an atom location",
                lambda.re, lambda.im
            )));
        }
        let root = lambda.re;
        if !(-WINDOW..=1.0 + WINDOW).contains(&root) {
            return Err(Error::RecoveryFailed(format!(
                "root {root} falls outside [0, 1]"
            )));
        }
        atoms.push(root.clamp(0.0, 1.0));
    }
    atoms.sort_by(f64::total_cmp);
    if atoms.windows(2).any(|w| w[1] - w[0] <= WINDOW) {
        return Err(Error::RankDeficient { order: r });
    }

    // Vandermonde system sum_j w_j x_j^i = m_i for i = 0..r-1.
    let vander = DMatrix::from_fn(r, r, |i, j| atoms[j].powi(i as i32));
    let rhs = DVector::from_fn(r, |i, _| rational::to_f64(&moments[i]));
    let weights = vander
        .lu()
        .solve(&rhs)
        .ok_or(Error::RankDeficient { order: r })?;
    let mut weights: Vec<f64> = weights.iter().copied().collect();
    if weights.iter().any(|&w| w <= 0.0) {
        return Err(Error::RecoveryFailed(
            "recovered weights are not all positive".into(),
        ));
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok(AtomicMeasure { atoms, weights })
}

/// Gaussian elimination with exact rational pivoting on an augmented system;
/// `None` when singular.
fn solve_exact(system: &mut [Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = system.len();
    for col in 0..n {
        let pivot_row = (col..n).find(|&row| !system[row][col].is_zero())?;
        system.swap(col, pivot_row);
        let pivot = system[col][col].clone();
        for entry in system[col][col..].iter_mut() {
            *entry /= &pivot;
        }
        for row in 0..n {
            if row != col && !system[row][col].is_zero() {
                let factor = system[row][col].clone();
                for c in col..=n {
                    let delta = &factor * &system[col][c];
                    system[row][c] -= delta;
                }
            }
        }
    }
    Some((0..n).map(|row| system[row][n].clone()).collect())
}
