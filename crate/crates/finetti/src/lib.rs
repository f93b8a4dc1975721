#![warn(missing_docs)]

//! Exact computation for finite exchangeable sequences over finite alphabets.
//!
//! An exchangeable sequence is one whose finite-dimensional joint laws are
//! invariant under permuting coordinates. Over a finite alphabet such a law
//! is always a mixture of iid laws, and this crate makes the finite,
//! quantitative side of that picture executable:
//!
//! * **exact joint laws** for three model families — finitely supported
//!   mixtures, Pólya urns, and explicit joint tables ([`models`]);
//! * **empirical-measure moments** `E[mu_n(B_1) ... mu_n(B_k)]` in exact
//!   rational arithmetic, with the provable `C(k,2)/n` distance to the joint
//!   probability ([`definetti`]);
//! * **conditional laws given occupancy counts** and the two expansions of a
//!   joint probability over the count-vector law, which must agree exactly
//!   with the direct computations ([`definetti`]);
//! * **Monte-Carlo estimation** that is bit-reproducible for a fixed seed
//!   regardless of worker count ([`definetti`]);
//! * **moment extraction and mixing-measure recovery**: Hausdorff
//!   complete-monotonicity validation, grid recovery by nonnegative least
//!   squares, and exact atomic recovery via the Prony construction
//!   ([`recovery`]);
//! * **pushforward ensembles** of the empirical measure and their moment
//!   convergence to the mixing measure ([`ensemble`]).
//!
//! Everything labelled exact computes with arbitrary-precision rationals end
//! to end; floats appear only in sampling and in the recovery solvers.
//!
//! # Example
//!
//! ```
//! use finetti::definetti::df_gap;
//! use finetti::measures::Dist;
//! use finetti::models::{FiniteMixture, Model};
//! use finetti::rational::rat;
//!
//! let model = Model::Mixture(FiniteMixture::new(vec![
//!     (rat(1, 2), Dist::new(vec![rat(4, 5), rat(1, 5)]).unwrap()),
//!     (rat(1, 2), Dist::new(vec![rat(1, 5), rat(4, 5)]).unwrap()),
//! ]).unwrap());
//! let b = model.alphabet().singleton(1).unwrap();
//!
//! // How far is E[mu_10({1})^2] from P(X_1 = 1, X_2 = 1)?
//! let report = df_gap(&model, 10, &[b.clone(), b]).unwrap();
//! assert_eq!(report.gap, rat(2, 125));
//! assert_eq!(report.bound, rat(1, 10));
//! assert!(report.holds);
//! ```
//!
//! The `examples/` directory has one runnable program per capability; the
//! `finetti` binary exposes the same operations as batch subcommands.
//!
//! All values are immutable after construction and all exact operations are
//! pure, so everything here is safe to use from concurrent threads.

pub mod cli;
pub mod comb;
pub mod definetti;
pub mod ensemble;
pub mod error;
pub mod measures;
pub mod models;
pub mod rational;
pub mod recovery;
pub mod rng;
pub mod wire;

pub use error::{Error, Result};
pub use measures::{Alphabet, Dist, Event, Prob};
pub use models::Model;
