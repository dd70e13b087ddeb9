//! Free max-convolution powers of distribution functions, the norming
//! sequences and von Mises functionals of free extreme value theory, and a
//! harness that measures how fast the normalized densities approach the
//! free limit laws.
//!
//! The free max-convolution of two CDFs is
//! `(F box-max G)(x) = max{F(x) + G(x) - 1, 0}`; iterating it and rescaling
//! by the norming pair `(a_n, b_n)` drives `F^{box-max n}(a_n x + b_n)`
//! toward one of three limit families (free Frechet / Weibull / Gumbel),
//! and under a von Mises condition the densities converge uniformly with an
//! explicit `O(n^-1 v g(norming point))` rate. This crate evaluates all of
//! those objects numerically and ships the experiments that check the rates
//! at desk scale.
//!
//! Start with the runnable examples, one per capability:
//!
//! ```text
//! cargo run -p freemax --example catalog_tour          # built-in samples
//! cargo run -p freemax --example norming_sequences     # (a_n, b_n) per regime
//! cargo run -p freemax --example density_window        # w_n and (A_n, B_n)
//! cargo run -p freemax --example von_mises_report      # h, envelope g
//! cargo run -p freemax --example lemma_bounds          # gap/U bounds
//! cargo run -p freemax --example rate_study            # sup-error rate fits
//! cargo run -p freemax --example boundary_and_witness  # non-convergence
//! ```
//!
//! The same operations are scriptable through the `freemax` binary
//! (`freemax list|norming|density|vonmises|lemmas|converge|witness`).

// `!(x > 0.0)` is the NaN-rejecting form of the parameter guards here.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod evd;
pub mod harness;
pub mod maxconv;
pub mod norming;
pub mod numerics;
pub mod von_mises;

mod error;

pub use catalog::{builtin, default_catalog, CatalogEntry, DistributionSpec, ExtendedReal};
pub use error::{Error, Result};
pub use evd::{free_evd, ClassicalEvd, FreeEvd};
pub use harness::{ConvergenceReport, ExperimentConfig, RateReference};
pub use maxconv::{FreePower, SupportWindow};
pub use norming::{NormingPair, Regime};
