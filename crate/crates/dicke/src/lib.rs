//! Exact Dicke superradiance dynamics.
//!
//! N identical two-level emitters undergoing collective spontaneous decay
//! stay inside the permutation-symmetric ladder of Dicke states, and every
//! population ρ_m(t) has a closed form: a finite sum of exponentials
//! e^{−h_j Γt} with exact rational coefficients obtained from first- and
//! second-order residues of a generating function. This crate computes those
//! decompositions exactly, evaluates them at arbitrary times under an
//! adaptive-precision policy that defeats the catastrophic cancellation of
//! the alternating coefficient sums, and cross-checks everything against two
//! independent brute-force oracles (a power-series recursion and direct
//! integration of the diagonal master equation).
//!
//! Entry points:
//!
//! - [`LadderModel`]: the (N, Γ) system and its ladder spectrum.
//! - [`decompose`] / [`coefficient_matrix`]: exact closed forms.
//! - [`Evaluator`]: populations, intensity, burst peak, distribution mode.
//! - [`oracle`]: series and ODE references plus a validation report.

mod affine;
mod error;
mod evaluate;
mod export;
mod ladder;
mod residue;

pub mod oracle;

pub use affine::AffineCoefficient;
pub use error::{Error, Result};
pub use evaluate::{
    evaluate_population, EvolutionTrace, Evaluator, InitialState, PopulationSnapshot,
};
pub use export::{parse_weights, render_matrix, render_weights};
pub use ladder::{LadderModel, PoleEntry, PoleSet};
pub use residue::{
    coefficient_matrix, decompose, degenerate_coefficient, degenerate_coefficient_limit,
    simple_coefficient, CoefficientMatrix, DecompositionSet, MatrixRow, SpectralDecomposition,
    SpectralTerm,
};
