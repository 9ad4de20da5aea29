//! Exact computer-algebra engine for the K-theoretic Hall algebra of type-A
//! quivers and its nil quantum-group presentation.
//!
//! The crate is organized in layers:
//!
//! * [`ring`] — exact multivariate Laurent-polynomial and rational-function
//!   arithmetic over arbitrary-precision rationals;
//! * [`shuffle`] — symmetric Laurent polynomials in orbit-sum form and the
//!   directed shuffle product realizing the Hall multiplication;
//! * [`uplus`] — the free algebra on loop generators `e[i,r]` with the
//!   terminating rewriting system onto its canonical (normal-form) basis;
//! * [`isomap`] — the evaluation map `phi` from words to shuffle elements,
//!   relation verification, and exact graded-rank certificates;
//! * [`flagk`] — equivariant K-theory of partial flag varieties by torus
//!   fixed-point localization: weight operators, Euler pairings, adjoints,
//!   categorical-action condition checks, and semiorthogonal-decomposition
//!   shadows;
//! * [`sampling`] — seeded random generators used by property suites and the
//!   CLI's randomized checks.

pub mod flagk;
pub mod isomap;
pub mod ring;
pub mod sampling;
pub mod shuffle;
pub mod uplus;

pub use flagk::{
    e_lambda, fixed_points, lambda_cotangent, sod_check, tvar, verify_action, young_diagrams,
    ActionCheck, ActionParams, ActionReport, Composition, FixedPoint, FlagCtx, FlagError,
    KOperator, Side, SodReport, YoungDiagram, YoungTuple,
};
pub use isomap::{
    graded_rank, intertwine_check, negative_orbit_keys, partition_count, phi, phi_word,
    sector_dimension, soundness_check, verify_relations, DimReport, IntertwineReport, IsoError,
    RankCaps, RelationCheck, RelationReport, SoundnessReport,
};
pub use ring::{LaurentPoly, Mono, Rational, RationalFunction, RingError, SlotPerm, VarId};
pub use shuffle::{DimVector, KHAElement, OrbitKey, SymLaurent};
pub use uplus::{
    canonical_basis, find_redex, inversions, is_reducible_at, measure, normal_form,
    normal_form_with, rewrite_at, BiGrade, Letter, Strategy, UElement, UplusError, Word,
};
