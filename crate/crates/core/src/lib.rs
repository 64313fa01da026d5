//! Numerical toolkit for weighted Bergman-type operators on the upper
//! half-plane: Carleson-box geometry, Bekolle–Bonami weight constants,
//! dyadic model operators, fractional maximal functions, Schur-test
//! verification and sharp-exponent experiments.
//!
//! Everything is deterministic: quadrature merges cell contributions
//! with compensated summation in a fixed order, parallel reductions
//! are ordered, and sampling routines take explicit seeds.

pub mod dyadic;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod norms;
pub mod operators;
pub mod quadrature;
pub mod radial;
pub mod schur;
pub mod special;
pub mod symbolic;
pub mod weights;

pub use dyadic::{dyadic_model_apply, interval_of, tent_tiling_check, DyadicIndex, DyadicModel, FractionalMaximal, GridShift, TilingReport, TruncatedGrid};
pub use error::{Error, Result};
pub use experiments::{fit_loglog, offdiag_sweep, sharpness_run, FitResult, OffDiagRow, SharpnessConfig, SharpnessOutcome, SharpnessRow};
pub use geometry::{
    alpha_measure_box, alpha_measure_tent, CarlesonBox, HalfPlanePoint, Interval, Rect, Tent,
};
pub use norms::{integral_dv, lp_norm, pairing, weighted_region_measure};
pub use operators::{maximal_minorization_check, norm_ratio, norm_ratio_on_region, MinorizationReport, OperatorSpec};
pub use quadrature::{integrate, tail_bound, DecayRate, IntegralResult, IntegrationRegion, QuadratureConfig};
pub use radial::SAppliedRadial;
pub use schur::{admissibility, exponent_chains, lemma_norm_scaling, solve_rst, verify_schur_conditions, OffDiagonalConfig, ScalingFit, SchurParameters, SchurReport};
pub use symbolic::SymbolicFunction;
pub use weights::{bp_constant, bpq_constant, ExponentConfig, SearchFamily, WeightConstant, WeightPair};
