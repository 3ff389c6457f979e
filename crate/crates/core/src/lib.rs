//! Differential invariants of ruled surfaces `r(u, v) = f(u) + v q(u)` in
//! Euclidean 3-space, and a decision procedure for similarity of ruled
//! surfaces under a variable transformation of striction arc length.
//!
//! The pipeline is
//!
//! 1. [`expr`]: parse and symbolically differentiate component expressions,
//! 2. [`surface`]: distribution parameter, normals, striction curve,
//!    torsal rulings and classification,
//! 3. [`frame`]: the moving frame `{q, h, a}` along the striction curve with
//!    curvatures `k1`, `k2`, the total-curvature parameter `phi` and the
//!    structure function `k2 / k1`,
//! 4. [`ode`]: the frame system in `phi` and the third-order ruling equation,
//! 5. [`similarity`] and [`synthesis`]: comparison of two surfaces (or two
//!    curves) and construction of new members of a similarity family.
//!
//! Sampling loops run through [`Execution`], which is data-parallel with the
//! default `parallel` feature. Reductions are always sequential and in index
//! order, so results do not depend on the execution strategy.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::suspicious_arithmetic_impl, clippy::needless_range_loop)]

pub mod curve;
mod error;
pub mod exec;
pub mod expr;
pub mod frame;
pub mod io;
pub mod jet;
pub mod mesh;
pub mod ode;
pub mod presets;
pub mod procrustes;
pub mod quadrature;
pub mod similarity;
pub mod spline;
pub mod surface;
pub mod synthesis;

pub use curve::{arc_length_map, evaluate_curve, ArcLengthMap, Curve, CurveSpec};
pub use error::{Error, Result};
pub use exec::Execution;
pub use expr::{differentiate, parse_expression, Expr};
pub use frame::{frenet_frame, FrameField, FrameSample, StructureFunction};
pub use similarity::{Mode, SimilarityOptions, SimilarityReport};
pub use surface::{RuledSurface, SurfaceClass, SurfaceKind};

pub use nalgebra::{Matrix3, Vector3};

/// Speed below which a curve (or a director derivative) counts as zero.
pub const EPS_SPEED: f64 = 1e-9;
/// Developability threshold on `max |d|`.
pub const TOL_DEV: f64 = 1e-8;
/// Threshold on `k2` for the conoid flag.
pub const TOL_CONOID: f64 = 1e-8;
/// Smallest `k1` for which the central normal is defined.
pub const EPS_K: f64 = 1e-7;
/// Smallest `|f|` for which the third-order ruling equation is applicable.
pub const EPS_F: f64 = 1e-6;
/// Bisection target for torsal rulings.
pub const TORSAL_TOL: f64 = 1e-10;
/// Default tolerance for similarity verdicts.
pub const DEFAULT_TOL: f64 = 1e-4;
/// Default resolution of total-curvature grids.
pub const DEFAULT_RESOLUTION: usize = 512;
/// Default sample count of surfaces read from definition files.
pub const DEFAULT_SAMPLES: usize = 512;
