//! Exact-rational linear systems on graphs and Newton–Okounkov bodies of
//! semistable curves and toric schemes over a discrete valuation ring.
//!
//! Everything is generic over [`Scalar`], an exact ordered field. The aliases
//! at the crate root fix it to [`Rational`] (arbitrary precision).

pub mod curve;
pub mod error;
pub mod graph;
pub mod linsys;
pub mod poly;
pub mod rank;
pub mod scalar;
pub mod toric;

pub use curve::{
    arakelov_body, cross_verify, tropical_body, ArakelovFlag, BodyKind, CurveFlag, TropicalFlag,
};
pub use error::{Error, Result};
pub use graph::{laplacian, quartic_graph, specialize_vertical, Graph};
pub use linsys::{
    build_system, enriched_system, member, minimal_element, pointwise_min, zariski_shift, MinimalElement,
};
pub use poly::{
    affine_image, enumerate_v_rep, fm_eliminate, parametric_value_function, solve_lp, LpStatus, Sense, Shape, Upper,
    VRepOutcome,
};
pub use rank::has_nonnegative_rank;
pub use scalar::Scalar;
pub use toric::{
    build_generic_polytope, build_model_polyhedron, monomial_valuation, psi_value, toric_body, MonomialValuation,
    ToricFlag, ToricModel,
};

/// Arbitrary-precision rational, the default scalar.
pub type Rational = num_rational::BigRational;
/// Fixed-width rational for small inputs where overflow is ruled out.
pub type Rational64 = num_rational::Rational64;

pub type Divisor = graph::Divisor<Rational>;
pub type GraphFunction = graph::GraphFunction<Rational>;
pub type HPolyhedron = poly::HPolyhedron<Rational>;
pub type VPolyhedron = poly::VPolyhedron<Rational>;
pub type Constraint = poly::Constraint<Rational>;
pub type PiecewiseLinearFunction = poly::PiecewiseLinearFunction<Rational>;
pub type LpOutcome = poly::LpOutcome<Rational>;
pub type LinearSystemSpec = linsys::LinearSystemSpec<Rational>;
pub type EnrichedSystemSpec = linsys::EnrichedSystemSpec<Rational>;
pub type CurveBodyJob = curve::CurveBodyJob<Rational>;
pub type NOBody2D = curve::NOBody2D<Rational>;
pub type ParametricFamily = poly::ParametricFamily<Rational>;
