//! Numerical laboratory for the two-cocycle `G(g, h) = int_x^{h(x)} (g^* lambda - lambda)`
//! on groups of symplectic diffeomorphisms of exact symplectic manifolds.
//!
//! The core is generic over the scalar type ([`Scalar`], implemented for
//! `f32` and `f64`); the aliases below fix it to `f64` for everyday use.
pub mod cocycle;
pub mod error;
pub mod families;
pub mod geometry;
pub mod groups;
pub mod linalg;
pub mod quadrature;
pub mod scalar;
pub mod symplectomap;

pub use error::{Error, Result};
pub use groups::{GroupStructure, GroupWord, Letter, WordLength};
pub use scalar::Scalar;

pub type Point = geometry::Point<f64>;
pub type Covector = geometry::Covector<f64>;
pub type ManifoldModel = geometry::ManifoldModel<f64>;
pub type PathSpec = geometry::PathSpec<f64>;
pub type Matrix = linalg::Matrix<f64>;
pub type SympMap = symplectomap::SympMap<f64>;
pub type HamiltonianSpec = symplectomap::HamiltonianSpec<f64>;
pub type IntegratorSettings = symplectomap::IntegratorSettings<f64>;
pub type Moebius = symplectomap::Moebius<f64>;
pub type CocycleContext = cocycle::CocycleContext<f64>;
pub type IsotopySpec = cocycle::IsotopySpec<f64>;
pub type GeneratingSet = groups::GeneratingSet<f64>;
pub type IntegralResult = quadrature::IntegralResult<f64>;
