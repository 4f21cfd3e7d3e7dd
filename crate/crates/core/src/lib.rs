//! Fairness assessment for parametric curves and surface joints.

pub mod geom;
pub mod spirals;
pub mod diffgeom;
mod jet;
pub mod fairness;
pub mod hermite;
pub mod comparator;
pub mod aesthetics;
pub mod surfaudit;
