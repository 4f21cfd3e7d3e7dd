//! Special functions and spiral generators: Gauss–Kronrod quadrature, Fresnel
//! integrals, the Gauss hypergeometric function and curvature-defined spirals.

mod fresnel;
mod hypergeometric;
mod quadrature;
mod spiral;

pub use fresnel::fresnel;
pub use hypergeometric::{hyp2f1, hyp2f1_derivative, HypergeometricError};
pub use quadrature::{gauss_kronrod, gk15, integrate, QuadratureConfig, QuadratureResult, DEFAULT_MAX_INTERVALS};
pub use spiral::{
    clothoid_point, generate_spiral, SpiralCurve, SpiralError, SpiralFamily, SpiralSpec, DEFAULT_SPIRAL_TOL,
};
