//! Numerical kernels shared by the criteria: Laguerre polynomials,
//! Gaussian-weighted quadrature, bracketing bisection and golden-section
//! search.

mod laguerre;
mod quadrature;
mod roots;
mod search;

pub use laguerre::{laguerre, laguerre_all};
pub use quadrature::{
    gauss_laguerre, integrate_radial_gaussian, integrate_radial_gaussian_scaled, Node,
    QuadratureRule, RadialQuadrature, Scaled,
};
pub use roots::{bisect, bisect_sign, Bisection, Bracket};
pub use search::golden_section_max;
