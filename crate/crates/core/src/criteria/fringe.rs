use crate::phase_space::{CatState, ChannelCoefficients};

/// Visibility of the Wigner interference fringe,
/// `F = exp[-2 alpha^2 (1 - c^2 / (1 + 2 d))]`. Decays towards
/// `exp(-2 alpha^2)` but never reaches zero.
pub fn fringe_visibility(state: &CatState, coeffs: &ChannelCoefficients) -> f64 {
    let a2 = state.alpha() * state.alpha();
    let c2 = coeffs.c() * coeffs.c();
    (-2.0 * a2 * (1.0 - c2 / (1.0 + 2.0 * coeffs.d()))).exp()
}
