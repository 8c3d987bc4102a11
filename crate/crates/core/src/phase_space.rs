//! State and channel model, the closed-form evolution of the normally
//! ordered characteristic function, and s-ordered quasiprobabilities.
//!
//! Conventions: `xi = u + i v` is the characteristic-function argument and
//! `beta = x + i y` the phase-space point; both are carried by [`PhasePoint`].
//! Quasiprobabilities are normalized to `int W d^2 beta = 1`, so the vacuum
//! Wigner function peaks at `2 / pi`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Smallest admissible combined Gaussian width `d + (1 - s) / 2` of an
/// evaluated quasiprobability.
pub const MIN_QUASIPROB_WIDTH: f64 = 1e-6;

/// Even cat state `(|alpha> + |-alpha>) / sqrt(N)` with real `alpha >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatState {
    alpha: f64,
    norm: f64,
}

impl CatState {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::domain(format!(
                "cat amplitude must be real, finite and nonnegative, got {alpha}"
            )));
        }
        Ok(CatState {
            alpha,
            norm: 2.0 * (1.0 + (-2.0 * alpha * alpha).exp()),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `N = 2 (1 + e^{-2 alpha^2})`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Mean photon number `alpha^2 tanh(alpha^2)`.
    pub fn mean_photon_number(&self) -> f64 {
        let a2 = self.alpha * self.alpha;
        a2 * a2.tanh()
    }
}

/// Thermal Markovian channel with damping rate `gamma` and bath occupation
/// `nbar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalChannel {
    gamma: f64,
    nbar: f64,
}

impl ThermalChannel {
    pub fn new(gamma: f64, nbar: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::domain(format!(
                "damping rate must be positive, got {gamma}"
            )));
        }
        if !(nbar >= 0.0) || !nbar.is_finite() {
            return Err(Error::domain(format!(
                "thermal occupation must be >= 0, got {nbar}"
            )));
        }
        Ok(ThermalChannel { gamma, nbar })
    }

    /// Channel with `gamma = 1`, so that physical time equals `tau`.
    pub fn with_nbar(nbar: f64) -> Result<Self> {
        Self::new(1.0, nbar)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    /// Converts a physical time into the rescaled time `tau = gamma t`.
    pub fn rescale(&self, t: f64) -> f64 {
        self.gamma * t
    }

    pub fn coefficients(&self, tau: f64) -> Result<ChannelCoefficients> {
        coefficients(self, tau)
    }
}

/// Time-dependent channel coefficients at rescaled time `tau`:
/// `c = e^{-tau}`, `d = nbar (1 - e^{-2 tau})`, `v = d / c^2`, `s = 1 - 2 v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelCoefficients {
    tau: f64,
    c: f64,
    d: f64,
    v: f64,
    s: f64,
}

impl ChannelCoefficients {
    /// Coefficients of the identity map (`tau = 0`).
    pub fn identity() -> Self {
        ChannelCoefficients {
            tau: 0.0,
            c: 1.0,
            d: 0.0,
            v: 0.0,
            s: 1.0,
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn v(&self) -> f64 {
        self.v
    }
    pub fn s(&self) -> f64 {
        self.s
    }
}

pub fn coefficients(channel: &ThermalChannel, tau: f64) -> Result<ChannelCoefficients> {
    if !(tau >= 0.0) || tau.is_nan() {
        return Err(Error::domain(format!(
            "rescaled time must be >= 0, got {tau}"
        )));
    }
    let c = (-tau).exp();
    // 1 - e^{-2 tau} without cancellation at small tau
    let d = channel.nbar * -(-2.0 * tau).exp_m1();
    let v = d / (c * c);
    Ok(ChannelCoefficients {
        tau,
        c,
        d,
        v,
        s: 1.0 - 2.0 * v,
    })
}

/// A point `u + i v` of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint {
    pub u: f64,
    pub v: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { u: 0.0, v: 0.0 };

    pub fn new(u: f64, v: f64) -> Self {
        PhasePoint { u, v }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.u * self.u + self.v * self.v
    }
}

impl std::ops::Add for PhasePoint {
    type Output = PhasePoint;
    fn add(self, rhs: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.u + rhs.u, self.v + rhs.v)
    }
}

/// Operator-ordering parameter: `1` normal (P), `0` symmetric (Wigner),
/// `-1` antinormal (Q).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct OrderingParameter(f64);

impl OrderingParameter {
    pub const P: OrderingParameter = OrderingParameter(1.0);
    pub const WIGNER: OrderingParameter = OrderingParameter(0.0);
    pub const Q: OrderingParameter = OrderingParameter(-1.0);

    /// Ordering in the physical range `[-1, 1]`.
    pub fn new(s: f64) -> Result<Self> {
        if (-1.0..=1.0).contains(&s) {
            Ok(OrderingParameter(s))
        } else {
            Err(Error::domain(format!(
                "ordering parameter must lie in [-1, 1], got {s}"
            )))
        }
    }

    /// Any finite `s <= 1`; orderings below `-1` arise as channel-smoothed
    /// P functions.
    pub fn extended(s: f64) -> Result<Self> {
        if s.is_finite() && s <= 1.0 {
            Ok(OrderingParameter(s))
        } else {
            Err(Error::domain(format!(
                "ordering parameter must be finite and <= 1, got {s}"
            )))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Characteristic function with Gaussian factor `e^{-width |xi|^2}` and
/// argument scale `c`; the cosh branch is recombined in log space.
fn char_with_width(state: &CatState, c: f64, width: f64, xi: PhasePoint) -> f64 {
    let a = state.alpha;
    let r2 = xi.norm_sqr();
    let gauss = -width * r2;
    let fringe = gauss.exp() * (2.0 * c * a * xi.v).cos();
    let z = (2.0 * c * a * xi.u).abs();
    let base = gauss - 2.0 * a * a;
    let cosh_term = 0.5 * ((base + z).exp() + (base - z).exp());
    2.0 / state.norm * (fringe + cosh_term)
}

/// Normally ordered characteristic function of the evolved cat,
/// `(2/N) e^{-d|xi|^2} [cos(2 c alpha v) + e^{-2 alpha^2} cosh(2 c alpha u)]`.
///
/// Unbounded (returns `+inf` for large `u`) only when `d = 0`.
pub fn char_normal(state: &CatState, coeffs: &ChannelCoefficients, xi: PhasePoint) -> f64 {
    char_with_width(state, coeffs.c, coeffs.d, xi)
}

/// s-ordered characteristic function `char_normal * e^{-(1-s)|xi|^2 / 2}`.
pub fn char_s(
    state: &CatState,
    coeffs: &ChannelCoefficients,
    xi: PhasePoint,
    ordering: OrderingParameter,
) -> f64 {
    char_with_width(state, coeffs.c, coeffs.d + 0.5 * (1.0 - ordering.0), xi)
}

/// Closed form of the s-ordered quasiprobability of the evolved cat.
///
/// With `K = d + (1-s)/2` and `b = c alpha`:
/// `W = [g(beta - b) + g(beta + b) + 2 e^{-2 alpha^2 + b^2/K} g(beta) cos(2 b y / K)] / (N pi K)`,
/// where `g(z) = e^{-|z|^2 / K}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Quasiprob {
    width: f64,
    shift: f64,
    prefactor: f64,
    fringe_exp: f64,
    /// Larger of the fringe and lobe exponents at the origin; the scaled form
    /// divides it out so that the interference trough is of order one.
    headroom: f64,
}

impl Quasiprob {
    pub(crate) fn new(
        state: &CatState,
        coeffs: &ChannelCoefficients,
        ordering: OrderingParameter,
    ) -> Result<Self> {
        let width = coeffs.d + 0.5 * (1.0 - ordering.0);
        if !(width >= MIN_QUASIPROB_WIDTH) {
            let s_max = 1.0 - 2.0 * (MIN_QUASIPROB_WIDTH - coeffs.d);
            return Err(Error::SingularOrdering {
                s: ordering.0,
                s_max,
            });
        }
        let a = state.alpha;
        let b = coeffs.c * a;
        let fringe_exp = -2.0 * a * a + b * b / width;
        Ok(Quasiprob {
            width,
            shift: b,
            prefactor: 1.0 / (state.norm * PI * width),
            fringe_exp,
            headroom: fringe_exp.max(-b * b / width),
        })
    }

    pub(crate) fn width(&self) -> f64 {
        self.width
    }

    pub(crate) fn value(&self, beta: PhasePoint) -> f64 {
        let (x, y) = (beta.u, beta.v);
        let k = self.width;
        let b = self.shift;
        let lobes = (-((x - b).powi(2) + y * y) / k).exp() + (-((x + b).powi(2) + y * y) / k).exp();
        let fringe = 2.0 * (self.fringe_exp - (x * x + y * y) / k).exp() * (2.0 * b * y / k).cos();
        self.prefactor * (lobes + fringe)
    }

    /// `value / (prefactor * e^{headroom})`: same sign and same argmin over
    /// the plane, but never overflows.
    pub(crate) fn scaled(&self, beta: PhasePoint) -> f64 {
        let (x, y) = (beta.u, beta.v);
        let k = self.width;
        let b = self.shift;
        let h = self.headroom;
        let lobes =
            (-h - ((x - b).powi(2) + y * y) / k).exp() + (-h - ((x + b).powi(2) + y * y) / k).exp();
        let fringe =
            2.0 * (self.fringe_exp - h - (x * x + y * y) / k).exp() * (2.0 * b * y / k).cos();
        lobes + fringe
    }

    /// [`Self::scaled`] with the common envelope `e^{-|beta|^2 / K}` divided
    /// out. Same sign as the quasiprobability; on the `x = 0` axis it depends
    /// on `y` only through the fringe cosine.
    pub(crate) fn envelope_free(&self, beta: PhasePoint) -> f64 {
        let (x, y) = (beta.u, beta.v);
        let k = self.width;
        let b = self.shift;
        let h = self.headroom;
        let lobes =
            (-h + (2.0 * x * b - b * b) / k).exp() + (-h + (-2.0 * x * b - b * b) / k).exp();
        lobes + 2.0 * (self.fringe_exp - h).exp() * (2.0 * b * y / k).cos()
    }

    /// Converts a [`Self::scaled`] value back to the quasiprobability.
    pub(crate) fn unscale(&self, scaled: f64) -> f64 {
        scaled * self.prefactor * self.headroom.exp()
    }

    /// Spacing of the interference fringes along `y`.
    pub(crate) fn fringe_period(&self) -> f64 {
        if self.shift > 0.0 {
            PI * self.width / self.shift
        } else {
            f64::INFINITY
        }
    }
}

/// s-ordered quasiprobability `W(beta, s)` of the evolved cat.
///
/// Fails with [`Error::SingularOrdering`] when `d + (1-s)/2` drops below
/// [`MIN_QUASIPROB_WIDTH`]; the cat's own P function is singular.
pub fn eval_quasiprob(
    state: &CatState,
    coeffs: &ChannelCoefficients,
    beta: PhasePoint,
    ordering: OrderingParameter,
) -> Result<f64> {
    Ok(Quasiprob::new(state, coeffs, ordering)?.value(beta))
}

/// Normalized Gaussian `(2 / (pi kappa)) e^{-2 |z|^2 / kappa}` that maps the
/// quasiprobability at ordering `s'` onto ordering `s' - kappa`.
pub fn gaussian_kernel(kappa: f64, z: PhasePoint) -> Result<f64> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::domain(format!(
            "kernel width must be positive, got {kappa}"
        )));
    }
    Ok(2.0 / (PI * kappa) * (-2.0 * z.norm_sqr() / kappa).exp())
}
