use std::f64::consts::PI;

use super::threshold::{find_threshold, ThresholdResult, ThresholdSearch};
use super::{tau_nonclassical_depth, CriterionId, STRICT_EPS};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numerics::{laguerre, RadialQuadrature, Scaled};
use crate::phase_space::{CatState, ChannelCoefficients, ThermalChannel};

/// Photon-number probability
/// `p(n) = (1/pi) int Phi_t(u, v) e^{-(u^2+v^2)} L_n(u^2+v^2) du dv`,
/// i.e. the overlap of the evolved characteristic function with the
/// antinormally ordered one of `|n>`. The Gaussian `e^{-(1+d) r^2}` is the
/// quadrature weight.
pub fn photon_prob(state: &CatState, coeffs: &ChannelCoefficients, n: usize) -> Result<f64> {
    photon_prob_with(state, coeffs, n, &RadialQuadrature::default())
}

pub(crate) fn photon_prob_with(
    state: &CatState,
    coeffs: &ChannelCoefficients,
    n: usize,
    rule: &RadialQuadrature,
) -> Result<f64> {
    let a = state.alpha();
    let b = coeffs.c() * a;
    let pref = 2.0 / (state.norm() * PI);
    let cosh_base = -2.0 * a * a;
    let integrand = |u: f64, v: f64| -> Scaled {
        let lag = laguerre(n, u * u + v * v);
        let fringe = (2.0 * b * v).cos();
        let z = (2.0 * b * u).abs();
        // e^{-2 a^2} cosh(z) = e^{big} (1 + e^{-2z}) / 2
        let big = cosh_base + z;
        let tail = 0.5 * (1.0 + (-2.0 * z).exp());
        if big > 0.0 {
            Scaled {
                mantissa: pref * lag * (fringe * (-big).exp() + tail),
                ln_scale: big,
            }
        } else {
            Scaled::plain(pref * lag * (fringe + big.exp() * tail))
        }
    };
    let p = rule.integrate_scaled(integrand, 1.0 + coeffs.d())?;
    Ok(p.clamp(0.0, 1.0))
}

/// `p(0) ..= p(n_max)`.
pub fn photon_probs(
    state: &CatState,
    coeffs: &ChannelCoefficients,
    n_max: usize,
) -> Result<Vec<f64>> {
    Execution::default()
        .map_range(n_max + 1, |n| photon_prob(state, coeffs, n))
        .into_iter()
        .collect()
}

/// Klyshko quantity `B(n) = (n+2) p(n) p(n+2) - (n+1) p(n+1)^2` from a
/// probability table; `None` if the table is too short.
pub fn klyshko_b_from_probs(probs: &[f64], n: usize) -> Option<f64> {
    let p = probs.get(n..=n + 2)?;
    Some((n as f64 + 2.0) * p[0] * p[2] - (n as f64 + 1.0) * p[1] * p[1])
}

/// `B(n)` of the evolved cat. Negative values witness nonclassicality.
pub fn klyshko_b(state: &CatState, coeffs: &ChannelCoefficients, n: usize) -> Result<f64> {
    Ok(klyshko_terms(state, coeffs, n)?.0)
}

/// `B(n)` and the sum of the magnitudes of its two terms. The verdict
/// compares `B` against that scale, since `p(n)` can be tiny for large
/// amplitudes.
pub(crate) fn klyshko_terms(
    state: &CatState,
    coeffs: &ChannelCoefficients,
    n: usize,
) -> Result<(f64, f64)> {
    let p: Vec<f64> = (n..=n + 2)
        .map(|k| photon_prob(state, coeffs, k))
        .collect::<Result<_>>()?;
    let gain = (n as f64 + 2.0) * p[0] * p[2];
    let loss = (n as f64 + 1.0) * p[1] * p[1];
    Ok((gain - loss, gain + loss))
}

pub(crate) fn klyshko_negative(
    state: &CatState,
    coeffs: &ChannelCoefficients,
    n: usize,
) -> Result<bool> {
    let (b, scale) = klyshko_terms(state, coeffs, n)?;
    Ok(b < -STRICT_EPS * scale)
}

/// Supremum of `{tau : B(n)(tau) < 0}`. All sign changes found by the
/// coarse scan are reported in `crossings`.
pub fn tau_klyshko(
    state: &CatState,
    channel: &ThermalChannel,
    tol: f64,
    n: usize,
) -> Result<ThresholdResult> {
    tau_klyshko_in(state, channel, tol, n, Execution::default())
}

pub(crate) fn tau_klyshko_in(
    state: &CatState,
    channel: &ThermalChannel,
    tol: f64,
    n: usize,
    exec: Execution,
) -> Result<ThresholdResult> {
    let id = CriterionId::Klyshko;
    let nonclassical = |tau: f64| -> Result<bool> {
        let k = channel.coefficients(tau)?;
        klyshko_negative(state, &k, n)
    };
    if !nonclassical(0.0)? {
        return Ok(ThresholdResult::never(id));
    }
    if channel.nbar() == 0.0 {
        return Ok(ThresholdResult::infinite(id));
    }
    let search = ThresholdSearch {
        initial_hi: 2.0 * tau_nonclassical_depth(channel),
        scan_points: 64,
        tol,
        exec,
    };
    find_threshold(id, search, nonclassical)
}

/// Klyshko thresholds for `B(1) ..= B(n_max)` and whether the higher orders
/// switch off no later than `B(1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsumptionReport {
    /// `thresholds[k]` belongs to `B(k + 1)`.
    pub thresholds: Vec<ThresholdResult>,
    pub holds: bool,
}

impl SubsumptionReport {
    pub fn threshold(&self, n: usize) -> Option<&ThresholdResult> {
        n.checked_sub(1).and_then(|k| self.thresholds.get(k))
    }
}

pub fn klyshko_subsumption_check(
    state: &CatState,
    channel: &ThermalChannel,
    n_max: usize,
    tol: f64,
) -> Result<SubsumptionReport> {
    if n_max < 2 {
        return Err(Error::domain(format!(
            "subsumption check needs n_max >= 2, got {n_max}"
        )));
    }
    let thresholds: Vec<ThresholdResult> = (1..=n_max)
        .map(|n| tau_klyshko(state, channel, tol, n))
        .collect::<Result<_>>()?;
    let base = thresholds[0].tau_star;
    let holds = thresholds[1..].iter().all(|t| t.tau_star <= base);
    Ok(SubsumptionReport { thresholds, holds })
}
