use super::threshold::{find_threshold, ThresholdResult, ThresholdSearch};
use super::wigner::quasiprob_minimum;
use super::CriterionId;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::phase_space::{
    CatState, ChannelCoefficients, OrderingParameter, Quasiprob, ThermalChannel,
};

/// Closed-form time `tau_P = ln(1 + 1/nbar) / 2` at which `s_tau = -1`: the
/// channel has smoothed the initial P function into its Q function. An upper
/// bound on the loss of nonclassicality for any initial state; infinite for
/// `nbar = 0`.
pub fn tau_nonclassical_depth(channel: &ThermalChannel) -> f64 {
    let n = channel.nbar();
    if n == 0.0 {
        f64::INFINITY
    } else {
        0.5 * (1.0 / n).ln_1p()
    }
}

/// Whether the P function of the evolved state has negative regions.
///
/// Up to a rescaling of phase space, the evolved P function is the initial
/// cat's quasiprobability at ordering `s_tau`, so the search runs on the
/// initial state.
pub(crate) fn p_function_negative(
    state: &CatState,
    coeffs: &ChannelCoefficients,
    density: f64,
) -> Result<bool> {
    let ordering = OrderingParameter::extended(coeffs.s())?;
    match Quasiprob::new(state, &ChannelCoefficients::identity(), ordering) {
        Ok(q) => Ok(quasiprob_minimum(&q, density).negative),
        // Too close to the bare P function, which is singular for any cat.
        Err(Error::SingularOrdering { .. }) => Ok(state.alpha() > 0.0),
        Err(e) => Err(e),
    }
}

/// Time at which the evolved P function becomes nonnegative everywhere.
pub fn exact_depth_threshold(
    state: &CatState,
    channel: &ThermalChannel,
    tol: f64,
) -> Result<ThresholdResult> {
    exact_depth_threshold_with(state, channel, tol, 1.0)
}

/// [`exact_depth_threshold`] with the phase-space search grid refined by
/// `density`.
pub fn exact_depth_threshold_with(
    state: &CatState,
    channel: &ThermalChannel,
    tol: f64,
    density: f64,
) -> Result<ThresholdResult> {
    exact_depth_threshold_in(state, channel, tol, density, Execution::default())
}

pub(crate) fn exact_depth_threshold_in(
    state: &CatState,
    channel: &ThermalChannel,
    tol: f64,
    density: f64,
    exec: Execution,
) -> Result<ThresholdResult> {
    if !(density > 0.0) {
        return Err(Error::domain("grid density must be positive"));
    }
    let id = CriterionId::DepthExact;
    let negative = |tau: f64| -> Result<bool> {
        let k = channel.coefficients(tau)?;
        p_function_negative(state, &k, density)
    };
    if !negative(0.0)? {
        return Ok(ThresholdResult::never(id));
    }
    if channel.nbar() == 0.0 {
        return Ok(ThresholdResult::infinite(id));
    }
    let search = ThresholdSearch {
        initial_hi: 2.0 * tau_nonclassical_depth(channel),
        scan_points: 16,
        tol,
        exec,
    };
    find_threshold(id, search, negative)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nbar(n: f64) -> ThermalChannel {
        ThermalChannel::with_nbar(n).unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert!((tau_nonclassical_depth(&nbar(100.0)) - 0.004_975_2).abs() < 1e-7);
        assert!((tau_nonclassical_depth(&nbar(1.0)) - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert!(tau_nonclassical_depth(&nbar(0.0)).is_infinite());
        let ch = nbar(1e5);
        assert!((tau_nonclassical_depth(&ch) * 2e5 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn depth_time_gives_antinormal_ordering() {
        let ch = nbar(100.0);
        let s = ch.coefficients(tau_nonclassical_depth(&ch)).unwrap().s();
        assert!((s + 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_threshold_within_bound() {
        let ch = nbar(100.0);
        let tp = tau_nonclassical_depth(&ch);
        let r = exact_depth_threshold(&CatState::new(2.0).unwrap(), &ch, 1e-8).unwrap();
        assert!(r.tau_star > 0.0 && r.tau_star <= tp + 1e-8);
        let s = ch.coefficients(r.tau_star).unwrap().s();
        assert!(s >= -1.0 - 1e-6);
        // a pure non-Gaussian state has unit nonclassical depth
        assert!((r.tau_star - tp).abs() < 1e-6);
    }

    #[test]
    fn grid_refinement_is_stable() {
        let ch = nbar(10.0);
        let st = CatState::new(1.5).unwrap();
        let a = exact_depth_threshold_with(&st, &ch, 1e-7, 1.0).unwrap();
        let b = exact_depth_threshold_with(&st, &ch, 1e-7, 2.0).unwrap();
        assert!((a.tau_star - b.tau_star).abs() <= 1e-7);
    }

    #[test]
    fn coherent_state_is_classical() {
        let r = exact_depth_threshold(&CatState::new(0.0).unwrap(), &nbar(100.0), 1e-7).unwrap();
        assert!(r.never_nonclassical);
    }

    #[test]
    fn classical_after_bound() {
        let st = CatState::new(3.0).unwrap();
        let ch = nbar(5.0);
        let tp = tau_nonclassical_depth(&ch);
        for f in [1.01, 1.5, 3.0] {
            let k = ch.coefficients(tp * f).unwrap();
            assert!(!p_function_negative(&st, &k, 1.0).unwrap());
        }
    }
}
