use super::threshold::{find_threshold, ThresholdResult, ThresholdSearch};
use super::{CriterionId, SIGN_EPS};
use crate::error::Result;
use crate::exec::Execution;
use crate::numerics::golden_section_max;
use crate::phase_space::{
    CatState, ChannelCoefficients, OrderingParameter, PhasePoint, Quasiprob, ThermalChannel,
};

/// Closed-form upper bound `tau_W = ln(1 + 1/(2 nbar)) / 2` on the vanishing of
/// Wigner negativity, reached when `s_tau = 0`. Infinite for `nbar = 0`.
pub fn tau_wigner_negativity(channel: &ThermalChannel) -> f64 {
    let n = channel.nbar();
    if n == 0.0 {
        f64::INFINITY
    } else {
        0.5 * (1.0 / (2.0 * n)).ln_1p()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerMinimum {
    pub value: f64,
    pub argmin: PhasePoint,
    /// Sign decision made on the envelope-normalized quasiprobability, so it
    /// stays reliable when `value` itself is exponentially small.
    pub negative: bool,
}

/// Global minimum of a quasiprobability. The interference fringes of a real
/// cat lie along `x = 0`, so the search scans that axis first and then
/// refines locally in both coordinates.
pub(crate) fn quasiprob_minimum(q: &Quasiprob, density: f64) -> WignerMinimum {
    let sk = q.width().sqrt();
    let y_max = 6.0 * sk;
    let period = q.fringe_period();
    let step = (sk / 20.0).min(period / 20.0) / density;
    let n = ((y_max / step).ceil() as usize).clamp(200, 2_000_000);
    let h = y_max / n as f64;

    let at = |x: f64, y: f64| q.scaled(PhasePoint::new(x, y));
    let (mut best_y, mut best) = (0.0, at(0.0, 0.0));
    for i in 1..=n {
        let y = h * i as f64;
        let val = at(0.0, y);
        if val < best {
            best = val;
            best_y = y;
        }
    }
    let refine_tol = 1e-13 * y_max.max(1.0);
    let (y1, _) = golden_section_max(
        |y| -at(0.0, y),
        (best_y - h).max(0.0),
        best_y + h,
        refine_tol,
    );
    let (x1, _) = golden_section_max(|x| -at(x, y1), -h, h, refine_tol);
    let (y2, _) = golden_section_max(|y| -at(x1, y), (y1 - h).max(0.0), y1 + h, refine_tol);
    let mut arg = PhasePoint::new(x1, y2);
    let mut scaled_min = at(x1, y2);
    if best < scaled_min {
        arg = PhasePoint::new(0.0, best_y);
        scaled_min = best;
    }

    let mut sign_probe = q.envelope_free(arg);
    if period.is_finite() {
        sign_probe = sign_probe.min(q.envelope_free(PhasePoint::new(0.0, 0.5 * period)));
    }
    WignerMinimum {
        value: q.unscale(scaled_min),
        argmin: arg,
        negative: sign_probe < -SIGN_EPS,
    }
}

/// Minimum of the Wigner function of the evolved cat.
pub fn wigner_minimum(state: &CatState, coeffs: &ChannelCoefficients) -> WignerMinimum {
    let q = Quasiprob::new(state, coeffs, OrderingParameter::WIGNER)
        .expect("the Wigner function is regular for every channel");
    quasiprob_minimum(&q, 1.0)
}

/// Time at which the Wigner function of the evolved cat stops taking negative
/// values, located by bisection on the sign of [`wigner_minimum`].
pub fn tau_wigner_numeric(
    state: &CatState,
    channel: &ThermalChannel,
    tol: f64,
) -> Result<ThresholdResult> {
    tau_wigner_numeric_in(state, channel, tol, Execution::default())
}

pub(crate) fn tau_wigner_numeric_in(
    state: &CatState,
    channel: &ThermalChannel,
    tol: f64,
    exec: Execution,
) -> Result<ThresholdResult> {
    let id = CriterionId::WignerNumeric;
    let negative = |tau: f64| -> Result<bool> {
        let k = channel.coefficients(tau)?;
        Ok(wigner_minimum(state, &k).negative)
    };
    if !negative(0.0)? {
        return Ok(ThresholdResult::never(id));
    }
    if channel.nbar() == 0.0 {
        return Ok(ThresholdResult::infinite(id));
    }
    let search = ThresholdSearch {
        initial_hi: 2.0 * super::tau_nonclassical_depth(channel),
        scan_points: 16,
        tol,
        exec,
    };
    find_threshold(id, search, negative)
}
