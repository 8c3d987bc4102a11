//! Threshold times over grids of `(alpha, nbar)`.

use crate::criteria::{
    exact_depth_threshold_in, tau_klyshko_in, tau_nonclassical_depth, tau_vogel_in,
    tau_vogel_second_order_in, tau_wigner_negativity, tau_wigner_numeric_in, CriterionId,
    ThresholdResult,
};
use crate::error::Result;
use crate::exec::Execution;
use crate::phase_space::{CatState, ThermalChannel};

/// Threshold time of `criterion` for one state and channel.
///
/// Fringe visibility decays but never vanishes, so its threshold is infinite
/// for every `alpha > 0`. The depth and Wigner-negativity bounds are closed
/// form; everything else is located numerically to `tol`.
pub fn threshold_for(
    criterion: CriterionId,
    state: &CatState,
    channel: &ThermalChannel,
    tol: f64,
) -> Result<ThresholdResult> {
    threshold_with(criterion, state, channel, tol, Execution::default())
}

/// [`threshold_for`] with the inner time scan dispatched through `exec`.
pub fn threshold_with(
    criterion: CriterionId,
    state: &CatState,
    channel: &ThermalChannel,
    tol: f64,
    exec: Execution,
) -> Result<ThresholdResult> {
    let vacuum = state.alpha() == 0.0;
    match criterion {
        CriterionId::Fringe | CriterionId::Depth | CriterionId::WignerNeg if vacuum => {
            Ok(ThresholdResult::never(criterion))
        }
        CriterionId::Fringe => Ok(ThresholdResult::infinite(criterion)),
        CriterionId::Depth => Ok(ThresholdResult::exact(
            criterion,
            tau_nonclassical_depth(channel),
        )),
        CriterionId::WignerNeg => Ok(ThresholdResult::exact(
            criterion,
            tau_wigner_negativity(channel),
        )),
        CriterionId::Vogel1 => tau_vogel_in(state, channel, tol, exec),
        CriterionId::Vogel2 => tau_vogel_second_order_in(state, channel, tol, exec),
        CriterionId::Klyshko => tau_klyshko_in(state, channel, tol, 1, exec),
        CriterionId::DepthExact => exact_depth_threshold_in(state, channel, tol, 1.0, exec),
        CriterionId::WignerNumeric => tau_wigner_numeric_in(state, channel, tol, exec),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub alpha: f64,
    pub nbar: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub nbar: f64,
    pub threshold: ThresholdResult,
}

/// Computes the threshold of `criterion` at every point. Points are spread
/// over `exec`; each point's own time scan runs sequentially in parallel
/// mode so that the two levels do not compete for threads.
pub fn sweep(
    criterion: CriterionId,
    points: &[SweepPoint],
    gamma: f64,
    tol: f64,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    exec.map(points, |p| -> Result<SweepRow> {
        let state = CatState::new(p.alpha)?;
        let channel = ThermalChannel::new(gamma, p.nbar)?;
        let threshold = threshold_with(criterion, &state, &channel, tol, Execution::Sequential)?;
        Ok(SweepRow {
            alpha: p.alpha,
            nbar: p.nbar,
            threshold,
        })
    })
    .into_iter()
    .collect()
}

/// Cartesian product in row-major order (`alpha` outer).
pub fn grid(alphas: &[f64], nbars: &[f64]) -> Vec<SweepPoint> {
    alphas
        .iter()
        .flat_map(|&alpha| nbars.iter().map(move |&nbar| SweepPoint { alpha, nbar }))
        .collect()
}
