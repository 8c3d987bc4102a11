use super::threshold::{find_threshold, ThresholdResult, ThresholdSearch};
use super::{tau_nonclassical_depth, CriterionId, STRICT_EPS};
use crate::error::Result;
use crate::exec::Execution;
use crate::numerics::{bisect_sign, golden_section_max, Bracket};
use crate::phase_space::{char_normal, CatState, ChannelCoefficients, PhasePoint, ThermalChannel};

const POINTS_PER_WIDTH: f64 = 20.0;
const MAX_SCAN_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VogelSupremum {
    pub value: f64,
    pub arg_u: f64,
}

/// Upper end of the `u` range holding every local maximum of `Phi(u, 0)`:
/// the displaced lobe sits at `c alpha / d`.
fn u_range(state: &CatState, coeffs: &ChannelCoefficients) -> f64 {
    coeffs.c() * state.alpha() / coeffs.d() + 5.0 / (1.0 + coeffs.d()).sqrt()
}

fn phi_axis(state: &CatState, coeffs: &ChannelCoefficients, u: f64) -> f64 {
    char_normal(state, coeffs, PhasePoint::new(u, 0.0))
}

/// `sup_u Phi_t(u, 0)`. Since `Phi_t(u, v) <= Phi_t(u, 0)` and `Phi_t` is
/// even, this is the supremum of the characteristic function over the whole
/// plane. It is at least 1 (attained at `u = 0`) and infinite when `d = 0`
/// and `alpha > 0`.
pub fn vogel_supremum(state: &CatState, coeffs: &ChannelCoefficients) -> VogelSupremum {
    if state.alpha() == 0.0 {
        return VogelSupremum {
            value: 1.0,
            arg_u: 0.0,
        };
    }
    if coeffs.d() == 0.0 {
        return VogelSupremum {
            value: f64::INFINITY,
            arg_u: f64::INFINITY,
        };
    }
    let u_max = u_range(state, coeffs);
    let sigma = 1.0 / (2.0 * coeffs.d()).sqrt();
    let n = ((u_max * POINTS_PER_WIDTH / sigma).ceil() as usize).clamp(400, MAX_SCAN_POINTS);
    let h = u_max / n as f64;

    let (mut best_u, mut best) = (0.0, 1.0);
    for i in 1..=n {
        let u = h * i as f64;
        let val = phi_axis(state, coeffs, u);
        if val > best {
            best = val;
            best_u = u;
        }
    }
    if best_u > 0.0 {
        let (u, val) = golden_section_max(
            |u| phi_axis(state, coeffs, u),
            (best_u - h).max(0.0),
            best_u + h,
            1e-12 * best_u.max(1.0),
        );
        if val > best {
            best = val;
            best_u = u;
        }
    }
    VogelSupremum {
        value: best,
        arg_u: best_u,
    }
}

fn vogel_search(channel: &ThermalChannel, tol: f64, exec: Execution) -> ThresholdSearch {
    ThresholdSearch {
        initial_hi: 2.0 * tau_nonclassical_depth(channel),
        scan_points: 32,
        tol,
        exec,
    }
}

/// Time after which `|Phi_t| <= 1` everywhere (first-order Vogel criterion).
pub fn tau_vogel(state: &CatState, channel: &ThermalChannel, tol: f64) -> Result<ThresholdResult> {
    tau_vogel_in(state, channel, tol, Execution::default())
}

pub(crate) fn tau_vogel_in(
    state: &CatState,
    channel: &ThermalChannel,
    tol: f64,
    exec: Execution,
) -> Result<ThresholdResult> {
    let id = CriterionId::Vogel1;
    let nonclassical = |tau: f64| -> Result<bool> {
        let k = channel.coefficients(tau)?;
        Ok(vogel_supremum(state, &k).value > 1.0 + STRICT_EPS)
    };
    if !nonclassical(0.0)? {
        return Ok(ThresholdResult::never(id));
    }
    if channel.nbar() == 0.0 {
        return Ok(ThresholdResult::infinite(id));
    }
    find_threshold(id, vogel_search(channel, tol, exec), nonclassical)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPoint {
    pub tau: f64,
    pub u: f64,
}

/// Points of the `Phi_t(u, 0) = 1` contour with `u > 0` at each requested
/// time. The state is first-order nonclassical beneath the curve.
pub fn vogel_contour(
    state: &CatState,
    channel: &ThermalChannel,
    taus: &[f64],
) -> Result<Vec<ContourPoint>> {
    if state.alpha() == 0.0 {
        return Ok(Vec::new());
    }
    let rows = Execution::default().map(taus, |&tau| -> Result<Vec<ContourPoint>> {
        let k = channel.coefficients(tau)?;
        if k.d() == 0.0 {
            return Ok(Vec::new());
        }
        let u_max = u_range(state, &k);
        let sigma = 1.0 / (2.0 * k.d()).sqrt();
        let n = ((u_max * POINTS_PER_WIDTH / sigma).ceil() as usize).clamp(400, MAX_SCAN_POINTS);
        let h = u_max / n as f64;
        let excess = |u: f64| phi_axis(state, &k, u) - 1.0 - STRICT_EPS;
        let mut out = Vec::new();
        let mut prev = excess(h);
        for i in 2..=n {
            let u = h * i as f64;
            let cur = excess(u);
            if (prev < 0.0) != (cur < 0.0) {
                let b = Bracket::from_sides(u - h, u, prev < 0.0)?;
                let r = bisect_sign(excess, b, 1e-10 * u.max(1.0))?;
                out.push(ContourPoint { tau, u: r.root });
            }
            prev = cur;
        }
        Ok(out)
    });
    let mut points = Vec::new();
    for r in rows {
        points.extend(r?);
    }
    Ok(points)
}

/// Second-order Vogel form
/// `|Phi_1|^2 + |Phi_2|^2 + |Phi_12|^2 - 2 Re(Phi_1 Phi_2 Phi_12^*)` with
/// `Phi_1 = Phi(xi1)`, `Phi_2 = Phi(xi2)`, `Phi_12 = Phi(xi1 + xi2)`. Values
/// above 1 witness nonclassicality. `Phi` is real for a real-amplitude cat.
pub fn vogel_second_order(
    state: &CatState,
    coeffs: &ChannelCoefficients,
    xi1: PhasePoint,
    xi2: PhasePoint,
) -> f64 {
    let p1 = char_normal(state, coeffs, xi1);
    let p2 = char_normal(state, coeffs, xi2);
    let p12 = char_normal(state, coeffs, xi1 + xi2);
    second_order_form(p1, p2, p12)
}

fn second_order_form(p1: f64, p2: f64, p12: f64) -> f64 {
    p1 * p1 + p2 * p2 + p12 * p12 - 2.0 * p1 * p2 * p12
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderMax {
    pub value: f64,
    pub u1: f64,
    pub u2: f64,
}

/// Maximum of the second-order form over pairs of points on the `u` axis:
/// a grid search over `(u1, u2)` followed by coordinate-wise golden-section
/// refinement.
pub fn vogel_second_order_max(state: &CatState, coeffs: &ChannelCoefficients) -> SecondOrderMax {
    if coeffs.d() == 0.0 {
        let value = if state.alpha() > 0.0 {
            f64::INFINITY
        } else {
            1.0
        };
        return SecondOrderMax {
            value,
            u1: 0.0,
            u2: 0.0,
        };
    }
    let u_max = u_range(state, coeffs);
    let sigma = 1.0 / (2.0 * coeffs.d()).sqrt();
    let n = ((u_max * 10.0 / sigma).ceil() as usize).clamp(50, 600);
    let h = u_max / n as f64;
    let ni = n as i64;
    // Phi(k h) for k in [-2n, 2n]
    let table: Vec<f64> = (-2 * ni..=2 * ni)
        .map(|k| phi_axis(state, coeffs, k as f64 * h))
        .collect();
    let phi = |k: i64| table[(k + 2 * ni) as usize];

    // The form is symmetric under swapping the points and under a global
    // sign flip, so u1 >= 0 suffices.
    let (mut bi, mut bj, mut best) = (0, 0, 1.0);
    for i in 0..=ni {
        for j in -ni..=ni {
            let val = second_order_form(phi(i), phi(j), phi(i + j));
            if val > best {
                best = val;
                bi = i;
                bj = j;
            }
        }
    }
    let form = |u1: f64, u2: f64| {
        vogel_second_order(
            state,
            coeffs,
            PhasePoint::new(u1, 0.0),
            PhasePoint::new(u2, 0.0),
        )
    };
    let (mut u1, mut u2) = (bi as f64 * h, bj as f64 * h);
    for _ in 0..3 {
        let (a, _) = golden_section_max(|x| form(x, u2), u1 - h, u1 + h, 1e-12 * u_max);
        u1 = a;
        let (b, _) = golden_section_max(|y| form(u1, y), u2 - h, u2 + h, 1e-12 * u_max);
        u2 = b;
    }
    let refined = form(u1, u2);
    if refined > best {
        SecondOrderMax {
            value: refined,
            u1,
            u2,
        }
    } else {
        SecondOrderMax {
            value: best,
            u1: bi as f64 * h,
            u2: bj as f64 * h,
        }
    }
}

/// Time after which the second-order Vogel form stays `<= 1`.
pub fn tau_vogel_second_order(
    state: &CatState,
    channel: &ThermalChannel,
    tol: f64,
) -> Result<ThresholdResult> {
    tau_vogel_second_order_in(state, channel, tol, Execution::default())
}

pub(crate) fn tau_vogel_second_order_in(
    state: &CatState,
    channel: &ThermalChannel,
    tol: f64,
    exec: Execution,
) -> Result<ThresholdResult> {
    let id = CriterionId::Vogel2;
    let nonclassical = |tau: f64| -> Result<bool> {
        let k = channel.coefficients(tau)?;
        Ok(vogel_second_order_max(state, &k).value > 1.0 + STRICT_EPS)
    };
    if !nonclassical(0.0)? {
        return Ok(ThresholdResult::never(id));
    }
    if channel.nbar() == 0.0 {
        return Ok(ThresholdResult::infinite(id));
    }
    find_threshold(id, vogel_search(channel, tol, exec), nonclassical)
}
