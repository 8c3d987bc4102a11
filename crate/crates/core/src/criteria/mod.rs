//! Nonclassicality indicators and the threshold times at which each one
//! declares the decohering cat classical.

mod depth;
mod fringe;
mod klyshko;
mod threshold;
mod vogel;
mod wigner;

use std::fmt;
use std::str::FromStr;

pub use depth::{exact_depth_threshold, exact_depth_threshold_with, tau_nonclassical_depth};
pub use fringe::fringe_visibility;
pub use klyshko::{
    klyshko_b, klyshko_b_from_probs, klyshko_subsumption_check, photon_prob, photon_probs,
    tau_klyshko, SubsumptionReport,
};
pub use threshold::ThresholdResult;
pub use vogel::{
    tau_vogel, tau_vogel_second_order, vogel_contour, vogel_second_order, vogel_second_order_max,
    vogel_supremum, ContourPoint, SecondOrderMax, VogelSupremum,
};
pub use wigner::{tau_wigner_negativity, tau_wigner_numeric, wigner_minimum, WignerMinimum};

pub(crate) use depth::exact_depth_threshold_in;
pub(crate) use klyshko::tau_klyshko_in;
pub(crate) use vogel::{tau_vogel_in, tau_vogel_second_order_in};
pub(crate) use wigner::tau_wigner_numeric_in;

use crate::error::{Error, Result};
use crate::phase_space::{CatState, ChannelCoefficients};

/// Margin applied to strict inequalities (`sup > 1`, `B(n) < 0`) so that
/// boundary states classify deterministically. Relative for `B(n)`.
pub const STRICT_EPS: f64 = 1e-10;

/// Relative margin on the sign of a scaled quasiprobability minimum.
pub const SIGN_EPS: f64 = 1e-12;

/// Default bisection tolerance in `tau`.
pub const DEFAULT_TAU_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriterionId {
    /// Wigner interference fringe visibility.
    Fringe,
    /// Nonclassical depth; threshold is the closed-form `s_tau = -1` bound.
    Depth,
    /// Wigner negativity; threshold is the closed-form `s_tau = 0` bound.
    WignerNeg,
    /// First-order Vogel criterion `|Phi| > 1`.
    Vogel1,
    /// Second-order Vogel criterion.
    Vogel2,
    /// Klyshko criterion `B(1) < 0`.
    Klyshko,
    /// Numerically located vanishing of the P-function negativity.
    DepthExact,
    /// Numerically located vanishing of the Wigner negativity.
    WignerNumeric,
}

impl CriterionId {
    pub const ALL: [CriterionId; 8] = [
        CriterionId::Fringe,
        CriterionId::Depth,
        CriterionId::WignerNeg,
        CriterionId::Vogel1,
        CriterionId::Vogel2,
        CriterionId::Klyshko,
        CriterionId::DepthExact,
        CriterionId::WignerNumeric,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CriterionId::Fringe => "fringe",
            CriterionId::Depth => "depth",
            CriterionId::WignerNeg => "wigner_neg",
            CriterionId::Vogel1 => "vogel1",
            CriterionId::Vogel2 => "vogel2",
            CriterionId::Klyshko => "klyshko",
            CriterionId::DepthExact => "depth_exact",
            CriterionId::WignerNumeric => "wigner_numeric",
        }
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CriterionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CriterionId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown criterion '{s}'")))
    }
}

/// Indicator value at one instant and the verdict it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionVerdict {
    pub criterion: CriterionId,
    pub value: f64,
    pub nonclassical: bool,
}

/// Evaluates one indicator on the state evolved to `coeffs`.
///
/// | criterion | value | nonclassical when |
/// |---|---|---|
/// | fringe | visibility `F` | `F > 0` and `alpha > 0` |
/// | depth, depth_exact | `s_tau` | `s_tau > -1` (bound) / P negative (exact) |
/// | wigner_neg, wigner_numeric | `min W` | `min W < 0` |
/// | vogel1 | `sup Phi(u, 0)` | `> 1 + STRICT_EPS` |
/// | vogel2 | max of the 2nd-order form | `> 1 + STRICT_EPS` |
/// | klyshko | `B(1)` | `< -STRICT_EPS` times the size of its terms |
pub fn verdict(
    criterion: CriterionId,
    state: &CatState,
    coeffs: &ChannelCoefficients,
) -> Result<CriterionVerdict> {
    let (value, nonclassical) = match criterion {
        CriterionId::Fringe => {
            let f = fringe_visibility(state, coeffs);
            (f, state.alpha() > 0.0 && f > 0.0)
        }
        CriterionId::Depth => (coeffs.s(), state.alpha() > 0.0 && coeffs.s() > -1.0),
        CriterionId::DepthExact => {
            let nc = depth::p_function_negative(state, coeffs, 1.0)?;
            (coeffs.s(), nc)
        }
        CriterionId::WignerNeg | CriterionId::WignerNumeric => {
            let m = wigner_minimum(state, coeffs);
            (m.value, m.negative)
        }
        CriterionId::Vogel1 => {
            let sup = vogel_supremum(state, coeffs);
            (sup.value, sup.value > 1.0 + STRICT_EPS)
        }
        CriterionId::Vogel2 => {
            let m = vogel_second_order_max(state, coeffs);
            (m.value, m.value > 1.0 + STRICT_EPS)
        }
        CriterionId::Klyshko => {
            let b = klyshko_b(state, coeffs, 1)?;
            (b, klyshko::klyshko_negative(state, coeffs, 1)?)
        }
    };
    Ok(CriterionVerdict {
        criterion,
        value,
        nonclassical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::ThermalChannel;

    #[test]
    fn ids_round_trip() {
        for id in CriterionId::ALL {
            assert_eq!(id.as_str().parse::<CriterionId>().unwrap(), id);
        }
        assert!("bogus".parse::<CriterionId>().is_err());
    }

    #[test]
    fn initial_cat_is_nonclassical_everywhere() {
        let st = CatState::new(2.0).unwrap();
        let id = ChannelCoefficients::identity();
        for c in CriterionId::ALL {
            let v = verdict(c, &st, &id).unwrap();
            assert!(v.nonclassical, "{c}: {v:?}");
        }
    }

    #[test]
    fn late_cat_is_classical_for_finite_criteria() {
        let st = CatState::new(2.0).unwrap();
        let k = ThermalChannel::with_nbar(100.0)
            .unwrap()
            .coefficients(0.02)
            .unwrap();
        for c in CriterionId::ALL {
            let v = verdict(c, &st, &k).unwrap();
            assert_eq!(v.nonclassical, c == CriterionId::Fringe, "{c}: {v:?}");
        }
    }
}
