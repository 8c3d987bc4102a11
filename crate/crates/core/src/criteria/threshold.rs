use super::CriterionId;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numerics::{bisect, Bracket};

/// Rescaled time after which a criterion declares the state classical.
///
/// A finite `tau_star` comes with a final bracket `(lo, hi)`: the state is
/// nonclassical at `lo`, classical at `hi`, and `hi - lo <= tol`. An infinite
/// `tau_star` marks a channel that never makes the state classical under the
/// criterion. `never_nonclassical` flags states already classical at `tau = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub criterion: CriterionId,
    pub tau_star: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// Every detected change of verdict, in increasing `tau`.
    pub crossings: Vec<f64>,
    pub never_nonclassical: bool,
}

impl ThresholdResult {
    pub fn never(criterion: CriterionId) -> Self {
        ThresholdResult {
            criterion,
            tau_star: 0.0,
            bracket: (0.0, 0.0),
            iterations: 0,
            crossings: Vec::new(),
            never_nonclassical: true,
        }
    }

    pub fn infinite(criterion: CriterionId) -> Self {
        ThresholdResult {
            criterion,
            tau_star: f64::INFINITY,
            bracket: (f64::INFINITY, f64::INFINITY),
            iterations: 0,
            crossings: Vec::new(),
            never_nonclassical: false,
        }
    }

    /// Threshold known in closed form.
    pub fn exact(criterion: CriterionId, tau: f64) -> Self {
        if tau.is_infinite() {
            return Self::infinite(criterion);
        }
        ThresholdResult {
            criterion,
            tau_star: tau,
            bracket: (tau, tau),
            iterations: 0,
            crossings: vec![tau],
            never_nonclassical: false,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.tau_star.is_finite()
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct ThresholdSearch {
    pub initial_hi: f64,
    pub scan_points: usize,
    pub tol: f64,
    pub exec: Execution,
}

const MAX_EXPANSIONS: usize = 40;

/// Locates the supremum of `{tau : nonclassical(tau)}`.
///
/// The verdict is sampled on a uniform grid over `[0, hi]` (with `hi`
/// doubled until the state is classical there); every change of verdict
/// between neighbouring samples is bisected to `tol`, and the last one is the
/// threshold.
pub(crate) fn find_threshold<P>(
    criterion: CriterionId,
    search: ThresholdSearch,
    nonclassical: P,
) -> Result<ThresholdResult>
where
    P: Fn(f64) -> Result<bool> + Sync + Send,
{
    if !(search.tol > 0.0) {
        return Err(Error::domain("threshold tolerance must be positive"));
    }
    if !nonclassical(0.0)? {
        return Ok(ThresholdResult::never(criterion));
    }
    let mut hi = search.initial_hi;
    let mut expansions = 0;
    while nonclassical(hi)? {
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(Error::NonConvergence {
                what: "threshold bracket expansion",
                residual: hi,
            });
        }
        hi *= 2.0;
    }

    let m = search.scan_points.max(2);
    let taus: Vec<f64> = (0..=m).map(|k| hi * k as f64 / m as f64).collect();
    let inner = search.exec.map(&taus[1..m], |&t| nonclassical(t));
    let mut sides = Vec::with_capacity(m + 1);
    sides.push(true);
    for s in inner {
        sides.push(s?);
    }
    sides.push(false);

    let changes: Vec<usize> = (0..m).filter(|&k| sides[k] != sides[k + 1]).collect();
    let refined = search.exec.map(&changes, |&k| {
        let bracket = Bracket::from_sides(taus[k], taus[k + 1], sides[k])?;
        let mut failure = None;
        let out = bisect(
            |t| match nonclassical(t) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    sides[k]
                }
            },
            bracket,
            search.tol,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(out),
        }
    });
    let mut crossings = Vec::with_capacity(refined.len());
    let mut iterations = 0;
    let mut last = None;
    for r in refined {
        let r = r?;
        crossings.push(r.root);
        iterations += r.iterations;
        last = Some(r);
    }
    let last = last.expect("verdict changes between tau = 0 and the classical end point");
    Ok(ThresholdResult {
        criterion,
        tau_star: last.root,
        bracket: (last.lo, last.hi),
        iterations,
        crossings,
        never_nonclassical: false,
    })
}
