use catlab::criteria::{
    fringe_visibility, klyshko_b, photon_probs, tau_vogel, vogel_contour, CriterionId,
    ThresholdResult,
};
use catlab::exec::Execution;
use catlab::fock::{
    cat_density_matrix, cutoff_for, evolve, oracle_char_normal, oracle_photon_probs, step_size,
};
use catlab::numerics::{bisect, Bracket};
use catlab::phase_space::char_normal;
use catlab::sweep::threshold_for;
use catlab::{CatState, PhasePoint, ThermalChannel};
use clap::ValueEnum;
use num_complex::Complex64;

use crate::config::RunConfig;
use crate::output::{format_num, Artifact, Cell};
use crate::CliError;

/// Pass/fail bound for the cross-path comparison.
pub const ORACLE_TOL: f64 = 1e-6;

/// Rows of the threshold table, in order of increasing threshold time.
const TABLE_ROWS: [CriterionId; 5] = [
    CriterionId::Klyshko,
    CriterionId::Vogel1,
    CriterionId::WignerNeg,
    CriterionId::Depth,
    CriterionId::Fringe,
];

fn state(alpha: f64) -> Result<CatState, CliError> {
    CatState::new(alpha).map_err(|e| CliError::Usage(e.to_string()))
}

fn status(r: &ThresholdResult) -> &'static str {
    if r.never_nonclassical {
        "never_nonclassical"
    } else if r.is_finite() {
        "finite"
    } else {
        "infinite"
    }
}

pub fn table(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let st = state(cfg.alpha)?;
    let ch = cfg.channel();
    let mut art = Artifact::new(
        "table",
        &[
            "criterion",
            "tau_star",
            "t_star",
            "bracket_lo",
            "bracket_hi",
            "status",
        ],
    );
    art.metadata.extend(cfg.metadata());
    if cfg.nbar == 0.0 {
        art.meta(
            "note",
            "nbar = 0: no thermal noise, every threshold diverges",
        );
    }
    // the fringe row is infinite; record how far the visibility has decayed
    let k = ch.coefficients(cfg.tau_max)?;
    art.meta(
        "fringe_visibility_at_tau_max",
        format_num(fringe_visibility(&st, &k)),
    );
    let results = Execution::default()
        .map(&TABLE_ROWS, |&c| threshold_for(c, &st, &ch, cfg.tol))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    for r in results {
        art.push(vec![
            r.criterion.as_str().into(),
            r.tau_star.into(),
            (r.tau_star / cfg.gamma).into(),
            r.bracket.0.into(),
            r.bracket.1.into(),
            status(&r).into(),
        ]);
    }
    Ok(art)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVariable {
    Alpha,
    Nbar,
}

impl SweepVariable {
    fn name(self) -> &'static str {
        match self {
            SweepVariable::Alpha => "alpha",
            SweepVariable::Nbar => "nbar",
        }
    }

    fn other(self) -> &'static str {
        match self {
            SweepVariable::Alpha => "nbar",
            SweepVariable::Nbar => "alpha",
        }
    }
}

pub struct SweepPlan {
    pub criterion: CriterionId,
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    /// Values of the other parameter; one series per entry.
    pub series: Vec<f64>,
}

/// Expands `from..=to` into `steps` equally spaced values.
pub fn linspace(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps == 0 || !from.is_finite() || !to.is_finite() {
        return Err(CliError::Usage(
            "range needs finite ends and at least one step".into(),
        ));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    Ok((0..steps)
        .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
        .collect())
}

pub fn sweep(cfg: &RunConfig, plan: &SweepPlan) -> Result<Artifact, CliError> {
    let var = plan.variable;
    let mut art = Artifact::new(
        "sweep",
        &[
            var.name(),
            var.other(),
            "tau_star",
            "t_star",
            "bracket_lo",
            "bracket_hi",
            "reason",
        ],
    );
    art.metadata.extend(cfg.metadata());
    art.meta("criterion", plan.criterion);
    art.meta("variable", var.name());
    let points: Vec<(f64, f64)> = plan
        .series
        .iter()
        .flat_map(|&o| plan.values.iter().map(move |&v| (v, o)))
        .collect();
    let rows = Execution::default().map(&points, |&(v, o)| {
        let (alpha, nbar) = match var {
            SweepVariable::Alpha => (v, o),
            SweepVariable::Nbar => (o, v),
        };
        let run = || -> catlab::Result<ThresholdResult> {
            let st = CatState::new(alpha)?;
            let ch = ThermalChannel::new(cfg.gamma, nbar)?;
            threshold_for(plan.criterion, &st, &ch, cfg.tol)
        };
        match run() {
            Ok(r) => vec![
                v.into(),
                o.into(),
                r.tau_star.into(),
                (r.tau_star / cfg.gamma).into(),
                r.bracket.0.into(),
                r.bracket.1.into(),
                "".into(),
            ],
            Err(e) => {
                let nan = f64::NAN;
                vec![
                    v.into(),
                    o.into(),
                    nan.into(),
                    nan.into(),
                    nan.into(),
                    nan.into(),
                    e.to_string().into(),
                ]
            }
        }
    });
    for row in rows {
        art.push(row);
    }
    Ok(art)
}

pub fn contour(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let st = state(cfg.alpha)?;
    let ch = cfg.channel();
    let mut art = Artifact::new("contour", &["tau", "u"]);
    art.metadata.extend(cfg.metadata());
    let tau_v = tau_vogel(&st, &ch, cfg.tol)?;
    art.meta("tau_v", format_num(tau_v.tau_star));
    for p in vogel_contour(&st, &ch, &cfg.time_grid())? {
        art.push(vec![p.tau.into(), p.u.into()]);
    }
    Ok(art)
}

pub fn klyshko(cfg: &RunConfig, n: usize) -> Result<Artifact, CliError> {
    let st = state(cfg.alpha)?;
    let ch = cfg.channel();
    let taus = cfg.time_grid();
    let b_at = |tau: f64| -> catlab::Result<f64> { klyshko_b(&st, &ch.coefficients(tau)?, n) };
    let samples = Execution::default().map(&taus, |&t| b_at(t));
    let mut art = Artifact::new("klyshko", &["tau", "b", "reason"]);
    art.metadata.extend(cfg.metadata());
    art.meta("n", n);
    let mut crossings = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for (&tau, b) in taus.iter().zip(samples) {
        match b {
            Ok(b) => {
                if let Some((t0, b0)) = prev {
                    if (b0 < 0.0) != (b < 0.0) {
                        let bracket = Bracket::from_sides(t0, tau, b0 < 0.0)?;
                        let r = bisect(
                            |t| b_at(t).map(|v| v < 0.0).unwrap_or(false),
                            bracket,
                            cfg.tol,
                        )?;
                        crossings.push(r.root);
                    }
                }
                prev = Some((tau, b));
                art.push(vec![tau.into(), b.into(), "".into()]);
            }
            Err(e) => {
                prev = None;
                art.push(vec![tau.into(), f64::NAN.into(), e.to_string().into()]);
            }
        }
    }
    let list: Vec<String> = crossings.iter().map(|&t| format_num(t)).collect();
    art.meta("crossings", format!("[{}]", list.join(", ")));
    Ok(art)
}

pub struct OraclePlan {
    pub taus: Vec<f64>,
    pub max_cutoff: usize,
}

pub struct OracleOutcome {
    pub artifact: Artifact,
    pub passed: bool,
}

pub fn oracle_check(cfg: &RunConfig, plan: &OraclePlan) -> Result<OracleOutcome, CliError> {
    let st = state(cfg.alpha)?;
    let ch = cfg.channel();
    let tau_top = plan.taus.iter().cloned().fold(0.0, f64::max);
    if plan.taus.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(CliError::Usage(
            "oracle times must be finite and >= 0".into(),
        ));
    }
    let dim = cutoff_for(&st, &ch, tau_top);
    if dim > plan.max_cutoff {
        return Err(CliError::Usage(format!(
            "the Fock cutoff needed for alpha = {}, nbar = {} up to tau = {tau_top} is {dim}, above the limit \
             of {}; lower --taus or raise --max-cutoff (memory and time grow as cutoff^2)",
            cfg.alpha, cfg.nbar, plan.max_cutoff
        )));
    }
    let samples: Vec<PhasePoint> = [-1.0, -0.5, 0.0, 0.5, 1.0]
        .iter()
        .flat_map(|&u| {
            [-1.0, -0.5, 0.0, 0.5, 1.0]
                .into_iter()
                .map(move |v| PhasePoint::new(u, v))
        })
        .collect();
    let rho0 = cat_density_matrix(&st, dim).map_err(|e| CliError::Oracle(e.to_string()))?;
    let dt = step_size(&ch, dim);
    let rows = Execution::default().map(&plan.taus, |&tau| -> Result<(f64, f64), CliError> {
        let rho = evolve(&rho0, &ch, tau, dt).map_err(|e| CliError::Oracle(e.to_string()))?;
        let k = ch.coefficients(tau)?;
        let analytic = photon_probs(&st, &k, dim - 1)?;
        let dp = oracle_photon_probs(&rho)
            .iter()
            .zip(&analytic)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let mut dchi = 0.0f64;
        for &xi in &samples {
            let o = oracle_char_normal(&rho, xi).map_err(|e| CliError::Oracle(e.to_string()))?;
            dchi = dchi.max((o - Complex64::new(char_normal(&st, &k, xi), 0.0)).norm());
        }
        Ok((dp, dchi))
    });
    let mut art = Artifact::new(
        "oracle-check",
        &["tau", "cutoff", "max_dp", "max_dchi", "pass"],
    );
    art.metadata.extend(cfg.metadata());
    art.meta("oracle_tol", format_num(ORACLE_TOL));
    art.meta("step", format_num(dt));
    art.meta("char_samples", samples.len());
    let mut passed = true;
    for (&tau, row) in plan.taus.iter().zip(rows) {
        let (dp, dchi) = row?;
        let ok = dp < ORACLE_TOL && dchi < ORACLE_TOL;
        passed &= ok;
        art.push(vec![
            tau.into(),
            dim.into(),
            dp.into(),
            dchi.into(),
            Cell::Bool(ok),
        ]);
    }
    Ok(OracleOutcome {
        artifact: art,
        passed,
    })
}
