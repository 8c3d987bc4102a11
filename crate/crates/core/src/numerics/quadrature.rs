use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// One quadrature node. `ln_weight` is kept alongside `weight` because the
/// outer Gauss-Laguerre weights underflow long before the integrands that
/// multiply them stop growing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub point: f64,
    pub weight: f64,
    pub ln_weight: f64,
}

/// Gauss-Laguerre rule for `int_0^inf e^{-x} g(x) dx`; exact for polynomials
/// of degree `< 2 * order`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<Node>,
    pub order: usize,
}

/// A value stored as `mantissa * exp(ln_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub ln_scale: f64,
}

impl Scaled {
    pub fn plain(value: f64) -> Self {
        Scaled {
            mantissa: value,
            ln_scale: 0.0,
        }
    }

    pub fn value(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa * self.ln_scale.exp()
        }
    }
}

impl From<f64> for Scaled {
    fn from(value: f64) -> Self {
        Scaled::plain(value)
    }
}

const RESCALE: f64 = 1e100;

/// Builds (or fetches from the process-wide cache) the Gauss-Laguerre rule
/// of the given order.
pub fn gauss_laguerre(order: usize) -> Arc<QuadratureRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&order) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build_gauss_laguerre(order));
    cache
        .lock()
        .unwrap()
        .entry(order)
        .or_insert_with(|| Arc::clone(&rule));
    rule
}

/// `(L_n, L_{n-1}, (sum_{k<n} L_k^2, ln_scale))` at `z`, all divided by
/// `e^{ln_scale}` (squares by its square) to keep the recurrence finite.
fn laguerre_pair(n: usize, z: f64) -> (f64, f64, (f64, f64)) {
    let mut p1 = 1.0_f64;
    let mut p2 = 0.0_f64;
    let mut sum_sq = 0.0;
    let mut ln_scale = 0.0;
    for j in 0..n {
        sum_sq += p1 * p1;
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
        if p1.abs() > RESCALE {
            p1 /= RESCALE;
            p2 /= RESCALE;
            sum_sq /= RESCALE * RESCALE;
            ln_scale += RESCALE.ln();
        }
    }
    (p1, p2, (sum_sq, ln_scale))
}

/// Newton iteration on `L_n` seeded with the usual asymptotic guesses.
/// The recurrence is rescaled on the fly so that nodes far out on the
/// positive axis do not overflow; only ratios enter the Newton step and the
/// weights are assembled in log space.
fn build_gauss_laguerre(n: usize) -> QuadratureRule {
    assert!(n >= 1, "quadrature order must be positive");
    let nf = n as f64;
    let mut nodes: Vec<Node> = Vec::with_capacity(n);
    let mut z: f64 = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2].point)
            }
        };
        for _ in 0..200 {
            let (p1, p2, _) = laguerre_pair(n, z);
            let pp = nf * (p1 - p2) / z;
            let z_old = z;
            z = z_old - p1 / pp;
            if (z - z_old).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        // Christoffel form 1 / sum_k L_k(z)^2: a sum of squares, free of the
        // cancellation in the derivative form.
        let (_, _, (sum_sq, ln_scale)) = laguerre_pair(n, z);
        let ln_w = -(sum_sq.ln() + 2.0 * ln_scale);
        nodes.push(Node {
            point: z,
            weight: ln_w.exp(),
            ln_weight: ln_w,
        });
    }
    QuadratureRule { nodes, order: n }
}

/// Adaptive polar rule for `int int e^{-width (u^2+v^2)} f(u, v) du dv`.
///
/// The radial integral is Gauss-Laguerre in `x = r^2`, the angular integral
/// is the trapezoid rule (spectrally convergent for smooth periodic
/// integrands). Both orders are doubled until successive estimates agree to
/// `tol`, taken as relative once the integral exceeds one in magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialQuadrature {
    pub initial_order: usize,
    pub max_doublings: u32,
    pub tol: f64,
}

impl Default for RadialQuadrature {
    fn default() -> Self {
        RadialQuadrature {
            initial_order: 16,
            max_doublings: 6,
            tol: 1e-12,
        }
    }
}

impl RadialQuadrature {
    pub fn with_tol(tol: f64) -> Self {
        RadialQuadrature {
            tol,
            ..Default::default()
        }
    }

    /// Integrates an integrand that may be huge where the Gaussian weight is
    /// tiny; `f` returns its value as a [`Scaled`] pair.
    pub fn integrate_scaled<F>(&self, f: F, width: f64) -> Result<f64>
    where
        F: Fn(f64, f64) -> Scaled,
    {
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::domain(format!(
                "Gaussian width must be positive, got {width}"
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::domain("quadrature tolerance must be positive"));
        }
        let mut previous: Option<f64> = None;
        let mut residual = f64::INFINITY;
        for level in 0..=self.max_doublings {
            let order = self.initial_order << level;
            let estimate = self.estimate(&f, width, order);
            if let Some(prev) = previous {
                residual = (estimate - prev).abs();
                if residual < self.tol * estimate.abs().max(1.0) {
                    return Ok(estimate);
                }
            }
            previous = Some(estimate);
        }
        Err(Error::NonConvergence {
            what: "radial Gaussian quadrature",
            residual,
        })
    }

    pub fn integrate<F>(&self, f: F, width: f64) -> Result<f64>
    where
        F: Fn(f64, f64) -> f64,
    {
        self.integrate_scaled(|u, v| Scaled::plain(f(u, v)), width)
    }

    fn estimate<F>(&self, f: &F, width: f64, order: usize) -> f64
    where
        F: Fn(f64, f64) -> Scaled,
    {
        let rule = gauss_laguerre(order);
        let n_angle = 2 * order;
        let dtheta = 2.0 * PI / n_angle as f64;
        let trig: Vec<(f64, f64)> = (0..n_angle)
            .map(|j| {
                let t = dtheta * j as f64;
                (t.cos(), t.sin())
            })
            .collect();
        let mut total = 0.0;
        for node in &rule.nodes {
            let r = (node.point / width).sqrt();
            let mut ring = 0.0;
            for &(c, s) in &trig {
                let val = f(r * c, r * s);
                if val.mantissa != 0.0 {
                    ring += val.mantissa * (val.ln_scale + node.ln_weight).exp();
                }
            }
            total += ring;
        }
        total * dtheta / (2.0 * width)
    }
}

/// [`RadialQuadrature`] with default orders and the given tolerance.
pub fn integrate_radial_gaussian<F>(f: F, width: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    RadialQuadrature::with_tol(tol).integrate(f, width)
}

pub fn integrate_radial_gaussian_scaled<F>(f: F, width: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Scaled,
{
    RadialQuadrature::with_tol(tol).integrate_scaled(f, width)
}
