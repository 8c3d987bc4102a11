//! Brute-force reference: the truncated Fock-space density matrix evolved
//! under the thermal master equation
//! `d rho / d tau = (nbar+1) D[a] rho + nbar D[a^dag] rho` with
//! `D[L] rho = 2 L rho L^dag - L^dag L rho - rho L^dag L`.
//!
//! Only test and verification code calls into this module; the analytic
//! path never depends on it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase_space::{CatState, PhasePoint, ThermalChannel};

/// Leakage out of the truncated space above which [`evolve`] fails.
pub const MAX_TRACE_LEAKAGE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    dim: usize,
    /// Row-major `rho[m][n]`.
    elements: Vec<Complex64>,
}

impl FockDensityMatrix {
    pub fn zeros(dim: usize) -> Self {
        FockDensityMatrix {
            dim,
            elements: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.elements[m * self.dim + n]
    }

    fn set(&mut self, m: usize, n: usize, val: Complex64) {
        self.elements[m * self.dim + n] = val;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|m| self.get(m, m).re).sum()
    }

    /// Largest `|rho_mn - conj(rho_nm)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for m in 0..self.dim {
            for n in m..self.dim {
                worst = worst.max((self.get(m, n) - self.get(n, m).conj()).norm());
            }
        }
        worst
    }

    pub fn mean_photon_number(&self) -> f64 {
        (0..self.dim).map(|m| m as f64 * self.get(m, m).re).sum()
    }
}

/// Truncation rule: the Poisson support of the cat plus the number of levels
/// over which a thermal distribution with the photons added up to `tau_max`
/// falls below `1e-12`. Leakage through the top level is an integrated flux
/// proportional to `nbar`, so the thermal tail has to be cut well below the
/// target accuracy.
pub fn cutoff_for(state: &CatState, channel: &ThermalChannel, tau_max: f64) -> usize {
    let a = state.alpha();
    let n_eff = channel.nbar() * -(-2.0 * tau_max).exp_m1();
    let coherent = a * a + 10.0 * a + 20.0;
    let thermal = if n_eff > 0.0 {
        (1e-12f64).ln() / (n_eff / (1.0 + n_eff)).ln()
    } else {
        0.0
    };
    (coherent + thermal).ceil() as usize
}

/// `|cat><cat|` in the Fock basis `|0> .. |dim-1>`.
pub fn cat_density_matrix(state: &CatState, dim: usize) -> Result<FockDensityMatrix> {
    if dim == 0 {
        return Err(Error::Truncation("dimension must be positive".into()));
    }
    let a = state.alpha();
    let scale = 1.0 / state.norm().sqrt();
    // a^n / sqrt(n!) built iteratively
    let mut amp = Vec::with_capacity(dim);
    let mut term = (-0.5 * a * a).exp();
    for n in 0..dim {
        if n > 0 {
            term *= a / (n as f64).sqrt();
        }
        let c = if n % 2 == 0 { 2.0 * term * scale } else { 0.0 };
        amp.push(c);
    }
    let norm: f64 = amp.iter().map(|c| c * c).sum();
    if norm < 1.0 - 1e-10 {
        return Err(Error::Truncation(format!(
            "cat with alpha = {a} keeps only {norm:.12} of its norm in {dim} Fock states"
        )));
    }
    let mut rho = FockDensityMatrix::zeros(dim);
    for m in 0..dim {
        for n in 0..dim {
            rho.set(m, n, Complex64::new(amp[m] * amp[n], 0.0));
        }
    }
    Ok(rho)
}

/// Time derivative of `rho`, with operators truncated at the top Fock level.
fn rhs(rho: &FockDensityMatrix, nbar: f64, out: &mut [Complex64]) {
    let dim = rho.dim;
    let up = nbar + 1.0;
    for m in 0..dim {
        for n in 0..dim {
            let (mf, nf) = (m as f64, n as f64);
            let r = rho.get(m, n);
            let mut acc = r * (-(up * (mf + nf) + nbar * (mf + nf + 2.0)));
            if m + 1 < dim && n + 1 < dim {
                acc += rho.get(m + 1, n + 1) * (2.0 * up * ((mf + 1.0) * (nf + 1.0)).sqrt());
            }
            if m > 0 && n > 0 {
                acc += rho.get(m - 1, n - 1) * (2.0 * nbar * (mf * nf).sqrt());
            }
            out[m * dim + n] = acc;
        }
    }
}

/// Step size for the explicit integrator. Besides the fixed caps, the step
/// keeps `h * lambda_max <= 1/4`, where `lambda_max` is the fastest decay rate
/// of the truncated generator; a bound at the edge of the RK4 stability
/// region is stable but leaves errors near `1e-6` on the populated levels.
pub fn step_size(channel: &ThermalChannel, dim: usize) -> f64 {
    let nbar = channel.nbar();
    let stiff = (2.0 * nbar + 1.0) * 2.0 * dim as f64 + 2.0 * nbar;
    (1e-3f64).min(0.1 / (nbar + 1.0)).min(0.25 / stiff)
}

/// `out = x + a k`
fn axpy(out: &mut [Complex64], x: &[Complex64], k: &[Complex64], a: f64) {
    for ((o, &x), &k) in out.iter_mut().zip(x).zip(k) {
        *o = x + k * a;
    }
}

/// Integrates the master equation from `0` to `tau` with classical RK4 and
/// step at most `dt`.
pub fn evolve(
    rho: &FockDensityMatrix,
    channel: &ThermalChannel,
    tau: f64,
    dt: f64,
) -> Result<FockDensityMatrix> {
    if !(tau >= 0.0) || !(dt > 0.0) {
        return Err(Error::domain(format!(
            "need tau >= 0 and dt > 0, got tau = {tau}, dt = {dt}"
        )));
    }
    let mut state = rho.clone();
    if tau == 0.0 {
        return Ok(state);
    }
    let initial_trace = rho.trace();
    let steps = (tau / dt).ceil() as usize;
    let h = tau / steps as f64;
    let nbar = channel.nbar();
    let len = state.elements.len();
    let mut k1 = vec![Complex64::new(0.0, 0.0); len];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = state.clone();
    for _ in 0..steps {
        rhs(&state, nbar, &mut k1);
        axpy(&mut tmp.elements, &state.elements, &k1, 0.5 * h);
        rhs(&tmp, nbar, &mut k2);
        axpy(&mut tmp.elements, &state.elements, &k2, 0.5 * h);
        rhs(&tmp, nbar, &mut k3);
        axpy(&mut tmp.elements, &state.elements, &k3, h);
        rhs(&tmp, nbar, &mut k4);
        for (i, x) in state.elements.iter_mut().enumerate() {
            *x += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
    }
    let leakage = initial_trace - state.trace();
    if leakage.abs() > MAX_TRACE_LEAKAGE {
        return Err(Error::Truncation(format!(
            "trace leaked by {leakage:e} in {} Fock states; increase the cutoff",
            rho.dim
        )));
    }
    Ok(state)
}

/// Diagonal of `rho` with round-off negatives below `1e-14` clipped to zero.
pub fn oracle_photon_probs(rho: &FockDensityMatrix) -> Vec<f64> {
    (0..rho.dim)
        .map(|m| {
            let p = rho.get(m, m).re;
            if p < 0.0 && p > -1e-14 {
                0.0
            } else {
                p
            }
        })
        .collect()
}

/// Normally ordered characteristic function `Tr[rho D(xi)] e^{|xi|^2 / 2}`.
///
/// The displacement matrix elements come from the associated-Laguerre
/// recurrence in the normalized form
/// `f_n = sqrt(n! / (n+k)!) L_n^{(k)}(|xi|^2)`, which stays bounded where the
/// factorial ratios would overflow.
pub fn oracle_char_normal(rho: &FockDensityMatrix, xi: PhasePoint) -> Result<Complex64> {
    let dim = rho.dim;
    let x = xi.norm_sqr();
    if x > 0.25 * dim as f64 {
        return Err(Error::Truncation(format!(
            "|xi|^2 = {x} too large for {dim} Fock states (residual not controlled)"
        )));
    }
    let z = Complex64::new(xi.u, xi.v);
    let minus_zc = -z.conj();
    let mut total = Complex64::new(0.0, 0.0);
    // <n+k| D |n> = z^k f_n  and  <n| D |n+k> = (-z*)^k f_n  (e^{-|z|^2/2} dropped)
    let mut zk = Complex64::new(1.0, 0.0);
    let mut mzk = Complex64::new(1.0, 0.0);
    let mut inv_sqrt_kfact = 1.0;
    for k in 0..dim {
        if k > 0 {
            zk *= z;
            mzk *= minus_zc;
            inv_sqrt_kfact /= (k as f64).sqrt();
        }
        let kf = k as f64;
        let mut f_prev = 0.0;
        let mut f = inv_sqrt_kfact;
        for n in 0..(dim - k) {
            let lower = zk * f;
            // Tr[rho D] = sum_{m,n} rho_{n m} D_{m n}
            total += rho.get(n, n + k) * lower;
            if k > 0 {
                total += rho.get(n + k, n) * (mzk * f);
            }
            let nf = n as f64;
            let next = ((2.0 * nf + kf + 1.0 - x) * f - (nf * (nf + kf)).sqrt() * f_prev)
                / ((nf + 1.0) * (nf + 1.0 + kf)).sqrt();
            f_prev = f;
            f = next;
        }
    }
    if !total.re.is_finite() || !total.im.is_finite() {
        return Err(Error::NonConvergence {
            what: "displacement matrix elements",
            residual: f64::INFINITY,
        });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::{char_normal, ChannelCoefficients};

    fn cat(a: f64) -> CatState {
        CatState::new(a).unwrap()
    }

    #[test]
    fn vacuum_projector() {
        let rho = cat_density_matrix(&cat(0.0), 5).unwrap();
        assert_eq!(rho.get(0, 0).re, 1.0);
        assert_eq!(rho.trace(), 1.0);
    }

    #[test]
    fn cat_matrix_parity_and_trace() {
        let rho = cat_density_matrix(&cat(2.0), 40).unwrap();
        let tr = rho.trace();
        assert!((1.0 - 1e-10..=1.0 + 1e-14).contains(&tr));
        assert_eq!(rho.get(0, 1).norm(), 0.0);
        let p = oracle_photon_probs(&rho);
        assert_eq!(p[1], 0.0);
        assert_eq!(p[3], 0.0);
        assert!(cat_density_matrix(&cat(4.0), 10).is_err());
    }

    #[test]
    fn tau_zero_is_identity() {
        let rho = cat_density_matrix(&cat(1.0), 30).unwrap();
        let ch = ThermalChannel::with_nbar(5.0).unwrap();
        assert_eq!(evolve(&rho, &ch, 0.0, 1e-3).unwrap(), rho);
    }

    #[test]
    fn vacuum_thermalizes() {
        let ch = ThermalChannel::with_nbar(1.0).unwrap();
        let rho = cat_density_matrix(&cat(0.0), 40).unwrap();
        for &tau in &[0.1, 0.5, 2.0] {
            let out = evolve(&rho, &ch, tau, step_size(&ch, 40)).unwrap();
            let expected = 1.0 - (-2.0 * tau).exp();
            assert!((out.mean_photon_number() - expected).abs() < 1e-8);
        }
    }

    #[test]
    fn cat_energy_decay() {
        let ch = ThermalChannel::with_nbar(1.0).unwrap();
        let st = cat(2.0);
        let dim = cutoff_for(&st, &ch, 0.3);
        let rho = cat_density_matrix(&st, dim).unwrap();
        let out = evolve(&rho, &ch, 0.3, step_size(&ch, dim)).unwrap();
        let e = (-0.6f64).exp();
        let expected = st.mean_photon_number() * e + (1.0 - e);
        assert!((out.mean_photon_number() - expected).abs() < 1e-8);
        assert!(out.hermiticity_error() < 1e-12);
        assert!((out.trace() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn char_matches_closed_form_initially() {
        let st = cat(2.0);
        let rho = cat_density_matrix(&st, 60).unwrap();
        let id = ChannelCoefficients::identity();
        assert!(
            (oracle_char_normal(&rho, PhasePoint::ORIGIN).unwrap().re - rho.trace()).abs() < 1e-15
        );
        for &(u, v) in &[(1.0, 0.0), (0.3, -0.7), (-1.2, 0.9)] {
            let xi = PhasePoint::new(u, v);
            let o = oracle_char_normal(&rho, xi).unwrap();
            assert!(
                (o.re - char_normal(&st, &id, xi)).abs() < 1e-10,
                "{o} at {xi:?}"
            );
            assert!(o.im.abs() < 1e-12);
        }
        assert!(oracle_char_normal(&rho, PhasePoint::new(10.0, 0.0)).is_err());
    }

    #[test]
    fn leakage_is_reported() {
        let ch = ThermalChannel::with_nbar(50.0).unwrap();
        let rho = cat_density_matrix(&cat(1.0), 25).unwrap();
        assert!(matches!(
            evolve(&rho, &ch, 0.2, step_size(&ch, 25)),
            Err(Error::Truncation(_))
        ));
    }
}
