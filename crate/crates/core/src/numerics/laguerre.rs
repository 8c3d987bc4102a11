/// Laguerre polynomial `L_n(x)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}`.
pub fn laguerre(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_0(x) ..= L_n(x)` in one pass.
pub fn laguerre_all(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(1.0 - x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * out[k] - kf * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit sum `sum_k C(n,k) (-x)^k / k!`.
    fn expanded(n: usize, x: f64) -> f64 {
        let mut binom = 1.0;
        let mut fact = 1.0;
        let mut sum = 0.0;
        for k in 0..=n {
            if k > 0 {
                binom *= (n - k + 1) as f64 / k as f64;
                fact *= k as f64;
            }
            sum += binom * (-x).powi(k as i32) / fact;
        }
        sum
    }

    #[test]
    fn base_cases() {
        for &x in &[0.0, 1.0, 3.7] {
            assert_eq!(laguerre(0, x), 1.0);
            assert!((laguerre(1, x) - (1.0 - x)).abs() < 1e-15);
        }
    }

    #[test]
    fn value_at_origin() {
        for n in 0..=50 {
            assert!((laguerre(n, 0.0) - 1.0).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn l5_against_expansion() {
        // 1 - 5x + 5x^2 - 5/3 x^3 + 5/24 x^4 - 1/120 x^5 at x = 2.5
        let exact =
            1.0 - 12.5 + 31.25 - 5.0 / 3.0 * 15.625 + 5.0 / 24.0 * 39.0625 - 97.65625 / 120.0;
        assert!((laguerre(5, 2.5) - exact).abs() < 1e-13);
        assert!((expanded(5, 2.5) - exact).abs() < 1e-13);
    }

    #[test]
    fn recurrence_matches_expansion() {
        for n in 0..=10 {
            for i in 0..20 {
                let x = 0.37 * i as f64;
                let a = laguerre(n, x);
                let b = expanded(n, x);
                let rel = (a - b).abs() / b.abs().max(1.0);
                assert!(rel < 1e-10, "n={n} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn all_matches_single() {
        let v = laguerre_all(12, 4.2);
        for (n, &l) in v.iter().enumerate() {
            assert_eq!(l, laguerre(n, 4.2));
        }
    }
}
