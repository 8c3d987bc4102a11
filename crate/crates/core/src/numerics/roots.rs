use crate::error::{Error, Result};

/// Interval `[lo, hi]` across which a predicate changes value.
///
/// `lo_side` is the predicate value at `lo`; the value at `hi` is its
/// negation. Real functions are bracketed through the predicate `f(x) < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
    lo_side: bool,
}

impl Bracket {
    /// Certifies the bracket by evaluating `pred` at both end points.
    pub fn from_predicate<P>(mut pred: P, lo: f64, hi: f64) -> Result<Self>
    where
        P: FnMut(f64) -> bool,
    {
        check_order(lo, hi)?;
        let a = pred(lo);
        let b = pred(hi);
        if a == b {
            return Err(Error::InvalidBracket { lo, hi });
        }
        Ok(Bracket { lo, hi, lo_side: a })
    }

    /// Certifies a sign change of `f` between `lo` and `hi`.
    pub fn from_function<F>(mut f: F, lo: f64, hi: f64) -> Result<Self>
    where
        F: FnMut(f64) -> f64,
    {
        Self::from_predicate(|x| f(x) < 0.0, lo, hi)
    }

    /// Bracket whose end-point values the caller has already evaluated.
    pub fn from_sides(lo: f64, hi: f64, lo_side: bool) -> Result<Self> {
        check_order(lo, hi)?;
        Ok(Bracket { lo, hi, lo_side })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn check_order(lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(Error::InvalidBracket { lo, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    /// Midpoint of the final bracket.
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

/// Bisects a predicate until `hi - lo <= tol`. Every evaluation point lies
/// strictly inside the initial bracket.
pub fn bisect<P>(mut pred: P, bracket: Bracket, tol: f64) -> Result<Bisection>
where
    P: FnMut(f64) -> bool,
{
    if !(tol > 0.0) {
        return Err(Error::domain(format!(
            "bisection tolerance must be positive, got {tol}"
        )));
    }
    let Bracket {
        mut lo,
        mut hi,
        lo_side,
    } = bracket;
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) == lo_side {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(Bisection {
        root: lo + 0.5 * (hi - lo),
        lo,
        hi,
        iterations,
    })
}

/// Bisection on the sign of a real function.
pub fn bisect_sign<F>(mut f: F, bracket: Bracket, tol: f64) -> Result<Bisection>
where
    F: FnMut(f64) -> f64,
{
    bisect(|x| f(x) < 0.0, bracket, tol)
}
