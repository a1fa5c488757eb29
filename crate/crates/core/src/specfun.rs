//! Finite-series special functions: Hermite and Laguerre polynomials,
//! terminating Gauss hypergeometric series and log-factorials.
//!
//! Everything here is exact up to rounding for the parameter ranges the rest
//! of the crate uses; nothing attempts analytic continuation.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest polynomial degree accepted by the recurrences.
pub const MAX_DEGREE: usize = 200;

fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::Size { n, max: MAX_DEGREE });
    }
    Ok(())
}

/// Dense polynomial in ascending power order.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySeries {
    coefficients: Vec<f64>,
}

impl PolySeries {
    pub fn new(mut coefficients: Vec<f64>) -> Self {
        while coefficients.len() > 1 && *coefficients.last().unwrap() == 0.0 {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(0.0);
        }
        PolySeries { coefficients }
    }

    /// Physicists' Hermite polynomial `H_n` in monomial form.
    ///
    /// Only meant for inspection and small `n`; evaluation should go through
    /// [`hermite_eval`], which avoids the cancellation of the expanded form.
    pub fn hermite(n: usize) -> Result<Self> {
        check_degree(n)?;
        let mut prev = vec![1.0];
        if n == 0 {
            return Ok(Self::new(prev));
        }
        let mut cur = vec![0.0, 2.0];
        for k in 1..n {
            let mut next = vec![0.0; k + 2];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += 2.0 * c;
            }
            for (i, c) in prev.iter().enumerate() {
                next[i] -= 2.0 * k as f64 * c;
            }
            prev = cur;
            cur = next;
        }
        Ok(Self::new(cur))
    }

    /// Laguerre polynomial `L_n` in monomial form.
    pub fn laguerre(n: usize) -> Result<Self> {
        check_degree(n)?;
        // L_n(x) = sum_k (-1)^k C(n,k) x^k / k!
        let mut coefficients = Vec::with_capacity(n + 1);
        let mut c = 1.0;
        for k in 0..=n {
            coefficients.push(c);
            c *= -((n - k) as f64) / (((k + 1) * (k + 1)) as f64);
        }
        Ok(Self::new(coefficients))
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// `H_n(u)` for complex `u` via `H_{k+1} = 2u H_k - 2k H_{k-1}`.
pub fn hermite_eval(n: usize, u: Complex64) -> Result<Complex64> {
    check_degree(n)?;
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * u;
    for k in 1..n {
        let next = 2.0 * u * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `H_n(u) / sqrt(2^n n!)`, computed with the normalized recurrence so that
/// large `n` neither overflows nor loses the normalization to rounding.
pub fn hermite_scaled(n: usize, u: Complex64) -> Result<Complex64> {
    check_degree(n)?;
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = std::f64::consts::SQRT_2 * u;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Terminating Gauss hypergeometric series `2F1(alpha, beta; gamma; t)`.
///
/// One of `alpha`, `beta` must be a nonpositive integer; the sum then has
/// `1 + |that parameter|` terms. Anything else is rejected.
pub fn terminating_2f1(alpha: f64, beta: f64, gamma: f64, t: f64) -> Result<f64> {
    let terms = match (nonpositive_integer(alpha), nonpositive_integer(beta)) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(Error::Domain(format!("2F1({alpha}, {beta}; {gamma}; t) does not terminate"))),
    };
    if let Some(g) = nonpositive_integer(gamma) {
        // Harmless only when the series stops before the pole is reached.
        if g < terms {
            return Err(Error::Domain(format!("2F1 lower parameter {gamma} hits a pole before termination")));
        }
    }
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..terms {
        let kf = k as f64;
        term *= (alpha + kf) * (beta + kf) / ((gamma + kf) * (kf + 1.0)) * t;
        sum += term;
    }
    Ok(crate::fault::perturb_2f1(sum))
}

/// `ln 2F1(alpha, beta; gamma; t)` for terminating series whose terms are all
/// positive. Agrees with [`terminating_2f1`] where that is finite and keeps
/// going in the log domain where it overflows.
pub fn ln_terminating_2f1(alpha: f64, beta: f64, gamma: f64, t: f64) -> Result<f64> {
    let direct = terminating_2f1(alpha, beta, gamma, t)?;
    if direct.is_finite() && direct > 0.0 {
        return Ok(direct.ln());
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("log-domain 2F1 needs t > 0, got {t}")));
    }
    let ln_t = t.ln();
    let mut logs = vec![0.0];
    let mut acc = 0.0;
    for k in 0.. {
        let kf = k as f64;
        let num = (alpha + kf) * (beta + kf);
        if num == 0.0 {
            break;
        }
        let ratio = num / ((gamma + kf) * (kf + 1.0));
        if !(ratio > 0.0) {
            return Err(Error::Domain("log-domain 2F1 needs positive terms".into()));
        }
        acc += ratio.ln() + ln_t;
        logs.push(acc);
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln())
}

fn nonpositive_integer(v: f64) -> Option<usize> {
    if v <= 0.0 && v.fract() == 0.0 && v > -1e9 {
        Some((-v) as usize)
    } else {
        None
    }
}

/// `L_n(x)` via `(k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}`.
pub fn laguerre_eval(n: usize, x: f64) -> Result<f64> {
    assoc_laguerre_eval(n, 0, x)
}

/// Generalized Laguerre polynomial `L_n^{(alpha)}(x)` for integer `alpha`.
pub fn assoc_laguerre_eval(n: usize, alpha: usize, x: f64) -> Result<f64> {
    check_degree(n)?;
    let a = alpha as f64;
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `ln(n!)`.
pub fn log_factorial(n: usize) -> f64 {
    // The running product is exact to ~n ulps through 170!, which is far
    // inside the 1e-13 relative budget once logged.
    if n <= 170 {
        let mut p = 1.0f64;
        for k in 2..=n {
            p *= k as f64;
        }
        return p.ln();
    }
    // Stirling series for ln Gamma(n + 1).
    let x = n as f64 + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}
