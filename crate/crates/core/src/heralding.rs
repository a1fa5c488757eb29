//! Heralding probabilities, the photon-number distribution, the rings of
//! maximal single-outcome probability, and a search over the free parameter.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optim::{nelder_mead, SimplexConfig};
use crate::params::{invert_map, TmegParams};
use crate::specfun::MAX_DEGREE;
use crate::state::ln_core_norm;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parametrization {
    Abc,
    Za,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityResult {
    pub n: usize,
    pub p: f64,
    pub parametrization: Parametrization,
}

/// Circle `|a - center_re| = radius` of maximal probability at `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSpec {
    pub n: usize,
    pub center_re: f64,
    pub radius: f64,
}

impl RingSpec {
    pub fn point(&self, theta: f64) -> Complex64 {
        self.center_re + Complex64::from_polar(self.radius, theta)
    }

    /// Euclidean distance from `a` to the circle.
    pub fn distance(&self, a: Complex64) -> f64 {
        ((a - self.center_re).norm() - self.radius).abs()
    }
}

fn check_n(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::Size { n, max: MAX_DEGREE });
    }
    Ok(())
}

pub fn probability_abc(p: &TmegParams, n: usize) -> Result<ProbabilityResult> {
    check_n(n)?;
    let (a, b) = (p.a(), p.b());
    let re_r = p.output_exponent().re;
    if !(re_r > 0.0) {
        return Err(Error::Internal(format!("Re[R] = {re_r} for a validated input")));
    }
    let z = 1.0 - (a * a - 1.0) / (b * b) * re_r;
    let nf = n as f64;
    let log_p = std::f64::consts::LN_2 + 2.0 * nf * b.norm().ln() + 0.5 * p.determinant().ln()
        - (nf + 0.5) * (2.0 * (a + 1.0).norm().ln() + re_r.ln())
        + ln_core_norm(n, z.norm())?;
    Ok(ProbabilityResult { n, p: log_p.exp(), parametrization: Parametrization::Abc })
}

/// Heralding probability written in `(z, a)` only; it does not involve `R`.
pub fn probability_za(z: Complex64, a: Complex64, n: usize) -> Result<ProbabilityResult> {
    check_n(n)?;
    // Feasibility is homogeneous in Re[R], so Re[R] = 1 decides it.
    invert_map(a, z, Complex64::new(1.0, 0.0))?;
    let am1 = a - 1.0;
    let one_mz = 1.0 - z;
    let theta = am1.arg() - one_mz.arg();
    let (ap1, w) = ((a + 1.0).norm(), one_mz.norm());
    let mut radicand = 4.0 * a.re * w - 2.0 * am1.norm() * (ap1 - am1.im * theta.sin() - am1.re * theta.cos());
    let scale = 4.0 * a.re.abs() * w + 2.0 * am1.norm() * (ap1 + am1.norm());
    if radicand < 0.0 {
        if radicand < -1e-12 * scale.max(1.0) {
            return Err(Error::OutOfDomain(format!("radicand {radicand:e} is negative")));
        }
        radicand = 0.0;
    }
    let nf = n as f64;
    let lead = (radicand / (ap1 * ap1 * w)).sqrt();
    let log_ratio = am1.norm().ln() - ap1.ln() - w.ln();
    let p = lead * (nf * log_ratio + ln_core_norm(n, z.norm())?).exp();
    Ok(ProbabilityResult { n, p, parametrization: Parametrization::Za })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub probabilities: Vec<ProbabilityResult>,
    /// `1 - sum P_n`, the mass beyond `n_max` plus rounding.
    pub tail: f64,
}

pub fn distribution(p: &TmegParams, n_max: usize) -> Result<Distribution> {
    check_n(n_max)?;
    let probabilities = (0..=n_max).map(|n| probability_abc(p, n)).collect::<Result<Vec<_>>>()?;
    let tail = 1.0 - crate::quad::neumaier_sum(probabilities.iter().map(|r| r.p));
    Ok(Distribution { probabilities, tail })
}

pub fn ring_locus(n: usize) -> Result<RingSpec> {
    if n == 0 {
        return Err(Error::Domain("n = 0 ring collapses onto the excluded point a = 1".into()));
    }
    let nf = n as f64;
    Ok(RingSpec { n, center_re: nf + 1.0 / (4.0 * nf + 2.0) + 0.5, radius: 2.0 * nf * (nf + 1.0) / (2.0 * nf + 1.0) })
}

#[derive(Debug, Clone, Copy)]
pub struct OptimizeConfig {
    /// Number of multistart points.
    pub starts: usize,
    /// Extra start point tried alongside the scanned ones.
    pub seed_point: Option<Complex64>,
    pub simplex: SimplexConfig,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig { starts: 16, seed_point: None, simplex: SimplexConfig::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub a_best: Complex64,
    pub p_best: f64,
    pub starts_used: usize,
    pub evaluations: usize,
}

/// Multistart simplex search for the `a` maximizing `P_n` at fixed `z`.
pub fn optimize_probability(z: Complex64, n: usize, config: &OptimizeConfig) -> Result<Optimum> {
    if n == 0 {
        return Err(Error::Domain("optimization requires n >= 1".into()));
    }
    check_n(n)?;
    let objective = |x: [f64; 2]| match probability_za(z, Complex64::new(x[0], x[1]), n) {
        Ok(r) => -r.p,
        Err(_) => f64::INFINITY,
    };

    // The feasible set can be a small island, so scan a fine grid and spread
    // the starts over its feasible cells.
    const SCAN: usize = 64;
    let re_hi = (2 * n + 4) as f64 + 4.0 * z.norm();
    let im_span = 0.5 * re_hi;
    let mut feasible = Vec::new();
    for i in 0..SCAN {
        for j in 0..SCAN {
            let u = (i as f64 + 0.5) / SCAN as f64;
            let v = (j as f64 + 0.5) / SCAN as f64;
            let s = [u * re_hi, -im_span + 2.0 * v * im_span];
            if objective(s).is_finite() {
                feasible.push(s);
            }
        }
    }
    let mut starts: Vec<[f64; 2]> =
        config.seed_point.iter().map(|a| [a.re, a.im]).filter(|&s| objective(s).is_finite()).collect();
    let want = config.starts.max(1).min(feasible.len());
    for k in 0..want {
        starts.push(feasible[k * feasible.len() / want]);
    }
    if starts.is_empty() {
        return Err(Error::Domain(format!("no feasible starting point for z = {z}, n = {n}")));
    }

    let results: Vec<_> = starts.par_iter().map(|&s| nelder_mead(objective, s, &config.simplex)).collect();
    let evaluations = results.iter().map(|m| m.evals).sum();
    let best = results
        .iter()
        .filter(|m| m.f.is_finite())
        .min_by(|p, q| p.f.total_cmp(&q.f).then(p.x[0].total_cmp(&q.x[0])).then(p.x[1].total_cmp(&q.x[1])))
        .ok_or_else(|| Error::Domain("every local search left the feasible region".into()))?;
    Ok(Optimum {
        a_best: Complex64::new(best.x[0], best.x[1]),
        p_best: -best.f,
        starts_used: starts.len(),
        evaluations,
    })
}
