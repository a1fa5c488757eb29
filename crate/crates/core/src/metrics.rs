//! Non-Gaussianity measures: Wigner function and its negativity, quadrature
//! variances, fidelity to the moment-matched Gaussian and the fidelity-based
//! measure built on it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{neumaier_sum, Adaptive};
use crate::specfun::{assoc_laguerre_eval, ln_terminating_2f1, log_factorial};
use crate::state::{ln_core_norm, superposition_coeffs, FockVector};

/// Quadrature variances `<x^2>` and `<p^2>` of a zero-mean state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentPair {
    pub d_x: f64,
    pub d_p: f64,
}

impl MomentPair {
    /// Rejects pairs that violate `d_x d_p >= 1/4`.
    pub fn new(d_x: f64, d_p: f64) -> Result<Self> {
        if !(d_x > 0.0 && d_p > 0.0) || d_x * d_p < 0.25 - 1e-12 {
            return Err(Error::Domain(format!("variances ({d_x}, {d_p}) violate uncertainty")));
        }
        Ok(MomentPair { d_x, d_p })
    }

    /// Symplectic eigenvalue `sqrt(d_x d_p)`.
    pub fn nu(&self) -> f64 {
        (self.d_x * self.d_p).sqrt()
    }
}

/// Closed-form variances of the core superposition with parameters `(n, |z|)`.
pub fn moments(n: usize, z_abs: f64) -> Result<MomentPair> {
    if n > crate::specfun::MAX_DEGREE {
        return Err(Error::Size { n, max: crate::specfun::MAX_DEGREE });
    }
    let base = (1.0 + 2.0 * n as f64) / 2.0;
    if n < 2 || z_abs == 0.0 {
        return MomentPair::new(base, base);
    }
    let nf = n as f64;
    let t = z_abs * z_abs;
    let ratio = (ln_terminating_2f1((3.0 - nf) / 2.0, 1.0 - nf / 2.0, 2.0, t)? - ln_core_norm(n, z_abs)?).exp();
    let common = nf * (nf - 1.0) * z_abs * ratio / 2.0;
    MomentPair::new(base + common * (1.0 - z_abs), base - common * (z_abs + 1.0))
}

/// `ln x^e` with `0^0 = 1`.
fn ln_pow(x: f64, e: usize) -> f64 {
    if e == 0 {
        0.0
    } else {
        e as f64 * x.ln()
    }
}

/// `<m| rho_G |k>` for the zero-mean Gaussian state with variances `mp`,
/// squeezed along `x`. Only equal-parity pairs are nonzero.
///
/// Written so every term is nonnegative: the powers of `d_x - d_p` that
/// appear with both signs in the raw expansion are combined first.
pub fn gaussian_matrix_element(m: usize, k: usize, mp: &MomentPair) -> f64 {
    if (m + k) % 2 == 1 {
        return 0.0;
    }
    let u = (2.0 * mp.d_x + 1.0) * (2.0 * mp.d_p + 1.0);
    let q = (4.0 * mp.d_x * mp.d_p - 1.0).max(0.0) / u;
    let y = (mp.d_x - mp.d_p) / u;
    let half = (m + k) / 2;
    let lead = std::f64::consts::LN_2 - 0.5 * u.ln() + 0.5 * (log_factorial(m) + log_factorial(k));
    let mut terms = Vec::new();
    let mut s = m.min(k) % 2;
    while s <= m.min(k) {
        let e = half - s;
        let ln_term = lead + ln_pow(q, s) - log_factorial(s) + ln_pow(y.abs(), e)
            - log_factorial((m - s) / 2)
            - log_factorial((k - s) / 2);
        // A negative y only arises for states squeezed along p; odd powers
        // then flip sign.
        let sgn = if y < 0.0 && e % 2 == 1 { -1.0 } else { 1.0 };
        terms.push(sgn * ln_term.exp());
        s += 2;
    }
    neumaier_sum(terms)
}

/// Fidelity between the core superposition and the Gaussian state sharing
/// its first and second moments.
pub fn fidelity_gaussian(n: usize, z_abs: f64) -> Result<f64> {
    let core = superposition_coeffs(n, z_abs)?;
    let mp = moments(n, z_abs)?;
    let pairs: Vec<(usize, f64)> = core.iter().collect();
    let mut terms = Vec::with_capacity(pairs.len() * pairs.len());
    for &(m1, a1) in &pairs {
        for &(m2, a2) in &pairs {
            terms.push(a1 * a2 * gaussian_matrix_element(m1, m2, &mp));
        }
    }
    let f = neumaier_sum(terms);
    if !(f > 0.0 && f <= 1.0 + 1e-12) {
        return Err(Error::Internal(format!("fidelity {f} outside (0, 1]")));
    }
    Ok(f.min(1.0))
}

/// `1 - sqrt(F)`.
pub fn ng_measure(n: usize, z_abs: f64) -> Result<f64> {
    Ok(1.0 - fidelity_gaussian(n, z_abs)?.sqrt())
}

/// `1 - sqrt(n^n / (n+1)^(n+1))`, attained at `|z| = 0`.
pub fn ng_measure_max(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("maximum defined for n >= 1".into()));
    }
    let nf = n as f64;
    let ln_f = nf * nf.ln() - (nf + 1.0) * (nf + 1.0).ln();
    Ok(1.0 - (0.5 * ln_f).exp())
}

/// Wigner function of `|m><k|` with `m <= k`:
/// `(-1)^m/pi sqrt(m!/k!) (2 alpha)^(k-m) e^{-2|alpha|^2} L_m^(k-m)(4|alpha|^2)`,
/// where `alpha = (x + i p)/sqrt 2`. Entries with `m > k` are the conjugate
/// of the swapped pair.
pub fn cross_wigner_kernel(m: usize, k: usize, x: f64, p: f64) -> Result<Complex64> {
    if m > k {
        return Ok(cross_wigner_kernel(k, m, x, p)?.conj());
    }
    let alpha = Complex64::new(x, p) / std::f64::consts::SQRT_2;
    let r2 = alpha.norm_sqr();
    let lag = assoc_laguerre_eval(m, k - m, 4.0 * r2)?;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mag = (0.5 * (log_factorial(m) - log_factorial(k)) - 2.0 * r2).exp();
    Ok((2.0 * alpha).powu((k - m) as u32) * (sign * mag * lag / std::f64::consts::PI))
}

/// `W(x, p) = (1/pi) int e^{2ipy} psi*(x+y) psi(x-y) dy` for the state `v`.
///
/// Evaluates `sum c_m c_k* K_mk` with the kernels `K_mk` generated row by
/// row from the Laguerre recurrences, `O(dim^2)` per point.
pub fn wigner_eval(v: &FockVector, x: f64, p: f64) -> f64 {
    let c = &v.amplitudes()[..v.support(0.0)];
    wigner_from_amplitudes(c, x, p)
}

fn wigner_from_amplitudes(c: &[Complex64], x: f64, p: f64) -> f64 {
    let dim = c.len();
    if dim == 0 {
        return 0.0;
    }
    let alpha = Complex64::new(x, p) / std::f64::consts::SQRT_2;
    let two_a = 2.0 * alpha;
    let two_ac = two_a.conj();
    let mut row = vec![Complex64::new(0.0, 0.0); dim];
    row[0] = Complex64::new((-2.0 * alpha.norm_sqr()).exp() / std::f64::consts::PI, 0.0);
    let mut w = c[0].norm_sqr() * row[0].re;
    for k in 1..dim {
        row[k] = two_a * row[k - 1] / (k as f64).sqrt();
        w += 2.0 * (c[0] * c[k].conj() * row[k]).re;
    }
    for m in 1..dim {
        let sm = (m as f64).sqrt();
        let mut prev_row_km1 = row[m];
        row[m] = (two_ac * prev_row_km1 - sm * row[m - 1]) / sm;
        w += c[m].norm_sqr() * row[m].re;
        for k in m + 1..dim {
            let next = (two_a * row[k - 1] - sm * prev_row_km1) / (k as f64).sqrt();
            prev_row_km1 = row[k];
            row[k] = next;
            w += 2.0 * (c[m] * c[k].conj() * row[k]).re;
        }
    }
    w
}

/// Wigner samples on a rectangular grid, row-major in `p` (x fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn x(&self, i: usize) -> f64 {
        lin(self.x_min, self.x_max, self.nx, i)
    }

    pub fn p(&self, j: usize) -> f64 {
        lin(self.p_min, self.p_max, self.np, j)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// `sum W dx dp` over the grid cells.
    pub fn riemann_sum(&self) -> f64 {
        let dx = step(self.x_min, self.x_max, self.nx);
        let dp = step(self.p_min, self.p_max, self.np);
        neumaier_sum(self.values.iter().copied()) * dx * dp
    }

    /// Fails unless the Riemann sum is within `1e-4` of one.
    pub fn check_capture(&self) -> Result<()> {
        let s = self.riemann_sum();
        if (s - 1.0).abs() > 1e-4 {
            return Err(Error::Resolution(format!("grid captures Wigner mass {s}")));
        }
        Ok(())
    }
}

fn step(lo: f64, hi: f64, n: usize) -> f64 {
    if n > 1 {
        (hi - lo) / (n - 1) as f64
    } else {
        hi - lo
    }
}

fn lin(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    lo + step(lo, hi, n) * i as f64
}

pub fn wigner_grid(v: &FockVector, x: (f64, f64), p: (f64, f64), nx: usize, np: usize) -> Result<WignerGrid> {
    if nx == 0 || np == 0 || !(x.1 > x.0) || !(p.1 > p.0) {
        return Err(Error::Domain("empty Wigner grid".into()));
    }
    let c = &v.amplitudes()[..v.support(0.0)];
    let mut values = Vec::with_capacity(nx * np);
    for j in 0..np {
        let pj = lin(p.0, p.1, np, j);
        for i in 0..nx {
            values.push(wigner_from_amplitudes(c, lin(x.0, x.1, nx, i), pj));
        }
    }
    Ok(WignerGrid { x_min: x.0, x_max: x.1, p_min: p.0, p_max: p.1, nx, np, values })
}

/// Wigner negativity `int |W| dx dp - 1` to absolute accuracy `tol`.
///
/// Uses `int |W| = int W + 2 int max(-W, 0)` with `int W = <v|v>`, so only the
/// negative part is integrated, on a polar grid with adaptive Gauss-Kronrod
/// in both the radius and the angle.
pub fn wigner_negativity(v: &FockVector, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let c: Vec<Complex64> = v.amplitudes()[..v.support(1e-30)].to_vec();
    if c.is_empty() {
        return Err(Error::Domain("zero vector".into()));
    }
    let norm = c.iter().map(|a| a.norm_sqr()).sum::<f64>();
    let populated = c.iter().filter(|a| a.norm_sqr() > 0.0).count();
    let top = (c.len() - 1) as f64;
    let mut r_max = (2.0 * (4.0 * top + 20.0)).sqrt();

    // Rotationally symmetric, point-symmetric, or general.
    let (span, weight, radial) = if populated == 1 {
        (0.0, 2.0 * std::f64::consts::PI, true)
    } else if v.parity().is_some() {
        (std::f64::consts::PI, 2.0, false)
    } else {
        (2.0 * std::f64::consts::PI, 1.0, false)
    };

    let angular = |rho: f64, f: &dyn Fn(f64) -> f64, inner_tol: f64| -> Result<f64> {
        if radial {
            return Ok(weight * f(wigner_from_amplitudes(&c, rho, 0.0)));
        }
        let est = Adaptive { max_panels: 4000, ..Adaptive::with_abs_tol(inner_tol) }.panels(8).integrate(
            |t| f(wigner_from_amplitudes(&c, rho * t.cos(), rho * t.sin())),
            0.0,
            span,
        )?;
        Ok(weight * est.value)
    };
    let neg = |w: f64| (-w).max(0.0);
    let abs = |w: f64| w.abs();

    let mut doublings = 0;
    loop {
        let inner_tol = tol / (8.0 * r_max * r_max);
        let outer = Adaptive { max_panels: 4000, ..Adaptive::with_abs_tol(tol / 40.0) }.panels(8);
        let mut failure = None;
        let annulus = outer.integrate(
            |rho| match angular(rho, &abs, inner_tol) {
                Ok(v) => rho * v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            r_max,
            2.0 * r_max,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        if annulus.value < tol / 10.0 {
            break;
        }
        doublings += 1;
        if doublings > 6 {
            return Err(Error::Accuracy { estimate: f64::NAN, tol });
        }
        r_max *= 2.0;
    }

    let inner_tol = tol / (8.0 * r_max * r_max);
    let outer = Adaptive { max_panels: 4000, ..Adaptive::with_abs_tol(tol / 4.0) }.panels(16);
    let mut failure = None;
    let negative = outer.integrate(
        |rho| match angular(rho, &neg, inner_tol) {
            Ok(v) => rho * v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        r_max,
    );
    let negative = match (negative, failure) {
        (Ok(est), None) => est.value,
        (Err(Error::Accuracy { estimate, .. }), _) => {
            return Err(Error::Accuracy { estimate: norm - 1.0 + 2.0 * estimate, tol })
        }
        (Err(e), _) | (Ok(_), Some(e)) => return Err(e),
    };
    Ok(norm - 1.0 + 2.0 * negative)
}

/// Convenience: negativity of the core superposition `(n, |z|)`.
pub fn core_negativity(n: usize, z_abs: f64, tol: f64) -> Result<f64> {
    let core = superposition_coeffs(n, z_abs)?;
    wigner_negativity(&core.to_fock_vector(n + 1)?, tol)
}
