//! Parameter algebra for two-mode entangled Gaussian inputs.
//!
//! A two-mode Gaussian wavefunction `exp[-(a x1^2 + 2 b x1 x2 + c x2^2)/2]`
//! heralded on `n` particles in mode 1 leaves mode 2 in a state that depends
//! only on the pair `(z, R)`; `a` survives as a free knob that changes the
//! heralding probability but not the state.

use num_complex::Complex64;

use crate::error::{Error, Result, TmegViolation};

/// Distance below which `b` counts as zero and `a` as one.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Validated two-mode Gaussian parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmegParams {
    a: Complex64,
    b: Complex64,
    c: Complex64,
}

impl TmegParams {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        validate_tmeg(a, b, c)
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// `Re[a] Re[c] - Re[b]^2`, positive for valid parameters.
    pub fn determinant(&self) -> f64 {
        self.a.re * self.c.re - self.b.re * self.b.re
    }

    /// The Gaussian exponent `R = c - b^2/(a+1)` of the heralded output.
    pub fn output_exponent(&self) -> Complex64 {
        self.c - self.b * self.b / (self.a + 1.0)
    }
}

pub fn validate_tmeg(a: Complex64, b: Complex64, c: Complex64) -> Result<TmegParams> {
    let fail = |v| Err(Error::Tmeg(v));
    if !(a.re > 0.0) {
        return fail(TmegViolation::ReANotPositive);
    }
    if !(c.re > 0.0) {
        return fail(TmegViolation::ReCNotPositive);
    }
    if (a - 1.0).norm() <= DEGENERACY_TOL {
        return fail(TmegViolation::DegenerateA);
    }
    if b.norm() <= DEGENERACY_TOL {
        return fail(TmegViolation::Separable);
    }
    if !(a.re * c.re - b.re * b.re > 0.0) {
        return fail(TmegViolation::NotPositiveDefinite);
    }
    Ok(TmegParams { a, b, c })
}

/// Output-state parameters `(z, R)` plus the retained free parameter `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputParams {
    z: Complex64,
    r: Complex64,
    a_free: Complex64,
}

impl OutputParams {
    pub fn new(z: Complex64, r: Complex64, a_free: Complex64) -> Result<Self> {
        if !(r.re > 0.0) {
            return Err(Error::OutputParams(format!("Re[R] = {} must be positive", r.re)));
        }
        if (z - 1.0).norm() <= DEGENERACY_TOL {
            return Err(Error::OutputParams("z = 1 is singular".into()));
        }
        if !z.is_finite() || !r.is_finite() {
            return Err(Error::OutputParams("non-finite parameter".into()));
        }
        Ok(OutputParams { z, r, a_free })
    }

    /// Output parameters for a bare state; `a_free` is irrelevant to the
    /// wavefunction and set to a placeholder.
    pub fn state(z: Complex64, r: Complex64) -> Result<Self> {
        Self::new(z, r, Complex64::new(2.0, 0.0))
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// The squeezing parameter `R`.
    pub fn r(&self) -> Complex64 {
        self.r
    }

    pub fn a_free(&self) -> Complex64 {
        self.a_free
    }
}

pub fn map_to_output(p: &TmegParams) -> Result<OutputParams> {
    let r = p.output_exponent();
    let z = 1.0 - (p.a * p.a - 1.0) / (p.b * p.b) * r.re;
    OutputParams::new(z, r, p.a)
}

/// Reconstructs `(a, b, c)` from `(a, z, R)` with `b` on the principal
/// square-root branch. `b -> -b` gives the same state up to a `(-1)^n` phase.
pub fn invert_map(a: Complex64, z: Complex64, r: Complex64) -> Result<TmegParams> {
    if (z - 1.0).norm() <= DEGENERACY_TOL {
        return Err(Error::Domain("z = 1 has no preimage".into()));
    }
    if (a - 1.0).norm() <= DEGENERACY_TOL || (a + 1.0).norm() <= DEGENERACY_TOL {
        return Err(Error::Domain("a = ±1 has no preimage".into()));
    }
    if !(r.re > 0.0) {
        return Err(Error::OutputParams(format!("Re[R] = {} must be positive", r.re)));
    }
    let b2 = (a * a - 1.0) * r.re / (1.0 - z);
    let b = b2.sqrt();
    let c = r + b2 / (a + 1.0);
    validate_tmeg(a, b, c).map_err(|e| Error::OutOfDomain(e.to_string()))
}

/// Squeeze and rotation that dress the non-Gaussian core:
/// `Psi = S(r e^{i phi}) Rot(rot) sum_m A_m |m>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianOp {
    pub r: f64,
    pub phi: f64,
    /// Rotation angle `-arg[z]/2 - arg[1+R]`. The second term is the phase
    /// the complex squeeze imprints on `|m>` (it vanishes for real `R`).
    pub rot: f64,
}

/// Exponent `R'` of the squeezed vacuum `S(r e^{i phi})|0> ∝ exp(-R' x^2/2)`.
pub fn squeezed_vacuum_exponent(r: f64, phi: f64) -> Complex64 {
    let w = Complex64::from_polar(r.tanh(), phi);
    (1.0 - w) / (1.0 + w)
}

pub fn gaussian_ops_from(zr: &OutputParams) -> Result<GaussianOp> {
    let big_r = zr.r;
    let cosh_r = (big_r + 1.0).norm() / (2.0 * big_r.re.sqrt());
    if cosh_r < 1.0 - 1e-12 {
        return Err(Error::Internal(format!("cosh r = {cosh_r} < 1")));
    }
    let r = cosh_r.max(1.0).acosh();

    // tan(phi) fixes phi only modulo pi; pick the branch whose squeezed
    // vacuum reproduces exp(-R x^2/2).
    let base = Complex64::new(big_r.norm_sqr() - 1.0, 2.0 * big_r.im).arg();
    let flipped = wrap_angle(base + std::f64::consts::PI);
    let mismatch = |phi: f64| {
        let cand = squeezed_vacuum_exponent(r, phi);
        [0.5f64, 1.0, 1.5]
            .iter()
            .map(|&x| {
                let want = (-big_r * x * x / 2.0).exp();
                let got = (-cand * x * x / 2.0).exp();
                (want - got).norm()
            })
            .sum::<f64>()
    };
    let phi = if mismatch(flipped) < mismatch(base) { flipped } else { base };

    let rot = -zr.z.arg() / 2.0 - (big_r + 1.0).arg();
    Ok(GaussianOp { r, phi, rot })
}

/// Maps an angle into `(-pi, pi]`.
pub fn wrap_angle(t: f64) -> f64 {
    use std::f64::consts::PI;
    let mut w = t % (2.0 * PI);
    if w <= -PI {
        w += 2.0 * PI;
    } else if w > PI {
        w -= 2.0 * PI;
    }
    w
}
