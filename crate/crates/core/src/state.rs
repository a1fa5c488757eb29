//! Heralded output states in three representations: closed-form
//! wavefunctions in the `(a, b, c)` and `(z, R)` parametrizations, the
//! parity-restricted Fock superposition that carries all non-Gaussianity, and
//! truncated Fock vectors with the squeeze and rotation applied.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::heralding::probability_abc;
use crate::params::{gaussian_ops_from, OutputParams, TmegParams};
use crate::specfun::{hermite_scaled, ln_terminating_2f1, log_factorial, terminating_2f1, MAX_DEGREE};

const PI_QUARTER_ROOT: f64 = 1.331_335_363_800_389_7; // pi^{1/4}

/// Tail mass above which a truncated squeeze is rejected.
pub const LEAKAGE_TOL: f64 = 1e-10;

/// Normalized harmonic-oscillator eigenfunction `psi_m(x)`.
pub fn fock_wavefunction(m: usize, x: f64) -> Result<f64> {
    let h = hermite_scaled(m, Complex64::new(x, 0.0))?;
    Ok((-0.5 * x * x).exp() * h.re / PI_QUARTER_ROOT)
}

/// `psi_0(x) .. psi_{dim-1}(x)` in one pass of the normalized recurrence.
pub fn fock_basis(dim: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(dim);
    if dim == 0 {
        return out;
    }
    let g = (-0.5 * x * x).exp() / PI_QUARTER_ROOT;
    out.push(g);
    if dim == 1 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * g);
    for k in 1..dim - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Output wavefunction in the `(a, b, c)` parametrization with all
/// `x`-independent factors precomputed.
#[derive(Debug, Clone)]
pub struct AbcWavefunction {
    n: usize,
    prefactor: Complex64,
    exponent: Complex64,
    hermite_scale: Complex64,
}

impl AbcWavefunction {
    pub fn new(p: &TmegParams, n: usize) -> Result<Self> {
        if n > MAX_DEGREE {
            return Err(Error::Size { n, max: MAX_DEGREE });
        }
        let prob = probability_abc(p, n)?.p;
        if !(prob >= 1e-300) {
            return Err(Error::Underflow { n, p: prob });
        }
        let (a, b) = (p.a(), p.b());
        // H_n / sqrt(2^n n!) is folded into hermite_scaled.
        let ratio = 2.0 * (a - 1.0).powu(n as u32) / (a + 1.0).powu(n as u32 + 1);
        let prefactor = p.determinant().powf(0.25) / (PI_QUARTER_ROOT * prob.sqrt()) * ratio.sqrt();
        Ok(AbcWavefunction { n, prefactor, exponent: p.output_exponent(), hermite_scale: b / (a * a - 1.0).sqrt() })
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let h = hermite_scaled(self.n, self.hermite_scale * x).expect("degree checked");
        self.prefactor * (-0.5 * x * x * self.exponent).exp() * h
    }
}

pub fn psi_out_abc(p: &TmegParams, n: usize, x: f64) -> Result<Complex64> {
    Ok(AbcWavefunction::new(p, n)?.eval(x))
}

/// Output wavefunction in the `(z, R)` parametrization.
#[derive(Debug, Clone)]
pub struct ZrWavefunction {
    n: usize,
    prefactor: f64,
    exponent: Complex64,
    hermite_scale: Complex64,
}

impl ZrWavefunction {
    pub fn new(zr: &OutputParams, n: usize) -> Result<Self> {
        if n > MAX_DEGREE {
            return Err(Error::Size { n, max: MAX_DEGREE });
        }
        let (z, big_r) = (zr.z(), zr.r());
        let log_pref = 0.25 * big_r.re.ln() + 0.5 * n as f64 * (1.0 - z).norm().ln() - 0.5 * ln_core_norm(n, z.norm())?;
        let prefactor = log_pref.exp() / PI_QUARTER_ROOT;
        if !prefactor.is_finite() || prefactor == 0.0 {
            return Err(Error::Underflow { n, p: prefactor });
        }
        Ok(ZrWavefunction { n, prefactor, exponent: big_r, hermite_scale: (big_r.re / (1.0 - z)).sqrt() })
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let h = hermite_scaled(self.n, self.hermite_scale * x).expect("degree checked");
        self.prefactor * (-0.5 * x * x * self.exponent).exp() * h
    }
}

pub fn psi_out_zr(zr: &OutputParams, n: usize, x: f64) -> Result<Complex64> {
    Ok(ZrWavefunction::new(zr, n)?.eval(x))
}

/// `2F1((1-n)/2, -n/2; 1; |z|^2)`, the squared norm of the unnormalized core.
pub fn core_norm(n: usize, z_abs: f64) -> Result<f64> {
    terminating_2f1((1.0 - n as f64) / 2.0, -(n as f64) / 2.0, 1.0, z_abs * z_abs)
}

/// `ln` of [`core_norm`], robust to overflow at large `n |z|`.
pub fn ln_core_norm(n: usize, z_abs: f64) -> Result<f64> {
    ln_terminating_2f1((1.0 - n as f64) / 2.0, -(n as f64) / 2.0, 1.0, z_abs * z_abs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn lowest(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// The non-Gaussian core `sum_m A_m |m>` over `m ≡ n (mod 2)`, `m <= n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockSuperposition {
    n_herald: usize,
    /// `coeffs[j]` is `A_m` for `m = parity.lowest() + 2j`.
    coeffs: Vec<f64>,
}

impl FockSuperposition {
    pub fn n_herald(&self) -> usize {
        self.n_herald
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n_herald)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `(m, A_m)` pairs in ascending `m`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.parity().lowest();
        self.coeffs.iter().enumerate().map(move |(j, &a)| (lo + 2 * j, a))
    }

    pub fn amplitude(&self, m: usize) -> f64 {
        if m > self.n_herald || m % 2 != self.n_herald % 2 {
            return 0.0;
        }
        self.coeffs[(m - self.parity().lowest()) / 2]
    }

    pub fn to_fock_vector(&self, dim: usize) -> Result<FockVector> {
        if dim <= self.n_herald {
            return Err(Error::DimensionMismatch(dim, self.n_herald + 1));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for (m, a) in self.iter() {
            amps[m] = Complex64::new(a, 0.0);
        }
        Ok(FockVector { amplitudes: amps })
    }

    /// Mean photon number of the core.
    pub fn mean_number(&self) -> f64 {
        self.iter().map(|(m, a)| m as f64 * a * a).sum()
    }
}

pub fn superposition_coeffs(n: usize, z_abs: f64) -> Result<FockSuperposition> {
    if n > MAX_DEGREE {
        return Err(Error::Size { n, max: MAX_DEGREE });
    }
    let lo = n % 2;
    let count = (n - lo) / 2 + 1;
    let mut coeffs = vec![0.0; count];
    if z_abs == 0.0 {
        coeffs[count - 1] = 1.0;
        return Ok(FockSuperposition { n_herald: n, coeffs });
    }
    let log_norm = ln_core_norm(n, z_abs)?;
    let log_half_z = (0.5 * z_abs).ln();
    for (j, c) in coeffs.iter_mut().enumerate() {
        let m = lo + 2 * j;
        let k = (n - m) / 2;
        let log_a =
            k as f64 * log_half_z - log_factorial(k) + 0.5 * (log_factorial(n) - log_factorial(m)) - 0.5 * log_norm;
        *c = log_a.exp();
    }
    Ok(FockSuperposition { n_herald: n, coeffs })
}

/// Complex amplitudes over `|0> .. |dim-1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        FockVector { amplitudes }
    }

    /// `|k>` in a `dim`-dimensional space.
    pub fn basis(k: usize, dim: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim.max(k + 1)];
        amps[k] = Complex64::new(1.0, 0.0);
        FockVector { amplitudes: amps }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Same state in a larger (or equal) truncation.
    pub fn padded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::DimensionMismatch(dim, self.dim()));
        }
        let mut amps = self.amplitudes.clone();
        amps.resize(dim, Complex64::new(0.0, 0.0));
        Ok(FockVector { amplitudes: amps })
    }

    /// Index one past the last amplitude with `|c_k|^2 > cutoff`.
    pub fn support(&self, cutoff: f64) -> usize {
        self.amplitudes.iter().rposition(|c| c.norm_sqr() > cutoff).map_or(0, |k| k + 1)
    }

    /// Parity if every populated level shares it.
    pub fn parity(&self) -> Option<Parity> {
        let mut seen = None;
        for (k, c) in self.amplitudes.iter().enumerate() {
            if c.norm_sqr() > 1e-28 {
                let p = Parity::of(k);
                match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        seen
    }

    /// Mass in the top quarter of the truncated space.
    pub fn leakage(&self) -> f64 {
        let start = self.dim() - self.dim() / 4;
        self.amplitudes[start..].iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Truncated matrix of `exp[(r/2)(e^{i phi} a†^2 - e^{-i phi} a^2)]`.
pub fn squeeze_matrix(r: f64, phi: f64, dim: usize) -> Result<DMatrix<Complex64>> {
    if dim == 0 {
        return Err(Error::DimensionMismatch(0, 1));
    }
    if phi == 0.0 {
        // Real generator; the real exponential is several times cheaper.
        let mut gen = DMatrix::<f64>::zeros(dim, dim);
        for k in 0..dim.saturating_sub(2) {
            let amp = 0.5 * r * (((k + 1) * (k + 2)) as f64).sqrt();
            gen[(k + 2, k)] = amp;
            gen[(k, k + 2)] = -amp;
        }
        return Ok(gen.exp().map(|v| Complex64::new(v, 0.0)));
    }
    let mut gen = DMatrix::<Complex64>::zeros(dim, dim);
    let up = Complex64::from_polar(0.5 * r, phi);
    for k in 0..dim.saturating_sub(2) {
        // <k+2| a†^2 |k> = sqrt((k+1)(k+2))
        let amp = (((k + 1) * (k + 2)) as f64).sqrt();
        gen[(k + 2, k)] = up * amp;
        gen[(k, k + 2)] = -up.conj() * amp;
    }
    Ok(gen.exp())
}

/// Diagonal of `exp(i phase n)`.
pub fn rotation_phases(phase: f64, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|k| Complex64::from_polar(1.0, phase * k as f64)).collect()
}

/// Default truncation for an `n`-photon herald.
pub fn default_dim(n: usize) -> usize {
    4 * n + 40
}

/// Fock-basis vector of the heralded output: the core rotated by
/// `-arg[z]/2 - arg[1+R]` and then squeezed. Fails with
/// [`Error::Truncation`] when more than `1e-10` of the norm sits in the top
/// quarter of the space.
pub fn output_fock_vector(zr: &OutputParams, n: usize, dim: usize) -> Result<FockVector> {
    let vec = output_fock_vector_unchecked(zr, n, dim)?;
    let leakage = vec.leakage();
    if leakage > LEAKAGE_TOL {
        return Err(Error::Truncation { dim, leakage, suggested: 2 * dim });
    }
    Ok(vec)
}

/// [`output_fock_vector`] without the leakage check.
pub fn output_fock_vector_unchecked(zr: &OutputParams, n: usize, dim: usize) -> Result<FockVector> {
    let core = superposition_coeffs(n, zr.z().norm())?;
    let ops = gaussian_ops_from(zr)?;
    let phases = rotation_phases(ops.rot, dim);
    let rotated = core.to_fock_vector(dim)?;
    let v = DVector::from_iterator(dim, rotated.amplitudes.iter().zip(&phases).map(|(c, ph)| c * ph));
    let out = squeeze_matrix(ops.r, ops.phi, dim)? * v;
    Ok(FockVector { amplitudes: out.iter().copied().collect() })
}

/// [`output_fock_vector`] starting at [`default_dim`] and doubling the
/// truncation until the leakage check passes (up to 1024 levels).
pub fn output_fock_vector_auto(zr: &OutputParams, n: usize) -> Result<FockVector> {
    let mut dim = default_dim(n);
    loop {
        match output_fock_vector(zr, n, dim) {
            Err(Error::Truncation { suggested, .. }) if suggested <= 1024 => dim = suggested,
            other => return other,
        }
    }
}

pub fn wavefunction_from_fock(v: &FockVector, x: f64) -> Complex64 {
    let basis = fock_basis(v.dim(), x);
    v.amplitudes.iter().zip(&basis).map(|(c, b)| c * b).sum()
}
