//! Brute-force reference computations that share no formulas with the
//! closed forms they check: the raw two-mode wavefunction, heralding by
//! numerical projection, grid quadrature of overlaps, moments and Wigner
//! functions, and the Gaussian reference state as an explicit matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::metrics::MomentPair;
use crate::params::TmegParams;
use crate::quad::simpson;
use crate::state::{fock_basis, squeeze_matrix, FockVector};

/// Largest herald the projection oracle accepts.
pub const ORACLE_MAX_N: usize = 10;

/// Uniform sample grid with an even number of intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, points: usize) -> Result<Self> {
        if points < 3 || points.is_multiple_of(2) || !(x_max > x_min) {
            return Err(Error::Domain(format!("grid needs an odd point count >= 3, got {points}")));
        }
        Ok(Grid { x_min, x_max, points })
    }

    /// `[-12, 12]` with 4096 intervals.
    pub fn standard() -> Self {
        Grid { x_min: -12.0, x_max: 12.0, points: 4097 }
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + self.dx() * i as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.x(i)).collect()
    }

    /// Composite Simpson weights.
    fn weights(&self) -> Vec<f64> {
        let h = self.dx() / 3.0;
        (0..self.points)
            .map(|i| {
                if i == 0 || i + 1 == self.points {
                    h
                } else if i % 2 == 1 {
                    4.0 * h
                } else {
                    2.0 * h
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavefunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl SampledWavefunction {
    pub fn sample(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.xs().into_iter().map(f).collect();
        SampledWavefunction { grid, values }
    }

    pub fn from_values(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.points {
            return Err(Error::DimensionMismatch(values.len(), grid.points));
        }
        Ok(SampledWavefunction { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Fails if either end sample exceeds `1e-10` of the peak modulus.
    pub fn check_capture(&self) -> Result<()> {
        let peak = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let edge = self.values[0].norm().max(self.values[self.values.len() - 1].norm());
        if !(peak > 0.0) || edge > 1e-10 * peak {
            return Err(Error::Resolution(format!(
                "boundary modulus {edge:e} vs peak {peak:e} on [{}, {}]",
                self.grid.x_min, self.grid.x_max
            )));
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        let dens: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        simpson(&dens, self.grid.dx())
    }

    pub fn normalized(&self) -> Self {
        let s = self.norm_sqr().sqrt();
        SampledWavefunction { grid: self.grid, values: self.values.iter().map(|v| v / s).collect() }
    }

    /// Cubic Lagrange interpolation; zero outside the grid.
    pub fn interpolate(&self, x: f64) -> Complex64 {
        let g = &self.grid;
        let t = (x - g.x_min) / g.dx();
        if !(t >= 0.0 && t <= (g.points - 1) as f64) {
            return Complex64::new(0.0, 0.0);
        }
        let i = t.round();
        if (t - i).abs() < 1e-12 {
            return self.values[i as usize];
        }
        let base = (t.floor() as isize - 1).clamp(0, g.points as isize - 4) as usize;
        let mut out = Complex64::new(0.0, 0.0);
        for j in 0..4 {
            let mut w = 1.0;
            for k in 0..4 {
                if k != j {
                    w *= (t - (base + k) as f64) / (j as f64 - k as f64);
                }
            }
            out += self.values[base + j] * w;
        }
        out
    }
}

/// The normalized two-mode Gaussian at `(x1, x2)`.
pub fn tmeg_wavefunction(p: &TmegParams, x1: f64, x2: f64) -> Complex64 {
    let pref = p.determinant().powf(0.25) / std::f64::consts::PI.sqrt();
    let expo = -(p.a() * x1 * x1 + 2.0 * p.b() * x1 * x2 + p.c() * x2 * x2) / 2.0;
    pref * expo.exp()
}

/// Projects mode 1 onto `|0> .. |n_max>` by quadrature over `x1`. Returns the
/// normalized mode-2 state and the heralding probability for each outcome.
pub fn herald_all(p: &TmegParams, n_max: usize, grid: &Grid) -> Result<Vec<(SampledWavefunction, f64)>> {
    if n_max > ORACLE_MAX_N {
        return Err(Error::Size { n: n_max, max: ORACLE_MAX_N });
    }
    // The largest |Psi| along an edge x1 = ±X is reached at the x2 minimizing
    // the quadratic form, and likewise for x2 = ±X.
    let det = p.determinant();
    let edge = grid.x_min.abs().max(grid.x_max.abs());
    for re in [p.c().re, p.a().re] {
        let decay = (-(det / re) * edge * edge / 2.0).exp();
        if decay > 1e-10 {
            return Err(Error::Resolution(format!("two-mode state reaches the grid edge ({decay:e})")));
        }
    }

    let xs = grid.xs();
    let weights = grid.weights();
    let dim = n_max + 1;
    // basis[m][j] = w_j psi_m(x_j)
    let mut basis = vec![vec![0.0; xs.len()]; dim];
    for (j, (&x, &w)) in xs.iter().zip(&weights).enumerate() {
        for (m, v) in fock_basis(dim, x).into_iter().enumerate() {
            basis[m][j] = w * v;
        }
    }
    let (a, b, c) = (p.a(), p.b(), p.c());
    let pref = det.powf(0.25) / std::f64::consts::PI.sqrt();
    let e_a: Vec<Complex64> = xs.iter().map(|&x| (-a * x * x / 2.0).exp()).collect();
    // Stepping exp(-b x1 x2) multiplicatively stays in range for moderate b.
    let stepwise = b.re.abs() * edge * edge < 700.0 && a.re * edge * edge / 2.0 < 700.0;

    let mut out = vec![vec![Complex64::new(0.0, 0.0); xs.len()]; dim];
    let mut row = vec![Complex64::new(0.0, 0.0); xs.len()];
    for (i, &x2) in xs.iter().enumerate() {
        if stepwise {
            let step = (-b * x2 * grid.dx()).exp();
            let mut cur = (-b * x2 * grid.x_min).exp();
            for (r, ea) in row.iter_mut().zip(&e_a) {
                *r = ea * cur;
                cur *= step;
            }
        } else {
            for (r, &x1) in row.iter_mut().zip(&xs) {
                *r = (-(a * x1 * x1 + 2.0 * b * x1 * x2) / 2.0).exp();
            }
        }
        let outer = pref * (-c * x2 * x2 / 2.0).exp();
        for m in 0..dim {
            let acc: Complex64 = row.iter().zip(&basis[m]).map(|(r, w)| r * w).sum();
            out[m][i] = outer * acc;
        }
    }
    out.into_iter()
        .map(|values| {
            let f = SampledWavefunction { grid: *grid, values };
            f.check_capture()?;
            let prob = f.norm_sqr();
            Ok((f.normalized(), prob))
        })
        .collect()
}

pub fn herald_by_projection(p: &TmegParams, n: usize, grid: &Grid) -> Result<(SampledWavefunction, f64)> {
    let mut all = herald_all(p, n, grid)?;
    Ok(all.pop().expect("n_max + 1 outcomes"))
}

/// `int f* g dx` by composite Simpson.
pub fn quad_overlap(f: &SampledWavefunction, g: &SampledWavefunction) -> Result<Complex64> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    let prod: Vec<Complex64> = f.values.iter().zip(&g.values).map(|(a, b)| a.conj() * b).collect();
    Ok(simpson(&prod, f.grid.dx()))
}

/// Eighth-order central differences; the four samples at each end are left
/// at zero, where a captured state is negligible.
fn derivative(f: &SampledWavefunction) -> Vec<Complex64> {
    const C: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    let v = &f.values;
    let h = f.grid.dx();
    let mut d = vec![Complex64::new(0.0, 0.0); v.len()];
    for i in 4..v.len().saturating_sub(4) {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in C.iter().enumerate() {
            acc += (v[i + k + 1] - v[i - k - 1]) * *c;
        }
        d[i] = acc / h;
    }
    d
}

/// `<x^2>` and `<p^2>` by quadrature, after checking both first moments vanish.
pub fn moments_by_quadrature(f: &SampledWavefunction) -> Result<MomentPair> {
    f.check_capture()?;
    let h = f.grid.dx();
    let xs = f.grid.xs();
    let norm = f.norm_sqr();
    let dens: Vec<f64> = f.values.iter().map(|v| v.norm_sqr()).collect();
    let first: Vec<f64> = dens.iter().zip(&xs).map(|(d, x)| d * x).collect();
    let second: Vec<f64> = dens.iter().zip(&xs).map(|(d, x)| d * x * x).collect();
    let mean_x = simpson(&first, h) / norm;
    if mean_x.abs() > 1e-8 {
        return Err(Error::NonzeroMean(mean_x));
    }
    let df = derivative(f);
    let mom: Vec<Complex64> = f.values.iter().zip(&df).map(|(v, d)| v.conj() * d).collect();
    let mean_p = (-Complex64::i() * simpson(&mom, h)).re / norm;
    if mean_p.abs() > 1e-8 {
        return Err(Error::NonzeroMean(mean_p));
    }
    let grad: Vec<f64> = df.iter().map(|d| d.norm_sqr()).collect();
    MomentPair::new(simpson(&second, h) / norm, simpson(&grad, h) / norm)
}

/// A validated density matrix in the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = entries.nrows();
        if entries.ncols() != dim {
            return Err(Error::DimensionMismatch(dim, entries.ncols()));
        }
        let asym = (&entries - entries.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max);
        if asym > 1e-12 {
            return Err(Error::Internal(format!("density matrix not Hermitian ({asym:e})")));
        }
        let tr = entries.trace();
        if tr.re < 1.0 - 1e-8 {
            return Err(Error::Truncation { dim, leakage: 1.0 - tr.re, suggested: 2 * dim });
        }
        if tr.re > 1.0 + 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::Internal(format!("trace {tr}")));
        }
        let min_eig = entries.clone().symmetric_eigenvalues().min();
        if min_eig < -1e-10 {
            return Err(Error::Internal(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(DensityMatrix { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }
}

/// Zero-mean Gaussian state with covariance `diag(d_x, d_p)`, built as a
/// squeezed thermal state.
pub fn gaussian_reference(m: &MomentPair, dim: usize) -> Result<DensityMatrix> {
    let nu = m.nu();
    if nu < 0.5 - 1e-12 {
        return Err(Error::Domain(format!("symplectic eigenvalue {nu} below the vacuum limit")));
    }
    let nbar = (nu - 0.5).max(0.0);
    let r = 0.25 * (m.d_x / m.d_p).ln();
    // Build in a larger space and crop so the truncated squeeze is accurate
    // on the kept block.
    let big = dim + dim / 2 + 20;
    let s = squeeze_matrix(r, 0.0, big)?;
    let thermal: Vec<f64> = (0..big)
        .map(|k| {
            if nbar == 0.0 {
                if k == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (k as f64 * (nbar / (nbar + 1.0)).ln()).exp() / (nbar + 1.0)
            }
        })
        .collect();
    let mut scaled = s.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= Complex64::new(thermal[j], 0.0);
    }
    let full = scaled * s.adjoint();
    let crop = full.view((0, 0), (dim, dim)).into_owned();
    let herm = (&crop + crop.adjoint()) * Complex64::new(0.5, 0.0);
    DensityMatrix::new(herm)
}

/// [`gaussian_reference`] with the smallest power-of-two truncation (from 64
/// up to 512) that keeps the trace within `1e-8` of one.
pub fn gaussian_reference_auto(m: &MomentPair) -> Result<DensityMatrix> {
    let mut dim = 64;
    loop {
        match gaussian_reference(m, dim) {
            Err(Error::Truncation { suggested, .. }) if suggested <= 512 => dim = suggested,
            other => return other,
        }
    }
}

/// `<v| rho |v>`.
pub fn fidelity_by_matrix(v: &FockVector, rho: &DensityMatrix) -> Result<f64> {
    if v.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(v.dim(), rho.dim()));
    }
    let amps = v.amplitudes();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, ai) in amps.iter().enumerate() {
        let mut row = Complex64::new(0.0, 0.0);
        for (j, aj) in amps.iter().enumerate() {
            row += rho.entries[(i, j)] * aj;
        }
        acc += ai.conj() * row;
    }
    let f = acc.re;
    if !(-1e-10..=1.0 + 1e-10).contains(&f) {
        return Err(Error::Internal(format!("fidelity {f} outside [0, 1]")));
    }
    Ok(f.clamp(0.0, 1.0))
}

/// `(1/pi) int e^{2ipy} f*(x+y) f(x-y) dy` on the sample grid.
pub fn wigner_by_quadrature(f: &SampledWavefunction, x: f64, p: f64) -> Result<f64> {
    f.check_capture()?;
    let h = f.grid.dx();
    if p != 0.0 && std::f64::consts::PI / p.abs() < 4.0 * h {
        return Err(Error::Resolution(format!("p = {p} oscillates faster than the grid resolves")));
    }
    let reach = (f.grid.x_max - x).min(x - f.grid.x_min);
    if !(reach > 2.0 * h) {
        return Err(Error::Domain(format!("x = {x} lies at the grid edge")));
    }
    let half = (reach / h).floor() as usize;
    let samples: Vec<Complex64> = (0..=2 * half)
        .map(|j| {
            let y = (j as f64 - half as f64) * h;
            Complex64::from_polar(1.0, 2.0 * p * y) * f.interpolate(x + y).conj() * f.interpolate(x - y)
        })
        .collect();
    Ok(simpson(&samples, h).re / std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heralding::probability_abc;
    use crate::metrics::{fidelity_gaussian, moments, wigner_eval};
    use crate::params::{map_to_output, validate_tmeg, OutputParams};
    use crate::sampling::random_compact_tmeg;
    use crate::state::{
        fock_wavefunction, output_fock_vector, psi_out_abc, superposition_coeffs, wavefunction_from_fock,
        AbcWavefunction, ZrWavefunction,
    };
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fock_samples(k: usize, grid: Grid) -> SampledWavefunction {
        SampledWavefunction::sample(grid, |x| c(fock_wavefunction(k, x).unwrap(), 0.0))
    }

    fn example() -> TmegParams {
        validate_tmeg(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap()
    }

    #[test]
    fn tmeg_wavefunction_examples() {
        let p = example();
        assert!((tmeg_wavefunction(&p, 0.0, 0.0) - 1.0 / std::f64::consts::PI.sqrt()).norm() < 1e-15);
        let sym = validate_tmeg(c(1.5, 0.3), c(0.4, -0.2), c(1.5, 0.3)).unwrap();
        for (x1, x2) in [(0.3, -1.1), (2.0, 0.5)] {
            assert!((tmeg_wavefunction(&sym, x1, x2) - tmeg_wavefunction(&sym, x2, x1)).norm() < 1e-15);
        }
        // Two-dimensional Simpson of |Psi|^2.
        let g = Grid::new(-9.0, 9.0, 401).unwrap();
        let q = random_compact_tmeg(&mut rand_chacha::ChaCha8Rng::seed_from_u64(1));
        for p in [p, q] {
            let rows: Vec<f64> = g
                .xs()
                .iter()
                .map(|&x2| {
                    let row: Vec<f64> = g.xs().iter().map(|&x1| tmeg_wavefunction(&p, x1, x2).norm_sqr()).collect();
                    simpson(&row, g.dx())
                })
                .collect();
            assert!((simpson(&rows, g.dx()) - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn projection_examples() {
        let p = example();
        let out = herald_all(&p, 2, &Grid::standard()).unwrap();
        assert!((out[0].1 - 0.81650).abs() < 1e-5);
        assert!((out[0].1 - probability_abc(&p, 0).unwrap().p).abs() < 1e-10);
        let w = AbcWavefunction::new(&p, 1).unwrap();
        let closed = SampledWavefunction::sample(Grid::standard(), |x| w.eval(x));
        assert!(quad_overlap(&out[1].0, &closed).unwrap().norm() >= 1.0 - 1e-6);
        // Parity (-1)^n.
        for (n, (f, _)) in out.iter().enumerate() {
            let v = f.values();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for i in [100, 1500, 2000] {
                assert!((v[i] - sign * v[v.len() - 1 - i]).norm() < 1e-12);
            }
        }
        assert!(matches!(herald_by_projection(&p, 11, &Grid::standard()), Err(Error::Size { .. })));
        assert!(matches!(herald_by_projection(&p, 0, &Grid::new(-2.0, 2.0, 101).unwrap()), Err(Error::Resolution(_))));
    }

    #[test]
    fn end_to_end_chain() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        let grid = Grid::standard();
        for _ in 0..10 {
            let p = random_compact_tmeg(&mut rng);
            let out = herald_all(&p, 4, &grid).unwrap();
            let o = map_to_output(&p).unwrap();
            for (n, (f, prob)) in out.iter().enumerate() {
                let want = probability_abc(&p, n).unwrap().p;
                assert!((prob - want).abs() < 1e-6, "n={n}: {prob} vs {want}");
                let abc = AbcWavefunction::new(&p, n).unwrap();
                let g = SampledWavefunction::sample(grid, |x| abc.eval(x));
                assert!(quad_overlap(f, &g).unwrap().norm() >= 1.0 - 1e-6);
                let zr = ZrWavefunction::new(&o, n).unwrap();
                let g = SampledWavefunction::sample(grid, |x| zr.eval(x));
                assert!(quad_overlap(f, &g).unwrap().norm() >= 1.0 - 1e-6);
            }
        }
        assert!(psi_out_abc(&example(), 0, 0.0).is_ok());
    }

    #[test]
    fn overlap_examples() {
        let g = Grid::standard();
        for m in 0..=6 {
            for k in 0..=6 {
                let ov = quad_overlap(&fock_samples(m, g), &fock_samples(k, g)).unwrap();
                let want = if m == k { 1.0 } else { 0.0 };
                assert!((ov - want).norm() < 1e-10, "<{m}|{k}> = {ov}");
            }
        }
        let other = Grid::new(-10.0, 10.0, 4097).unwrap();
        assert!(matches!(quad_overlap(&fock_samples(0, g), &fock_samples(0, other)), Err(Error::GridMismatch)));
    }

    #[test]
    fn moments_examples() {
        let g = Grid::standard();
        for k in 0..6 {
            let m = moments_by_quadrature(&fock_samples(k, g)).unwrap();
            let want = (2 * k + 1) as f64 / 2.0;
            assert!((m.d_x - want).abs() < 1e-9 && (m.d_p - want).abs() < 1e-9, "{k}: {m:?}");
        }
        let core = superposition_coeffs(2, 1.0).unwrap().to_fock_vector(3).unwrap();
        let f = SampledWavefunction::sample(g, |x| wavefunction_from_fock(&core, x));
        let m = moments_by_quadrature(&f).unwrap();
        let want = moments(2, 1.0).unwrap();
        assert!((m.d_x - want.d_x).abs() < 1e-7 && (m.d_p - want.d_p).abs() < 1e-7);
        let shifted = SampledWavefunction::sample(g, |x| c(fock_wavefunction(0, x - 0.5).unwrap(), 0.0));
        assert!(matches!(moments_by_quadrature(&shifted), Err(Error::NonzeroMean(_))));
        let kicked = SampledWavefunction::sample(g, |x| c(0.0, 0.3 * x).exp() * fock_wavefunction(0, x).unwrap());
        assert!(matches!(moments_by_quadrature(&kicked), Err(Error::NonzeroMean(_))));
    }

    #[test]
    fn moments_formula_matches_quadrature() {
        let g = Grid::standard();
        for n in 0..=8 {
            for z in [0.0, 0.3, 0.8, 1.5, 3.0] {
                let core = superposition_coeffs(n, z).unwrap().to_fock_vector(n + 1).unwrap();
                let f = SampledWavefunction::sample(g, |x| wavefunction_from_fock(&core, x));
                let q = moments_by_quadrature(&f).unwrap();
                let m = moments(n, z).unwrap();
                assert!((q.d_x - m.d_x).abs() < 1e-7 && (q.d_p - m.d_p).abs() < 1e-7, "n={n} z={z}");
            }
        }
    }

    #[test]
    fn gaussian_reference_examples() {
        let vac = gaussian_reference(&MomentPair::new(0.5, 0.5).unwrap(), 10).unwrap();
        assert!((vac.entries()[(0, 0)] - 1.0).norm() < 1e-12);
        assert!((vac.purity() - 1.0).abs() < 1e-12);

        let th = gaussian_reference(&MomentPair::new(1.5, 1.5).unwrap(), 80).unwrap();
        for k in 0..10 {
            let want = 0.5f64.powi(k as i32 + 1);
            assert!((th.entries()[(k, k)] - want).norm() < 1e-12);
        }
        assert!((th.entries()[(1, 1)].re - 0.25).abs() < 1e-12);
        let f = fidelity_by_matrix(&FockVector::basis(1, 80), &th).unwrap();
        assert!((f - 0.25).abs() < 1e-12);

        assert!(matches!(gaussian_reference(&MomentPair { d_x: 0.4, d_p: 0.5 }, 10), Err(Error::Domain(_))));
        assert!(matches!(gaussian_reference(&MomentPair::new(20.0, 20.0).unwrap(), 30), Err(Error::Truncation { .. })));
    }

    #[test]
    fn gaussian_reference_purity() {
        for (dx, dp) in [(0.5, 0.5), (1.5, 1.5), (2.2, 0.8), (3.0, 0.3), (1.1, 0.9)] {
            let m = MomentPair::new(dx, dp).unwrap();
            let rho = gaussian_reference(&m, 200).unwrap();
            assert!((rho.purity() - 1.0 / (2.0 * m.nu())).abs() < 1e-8, "({dx}, {dp})");
        }
    }

    #[test]
    fn gaussian_reference_has_requested_moments() {
        // <x^2> = Re tr(rho (a + a†)^2)/2.
        let m = MomentPair::new(2.3, 0.6).unwrap();
        let rho = gaussian_reference(&m, 200).unwrap();
        let e = rho.entries();
        let mut a2 = Complex64::new(0.0, 0.0);
        let mut num = 0.0;
        for k in 0..198 {
            a2 += e[(k + 2, k)] * (((k + 1) * (k + 2)) as f64).sqrt();
            num += k as f64 * e[(k, k)].re;
        }
        assert!((num + 0.5 + a2.re - m.d_x).abs() < 1e-8);
        assert!((num + 0.5 - a2.re - m.d_p).abs() < 1e-8);
    }

    #[test]
    fn fidelity_formula_matches_matrix() {
        for n in 0..=8 {
            for z in [0.0, 0.2, 0.5, 1.0, 2.0] {
                let rho = gaussian_reference_auto(&moments(n, z).unwrap()).unwrap();
                let dim = rho.dim();
                let core = superposition_coeffs(n, z).unwrap().to_fock_vector(dim).unwrap();
                let f = fidelity_by_matrix(&core, &rho).unwrap();
                assert!((f - fidelity_gaussian(n, z).unwrap()).abs() < 1e-6, "n={n} z={z}");
            }
        }
        let vac = gaussian_reference(&MomentPair::new(0.5, 0.5).unwrap(), 5).unwrap();
        assert!((fidelity_by_matrix(&FockVector::basis(0, 5), &vac).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(fidelity_by_matrix(&FockVector::basis(0, 4), &vac), Err(Error::DimensionMismatch(4, 5))));
    }

    #[test]
    fn wigner_quadrature_examples() {
        let g = Grid::standard();
        let pi = std::f64::consts::PI;
        assert!((wigner_by_quadrature(&fock_samples(0, g), 0.0, 0.0).unwrap() - 1.0 / pi).abs() < 1e-10);
        assert!((wigner_by_quadrature(&fock_samples(1, g), 0.0, 0.0).unwrap() + 1.0 / pi).abs() < 1e-10);
        assert!(matches!(wigner_by_quadrature(&fock_samples(0, g), 0.0, 300.0), Err(Error::Resolution(_))));
    }

    #[test]
    fn wigner_paths_agree() {
        let g = Grid::standard();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let superpos = FockVector::new(vec![c(s, 0.0), c(0.0, s)]);
        let dressed = output_fock_vector(&OutputParams::state(c(0.7, -0.4), c(0.9, 0.35)).unwrap(), 3, 52).unwrap();
        for v in [superpos, dressed] {
            let f = SampledWavefunction::sample(g, |x| wavefunction_from_fock(&v, x));
            for x in [-1.7, -0.6, 0.0, 0.45, 1.3] {
                for p in [-1.4, -0.5, 0.0, 0.8, 1.9] {
                    let direct = wigner_by_quadrature(&f, x, p).unwrap();
                    let fast = wigner_eval(&v, x, p);
                    assert!((direct - fast).abs() < 1e-8, "({x}, {p}): {direct} vs {fast}");
                }
            }
        }
    }

    #[test]
    fn quadrature_converges_at_order() {
        // Errors at three resolutions; each halving must gain 8x until the
        // rounding floor.
        let check = |errs: &[f64]| {
            for w in errs.windows(2) {
                assert!(w[1] <= w[0] / 8.0 || w[1] < 1e-12, "{errs:?}");
            }
        };
        let grids: Vec<Grid> = [49, 97, 193].iter().map(|&n| Grid::new(-12.0, 12.0, n).unwrap()).collect();
        let norm_errs: Vec<f64> = grids.iter().map(|&g| (fock_samples(3, g).norm_sqr() - 1.0).abs()).collect();
        check(&norm_errs);
        let dp_errs: Vec<f64> =
            grids.iter().map(|&g| (moments_by_quadrature(&fock_samples(3, g)).unwrap().d_p - 3.5).abs()).collect();
        check(&dp_errs);
        let w_errs: Vec<f64> = grids
            .iter()
            .map(|&g| {
                let f = fock_samples(2, g);
                (wigner_by_quadrature(&f, 0.0, 0.7).unwrap() - wigner_eval(&FockVector::basis(2, 3), 0.0, 0.7)).abs()
            })
            .collect();
        check(&w_errs);
    }
}
