//! Seeded random parameter generators shared by the self-test, the test
//! suites and the benchmarks of the acceptance harness.

use num_complex::Complex64;
use rand::Rng;

use crate::params::{squeezed_vacuum_exponent, validate_tmeg, OutputParams, TmegParams};

/// A valid `(a, b, c)` with a margin on every validity condition.
pub fn random_tmeg(rng: &mut impl Rng) -> TmegParams {
    loop {
        let a = Complex64::new(rng.gen_range(0.2..3.0), rng.gen_range(-1.5..1.5));
        let b = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.5..1.5));
        let c = Complex64::new(rng.gen_range(0.2..3.0), rng.gen_range(-1.5..1.5));
        if let Ok(p) = validate_tmeg(a, b, c) {
            if p.determinant() > 0.02 && (a - 1.0).norm() > 0.05 && b.norm() > 0.05 {
                return p;
            }
        }
    }
}

/// A valid `(a, b, c)` whose two-mode wavefunction fits inside `|x| <= 12`:
/// the smallest eigenvalue of the real quadratic form is at least 0.4 and
/// `Re[R] >= 0.5`, so the heralded output fits as well.
pub fn random_compact_tmeg(rng: &mut impl Rng) -> TmegParams {
    loop {
        let p = random_tmeg(rng);
        let (ar, br, cr) = (p.a().re, p.b().re, p.c().re);
        let mean = 0.5 * (ar + cr);
        let disc = (0.25 * (ar - cr) * (ar - cr) + br * br).sqrt();
        if mean - disc >= 0.4 && p.output_exponent().re >= 0.5 {
            return p;
        }
    }
}

/// Random `(z, R)` with `|z| <= z_max` and squeeze magnitude `r_R <= r_max`.
/// `R` is drawn through `(r, phi)` so that the squeeze stays bounded.
pub fn random_output(rng: &mut impl Rng, z_max: f64, r_max: f64) -> OutputParams {
    loop {
        let z = Complex64::from_polar(
            rng.gen_range(0.0..z_max),
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        );
        let r = rng.gen_range(0.0..r_max);
        let phi = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        if let Ok(o) = OutputParams::state(z, squeezed_vacuum_exponent(r, phi)) {
            return o;
        }
    }
}
