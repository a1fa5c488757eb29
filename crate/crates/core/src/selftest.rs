//! Self-test suite: every closed form against its independent oracle, at two
//! depths. Used by the `selftest` subcommand.

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::heralding::{optimize_probability, probability_abc, probability_za, ring_locus, OptimizeConfig};
use crate::metrics::{core_negativity, fidelity_gaussian, moments, wigner_eval};
use crate::oracle::{
    fidelity_by_matrix, gaussian_reference_auto, herald_all, moments_by_quadrature, quad_overlap, wigner_by_quadrature,
    Grid, SampledWavefunction,
};
use crate::params::{invert_map, map_to_output};
use crate::sampling::{random_compact_tmeg, random_output, random_tmeg};
use crate::specfun::{hermite_eval, terminating_2f1};
use crate::state::{
    default_dim, output_fock_vector, superposition_coeffs, wavefunction_from_fock, AbcWavefunction, ZrWavefunction,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn(Level) -> Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn special_functions(_: Level) -> Result<String, String> {
    let h3 = hermite_eval(3, c(1.0, 0.0)).map_err(err)?;
    ensure((h3 - c(-4.0, 0.0)).norm() < 1e-12, || format!("H_3(1) = {h3}"))?;
    let f = terminating_2f1(-0.5, -1.0, 1.0, 1.0).map_err(err)?;
    ensure((f - 1.5).abs() < 1e-14, || format!("2F1(-1/2,-1;1;1) = {f}"))?;
    let f = terminating_2f1(-1.0, -1.5, 1.0, 0.25).map_err(err)?;
    ensure((f - 1.375).abs() < 1e-14, || format!("2F1(-1,-3/2;1;1/4) = {f}"))?;
    Ok("Hermite and 2F1 reference values".into())
}

fn parameter_map(level: Level) -> Result<String, String> {
    let count = if level == Level::Full { 1000 } else { 100 };
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let p = random_tmeg(&mut rng);
        let o = map_to_output(&p).map_err(err)?;
        let q = invert_map(p.a(), o.z(), o.r()).map_err(err)?;
        // b comes back on the principal branch.
        let db = (q.b() - p.b()).norm().min((q.b() + p.b()).norm());
        worst = worst.max(db).max((q.c() - p.c()).norm());
    }
    ensure(worst < 1e-10, || format!("round-trip error {worst:e}"))?;
    Ok(format!("{count} round trips, max error {worst:.1e}"))
}

fn probability_forms(level: Level) -> Result<String, String> {
    let count = if level == Level::Full { 500 } else { 100 };
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for i in 0..count {
        let p = random_tmeg(&mut rng);
        let o = map_to_output(&p).map_err(err)?;
        let n = i % 9;
        let pa = probability_abc(&p, n).map_err(err)?.p;
        let pz = probability_za(o.z(), p.a(), n).map_err(err)?.p;
        worst = worst.max((pa - pz).abs());
    }
    ensure(worst < 1e-10, || format!("max |P_abc - P_za| = {worst:e}"))?;
    Ok(format!("{count} points, max difference {worst:.1e}"))
}

fn projection_chain(level: Level) -> Result<String, String> {
    let (states, n_max) = if level == Level::Full { (50, 4) } else { (3, 3) };
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let grid = Grid::standard();
    let (mut worst_p, mut worst_ov) = (0.0f64, 0.0f64);
    for _ in 0..states {
        let p = random_compact_tmeg(&mut rng);
        for (n, (f, prob)) in herald_all(&p, n_max, &grid).map_err(err)?.into_iter().enumerate() {
            let want = probability_abc(&p, n).map_err(err)?.p;
            worst_p = worst_p.max((prob - want).abs());
            let w = AbcWavefunction::new(&p, n).map_err(err)?;
            let g = SampledWavefunction::sample(grid, |x| w.eval(x));
            let ov = quad_overlap(&f, &g).map_err(err)?.norm();
            worst_ov = worst_ov.max(1.0 - ov);
        }
    }
    ensure(worst_p < 1e-6 && worst_ov < 1e-6, || {
        format!("probability error {worst_p:e}, overlap deficit {worst_ov:e}")
    })?;
    Ok(format!("{states} states, n <= {n_max}: probability error {worst_p:.1e}, overlap deficit {worst_ov:.1e}"))
}

fn decomposition(level: Level) -> Result<String, String> {
    let count = if level == Level::Full { 200 } else { 10 };
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let grid = Grid::standard();
    let mut worst = 0.0f64;
    for i in 0..count {
        let o = random_output(&mut rng, 3.0, 0.45);
        let n = i % 7;
        let v = output_fock_vector(&o, n, default_dim(n)).map_err(err)?;
        let zr = ZrWavefunction::new(&o, n).map_err(err)?;
        let f = SampledWavefunction::sample(grid, |x| wavefunction_from_fock(&v, x));
        let g = SampledWavefunction::sample(grid, |x| zr.eval(x));
        worst = worst.max(1.0 - quad_overlap(&f, &g).map_err(err)?.norm());
    }
    ensure(worst < 1e-6, || format!("overlap deficit {worst:e}"))?;
    Ok(format!("{count} states, overlap deficit {worst:.1e}"))
}

fn normalization(_: Level) -> Result<String, String> {
    let mut worst = 0.0f64;
    for n in 0..=30 {
        for j in 0..=12 {
            let s = superposition_coeffs(n, 0.25 * j as f64).map_err(err)?;
            worst = worst.max((s.coeffs().iter().map(|a| a * a).sum::<f64>() - 1.0).abs());
        }
    }
    ensure(worst < 1e-12, || format!("|sum A^2 - 1| = {worst:e}"))?;
    Ok(format!("n <= 30, max deviation {worst:.1e}"))
}

fn moments_check(level: Level) -> Result<String, String> {
    let (n_max, zs): (usize, &[f64]) =
        if level == Level::Full { (8, &[0.0, 0.3, 0.8, 1.5, 3.0, 5.0]) } else { (5, &[0.4, 1.7]) };
    let grid = Grid::standard();
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        for &z in zs {
            let core = superposition_coeffs(n, z).map_err(err)?.to_fock_vector(n + 1).map_err(err)?;
            let f = SampledWavefunction::sample(grid, |x| wavefunction_from_fock(&core, x));
            let q = moments_by_quadrature(&f).map_err(err)?;
            let m = moments(n, z).map_err(err)?;
            worst = worst.max((q.d_x - m.d_x).abs()).max((q.d_p - m.d_p).abs());
        }
    }
    ensure(worst < 1e-7, || format!("moment error {worst:e}"))?;
    Ok(format!("n <= {n_max}, max error {worst:.1e}"))
}

fn fidelity_check(level: Level) -> Result<String, String> {
    let (n_max, zs): (usize, &[f64]) = if level == Level::Full { (6, &[0.2, 0.5, 1.0, 2.0]) } else { (4, &[0.5, 1.0]) };
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        for &z in zs {
            let rho = gaussian_reference_auto(&moments(n, z).map_err(err)?).map_err(err)?;
            let core = superposition_coeffs(n, z).map_err(err)?.to_fock_vector(rho.dim()).map_err(err)?;
            let f = fidelity_by_matrix(&core, &rho).map_err(err)?;
            worst = worst.max((f - fidelity_gaussian(n, z).map_err(err)?).abs());
        }
    }
    ensure(worst < 1e-6, || format!("fidelity error {worst:e}"))?;
    Ok(format!("n <= {n_max}, max error {worst:.1e}"))
}

fn wigner_check(level: Level) -> Result<String, String> {
    let fock1 = 4.0 * (-0.5f64).exp() - 2.0;
    let wn = core_negativity(1, 0.7, 1e-8).map_err(err)?;
    ensure((wn - fock1).abs() < 1e-6, || format!("Fock-1 negativity {wn}"))?;
    let o = crate::params::OutputParams::state(c(0.6, -0.5), c(0.8, 0.3)).map_err(err)?;
    let v = output_fock_vector(&o, 3, default_dim(3)).map_err(err)?;
    let f = SampledWavefunction::sample(Grid::standard(), |x| wavefunction_from_fock(&v, x));
    let probes: &[f64] = if level == Level::Full { &[-1.5, -0.6, 0.0, 0.7, 1.6] } else { &[-0.8, 0.5] };
    let mut worst = 0.0f64;
    for &x in probes {
        for &p in probes {
            worst = worst.max((wigner_by_quadrature(&f, x, p).map_err(err)? - wigner_eval(&v, x, p)).abs());
        }
    }
    ensure(worst < 1e-8, || format!("Wigner paths differ by {worst:e}"))?;
    Ok(format!("negativity(Fock-1) = {wn:.8}, Wigner paths agree to {worst:.1e}"))
}

fn ring_check(level: Level) -> Result<String, String> {
    let ns: &[usize] = if level == Level::Full { &[1, 2, 3] } else { &[1] };
    let mut worst = 0.0f64;
    for &n in ns {
        let ring = ring_locus(n).map_err(err)?;
        let opt = optimize_probability(c(0.0, 0.0), n, &OptimizeConfig::default()).map_err(err)?;
        worst = worst.max(ring.distance(opt.a_best));
        let p_ring = probability_za(c(0.0, 0.0), ring.point(0.9), n).map_err(err)?.p;
        ensure((p_ring - opt.p_best).abs() < 1e-9, || format!("n={n}: ring {p_ring} vs optimum {}", opt.p_best))?;
    }
    ensure(worst < 1e-4, || format!("optimum {worst:e} from ring"))?;
    Ok(format!("n in {ns:?}, max ring distance {worst:.1e}"))
}

fn completeness(level: Level) -> Result<String, String> {
    let count = if level == Level::Full { 20 } else { 5 };
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let p = random_compact_tmeg(&mut rng);
        let d = crate::heralding::distribution(&p, 150).map_err(err)?;
        worst = worst.max(d.tail.abs());
    }
    ensure(worst < 1e-6, || format!("|1 - sum P_n| = {worst:e}"))?;
    Ok(format!("{count} states, max tail {worst:.1e}"))
}

const CHECKS: &[(&str, Check)] = &[
    ("special functions", special_functions),
    ("parameter map round trip", parameter_map),
    ("probability (abc) vs (z, a)", probability_forms),
    ("projection oracle chain", projection_chain),
    ("squeeze-rotation decomposition", decomposition),
    ("superposition normalization", normalization),
    ("moments vs quadrature", moments_check),
    ("fidelity vs density matrix", fidelity_check),
    ("Wigner function and negativity", wigner_check),
    ("ring optimality", ring_check),
    ("distribution completeness", completeness),
];

pub fn run(level: Level) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(name, check)| {
            let start = Instant::now();
            let result = check(level);
            let seconds = start.elapsed().as_secs_f64();
            match result {
                Ok(detail) => CheckOutcome { name, passed: true, detail, seconds },
                Err(detail) => CheckOutcome { name, passed: false, detail, seconds },
            }
        })
        .collect()
}

/// Plain-text table of outcomes.
pub fn render(outcomes: &[CheckOutcome]) -> String {
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for o in outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status}  {:width$}  {:7.2}s  {}\n", o.name, o.seconds, o.detail));
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    out.push_str(&format!("{} checks, {} failed\n", outcomes.len(), failed));
    out
}
