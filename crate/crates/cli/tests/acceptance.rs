//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line (written past the test harness capture) and then
//! asserts, so `cargo test` also fails on any unmet criterion.

use std::f64::consts::PI;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use heraldlab::heralding::{
    distribution, optimize_probability, probability_abc, probability_za, ring_locus, OptimizeConfig,
};
use heraldlab::metrics::{core_negativity, fidelity_gaussian, moments, ng_measure_max};
use heraldlab::oracle::{
    fidelity_by_matrix, gaussian_reference_auto, herald_all, quad_overlap, Grid, SampledWavefunction,
};
use heraldlab::params::{invert_map, map_to_output, squeezed_vacuum_exponent};
use heraldlab::sampling::{random_compact_tmeg, random_output, random_tmeg};
use heraldlab::state::{
    default_dim, output_fock_vector_unchecked, wavefunction_from_fock, AbcWavefunction, ZrWavefunction,
};
use heraldlab::superposition_coeffs;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Negativity of the one-photon Fock state, `4 e^{-1/2} - 2`.
fn fock1_negativity() -> f64 {
    4.0 * (-0.5f64).exp() - 2.0
}

fn report(id: u32, title: &str, passed: bool, detail: &str, elapsed: Duration) {
    let status = if passed { "PASS" } else { "FAIL" };
    let line = format!("[acceptance] {status} #{id:<2} {title} ({:.1}s): {detail}\n", elapsed.as_secs_f64());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(passed, "criterion {id} ({title}) failed: {detail}");
}

fn rng(id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(1000 + id)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn criterion_01_projection_chain() {
    let start = Instant::now();
    let mut rng = rng(1);
    let grid = Grid::standard();
    let (mut worst_p, mut worst_ov) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let p = random_compact_tmeg(&mut rng);
        let projected = herald_all(&p, 4, &grid).expect("projection oracle");
        for (n, (f, prob)) in projected.into_iter().enumerate() {
            worst_p = worst_p.max((prob - probability_abc(&p, n).unwrap().p).abs());
            let w = AbcWavefunction::new(&p, n).unwrap();
            let g = SampledWavefunction::sample(grid, |x| w.eval(x));
            worst_ov = worst_ov.max(1.0 - quad_overlap(&f, &g).unwrap().norm());
        }
    }
    let elapsed = start.elapsed();
    let ok = worst_p <= 1e-6 && worst_ov <= 1e-6 && elapsed <= Duration::from_secs(60);
    report(
        1,
        "projection oracle reproduces wavefunctions and probabilities",
        ok,
        &format!("50 states, n <= 4: max |dP| = {worst_p:.2e}, max overlap deficit = {worst_ov:.2e}"),
        elapsed,
    );
}

#[test]
fn criterion_02_parametrization_equivalence() {
    let start = Instant::now();
    let mut rng = rng(2);
    let (mut worst_forms, mut worst_r, mut infeasible) = (0.0f64, 0.0f64, 0usize);
    for i in 0..500 {
        let p = random_tmeg(&mut rng);
        let n = i % 9;
        let o = map_to_output(&p).unwrap();
        let pa = probability_abc(&p, n).unwrap().p;
        let pz = probability_za(o.z(), p.a(), n).unwrap().p;
        worst_forms = worst_forms.max((pa - pz).abs());
        for _ in 0..20 {
            let r = squeezed_vacuum_exponent(rng.gen_range(0.0..1.5), rng.gen_range(-PI..PI));
            match invert_map(p.a(), o.z(), r) {
                Ok(q) => worst_r = worst_r.max((probability_abc(&q, n).unwrap().p - pa).abs()),
                Err(_) => infeasible += 1,
            }
        }
    }
    let ok = worst_forms <= 1e-10 && worst_r <= 1e-10 && infeasible == 0;
    report(
        2,
        "probability forms agree and ignore R",
        ok,
        &format!(
            "500 points, n <= 8: max form difference {worst_forms:.2e}; 10000 R draws: max change {worst_r:.2e}, {infeasible} infeasible"
        ),
        start.elapsed(),
    );
}

#[test]
fn criterion_03_decomposition_identity() {
    let start = Instant::now();
    let mut rng = rng(3);
    let grid = Grid::standard();
    let (mut worst, mut worst_leak, mut guarded) = (0.0f64, 0.0f64, 0usize);
    for i in 0..200 {
        let o = random_output(&mut rng, 3.0, 0.5);
        let n = i % 7;
        // Exactly dim = 4n + 40; the library's stricter leakage guard is
        // counted separately rather than allowed to pick a larger space.
        let v = output_fock_vector_unchecked(&o, n, default_dim(n)).unwrap();
        let leak = v.leakage();
        worst_leak = worst_leak.max(leak);
        guarded += usize::from(leak > 1e-10);
        let zr = ZrWavefunction::new(&o, n).unwrap();
        let f = SampledWavefunction::sample(grid, |x| wavefunction_from_fock(&v, x));
        let g = SampledWavefunction::sample(grid, |x| zr.eval(x));
        worst = worst.max(1.0 - quad_overlap(&f, &g).unwrap().norm());
    }
    report(
        3,
        "squeeze + rotation of the core reproduces the output wavefunction",
        worst <= 1e-6,
        &format!(
            "200 (z, R), n <= 6, dim 4n+40: max overlap deficit {worst:.2e}; top-quarter leakage max {worst_leak:.1e} ({guarded} above the 1e-10 guard)"
        ),
        start.elapsed(),
    );
}

#[test]
fn criterion_04_normalization() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 0..=30 {
        for j in 0..=12 {
            let s = superposition_coeffs(n, 0.25 * j as f64).unwrap();
            worst = worst.max((s.coeffs().iter().map(|a| a * a).sum::<f64>() - 1.0).abs());
        }
    }
    report(
        4,
        "core amplitudes are normalized",
        worst <= 1e-12,
        &format!("n <= 30, |z| in {{0, 0.25, .., 3}}: max |sum A^2 - 1| = {worst:.2e}"),
        start.elapsed(),
    );
}

#[test]
fn criterion_05_negativity_curves() {
    let start = Instant::now();
    let tol = 1e-6;
    let zs: Vec<f64> = (0..=15).map(|j| 0.2 * j as f64).collect();
    let mut problems = Vec::new();
    let mut n1_dev = 0.0f64;
    let mut limits = Vec::new();
    for n in 1..=5usize {
        let curve: Vec<f64> = zs.iter().map(|&z| core_negativity(n, z, tol).unwrap()).collect();
        if n == 1 {
            n1_dev = curve.iter().map(|w| (w - fock1_negativity()).abs()).fold(0.0, f64::max);
        }
        if curve.windows(2).any(|w| w[1] > w[0] + 2.0 * tol) {
            problems.push(format!("n={n} increases"));
        }
        if curve.iter().any(|&w| w > curve[0] + 2.0 * tol) {
            problems.push(format!("n={n} maximum not at |z|=0"));
        }
        let far = core_negativity(n, 1e3, tol).unwrap();
        let want = if n % 2 == 1 { fock1_negativity() } else { 0.0 };
        if (far - want).abs() > 5e-3 {
            problems.push(format!("n={n}: WN(|z|=1e3) = {far}"));
        }
        limits.push(format!("{n}:{far:.5}"));
    }
    let elapsed = start.elapsed();
    if n1_dev > 2e-3 {
        problems.push(format!("n=1 curve deviates by {n1_dev}"));
    }
    if elapsed > Duration::from_secs(180) {
        problems.push("runtime above 3 min".into());
    }
    report(
        5,
        "Wigner negativity curves",
        problems.is_empty(),
        &format!(
            "n=1 max deviation from 0.42612 = {n1_dev:.2e}; WN at |z|=1e3 [{}]; {}",
            limits.join(", "),
            if problems.is_empty() { "monotone, maxima at 0".to_string() } else { problems.join("; ") }
        ),
        elapsed,
    );
}

#[test]
fn criterion_06_moment_and_fidelity_anchors() {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;

    let mut worst = 0.0f64;
    for n in 0..=30usize {
        let m = moments(n, 0.0).unwrap();
        let want = (2.0 * n as f64 + 1.0) / 2.0;
        worst = worst.max((m.d_x - want).abs()).max((m.d_p - want).abs());
    }
    ok &= worst <= 1e-12;
    parts.push(format!("moments(n,0) max error {worst:.1e}"));

    // Sum of variances against the literal target 2n+1, with the mean photon
    // number identity alongside for diagnosis.
    let (mut worst_sum, mut worst_mean, mut at) = (0.0f64, 0.0f64, (0, 0.0));
    for n in 0..=30usize {
        for j in 0..=20 {
            let z = 0.25 * j as f64;
            let m = moments(n, z).unwrap();
            let sum = m.d_x + m.d_p;
            let dev = (sum - (2.0 * n as f64 + 1.0)).abs();
            if dev > worst_sum {
                worst_sum = dev;
                at = (n, z);
            }
            let mean = superposition_coeffs(n, z).unwrap().mean_number();
            worst_mean = worst_mean.max((sum - (2.0 * mean + 1.0)).abs());
        }
    }
    ok &= worst_sum <= 1e-10;
    parts.push(format!(
        "max |d_x + d_p - (2n+1)| = {worst_sum:.3e} at n={}, |z|={} (|d_x + d_p - (2<n>+1)| <= {worst_mean:.1e})",
        at.0, at.1
    ));

    let mut worst_f = 0.0f64;
    for n in 1..=30usize {
        let nf = n as f64;
        let want = (nf * nf.ln() - (nf + 1.0) * (nf + 1.0).ln()).exp();
        worst_f = worst_f.max((fidelity_gaussian(n, 0.0).unwrap() - want).abs());
    }
    let f1 = fidelity_gaussian(1, 0.0).unwrap();
    ok &= worst_f <= 1e-12 && (f1 - 0.25).abs() <= 1e-12;
    parts.push(format!("fidelity(n,0) max error {worst_f:.1e}, fidelity(1,0) = {f1}"));

    let m2 = ng_measure_max(2).unwrap();
    let dm = (m2 - (1.0 - (4.0f64 / 27.0).sqrt())).abs();
    ok &= dm <= 1e-12;
    parts.push(format!("ng_measure_max(2) error {dm:.1e}"));

    report(6, "moment and fidelity anchors", ok, &parts.join("; "), start.elapsed());
}

#[test]
fn criterion_07_fidelity_oracle() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 0..=6 {
        for z in [0.2, 0.5, 1.0, 2.0] {
            let rho = gaussian_reference_auto(&moments(n, z).unwrap()).unwrap();
            let core = superposition_coeffs(n, z).unwrap().to_fock_vector(rho.dim()).unwrap();
            let oracle = fidelity_by_matrix(&core, &rho).unwrap();
            worst = worst.max((oracle - fidelity_gaussian(n, z).unwrap()).abs());
        }
    }
    report(
        7,
        "fidelity formula matches the density-matrix oracle",
        worst <= 1e-6,
        &format!("n <= 6, |z| in {{0.2, 0.5, 1, 2}}: max difference {worst:.2e}"),
        start.elapsed(),
    );
}

#[test]
fn criterion_08_ring_optimality() {
    let start = Instant::now();
    let mut rng = rng(8);
    let zero = c(0.0, 0.0);
    let mut ok = true;
    let mut parts = Vec::new();
    let ring1 = ring_locus(1).unwrap();
    let geometry = (ring1.center_re - 5.0 / 3.0).abs() < 1e-15 && (ring1.radius - 4.0 / 3.0).abs() < 1e-15;
    ok &= geometry;
    for n in 1..=3usize {
        let ring = ring_locus(n).unwrap();
        let best = optimize_probability(zero, n, &OptimizeConfig::default()).unwrap();
        let dist = ring.distance(best.a_best);
        ok &= dist <= 1e-4;
        if n == 1 {
            ok &= (best.p_best - 0.25).abs() <= 1e-6;
        }
        let on: Vec<f64> = (0..32)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / 32.0;
                probability_za(zero, ring.point(theta), n).unwrap().p
            })
            .collect();
        let on_min = on.iter().copied().fold(f64::INFINITY, f64::min);
        let on_max = on.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ok &= on_max - on_min <= 1e-9;
        let reach = ring.center_re + ring.radius;
        let mut off = Vec::new();
        while off.len() < 100 {
            let a = c(rng.gen_range(0.0..1.5 * reach), rng.gen_range(-reach..reach));
            if ring.distance(a) < 1e-3 || (a - 1.0).norm() < 1e-6 {
                continue;
            }
            if let Ok(r) = probability_za(zero, a, n) {
                off.push(r.p);
            }
        }
        let off_max = off.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ok &= on_min > off_max;
        parts.push(format!(
            "n={n}: p_best {:.9}, ring distance {dist:.1e}, ring spread {:.1e}, ring min - off-ring max {:.2e}",
            best.p_best,
            on_max - on_min,
            on_min - off_max
        ));
    }
    report(8, "probability maximal on the ring at z = 0", ok, &parts.join("; "), start.elapsed());
}

#[test]
fn criterion_09_completeness() {
    let start = Instant::now();
    let mut rng = rng(9);
    let mut tails = Vec::new();
    for _ in 0..20 {
        let p = random_compact_tmeg(&mut rng);
        tails.push(distribution(&p, 40).unwrap().tail);
    }
    let worst = tails.iter().map(|t| t.abs()).fold(0.0, f64::max);
    let failing = tails.iter().filter(|t| t.abs() > 1e-6).count();
    report(
        9,
        "photon-number distribution sums to one",
        worst <= 1e-6,
        &format!("20 states, n <= 40: max |1 - sum P_n| = {worst:.2e} ({failing} above 1e-6)"),
        start.elapsed(),
    );
}

fn heraldlab() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_heraldlab"));
    cmd.env_remove("HERALDLAB_FAULT").env_remove("HERALDLAB_THREADS");
    cmd
}

#[test]
fn criterion_10_cli_determinism_and_selftest() {
    let start = Instant::now();
    let sweep = [
        "sweep",
        "--variable",
        "z_abs",
        "--start",
        "0",
        "--stop",
        "3",
        "--count",
        "16",
        "--n",
        "1,2,3,4,5",
        "--metrics",
        "wigner_negativity,ng_measure,fidelity,d_x,d_p",
    ];
    let runs: Vec<Vec<u8>> = [None, Some("1"), Some("3"), None]
        .iter()
        .map(|threads| {
            let mut cmd = heraldlab();
            if let Some(t) = threads {
                cmd.env("HERALDLAB_THREADS", t);
            }
            let out = cmd.args(sweep).output().expect("run sweep");
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
            out.stdout
        })
        .collect();
    let identical = runs.windows(2).all(|w| w[0] == w[1]);
    let rows = runs[0].iter().filter(|&&b| b == b'\n').count() - 1;

    let t0 = Instant::now();
    let full = heraldlab().args(["selftest", "full"]).output().expect("run selftest");
    let full_time = t0.elapsed();
    let full_ok = full.status.success() && full_time <= Duration::from_secs(300);

    let faulty =
        heraldlab().env("HERALDLAB_FAULT", "hyp2f1").args(["selftest", "quick"]).output().expect("run selftest");
    let caught = !faulty.status.success();

    report(
        10,
        "CLI determinism and self-test",
        identical && full_ok && caught,
        &format!(
            "4 sweeps ({rows} rows, 1/3/default threads) identical: {identical}; selftest full exit {:?} in {:.1}s; injected 2F1 fault caught: {caught} (exit {:?})",
            full.status.code(),
            full_time.as_secs_f64(),
            faulty.status.code()
        ),
        start.elapsed(),
    );
}
