use std::io::Write;
use std::path::Path;

use heraldlab::heralding::{distribution, optimize_probability, probability_abc, ring_locus, OptimizeConfig};
use heraldlab::metrics::{core_negativity, fidelity_gaussian, moments, ng_measure, wigner_grid};
use heraldlab::params::{gaussian_ops_from, map_to_output, validate_tmeg, OutputParams};
use heraldlab::quad::neumaier_sum;
use heraldlab::selftest::{self, Level};
use heraldlab::state::output_fock_vector_auto;
use heraldlab::{superposition_coeffs, Error, FockVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{Map, Number, Value};

use crate::cli::{
    AnalyzeArgs, DistributionArgs, LevelArg, Metric, OptimizeArgs, SelftestArgs, SweepArgs, SweepVariable, WignerArgs,
};
use crate::format::{complex, num};

pub const MAX_GRID_AXIS: usize = 2048;

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Infeasible(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Infeasible(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }

    pub fn to_json(&self) -> String {
        let (kind, message) = match self {
            Failure::Validation(m) => ("validation", m),
            Failure::Infeasible(m) => ("infeasible", m),
            Failure::Numerical(m) => ("numerical", m),
            Failure::Io(m) => ("io", m),
        };
        let mut obj = Map::new();
        obj.insert("error".into(), Value::String(message.clone()));
        obj.insert("kind".into(), Value::String(kind.into()));
        obj.insert("exit_code".into(), Value::from(self.exit_code()));
        Value::Object(obj).to_string()
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Tmeg(_) | Error::OutputParams(_) | Error::Size { .. } | Error::DimensionMismatch(..) => {
                Failure::Validation(msg)
            }
            Error::Domain(_) | Error::OutOfDomain(_) => Failure::Infeasible(msg),
            _ => Failure::Numerical(msg),
        }
    }
}

type Outcome = Result<(), Failure>;

fn json_num(v: f64) -> Value {
    if v.is_finite() {
        Value::Number(num(v).parse::<Number>().expect("formatted float is valid JSON"))
    } else {
        Value::Null
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn check_tol(tol: f64) -> Outcome {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("tolerance {tol} must be positive")))
    }
}

pub fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Outcome {
    check_tol(args.tol)?;
    let p = validate_tmeg(args.abc.a, args.abc.b, args.abc.c)?;
    let o = map_to_output(&p)?;
    let ops = gaussian_ops_from(&o)?;
    let n = args.n;
    let z_abs = o.z().norm();
    let core = superposition_coeffs(n, z_abs)?;
    let prob = probability_abc(&p, n)?;
    let m = moments(n, z_abs)?;

    let mut amps = Map::new();
    for (k, amp) in core.iter() {
        amps.insert(k.to_string(), json_num(amp));
    }
    let mut obj = Map::new();
    obj.insert("a".into(), Value::String(complex(p.a())));
    obj.insert("b".into(), Value::String(complex(p.b())));
    obj.insert("c".into(), Value::String(complex(p.c())));
    obj.insert("n".into(), Value::from(n));
    obj.insert("z".into(), Value::String(complex(o.z())));
    obj.insert("z_abs".into(), json_num(z_abs));
    obj.insert("R".into(), Value::String(complex(o.r())));
    obj.insert("r_R".into(), json_num(ops.r));
    obj.insert("phi_R".into(), json_num(ops.phi));
    obj.insert("rotation".into(), json_num(ops.rot));
    obj.insert("A_m".into(), Value::Object(amps));
    obj.insert("P_n".into(), json_num(prob.p));
    obj.insert("d_x".into(), json_num(m.d_x));
    obj.insert("d_p".into(), json_num(m.d_p));
    obj.insert("fidelity".into(), json_num(fidelity_gaussian(n, z_abs)?));
    obj.insert("ng_measure".into(), json_num(ng_measure(n, z_abs)?));
    obj.insert("wigner_negativity".into(), json_num(core_negativity(n, z_abs, args.tol)?));
    let text = serde_json::to_string_pretty(&Value::Object(obj)).expect("JSON serialization") + "\n";
    emit(&text, None, out)
}

fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    let step = (stop - start) / (count - 1) as f64;
    (0..count).map(|i| if i + 1 == count { stop } else { start + step * i as f64 }).collect()
}

fn metric_value(metric: Metric, n: usize, z_abs: f64, tol: f64) -> heraldlab::Result<f64> {
    Ok(match metric {
        Metric::WignerNegativity => core_negativity(n, z_abs, tol)?,
        Metric::NgMeasure => ng_measure(n, z_abs)?,
        Metric::Fidelity => fidelity_gaussian(n, z_abs)?,
        Metric::DX => moments(n, z_abs)?.d_x,
        Metric::DP => moments(n, z_abs)?.d_p,
        Metric::MeanNumber => superposition_coeffs(n, z_abs)?.mean_number(),
    })
}

struct SweepPoint {
    label: String,
    n: usize,
    z_abs: f64,
}

fn sweep_points(args: &SweepArgs) -> Result<Vec<SweepPoint>, Failure> {
    let invalid = |m: &str| Err(Failure::Validation(m.into()));
    if args.count < 2 {
        return invalid("count must be at least 2");
    }
    if !(args.start.is_finite() && args.stop.is_finite() && args.start < args.stop) {
        return invalid("start must be finite and below stop");
    }
    if args.metrics.is_empty() {
        return invalid("no metrics requested");
    }
    let values = linspace(args.start, args.stop, args.count);
    match args.variable {
        SweepVariable::ZAbs => {
            if args.n.is_empty() {
                return invalid("z_abs sweeps need --n");
            }
            if args.z_abs.is_some() {
                return invalid("--z-abs is the swept variable here");
            }
            if args.start < 0.0 {
                return invalid("|z| cannot be negative");
            }
            Ok(values
                .iter()
                .flat_map(|&z| args.n.iter().map(move |&n| SweepPoint { label: num(z), n, z_abs: z }))
                .collect())
        }
        SweepVariable::N => {
            if !args.n.is_empty() {
                return invalid("n sweeps take their n values from --start/--stop/--count");
            }
            let z_abs = args.z_abs.unwrap_or(0.0);
            if !(z_abs >= 0.0 && z_abs.is_finite()) {
                return invalid("--z-abs must be a finite nonnegative number");
            }
            values
                .iter()
                .map(|&v| {
                    let r = v.round();
                    if (v - r).abs() > 1e-9 || r < 0.0 {
                        return Err(Failure::Validation(format!("n grid point {v} is not a nonnegative integer")));
                    }
                    let n = r as usize;
                    Ok(SweepPoint { label: n.to_string(), n, z_abs })
                })
                .collect()
        }
    }
}

pub fn sweep(args: &SweepArgs, pool: &rayon::ThreadPool, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    check_tol(args.tol)?;
    let points = sweep_points(args)?;
    let variable = match args.variable {
        SweepVariable::ZAbs => "z_abs",
        SweepVariable::N => "n",
    };
    let jobs: Vec<(&SweepPoint, Metric)> =
        points.iter().flat_map(|p| args.metrics.iter().map(move |&m| (p, m))).collect();
    // Collected in job order, so the output does not depend on scheduling.
    let results: Vec<heraldlab::Result<f64>> =
        pool.install(|| jobs.par_iter().map(|(p, m)| metric_value(*m, p.n, p.z_abs, args.tol)).collect());

    let mut text = String::from("variable,n,metric,value\n");
    for ((p, m), r) in jobs.iter().zip(results) {
        let value = match r {
            Ok(v) => num(v),
            Err(e) => {
                let _ = writeln!(err, "warning: {variable}={} n={} {}: {e}", p.label, p.n, m.name());
                "NaN".into()
            }
        };
        text.push_str(&format!("{},{},{},{}\n", p.label, p.n, m.name(), value));
    }
    emit(&text, args.out.as_deref(), out)
}

pub fn optimize(args: &OptimizeArgs, pool: &rayon::ThreadPool, out: &mut dyn Write) -> Outcome {
    if args.starts == 0 {
        return Err(Failure::Validation("--starts must be at least 1".into()));
    }
    let config = OptimizeConfig { starts: args.starts, ..OptimizeConfig::default() };
    let best = pool.install(|| optimize_probability(args.z, args.n, &config))?;
    let mut obj = Map::new();
    obj.insert("z".into(), Value::String(complex(args.z)));
    obj.insert("n".into(), Value::from(args.n));
    obj.insert("a_best".into(), Value::String(complex(best.a_best)));
    obj.insert("p_best".into(), json_num(best.p_best));
    obj.insert("starts_used".into(), Value::from(best.starts_used));
    obj.insert("evaluations".into(), Value::from(best.evaluations));
    if args.z == Complex64::new(0.0, 0.0) {
        let ring = ring_locus(args.n)?;
        obj.insert("ring_center".into(), json_num(ring.center_re));
        obj.insert("ring_radius".into(), json_num(ring.radius));
        obj.insert("ring_distance".into(), json_num(ring.distance(best.a_best)));
    }
    let text = serde_json::to_string_pretty(&Value::Object(obj)).expect("JSON serialization") + "\n";
    emit(&text, None, out)
}

fn wigner_state(args: &WignerArgs) -> Result<FockVector, Failure> {
    if let Some(k) = args.fock {
        if k > heraldlab::specfun::MAX_DEGREE {
            return Err(Error::Size { n: k, max: heraldlab::specfun::MAX_DEGREE }.into());
        }
        return Ok(FockVector::basis(k, k + 1));
    }
    let n = args.n.ok_or_else(|| Failure::Validation("give --fock, --a/--b/--c/--n or --z/--R/--n".into()))?;
    let zr = match (args.a, args.b, args.c, args.z, args.big_r) {
        (Some(a), Some(b), Some(c), None, None) => map_to_output(&validate_tmeg(a, b, c)?)?,
        (None, None, None, Some(z), Some(r)) => OutputParams::state(z, r)?,
        _ => return Err(Failure::Validation("give --fock, --a/--b/--c/--n or --z/--R/--n".into())),
    };
    Ok(output_fock_vector_auto(&zr, n)?)
}

pub fn wigner(args: &WignerArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    for (name, count) in [("--nx", args.nx), ("--np", args.np)] {
        if !(2..=MAX_GRID_AXIS).contains(&count) {
            return Err(Failure::Validation(format!("{name} must lie in 2..={MAX_GRID_AXIS}")));
        }
    }
    let bounds = [args.x_min, args.x_max, args.p_min, args.p_max];
    if bounds.iter().any(|b| !b.is_finite()) || args.x_min >= args.x_max || args.p_min >= args.p_max {
        return Err(Failure::Validation("grid bounds must be finite with min < max".into()));
    }
    let v = wigner_state(args)?;
    let g = wigner_grid(&v, (args.x_min, args.x_max), (args.p_min, args.p_max), args.nx, args.np)?;
    let mass = g.riemann_sum();
    if (mass - 1.0).abs() > 1e-3 {
        let _ = writeln!(err, "warning: grid captures Wigner mass {mass}; widen the bounds");
    }
    let mut text = String::with_capacity(48 * args.nx * args.np + 8);
    text.push_str("x,p,w\n");
    for j in 0..g.np {
        let p = num(g.p(j));
        for i in 0..g.nx {
            text.push_str(&format!("{},{p},{}\n", num(g.x(i)), num(g.value(i, j))));
        }
    }
    emit(&text, args.out.as_deref(), out)
}

pub fn distribution_cmd(args: &DistributionArgs, out: &mut dyn Write) -> Outcome {
    let p = validate_tmeg(args.abc.a, args.abc.b, args.abc.c)?;
    let d = distribution(&p, args.n_max)?;
    let mut text = String::from("n,P_n,tail\n");
    for (k, r) in d.probabilities.iter().enumerate() {
        let tail = 1.0 - neumaier_sum(d.probabilities[..=k].iter().map(|q| q.p));
        text.push_str(&format!("{},{},{}\n", r.n, num(r.p), num(tail)));
    }
    emit(&text, args.out.as_deref(), out)
}

pub fn selftest_cmd(args: &SelftestArgs, pool: &rayon::ThreadPool, out: &mut dyn Write) -> Outcome {
    let level = match args.level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let outcomes = pool.install(|| selftest::run(level));
    emit(&selftest::render(&outcomes), None, out)?;
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("self-test failed: {}", failed.join(", "))))
    }
}
