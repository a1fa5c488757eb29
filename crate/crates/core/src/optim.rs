//! Nelder-Mead simplex minimization in the plane.

/// Stopping rules and step sizes for [`nelder_mead`].
#[derive(Debug, Clone, Copy)]
pub struct SimplexConfig {
    /// Edge length of the initial simplex.
    pub step: f64,
    /// Stop once every vertex lies within `xtol` of the best one...
    pub xtol: f64,
    /// ...and the objective spread is below `ftol`.
    pub ftol: f64,
    pub max_evals: usize,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        SimplexConfig { step: 0.25, xtol: 1e-10, ftol: 1e-15, max_evals: 4000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: [f64; 2],
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

type Pt = [f64; 2];

fn lerp(a: Pt, b: Pt, t: f64) -> Pt {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

fn dist(a: Pt, b: Pt) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Minimizes `f` from `x0`. Infeasible points should return `+inf`; the start
/// itself must be finite. After convergence the search restarts once from the
/// best vertex to guard against a collapsed simplex.
pub fn nelder_mead<F: FnMut(Pt) -> f64>(mut f: F, x0: Pt, cfg: &SimplexConfig) -> Minimum {
    let mut evals = 0;
    let mut start = x0;
    let mut step = cfg.step;
    let mut last: Option<Minimum> = None;
    for _ in 0..2 {
        let m = run(&mut f, start, step, cfg, &mut evals);
        let better = last.is_none_or(|l| m.f <= l.f);
        if better {
            last = Some(m);
        }
        start = last.unwrap().x;
        step = (cfg.step * 0.1).max(cfg.xtol * 100.0);
        if !m.converged {
            break;
        }
    }
    let mut out = last.unwrap();
    out.evals = evals;
    out
}

fn run<F: FnMut(Pt) -> f64>(f: &mut F, x0: Pt, step: f64, cfg: &SimplexConfig, evals: &mut usize) -> Minimum {
    let mut eval = |p: Pt, evals: &mut usize| {
        *evals += 1;
        let v = f(p);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Pt, f64)> =
        [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]].into_iter().map(|p| (p, eval(p, evals))).collect();
    loop {
        simplex.sort_by(|p, q| p.1.total_cmp(&q.1).then(p.0[0].total_cmp(&q.0[0])).then(p.0[1].total_cmp(&q.0[1])));
        let (best, worst) = (simplex[0], simplex[2]);
        let size = dist(simplex[1].0, best.0).max(dist(worst.0, best.0));
        let spread = worst.1 - best.1;
        let converged = size <= cfg.xtol && spread <= cfg.ftol.max(f64::EPSILON * best.1.abs());
        if converged || *evals >= cfg.max_evals {
            return Minimum { x: best.0, f: best.1, evals: *evals, converged };
        }
        let centroid = lerp(simplex[0].0, simplex[1].0, 0.5);
        let refl = lerp(centroid, worst.0, -1.0);
        let fr = eval(refl, evals);
        if fr < best.1 {
            let exp = lerp(centroid, worst.0, -2.0);
            let fe = eval(exp, evals);
            simplex[2] = if fe < fr { (exp, fe) } else { (refl, fr) };
            continue;
        }
        if fr < simplex[1].1 {
            simplex[2] = (refl, fr);
            continue;
        }
        let (cand, fc) = if fr < worst.1 {
            let p = lerp(centroid, refl, 0.5);
            (p, eval(p, evals))
        } else {
            let p = lerp(centroid, worst.0, 0.5);
            (p, eval(p, evals))
        };
        if fc < worst.1.min(fr) {
            simplex[2] = (cand, fc);
            continue;
        }
        for vertex in simplex.iter_mut().skip(1) {
            let p = lerp(best.0, vertex.0, 0.5);
            *vertex = (p, eval(p, evals));
        }
    }
}
