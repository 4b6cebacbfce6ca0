//! Derivative-free optimizers.

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`; returns `(x*, f(x*))`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    let mut best = (0.5 * (a + b), f(0.5 * (a + b)));
    for x in [x1, x2] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Coarse grid followed by golden refinement in the best bracket; robust to endpoint optima.
pub fn grid_golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, steps: usize, tol: f64) -> (f64, f64) {
    let h = (b - a) / steps as f64;
    let vals: Vec<f64> = (0..=steps).map(|k| f(a + h * k as f64)).collect();
    let k = (0..=steps).max_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap();
    let lo = a + h * k.saturating_sub(1) as f64;
    let hi = (a + h * (k + 1) as f64).min(b);
    let refined = golden_max(&f, lo, hi, tol);
    let grid_best = (a + h * k as f64, vals[k]);
    if refined.1 >= grid_best.1 {
        refined
    } else {
        grid_best
    }
}

#[derive(Clone, Debug)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop when the simplex diameter falls below this.
    pub x_tol: f64,
    /// Stop when the spread of simplex values falls below this.
    pub f_tol: f64,
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_evals: 20_000, x_tol: 1e-9, f_tol: 1e-13, initial_step: 0.25 }
    }
}

#[derive(Clone, Debug)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimize `f` with the adaptive Nelder–Mead method.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult {
    let n = x0.len();
    let nf = n as f64;
    let (alpha, beta, gamma, delta) =
        if n >= 2 { (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf) } else { (1.0, 2.0, 0.5, 0.5) };
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut x = x0.to_vec();
        let step = if x[i].abs() > 1e-8 { opts.initial_step * x[i].abs().max(0.1) } else { opts.initial_step };
        x[i] += step;
        simplex.push(x);
    }
    let mut fv: Vec<f64> = simplex.iter().map(|x| eval(x)).collect();
    let mut converged = false;
    while evals.get() < opts.max_evals {
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&i, &j| fv[i].total_cmp(&fv[j]));
        simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
        fv = idx.iter().map(|&i| fv[i]).collect();
        let diam = simplex[1..]
            .iter()
            .map(|x| x.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diam <= opts.x_tol || (fv[n] - fv[0]).abs() <= opts.f_tol * (1.0 + fv[0].abs()) && diam <= opts.x_tol.sqrt()
        {
            converged = true;
            break;
        }
        let mut cent = vec![0.0; n];
        for x in &simplex[..n] {
            for (c, xi) in cent.iter_mut().zip(x) {
                *c += xi / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> { cent.iter().zip(&simplex[n]).map(|(c, w)| c + t * (c - w)).collect() };
        let xr = along(alpha);
        let fr = eval(&xr);
        if fr < fv[0] {
            let xe = along(alpha * beta);
            let fe = eval(&xe);
            if fe < fr {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
            continue;
        }
        if fr < fv[n - 1] {
            simplex[n] = xr;
            fv[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < fv[n] {
            let xc = along(alpha * gamma);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(-gamma);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < fv[n].min(fr) {
            simplex[n] = xc;
            fv[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            for (xi, bi) in simplex[i].iter_mut().zip(&best) {
                *xi = bi + delta * (*xi - bi);
            }
            fv[i] = eval(&simplex[i]);
        }
    }
    let k = (0..=n).min_by(|&i, &j| fv[i].total_cmp(&fv[j])).unwrap();
    NelderMeadResult { x: simplex[k].clone(), f: fv[k], evals: evals.get(), converged }
}

/// Repeated Nelder–Mead from the current best point until no further improvement.
pub fn nelder_mead_restarted(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    opts: &NelderMeadOptions,
    rounds: usize,
) -> NelderMeadResult {
    let mut res = nelder_mead(&f, x0, opts);
    let mut total = res.evals;
    for _ in 1..rounds {
        let mut o = opts.clone();
        o.initial_step = opts.initial_step * 0.2;
        let next = nelder_mead(&f, &res.x, &o);
        total += next.evals;
        let improved = next.f < res.f - 1e-14 * (1.0 + res.f.abs());
        if next.f <= res.f {
            res = NelderMeadResult { evals: total, ..next };
        }
        if !improved {
            break;
        }
    }
    res.evals = total;
    res
}
