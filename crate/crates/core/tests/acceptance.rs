//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use qadd_core::analysis::capacity::{
    p1_platypus_two_state, q1, q1_platypus_diagonal_2d, q1_platypus_restricted, Argmax, Strategy,
};
use qadd_core::analysis::certificate::degradability_certificate;
use qadd_core::analysis::fixed_point::{recovered_ad_channel, unique_fixed_point_check};
use qadd_core::analysis::ratio::MiProbe;
use qadd_core::analysis::simulation::{matrix_unit_residual, smith_yard_identity};
use qadd_core::analysis::singularity::{
    default_eps_grid, epsilon_scaling_mi, log_grid, log_singularity_rate, platypus_amplification,
    scaling_expansion_check, singularity_case1, singularity_case2, singularity_case3,
};
use qadd_core::channels::{compose, compose_all, direct_sum, involution, link_product_compose, petz_recovery};
use qadd_core::info::{binary_entropy, coherent_information, telescoping_check, DensityMatrix, Ensemble};
use qadd_core::numkernel::{kron, CMatrix};
use qadd_core::random::{random_channel, random_entangled_state, random_state, random_state_rank, Rng};
use qadd_core::zoo::{
    amplitude_damping, dephasing, dephasing_q1, flagged_ad, flagged_ad_region, gao_channel, gao_factorization,
    platypus, platypus_antideg_certificate,
};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn representation_calculus() -> Outcome {
    let start = Instant::now();
    let mut rng = Rng::new(1);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (da, db, dc) = (1 + rng.below(4), 1 + rng.below(4), 1 + rng.below(4));
        let (k1, k2) = (1 + rng.below(4), 1 + rng.below(4));
        let n1 = random_channel(&mut rng, da, db, k1);
        let n2 = random_channel(&mut rng, db, dc, k2);
        let n21 = compose(&n2, &n1).map_err(|e| e.to_string())?;
        let theta = involution(n1.choi(), da, db).map_err(|e| e.to_string())?;
        let link = link_product_compose(n2.choi(), n1.choi(), (da, db, dc)).map_err(|e| e.to_string())?;
        worst = worst
            .max(theta.dist(n1.transfer()))
            .max(link.dist(n21.choi()))
            .max((n2.transfer() * n1.transfer()).dist(n21.transfer()));
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst <= 1e-10 && secs < 10.0, format!("max residual {worst:.2e}, {secs:.2} s"))
}

fn dephasing_regression() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 0..=10 {
        let a = k as f64 / 10.0;
        let rep = q1(&dephasing(a).map_err(|e| e.to_string())?, &Strategy::Auto).map_err(|e| e.to_string())?;
        worst = worst.max((rep.value - dephasing_q1(a)).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst <= 1e-4 && secs < 30.0, format!("max |Q1 - (1 - h((1+a)/2))| = {worst:.2e}, {secs:.2} s"))
}

fn gao_simulation() -> Outcome {
    let mut worst_sim = 0.0f64;
    let mut worst_gap = f64::INFINITY;
    for k in 0..=10 {
        let a = k as f64 / 10.0;
        let phi = gao_channel(a).map_err(|e| e.to_string())?;
        let (e, d) = gao_factorization(a).map_err(|e| e.to_string())?;
        let da = dephasing(a).map_err(|e| e.to_string())?;
        let ds = direct_sum(&[&da, &da]).map_err(|e| e.to_string())?;
        let sim = compose_all(&[&d, &ds, &e]).map_err(|e| e.to_string())?;
        worst_sim = worst_sim.max(matrix_unit_residual(&sim, &phi).map_err(|e| e.to_string())?);
        let rho = DensityMatrix::diagonal(&[0.5, 0.0, 0.5, 0.0]).map_err(|e| e.to_string())?;
        let ic = coherent_information(&rho, &phi).map_err(|e| e.to_string())?;
        worst_gap = worst_gap.min(ic - (1.0 - binary_entropy((1.0 + a) / 2.0)));
    }
    check(
        worst_sim <= 1e-12 && worst_gap >= -1e-6,
        format!("simulation residual {worst_sim:.2e}, min I_c - (1 - h) = {worst_gap:.2e}"),
    )
}

/// Distance of `(p, γ, η)` to the nearest active region boundary.
fn flagged_band(p: f64, g: f64, h: f64) -> f64 {
    let mut d = (g + h - 1.0).abs();
    if p != 0.5 {
        d = d.min((p - 0.5).abs());
        d = d.min(if p > 0.5 { (h - 0.5).abs() } else { (g - 0.5).abs() });
    }
    d
}

fn flagged_region() -> Outcome {
    let start = Instant::now();
    let (mut tested, mut agree) = (0, 0);
    let mut first_bad = None;
    let vals: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    for &p in &vals {
        for &g in &vals {
            for &h in &vals {
                if flagged_band(p, g, h) < 0.02 {
                    continue;
                }
                tested += 1;
                let analytic = flagged_ad_region(p, g, h).map_err(|e| e.to_string())?.verdict();
                let numeric = degradability_certificate(&flagged_ad(p, g, h).map_err(|e| e.to_string())?).verdict;
                if analytic == numeric {
                    agree += 1;
                } else if first_bad.is_none() {
                    first_bad = Some(format!(" first mismatch ({p}, {g}, {h}): {analytic} vs {numeric}"));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        agree == tested && secs < 300.0,
        format!("{agree}/{tested} interior points agree, {secs:.1} s{}", first_bad.unwrap_or_default()),
    )
}

fn platypus_antidegradability() -> Outcome {
    let mut msgs = Vec::new();
    let mut ok = true;
    for s in [0.0, 0.1, 0.2, 0.3, 0.4] {
        let lmin = |t: f64| -> Result<f64, String> {
            let cert = platypus_antideg_certificate(s, t).map_err(|e| e.to_string())?;
            Ok(cert.min_eigenvalue.unwrap_or(f64::NAN))
        };
        // Bisection for the sign change of the smallest J_D eigenvalue.
        let (mut lo, mut hi) = (0.3, 0.6);
        if !(lmin(lo)? < 0.0 && lmin(hi)? >= -1e-9) {
            ok = false;
            msgs.push(format!("s={s}: no sign change on [0.3, 0.6]"));
            continue;
        }
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if lmin(mid)? < -1e-12 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let cross = 0.5 * (lo + hi);
        ok &= (cross - 0.5).abs() <= 1e-3;
        msgs.push(format!("s={s}: t*={cross:.6}"));
    }
    let mut refuted = 0;
    let mut total = 0;
    for i in 1..20 {
        for j in 0..20 {
            let (t, s) = (i as f64 / 20.0, j as f64 / 20.0);
            if s + t > 1.0 + 1e-12 {
                continue;
            }
            total += 1;
            let cert = platypus_antideg_certificate(s, t).map_err(|e| e.to_string())?;
            if cert.degradable.is_refuted() {
                refuted += 1;
            }
        }
    }
    ok &= refuted == total;
    check(ok, format!("{}; zero-column witness refutes degradability at {refuted}/{total} points", msgs.join(", ")))
}

fn diagonal_restriction() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut count = 0;
    for i in 0..20 {
        for j in 0..20 {
            let (s, t) = (i as f64 / 19.0, j as f64 / 19.0);
            if s + t > 1.0 + 1e-12 {
                continue;
            }
            let (s, t) = (s.min(1.0 - t), t);
            let (_, r) = q1_platypus_restricted(s, t).map_err(|e| e.to_string())?;
            let (_, d) = q1_platypus_diagonal_2d(s, t, 60).map_err(|e| e.to_string())?;
            worst = worst.max((r - d).abs());
            count += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst <= 1e-6, format!("{count} simplex points of the 20x20 grid, max gap {worst:.2e}, {secs:.1} s"))
}

fn random_ensemble(rng: &mut Rng, d: usize) -> Result<Ensemble, String> {
    let k = 2 + rng.below(2);
    let mut w: Vec<f64> = (0..k).map(|_| rng.uniform() + 0.05).collect();
    let tot: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= tot);
    // Total rank capped at 9 to respect the ancilla limit.
    let budget = 9 / k;
    let items = w
        .into_iter()
        .map(|p| {
            let r = 1 + rng.below(budget.min(d));
            (p, random_state_rank(rng, d, r))
        })
        .collect();
    Ensemble::new(items).map_err(|e| e.to_string())
}

fn smith_yard() -> Outcome {
    let mut rng = Rng::new(7);
    let mut worst = 0.0f64;
    for k in 0..50 {
        let n = if k % 2 == 0 {
            let s = 0.9 * rng.uniform();
            let t = (1.0 - s) * rng.uniform();
            platypus(s, t)
        } else {
            amplitude_damping(rng.uniform())
        }
        .map_err(|e| e.to_string())?;
        let ens = random_ensemble(&mut rng, n.d_in())?;
        let rep = smith_yard_identity(&ens, &n).map_err(|e| e.to_string())?;
        worst = worst.max(rep.identity_residual.abs());
    }
    // Scan for a point with vanishing Q1 and positive two-state private information.
    let mut best: Option<(f64, f64, f64, Ensemble)> = None;
    for &t in &[0.42, 0.44, 0.46, 0.48] {
        for &s in &[0.1, 0.2, 0.3, 0.4] {
            let (_, q) = q1_platypus_restricted(s, t).map_err(|e| e.to_string())?;
            if q > 1e-9 {
                continue;
            }
            let rep = p1_platypus_two_state(s, t).map_err(|e| e.to_string())?;
            let Argmax::Ensemble(ens) = rep.argmax else { continue };
            if best.as_ref().is_none_or(|b| rep.value > b.2) {
                best = Some((s, t, rep.value, ens));
            }
        }
    }
    let Some((s, t, p1, ens)) = best else {
        return Err(format!("identity residual {worst:.2e}; no scanned point with Q1 = 0"));
    };
    let rep = smith_yard_identity(&ens, &platypus(s, t).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    check(
        worst <= 1e-8 && rep.d_c == 3 && rep.coherent_information > 1e-3,
        format!(
            "identity residual {worst:.2e} over 50 ensembles; at (s,t)=({s},{t}) Q1=0, P1>={p1:.4e}, \
             I_c(N x E_(3,1/2)) = {:.4e}",
            rep.coherent_information
        ),
    )
}

fn log_singularity() -> Outcome {
    let g = default_eps_grid();
    let (a, b) = (0.5, 0.2);
    let r1 = log_singularity_rate(|e| Ok(singularity_case1(a, b, e)), &g).map_err(|e| e.to_string())?.rate;
    let r2 = log_singularity_rate(|e| Ok(singularity_case2(a, b, e)), &g).map_err(|e| e.to_string())?.rate;
    let r3 = log_singularity_rate(|e| Ok(singularity_case3(e)), &g).map_err(|e| e.to_string())?.rate;
    let t2 = b * (a - b) / a;
    check(
        ((r1 - b) / b).abs() <= 0.05 && ((r2 - t2) / t2).abs() <= 0.05 && r3.abs() <= 0.01,
        format!("rates {r1:.5} (target {b}), {r2:.5} (target {t2}), {r3:.2e} (target 0)"),
    )
}

fn amplification() -> Outcome {
    let start = Instant::now();
    let eps = default_eps_grid();
    let mut best = None;
    for &t in &[0.05, 0.1, 0.2, 0.3] {
        for &s in &[0.1, 0.2, 0.3, 0.4, 0.6] {
            let (_, q) = q1_platypus_restricted(s, t).map_err(|e| e.to_string())?;
            if q <= 0.01 {
                continue;
            }
            let rep = platypus_amplification(s, t, 0.5, &eps).map_err(|e| e.to_string())?;
            if rep.lambda_in_region
                && best
                    .as_ref()
                    .is_none_or(|b: &qadd_core::analysis::singularity::AmplificationReport| rep.max_gain > b.max_gain)
            {
                best = Some(rep);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let Some(r) = best else { return Err("no scanned point with q1 > 0.01 and 0.5 < lambda_bound".into()) };
    let eb = ((r.r_b.rate - r.r_b_analytic) / r.r_b_analytic).abs();
    let ee = ((r.r_e.rate - r.r_e_analytic) / r.r_e_analytic).abs();
    check(
        r.max_gain > 1e-4 && eb <= 0.05 && ee <= 0.05 && secs < 120.0,
        format!(
            "(s,t,lambda)=({},{},{}) case {:?}, q1={:.4}, lambda_bound={:.4}, max gain {:.3e}, \
             r_B err {:.2}%, r_E err {:.2}%, {secs:.1} s",
            r.s,
            r.t,
            r.lambda,
            r.case,
            r.q1,
            r.lambda_bound,
            r.max_gain,
            100.0 * eb,
            100.0 * ee
        ),
    )
}

fn scaling_law() -> Outcome {
    let mut ok = true;
    let mut msgs = Vec::new();
    for g in [0.2, 0.3, 0.5] {
        let fit = epsilon_scaling_mi(g, &default_eps_grid()).map_err(|e| e.to_string())?;
        let chk = scaling_expansion_check(g, &log_grid(1e-4, 1e-2, 8)).map_err(|e| e.to_string())?;
        ok &= fit.relative_error <= 0.1 && chk.order_l2 >= 2.7 && chk.order_l3 >= 2.7;
        msgs.push(format!(
            "gamma={g}: C'={:.4} vs {:.4} ({:.2}%), orders {:.2}/{:.2}",
            fit.coefficient,
            fit.predicted,
            100.0 * fit.relative_error,
            chk.order_l2,
            chk.order_l3
        ));
    }
    check(ok, msgs.join("; "))
}

fn telescoping() -> Outcome {
    let mut rng = Rng::new(11);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let n = 2 + k % 2;
        let dims = vec![2; n];
        let r = 1 + rng.below(4);
        let rho = random_state_rank(&mut rng, 1 << (2 * n), r);
        worst = worst.max(telescoping_check(&rho, &dims, &dims).map_err(|e| e.to_string())?);
    }
    check(worst <= 1e-9, format!("max residual {worst:.2e} over 100 states"))
}

fn lift(dv: usize, kraus: &[CMatrix], x: &CMatrix) -> CMatrix {
    let id = CMatrix::identity(dv);
    let mut out = CMatrix::zeros(x.rows(), x.cols());
    for k in kraus {
        out += &kron(&id, k).sandwich(x);
    }
    out
}

fn petz_equality() -> Outcome {
    let mut rng = Rng::new(13);
    let dv = 2;
    let mut worst_rec = 0.0f64;
    for _ in 0..20 {
        let gamma = 0.05 + 0.4 * rng.uniform();
        let a = amplitude_damping(gamma).map_err(|e| e.to_string())?;
        let degrader = amplitude_damping((1.0 - 2.0 * gamma) / (1.0 - gamma)).map_err(|e| e.to_string())?;
        let (rv, ra) = (random_state(&mut rng, dv), random_state(&mut rng, 2));
        let rho_b = a.apply_state(&ra).map_err(|e| e.to_string())?;
        let rho_vb = kron(rv.matrix(), rho_b.matrix());
        let rho_ve = lift(dv, degrader.kraus(), &rho_vb);
        let rec = petz_recovery(&degrader, &rho_b).map_err(|e| e.to_string())?;
        worst_rec = worst_rec.max(lift(dv, rec.kraus(), &rho_ve).dist(&rho_vb));
    }
    let mut min_gap = f64::INFINITY;
    for _ in 0..100 {
        let gamma = 0.05 + 0.4 * rng.uniform();
        let probe = MiProbe::new(&amplitude_damping(gamma).map_err(|e| e.to_string())?, dv);
        let rho = random_entangled_state(&mut rng, dv, 2);
        let (ivb, ive) = probe.eval(rho.matrix()).map_err(|e| e.to_string())?;
        min_gap = min_gap.min(ivb - ive);
    }
    let rho_b = random_state(&mut rng, 2);
    let fp = unique_fixed_point_check(&recovered_ad_channel(0.3, &rho_b).map_err(|e| e.to_string())?, 2)
        .map_err(|e| e.to_string())?;
    check(
        worst_rec <= 1e-8 && min_gap > 0.0 && fp.unique,
        format!(
            "product-state recovery residual {worst_rec:.2e}; min I(V;B)-I(V;E) = {min_gap:.3e} over 100 states; \
             recovered channel span {} at length {:?}",
            fp.span_dim, fp.length
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("representation calculus", representation_calculus),
        ("dephasing regression", dephasing_regression),
        ("gao simulation", gao_simulation),
        ("flagged-mixture region", flagged_region),
        ("platypus anti-degradability", platypus_antidegradability),
        ("diagonal restriction", diagonal_restriction),
        ("smith-yard identity", smith_yard),
        ("log-singularity rates", log_singularity),
        ("amplification", amplification),
        ("scaling law", scaling_law),
        ("telescoping identity", telescoping),
        ("petz equality case", petz_equality),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
