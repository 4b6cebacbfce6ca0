use qadd_core::analysis::certificate::{degradability_certificate, find_map, Verdict};
use qadd_core::analysis::simulation::matrix_unit_residual;
use qadd_core::channels::{compose, compose_all, direct_sum, flagged, SuperOperator};
use qadd_core::info::binary_entropy;
use qadd_core::numkernel::{psd_check, r, CMatrix};
use qadd_core::zoo::*;
use qadd_core::Channel;

fn units_residual(a: &Channel, b: &Channel) -> f64 {
    matrix_unit_residual(a, b).unwrap()
}

#[test]
fn ad_complement_is_ad_of_one_minus_gamma() {
    for g in [0.0, 0.1, 0.37, 0.5, 0.9, 1.0] {
        let a = amplitude_damping(g).unwrap();
        let b = amplitude_damping(1.0 - g).unwrap();
        assert!(units_residual(&a.complement(), &b) < 1e-10, "gamma {g}");
    }
}

#[test]
fn ad_compose_inverse_examples() {
    let id = ad_compose_inverse(0.4, 0.4).unwrap();
    assert!(id.dist(&SuperOperator::identity(2)) < 1e-12);
    let (ok, _) = psd_check(&ad_compose_inverse(0.6, 0.3).unwrap().choi(), 1e-12).unwrap();
    assert!(ok);
    let (ok, lmin) = psd_check(&ad_compose_inverse(0.2, 0.5).unwrap().choi(), 1e-12).unwrap();
    assert!(!ok && lmin < 0.0);
    assert!(ad_inverse(1.0).is_err());
}

#[test]
fn ad_compose_inverse_composes() {
    let (g1, g2) = (0.25, 0.7);
    let d = ad_compose_inverse(g2, g1).unwrap();
    let lhs = d.compose(&amplitude_damping(g1).unwrap().superop()).unwrap();
    assert!(lhs.dist(&amplitude_damping(g2).unwrap().superop()) < 1e-12);
}

#[test]
fn ad_certificates() {
    let c = degradability_certificate(&amplitude_damping(0.3).unwrap());
    assert_eq!(c.verdict, Verdict::Degradable);
    assert!(c.residual() <= 1e-8);
    let c = degradability_certificate(&amplitude_damping(0.7).unwrap());
    assert_eq!(c.verdict, Verdict::AntiDegradable);
    assert!(c.residual() <= 1e-8);
}

#[test]
fn dephasing_closed_form() {
    assert!((dephasing_q1(1.0) - 1.0).abs() < 1e-15);
    assert!(dephasing_q1(0.0).abs() < 1e-15);
    assert!((dephasing_q1(0.5) - 0.18872).abs() < 1e-5);
    assert!((dephasing_q1(0.5) - (1.0 - binary_entropy(0.75))).abs() < 1e-15);
    assert!(dephasing(1.5).is_err());
}

#[test]
fn gao_factorization_exact() {
    for a in [0.0, 0.3, 0.8, 1.0, -0.5] {
        let phi = gao_channel(a).unwrap();
        let (e, d) = gao_factorization(a).unwrap();
        let da = dephasing(a).unwrap();
        let sum = direct_sum(&[&da, &da]).unwrap();
        let sim = compose_all(&[&d, &sum, &e]).unwrap();
        assert!(units_residual(&sim, &phi) < 1e-12, "alpha {a}");
    }
}

#[test]
fn mad_examples() {
    let id = mad_channel(0.0, 0.0).unwrap();
    assert!(units_residual(&id, &Channel::identity(3)) < 1e-14);
    let (g0, g1) = (0.3, 0.25);
    let m = mad_channel(g0, g1).unwrap();
    let out = m.apply(&CMatrix::unit(3, 2, 2));
    assert!(out.dist(&CMatrix::diag_real(&[g0, g1, 1.0 - g0 - g1])) < 1e-14);
    assert!(mad_channel(0.7, 0.5).is_err());
}

#[test]
fn mad_simulator_reproduces_channel() {
    let (g0, g1) = (0.35, 0.3);
    let sim = mad_degradable_simulator(g0, g1).unwrap();
    assert!((sim.gamma0_prime + sim.gamma1_prime - 0.5).abs() < 1e-15);
    let inner = mad_channel(sim.gamma0_prime, sim.gamma1_prime).unwrap();
    let outer = mad_channel(sim.post_gamma0, sim.post_gamma1).unwrap();
    let lhs = compose(&outer, &inner).unwrap();
    assert!(units_residual(&lhs, &mad_channel(g0, g1).unwrap()) < 1e-12);
    assert!(mad_degradable_simulator(0.2, 0.1).is_err());
}

#[test]
fn mad_upper_block_transmitted() {
    let m = mad_channel(0.2, 0.3).unwrap();
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let u = CMatrix::unit(3, i, j);
        assert!(m.apply(&u).dist(&u) < 1e-14);
    }
}

#[test]
fn erasure_structure() {
    let e = erasure(3, 0.3).unwrap();
    let rho = CMatrix::from_real_rows(&[&[0.5, 0.1, 0.0], &[0.1, 0.3, 0.05], &[0.0, 0.05, 0.2]]);
    let out = e.apply(&rho);
    for i in 0..3 {
        for j in 0..3 {
            assert!((out[(i, j)] - rho[(i, j)] * 0.7).norm() < 1e-15);
        }
    }
    assert!((out[(3, 3)].re - 0.3).abs() < 1e-15);
    assert!(units_residual(&e.complement(), &erasure(3, 0.7).unwrap()) < 1e-10);
    assert!((erasure_q1(2, 0.2) - 0.6).abs() < 1e-15);
    assert_eq!(erasure_q1(2, 0.7), 0.0);
}

#[test]
fn flagged_ad_equals_flagged_mixture() {
    let (p, g, e) = (0.3, 0.2, 0.6);
    let a = flagged_ad(p, g, e).unwrap();
    let b = flagged(&[1.0 - p, p], &[&amplitude_damping(g).unwrap(), &amplitude_damping(e).unwrap()]).unwrap();
    assert!(units_residual(&a, &b) < 1e-15);
}

#[test]
fn flagged_region_examples() {
    assert_eq!(flagged_ad_region(0.5, 0.3, 0.3).unwrap().verdict(), Verdict::Degradable);
    assert_eq!(flagged_ad_region(0.8, 0.7, 0.2).unwrap().verdict(), Verdict::Degradable);
    assert_eq!(flagged_ad_region(0.8, 0.6, 0.3).unwrap().verdict(), Verdict::Degradable);
    assert_eq!(flagged_ad_region(0.8, 0.7, 0.6).unwrap().verdict(), Verdict::AntiDegradable);
    assert_eq!(flagged_ad_region(0.3, 0.2, 0.9).unwrap().verdict(), Verdict::Neither);
}

#[test]
fn flagged_degrading_maps_work() {
    for (p, g, e) in [(0.5, 0.3, 0.3), (0.8, 0.7, 0.2), (0.2, 0.2, 0.7), (0.6, 0.1, 0.4), (0.5, 0.6, 0.4)] {
        if !flagged_ad_region(p, g, e).unwrap().degradable {
            continue;
        }
        let phi = flagged_ad(p, g, e).unwrap();
        let d = flagged_ad_degrading_map(p, g, e).unwrap();
        let lhs = compose(&d, &phi).unwrap();
        assert!(units_residual(&lhs, &phi.complement()) < 1e-9, "({p}, {g}, {e})");
    }
    assert!(flagged_ad_degrading_map(0.8, 0.7, 0.6).is_err());
}

#[test]
fn platypus_matrix_form() {
    let (s, t) = (0.2, 0.35);
    let n = platypus(s, t).unwrap();
    let u = 1.0 - s - t;
    assert!(n.apply(&CMatrix::unit(3, 0, 0)).dist(&CMatrix::diag_real(&[s, u, t])) < 1e-12);
    assert!(n.apply(&CMatrix::unit(3, 1, 1)).dist(&CMatrix::diag_real(&[0.0, 0.0, 1.0])) < 1e-12);
    assert!(n.apply(&CMatrix::unit(3, 2, 2)).dist(&CMatrix::diag_real(&[0.0, 0.0, 1.0])) < 1e-12);
    // |0⟩⟨1| ↦ √s |0⟩⟨2|, |0⟩⟨2| ↦ √(1−s−t) |1⟩⟨2|, |1⟩⟨2| ↦ 0.
    let mut e01 = CMatrix::zeros(3, 3);
    e01[(0, 2)] = r(s.sqrt());
    assert!(n.apply(&CMatrix::unit(3, 0, 1)).dist(&e01) < 1e-12);
    let mut e02 = CMatrix::zeros(3, 3);
    e02[(1, 2)] = r(u.sqrt());
    assert!(n.apply(&CMatrix::unit(3, 0, 2)).dist(&e02) < 1e-12);
    assert!(n.apply(&CMatrix::unit(3, 1, 2)).max_abs() < 1e-12);
}

#[test]
fn platypus_antidegradable_for_large_t() {
    for s in [0.0, 0.1, 0.3, 0.4] {
        let c = platypus_antideg_certificate(s, 0.6).unwrap();
        assert_eq!(c.verdict, Verdict::AntiDegradable, "s {s}");
        let j = c.choi.as_ref().unwrap();
        assert!((j[(8, 8)].re - 1.0 / 3.0).abs() < 1e-12);
        assert!(c.residual() < 1e-8);
    }
}

#[test]
fn platypus_neither_for_small_t() {
    for (s, t) in [(0.2, 0.3), (0.3, 0.4), (0.5, 0.4)] {
        let c = platypus_antideg_certificate(s, t).unwrap();
        assert_eq!(c.verdict, Verdict::Neither, "({s}, {t})");
        let j = c.choi.as_ref().unwrap();
        assert!((j[(8, 8)].re - (2.0 * t - 1.0) / t).abs() < 1e-12);
        assert!(c.degradable.is_refuted());
    }
    let c = platypus_antideg_certificate(0.3, 0.0).unwrap();
    assert_eq!(c.verdict, Verdict::Indeterminate);
}

#[test]
fn platypus_generic_certificate_agrees() {
    let c = degradability_certificate(&platypus(0.2, 0.6).unwrap());
    assert_eq!(c.verdict, Verdict::AntiDegradable);
    let c = degradability_certificate(&platypus(0.2, 0.3).unwrap());
    assert_eq!(c.verdict, Verdict::Neither);
}

#[test]
fn platypus_subspace_rule() {
    assert_eq!(platypus_subspace(0.5, 0.0), [0, 1]);
    assert_eq!(platypus_subspace(0.2, 0.3), [0, 2]);
    assert_eq!(platypus_subspace(0.45, 0.1), [0, 1]);
}

#[test]
fn platypus_simulation_map_merges_levels() {
    for (s, t) in [(0.4, 0.6), (0.0, 0.3)] {
        let a = platypus_simulation_map(s, t).unwrap();
        let rho = CMatrix::diag_real(&[0.2, 0.5, 0.3]);
        let out = a.apply(&rho);
        assert!((out[(0, 0)].re - 0.2).abs() < 1e-15);
        assert!((out[(1, 1)].re - 0.8).abs() < 1e-15);
        let sim = compose(&platypus_subchannel(s, t).unwrap(), &a).unwrap();
        assert!(units_residual(&sim, &platypus(s, t).unwrap()) < 1e-12, "({s}, {t})");
    }
    assert!(platypus_simulation_map(0.2, 0.3).is_err());
}

/// Degrading map of the `{0,1}` subchannel for `t ≤ s` in closed form.
#[test]
fn platypus_subchannel_degrading_transfer() {
    for (s, t) in [(0.6, 0.2), (0.5, 0.1), (0.7, 0.3)] {
        let sub = platypus_restricted_to(s, t, [0, 1]).unwrap();
        let q = t / s;
        let mut td = CMatrix::zeros(9, 9);
        td[(0, 0)] = r(1.0 - q);
        td[(0, 8)] = r(1.0);
        td[(2, 6)] = r(q.sqrt());
        td[(4, 4)] = r(1.0);
        td[(6, 2)] = r(q.sqrt());
        td[(8, 0)] = r(q);
        let lhs = &td * sub.transfer();
        assert!(lhs.dist(sub.complement().transfer()) < 1e-9, "({s}, {t})");
        let d = SuperOperator::from_transfer(td, 3, 3).unwrap();
        assert!(d.is_cptp(1e-12));
        let (side, _) = find_map(&sub, &sub.complement());
        assert!(side.is_certified());
    }
}

#[test]
fn platypus_subchannel_antidegradable_when_s_below_t() {
    let sub = platypus_restricted_to(0.2, 0.4, [0, 1]).unwrap();
    let (side, _) = find_map(&sub.complement(), &sub);
    assert!(side.is_certified(), "{}", side.describe());
}

#[test]
fn family_strings() {
    for spec in [
        "ad:0.3",
        "platypus:0.2,0.3",
        "erasure:2,0.4",
        "flagged_ad:0.5,0.3,0.3",
        "dephasing:0.5",
        "gao:0.4",
        "mad:0.2,0.3",
    ] {
        let n = parse_family(spec).unwrap();
        assert!(n.family().is_some(), "{spec}");
    }
    assert!(parse_family("ad").is_err());
    assert!(parse_family("nope:1").is_err());
    assert!(parse_family("ad:0.1,0.2").is_err());
}
