mod common;

use common::*;
use num_complex::Complex64;
use wiretap_core::polyroots::{companion_matrix, filter_feasible, hessenberg_eigenvalues, roots};
use wiretap_core::scenario::db_to_linear;
use wiretap_core::solver::{
    beamformer, objective_g, rational_coefficients, solve_z_star, stationarity_polynomial, x_lower, z_from_x,
};
use wiretap_core::{derive_params, positivity_check, validate_scenario, worst_case_secrecy_rate, Branch};

#[test]
fn four_antenna_params() {
    let s = example1();
    let p = derive_params(&s);
    assert!(rel_err(p.a, 2.01390) < 1e-4, "a = {}", p.a);
    assert!(rel_err(p.b, 9.84720) < 1e-4, "b = {}", p.b);
    assert!(rel_err(p.d, 0.0125309) < 1e-4, "d = {}", p.d);
    assert!(rel_err(p.r, 0.540848) < 1e-4, "r = {}", p.r);
    assert!(rel_err(p.z0, 0.841120) < 1e-4, "z0 = {}", p.z0);
    // Recomputed from the channel: eps_r / ‖h̄_R‖.
    let c = 0.01 / s.hbar_r().norm();
    assert!((p.c - c).abs() < 1e-15);
    assert!(rel_err(p.c, 0.0056669) < 1e-4, "c = {}", p.c);
    // The printed 0.0566687 is ten times too large for eps_r = 0.01.
    assert!(rel_err(p.c, 0.0566687) > 0.5);
}

#[test]
fn four_antenna_scenario_is_accepted() {
    let v = validate_scenario(&example1()).unwrap();
    assert!(!v.legit_ball_contains_origin);
}

#[test]
fn four_antenna_positivity() {
    let d = positivity_check(&derive_params(&example1()));
    assert_eq!(d.branch, Branch::Cond2);
    assert!((d.expr_sign - (-0.1959)).abs() < 1e-3, "{}", d.expr_sign);
    assert!((d.expr_margin - 1.8452).abs() < 1e-3, "{}", d.expr_margin);
}

#[test]
fn four_antenna_objective_at_optimum() {
    let p = derive_params(&example1());
    let g = objective_g(0.9270, &p).unwrap();
    assert!((g - 8.6712).abs() < 2e-3, "g = {g}");
    assert!((g.log2() - 3.1162).abs() < 1e-3);
}

#[test]
fn four_antenna_eigenvalues() {
    let p = derive_params(&example1());
    let poly = stationarity_polynomial(&rational_coefficients(&p)).unwrap();
    let g = companion_matrix(&poly).unwrap();
    let mut eig = hessenberg_eigenvalues(&g).unwrap();
    let printed = [
        Complex64::new(47.92, 0.0),
        Complex64::new(-1.46, 0.0),
        Complex64::new(0.0016, 0.99),
        Complex64::new(0.0016, -0.99),
        Complex64::new(0.6741, 0.0),
        Complex64::new(-0.016, 0.0),
    ];
    for want in printed {
        let (i, dist) = eig
            .iter()
            .enumerate()
            .map(|(i, e)| (i, (e - want).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        assert!(dist < 5e-2, "no eigenvalue near {want}: {eig:?}");
        eig.remove(i);
    }
    let feasible = filter_feasible(&roots(&poly).unwrap(), x_lower(p.z0), 1.0);
    assert_eq!(feasible.len(), 1);
    assert!((feasible[0] - 0.6741).abs() < 1e-3);
}

#[test]
fn four_antenna_interval() {
    let p = derive_params(&example1());
    let x_lo = x_lower(p.z0);
    // (1 − √(1 − z0²)) / z0 at z0 = 0.841120
    assert!((x_lo - 0.545881).abs() < 1e-4, "{x_lo}");
    assert!((z_from_x(x_lo) - p.z0).abs() < 1e-14);
}

#[test]
fn four_antenna_optimum() {
    let s = example1();
    let zs = solve_z_star(&derive_params(&s)).unwrap();
    assert!((zs.x_star - 0.6741).abs() < 1e-3);
    assert!((zs.z_star - 0.9270).abs() < 1e-3);
    let out = worst_case_secrecy_rate(&s).unwrap();
    assert!(out.positive);
    assert!(
        (out.secrecy_rate_bits - 3.1162).abs() < 1e-3,
        "{}",
        out.secrecy_rate_bits
    );
    assert_eq!(out.z_star, Some(zs.z_star));
}

#[test]
fn four_antenna_beam() {
    let s = example1();
    let p = derive_params(&s);
    let zs = solve_z_star(&p).unwrap();
    let u = beamformer(&s, &p, zs.z_star);
    assert!((u.norm() - 1.0).abs() < 1e-12);
    let diff = u.phase_aligned_diff(&example1_beam());
    assert!(diff < 1e-3, "beam differs by {diff}");
}

#[test]
fn no_positive_rate_at_any_power() {
    for db in [0.0, 10.0, 20.0, 30.0] {
        let s = example2(db);
        let d = positivity_check(&derive_params(&s));
        assert_eq!(d.branch, Branch::Neither, "at {db} dB");
        let out = worst_case_secrecy_rate(&s).unwrap();
        assert!(!out.positive);
        assert_eq!(out.secrecy_rate_bits, 0.0);
        assert!(out.u_star.is_none() && out.z_star.is_none());
    }
}

#[test]
fn power_conversion() {
    assert_eq!(db_to_linear(0.0), 1.0);
    assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
    assert!((db_to_linear(5.0) - 3.16228).abs() < 1e-5);
}
