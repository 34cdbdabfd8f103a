use hecke_zeta::moebius::SurfaceParams;
use hecke_zeta::symbolic::{BranchSystem, SystemKind};
use hecke_zeta::transferop::{Method, OperatorContext};
use hecke_zeta::zeta::{
    euler_log_factor, fredholm_det, orbit_traces_for, partition_function, partition_sum, trace_series_with,
    zeta_euler, zeta_operator, Which, ZetaOperator,
};
use hecke_zeta::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn params() -> SurfaceParams {
    SurfaceParams::new(3.0).unwrap()
}

#[test]
fn three_paths_agree() {
    let ctx = OperatorContext::new(params(), 32).unwrap();
    for s in [c(3.0, 0.0), c(2.0, 1.0)] {
        let det = fredholm_det(&ctx.assemble_full(s, Method::Continued).unwrap());
        let euler = zeta_euler(params(), s, Which::Z, 14, 25).unwrap().value;
        let series = trace_series_with(&ctx, s, 40, 0).unwrap().value.value;
        assert!((det - euler).norm() < 1e-6, "s={s}: {det} vs {euler}");
        assert!((det - series).norm() < 1e-6, "s={s}: {det} vs {series}");
        assert!((euler - series).norm() < 1e-6, "s={s}: {euler} vs {series}");
    }
}

#[test]
fn spectra_factorise() {
    for s in [c(2.5, 0.0), c(3.0, 0.0), c(4.0, 0.0)] {
        let z = zeta_euler(params(), s, Which::Z, 14, 25).unwrap().value;
        let p = zeta_euler(params(), s, Which::ZPlus, 14, 25).unwrap().value;
        let m = zeta_euler(params(), s, Which::ZMinus, 14, 25).unwrap().value;
        assert!((z - p * m).norm() < 1e-8, "s={s}: {z} vs {}", p * m);
        assert!((p - m).norm() > 1e-4);
    }
}

#[test]
fn factors_by_operator_and_product_agree() {
    let op = ZetaOperator::new(params(), 32).unwrap();
    let s = c(3.0, 0.0);
    let (p, m) = op.factors(s).unwrap();
    let ep = zeta_euler(params(), s, Which::ZPlus, 14, 25).unwrap().value;
    let em = zeta_euler(params(), s, Which::ZMinus, 14, 25).unwrap().value;
    assert!((p - ep).norm() < 1e-6 && (m - em).norm() < 1e-6, "{p} {ep} {m} {em}");
    let v = zeta_operator(params(), s, 32, Which::ZPlus).unwrap();
    assert_eq!(v.value, p);
    assert!(v.error_estimate >= 0.0);
}

#[test]
fn nonvanishing_right_of_delta() {
    let op = ZetaOperator::new(params(), 32).unwrap();
    for i in 0..=28 {
        let s = 1.2 + 0.1 * i as f64;
        let z = op.z(c(s, 0.0)).unwrap();
        assert!(z.re > 0.5 && z.norm() > 0.5, "s={s}: {z}");
    }
}

#[test]
fn conjugation_identity_for_orbit_traces() {
    for s in [c(2.0, 0.0), c(3.0, 0.5)] {
        let full = orbit_traces_for(params(), Which::Z, s, 4, 1e9);
        let plus = orbit_traces_for(params(), Which::ZPlus, s, 4, 1e9);
        let minus = orbit_traces_for(params(), Which::ZMinus, s, 4, 1e9);
        for n in 0..4 {
            let err = (full[n] - plus[n] - minus[n]).norm();
            assert!(err < 1e-7, "s={s} n={} err={err:e}", n + 1);
        }
    }
}

#[test]
fn conjugate_arguments_give_conjugate_values() {
    let op = ZetaOperator::new(params(), 24).unwrap();
    for s in [c(0.3, 2.7), c(1.1, -6.0), c(-0.2, 1.0)] {
        let a = op.z(s).unwrap();
        let b = op.z(s.conj()).unwrap();
        assert!((a.conj() - b).norm() < 1e-12 * a.norm().max(1.0), "s={s}: {a} vs {b}");
    }
}

#[test]
fn partition_functions_are_positive_norm_sums() {
    let ctx = OperatorContext::new(params(), 32).unwrap();
    let sys = BranchSystem::build(SystemKind::I, params());
    for s in [2.0, 3.0] {
        for n in 1..=3 {
            let a = partition_function(&ctx, c(s, 0.0), n).unwrap();
            let b = partition_sum(&sys, c(s, 0.0), n, 1e9);
            assert!(a.re >= 0.0 && a.im.abs() < 1e-12);
            assert!((a - b).norm() < 1e-7, "s={s} n={n}: {a} vs {b}");
        }
    }
}

#[test]
fn single_factor_without_higher_k() {
    let n0: f64 = 6.854;
    let s = c(1.7, 0.3);
    let v = euler_log_factor(n0, 1, s, Which::Z, 0).exp();
    assert!((v - (1.0 - (-s * n0.ln()).exp())).norm() < 1e-15);
}

#[test]
fn euler_product_needs_convergence() {
    assert!(zeta_euler(params(), c(0.9, 0.0), Which::Z, 6, 5).is_err());
}
