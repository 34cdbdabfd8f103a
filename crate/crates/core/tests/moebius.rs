use hecke_zeta::moebius::{Generators, GroupElement, SurfaceParams};
use hecke_zeta::C64;
use proptest::prelude::*;

fn gens() -> Generators {
    SurfaceParams::new(3.0).unwrap().generators()
}

/// Word in `S, T, T^-1, J` from letter codes.
fn word(codes: &[u8]) -> GroupElement {
    let g = gens();
    let letters = [g.s, g.t, g.t.inverse(), g.j];
    codes.iter().fold(GroupElement::identity(), |acc, &c| acc * letters[c as usize % 4])
}

fn letters() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..4, 0..=8)
}

fn s_values() -> [C64; 3] {
    [C64::new(1.0, 0.0), C64::new(0.75, 2.0), C64::new(2.0, -1.0)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn cocycle_identity(g in letters(), h in letters(), x in -20.0f64..20.0, k in 0usize..3) {
        let (g, h) = (word(&g), word(&h));
        let [_, _, c, d] = h.entries();
        let hx = h.apply_real(x);
        prop_assume!((c * x + d).abs() > 1e-3 && hx.is_finite());
        let [_, _, c2, d2] = g.entries();
        prop_assume!((c2 * hx + d2).abs() > 1e-3);
        let s = s_values()[k];
        let z = C64::new(x, 0.0);
        let lhs = (g * h).cocycle_j(s, z).unwrap();
        let rhs = g.cocycle_j(s, C64::new(hx, 0.0)).unwrap() * h.cocycle_j(s, z).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn action_is_a_homomorphism(g in letters(), h in letters(), re in -5.0f64..5.0, im in 0.1f64..5.0) {
        let (g, h) = (word(&g), word(&h));
        let z = C64::new(re, im);
        let hz = h.apply_c(z);
        prop_assume!(hz.norm() < 1e6);
        let lhs = g.apply_c(hz);
        let rhs = (g * h).apply_c(z);
        prop_assume!(lhs.norm() < 1e6);
        prop_assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0) * 1e3, "{lhs} vs {rhs}");
    }

    #[test]
    fn norm_is_conjugation_invariant(k in letters()) {
        let g = gens();
        let k = word(&k);
        let n = g.g2.norm().unwrap();
        let conj = k * g.g2 * k.inverse();
        prop_assert!((conj.norm().unwrap() - n).abs() < 1e-9 * n);
        prop_assert!((g.g2.inverse().norm().unwrap() - n).abs() < 1e-12 * n);
    }

    #[test]
    fn det_sign_is_multiplicative(g in letters(), h in letters()) {
        let (g, h) = (word(&g), word(&h));
        prop_assert_eq!((g * h).det_sign(), g.det_sign() * h.det_sign());
    }
}

#[test]
fn involutions() {
    let g = gens();
    let id = GroupElement::identity();
    assert!((g.j * g.j).approx_eq(&id));
    assert!((g.s * g.s).approx_eq(&id));
    assert!((g.tau * g.tau).approx_eq(&id));
    assert!((g.c * g.j * g.c.inverse()).approx_eq(&g.tau));
}

#[test]
fn reflected_branch_norm() {
    let g = gens();
    let gj = g.g2 * g.j;
    assert!((gj.norm().unwrap() - (11.0 + 117f64.sqrt()) / 2.0).abs() < 1e-9);
    assert!((gj * gj).approx_eq(&(g.g2 * g.g3)));
}

#[test]
fn fixed_points_are_equivariant() {
    let g = gens();
    let conj = g.t * g.g2 * g.t.inverse();
    let (a, r) = g.g2.fixed_points().unwrap();
    let (ca, cr) = conj.fixed_points().unwrap();
    let shift = |p: hecke_zeta::moebius::Point| p.finite().unwrap().re + 3.0;
    assert!((ca.finite().unwrap().re - shift(a)).abs() < 1e-12);
    assert!((cr.finite().unwrap().re - shift(r)).abs() < 1e-12);
}
