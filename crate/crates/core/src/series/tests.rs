use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::poly::{hermite_quat, laguerre};
use crate::quat::ImaginaryUnit;
use crate::scalar::Exact;
use crate::testutil::{exact_quat, quat, rng, unit};

type Q = Quaternion;
type QE = Quaternion<Exact>;

fn ex(n: i64) -> Exact {
    Exact::from_integer(n as i128)
}

fn random_exact_poly(r: &mut rand_chacha::ChaCha8Rng, level: usize, degree: usize) -> PolySliceSeries<Exact> {
    let rows = (0..=level)
        .map(|_| (0..=degree).map(|_| exact_quat(r, 4)).collect())
        .collect();
    PolySliceSeries::from_rows(rows)
}

#[test]
fn eval_hermite_11() {
    let h = PolySliceSeries::<f64>::hermite_q(1, 1);
    assert!(h.eval(Q::i()).max_abs_diff(&Q::zero()) < 1e-15);
    assert_eq!(h.eval(Q::zero()), Q::from_real(-1.0));
    assert!(h.eval(Q::new(1.0, 0.0, 1.0, 0.0)).max_abs_diff(&Q::one()) < 1e-15);
}

#[test]
fn eval_puts_coefficients_on_the_right() {
    // q̄ q^0 · j evaluated at q = i: (-i) j = -k
    let f = PolySliceSeries::monomial(1, 0, Q::j());
    assert_eq!(f.eval(Q::i()), -Q::k());
    let r = RightPolySeries::monomial(1, 0, Q::j());
    assert_eq!(r.eval(Q::i()), Q::k());
}

#[test]
fn hermite_series_matches_explicit_polynomial() {
    let mut r = rng(3);
    for _ in 0..20 {
        let q = quat(&mut r, 2.0);
        for m in 0..7 {
            for n in 0..5 {
                let a = PolySliceSeries::<f64>::hermite_q(m, n).eval(q);
                let b = hermite_quat(m, n, q).unwrap();
                assert!(a.max_abs_diff(&b) <= 1e-11 * (1.0 + b.modulus()));
            }
        }
    }
}

#[test]
fn slice_star_examples() {
    let qi = SliceSeries::monomial(1, Q::i());
    let qj = SliceSeries::monomial(1, Q::j());
    assert_eq!(qi.star(&qj), SliceSeries::monomial(2, Q::k()));
    assert_eq!(qi.star(&SliceSeries::constant(Q::one())), qi);
    assert_eq!(qi.star(&qi), SliceSeries::monomial(2, -Q::one()));
}

#[test]
fn poly_star_examples() {
    let qbar = PolySliceSeries::monomial(1, 0, Q::one());
    assert_eq!(qbar.star_l(&qbar), PolySliceSeries::monomial(2, 0, Q::one()));
    let a = PolySliceSeries::monomial(1, 0, Q::i());
    let b = PolySliceSeries::monomial(0, 1, Q::j());
    assert_eq!(a.star_l(&b), PolySliceSeries::monomial(1, 1, Q::k()));
}

#[test]
fn right_star_examples() {
    let one = RightPolySeries::monomial(0, 0, Q::one());
    let f = RightPolySeries::from_rows(vec![vec![Q::i(), Q::j()], vec![Q::k()]]);
    assert_eq!(one.star_r(&f), f);
    let a = RightPolySeries::monomial(1, 0, Q::i());
    let b = RightPolySeries::monomial(1, 0, Q::j());
    assert_eq!(a.star_r(&b), RightPolySeries::monomial(2, 0, Q::k()));
}

#[test]
fn conjugate_swaps_star_order_exactly() {
    let mut r = rng(11);
    for _ in 0..10 {
        let f = random_exact_poly(&mut r, 3, 3);
        let g = random_exact_poly(&mut r, 3, 3);
        assert_eq!(f.star_l(&g).conj(), g.conj().star_r(&f.conj()));
    }
}

#[test]
fn conjugation_is_pointwise() {
    let mut r = rng(12);
    let f = random_exact_poly(&mut r, 2, 3).to_f64();
    for _ in 0..10 {
        let q = quat(&mut r, 1.5);
        assert!(f.conj().eval(q).max_abs_diff(&f.eval(q).conj()) < 1e-12);
    }
}

#[test]
fn common_slice_coefficients_commute() {
    let mut r = rng(13);
    // coefficients a + b J for a fixed J
    let j_unit = Quaternion::<Exact>::new(ex(0), ex(1), ex(2), ex(-2)); // |J|² = 9, direction only
    let in_slice = |r: &mut rand_chacha::ChaCha8Rng| {
        let c = exact_quat(r, 5);
        Quaternion::from_real(c.w) + j_unit.scale(c.x)
    };
    for _ in 0..5 {
        let f = PolySliceSeries::from_rows(
            (0..3).map(|_| (0..4).map(|_| in_slice(&mut r)).collect()).collect(),
        );
        let g = PolySliceSeries::from_rows(
            (0..2).map(|_| (0..5).map(|_| in_slice(&mut r)).collect()).collect(),
        );
        assert_eq!(f.star_l(&g), g.star_l(&f));
    }
    // generic coefficients do not commute
    let f = PolySliceSeries::constant(QE::from_ints(0, 1, 0, 0));
    let g = PolySliceSeries::constant(QE::from_ints(0, 0, 1, 0));
    assert_ne!(f.star_l(&g), g.star_l(&f));
}

#[test]
fn derivative_examples() {
    let qbar = PolySliceSeries::monomial(1, 0, Q::one());
    assert_eq!(qbar.slice_dbar(), PolySliceSeries::constant(Q::one()));
    assert_eq!(qbar.slice_d(), PolySliceSeries::zeros(1, 0));
    let qbar_q = PolySliceSeries::monomial(1, 1, Q::one());
    assert_eq!(qbar_q.slice_dbar(), PolySliceSeries::monomial(0, 1, Q::one()));
    let q2 = PolySliceSeries::monomial(0, 2, Q::one());
    assert_eq!(q2.slice_dbar(), PolySliceSeries::zeros(0, 2));
    assert_eq!(
        PolySliceSeries::monomial(0, 1, Q::one()).slice_d(),
        PolySliceSeries::constant(Q::one())
    );
    let q2qbar = PolySliceSeries::monomial(1, 2, Q::one());
    assert_eq!(q2qbar.slice_d(), PolySliceSeries::monomial(1, 1, Q::from_real(2.0)));
}

#[test]
fn dbar_annihilates_above_level() {
    let mut r = rng(14);
    for level in 0..5 {
        let f = random_exact_poly(&mut r, level, 6);
        assert!(f.dbar_pow(level + 1).effective_level().is_none());
        assert!(f.dbar_pow(level).effective_level().is_some() || f.row(level) == SliceSeries::constant(QE::zero()));
    }
}

#[test]
fn hermite_operator_examples() {
    let one = SliceSeries::constant(Q::one());
    let q = SliceSeries::monomial(1, Q::one());
    assert_eq!(PolySliceSeries::hermite_op(&q, 0), q.to_poly());
    assert_eq!(
        PolySliceSeries::hermite_op(&one, 1),
        PolySliceSeries::monomial(1, 0, -Q::one())
    );
    let h1q = PolySliceSeries::hermite_op(&q, 1);
    assert_eq!(h1q, PolySliceSeries::<f64>::hermite_q(1, 1).scale(-1.0));
}

#[test]
fn hermite_operator_sign_against_hermite_polynomials() {
    // H_n(q^m) = (-1)^n H^Q_{m,n}
    for m in 0..=6 {
        for n in 0..=4 {
            let lhs = PolySliceSeries::hermite_op(&SliceSeries::monomial(m, QE::one()), n);
            let sign = if n % 2 == 0 { ex(1) } else { ex(-1) };
            assert_eq!(lhs, PolySliceSeries::<Exact>::hermite_q(m, n).scale(sign), "m={m} n={n}");
        }
    }
}

#[test]
fn dbar_inverts_hermite_operator() {
    let mut r = rng(15);
    for n in 0..=4 {
        let coeffs: Vec<QE> = (0..=6).map(|_| exact_quat(&mut r, 6)).collect();
        let f = SliceSeries::new(coeffs);
        let lhs = PolySliceSeries::hermite_op(&f, n).dbar_pow(n);
        let mut fact = ex(1);
        for i in 1..=n {
            fact *= ex(i as i64);
        }
        let sign = if n % 2 == 0 { ex(1) } else { ex(-1) };
        assert_eq!(lhs, f.to_poly().scale(sign * fact));
    }
}

#[test]
fn component_examples() {
    let qbar_q = PolySliceSeries::monomial(1, 1, QE::one());
    let c = qbar_q.extract_components();
    assert_eq!(c[0], SliceSeries::constant(QE::zero()));
    assert_eq!(c[1], SliceSeries::monomial(1, QE::one()));

    let f = PolySliceSeries::from_rows(vec![vec![QE::one()], vec![QE::zero(), -QE::one()]]);
    let c = f.extract_components();
    assert_eq!(c[0], SliceSeries::constant(QE::one()));
    assert_eq!(c[1], SliceSeries::monomial(1, -QE::one()));

    let regular = PolySliceSeries::from_rows(vec![vec![QE::from_ints(1, 2, 0, 0), QE::from_ints(0, 0, 3, 1)]]);
    let c = regular.extract_components();
    assert_eq!(c.len(), 1);
    assert_eq!(c[0], regular.row(0));
}

#[test]
fn components_match_rows_exactly() {
    let mut r = rng(16);
    for i in 0..100 {
        let f = random_exact_poly(&mut r, i % 5, 8);
        let comps = f.component_series();
        for (k, comp) in comps.iter().enumerate() {
            assert!(comp.effective_level().unwrap_or(0) == 0, "component {k} not slice regular");
            assert_eq!(comp.row(0), f.row(k));
        }
    }
}

#[test]
fn components_match_rows_in_floating_mode() {
    let mut r = rng(17);
    for i in 0..100 {
        let f = random_exact_poly(&mut r, i % 5, 8).to_f64();
        let scale = f.max_coeff();
        for (k, comp) in f.component_series().iter().enumerate() {
            assert!(comp.row(0).to_poly().approx_eq(&f.row(k).to_poly(), 1e-12));
            for kk in 1..=comp.level() {
                for j in 0..=comp.degree() {
                    assert!(comp.coeff(kk, j).modulus() <= 1e-12 * scale);
                }
            }
        }
    }
}

#[test]
fn hermite_basis_examples() {
    let qqbar = PolySliceSeries::monomial(1, 1, QE::one());
    let h = qqbar.to_hermite_basis();
    let entries: Vec<_> = h.entries().collect();
    assert_eq!(entries, vec![(0, 0, QE::one()), (1, 1, QE::one())]);
    let q5 = PolySliceSeries::monomial(0, 5, QE::from_ints(0, 1, 2, 3));
    let entries: Vec<_> = q5.to_hermite_basis().entries().collect();
    assert_eq!(entries, vec![(5, 0, QE::from_ints(0, 1, 2, 3))]);
}

#[test]
fn hermite_basis_round_trip() {
    let mut r = rng(18);
    for _ in 0..10 {
        let f = random_exact_poly(&mut r, 3, 6);
        assert_eq!(PolySliceSeries::from_hermite_basis(&f.to_hermite_basis()), f);
    }
}

#[test]
fn star_associative_on_slice_series() {
    let mut r = rng(19);
    for _ in 0..10 {
        let mk = |r: &mut rand_chacha::ChaCha8Rng| SliceSeries::new((0..4).map(|_| exact_quat(r, 3)).collect());
        let (a, b, c) = (mk(&mut r), mk(&mut r), mk(&mut r));
        assert_eq!(a.star(&b).star(&c), a.star(&b.star(&c)));
    }
}

#[test]
fn s_k_low_orders() {
    let q = QE::from_ints(1, -2, 3, 1);
    assert_eq!(s_k_build(0, q), PolySliceSeries::constant(QE::one()));
    // S_1 = p̄ (p - q) - (p - q) q̄
    let s1 = s_k_build(1, q);
    let expected = PolySliceSeries::from_rows(vec![
        vec![q * q.conj(), -q.conj()],
        vec![-q, QE::one()],
    ]);
    assert_eq!(s1, expected);
    // S_2 display: p̄² h² - 2 p̄ h² q̄ + h² q̄², h = h_q^{2⋆}
    let h2 = SliceSeries::new(vec![-q, QE::one()]).star_pow(2);
    let qb = q.conj();
    let mut display = PolySliceSeries::zeros(2, 2);
    for (n, a) in h2.coeffs().iter().enumerate() {
        display.add_at(2, n, *a);
        display.add_at(1, n, (*a * qb).scale(ex(-2)));
        display.add_at(0, n, *a * qb * qb);
    }
    assert_eq!(s_k_build(2, q), display);
    assert_eq!(s1.star_l(&s1), display);
}

#[test]
fn s_k_is_star_power_of_s_1() {
    let mut r = rng(20);
    for _ in 0..5 {
        let q = exact_quat(&mut r, 3);
        let s1 = s_k_build(1, q);
        let mut pow = PolySliceSeries::constant(QE::one());
        for k in 0..=5 {
            assert_eq!(s_k_build(k, q), pow, "k={k}");
            pow = pow.star_l(&s1);
        }
    }
}

#[test]
fn s_k_same_slice_and_conjugation() {
    let mut r = rng(21);
    for _ in 0..10 {
        let i = unit(&mut r);
        let p = Q::on_slice(0.7, -0.4, i);
        let q = Q::on_slice(-0.2, 1.1, i);
        let d2 = (p - q).norm_sqr();
        let s1 = s_k_build(1, q).eval(p);
        assert!(s1.max_abs_diff(&Q::from_real(d2)) < 1e-14);
        for k in 0..=4 {
            let v = s_k_build(k, q).eval(p);
            assert!(v.max_abs_diff(&Q::from_real(libm::pow(d2, k as f64))) < 1e-13);
        }
    }
    for _ in 0..10 {
        let p = quat(&mut r, 1.5);
        let q = quat(&mut r, 1.5);
        for k in 0..=4 {
            let a = s_k_build(k, q).eval(p).conj();
            // S_k(q, q̄; p̄, p): roles swapped, the series in q built around p
            let c = s_k_build(k, p).eval(q);
            assert!(a.max_abs_diff(&c) < 1e-12 * (1.0 + c.modulus()), "k={k}");
        }
    }
}

#[test]
fn laguerre_star_values() {
    let q = QE::from_ints(2, 1, 0, -1);
    assert_eq!(laguerre_star(0, ex(0), q), PolySliceSeries::constant(QE::one()));
    let l1 = laguerre_star(1, ex(0), q);
    assert_eq!(l1, PolySliceSeries::constant(QE::one()).sub(&s_k_build(1, q)));
    let mut r = rng(22);
    for _ in 0..10 {
        let i = unit(&mut r);
        let p = Q::on_slice(0.5, 0.9, i);
        let q = Q::on_slice(-0.6, 0.3, i);
        let x = (p - q).norm_sqr();
        for n in 0..=5 {
            for &g in &[0.0, 1.0, 2.5] {
                let v = laguerre_star(n, g, q).eval(p);
                let l = laguerre(n, g, x).unwrap();
                assert!(v.max_abs_diff(&Q::from_real(l)) < 1e-12 * (1.0 + l.abs()));
            }
        }
    }
}

#[test]
fn exp_star_values() {
    assert_eq!(exp_star(Q::zero(), 10).eval(Q::new(1.0, 2.0, 0.0, 0.0)), Q::one());
    let i = ImaginaryUnit::new(1.0, -1.0, 0.5).unwrap();
    let z = Q::on_slice(0.8, -0.6, i);
    let w = Q::on_slice(-0.3, 1.2, i);
    let exact = (z.conj() * w).exp();
    let approx = exp_star(w, 30).eval(z);
    assert!(approx.max_abs_diff(&exact) < 1e-14);
    // tail bound R^{2(K+1)}/(K+1)!
    let r = 1.5_f64;
    let zr = Q::on_slice(r, 0.0, i);
    for k in [5usize, 10, 15] {
        let err = exp_star(Q::from_real(r), k).eval(zr).max_abs_diff(&Q::from_real(libm::exp(r * r)));
        let bound = libm::pow(r, 2.0 * (k + 1) as f64) / crate::poly::factorial(k + 1);
        assert!(err <= bound * libm::exp(r * r), "K={k}");
    }
}
