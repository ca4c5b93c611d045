use proptest::prelude::*;

use qslice::kernels::{k2_series, k2_star};
use qslice::poly::{factorial, hermite_quat, HermiteTable};
use qslice::quad::{inner_slice, SliceQuadrature};
use qslice::series::s_k_build;
use qslice::{Exact, ImaginaryUnit, PolySliceSeries, Quaternion};

fn arb_quat(radius: f64) -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-radius..radius).prop_map(|[w, x, y, z]| Quaternion::new(w, x, y, z))
}

fn arb_exact() -> impl Strategy<Value = Quaternion<Exact>> {
    prop::array::uniform4(-6i64..=6).prop_map(|[w, x, y, z]| Quaternion::from_ints(w, x, y, z))
}

fn arb_unit() -> impl Strategy<Value = ImaginaryUnit> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
        .prop_map(|(theta, phi)| ImaginaryUnit::from_angles(theta, phi))
}

fn arb_exact_series(levels: usize, width: usize) -> impl Strategy<Value = PolySliceSeries<Exact>> {
    prop::collection::vec(prop::collection::vec(arb_exact(), width), levels).prop_map(PolySliceSeries::from_rows)
}

fn arb_series(levels: usize, width: usize) -> impl Strategy<Value = PolySliceSeries> {
    prop::collection::vec(prop::collection::vec(arb_quat(1.0), width), levels).prop_map(PolySliceSeries::from_rows)
}

// ===== Quaternion algebra =====

proptest! {
    #[test]
    fn product_is_associative(a in arb_exact(), b in arb_exact(), c in arb_exact()) {
        prop_assert_eq!((a * b) * c, a * (b * c));
    }
}

proptest! {
    #[test]
    fn conjugation_reverses_products(a in arb_exact(), b in arb_exact()) {
        prop_assert_eq!((a * b).conj(), b.conj() * a.conj());
    }
}

proptest! {
    #[test]
    fn norm_is_multiplicative(a in arb_exact(), b in arb_exact()) {
        prop_assert_eq!((a * b).norm_sqr(), a.norm_sqr() * b.norm_sqr());
    }
}

proptest! {
    #[test]
    fn slice_and_polar_forms_round_trip(q in arb_quat(3.0)) {
        let s = q.to_slice();
        prop_assert!(s.y >= 0.0);
        prop_assert!(Quaternion::from_slice(&s).max_abs_diff(&q) < 1e-14);
        let p = q.to_polar();
        prop_assert!(Quaternion::from_polar(&p).max_abs_diff(&q) < 1e-13);
    }
}

proptest! {
    #[test]
    fn exp_stays_in_slice_and_is_multiplicative_there(x in -2.0..2.0f64, y in -2.0..2.0f64, u in arb_unit()) {
        let q = Quaternion::on_slice(x, y, u);
        let e = q.exp();
        prop_assert!((e.modulus() - x.exp()).abs() < 1e-12 * x.exp());
        let twice = Quaternion::on_slice(2.0 * x, 2.0 * y, u).exp();
        prop_assert!((e * e).max_abs_diff(&twice) < 1e-12 * twice.modulus().max(1.0));
    }
}

proptest! {
    #[test]
    fn split_recombines(q in arb_quat(3.0), u in arb_unit()) {
        let j = u.orthogonal();
        let (c1, c2) = q.split(u, j).unwrap();
        let back = c1 + c2 * j.as_quaternion();
        prop_assert!(back.max_abs_diff(&q) < 1e-13);
        prop_assert!((c1.im().w, c2.im().w) == (0.0, 0.0));
    }
}

// ===== Series and star products =====

proptest! {
    #[test]
    fn star_conjugation_swaps_order(f in arb_exact_series(2, 3), g in arb_exact_series(3, 2)) {
        prop_assert_eq!(f.star_l(&g).conj(), g.conj().star_r(&f.conj()));
    }
}

proptest! {
    #[test]
    fn star_is_associative(f in arb_exact_series(2, 2), g in arb_exact_series(2, 3), h in arb_exact_series(1, 2)) {
        prop_assert_eq!(f.star_l(&g).star_l(&h), f.star_l(&g.star_l(&h)));
    }
}

proptest! {
    #[test]
    fn hermite_basis_round_trip(f in arb_exact_series(3, 4)) {
        prop_assert_eq!(PolySliceSeries::from_hermite_basis(&f.to_hermite_basis()), f);
    }
}

proptest! {
    #[test]
    fn components_rebuild_the_series(f in arb_series(3, 4), q in arb_quat(1.5)) {
        let comps = f.extract_components();
        let qb = q.conj();
        let rebuilt = comps
            .iter()
            .enumerate()
            .fold(Quaternion::zero(), |acc, (k, phi)| acc + qb.powi(k as u32) * phi.eval(q));
        prop_assert!(rebuilt.max_abs_diff(&f.eval(q)) < 1e-10 * (1.0 + f.eval(q).modulus()));
    }
}

proptest! {
    #[test]
    fn s_k_is_conjugation_symmetric(k in 0usize..4, p in arb_quat(1.5), q in arb_quat(1.5)) {
        let a = s_k_build(k, q).eval(p).conj();
        let b = s_k_build(k, p).eval(q);
        prop_assert!(a.max_abs_diff(&b) < 1e-11 * (1.0 + b.modulus()));
    }
}

// ===== Hermite polynomials and kernels =====

proptest! {
    #[test]
    fn hermite_conjugate_swaps_indices(m in 0usize..=8, n in 0usize..=8, q in arb_quat(1.5)) {
        let a = hermite_quat(m, n, q).unwrap().conj();
        let b = hermite_quat(n, m, q).unwrap();
        // the literal sum cancels terms of size up to m! n! (1 + |q|)^{m+n}
        let scale = factorial(m) * factorial(n) * (1.0 + q.modulus()).powi((m + n) as i32);
        prop_assert!(a.max_abs_diff(&b) < 1e-14 * scale);
    }
}

proptest! {
    #[test]
    fn hermite_table_sum_of_squares_is_exponential(k in 0usize..5, q in arb_quat(2.0)) {
        let t = HermiteTable::new(200, k, q);
        let s: f64 = (0..=200).map(|j| t.get(j, k).norm_sqr()).sum();
        let e = q.norm_sqr().exp();
        prop_assert!((s - e).abs() < 1e-12 * e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn kernel_paths_share_real_part_and_diagonal(k in 0usize..4, p in arb_quat(1.5), q in arb_quat(1.5)) {
        let a = k2_series(k, p, q, 200).value;
        let b = k2_star(k, p, q, 40).value;
        prop_assert!((a.w - b.w).abs() < 1e-10 * (1.0 + a.modulus()));
        let d = k2_star(k, q, q, 40).value;
        prop_assert!((d.w - q.norm_sqr().exp() / std::f64::consts::PI).abs() < 1e-11 * d.w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn evaluation_bound(f in arb_series(3, 4), q in arb_quat(2.0), u in arb_unit()) {
        let quad = SliceQuadrature::new(30, u).unwrap();
        let norm = inner_slice(&f, &f, &quad).unwrap().w.sqrt();
        let bound = (q.norm_sqr() / 2.0).exp() * norm / std::f64::consts::PI.sqrt();
        prop_assert!(f.eval(q).modulus() <= bound * (1.0 + 1e-12));
    }
}
