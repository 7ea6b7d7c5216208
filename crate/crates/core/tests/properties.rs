//! Invariants over randomly drawn inputs.

use num_complex::Complex;
use proptest::prelude::*;
use symplectic_cocycle::cocycle::CocycleContext;
use symplectic_cocycle::geometry::{ManifoldModel, PlanePrimitive, Point};
use symplectic_cocycle::linalg::Matrix;
use symplectic_cocycle::quadrature::integrate_scalar;
use symplectic_cocycle::symplectomap::{HamiltonianSpec, IntegratorSettings, Moebius, SympMap};
use symplectic_cocycle::{GroupWord, Letter};

fn coord() -> impl Strategy<Value = f64> {
    -2.0..2.0f64
}

fn translation() -> impl Strategy<Value = SympMap<f64>> {
    (coord(), coord()).prop_map(|(a, b)| SympMap::translation(vec![a, b]))
}

/// `[[a, b], [c, d]]` with `ad - bc = 1` built from a shear pair and a scaling.
fn affine() -> impl Strategy<Value = SympMap<f64>> {
    (-1.0..1.0f64, -1.0..1.0f64, -0.7..0.7f64, coord(), coord()).prop_map(|(s, t, l, u, v)| {
        let e = l.exp();
        let shear_x = Matrix::from_rows(&[vec![1.0, s], vec![0.0, 1.0]]);
        let shear_y = Matrix::from_rows(&[vec![1.0, 0.0], vec![t, 1.0]]);
        let scale = Matrix::from_rows(&[vec![e, 0.0], vec![0.0, 1.0 / e]]);
        SympMap::affine(&(&shear_x * &shear_y) * &scale, vec![u, v]).unwrap()
    })
}

fn plane_map() -> impl Strategy<Value = SympMap<f64>> {
    prop_oneof![translation(), affine()]
}

fn isometry() -> impl Strategy<Value = SympMap<f64>> {
    (0.0..0.85f64, -3.2..3.2f64, -3.2..3.2f64).prop_map(|(r, a, theta)| {
        let w = Complex::from_polar(r, a);
        SympMap::moebius(
            Moebius::transvection(w)
                .unwrap()
                .compose(&Moebius::rotation(theta)),
        )
    })
}

fn word() -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((0..3usize, any::<bool>()), 0..12).prop_map(|v| {
        GroupWord::new(
            v.into_iter()
                .map(|(i, inv)| Letter::new(["a", "b", "c"][i], inv))
                .collect(),
        )
    })
}

/// Time-one map of a radial bump, via the closed-form rotation flow.
fn bump() -> impl Strategy<Value = SympMap<f64>> {
    (-0.8..0.8f64, -0.8..0.8f64, 0.5..1.2f64, -0.6..0.6f64).prop_map(|(a, b, r, amp)| {
        let model = ManifoldModel::plane(1, PlanePrimitive::Radial);
        let h = HamiltonianSpec::bump(Point::new(vec![a, b]), r, amp);
        SympMap::compact_bump(
            model,
            h,
            1.0,
            IntegratorSettings::default().with_exact_radial(true),
        )
        .unwrap()
    })
}

fn plane_ctx() -> CocycleContext<f64> {
    CocycleContext::new(ManifoldModel::plane(1, PlanePrimitive::Radial))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cocycle_identity_on_affine_maps(g in plane_map(), h in plane_map(), k in plane_map()) {
        prop_assert!(plane_ctx().coboundary2_residual(&g, &h, &k).unwrap() < 1e-8);
    }

    #[test]
    fn cocycle_identity_on_isometries(g in isometry(), h in isometry(), k in isometry()) {
        let ctx = CocycleContext::new(ManifoldModel::disk());
        prop_assert!(ctx.coboundary2_residual(&g, &h, &k).unwrap() < 1e-7);
    }

    #[test]
    fn identity_arguments_give_zero(g in plane_map()) {
        let ctx = plane_ctx();
        let e = SympMap::identity();
        prop_assert_eq!(ctx.cocycle(&e, &g).unwrap(), 0.0);
        prop_assert!(ctx.cocycle(&g, &e).unwrap().abs() < 1e-12);
    }

    #[test]
    fn translations_are_antisymmetric(g in translation(), h in translation()) {
        let ctx = plane_ctx();
        let s = ctx.cocycle(&g, &h).unwrap() + ctx.cocycle(&h, &g).unwrap();
        prop_assert!(s.abs() < 1e-10);
    }

    #[test]
    fn basepoint_change_is_a_coboundary(g in plane_map(), h in plane_map(), a in coord(), b in coord()) {
        let r = plane_ctx().basepoint_change_residual(&Point::new(vec![a, b]), &g, &h).unwrap();
        prop_assert!(r < 1e-8);
    }

    #[test]
    fn primitive_change_is_a_coboundary(g in plane_map(), h in plane_map()) {
        prop_assert!(plane_ctx().primitive_change_residual(&g, &h).unwrap() < 1e-8);
    }

    #[test]
    fn cocycle_equals_kahler_area_below_pi(g in isometry(), h in isometry()) {
        let ctx = CocycleContext::new(ManifoldModel::disk());
        let k = ctx.kahler_cocycle(&g, &h).unwrap();
        prop_assert!(k.abs() < std::f64::consts::PI);
        prop_assert!((ctx.cocycle(&g, &h).unwrap() - k).abs() < 1e-7);
    }

    #[test]
    fn affine_maps_are_symplectic(g in affine(), a in coord(), b in coord()) {
        let model = ManifoldModel::plane(1, PlanePrimitive::Radial);
        prop_assert!(g.verify_symplectic(&model, &Point::new(vec![a, b])).unwrap() < 1e-10);
    }

    #[test]
    fn inverse_undoes_the_map(g in prop_oneof![plane_map()], a in coord(), b in coord()) {
        let p = Point::new(vec![a, b]);
        let q = g.inverse().unwrap().apply(&g.apply(&p).unwrap()).unwrap();
        prop_assert!(p.distance_euclid(&q) < 1e-10);
    }

    #[test]
    fn free_reduction_is_idempotent_and_cancels_inverses(w in word()) {
        let r = w.free_reduce();
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(r.len() <= w.len());
        prop_assert!(w.concat(&w.inverse()).free_reduce().is_empty());
        prop_assert!(r.cyclic_reduce().len() <= r.len());
    }

    #[test]
    fn word_display_round_trips(w in word()) {
        prop_assert_eq!(GroupWord::parse(&w.to_string()).unwrap().free_reduce(), w.free_reduce());
    }

    #[test]
    fn power_lengths_are_subadditive(w in word(), m in 1..5i64, n in 1..5i64) {
        let len = |k: i64| w.power(k).free_reduce().len();
        prop_assert!(len(m + n) <= len(m) + len(n));
    }

    #[test]
    fn quadrature_is_exact_on_cubics(c in prop::array::uniform4(-3.0..3.0f64), a in -2.0..0.0f64, b in 0.0..2.0f64) {
        let f = |x: f64| Ok(c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x);
        let prim = |x: f64| c[0] * x + c[1] * x * x / 2.0 + c[2] * x.powi(3) / 3.0 + c[3] * x.powi(4) / 4.0;
        let r = integrate_scalar(f, a, b, 1e-12).unwrap();
        prop_assert!((r.value - (prim(b) - prim(a))).abs() < 1e-11);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cocycle_identity_with_bump_flows(g in bump(), h in plane_map(), k in bump()) {
        prop_assert!(plane_ctx().coboundary2_residual(&g, &h, &k).unwrap() < 1e-6);
    }

    #[test]
    fn bump_flows_are_identity_off_support(g in bump(), a in 3.0..5.0f64, b in -1.0..1.0f64) {
        let p = Point::new(vec![a, b]);
        prop_assert_eq!(g.apply(&p).unwrap(), p);
    }
}
