//! Closed-form and independently computed values.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symplectic_cocycle::cocycle::{CocycleContext, IsotopySpec};
use symplectic_cocycle::families;
use symplectic_cocycle::geometry::{ManifoldModel, PathSpec, PlanePrimitive, Point};
use symplectic_cocycle::groups::{
    lipschitz_surrogate, translation_length_estimate, word_length, GeneratingSet,
};
use symplectic_cocycle::quadrature::integrate_one_form;
use symplectic_cocycle::symplectomap::{HamiltonianSpec, IntegratorSettings, SympMap};
use symplectic_cocycle::{GroupStructure, GroupWord};

fn plane(n: usize, primitive: PlanePrimitive) -> CocycleContext<f64> {
    CocycleContext::new(ManifoldModel::plane(n, primitive))
}

#[test]
fn translations_give_the_heisenberg_form_in_four_dimensions() {
    let u = vec![1.0, 0.5, -0.3, 2.0];
    let v = vec![0.2, -1.0, 0.7, 0.4];
    let (tu, tv) = (
        SympMap::translation(u.clone()),
        SympMap::translation(v.clone()),
    );
    let omega: f64 = (0..2)
        .map(|i| u[2 * i] * v[2 * i + 1] - u[2 * i + 1] * v[2 * i])
        .sum();
    let radial = plane(2, PlanePrimitive::Radial).cocycle(&tu, &tv).unwrap();
    assert!((radial - 0.5 * omega).abs() < 1e-12);
    let liouville = plane(2, PlanePrimitive::Liouville)
        .cocycle(&tu, &tv)
        .unwrap();
    let expected: f64 = (0..2).map(|i| u[2 * i] * v[2 * i + 1]).sum();
    assert!((liouville - expected).abs() < 1e-12);
}

#[test]
fn disk_primitive_norm_is_tanh_of_half_distance() {
    let disk = ManifoldModel::<f64>::disk();
    let o = disk.basepoint().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let p: Point<f64> = families::disk_point(&mut rng, 0.95);
        if p == o {
            continue;
        }
        let norm = disk.covector_norm(&p, &disk.lambda_at(&p).unwrap());
        let r = disk.distance(&o, &p).unwrap();
        assert!((norm - (r / 2.0).tanh()).abs() < 1e-12, "{norm} vs {r}");
    }
}

#[test]
fn disk_density_is_the_laplacian_of_the_kahler_potential() {
    // phi = -log(1 - |z|^2) has Laplacian 4 / (1 - |z|^2)^2
    let disk = ManifoldModel::<f64>::disk();
    let phi = |x: f64, y: f64| -(1.0 - x * x - y * y).ln();
    let h = 1e-4;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let p: Point<f64> = families::disk_point(&mut rng, 0.8);
        let (x, y) = (p.coords[0], p.coords[1]);
        let lap = (phi(x + h, y) + phi(x - h, y) + phi(x, y + h) + phi(x, y - h) - 4.0 * phi(x, y))
            / (h * h);
        let rho = disk.symplectic_density(&p);
        assert!((lap - rho).abs() < 1e-5 * rho, "{lap} vs {rho}");
    }
}

#[test]
fn gauss_bonnet_area_matches_the_boundary_integral() {
    let disk = ManifoldModel::<f64>::disk();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let p: Vec<Point<f64>> = (0..3)
            .map(|_| families::disk_point(&mut rng, 0.9))
            .collect();
        let area = disk
            .triangle_area_gauss_bonnet(&p[0], &p[1], &p[2])
            .unwrap();
        let boundary = PathSpec::Concat(vec![
            disk.geodesic(&p[0], &p[1]).unwrap(),
            disk.geodesic(&p[1], &p[2]).unwrap(),
            disk.geodesic(&p[2], &p[0]).unwrap(),
        ]);
        let stokes = integrate_one_form(|q| disk.lambda_at(q), &boundary, 1e-11)
            .unwrap()
            .value;
        assert!(area.abs() < PI);
        assert!((area - stokes).abs() < 1e-8, "{area} vs {stokes}");
    }
}

#[test]
fn counterclockwise_triangles_have_positive_area() {
    let disk = ManifoldModel::<f64>::disk();
    let a = Point::new(vec![0.0, 0.0]);
    let b = Point::new(vec![0.5, 0.0]);
    let c = Point::new(vec![0.0, 0.5]);
    assert!(disk.triangle_area_gauss_bonnet(&a, &b, &c).unwrap() > 0.0);
    assert!(disk.triangle_area_gauss_bonnet(&a, &c, &b).unwrap() < 0.0);
}

/// Bump with maximum 0.7 at `q`, basepoint outside the support, `h`
/// translating the basepoint onto `q`.
fn bump_setup(
    settings: IntegratorSettings<f64>,
) -> (CocycleContext<f64>, IsotopySpec<f64>, SympMap<f64>) {
    let x = Point::new(vec![2.0, 0.0]);
    let ctx = plane(1, PlanePrimitive::Radial).with_basepoint(x).unwrap();
    let iso = IsotopySpec::new(
        HamiltonianSpec::bump(Point::new(vec![0.3, 0.2]), 1.0, 0.7),
        "bump",
    )
    .with_settings(settings);
    (ctx, iso, SympMap::translation(vec![-1.7, 0.2]))
}

#[test]
fn action_difference_and_cocycle_have_the_same_sign() {
    let (ctx, iso, h) = bump_setup(IntegratorSettings::default());
    let g = iso.time_one_map(ctx.model()).unwrap();
    let q = h.apply(ctx.basepoint()).unwrap();
    let diff = ctx.action_difference(&iso, ctx.basepoint(), &q).unwrap();
    let value = ctx.cocycle(&g, &h).unwrap();
    assert!((diff - 0.7).abs() < 1e-6, "{diff}");
    assert!((value - 0.7).abs() < 1e-6, "{value}");
}

#[test]
fn exact_radial_flow_matches_rk4() {
    let model = ManifoldModel::<f64>::plane(1, PlanePrimitive::Radial);
    let ham = HamiltonianSpec::bump(Point::new(vec![0.1, -0.2]), 1.2, 0.6);
    let rk4 = SympMap::compact_bump(
        model.clone(),
        ham.clone(),
        1.0,
        IntegratorSettings::default(),
    )
    .unwrap();
    let exact = SympMap::compact_bump(
        model,
        ham,
        1.0,
        IntegratorSettings::default().with_exact_radial(true),
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let p: Point<f64> = families::plane_point(&mut rng, 2, 1.2);
        let (a, da) = rk4.apply_with_differential(&p).unwrap();
        let (b, db) = exact.apply_with_differential(&p).unwrap();
        assert!(a.distance_euclid(&b) < 1e-8);
        assert!(da.max_abs_diff(&db) < 1e-6);
    }
}

#[test]
fn free_group_lengths_and_translation_length() {
    let set = GeneratingSet::new(
        vec![
            ("a".to_string(), SympMap::translation(vec![1.0, 0.0])),
            ("b".to_string(), SympMap::translation(vec![0.0, 1.0])),
        ],
        GroupStructure::Free,
    )
    .unwrap();
    let w = GroupWord::parse("a b a^-1").unwrap();
    assert_eq!(word_length(&w, &set).unwrap().length, 3);
    assert_eq!(word_length(&w.power(5), &set).unwrap().length, 7);
    let tl = translation_length_estimate(&w, &set, 8).unwrap();
    assert_eq!(tl.limit, Some(1.0));
    assert!((tl.estimate - 10.0 / 8.0).abs() < 1e-12);
    let commutator = GroupWord::parse("a b a^-1 b^-1").unwrap();
    let tl = translation_length_estimate(&commutator, &set, 4).unwrap();
    assert_eq!(tl.limit, Some(4.0));
    assert_eq!(tl.estimate, 4.0);
}

#[test]
fn translations_commute_under_cayley_search() {
    let set = GeneratingSet::new(
        vec![
            ("a".to_string(), SympMap::translation(vec![1.0, 0.0])),
            ("b".to_string(), SympMap::translation(vec![0.0, 1.0])),
        ],
        GroupStructure::Unknown,
    )
    .unwrap()
    .with_probes(vec![
        Point::new(vec![0.0, 0.0]),
        Point::new(vec![0.3, -1.1]),
    ]);
    let w = GroupWord::parse("a b a^-1 b^-1").unwrap();
    let len = word_length(&w, &set).unwrap();
    assert_eq!(len.length, 0);
    assert!(len.exact);
}

#[test]
fn lipschitz_surrogate_holds_on_short_words() {
    let model = ManifoldModel::<f64>::plane(1, PlanePrimitive::Radial);
    let ctx = CocycleContext::new(model.clone());
    let settings = IntegratorSettings::default().with_exact_radial(true);
    let bump = |c: [f64; 2], r: f64, a: f64| {
        SympMap::compact_bump(
            model.clone(),
            HamiltonianSpec::bump(Point::new(c.to_vec()), r, a),
            1.0,
            settings,
        )
        .unwrap()
    };
    let set = GeneratingSet::new(
        vec![
            ("a".to_string(), bump([0.4, 0.0], 1.0, 0.25)),
            ("b".to_string(), bump([-0.2, 0.3], 0.8, -0.2)),
        ],
        GroupStructure::Free,
    )
    .unwrap();
    let words = GroupWord::all_reduced(&["a", "b"], 3);
    let sample = vec![
        SympMap::translation(vec![0.4, 0.0]),
        SympMap::translation(vec![-0.5, 0.6]),
    ];
    let report = lipschitz_surrogate(&ctx, &set, &words, &sample, 1e-6).unwrap();
    assert_eq!(report.rows.len(), words.len());
    assert!(report.max_violation <= 0.0, "{}", report.max_violation);
}

#[test]
fn kahler_cocycle_is_bounded_by_pi() {
    let ctx = CocycleContext::new(ManifoldModel::<f64>::disk());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let g = families::moebius::<f64, _>(&mut rng, 0.95).unwrap();
        let h = families::moebius::<f64, _>(&mut rng, 0.95).unwrap();
        let k = ctx.kahler_cocycle(&g, &h).unwrap();
        assert!(k.abs() < PI);
        assert!((ctx.cocycle(&g, &h).unwrap() - k).abs() < 1e-6);
    }
}

#[test]
fn cotangent_lifts_vanish_on_the_zero_section() {
    let ctx = plane(1, PlanePrimitive::Liouville);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let g = families::cotangent_lift::<f64, _>(&mut rng).unwrap();
        let h = families::cotangent_lift::<f64, _>(&mut rng).unwrap();
        let v = ctx.cocycle(&g, &h).unwrap();
        assert!(v.abs() < 1e-12, "{v}");
        let _ = rng.gen::<u8>();
    }
}
