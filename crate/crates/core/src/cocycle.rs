//! The two-cocycle `G(g, h) = int_{x -> h(x)} (g^* lambda - lambda)` and its
//! companion chains, coboundaries and the Hamiltonian action functional.
//!
//! Every line integral runs along the model geodesic between its endpoints.

use crate::error::{Error, Result};
use crate::geometry::{ManifoldModel, PathSpec, PlanePrimitive, Point};
use crate::quadrature::{flow_trajectory, integrate_one_form, DEFAULT_TOL};
use crate::scalar::{euclid_norm, Scalar};
use crate::symplectomap::{HamiltonianSpec, IntegratorSettings, SympMap};

/// Tolerance for "g fixes p" preconditions.
pub const FIXED_POINT_TOL: f64 = 1e-8;

/// Model, reference point `x` and quadrature tolerance of a cocycle
/// evaluation. The primitive is the model's.
#[derive(Clone, Debug)]
pub struct CocycleContext<S> {
    model: ManifoldModel<S>,
    basepoint: Point<S>,
    tol: S,
}

/// Hamiltonian isotopy `f_t`, `t in [0, 1]`, from the identity.
#[derive(Clone, Debug)]
pub struct IsotopySpec<S> {
    pub hamiltonian: HamiltonianSpec<S>,
    pub tag: String,
    pub settings: IntegratorSettings<S>,
}

impl<S: Scalar> IsotopySpec<S> {
    pub fn new(hamiltonian: HamiltonianSpec<S>, tag: impl Into<String>) -> Self {
        Self {
            hamiltonian,
            tag: tag.into(),
            settings: IntegratorSettings::default(),
        }
    }

    pub fn with_settings(mut self, settings: IntegratorSettings<S>) -> Self {
        self.settings = settings;
        self
    }

    /// The time-one map `f_1`.
    pub fn time_one_map(&self, model: &ManifoldModel<S>) -> Result<SympMap<S>> {
        if self.hamiltonian.support().is_some() {
            SympMap::compact_bump(
                model.clone(),
                self.hamiltonian.clone(),
                S::one(),
                self.settings,
            )
        } else {
            SympMap::flow(
                model.clone(),
                self.hamiltonian.clone(),
                S::one(),
                self.settings,
            )
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Trilateral<S> {
    pub lhs: S,
    pub rhs: S,
    pub residual: S,
}

impl<S: Scalar> CocycleContext<S> {
    /// Context with `x` at the model's basepoint and the default tolerance.
    pub fn new(model: ManifoldModel<S>) -> Self {
        let basepoint = model.basepoint().clone();
        Self {
            model,
            basepoint,
            tol: S::lit(DEFAULT_TOL),
        }
    }

    pub fn with_basepoint(mut self, x: Point<S>) -> Result<Self> {
        self.model.check_point(&x)?;
        self.basepoint = x;
        Ok(self)
    }

    pub fn with_primitive(mut self, primitive: PlanePrimitive) -> Result<Self> {
        self.model = self.model.with_primitive(primitive)?;
        Ok(self)
    }

    pub fn with_tol(mut self, tol: S) -> Self {
        self.tol = tol;
        self
    }

    pub fn model(&self) -> &ManifoldModel<S> {
        &self.model
    }

    pub fn basepoint(&self) -> &Point<S> {
        &self.basepoint
    }

    pub fn tol(&self) -> S {
        self.tol
    }

    /// `int_{geodesic a -> b} (g^* lambda - lambda)`.
    fn delta_integral(&self, g: &SympMap<S>, a: &Point<S>, b: &Point<S>) -> Result<S> {
        if a == b || matches!(g, SympMap::Identity) {
            return Ok(S::zero());
        }
        let path = self.model.geodesic(a, b)?;
        integrate_one_form(|p| g.pullback_delta_lambda(&self.model, p), &path, self.tol)
            .map(|r| r.value)
    }

    /// `int_{geodesic a -> b} lambda`.
    fn lambda_integral(&self, a: &Point<S>, b: &Point<S>) -> Result<S> {
        if a == b {
            return Ok(S::zero());
        }
        let path = self.model.geodesic(a, b)?;
        integrate_one_form(|p| self.model.lambda_at(p), &path, self.tol).map(|r| r.value)
    }

    /// `G(g, h) = int_{x -> h(x)} (g^* lambda - lambda)`.
    pub fn cocycle(&self, g: &SympMap<S>, h: &SympMap<S>) -> Result<S> {
        let hx = h.apply(&self.basepoint)?;
        self.delta_integral(g, &self.basepoint, &hx)
    }

    /// `K(g)(y) = int_{x -> y} (g^* lambda - lambda)`, the primitive of
    /// `g^* lambda - lambda` normalized to vanish at `x`.
    pub fn k_tilde(&self, g: &SympMap<S>, y: &Point<S>) -> Result<S> {
        self.delta_integral(g, &self.basepoint, y)
    }

    /// `|G(g,h) - G(g,hk) + G(gh,k) - G(h,k)|`.
    pub fn coboundary2_residual(
        &self,
        g: &SympMap<S>,
        h: &SympMap<S>,
        k: &SympMap<S>,
    ) -> Result<S> {
        let hk = h.compose(k);
        let gh = g.compose(h);
        let v = self.cocycle(g, h)? - self.cocycle(g, &hk)? + self.cocycle(&gh, k)?
            - self.cocycle(h, k)?;
        Ok(v.abs())
    }

    /// `k(g) = int_{x -> g(x)} lambda`.
    pub fn k_chain(&self, g: &SympMap<S>) -> Result<S> {
        let gx = g.apply(&self.basepoint)?;
        self.lambda_integral(&self.basepoint, &gx)
    }

    /// Compares `G(g,h) + k(g) - k(gh) + k(h)` with the boundary integral of
    /// `lambda` around the triangle with sides `x -> gx`, `g(x -> hx)` and
    /// `ghx -> x`.
    pub fn trilateral_identity(&self, g: &SympMap<S>, h: &SympMap<S>) -> Result<Trilateral<S>> {
        let gh = g.compose(h);
        let lhs = self.cocycle(g, h)? + self.k_chain(g)? - self.k_chain(&gh)? + self.k_chain(h)?;
        let x = &self.basepoint;
        let gx = g.apply(x)?;
        let hx = h.apply(x)?;
        let ghx = gh.apply(x)?;
        // the image side g(x -> hx) is integrated as int_{x -> hx} g^* lambda
        let image_side = if hx == *x {
            S::zero()
        } else {
            let path = self.model.geodesic(x, &hx)?;
            integrate_one_form(|p| g.pullback_lambda(&self.model, p), &path, self.tol)?.value
        };
        let rhs = self.lambda_integral(x, &gx)? + image_side - self.lambda_integral(x, &ghx)?;
        Ok(Trilateral {
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
        })
    }

    /// Signed hyperbolic area of the geodesic triangle `(x, gx, ghx)`.
    pub fn kahler_cocycle(&self, g: &SympMap<S>, h: &SympMap<S>) -> Result<S> {
        if !self.model.is_disk() {
            return Err(Error::Unsupported(
                "the Kahler cocycle lives on the disk".into(),
            ));
        }
        let (Some(mg), Some(mh)) = (g.as_moebius(), h.as_moebius()) else {
            return Err(Error::Precondition(
                "Kahler cocycle needs disk isometries".into(),
            ));
        };
        let x = &self.basepoint;
        let z = x.to_complex();
        let gx = Point::from_complex(mg.apply(z));
        let ghx = Point::from_complex(mg.apply(mh.apply(z)));
        self.model.triangle_area_gauss_bonnet(x, &gx, &ghx)
    }

    /// `b(g) = int_ray (g^* lambda - lambda)` for a compactly supported `g`
    /// on the plane. The ray is cut where it has left every support ball
    /// (at distance `|x - c| + R + 1` from `x`); past that point the
    /// integrand vanishes identically.
    pub fn b_chain(&self, g: &SympMap<S>, ray: &PathSpec<S>) -> Result<S> {
        if self.model.is_disk() {
            return Err(Error::Unsupported(
                "b chain is implemented on the plane".into(),
            ));
        }
        let PathSpec::Ray(ray) = ray else {
            return Err(Error::Configuration("b chain needs a ray path".into()));
        };
        let x = &self.basepoint;
        if ray.origin.distance_euclid(x) > S::lit(1e-12) * (S::one() + euclid_norm(&x.coords)) {
            return Err(Error::Configuration(
                "ray must start at the basepoint".into(),
            ));
        }
        let supports = g.supports().ok_or_else(|| {
            Error::Configuration("b chain needs a map with declared compact support".into())
        })?;
        if supports.is_empty() {
            return Ok(S::zero());
        }
        let cut = supports.iter().fold(S::zero(), |m, s| {
            m.max(x.distance_euclid(&s.center) + s.radius + S::one())
        });
        if ray.length < cut {
            return Err(Error::Configuration(format!(
                "ray of length {} ends before leaving the support (needs {})",
                ray.length.as_f64(),
                cut.as_f64()
            )));
        }
        let end = Point::new(
            x.coords
                .iter()
                .zip(&ray.direction)
                .map(|(a, u)| *a + cut * *u)
                .collect(),
        );
        if supports.iter().any(|s| s.contains(&end.coords)) {
            return Err(Error::Configuration("ray does not exit the support".into()));
        }
        self.delta_integral(g, x, &end)
    }

    /// `G_x^h(g) = G(g, h)` for `g` fixing both `x` and `h(x)`; a group
    /// homomorphism on that stabilizer.
    pub fn hom_gxh(&self, h: &SympMap<S>, g: &SympMap<S>) -> Result<S> {
        let x = &self.basepoint;
        let hx = h.apply(x)?;
        let tol = S::lit(FIXED_POINT_TOL);
        let dx = g.apply(x)?.distance_euclid(x);
        let dhx = g.apply(&hx)?.distance_euclid(&hx);
        if dx > tol || dhx > tol {
            return Err(Error::Precondition(format!(
                "map must fix x and h(x) (displacements {:e}, {:e})",
                dx.as_f64(),
                dhx.as_f64()
            )));
        }
        self.cocycle(g, h)
    }

    /// `F_1(p) = int_0^1 (lambda(X_t) + H_t)(f_t(p)) dt`.
    pub fn action_functional(&self, iso: &IsotopySpec<S>, p: &Point<S>) -> Result<S> {
        let tr = flow_trajectory(
            &self.model,
            &iso.hamiltonian,
            p,
            S::zero(),
            S::one(),
            &iso.settings,
        )?;
        Ok(tr.action)
    }

    /// `|F_1^{iso1}(p) - F_1^{iso2}(p)|` for two isotopies with the same
    /// time-one map.
    pub fn isotopy_independence_residual(
        &self,
        iso1: &IsotopySpec<S>,
        iso2: &IsotopySpec<S>,
        p: &Point<S>,
    ) -> Result<S> {
        Ok((self.action_functional(iso1, p)? - self.action_functional(iso2, p)?).abs())
    }

    /// `F_1(q) - F_1(p)` for fixed points `p`, `q` of the time-one map.
    pub fn action_difference(&self, iso: &IsotopySpec<S>, p: &Point<S>, q: &Point<S>) -> Result<S> {
        let g = iso.time_one_map(&self.model)?;
        let tol = S::lit(FIXED_POINT_TOL);
        for pt in [p, q] {
            let d = g.apply(pt)?.distance_euclid(pt);
            if d > tol {
                return Err(Error::Precondition(format!(
                    "{:?} is not fixed by the time-one map (moved {:e})",
                    pt.to_f64(),
                    d.as_f64()
                )));
            }
        }
        if p == q {
            return Ok(S::zero());
        }
        Ok(self.action_functional(iso, q)? - self.action_functional(iso, p)?)
    }

    /// `G_x(g,h) - G_{x'}(g,h) - (c(g) - c(gh) + c(h))` with
    /// `c(g) = int_{x -> x'} (g^* lambda - lambda)`.
    pub fn basepoint_change_residual(
        &self,
        other: &Point<S>,
        g: &SympMap<S>,
        h: &SympMap<S>,
    ) -> Result<S> {
        let moved = self.clone().with_basepoint(other.clone())?;
        let x = &self.basepoint;
        let c = |f: &SympMap<S>| self.delta_integral(f, x, other);
        let gh = g.compose(h);
        let delta = c(g)? - c(&gh)? + c(h)?;
        Ok((self.cocycle(g, h)? - moved.cocycle(g, h)? - delta).abs())
    }

    /// On the plane: `G_radial(g,h) - G_liouville(g,h) - (e(g) - e(gh) + e(h))`
    /// with `e(g) = F(gx) - F(x)`, `F = 1/2 sum x_i y_i`.
    pub fn primitive_change_residual(&self, g: &SympMap<S>, h: &SympMap<S>) -> Result<S> {
        let radial = self.clone().with_primitive(PlanePrimitive::Radial)?;
        let liouville = self.clone().with_primitive(PlanePrimitive::Liouville)?;
        let f = |p: &Point<S>| {
            (0..p.dim() / 2).fold(S::zero(), |acc, i| {
                acc + S::lit(0.5) * p.coords[2 * i] * p.coords[2 * i + 1]
            })
        };
        let x = &self.basepoint;
        let e = |m: &SympMap<S>| -> Result<S> { Ok(f(&m.apply(x)?) - f(x)) };
        let gh = g.compose(h);
        let delta = e(g)? - e(&gh)? + e(h)?;
        Ok((radial.cocycle(g, h)? - liouville.cocycle(g, h)? - delta).abs())
    }
}

/// Inhomogeneous coboundary `(delta c)(g, h) = c(g) - c(gh) + c(h)`.
pub fn coboundary<S: Scalar, F>(c: F, g: &SympMap<S>, h: &SympMap<S>) -> Result<S>
where
    F: Fn(&SympMap<S>) -> Result<S>,
{
    Ok(c(g)? - c(&g.compose(h))? + c(h)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectomap::Moebius;
    use num_complex::Complex;

    fn plane(primitive: PlanePrimitive) -> CocycleContext<f64> {
        CocycleContext::new(ManifoldModel::plane(1, primitive))
    }

    fn t(x: f64, y: f64) -> SympMap<f64> {
        SympMap::translation(vec![x, y])
    }

    #[test]
    fn heisenberg_values() {
        let r = plane(PlanePrimitive::Radial)
            .cocycle(&t(1.0, 0.0), &t(0.0, 1.0))
            .unwrap();
        assert!((r - 0.5).abs() < 1e-12);
        let l = plane(PlanePrimitive::Liouville)
            .cocycle(&t(1.0, 0.0), &t(0.0, 1.0))
            .unwrap();
        assert!((l - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_arguments_give_zero() {
        let ctx = plane(PlanePrimitive::Radial);
        assert_eq!(
            ctx.cocycle(&SympMap::identity(), &t(1.0, 2.0)).unwrap(),
            0.0
        );
        assert_eq!(
            ctx.cocycle(&t(1.0, 2.0), &SympMap::identity()).unwrap(),
            0.0
        );
        assert_eq!(ctx.k_tilde(&t(1.0, 2.0), ctx.basepoint()).unwrap(), 0.0);
    }

    #[test]
    fn k_chain_of_translation_from_shifted_basepoint() {
        let ctx = plane(PlanePrimitive::Radial)
            .with_basepoint(Point::new(vec![0.0, 1.0]))
            .unwrap();
        assert!((ctx.k_chain(&t(2.0, 0.0)).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn change_of_basepoint_and_primitive() {
        let ctx = plane(PlanePrimitive::Radial);
        let shear = SympMap::affine(
            crate::linalg::Matrix::from_rows(&[vec![1.0, 0.4], vec![0.0, 1.0]]),
            vec![0.2, -0.3],
        )
        .unwrap();
        let g = t(0.3, 0.7);
        let r = ctx
            .basepoint_change_residual(&Point::new(vec![1.0, -0.5]), &shear, &g)
            .unwrap();
        assert!(r < 1e-10, "{r}");
        assert!(ctx.primitive_change_residual(&shear, &g).unwrap() < 1e-10);
    }

    #[test]
    fn trilateral_for_translations_is_half_omega() {
        let ctx = plane(PlanePrimitive::Radial)
            .with_basepoint(Point::new(vec![0.3, 0.1]))
            .unwrap();
        let tri = ctx
            .trilateral_identity(&t(1.0, 0.5), &t(-0.2, 0.8))
            .unwrap();
        assert!(tri.residual < 1e-10);
        assert!((tri.rhs - 0.5 * (1.0 * 0.8 - 0.5 * -0.2)).abs() < 1e-10);
    }

    #[test]
    fn kahler_matches_cocycle_on_isometries() {
        let ctx: CocycleContext<f64> = CocycleContext::new(ManifoldModel::disk());
        let g = SympMap::moebius(Moebius::transvection(Complex::new(0.4, 0.1)).unwrap());
        let h = SympMap::moebius(
            Moebius::transvection(Complex::new(-0.2, 0.5))
                .unwrap()
                .compose(&Moebius::rotation(0.8)),
        );
        let a = ctx.cocycle(&g, &h).unwrap();
        let k = ctx.kahler_cocycle(&g, &h).unwrap();
        assert!((a - k).abs() < 1e-8, "{a} vs {k}");
        assert!(ctx.k_chain(&g).unwrap().abs() < 1e-12);
    }

    #[test]
    fn hom_precondition_is_enforced() {
        let ctx = plane(PlanePrimitive::Radial);
        assert!(matches!(
            ctx.hom_gxh(&t(1.0, 0.0), &t(0.1, 0.0)),
            Err(Error::Precondition(_))
        ));
        assert_eq!(
            ctx.hom_gxh(&t(1.0, 0.0), &SympMap::identity()).unwrap(),
            0.0
        );
    }

    #[test]
    fn b_chain_rejects_short_rays() {
        let ctx = plane(PlanePrimitive::Radial);
        let h = HamiltonianSpec::bump(Point::new(vec![2.0, 0.0]), 0.5, 0.4);
        let g = SympMap::compact_bump(ctx.model().clone(), h, 1.0, IntegratorSettings::default())
            .unwrap();
        let short = ctx.model().ray(ctx.basepoint(), &[1.0, 0.0], 1.0).unwrap();
        assert!(matches!(
            ctx.b_chain(&g, &short),
            Err(Error::Configuration(_))
        ));
        let away = ctx
            .model()
            .ray(ctx.basepoint(), &[-1.0, 0.0], 10.0)
            .unwrap();
        assert!(ctx.b_chain(&g, &away).unwrap().abs() < 1e-12);
    }
}
