//! Chart models of exact symplectic manifolds.
//!
//! Two families are provided: the Euclidean plane `R^{2n}` with either the
//! radial primitive `1/2 sum (x_i dy_i - y_i dx_i)` or the Liouville primitive
//! `sum x_i dy_i`, and the Poincare disk of curvature -1 whose Kahler form is
//! the hyperbolic area form. Plane coordinates are interleaved as
//! `(x_1, y_1, ..., x_n, y_n)`.
//!
//! Orientation convention: counterclockwise in the chart is positive, so
//! signed triangle areas and boundary integrals of the primitive agree.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{dot, euclid_norm, Scalar};

/// Points of the disk model must satisfy `|z| <= 1 - DISK_EDGE_MARGIN`.
pub const DISK_EDGE_MARGIN: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Point<S> {
    pub coords: Vec<S>,
}

impl<S: Scalar> Point<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Self { coords }
    }

    pub fn origin(dim: usize) -> Self {
        Self::new(vec![S::zero(); dim])
    }

    pub fn from_f64(coords: &[f64]) -> Self {
        Self::new(coords.iter().map(|x| S::lit(*x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|x| x.is_finite())
    }

    pub fn distance_euclid(&self, other: &Self) -> S {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(S::zero(), |acc, (a, b)| acc + (*a - *b) * (*a - *b))
            .sqrt()
    }

    pub(crate) fn to_complex(&self) -> Complex<S> {
        Complex::new(self.coords[0], self.coords[1])
    }

    pub(crate) fn from_complex(z: Complex<S>) -> Self {
        Self::new(vec![z.re, z.im])
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|x| x.as_f64()).collect()
    }
}

impl<S: Scalar> From<Vec<S>> for Point<S> {
    fn from(coords: Vec<S>) -> Self {
        Self::new(coords)
    }
}

/// A cotangent vector in chart components.
#[derive(Clone, Debug, PartialEq)]
pub struct Covector<S> {
    pub components: Vec<S>,
}

impl<S: Scalar> Covector<S> {
    pub fn new(components: Vec<S>) -> Self {
        Self { components }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![S::zero(); dim])
    }

    /// Evaluates the covector on a tangent vector.
    pub fn pair(&self, v: &[S]) -> S {
        dot(&self.components, v)
    }

    pub fn max_abs(&self) -> S {
        self.components
            .iter()
            .fold(S::zero(), |m, x| m.max(x.abs()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| *a - *b)
                .collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlanePrimitive {
    /// `1/2 sum (x_i dy_i - y_i dx_i)`
    Radial,
    /// `sum x_i dy_i`
    Liouville,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    EuclideanPlane { n: usize, primitive: PlanePrimitive },
    HyperbolicDisk,
}

/// A contractible exact symplectic manifold given in a single chart.
///
/// For the disk the basepoint is the centre of the radial primitive
/// `(cosh r - 1) d theta`; for the plane it is only the default reference
/// point for cocycle evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldModel<S> {
    kind: ModelKind,
    basepoint: Point<S>,
}

impl<S: Scalar> ManifoldModel<S> {
    pub fn plane(n: usize, primitive: PlanePrimitive) -> Self {
        assert!(n >= 1, "plane model needs n >= 1");
        Self {
            kind: ModelKind::EuclideanPlane { n, primitive },
            basepoint: Point::origin(2 * n),
        }
    }

    pub fn disk() -> Self {
        Self {
            kind: ModelKind::HyperbolicDisk,
            basepoint: Point::origin(2),
        }
    }

    pub fn with_basepoint(mut self, basepoint: Point<S>) -> Result<Self> {
        self.check_point(&basepoint)?;
        self.basepoint = basepoint;
        Ok(self)
    }

    /// The same chart with a different plane primitive.
    pub fn with_primitive(&self, primitive: PlanePrimitive) -> Result<Self> {
        match self.kind {
            ModelKind::EuclideanPlane { n, .. } => Ok(Self {
                kind: ModelKind::EuclideanPlane { n, primitive },
                basepoint: self.basepoint.clone(),
            }),
            ModelKind::HyperbolicDisk => Err(Error::Unsupported(
                "the disk ships only its radial primitive".into(),
            )),
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn basepoint(&self) -> &Point<S> {
        &self.basepoint
    }

    pub fn is_disk(&self) -> bool {
        matches!(self.kind, ModelKind::HyperbolicDisk)
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            ModelKind::EuclideanPlane { n, .. } => 2 * n,
            ModelKind::HyperbolicDisk => 2,
        }
    }

    pub fn check_point(&self, p: &Point<S>) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: p.dim(),
            });
        }
        if !p.is_finite() {
            return Err(Error::OutOfDomain {
                coords: p.to_f64(),
                reason: "non-finite coordinate".into(),
            });
        }
        if self.is_disk() {
            check_in_disk(p)?;
        }
        Ok(())
    }

    /// The primitive `lambda` at `p`.
    pub fn lambda_at(&self, p: &Point<S>) -> Result<Covector<S>> {
        self.check_point(p)?;
        Ok(self.lambda_unchecked(&p.coords))
    }

    pub(crate) fn lambda_unchecked(&self, c: &[S]) -> Covector<S> {
        let half = S::lit(0.5);
        match self.kind {
            ModelKind::EuclideanPlane { primitive, .. } => {
                let mut out = vec![S::zero(); c.len()];
                for i in 0..c.len() / 2 {
                    let (x, y) = (c[2 * i], c[2 * i + 1]);
                    match primitive {
                        PlanePrimitive::Radial => {
                            out[2 * i] = -half * y;
                            out[2 * i + 1] = half * x;
                        }
                        PlanePrimitive::Liouville => {
                            out[2 * i + 1] = x;
                        }
                    }
                }
                Covector::new(out)
            }
            ModelKind::HyperbolicDisk => {
                // Closed form of (cosh r - 1) d theta about the origin is
                // 2 (x dy - y dx) / (1 - |w|^2); it is smooth at w = 0, so
                // the basepoint needs no polar special case. A general
                // basepoint is handled by pulling back along the isometry
                // sending it to the origin.
                let b = self.basepoint.to_complex();
                let z = Complex::new(c[0], c[1]);
                let w = to_origin(b, z);
                let two = S::lit(2.0);
                let denom = S::one() - w.norm_sqr();
                let (l0x, l0y) = (-two * w.im / denom, two * w.re / denom);
                let d = to_origin_derivative(b, z);
                Covector::new(vec![l0x * d.re + l0y * d.im, -l0x * d.im + l0y * d.re])
            }
        }
    }

    /// Density `rho` with `d lambda = rho * (standard form)`.
    pub fn symplectic_density(&self, p: &Point<S>) -> S {
        self.density_unchecked(&p.coords)
    }

    pub(crate) fn density_unchecked(&self, c: &[S]) -> S {
        match self.kind {
            ModelKind::EuclideanPlane { .. } => S::one(),
            ModelKind::HyperbolicDisk => {
                let q = S::one() - (c[0] * c[0] + c[1] * c[1]);
                S::lit(4.0) / (q * q)
            }
        }
    }

    /// Gradient of the symplectic density, written into `out`.
    pub(crate) fn density_gradient_unchecked(&self, c: &[S], out: &mut [S]) {
        match self.kind {
            ModelKind::EuclideanPlane { .. } => out.iter_mut().for_each(|o| *o = S::zero()),
            ModelKind::HyperbolicDisk => {
                let q = S::one() - (c[0] * c[0] + c[1] * c[1]);
                let k = S::lit(16.0) / (q * q * q);
                out[0] = k * c[0];
                out[1] = k * c[1];
            }
        }
    }

    /// Chart matrix of the symplectic form `d lambda` at `p`.
    pub fn symplectic_matrix(&self, p: &Point<S>) -> Matrix<S> {
        Matrix::standard_symplectic(self.dim()).scaled(self.symplectic_density(p))
    }

    /// Conformal factor `f` of the metric `f^2 |dz|^2` (1 for the plane).
    pub fn metric_factor(&self, p: &Point<S>) -> S {
        match self.kind {
            ModelKind::EuclideanPlane { .. } => S::one(),
            ModelKind::HyperbolicDisk => {
                let c = &p.coords;
                S::lit(2.0) / (S::one() - (c[0] * c[0] + c[1] * c[1]))
            }
        }
    }

    /// Riemannian norm of a covector at `p`.
    pub fn covector_norm(&self, p: &Point<S>, alpha: &Covector<S>) -> S {
        euclid_norm(&alpha.components) / self.metric_factor(p)
    }

    /// Riemannian norm of a tangent vector at `p`.
    pub fn vector_norm(&self, p: &Point<S>, v: &[S]) -> S {
        euclid_norm(v) * self.metric_factor(p)
    }

    /// The model geodesic from `a` to `b`, parametrized on `[0, 1]` with
    /// constant speed. `a == b` gives the constant path.
    pub fn geodesic(&self, a: &Point<S>, b: &Point<S>) -> Result<PathSpec<S>> {
        self.check_point(a)?;
        self.check_point(b)?;
        Ok(PathSpec::Geodesic(self.geodesic_unchecked(a, b)))
    }

    pub(crate) fn geodesic_unchecked(&self, a: &Point<S>, b: &Point<S>) -> Geodesic<S> {
        match self.kind {
            ModelKind::EuclideanPlane { .. } => Geodesic::Straight {
                a: a.clone(),
                b: b.clone(),
            },
            ModelKind::HyperbolicDisk => {
                let za = a.to_complex();
                let w = to_origin(za, b.to_complex());
                let r = w.norm();
                if r == S::zero() {
                    Geodesic::Hyperbolic {
                        start: za,
                        dir: Complex::new(S::one(), S::zero()),
                        length: S::zero(),
                    }
                } else {
                    Geodesic::Hyperbolic {
                        start: za,
                        dir: w / r,
                        length: S::lit(2.0) * r.atanh(),
                    }
                }
            }
        }
    }

    /// Geodesic ray from `origin` in the chart direction `direction`,
    /// truncated after Riemannian length `length`.
    pub fn ray(&self, origin: &Point<S>, direction: &[S], length: S) -> Result<PathSpec<S>> {
        self.check_point(origin)?;
        if direction.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: direction.len(),
            });
        }
        let norm = euclid_norm(direction);
        if !(norm > S::zero()) || !(length >= S::zero()) {
            return Err(Error::Precondition(
                "ray needs a nonzero direction and a nonnegative length".into(),
            ));
        }
        let unit: Vec<S> = direction.iter().map(|d| *d / norm).collect();
        let curve = match self.kind {
            ModelKind::EuclideanPlane { .. } => Geodesic::Straight {
                a: origin.clone(),
                b: Point::new(
                    origin
                        .coords
                        .iter()
                        .zip(&unit)
                        .map(|(o, u)| *o + length * *u)
                        .collect(),
                ),
            },
            ModelKind::HyperbolicDisk => Geodesic::Hyperbolic {
                start: origin.to_complex(),
                dir: Complex::new(unit[0], unit[1]),
                length,
            },
        };
        Ok(PathSpec::Ray(Ray {
            origin: origin.clone(),
            direction: unit,
            length,
            curve,
        }))
    }

    /// Riemannian distance (Euclidean, or hyperbolic with curvature -1).
    pub fn distance(&self, a: &Point<S>, b: &Point<S>) -> Result<S> {
        self.check_point(a)?;
        self.check_point(b)?;
        Ok(match self.kind {
            ModelKind::EuclideanPlane { .. } => a.distance_euclid(b),
            ModelKind::HyperbolicDisk => {
                let w = to_origin(a.to_complex(), b.to_complex());
                S::lit(2.0) * w.norm().atanh()
            }
        })
    }

    /// Signed hyperbolic area `sign * (pi - alpha - beta - gamma)` of the
    /// geodesic triangle `(a, b, c)`; positive when counterclockwise.
    pub fn triangle_area_gauss_bonnet(
        &self,
        a: &Point<S>,
        b: &Point<S>,
        c: &Point<S>,
    ) -> Result<S> {
        if !self.is_disk() {
            return Err(Error::Unsupported(
                "Gauss-Bonnet area is defined for the disk model".into(),
            ));
        }
        for p in [a, b, c] {
            self.check_point(p)?;
        }
        let (za, zb, zc) = (a.to_complex(), b.to_complex(), c.to_complex());
        let corner = |v: Complex<S>, p: Complex<S>, q: Complex<S>| -> Option<(S, S)> {
            let wp = to_origin(v, p);
            let wq = to_origin(v, q);
            let tiny = S::epsilon() * S::lit(64.0);
            if wp.norm() <= tiny || wq.norm() <= tiny {
                return None;
            }
            let cross = (wq * wp.conj()).im;
            let inner = (wq * wp.conj()).re;
            Some((cross.abs().atan2(inner), cross))
        };
        let (Some((alpha, orient)), Some((beta, _)), Some((gamma, _))) =
            (corner(za, zb, zc), corner(zb, zc, za), corner(zc, za, zb))
        else {
            return Ok(S::zero());
        };
        if orient == S::zero() {
            return Ok(S::zero());
        }
        let defect = S::PI() - alpha - beta - gamma;
        Ok(if orient > S::zero() { defect } else { -defect })
    }

    /// Signed symplectic area `1/2 omega(b - a, c - a)` of a flat triangle.
    pub fn triangle_area_flat(&self, a: &Point<S>, b: &Point<S>, c: &Point<S>) -> Result<S> {
        if self.is_disk() {
            return Err(Error::Unsupported(
                "flat area is defined for the plane".into(),
            ));
        }
        let u: Vec<S> = b
            .coords
            .iter()
            .zip(&a.coords)
            .map(|(x, y)| *x - *y)
            .collect();
        let v: Vec<S> = c
            .coords
            .iter()
            .zip(&a.coords)
            .map(|(x, y)| *x - *y)
            .collect();
        Ok(S::lit(0.5) * standard_omega(&u, &v))
    }

    /// `integral of d lambda` over the geodesic triangle, by the closed form
    /// appropriate to the model.
    pub fn geodesic_triangle_area(&self, a: &Point<S>, b: &Point<S>, c: &Point<S>) -> Result<S> {
        if self.is_disk() {
            self.triangle_area_gauss_bonnet(a, b, c)
        } else {
            self.triangle_area_flat(a, b, c)
        }
    }

    /// Max-norm mismatch between the finite-difference exterior derivative of
    /// the coded primitive and the coded symplectic form at `p`.
    pub fn check_dlambda(&self, p: &Point<S>, step: S) -> Result<S> {
        self.check_point(p)?;
        if self.is_disk() {
            let r = euclid_norm(&p.coords);
            if r + step * S::lit(2.0) > S::one() - S::lit(DISK_EDGE_MARGIN) {
                return Err(Error::Precondition(
                    "finite-difference stencil leaves the disk".into(),
                ));
            }
        }
        let dim = self.dim();
        // partials[i][j] = d lambda_j / d x_i
        let mut partials = vec![vec![S::zero(); dim]; dim];
        // five-point central stencil
        let eval = |i: usize, k: S| {
            let mut q = p.coords.clone();
            q[i] = q[i] + k * step;
            self.lambda_unchecked(&q)
        };
        for (i, row) in partials.iter_mut().enumerate() {
            let (p2, p1) = (eval(i, S::lit(2.0)), eval(i, S::one()));
            let (m1, m2) = (eval(i, -S::one()), eval(i, S::lit(-2.0)));
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (S::lit(8.0) * (p1.components[j] - m1.components[j])
                    - (p2.components[j] - m2.components[j]))
                    / (S::lit(12.0) * step);
            }
        }
        let omega = self.symplectic_matrix(p);
        let mut worst = S::zero();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let d = partials[i][j] - partials[j][i];
                worst = worst.max((d - omega[(i, j)]).abs());
            }
        }
        Ok(worst)
    }

    /// Upper bound of the Riemannian norm of `lambda` over the chart ball
    /// `|p - center| <= radius`.
    pub fn primitive_bound_on_ball(&self, center: &Point<S>, radius: S) -> S {
        match self.kind {
            ModelKind::EuclideanPlane { primitive, .. } => {
                let reach = euclid_norm(&center.coords) + radius;
                match primitive {
                    PlanePrimitive::Radial => S::lit(0.5) * reach,
                    PlanePrimitive::Liouville => reach,
                }
            }
            // |lambda| = tanh(r / 2) < 1 everywhere.
            ModelKind::HyperbolicDisk => S::one(),
        }
    }
}

pub(crate) fn check_in_disk<S: Scalar>(p: &Point<S>) -> Result<()> {
    let r = euclid_norm(&p.coords);
    if !(r <= S::one() - S::lit(DISK_EDGE_MARGIN)) {
        return Err(Error::OutOfDomain {
            coords: p.to_f64(),
            reason: format!("|z| = {} exceeds 1 - {DISK_EDGE_MARGIN:e}", r.as_f64()),
        });
    }
    Ok(())
}

/// `omega(u, v)` for the standard form in interleaved coordinates.
pub fn standard_omega<S: Scalar>(u: &[S], v: &[S]) -> S {
    (0..u.len() / 2).fold(S::zero(), |acc, i| {
        acc + u[2 * i] * v[2 * i + 1] - u[2 * i + 1] * v[2 * i]
    })
}

/// Disk isometry sending `b` to the origin.
pub(crate) fn to_origin<S: Scalar>(b: Complex<S>, z: Complex<S>) -> Complex<S> {
    (z - b) / (Complex::new(S::one(), S::zero()) - b.conj() * z)
}

pub(crate) fn to_origin_derivative<S: Scalar>(b: Complex<S>, z: Complex<S>) -> Complex<S> {
    let den = Complex::new(S::one(), S::zero()) - b.conj() * z;
    Complex::new(S::one() - b.norm_sqr(), S::zero()) / (den * den)
}

/// Inverse of [`to_origin`].
pub(crate) fn from_origin<S: Scalar>(b: Complex<S>, w: Complex<S>) -> Complex<S> {
    (w + b) / (Complex::new(S::one(), S::zero()) + b.conj() * w)
}

pub(crate) fn from_origin_derivative<S: Scalar>(b: Complex<S>, w: Complex<S>) -> Complex<S> {
    let den = Complex::new(S::one(), S::zero()) + b.conj() * w;
    Complex::new(S::one() - b.norm_sqr(), S::zero()) / (den * den)
}

/// Constant-speed geodesic segment of a model.
#[derive(Clone, Debug, PartialEq)]
pub enum Geodesic<S> {
    Straight {
        a: Point<S>,
        b: Point<S>,
    },
    /// Image under the isometry `w -> (w + start)/(1 + conj(start) w)` of the
    /// diameter `t -> tanh(t * length / 2) * dir`.
    Hyperbolic {
        start: Complex<S>,
        dir: Complex<S>,
        length: S,
    },
}

impl<S: Scalar> Geodesic<S> {
    pub fn eval(&self, t: S) -> (Vec<S>, Vec<S>) {
        match self {
            Geodesic::Straight { a, b } => {
                let vel: Vec<S> = b
                    .coords
                    .iter()
                    .zip(&a.coords)
                    .map(|(y, x)| *y - *x)
                    .collect();
                let pos = a
                    .coords
                    .iter()
                    .zip(&vel)
                    .map(|(x, v)| *x + t * *v)
                    .collect();
                (pos, vel)
            }
            Geodesic::Hyperbolic { start, dir, length } => {
                let half = S::lit(0.5) * *length;
                let th = (t * half).tanh();
                let w = *dir * th;
                let z = from_origin(*start, w);
                let dw = *dir * (half * (S::one() - th * th));
                let dz = from_origin_derivative(*start, w) * dw;
                (vec![z.re, z.im], vec![dz.re, dz.im])
            }
        }
    }
}

/// Geodesic ray truncated at a finite length.
#[derive(Clone, Debug, PartialEq)]
pub struct Ray<S> {
    pub origin: Point<S>,
    pub direction: Vec<S>,
    pub length: S,
    curve: Geodesic<S>,
}

impl<S: Scalar> Ray<S> {
    pub fn endpoint(&self) -> Point<S> {
        Point::new(self.curve.eval(S::one()).0)
    }
}

/// User-supplied `C^1` curve on `[0, 1]` returning position and velocity.
#[derive(Clone)]
pub struct Curve<S>(pub Arc<dyn Fn(S) -> (Vec<S>, Vec<S>) + Send + Sync>);

impl<S> fmt::Debug for Curve<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Curve(..)")
    }
}

/// A piecewise `C^1` path. Each piece is parametrized on `[0, 1]`.
#[derive(Clone, Debug)]
pub enum PathSpec<S> {
    Geodesic(Geodesic<S>),
    /// Straight chart segments between consecutive vertices.
    Polyline(Vec<Point<S>>),
    Parametrized(Curve<S>),
    Ray(Ray<S>),
    Reversed(Box<PathSpec<S>>),
    Concat(Vec<PathSpec<S>>),
}

impl<S: Scalar> PathSpec<S> {
    pub fn reversed(self) -> Self {
        PathSpec::Reversed(Box::new(self))
    }

    pub fn piece_count(&self) -> usize {
        match self {
            PathSpec::Geodesic(_) | PathSpec::Parametrized(_) | PathSpec::Ray(_) => 1,
            PathSpec::Polyline(pts) => pts.len().saturating_sub(1).max(1),
            PathSpec::Reversed(inner) => inner.piece_count(),
            PathSpec::Concat(parts) => parts.iter().map(PathSpec::piece_count).sum(),
        }
    }

    /// Position and velocity on piece `k` at local parameter `t`.
    pub fn eval_piece(&self, k: usize, t: S) -> (Vec<S>, Vec<S>) {
        match self {
            PathSpec::Geodesic(g) => g.eval(t),
            PathSpec::Ray(r) => r.curve.eval(t),
            PathSpec::Parametrized(c) => (c.0)(t),
            PathSpec::Polyline(pts) => {
                if pts.len() < 2 {
                    let p = pts.first().map(|p| p.coords.clone()).unwrap_or_default();
                    let v = vec![S::zero(); p.len()];
                    return (p, v);
                }
                Geodesic::Straight {
                    a: pts[k].clone(),
                    b: pts[k + 1].clone(),
                }
                .eval(t)
            }
            PathSpec::Reversed(inner) => {
                let m = inner.piece_count();
                let (p, v) = inner.eval_piece(m - 1 - k, S::one() - t);
                (p, v.into_iter().map(|x| -x).collect())
            }
            PathSpec::Concat(parts) => {
                let mut k = k;
                for part in parts {
                    let m = part.piece_count();
                    if k < m {
                        return part.eval_piece(k, t);
                    }
                    k -= m;
                }
                panic!("piece index out of range")
            }
        }
    }

    pub fn start(&self) -> Point<S> {
        Point::new(self.eval_piece(0, S::zero()).0)
    }

    pub fn end(&self) -> Point<S> {
        Point::new(self.eval_piece(self.piece_count() - 1, S::one()).0)
    }

    /// Position at global parameter `t` in `[0, 1]`, pieces sharing it evenly.
    pub fn point_at(&self, t: S) -> Point<S> {
        let m = self.piece_count();
        let scaled = t * S::from_usize_lossy(m);
        let k = scaled.floor().to_usize().unwrap_or(0).min(m - 1);
        let local = scaled - S::from_usize_lossy(k);
        Point::new(self.eval_piece(k, local).0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk() -> ManifoldModel<f64> {
        ManifoldModel::disk()
    }

    #[test]
    fn radial_plane_primitive_formula() {
        let m = ManifoldModel::<f64>::plane(1, PlanePrimitive::Radial);
        let l = m.lambda_at(&Point::new(vec![3.0, 5.0])).unwrap();
        assert_eq!(l.components, vec![-2.5, 1.5]);
    }

    #[test]
    fn liouville_plane_primitive_formula() {
        let m = ManifoldModel::<f64>::plane(2, PlanePrimitive::Liouville);
        let l = m.lambda_at(&Point::new(vec![3.0, 5.0, -1.0, 2.0])).unwrap();
        assert_eq!(l.components, vec![0.0, 3.0, 0.0, -1.0]);
    }

    #[test]
    fn disk_primitive_vanishes_at_basepoint() {
        let l = disk().lambda_at(&Point::new(vec![0.0, 0.0])).unwrap();
        assert_eq!(l.components, vec![0.0, 0.0]);
        let shifted = disk().with_basepoint(Point::new(vec![0.3, -0.2])).unwrap();
        let l = shifted.lambda_at(&Point::new(vec![0.3, -0.2])).unwrap();
        assert!(l.max_abs() < 1e-15);
    }

    #[test]
    fn disk_rejects_points_near_boundary() {
        let err = disk().lambda_at(&Point::new(vec![1.0 - 1e-10, 0.0]));
        assert!(matches!(err, Err(Error::OutOfDomain { .. })));
        assert!(disk().lambda_at(&Point::new(vec![0.999, 0.0])).is_ok());
    }

    #[test]
    fn rejects_wrong_dimension_and_nan() {
        let m = ManifoldModel::<f64>::plane(1, PlanePrimitive::Radial);
        assert!(matches!(
            m.lambda_at(&Point::new(vec![1.0, 2.0, 3.0])),
            Err(Error::Dimension { .. })
        ));
        assert!(m.lambda_at(&Point::new(vec![f64::NAN, 0.0])).is_err());
    }

    #[test]
    fn distances() {
        let plane = ManifoldModel::<f64>::plane(1, PlanePrimitive::Radial);
        let d = plane
            .distance(&Point::new(vec![0.0, 0.0]), &Point::new(vec![3.0, 4.0]))
            .unwrap();
        assert_eq!(d, 5.0);
        let a = Point::new(vec![0.2, 0.1]);
        assert_eq!(disk().distance(&a, &a).unwrap(), 0.0);
        let d = disk()
            .distance(&Point::new(vec![0.0, 0.0]), &Point::new(vec![0.5, 0.0]))
            .unwrap();
        assert!((d - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn plane_geodesic_is_a_segment() {
        let plane = ManifoldModel::<f64>::plane(1, PlanePrimitive::Radial);
        let g = plane
            .geodesic(&Point::new(vec![0.0, 0.0]), &Point::new(vec![1.0, 1.0]))
            .unwrap();
        for t in [0.0, 0.25, 0.6, 1.0] {
            assert_eq!(g.point_at(t).coords, vec![t, t]);
        }
    }

    #[test]
    fn disk_geodesic_through_center_is_a_diameter() {
        let g = disk()
            .geodesic(&Point::new(vec![0.0, 0.0]), &Point::new(vec![0.5, 0.0]))
            .unwrap();
        for i in 0..=10 {
            let p = g.point_at(i as f64 / 10.0);
            assert_eq!(p.coords[1], 0.0);
            assert!(p.coords[0] >= 0.0 && p.coords[0] <= 0.5 + 1e-15);
        }
        assert!((g.end().coords[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn disk_geodesic_lies_on_orthogonal_circle() {
        // The circle through a, b and the inversion of a in the unit circle
        // is orthogonal to the boundary; the geodesic must lie on it.
        let a = Complex::new(0.0f64, 0.5);
        let b = Complex::new(0.5, 0.0);
        let a_inv = a / a.norm_sqr();
        // circumcenter of a, b, a_inv
        let (ax, ay, bx, by, cx, cy) = (a.re, a.im, b.re, b.im, a_inv.re, a_inv.im);
        let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
        let ux = ((ax * ax + ay * ay) * (by - cy)
            + (bx * bx + by * by) * (cy - ay)
            + (cx * cx + cy * cy) * (ay - by))
            / d;
        let uy = ((ax * ax + ay * ay) * (cx - bx)
            + (bx * bx + by * by) * (ax - cx)
            + (cx * cx + cy * cy) * (bx - ax))
            / d;
        let radius = ((ax - ux).powi(2) + (ay - uy).powi(2)).sqrt();
        // orthogonality: |center|^2 = 1 + radius^2
        assert!((ux * ux + uy * uy - 1.0 - radius * radius).abs() < 1e-12);
        let g = disk()
            .geodesic(&Point::new(vec![0.0, 0.5]), &Point::new(vec![0.5, 0.0]))
            .unwrap();
        for i in 0..=20 {
            let p = g.point_at(i as f64 / 20.0);
            let r = ((p.coords[0] - ux).powi(2) + (p.coords[1] - uy).powi(2)).sqrt();
            assert!((r - radius).abs() < 1e-12);
        }
    }

    #[test]
    fn gauss_bonnet_degenerate_and_orientation() {
        let m = disk();
        let a = Point::new(vec![0.1, 0.2]);
        assert_eq!(m.triangle_area_gauss_bonnet(&a, &a, &a).unwrap(), 0.0);
        let b = Point::new(vec![-0.4, 0.3]);
        let c = Point::new(vec![0.2, -0.6]);
        let abc = m.triangle_area_gauss_bonnet(&a, &b, &c).unwrap();
        let acb = m.triangle_area_gauss_bonnet(&a, &c, &b).unwrap();
        assert!(abc.abs() > 0.01);
        assert!((abc + acb).abs() <= 1e-12);
        // collinear along a diameter
        let p = Point::new(vec![-0.3, 0.0]);
        let q = Point::new(vec![0.1, 0.0]);
        let r = Point::new(vec![0.6, 0.0]);
        assert!(m.triangle_area_gauss_bonnet(&p, &q, &r).unwrap().abs() < 1e-15);
    }

    #[test]
    fn near_ideal_equilateral_triangle_approaches_pi() {
        let m = disk();
        let rho = (4.0f64 / 2.0).tanh();
        let pts: Vec<Point<f64>> = (0..3)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                Point::new(vec![rho * t.cos(), rho * t.sin()])
            })
            .collect();
        let area = m
            .triangle_area_gauss_bonnet(&pts[0], &pts[1], &pts[2])
            .unwrap();
        assert!(area < std::f64::consts::PI);
        assert!(std::f64::consts::PI - area < 0.15);
    }

    #[test]
    fn check_dlambda_plane_and_disk() {
        let plane = ManifoldModel::<f64>::plane(2, PlanePrimitive::Radial);
        let r = plane
            .check_dlambda(&Point::new(vec![1.0, -2.0, 0.5, 3.0]), 1e-5)
            .unwrap();
        assert!(r <= 1e-8, "{r}");
        let rho = (0.5f64).tanh(); // r = 1
        let r = disk()
            .check_dlambda(&Point::new(vec![rho * 0.6, rho * 0.8]), 1e-5)
            .unwrap();
        assert!(r <= 1e-6, "{r}");
        let r = disk()
            .check_dlambda(&Point::new(vec![0.0, 0.0]), 1e-5)
            .unwrap();
        assert!(r <= 1e-6, "{r}");
    }

    #[test]
    fn primitive_change_requires_plane() {
        assert!(disk().with_primitive(PlanePrimitive::Liouville).is_err());
    }

    #[test]
    fn reversed_path_swaps_endpoints() {
        let plane = ManifoldModel::<f64>::plane(1, PlanePrimitive::Radial);
        let poly = PathSpec::Polyline(vec![
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![1.0, 0.0]),
            Point::new(vec![1.0, 2.0]),
        ]);
        let rev = poly.clone().reversed();
        assert_eq!(rev.start(), poly.end());
        assert_eq!(rev.end(), poly.start());
        assert_eq!(rev.piece_count(), 2);
        let _ = plane;
    }
}
