//! Seeded samplers for points and maps of each family, shared by the test
//! suites and the command-line scenarios.

use num_complex::Complex;
use rand::Rng;

use crate::error::Result;
use crate::geometry::{ManifoldModel, Point};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::symplectomap::{BaseDiffeo, HamiltonianSpec, IntegratorSettings, Moebius, SympMap};

/// Uniform point in the cube `[-scale, scale]^dim`.
pub fn plane_point<S: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> Point<S> {
    Point::new(
        (0..dim)
            .map(|_| S::lit(rng.gen_range(-scale..=scale)))
            .collect(),
    )
}

/// Point of the disk with `|z| <= max_radius`, uniform in area.
pub fn disk_point<S: Scalar, R: Rng + ?Sized>(rng: &mut R, max_radius: f64) -> Point<S> {
    let r = max_radius * rng.gen::<f64>().sqrt();
    let a = rng.gen_range(0.0..std::f64::consts::TAU);
    Point::new(vec![S::lit(r * a.cos()), S::lit(r * a.sin())])
}

pub fn translation<S: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> SympMap<S> {
    SympMap::translation(plane_point::<S, R>(rng, dim, scale).coords)
}

/// Random `SL(2)` block on each coordinate pair, coupled across pairs by a
/// symmetric shear, plus a translation.
pub fn affine<S: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    scale: f64,
) -> Result<SympMap<S>> {
    let n = dim / 2;
    let mut blocks = Matrix::<S>::zeros(dim, dim);
    for i in 0..n {
        let (t1, t2) = (
            rng.gen_range(0.0..std::f64::consts::TAU),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let s: f64 = rng.gen_range(-0.5..0.5);
        let (c1, s1, c2, s2) = (t1.cos(), t1.sin(), t2.cos(), t2.sin());
        let (e, f) = (s.exp(), (-s).exp());
        // R(t1) diag(e, 1/e) R(t2)
        let m = [
            [c1 * e * c2 - s1 * f * s2, -c1 * e * s2 - s1 * f * c2],
            [s1 * e * c2 + c1 * f * s2, -s1 * e * s2 + c1 * f * c2],
        ];
        for r in 0..2 {
            for c in 0..2 {
                blocks[(2 * i + r, 2 * i + c)] = S::lit(m[r][c]);
            }
        }
    }
    // y_i += sum_j s_ij x_j with s symmetric keeps the form
    let mut shear = Matrix::<S>::identity(dim);
    for i in 0..n {
        for j in i..n {
            let v = S::lit(rng.gen_range(-0.3..0.3));
            shear[(2 * i + 1, 2 * j)] = shear[(2 * i + 1, 2 * j)] + v;
            if i != j {
                shear[(2 * j + 1, 2 * i)] = shear[(2 * j + 1, 2 * i)] + v;
            }
        }
    }
    let t = plane_point::<S, R>(rng, dim, scale).coords;
    SympMap::affine(&shear * &blocks, t)
}

/// `transvection(w) o rotation(theta)` with `|w| <= max_radius`.
pub fn moebius<S: Scalar, R: Rng + ?Sized>(rng: &mut R, max_radius: f64) -> Result<SympMap<S>> {
    let w = disk_point::<S, R>(rng, max_radius);
    let theta = S::lit(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
    let m = Moebius::transvection(Complex::new(w.coords[0], w.coords[1]))?
        .compose(&Moebius::rotation(theta));
    Ok(SympMap::moebius(m))
}

/// Ranges for a random compactly supported bump.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpRanges {
    pub center_scale: f64,
    pub radius: (f64, f64),
    pub amplitude: (f64, f64),
}

impl Default for BumpRanges {
    fn default() -> Self {
        Self {
            center_scale: 1.0,
            radius: (0.5, 1.5),
            amplitude: (-1.0, 1.0),
        }
    }
}

pub fn bump_hamiltonian<S: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    ranges: &BumpRanges,
) -> HamiltonianSpec<S> {
    let c = plane_point::<S, R>(rng, dim, ranges.center_scale);
    let r = rng.gen_range(ranges.radius.0..=ranges.radius.1);
    let a = rng.gen_range(ranges.amplitude.0..=ranges.amplitude.1);
    HamiltonianSpec::bump(c, S::lit(r), S::lit(a))
}

/// Time-one map of a random bump on the plane model.
pub fn bump_flow<S: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    model: &ManifoldModel<S>,
    ranges: &BumpRanges,
    settings: IntegratorSettings<S>,
) -> Result<SympMap<S>> {
    let h = bump_hamiltonian(rng, model.dim(), ranges);
    SympMap::compact_bump(model.clone(), h, S::one(), settings)
}

/// Cotangent lift on `T^* R` of an increasing affine map or a warp.
pub fn cotangent_lift<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Result<SympMap<S>> {
    let base = if rng.gen_bool(0.5) {
        let b = rng.gen_range(0.5..2.0);
        let c = rng.gen_range(-1.0..1.0);
        BaseDiffeo::affine(Matrix::from_rows(&[vec![S::lit(b)]]), vec![S::lit(c)])?
    } else {
        let rate = rng.gen_range(0.5..2.0);
        let amp = rng.gen_range(-0.9..0.9) / rate;
        BaseDiffeo::warp(S::lit(amp), S::lit(rate))?
    };
    Ok(SympMap::cotangent_lift(base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PlanePrimitive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samplers_produce_symplectic_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let plane = ManifoldModel::<f64>::plane(2, PlanePrimitive::Radial);
        for _ in 0..10 {
            let a = affine::<f64, _>(&mut rng, 4, 1.0).unwrap();
            let p = plane_point(&mut rng, 4, 1.0);
            assert!(a.verify_symplectic(&plane, &p).unwrap() < 1e-12);
        }
        let disk = ManifoldModel::<f64>::disk();
        for _ in 0..10 {
            let m = moebius::<f64, _>(&mut rng, 0.8).unwrap();
            let p: Point<f64> = disk_point(&mut rng, 0.9);
            assert!(p.coords[0].hypot(p.coords[1]) <= 0.9);
            assert!(m.verify_symplectic(&disk, &p).unwrap() < 1e-10);
        }
    }

    #[test]
    fn samplers_are_reproducible() {
        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let h = bump_hamiltonian::<f64, _>(&mut rng, 2, &BumpRanges::default());
            let c = cotangent_lift::<f64, _>(&mut rng).unwrap();
            let p = Point::new(vec![0.2, 0.1]);
            (h.value(0.0, &[0.1, 0.1]), c.apply(&p).unwrap())
        };
        assert_eq!(draw(), draw());
    }
}
