//! Orientation-preserving isometries of the Poincare disk, represented by
//! matrices `[[a, b], [conj b, conj a]]` with `|a|^2 - |b|^2 = 1`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moebius<S> {
    a: Complex<S>,
    b: Complex<S>,
}

impl<S: Scalar> Moebius<S> {
    pub fn identity() -> Self {
        Self {
            a: Complex::new(S::one(), S::zero()),
            b: Complex::new(S::zero(), S::zero()),
        }
    }

    /// `z -> (a z + b) / (conj(b) z + conj(a))`, rescaled so that
    /// `|a|^2 - |b|^2 = 1`. Requires `|a| > |b|`.
    pub fn new(a: Complex<S>, b: Complex<S>) -> Result<Self> {
        let det = a.norm_sqr() - b.norm_sqr();
        if !(det > S::zero()) {
            return Err(Error::Precondition(
                "Moebius coefficients must satisfy |a| > |b|".into(),
            ));
        }
        let k = det.sqrt();
        Ok(Self { a: a / k, b: b / k })
    }

    /// Accepts any complex 2x2 matrix proportional to an element of SU(1,1).
    pub fn from_matrix(m: [[Complex<S>; 2]; 2]) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.norm() == S::zero() {
            return Err(Error::Precondition("singular Moebius matrix".into()));
        }
        let k = det.sqrt();
        let n = [[m[0][0] / k, m[0][1] / k], [m[1][0] / k, m[1][1] / k]];
        let tol = S::lit(1e-10) * (S::one() + n[0][0].norm() + n[0][1].norm());
        if (n[1][0] - n[0][1].conj()).norm() > tol || (n[1][1] - n[0][0].conj()).norm() > tol {
            return Err(Error::Precondition(
                "matrix does not preserve the unit disk".into(),
            ));
        }
        Self::new(n[0][0], n[0][1])
    }

    /// Rotation by `theta` about the origin.
    pub fn rotation(theta: S) -> Self {
        let half = S::lit(0.5) * theta;
        Self {
            a: Complex::new(half.cos(), half.sin()),
            b: Complex::new(S::zero(), S::zero()),
        }
    }

    /// Hyperbolic transvection along the diameter through `w`, sending the
    /// origin to `w`. Requires `|w| < 1`.
    pub fn transvection(w: Complex<S>) -> Result<Self> {
        let q = S::one() - w.norm_sqr();
        if !(q > S::zero()) {
            return Err(Error::Precondition(
                "transvection target must lie in the disk".into(),
            ));
        }
        let s = q.sqrt();
        Ok(Self {
            a: Complex::new(S::one() / s, S::zero()),
            b: w / s,
        })
    }

    pub fn coefficients(&self) -> (Complex<S>, Complex<S>) {
        (self.a, self.b)
    }

    pub fn matrix(&self) -> [[Complex<S>; 2]; 2] {
        [[self.a, self.b], [self.b.conj(), self.a.conj()]]
    }

    pub fn apply(&self, z: Complex<S>) -> Complex<S> {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    /// Complex derivative `1 / (conj(b) z + conj(a))^2`.
    pub fn derivative(&self, z: Complex<S>) -> Complex<S> {
        let den = self.b.conj() * z + self.a.conj();
        Complex::new(S::one(), S::zero()) / (den * den)
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    /// `self o other`.
    pub fn compose(&self, other: &Self) -> Self {
        // [[a, b], [b*, a*]] [[c, d], [d*, c*]]
        let (a, b, c, d) = (self.a, self.b, other.a, other.b);
        Self {
            a: a * c + b * d.conj(),
            b: a * d + b * c.conj(),
        }
    }
}
