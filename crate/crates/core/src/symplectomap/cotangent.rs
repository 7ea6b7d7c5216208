//! Cotangent lifts of diffeomorphisms of `R^n` to `T*R^n`.
//!
//! Coordinates are interleaved `(q_1, p_1, ..., q_n, p_n)`, so the lift
//! lives on the plane model with `x = q`, `y = p`. The lift of `phi` is
//! `(q, p) -> (phi(q), D phi(q)^{-T} p)`; it maps the zero section to itself.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum BaseDiffeo<S> {
    /// `q -> B q + c`.
    Affine {
        b: Matrix<S>,
        b_inv: Matrix<S>,
        c: Vec<S>,
    },
    /// `q_i -> q_i + amp * tanh(rate * q_i)` coordinatewise (or its inverse
    /// when `inverted`). Requires `amp * rate > -1`.
    Warp { amp: S, rate: S, inverted: bool },
}

impl<S: Scalar> BaseDiffeo<S> {
    pub fn affine(b: Matrix<S>, c: Vec<S>) -> Result<Self> {
        if b.rows() != b.cols() || b.rows() != c.len() {
            return Err(Error::Dimension {
                expected: b.rows(),
                found: c.len(),
            });
        }
        let b_inv = b
            .inverse()
            .ok_or_else(|| Error::Precondition("base linear part is singular".into()))?;
        Ok(BaseDiffeo::Affine { b, b_inv, c })
    }

    pub fn warp(amp: S, rate: S) -> Result<Self> {
        if !(amp * rate > -S::one()) {
            return Err(Error::Precondition(
                "warp needs amp * rate > -1 to stay monotone".into(),
            ));
        }
        Ok(BaseDiffeo::Warp {
            amp,
            rate,
            inverted: false,
        })
    }

    pub fn inverse(&self) -> Self {
        match self {
            BaseDiffeo::Affine { b, b_inv, c } => {
                let c_inv = b_inv.mul_vec(c).into_iter().map(|x| -x).collect();
                BaseDiffeo::Affine {
                    b: b_inv.clone(),
                    b_inv: b.clone(),
                    c: c_inv,
                }
            }
            BaseDiffeo::Warp {
                amp,
                rate,
                inverted,
            } => BaseDiffeo::Warp {
                amp: *amp,
                rate: *rate,
                inverted: !*inverted,
            },
        }
    }
}

/// `(phi, phi', phi'')` of the forward warp at `q`.
fn warp_forward<S: Scalar>(amp: S, rate: S, q: S) -> (S, S, S) {
    let th = (rate * q).tanh();
    let sech2 = S::one() - th * th;
    (
        q + amp * th,
        S::one() + amp * rate * sech2,
        -S::lit(2.0) * amp * rate * rate * sech2 * th,
    )
}

/// Value, first and second derivative of one warp coordinate.
fn warp_coordinate<S: Scalar>(amp: S, rate: S, inverted: bool, q: S) -> (S, S, S) {
    if !inverted {
        return warp_forward(amp, rate, q);
    }
    // Newton on phi(x) = q; phi is increasing with phi' >= min(1, 1 + amp rate)
    let mut x = q;
    for _ in 0..100 {
        let (v, d, _) = warp_forward(amp, rate, x);
        let dx = (v - q) / d;
        x = x - dx;
        if dx.abs() <= S::epsilon() * (S::one() + x.abs()) {
            break;
        }
    }
    let (_, d, dd) = warp_forward(amp, rate, x);
    (x, S::one() / d, -dd / (d * d * d))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CotangentLift<S> {
    base: BaseDiffeo<S>,
}

impl<S: Scalar> CotangentLift<S> {
    pub fn new(base: BaseDiffeo<S>) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &BaseDiffeo<S> {
        &self.base
    }

    pub fn inverse(&self) -> Self {
        Self {
            base: self.base.inverse(),
        }
    }

    /// Phase-space dimension `2n`, when fixed by the base map.
    pub fn dim(&self) -> Option<usize> {
        match &self.base {
            BaseDiffeo::Affine { c, .. } => Some(2 * c.len()),
            BaseDiffeo::Warp { .. } => None,
        }
    }

    pub fn apply_with_jacobian(&self, z: &[S]) -> (Vec<S>, Matrix<S>) {
        let d = z.len();
        let n = d / 2;
        let mut out = vec![S::zero(); d];
        let mut jac = Matrix::zeros(d, d);
        match &self.base {
            BaseDiffeo::Affine { b, b_inv, c } => {
                let q: Vec<S> = (0..n).map(|i| z[2 * i]).collect();
                let p: Vec<S> = (0..n).map(|i| z[2 * i + 1]).collect();
                let qn = b.mul_vec(&q);
                // B^{-T} p
                let pn = b_inv.vec_mul(&p);
                for i in 0..n {
                    out[2 * i] = qn[i] + c[i];
                    out[2 * i + 1] = pn[i];
                    for j in 0..n {
                        jac[(2 * i, 2 * j)] = b[(i, j)];
                        jac[(2 * i + 1, 2 * j + 1)] = b_inv[(j, i)];
                    }
                }
            }
            BaseDiffeo::Warp {
                amp,
                rate,
                inverted,
            } => {
                for i in 0..n {
                    let (q, p) = (z[2 * i], z[2 * i + 1]);
                    let (v, d1, d2) = warp_coordinate(*amp, *rate, *inverted, q);
                    out[2 * i] = v;
                    out[2 * i + 1] = p / d1;
                    jac[(2 * i, 2 * i)] = d1;
                    jac[(2 * i + 1, 2 * i)] = -p * d2 / (d1 * d1);
                    jac[(2 * i + 1, 2 * i + 1)] = S::one() / d1;
                }
            }
        }
        (out, jac)
    }
}
