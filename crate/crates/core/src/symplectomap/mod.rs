//! Symplectic diffeomorphisms as a tagged union of map families.

mod cotangent;
mod flow;
mod hamiltonian;
mod moebius;

use std::sync::Arc;

use num_complex::Complex;

pub use cotangent::{BaseDiffeo, CotangentLift};
pub(crate) use flow::{hamiltonian_vector, run_fixed};
pub use flow::{DifferentialMethod, IntegratorSettings};
pub use hamiltonian::{
    FieldFn, HamiltonianSpec, RadialTwist, RateFn, Reparametrization, Support, ValueFn,
};
pub use moebius::Moebius;

use crate::error::{Error, Result};
use crate::geometry::{check_in_disk, Covector, ManifoldModel, Point};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// `z -> A z + t` with `A^T Omega A = Omega`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSymplectic<S> {
    a: Matrix<S>,
    t: Vec<S>,
}

impl<S: Scalar> AffineSymplectic<S> {
    pub fn new(a: Matrix<S>, t: Vec<S>) -> Result<Self> {
        if a.rows() != a.cols() || a.rows() != t.len() || t.len() % 2 != 0 {
            return Err(Error::Dimension {
                expected: a.rows(),
                found: t.len(),
            });
        }
        let om = Matrix::standard_symplectic(t.len());
        let residual = (&(&a.transpose() * &om) * &a).max_abs_diff(&om);
        if !(residual <= S::lit(1e-10) * (S::one() + a.max_abs() * a.max_abs())) {
            return Err(Error::Precondition(format!(
                "linear part is not symplectic (residual {})",
                residual.as_f64()
            )));
        }
        Ok(Self { a, t })
    }

    pub fn translation(t: Vec<S>) -> Self {
        Self {
            a: Matrix::identity(t.len()),
            t,
        }
    }

    pub fn linear(&self) -> &Matrix<S> {
        &self.a
    }

    pub fn shift(&self) -> &[S] {
        &self.t
    }

    /// `A^{-1} = -Omega A^T Omega`, `t' = -A^{-1} t`.
    pub fn inverse(&self) -> Self {
        let om = Matrix::standard_symplectic(self.t.len());
        let inv = (&(&om * &self.a.transpose()) * &om).scaled(-S::one());
        let t = inv.mul_vec(&self.t).into_iter().map(|x| -x).collect();
        Self { a: inv, t }
    }
}

/// Time-`time` map of a Hamiltonian flow on a model.
#[derive(Clone, Debug)]
pub struct FlowMap<S> {
    model: ManifoldModel<S>,
    hamiltonian: Arc<HamiltonianSpec<S>>,
    time: S,
    settings: IntegratorSettings<S>,
}

impl<S: Scalar> FlowMap<S> {
    pub fn new(
        model: ManifoldModel<S>,
        hamiltonian: HamiltonianSpec<S>,
        time: S,
        settings: IntegratorSettings<S>,
    ) -> Result<Self> {
        if hamiltonian.dim() != model.dim() {
            return Err(Error::Dimension {
                expected: model.dim(),
                found: hamiltonian.dim(),
            });
        }
        Ok(Self {
            model,
            hamiltonian: Arc::new(hamiltonian),
            time,
            settings,
        })
    }

    pub fn model(&self) -> &ManifoldModel<S> {
        &self.model
    }

    pub fn hamiltonian(&self) -> &HamiltonianSpec<S> {
        &self.hamiltonian
    }

    pub fn time(&self) -> S {
        self.time
    }

    pub fn settings(&self) -> &IntegratorSettings<S> {
        &self.settings
    }

    fn outside_support(&self, z: &[S]) -> bool {
        self.hamiltonian.support().is_some_and(|s| !s.contains(z))
    }

    fn closed_form(&self) -> bool {
        self.settings.exact_radial && !self.model.is_disk()
    }

    fn apply_point(&self, z: &[S]) -> Result<Vec<S>> {
        if self.outside_support(z) {
            return Ok(z.to_vec());
        }
        if self.closed_form() {
            if let Some((p, _)) = flow::radial_flow(&self.hamiltonian, z, self.time, false) {
                return Ok(p);
            }
        }
        flow::integrate(
            &self.model,
            &self.hamiltonian,
            z,
            S::zero(),
            self.time,
            &self.settings,
            false,
        )
        .map(|r| r.point)
    }

    fn apply_jacobian(&self, z: &[S]) -> Result<(Vec<S>, Matrix<S>)> {
        let d = z.len();
        if self.outside_support(z) {
            return Ok((z.to_vec(), Matrix::identity(d)));
        }
        if self.closed_form() {
            if let Some((p, Some(j))) = flow::radial_flow(&self.hamiltonian, z, self.time, true) {
                return Ok((p, Matrix::from_row_major(d, d, j)));
            }
        }
        match self.settings.differential {
            DifferentialMethod::Variational => {
                let run = flow::integrate(
                    &self.model,
                    &self.hamiltonian,
                    z,
                    S::zero(),
                    self.time,
                    &self.settings,
                    true,
                )?;
                let jac = run.jacobian.expect("variational run carries a Jacobian");
                Ok((run.point, Matrix::from_row_major(d, d, jac)))
            }
            DifferentialMethod::FiniteDifference => {
                let p = self.apply_point(z)?;
                let jac = flow::fd_jacobian(|q| self.apply_point(q), z, S::lit(1e-6))?;
                Ok((p, Matrix::from_row_major(d, d, jac)))
            }
        }
    }

    /// Flow of the time-reversed Hamiltonian over the same interval.
    pub fn inverse(&self) -> Self {
        Self {
            model: self.model.clone(),
            hamiltonian: Arc::new(self.hamiltonian.time_reversed(self.time)),
            time: self.time,
            settings: self.settings,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SympMap<S> {
    Identity,
    Affine(AffineSymplectic<S>),
    Moebius(Moebius<S>),
    Flow(FlowMap<S>),
    CotangentLift(CotangentLift<S>),
    /// Flow of a Hamiltonian with a declared compact support.
    CompactBump(FlowMap<S>),
    /// Factors applied right to left: `Word([f, g])` is `f o g`.
    Word(Vec<SympMap<S>>),
}

impl<S: Scalar> SympMap<S> {
    pub fn identity() -> Self {
        SympMap::Identity
    }

    pub fn translation(t: Vec<S>) -> Self {
        SympMap::Affine(AffineSymplectic::translation(t))
    }

    pub fn affine(a: Matrix<S>, t: Vec<S>) -> Result<Self> {
        AffineSymplectic::new(a, t).map(SympMap::Affine)
    }

    pub fn moebius(m: Moebius<S>) -> Self {
        SympMap::Moebius(m)
    }

    pub fn flow(
        model: ManifoldModel<S>,
        hamiltonian: HamiltonianSpec<S>,
        time: S,
        settings: IntegratorSettings<S>,
    ) -> Result<Self> {
        FlowMap::new(model, hamiltonian, time, settings).map(SympMap::Flow)
    }

    /// Flow of a compactly supported Hamiltonian; fails without a support
    /// descriptor.
    pub fn compact_bump(
        model: ManifoldModel<S>,
        hamiltonian: HamiltonianSpec<S>,
        time: S,
        settings: IntegratorSettings<S>,
    ) -> Result<Self> {
        if hamiltonian.support().is_none() {
            return Err(Error::Precondition(
                "compact bump needs a Hamiltonian with a support descriptor".into(),
            ));
        }
        FlowMap::new(model, hamiltonian, time, settings).map(SympMap::CompactBump)
    }

    pub fn cotangent_lift(base: BaseDiffeo<S>) -> Self {
        SympMap::CotangentLift(CotangentLift::new(base))
    }

    pub fn word(factors: Vec<SympMap<S>>) -> Self {
        SympMap::Word(factors)
    }

    /// `self o other`.
    pub fn compose(&self, other: &Self) -> Self {
        SympMap::Word(vec![self.clone(), other.clone()])
    }

    /// `self^n`; negative powers use the inverse.
    pub fn power(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Ok(SympMap::Identity);
        }
        let base = if n > 0 { self.clone() } else { self.inverse()? };
        Ok(SympMap::Word(vec![base; n.unsigned_abs() as usize]))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(match self {
            SympMap::Identity => SympMap::Identity,
            SympMap::Affine(a) => SympMap::Affine(a.inverse()),
            SympMap::Moebius(m) => SympMap::Moebius(m.inverse()),
            SympMap::Flow(f) => SympMap::Flow(f.inverse()),
            SympMap::CompactBump(f) => SympMap::CompactBump(f.inverse()),
            SympMap::CotangentLift(c) => SympMap::CotangentLift(c.inverse()),
            SympMap::Word(fs) => SympMap::Word(
                fs.iter()
                    .rev()
                    .map(SympMap::inverse)
                    .collect::<Result<Vec<_>>>()?,
            ),
        })
    }

    /// The flow data of a Hamiltonian map.
    pub fn as_flow(&self) -> Option<&FlowMap<S>> {
        match self {
            SympMap::Flow(f) | SympMap::CompactBump(f) => Some(f),
            _ => None,
        }
    }

    /// Collapses identities, disk isometries and words of them into one
    /// Moebius map.
    pub fn as_moebius(&self) -> Option<Moebius<S>> {
        match self {
            SympMap::Identity => Some(Moebius::identity()),
            SympMap::Moebius(m) => Some(*m),
            SympMap::Word(fs) => fs.iter().try_fold(Moebius::identity(), |acc, f| {
                Some(acc.compose(&f.as_moebius()?))
            }),
            _ => None,
        }
    }

    /// Chart balls outside of which the map is the identity, when known.
    /// `Some(vec![])` means the identity map.
    pub fn supports(&self) -> Option<Vec<Support<S>>> {
        match self {
            SympMap::Identity => Some(Vec::new()),
            SympMap::Flow(f) | SympMap::CompactBump(f) => {
                f.hamiltonian().support().map(|s| vec![s.clone()])
            }
            SympMap::Word(fs) => {
                let mut all = Vec::new();
                for f in fs {
                    all.extend(f.supports()?);
                }
                Some(all)
            }
            _ => None,
        }
    }

    fn check_input(&self, p: &Point<S>) -> Result<()> {
        if !p.is_finite() {
            return Err(Error::OutOfDomain {
                coords: p.to_f64(),
                reason: "non-finite coordinate".into(),
            });
        }
        let expected = match self {
            SympMap::Affine(a) => Some(a.t.len()),
            SympMap::Moebius(_) => Some(2),
            SympMap::Flow(f) | SympMap::CompactBump(f) => Some(f.model.dim()),
            SympMap::CotangentLift(c) => c.dim(),
            SympMap::Identity | SympMap::Word(_) => None,
        };
        if let Some(e) = expected {
            if e != p.dim() {
                return Err(Error::Dimension {
                    expected: e,
                    found: p.dim(),
                });
            }
        }
        if p.dim() % 2 != 0 {
            return Err(Error::Dimension {
                expected: p.dim() + 1,
                found: p.dim(),
            });
        }
        match self {
            SympMap::Moebius(_) => check_in_disk(p),
            SympMap::Flow(f) | SympMap::CompactBump(f) => f.model.check_point(p),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, p: &Point<S>) -> Result<Point<S>> {
        self.check_input(p)?;
        Ok(match self {
            SympMap::Identity => p.clone(),
            SympMap::Affine(a) => Point::new(
                a.a.mul_vec(&p.coords)
                    .into_iter()
                    .zip(&a.t)
                    .map(|(x, t)| x + *t)
                    .collect(),
            ),
            SympMap::Moebius(m) => Point::from_complex(m.apply(p.to_complex())),
            SympMap::Flow(f) | SympMap::CompactBump(f) => Point::new(f.apply_point(&p.coords)?),
            SympMap::CotangentLift(c) => Point::new(c.apply_with_jacobian(&p.coords).0),
            SympMap::Word(fs) => {
                let mut q = p.clone();
                for f in fs.iter().rev() {
                    q = f.apply(&q)?;
                }
                q
            }
        })
    }

    /// Image point and Jacobian `Dg_p`.
    pub fn apply_with_differential(&self, p: &Point<S>) -> Result<(Point<S>, Matrix<S>)> {
        self.check_input(p)?;
        let d = p.dim();
        Ok(match self {
            SympMap::Identity => (p.clone(), Matrix::identity(d)),
            SympMap::Affine(_) => (self.apply(p)?, self.as_affine_linear()),
            SympMap::Moebius(m) => {
                let z = p.to_complex();
                let w = m.apply(z);
                let dz: Complex<S> = m.derivative(z);
                let jac = Matrix::from_rows(&[vec![dz.re, -dz.im], vec![dz.im, dz.re]]);
                (Point::from_complex(w), jac)
            }
            SympMap::Flow(f) | SympMap::CompactBump(f) => {
                let (q, j) = f.apply_jacobian(&p.coords)?;
                (Point::new(q), j)
            }
            SympMap::CotangentLift(c) => {
                let (q, j) = c.apply_with_jacobian(&p.coords);
                (Point::new(q), j)
            }
            SympMap::Word(fs) => {
                let mut q = p.clone();
                let mut jac = Matrix::identity(d);
                for f in fs.iter().rev() {
                    let (next, j) = f.apply_with_differential(&q)?;
                    jac = &j * &jac;
                    q = next;
                }
                (q, jac)
            }
        })
    }

    fn as_affine_linear(&self) -> Matrix<S> {
        match self {
            SympMap::Affine(a) => a.a.clone(),
            _ => unreachable!("only called on affine maps"),
        }
    }

    pub fn differential(&self, p: &Point<S>) -> Result<Matrix<S>> {
        self.apply_with_differential(p).map(|(_, j)| j)
    }

    /// `(g^* lambda)_p = lambda_{g(p)} o Dg_p`.
    pub fn pullback_lambda(&self, model: &ManifoldModel<S>, p: &Point<S>) -> Result<Covector<S>> {
        model.check_point(p)?;
        let (q, jac) = self.apply_with_differential(p)?;
        let lam = model.lambda_at(&q)?;
        Ok(Covector::new(jac.vec_mul(&lam.components)))
    }

    /// `(g^* lambda - lambda)_p`.
    pub fn pullback_delta_lambda(
        &self,
        model: &ManifoldModel<S>,
        p: &Point<S>,
    ) -> Result<Covector<S>> {
        let pulled = self.pullback_lambda(model, p)?;
        Ok(pulled.sub(&model.lambda_unchecked(&p.coords)))
    }

    /// `max |Dg^T Omega(g(p)) Dg - Omega(p)|`.
    pub fn verify_symplectic(&self, model: &ManifoldModel<S>, p: &Point<S>) -> Result<S> {
        model.check_point(p)?;
        let (q, jac) = self.apply_with_differential(p)?;
        let pulled = &(&jac.transpose() * &model.symplectic_matrix(&q)) * &jac;
        Ok(pulled.max_abs_diff(&model.symplectic_matrix(p)))
    }
}
