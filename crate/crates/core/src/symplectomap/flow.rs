//! Fixed-step RK4 integration of Hamiltonian flows and their variational
//! equations, with step-doubling refinement.

use crate::error::{Error, Result};
use crate::geometry::{ManifoldModel, DISK_EDGE_MARGIN};
use crate::scalar::{max_abs_diff, Scalar};

use super::hamiltonian::HamiltonianSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DifferentialMethod {
    /// Integrate `M' = DX * M` alongside the trajectory.
    Variational,
    /// Richardson-extrapolated central differences of the flow map.
    FiniteDifference,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorSettings<S> {
    /// Initial RK4 step.
    pub step: S,
    /// Two successive refinements (step `2h` and `h`) must agree to this.
    pub agreement: S,
    pub max_halvings: usize,
    pub differential: DifferentialMethod,
    /// Use the closed-form rotation flow for radial autonomous Hamiltonians
    /// on the plane instead of RK4.
    pub exact_radial: bool,
}

impl<S: Scalar> Default for IntegratorSettings<S> {
    fn default() -> Self {
        Self {
            step: S::lit(1e-3),
            agreement: S::lit(1e-8),
            max_halvings: 6,
            differential: DifferentialMethod::Variational,
            exact_radial: false,
        }
    }
}

impl<S: Scalar> IntegratorSettings<S> {
    pub fn with_exact_radial(mut self, on: bool) -> Self {
        self.exact_radial = on;
        self
    }

    pub fn with_differential(mut self, method: DifferentialMethod) -> Self {
        self.differential = method;
        self
    }
}

/// Result of one integration.
#[derive(Clone, Debug)]
pub(crate) struct FlowRun<S> {
    pub point: Vec<S>,
    /// Row-major Jacobian of the flow map, when requested.
    pub jacobian: Option<Vec<S>>,
    /// `(t, z)` at every grid node, when requested.
    pub samples: Vec<(S, Vec<S>)>,
    /// Number of grid intervals per piece, when samples were recorded.
    pub piece_steps: Vec<usize>,
}

/// Scratch buffers for evaluating the vector field without allocation.
struct Workspace<S> {
    grad: Vec<S>,
    hess: Vec<S>,
    dens_grad: Vec<S>,
    dx: Vec<S>,
}

impl<S: Scalar> Workspace<S> {
    fn new(d: usize) -> Self {
        Self {
            grad: vec![S::zero(); d],
            hess: vec![S::zero(); d * d],
            dens_grad: vec![S::zero(); d],
            dx: vec![S::zero(); d * d],
        }
    }
}

/// `X = Omega grad H / rho`, solving `i_X d lambda = dH` for
/// `d lambda = rho * sum dx_i ^ dy_i`.
pub(crate) fn hamiltonian_vector<S: Scalar>(
    model: &ManifoldModel<S>,
    ham: &HamiltonianSpec<S>,
    t: S,
    z: &[S],
    out: &mut [S],
) {
    let mut grad = vec![S::zero(); z.len()];
    ham.gradient_into(t, z, &mut grad);
    let rho = model.density_unchecked(z);
    for i in 0..z.len() / 2 {
        out[2 * i] = grad[2 * i + 1] / rho;
        out[2 * i + 1] = -grad[2 * i] / rho;
    }
}

/// Evaluates the state derivative. `state` holds `z` followed, when
/// `with_jac`, by the row-major matrix `M`.
fn derivative<S: Scalar>(
    model: &ManifoldModel<S>,
    ham: &HamiltonianSpec<S>,
    t: S,
    state: &[S],
    d: usize,
    with_jac: bool,
    ws: &mut Workspace<S>,
    out: &mut [S],
) {
    let z = &state[..d];
    ham.gradient_into(t, z, &mut ws.grad);
    let rho = model.density_unchecked(z);
    for i in 0..d / 2 {
        out[2 * i] = ws.grad[2 * i + 1] / rho;
        out[2 * i + 1] = -ws.grad[2 * i] / rho;
    }
    if !with_jac {
        return;
    }
    ham.hessian_into(t, z, &mut ws.hess);
    model.density_gradient_unchecked(z, &mut ws.dens_grad);
    let inv = S::one() / rho;
    let inv2 = inv * inv;
    // A = Hess / rho - grad (grad rho)^T / rho^2, then DX = Omega A
    for i in 0..d / 2 {
        let (r0, r1) = (2 * i, 2 * i + 1);
        for j in 0..d {
            let a0 = ws.hess[r0 * d + j] * inv - ws.grad[r0] * ws.dens_grad[j] * inv2;
            let a1 = ws.hess[r1 * d + j] * inv - ws.grad[r1] * ws.dens_grad[j] * inv2;
            ws.dx[r0 * d + j] = a1;
            ws.dx[r1 * d + j] = -a0;
        }
    }
    let m = &state[d..];
    let dm = &mut out[d..];
    for i in 0..d {
        for j in 0..d {
            let mut acc = S::zero();
            for k in 0..d {
                acc = acc + ws.dx[i * d + k] * m[k * d + j];
            }
            dm[i * d + j] = acc;
        }
    }
}

/// Splits `[t0, t1]` at the Hamiltonian's breakpoints.
fn pieces<S: Scalar>(ham: &HamiltonianSpec<S>, t0: S, t1: S) -> Vec<(S, S)> {
    let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
    let mut cuts: Vec<S> = ham
        .breakpoints()
        .iter()
        .copied()
        .filter(|b| *b > lo && *b < hi)
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    if t1 < t0 {
        cuts.reverse();
    }
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut a = t0;
    for c in cuts {
        out.push((a, c));
        a = c;
    }
    out.push((a, t1));
    out
}

/// Even number of intervals of length at most `step` covering `len`.
fn even_steps<S: Scalar>(len: S, step: S) -> usize {
    let n = (len.abs() / step).ceil().to_usize().unwrap_or(1).max(1);
    n + n % 2
}

fn escape_check<S: Scalar>(model: &ManifoldModel<S>, t: S, z: &[S]) -> Result<()> {
    let finite = z.iter().all(|x| x.is_finite());
    let outside =
        model.is_disk() && (z[0] * z[0] + z[1] * z[1]).sqrt() > S::one() - S::lit(DISK_EDGE_MARGIN);
    if !finite || outside {
        return Err(Error::DomainEscape {
            time: t.as_f64(),
            coords: z.iter().map(|x| x.as_f64()).collect(),
        });
    }
    Ok(())
}

/// One fixed-grid RK4 run. `coarse` selects the coarse (`2h`) grid of the
/// even step count computed from `step`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn run_fixed<S: Scalar>(
    model: &ManifoldModel<S>,
    ham: &HamiltonianSpec<S>,
    z0: &[S],
    t0: S,
    t1: S,
    step: S,
    coarse: bool,
    with_jac: bool,
    record: bool,
) -> Result<FlowRun<S>> {
    let d = z0.len();
    let len = if with_jac { d + d * d } else { d };
    let mut state = vec![S::zero(); len];
    state[..d].copy_from_slice(z0);
    if with_jac {
        for i in 0..d {
            state[d + i * d + i] = S::one();
        }
    }
    let mut ws = Workspace::new(d);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (
        vec![S::zero(); len],
        vec![S::zero(); len],
        vec![S::zero(); len],
        vec![S::zero(); len],
        vec![S::zero(); len],
    );
    let mut samples = Vec::new();
    let mut piece_steps = Vec::new();
    if record {
        samples.push((t0, z0.to_vec()));
    }
    let half = S::lit(0.5);
    let sixth = S::one() / S::lit(6.0);
    for (a, b) in pieces(ham, t0, t1) {
        let mut n = even_steps(b - a, step);
        if coarse {
            n /= 2;
        }
        piece_steps.push(n);
        let h = (b - a) / S::from_usize_lossy(n);
        // keep stage times strictly inside the piece so that Hamiltonians
        // with a kink at a breakpoint are sampled on the correct side
        let eta = (b - a).abs() * S::lit(1e-12);
        let (lo, hi) = if a <= b {
            (a + eta, b - eta)
        } else {
            (b + eta, a - eta)
        };
        let clamp = |t: S| t.max(lo).min(hi);
        for i in 0..n {
            let t = a + (b - a) * S::from_usize_lossy(i) / S::from_usize_lossy(n);
            derivative(model, ham, clamp(t), &state, d, with_jac, &mut ws, &mut k1);
            for j in 0..len {
                tmp[j] = state[j] + half * h * k1[j];
            }
            derivative(
                model,
                ham,
                clamp(t + half * h),
                &tmp,
                d,
                with_jac,
                &mut ws,
                &mut k2,
            );
            for j in 0..len {
                tmp[j] = state[j] + half * h * k2[j];
            }
            derivative(
                model,
                ham,
                clamp(t + half * h),
                &tmp,
                d,
                with_jac,
                &mut ws,
                &mut k3,
            );
            for j in 0..len {
                tmp[j] = state[j] + h * k3[j];
            }
            derivative(
                model,
                ham,
                clamp(t + h),
                &tmp,
                d,
                with_jac,
                &mut ws,
                &mut k4,
            );
            for j in 0..len {
                state[j] = state[j] + h * sixth * (k1[j] + S::lit(2.0) * (k2[j] + k3[j]) + k4[j]);
            }
            let t_next = t + h;
            escape_check(model, t_next, &state[..d])?;
            if record {
                samples.push((t_next, state[..d].to_vec()));
            }
        }
    }
    Ok(FlowRun {
        point: state[..d].to_vec(),
        jacobian: with_jac.then(|| state[d..].to_vec()),
        samples,
        piece_steps,
    })
}

/// Integrates from `t0` to `t1`, halving the step until the runs at `2h`
/// and `h` agree within `settings.agreement` (point and Jacobian).
pub(crate) fn integrate<S: Scalar>(
    model: &ManifoldModel<S>,
    ham: &HamiltonianSpec<S>,
    z0: &[S],
    t0: S,
    t1: S,
    settings: &IntegratorSettings<S>,
    with_jac: bool,
) -> Result<FlowRun<S>> {
    escape_check(model, t0, z0)?;
    let mut step = settings.step;
    let mut difference = S::infinity();
    for _ in 0..=settings.max_halvings {
        let coarse = run_fixed(model, ham, z0, t0, t1, step, true, with_jac, false)?;
        let fine = run_fixed(model, ham, z0, t0, t1, step, false, with_jac, false)?;
        difference = max_abs_diff(&coarse.point, &fine.point);
        if let (Some(a), Some(b)) = (&coarse.jacobian, &fine.jacobian) {
            difference = difference.max(max_abs_diff(a, b));
        }
        if difference <= settings.agreement {
            return Ok(fine);
        }
        step = step * S::lit(0.5);
    }
    Err(Error::IntegratorNonConvergence {
        difference: difference.as_f64(),
    })
}

/// Closed-form flow of a radial autonomous Hamiltonian on the plane: each
/// coordinate pair rotates about the centre by `rate(r^2) * time`.
pub(crate) fn radial_flow<S: Scalar>(
    ham: &HamiltonianSpec<S>,
    z: &[S],
    time: S,
    with_jac: bool,
) -> Option<(Vec<S>, Option<Vec<S>>)> {
    let twist = ham.radial()?;
    if !ham.is_autonomous() {
        return None;
    }
    let d = z.len();
    let c = &twist.center.coords;
    let rel: Vec<S> = z.iter().zip(c).map(|(a, b)| *a - *b).collect();
    let r2 = rel.iter().fold(S::zero(), |acc, x| acc + *x * *x);
    let (rate, drate) = (twist.rate)(r2);
    let theta = rate * time;
    let (sn, cs) = theta.sin_cos();
    let mut out = vec![S::zero(); d];
    let mut turned = vec![S::zero(); d];
    for i in 0..d / 2 {
        let (u, v) = (rel[2 * i], rel[2 * i + 1]);
        let (ru, rv) = (cs * u - sn * v, sn * u + cs * v);
        out[2 * i] = c[2 * i] + ru;
        out[2 * i + 1] = c[2 * i + 1] + rv;
        turned[2 * i] = -rv;
        turned[2 * i + 1] = ru;
    }
    if !with_jac {
        return Some((out, None));
    }
    let mut jac = vec![S::zero(); d * d];
    for i in 0..d / 2 {
        let (r0, r1) = (2 * i, 2 * i + 1);
        jac[r0 * d + r0] = cs;
        jac[r0 * d + r1] = -sn;
        jac[r1 * d + r0] = sn;
        jac[r1 * d + r1] = cs;
    }
    let k = S::lit(2.0) * time * drate;
    for i in 0..d {
        for j in 0..d {
            jac[i * d + j] = jac[i * d + j] + turned[i] * k * rel[j];
        }
    }
    Some((out, Some(jac)))
}

/// Richardson-extrapolated central-difference Jacobian of `f` at `z`.
pub(crate) fn fd_jacobian<S: Scalar, F>(f: F, z: &[S], step: S) -> Result<Vec<S>>
where
    F: Fn(&[S]) -> Result<Vec<S>>,
{
    let d = z.len();
    let central = |h: S| -> Result<Vec<S>> {
        let mut jac = vec![S::zero(); d * d];
        let mut probe = z.to_vec();
        for j in 0..d {
            probe[j] = z[j] + h;
            let fp = f(&probe)?;
            probe[j] = z[j] - h;
            let fm = f(&probe)?;
            probe[j] = z[j];
            for i in 0..d {
                jac[i * d + j] = (fp[i] - fm[i]) / (S::lit(2.0) * h);
            }
        }
        Ok(jac)
    };
    let coarse = central(step)?;
    let fine = central(step * S::lit(0.5))?;
    Ok(fine
        .iter()
        .zip(&coarse)
        .map(|(a, b)| (S::lit(4.0) * *a - *b) / S::lit(3.0))
        .collect())
}
