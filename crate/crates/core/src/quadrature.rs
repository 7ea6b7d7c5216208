//! Line integrals of one-forms along paths by adaptive Gauss-Legendre
//! quadrature, and the action integral along Hamiltonian trajectories.

use crate::error::{Error, Result};
use crate::geometry::{Covector, ManifoldModel, PathSpec, Point};
use crate::scalar::{max_abs_diff, Scalar};
use crate::symplectomap::{hamiltonian_vector, run_fixed, HamiltonianSpec, IntegratorSettings};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const MAX_DEPTH: usize = 24;

const GL10_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL10_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982_0,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralResult<S> {
    pub value: S,
    pub error_estimate: S,
    pub panels_used: usize,
}

struct Accumulator<S> {
    value: S,
    error: S,
    panels: usize,
    exhausted: bool,
}

struct Rule<S> {
    nodes: [S; 5],
    weights: [S; 5],
}

impl<S: Scalar> Rule<S> {
    fn new() -> Self {
        Self {
            nodes: GL10_NODES.map(S::lit),
            weights: GL10_WEIGHTS.map(S::lit),
        }
    }

    /// Panel integral and the integral of `|f|`, which scales the
    /// round-off floor.
    fn panel<F>(&self, f: &F, a: S, b: S) -> Result<(S, S)>
    where
        F: Fn(S) -> Result<S>,
    {
        let mid = S::lit(0.5) * (a + b);
        let half = S::lit(0.5) * (b - a);
        let (mut acc, mut mag) = (S::zero(), S::zero());
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let (l, r) = (f(mid - half * *x)?, f(mid + half * *x)?);
            acc = acc + *w * (l + r);
            mag = mag + *w * (l.abs() + r.abs());
        }
        Ok((acc * half, mag * half.abs()))
    }
}

fn refine<S: Scalar, F>(
    rule: &Rule<S>,
    f: &F,
    a: S,
    b: S,
    whole: S,
    tol: S,
    depth: usize,
    acc: &mut Accumulator<S>,
) -> Result<()>
where
    F: Fn(S) -> Result<S>,
{
    let m = S::lit(0.5) * (a + b);
    let (left, left_mag) = rule.panel(f, a, m)?;
    let (right, right_mag) = rule.panel(f, m, b)?;
    let diff = (whole - (left + right)).abs();
    let floor = S::lit(50.0) * S::epsilon() * (left_mag + right_mag);
    let allowed = (tol * (b - a).abs()).max(floor);
    if diff <= allowed || depth >= MAX_DEPTH {
        if diff > allowed {
            acc.exhausted = true;
        }
        acc.value = acc.value + left + right;
        acc.error = acc.error + diff;
        acc.panels += 2;
        return Ok(());
    }
    refine(rule, f, a, m, left, tol, depth + 1, acc)?;
    refine(rule, f, m, b, right, tol, depth + 1, acc)
}

/// Adaptive integral of a scalar function over `[a, b]`; panels are
/// bisected until the two halves agree with the whole within their share
/// `tol * width / |b - a|` of the tolerance. Summation runs left to right,
/// so results are deterministic.
pub fn integrate_scalar<S: Scalar, F>(f: F, a: S, b: S, tol: S) -> Result<IntegralResult<S>>
where
    F: Fn(S) -> Result<S>,
{
    let rule = Rule::new();
    let mut acc = Accumulator {
        value: S::zero(),
        error: S::zero(),
        panels: 0,
        exhausted: false,
    };
    if a == b {
        return Ok(IntegralResult {
            value: S::zero(),
            error_estimate: S::zero(),
            panels_used: 0,
        });
    }
    let (whole, _) = rule.panel(&f, a, b)?;
    // per-unit-length tolerance, so the panel errors sum to at most `tol`
    let density = tol / (b - a).abs();
    refine(&rule, &f, a, b, whole, density, 0, &mut acc)?;
    if acc.exhausted {
        return Err(Error::NonConvergence {
            best: acc.value.as_f64(),
            error_estimate: acc.error.as_f64(),
        });
    }
    Ok(IntegralResult {
        value: acc.value,
        error_estimate: acc.error,
        panels_used: acc.panels,
    })
}

/// `int_path <form(c(t)), c'(t)> dt`, summed over the pieces of the path.
pub fn integrate_one_form<S: Scalar, F>(
    form: F,
    path: &PathSpec<S>,
    tol: S,
) -> Result<IntegralResult<S>>
where
    F: Fn(&Point<S>) -> Result<Covector<S>>,
{
    let pieces = path.piece_count();
    let piece_tol = tol / S::from_usize_lossy(pieces);
    let mut total = IntegralResult {
        value: S::zero(),
        error_estimate: S::zero(),
        panels_used: 0,
    };
    let mut failed = false;
    for k in 0..pieces {
        let integrand = |t: S| -> Result<S> {
            let (pos, vel) = path.eval_piece(k, t);
            if vel.iter().all(|v| *v == S::zero()) {
                return Ok(S::zero());
            }
            Ok(form(&Point::new(pos))?.pair(&vel))
        };
        let r = match integrate_scalar(integrand, S::zero(), S::one(), piece_tol) {
            Ok(r) => r,
            Err(Error::NonConvergence {
                best,
                error_estimate,
            }) => {
                failed = true;
                IntegralResult {
                    value: S::lit(best),
                    error_estimate: S::lit(error_estimate),
                    panels_used: 0,
                }
            }
            Err(e) => return Err(e),
        };
        total.value = total.value + r.value;
        total.error_estimate = total.error_estimate + r.error_estimate;
        total.panels_used += r.panels_used;
    }
    if failed {
        return Err(Error::NonConvergence {
            best: total.value.as_f64(),
            error_estimate: total.error_estimate.as_f64(),
        });
    }
    Ok(total)
}

/// `|int_{path1} form - int_{path2} form|` for two paths with common
/// endpoints.
pub fn path_independence_residual<S: Scalar, F>(
    form: F,
    path1: &PathSpec<S>,
    path2: &PathSpec<S>,
    tol: S,
) -> Result<S>
where
    F: Fn(&Point<S>) -> Result<Covector<S>>,
{
    let slack = S::lit(1e-9);
    let scale = S::one()
        + path1
            .start()
            .coords
            .iter()
            .fold(S::zero(), |m, x| m.max(x.abs()));
    if path1.start().distance_euclid(&path2.start()) > slack * scale
        || path1.end().distance_euclid(&path2.end()) > slack * scale
    {
        return Err(Error::Precondition("paths do not share endpoints".into()));
    }
    let a = integrate_one_form(&form, path1, tol)?;
    let b = integrate_one_form(&form, path2, tol)?;
    Ok((a.value - b.value).abs())
}

/// A sampled Hamiltonian trajectory together with its action integral
/// `int (lambda(X_t) + H_t) dt`.
#[derive(Clone, Debug)]
pub struct Trajectory<S> {
    pub times: Vec<S>,
    pub points: Vec<Point<S>>,
    /// `lambda(X_t) + H_t` at each sample (right-sided at breakpoints).
    pub integrand: Vec<S>,
    /// Composite Simpson integral of the integrand over the ODE grid.
    pub action: S,
}

impl<S: Scalar> Trajectory<S> {
    pub fn endpoint(&self) -> &Point<S> {
        self.points.last().expect("trajectory has samples")
    }
}

fn sample_trajectory<S: Scalar>(
    model: &ManifoldModel<S>,
    ham: &HamiltonianSpec<S>,
    p: &[S],
    t0: S,
    t1: S,
    step: S,
) -> Result<Trajectory<S>> {
    let run = run_fixed(model, ham, p, t0, t1, step, false, false, true)?;
    let d = p.len();
    let mut x = vec![S::zero(); d];
    let mut integrand = vec![S::zero(); run.samples.len()];
    let mut action = S::zero();
    let mut start = 0;
    let mut a = t0;
    for &n in &run.piece_steps {
        let b = run.samples[start + n].0;
        let eta = (b - a).abs() * S::lit(1e-12);
        let (lo, hi) = if a <= b {
            (a + eta, b - eta)
        } else {
            (b + eta, a - eta)
        };
        let mut vals = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let (t, z) = &run.samples[start + i];
            let tc = t.max(lo).min(hi);
            hamiltonian_vector(model, ham, tc, z, &mut x);
            let v = model.lambda_unchecked(z).pair(&x) + ham.value(tc, z);
            vals.push(v);
        }
        let h = (b - a) / S::from_usize_lossy(n);
        let mut sum = vals[0] + vals[n];
        for (i, v) in vals.iter().enumerate().take(n).skip(1) {
            sum = sum + *v * if i % 2 == 1 { S::lit(4.0) } else { S::lit(2.0) };
        }
        action = action + sum * h / S::lit(3.0);
        let keep = if start + n + 1 == run.samples.len() {
            n + 1
        } else {
            n
        };
        integrand[start..start + keep].copy_from_slice(&vals[..keep]);
        start += n;
        a = b;
    }
    Ok(Trajectory {
        times: run.samples.iter().map(|(t, _)| *t).collect(),
        points: run
            .samples
            .into_iter()
            .map(|(_, z)| Point::new(z))
            .collect(),
        integrand,
        action,
    })
}

/// Trajectory of `p` under the flow of `ham` from `t0` to `t1`, with the
/// action integrand `lambda(X_t) + H_t` on the ODE grid. The step is halved
/// until the endpoint and the action agree between successive grids.
pub fn flow_trajectory<S: Scalar>(
    model: &ManifoldModel<S>,
    ham: &HamiltonianSpec<S>,
    p: &Point<S>,
    t0: S,
    t1: S,
    settings: &IntegratorSettings<S>,
) -> Result<Trajectory<S>> {
    model.check_point(p)?;
    if ham.dim() != p.dim() {
        return Err(Error::Dimension {
            expected: ham.dim(),
            found: p.dim(),
        });
    }
    let mut step = settings.step;
    let mut prev = sample_trajectory(model, ham, &p.coords, t0, t1, step)?;
    let mut difference = S::infinity();
    for _ in 0..=settings.max_halvings {
        step = step * S::lit(0.5);
        let next = sample_trajectory(model, ham, &p.coords, t0, t1, step)?;
        difference = max_abs_diff(&prev.endpoint().coords, &next.endpoint().coords)
            .max((prev.action - next.action).abs());
        if difference <= settings.agreement {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::IntegratorNonConvergence {
        difference: difference.as_f64(),
    })
}
