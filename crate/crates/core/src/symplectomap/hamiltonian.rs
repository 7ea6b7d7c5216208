//! Time-dependent Hamiltonian functions with gradients, Hessians and the
//! metadata the flow integrator and the cocycle bounds rely on.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::geometry::Point;
use crate::scalar::Scalar;

pub type ValueFn<S> = Arc<dyn Fn(S, &[S]) -> S + Send + Sync>;
/// Writes a vector (gradient) or a row-major matrix (Hessian) into the
/// output slice.
pub type FieldFn<S> = Arc<dyn Fn(S, &[S], &mut [S]) + Send + Sync>;
/// Maps `r^2` to the angular velocity and its derivative in `r^2`.
pub type RateFn<S> = Arc<dyn Fn(S) -> (S, S) + Send + Sync>;

/// Closed chart ball outside which a Hamiltonian vanishes identically.
#[derive(Clone, Debug, PartialEq)]
pub struct Support<S> {
    pub center: Point<S>,
    pub radius: S,
}

impl<S: Scalar> Support<S> {
    pub fn contains(&self, p: &[S]) -> bool {
        let d2 = p
            .iter()
            .zip(&self.center.coords)
            .fold(S::zero(), |acc, (a, b)| acc + (*a - *b) * (*a - *b));
        d2 < self.radius * self.radius
    }
}

/// Autonomous Hamiltonian depending only on `|z - center|^2`: its flow on
/// the plane rotates every coordinate pair about the centre with angular
/// velocity `rate(r^2)`, which admits a closed-form solution.
#[derive(Clone)]
pub struct RadialTwist<S> {
    pub center: Point<S>,
    pub rate: RateFn<S>,
}

#[derive(Clone)]
pub enum Reparametrization<S> {
    /// `s(t) = t^k`
    Power(i32),
    /// `s(t) = min(2t, 1)`: double speed on `[0, 1/2]`, frozen afterwards.
    DoubleThenFreeze,
    Custom {
        s: Arc<dyn Fn(S) -> S + Send + Sync>,
        ds: Arc<dyn Fn(S) -> S + Send + Sync>,
        breakpoints: Vec<S>,
        speed_bound: S,
    },
}

impl<S: Scalar> Reparametrization<S> {
    fn eval(&self, t: S) -> (S, S) {
        match self {
            Reparametrization::Power(k) => {
                let k = *k;
                (t.powi(k), S::lit(k as f64) * t.powi(k - 1))
            }
            Reparametrization::DoubleThenFreeze => {
                if t < S::lit(0.5) {
                    (S::lit(2.0) * t, S::lit(2.0))
                } else {
                    (S::one(), S::zero())
                }
            }
            Reparametrization::Custom { s, ds, .. } => (s(t), ds(t)),
        }
    }

    fn breakpoints(&self) -> Vec<S> {
        match self {
            Reparametrization::Power(_) => Vec::new(),
            Reparametrization::DoubleThenFreeze => vec![S::lit(0.5)],
            Reparametrization::Custom { breakpoints, .. } => breakpoints.clone(),
        }
    }

    /// Upper bound of `|s'|` on `[0, 1]`.
    fn speed_bound(&self) -> S {
        match self {
            Reparametrization::Power(k) => S::lit((*k as f64).abs()),
            Reparametrization::DoubleThenFreeze => S::lit(2.0),
            Reparametrization::Custom { speed_bound, .. } => *speed_bound,
        }
    }
}

/// A Hamiltonian `H(t, p)` on a `dim`-dimensional chart.
///
/// The vector field convention is `i_X d lambda = dH`.
#[derive(Clone)]
pub struct HamiltonianSpec<S> {
    label: String,
    dim: usize,
    value: ValueFn<S>,
    gradient: Option<FieldFn<S>>,
    hessian: Option<FieldFn<S>>,
    support: Option<Support<S>>,
    autonomous: bool,
    breakpoints: Vec<S>,
    radial: Option<RadialTwist<S>>,
    value_bound: Option<S>,
    gradient_bound: Option<S>,
}

impl<S> fmt::Debug for HamiltonianSpec<S>
where
    S: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianSpec")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("support", &self.support)
            .field("autonomous", &self.autonomous)
            .finish_non_exhaustive()
    }
}

/// `psi(s) = exp(1 - 1/(1 - s))` on `[0, 1)`, zero for `s >= 1`; smooth,
/// with `psi(0) = 1` and `psi'(0) = -1`.
fn bump_profile(s: f64) -> (f64, f64, f64) {
    if s >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let q = 1.0 - s;
    let psi = (1.0 - 1.0 / q).exp();
    let d1 = -psi / (q * q);
    let d2 = psi * (2.0 * s - 1.0) / (q * q * q * q);
    (psi, d1, d2)
}

/// `max_{s in [0,1)} sqrt(s) psi(s) / (1 - s)^2`, the radial gradient
/// profile of the unit bump.
fn bump_gradient_constant() -> f64 {
    static CONSTANT: OnceLock<f64> = OnceLock::new();
    *CONSTANT.get_or_init(|| {
        let f = |s: f64| s.sqrt() * bump_profile(s).0 / ((1.0 - s) * (1.0 - s));
        let n = 100_000;
        let (mut best_s, mut best) = (0.0, 0.0);
        for i in 0..n {
            let s = i as f64 / n as f64;
            let v = f(s);
            if v > best {
                best = v;
                best_s = s;
            }
        }
        // golden-section polish around the grid maximum
        let (mut lo, mut hi) = (best_s - 1.0 / n as f64, best_s + 1.0 / n as f64);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if f(a) > f(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        f(0.5 * (lo + hi)).max(best) * (1.0 + 1e-9)
    })
}

fn squared_distance<S: Scalar>(z: &[S], c: &[S]) -> S {
    z.iter()
        .zip(c)
        .fold(S::zero(), |acc, (a, b)| acc + (*a - *b) * (*a - *b))
}

fn offset<S: Scalar>(z: &[S], c: &[S], out: &mut [S]) -> S {
    let mut r2 = S::zero();
    for ((o, a), b) in out.iter_mut().zip(z).zip(c) {
        *o = *a - *b;
        r2 = r2 + *o * *o;
    }
    r2
}

impl<S: Scalar> HamiltonianSpec<S> {
    /// General Hamiltonian from closures; a missing gradient is replaced by
    /// central differences of the value.
    pub fn custom(
        label: impl Into<String>,
        dim: usize,
        value: ValueFn<S>,
        gradient: Option<FieldFn<S>>,
        autonomous: bool,
    ) -> Self {
        Self {
            label: label.into(),
            dim,
            value,
            gradient,
            hessian: None,
            support: None,
            autonomous,
            breakpoints: Vec::new(),
            radial: None,
            value_bound: None,
            gradient_bound: None,
        }
    }

    pub fn with_hessian(mut self, hessian: FieldFn<S>) -> Self {
        self.hessian = Some(hessian);
        self
    }

    pub fn with_support(mut self, support: Support<S>) -> Self {
        self.support = Some(support);
        self
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            label: "zero".into(),
            dim,
            value: Arc::new(|_, _| S::zero()),
            gradient: Some(Arc::new(|_, _, out: &mut [S]| out.fill(S::zero()))),
            hessian: Some(Arc::new(|_, _, out: &mut [S]| out.fill(S::zero()))),
            support: Some(Support {
                center: Point::origin(dim),
                radius: S::zero(),
            }),
            autonomous: true,
            breakpoints: Vec::new(),
            radial: None,
            value_bound: Some(S::zero()),
            gradient_bound: Some(S::zero()),
        }
    }

    /// Smooth compactly supported bump `A psi(|z - c|^2 / R^2)` with maximum
    /// `A` at the centre and support the closed ball of radius `R`.
    pub fn bump(center: Point<S>, radius: S, amplitude: S) -> Self {
        assert!(radius > S::zero(), "bump radius must be positive");
        let dim = center.dim();
        let inv_r2 = S::one() / (radius * radius);
        let c1 = center.coords.clone();
        let c2 = center.coords.clone();
        let c3 = center.coords.clone();
        let c4 = center.coords.clone();
        let value: ValueFn<S> = Arc::new(move |_, z| {
            let r2 = squared_distance(z, &c1);
            amplitude * S::lit(bump_profile((r2 * inv_r2).as_f64()).0)
        });
        let gradient: FieldFn<S> = Arc::new(move |_, z, out| {
            let r2 = offset(z, &c2, out);
            let (_, d1, _) = bump_profile((r2 * inv_r2).as_f64());
            let k = amplitude * S::lit(d1) * S::lit(2.0) * inv_r2;
            out.iter_mut().for_each(|o| *o = *o * k);
        });
        let hessian: FieldFn<S> = Arc::new(move |_, z, out| {
            let n = z.len();
            let r2 = squared_distance(z, &c3);
            let (_, d1, d2) = bump_profile((r2 * inv_r2).as_f64());
            let two_inv = S::lit(2.0) * inv_r2;
            let outer = amplitude * S::lit(d2) * two_inv * two_inv;
            let diag = amplitude * S::lit(d1) * two_inv;
            for i in 0..n {
                for j in 0..n {
                    let mut v = outer * (z[i] - c3[i]) * (z[j] - c3[j]);
                    if i == j {
                        v = v + diag;
                    }
                    out[i * n + j] = v;
                }
            }
        });
        let rate: RateFn<S> = Arc::new(move |r2| {
            let s = r2 * inv_r2;
            let (_, d1, d2) = bump_profile(s.as_f64());
            (
                -S::lit(2.0) * amplitude * S::lit(d1) * inv_r2,
                -S::lit(2.0) * amplitude * S::lit(d2) * inv_r2 * inv_r2,
            )
        });
        Self {
            label: "bump".into(),
            dim,
            value,
            gradient: Some(gradient),
            hessian: Some(hessian),
            support: Some(Support {
                center: Point::new(c4),
                radius,
            }),
            autonomous: true,
            breakpoints: Vec::new(),
            radial: Some(RadialTwist { center, rate }),
            value_bound: Some(amplitude.abs()),
            gradient_bound: Some(
                S::lit(2.0) * amplitude.abs() / radius * S::lit(bump_gradient_constant()),
            ),
        }
    }

    /// Gaussian `A exp(-|z - c|^2 / w^2)` (not compactly supported).
    pub fn gaussian(center: Point<S>, width: S, amplitude: S) -> Self {
        assert!(width > S::zero(), "gaussian width must be positive");
        let dim = center.dim();
        let inv_w2 = S::one() / (width * width);
        let (c1, c2, c3) = (
            center.coords.clone(),
            center.coords.clone(),
            center.coords.clone(),
        );
        let value: ValueFn<S> =
            Arc::new(move |_, z| amplitude * (-squared_distance(z, &c1) * inv_w2).exp());
        let gradient: FieldFn<S> = Arc::new(move |_, z, out| {
            let r2 = offset(z, &c2, out);
            let k = -S::lit(2.0) * amplitude * inv_w2 * (-r2 * inv_w2).exp();
            out.iter_mut().for_each(|o| *o = *o * k);
        });
        let hessian: FieldFn<S> = Arc::new(move |_, z, out| {
            let n = z.len();
            let r2 = squared_distance(z, &c3);
            let e = amplitude * (-r2 * inv_w2).exp();
            for i in 0..n {
                for j in 0..n {
                    let mut v = S::lit(4.0) * inv_w2 * inv_w2 * (z[i] - c3[i]) * (z[j] - c3[j]);
                    if i == j {
                        v = v - S::lit(2.0) * inv_w2;
                    }
                    out[i * n + j] = e * v;
                }
            }
        });
        let rate: RateFn<S> = Arc::new(move |r2| {
            let e = (-r2 * inv_w2).exp();
            (
                S::lit(2.0) * amplitude * inv_w2 * e,
                -S::lit(2.0) * amplitude * inv_w2 * inv_w2 * e,
            )
        });
        Self {
            label: "gaussian".into(),
            dim,
            value,
            gradient: Some(gradient),
            hessian: Some(hessian),
            support: None,
            autonomous: true,
            breakpoints: Vec::new(),
            radial: Some(RadialTwist { center, rate }),
            value_bound: Some(amplitude.abs()),
            gradient_bound: Some(S::lit(2f64.sqrt() * (-0.5f64).exp()) * amplitude.abs() / width),
        }
    }

    /// Quadratic polynomial `1/2 z^T Q z + b^T z` with symmetric `Q`
    /// (row-major, `dim x dim`).
    pub fn quadratic(q: Vec<S>, b: Vec<S>) -> Self {
        let dim = b.len();
        assert_eq!(q.len(), dim * dim, "quadratic form shape");
        let (q1, q2, q3) = (q.clone(), q.clone(), q);
        let (b1, b2) = (b.clone(), b);
        let value: ValueFn<S> = Arc::new(move |_, z| {
            let mut acc = S::zero();
            for i in 0..dim {
                let mut row = S::zero();
                for j in 0..dim {
                    row = row + q1[i * dim + j] * z[j];
                }
                acc = acc + S::lit(0.5) * z[i] * row + b1[i] * z[i];
            }
            acc
        });
        let gradient: FieldFn<S> = Arc::new(move |_, z, out| {
            for i in 0..dim {
                let mut row = b2[i];
                for j in 0..dim {
                    row = row + q2[i * dim + j] * z[j];
                }
                out[i] = row;
            }
        });
        let hessian: FieldFn<S> = Arc::new(move |_, _, out| out.copy_from_slice(&q3));
        Self {
            label: "quadratic".into(),
            dim,
            value,
            gradient: Some(gradient),
            hessian: Some(hessian),
            support: None,
            autonomous: true,
            breakpoints: Vec::new(),
            radial: None,
            value_bound: None,
            gradient_bound: None,
        }
    }

    /// Generator `-(rate/2) |z - c|^2` of the counterclockwise rotation of
    /// every coordinate pair about `c` with angular velocity `rate`.
    pub fn rotation(center: Point<S>, rate: S) -> Self {
        let dim = center.dim();
        let mut q = vec![S::zero(); dim * dim];
        for i in 0..dim {
            q[i * dim + i] = -rate;
        }
        let b: Vec<S> = center.coords.iter().map(|c| rate * *c).collect();
        let mut spec = Self::quadratic(q, b);
        let shift = center.coords.iter().fold(S::zero(), |a, c| a + *c * *c);
        let inner = spec.value.clone();
        spec.value = Arc::new(move |t, z| inner(t, z) - S::lit(0.5) * rate * shift);
        spec.label = "rotation".into();
        spec.radial = Some(RadialTwist {
            center,
            rate: Arc::new(move |_| (rate, S::zero())),
        });
        spec
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> Option<&Support<S>> {
        self.support.as_ref()
    }

    pub fn is_autonomous(&self) -> bool {
        self.autonomous
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.breakpoints
    }

    pub fn radial(&self) -> Option<&RadialTwist<S>> {
        self.radial.as_ref()
    }

    /// `sup |H|` over space and time, when known in closed form.
    pub fn value_bound(&self) -> Option<S> {
        self.value_bound
    }

    /// `sup |grad H|` (Euclidean chart norm), when known in closed form.
    pub fn gradient_bound(&self) -> Option<S> {
        self.gradient_bound
    }

    pub fn value(&self, t: S, z: &[S]) -> S {
        (self.value)(t, z)
    }

    pub fn gradient_into(&self, t: S, z: &[S], out: &mut [S]) {
        match &self.gradient {
            Some(g) => g(t, z, out),
            None => {
                let mut probe = z.to_vec();
                for i in 0..z.len() {
                    let h = S::lit(1e-6) * S::one().max(z[i].abs());
                    probe[i] = z[i] + h;
                    let fp = self.value(t, &probe);
                    probe[i] = z[i] - h;
                    let fm = self.value(t, &probe);
                    probe[i] = z[i];
                    out[i] = (fp - fm) / (S::lit(2.0) * h);
                }
            }
        }
    }

    pub fn gradient(&self, t: S, z: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); z.len()];
        self.gradient_into(t, z, &mut out);
        out
    }

    /// Row-major Hessian; central differences of the gradient when no
    /// closed form was supplied.
    pub fn hessian_into(&self, t: S, z: &[S], out: &mut [S]) {
        match &self.hessian {
            Some(h) => h(t, z, out),
            None => {
                let n = z.len();
                let mut probe = z.to_vec();
                let mut gp = vec![S::zero(); n];
                let mut gm = vec![S::zero(); n];
                for j in 0..n {
                    let h = S::lit(1e-5) * S::one().max(z[j].abs());
                    probe[j] = z[j] + h;
                    self.gradient_into(t, &probe, &mut gp);
                    probe[j] = z[j] - h;
                    self.gradient_into(t, &probe, &mut gm);
                    probe[j] = z[j];
                    for i in 0..n {
                        out[i * n + j] = (gp[i] - gm[i]) / (S::lit(2.0) * h);
                    }
                }
                // symmetrize
                for i in 0..n {
                    for j in (i + 1)..n {
                        let m = S::lit(0.5) * (out[i * n + j] + out[j * n + i]);
                        out[i * n + j] = m;
                        out[j * n + i] = m;
                    }
                }
            }
        }
    }

    /// `H^rev(t, z) = -H(total - t, z)`; its flow over `[0, total]` inverts
    /// the flow of `H` over the same interval.
    pub fn time_reversed(&self, total: S) -> Self {
        let v = self.value.clone();
        let value: ValueFn<S> = Arc::new(move |t, z| -v(total - t, z));
        let gradient: Option<FieldFn<S>> = self.gradient.clone().map(|g| {
            let f: FieldFn<S> = Arc::new(move |t, z, out: &mut [S]| {
                g(total - t, z, out);
                out.iter_mut().for_each(|o| *o = -*o);
            });
            f
        });
        let hessian: Option<FieldFn<S>> = self.hessian.clone().map(|h| {
            let f: FieldFn<S> = Arc::new(move |t, z, out: &mut [S]| {
                h(total - t, z, out);
                out.iter_mut().for_each(|o| *o = -*o);
            });
            f
        });
        let radial = self.radial.clone().map(|r| {
            let rate = r.rate.clone();
            RadialTwist {
                center: r.center,
                rate: Arc::new(move |q| {
                    let (w, dw) = rate(q);
                    (-w, -dw)
                }),
            }
        });
        let mut breakpoints: Vec<S> = self.breakpoints.iter().map(|b| total - *b).collect();
        breakpoints.reverse();
        Self {
            label: format!("{}^rev", self.label),
            dim: self.dim,
            value,
            gradient,
            hessian,
            support: self.support.clone(),
            autonomous: self.autonomous,
            breakpoints,
            radial: if self.autonomous { radial } else { None },
            value_bound: self.value_bound,
            gradient_bound: self.gradient_bound,
        }
    }

    /// `H^s(t, z) = s'(t) H(s(t), z)`, whose flow at time `t` is the flow
    /// of `H` at time `s(t)`.
    pub fn reparametrized(&self, reparam: Reparametrization<S>) -> Self {
        let r = Arc::new(reparam);
        let (v, r1) = (self.value.clone(), r.clone());
        let value: ValueFn<S> = Arc::new(move |t, z| {
            let (s, ds) = r1.eval(t);
            ds * v(s, z)
        });
        let scale_field = |f: Option<FieldFn<S>>, r: Arc<Reparametrization<S>>| {
            f.map(|g| {
                let out: FieldFn<S> = Arc::new(move |t, z, out: &mut [S]| {
                    let (s, ds) = r.eval(t);
                    g(s, z, out);
                    out.iter_mut().for_each(|o| *o = *o * ds);
                });
                out
            })
        };
        let gradient = scale_field(self.gradient.clone(), r.clone());
        let hessian = scale_field(self.hessian.clone(), r.clone());
        let gradient = gradient.or_else(|| {
            let me = self.clone();
            let r2 = r.clone();
            let f: FieldFn<S> = Arc::new(move |t, z, out: &mut [S]| {
                let (s, ds) = r2.eval(t);
                me.gradient_into(s, z, out);
                out.iter_mut().for_each(|o| *o = *o * ds);
            });
            Some(f)
        });
        let speed = r.speed_bound();
        Self {
            label: format!("{}^reparam", self.label),
            dim: self.dim,
            value,
            gradient,
            hessian,
            support: self.support.clone(),
            autonomous: false,
            breakpoints: r.breakpoints(),
            radial: None,
            value_bound: self.value_bound.map(|b| b * speed),
            gradient_bound: self.gradient_bound.map(|b| b * speed),
        }
    }

    /// Largest central-difference mismatch of the gradient over samples.
    pub fn gradient_consistency(&self, samples: &[(S, Point<S>)]) -> S {
        let mut worst = S::zero();
        for (t, p) in samples {
            let g = self.gradient(*t, &p.coords);
            let mut probe = p.coords.clone();
            for (i, gi) in g.iter().enumerate() {
                let h = S::lit(1e-6);
                probe[i] = p.coords[i] + h;
                let fp = self.value(*t, &probe);
                probe[i] = p.coords[i] - h;
                let fm = self.value(*t, &probe);
                probe[i] = p.coords[i];
                worst = worst.max(((fp - fm) / (S::lit(2.0) * h) - *gi).abs());
            }
        }
        worst
    }

    /// Largest `|H|` among samples outside the declared support (zero when
    /// no support is declared).
    pub fn support_violation(&self, samples: &[(S, Point<S>)]) -> S {
        let Some(sup) = &self.support else {
            return S::zero();
        };
        samples
            .iter()
            .filter(|(_, p)| !sup.contains(&p.coords))
            .fold(S::zero(), |m, (t, p)| {
                m.max(self.value(*t, &p.coords).abs())
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(n: usize) -> Vec<(f64, Point<f64>)> {
        (0..n)
            .map(|i| {
                let a = i as f64 * 0.731;
                let r = 0.05 + 1.6 * ((i * 37 % n) as f64 / n as f64);
                (
                    (i as f64 / n as f64),
                    Point::new(vec![0.3 + r * a.cos(), -0.2 + r * a.sin()]),
                )
            })
            .collect()
    }

    #[test]
    fn bump_gradient_matches_value_and_vanishes_off_support() {
        let h = HamiltonianSpec::bump(Point::new(vec![0.3, -0.2]), 1.2, 0.7);
        let s = samples(200);
        assert!(h.gradient_consistency(&s) < 1e-5);
        assert_eq!(h.support_violation(&s), 0.0);
        assert_eq!(h.value(0.0, &[0.3, -0.2]), 0.7);
        assert_eq!(h.gradient(0.0, &[0.3, -0.2]), vec![0.0, 0.0]);
    }

    #[test]
    fn bump_hessian_matches_finite_differences() {
        let h = HamiltonianSpec::bump(Point::new(vec![0.0, 0.0]), 1.0, 0.9);
        let plain = HamiltonianSpec::custom("fd", 2, h.value.clone(), h.gradient.clone(), true);
        for z in [[0.1, 0.2], [0.5, -0.3], [-0.6, 0.1]] {
            let mut a = vec![0.0; 4];
            let mut b = vec![0.0; 4];
            h.hessian_into(0.0, &z, &mut a);
            plain.hessian_into(0.0, &z, &mut b);
            assert!(crate::scalar::max_abs_diff(&a, &b) < 1e-7);
        }
    }

    #[test]
    fn bump_gradient_bound_dominates_samples() {
        let h = HamiltonianSpec::bump(Point::new(vec![0.0, 0.0]), 0.8, -1.3);
        let bound = h.gradient_bound().unwrap();
        for i in 0..2000 {
            let r = 0.8 * i as f64 / 2000.0;
            let g = h.gradient(0.0, &[r, 0.0]);
            assert!(g[0].hypot(g[1]) <= bound);
        }
    }

    #[test]
    fn gaussian_and_rotation_gradients_are_consistent() {
        let s = samples(50);
        let g = HamiltonianSpec::gaussian(Point::new(vec![0.1, 0.1]), 0.7, 1.1);
        assert!(g.gradient_consistency(&s) < 1e-5);
        let r = HamiltonianSpec::rotation(Point::new(vec![0.1, -0.4]), 0.8);
        assert!(r.gradient_consistency(&s) < 1e-5);
        assert!(r.value(0.0, &[0.1, -0.4]).abs() < 1e-15);
    }

    #[test]
    fn finite_difference_gradient_fallback() {
        let h: HamiltonianSpec<f64> = HamiltonianSpec::custom(
            "cubic",
            2,
            Arc::new(|t, z| (1.0 + t) * z[0] * z[0] * z[1]),
            None,
            false,
        );
        let g = h.gradient(0.5, &[1.0, 2.0]);
        assert!((g[0] - 6.0).abs() < 1e-7);
        assert!((g[1] - 1.5).abs() < 1e-7);
    }

    #[test]
    fn reversal_and_reparametrization_formulas() {
        let h: HamiltonianSpec<f64> = HamiltonianSpec::bump(Point::new(vec![0.0, 0.0]), 1.0, 0.5);
        let rev = h.time_reversed(1.0);
        assert_eq!(rev.value(0.2, &[0.1, 0.1]), -h.value(0.8, &[0.1, 0.1]));
        let sq = h.reparametrized(Reparametrization::Power(2));
        assert!((sq.value(0.5, &[0.1, 0.1]) - 1.0 * h.value(0.25, &[0.1, 0.1])).abs() < 1e-15);
        let frozen = h.reparametrized(Reparametrization::DoubleThenFreeze);
        assert_eq!(frozen.value(0.75, &[0.1, 0.1]), 0.0);
        assert_eq!(frozen.breakpoints(), &[0.5]);
    }
}
