//! The five suites. Each builds a list of independent checks, evaluates them
//! (in parallel when threads are available) and returns the records; order
//! is fixed later by sorting on `check_id`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use symplectic_cocycle::cocycle::{CocycleContext, IsotopySpec};
use symplectic_cocycle::families;
use symplectic_cocycle::geometry::{ManifoldModel, PathSpec, Point};
use symplectic_cocycle::groups::{
    distortion_report, translation_length_estimate, GeneratingSet, GroupWord,
};
use symplectic_cocycle::quadrature::integrate_one_form;
use symplectic_cocycle::symplectomap::{
    HamiltonianSpec, IntegratorSettings, Reparametrization, SympMap,
};
use symplectic_cocycle::Result;

use crate::report::{digest, Record};
use crate::scenario::{Built, HamiltonianDef, MapDef, Scenario, Suite, Tolerances};

type Eval<'a> = Box<dyn Fn(&mut ChaCha8Rng) -> Result<Vec<Record>> + Send + Sync + 'a>;

struct Check<'a> {
    id: String,
    anchor: &'static str,
    inputs: String,
    tol: f64,
    eval: Eval<'a>,
}

/// Per-check generator seeded from the run seed and the check id, so
/// results do not depend on evaluation order.
fn check_rng(seed: u64, id: &str) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let hex = digest(&format!("{seed}:{id}"));
    for (i, k) in key.iter_mut().enumerate() {
        *k = u8::from_str_radix(&hex[2 * i..2 * i + 2], 16).expect("hex digest");
    }
    ChaCha8Rng::from_seed(key)
}

struct Env<'a> {
    scenario: &'a Scenario,
    built: &'a Built,
    tol: Tolerances,
    ctx: CocycleContext<f64>,
}

impl<'a> Env<'a> {
    fn map(&self, name: &str) -> &SympMap<f64> {
        &self.built.maps[name]
    }

    fn names(&self) -> Vec<&'a str> {
        self.built.maps.keys().map(String::as_str).collect()
    }

    /// Canonical text of the definitions behind `names` plus the extra data.
    fn inputs(&self, names: &[&str], extra: &str) -> String {
        let defs: Vec<Value> = names
            .iter()
            .map(|n| json!({ "name": n, "def": self.scenario.maps.get(*n) }))
            .collect();
        json!({
            "model": self.scenario.model,
            "basepoint": self.ctx.basepoint().coords,
            "maps": defs,
            "extra": extra,
        })
        .to_string()
    }

    fn random_map(&self, rng: &mut ChaCha8Rng) -> Result<SympMap<f64>> {
        let model = self.ctx.model();
        if model.is_disk() {
            families::moebius(rng, 0.7)
        } else if rng.gen_bool(0.5) {
            Ok(families::translation(rng, model.dim(), 1.5))
        } else {
            families::affine(rng, model.dim(), 1.0)
        }
    }

    fn random_point(&self, rng: &mut ChaCha8Rng, scale: f64) -> Point<f64> {
        let model = self.ctx.model();
        if model.is_disk() {
            families::disk_point(rng, scale.min(0.9))
        } else {
            let mut p = families::plane_point(rng, model.dim(), scale);
            for (c, b) in p.coords.iter_mut().zip(&self.ctx.basepoint().coords) {
                *c += b;
            }
            p
        }
    }
}

fn run_checks(env: &Env, checks: Vec<Check>) -> Vec<Record> {
    let seed = env.scenario.seed;
    checks
        .par_iter()
        .map(|c| {
            let mut rng = check_rng(seed, &c.id);
            match (c.eval)(&mut rng) {
                Ok(records) => records,
                Err(e) => vec![Record::failed(c.id.clone(), c.anchor, &c.inputs, c.tol, &e)],
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Runs `suite` on the built scenario; the table suite also returns CSV.
pub fn run(
    scenario: &Scenario,
    built: &Built,
    suite: Suite,
) -> std::result::Result<(Vec<Record>, Option<String>), String> {
    let ctx = CocycleContext::new(built.model.clone()).with_tol(scenario.tolerances.quadrature);
    let env = Env {
        scenario,
        built,
        tol: scenario.tolerances,
        ctx,
    };
    let out = match suite {
        Suite::Verify => (run_checks(&env, verify(&env)), None),
        Suite::Kahler => (run_checks(&env, kahler(&env)), None),
        Suite::Distortion => (run_checks(&env, distortion(&env)?), None),
        Suite::Hamiltonian => (run_checks(&env, hamiltonian(&env)), None),
        Suite::Table => {
            let (records, csv) = table(&env);
            (records, Some(csv))
        }
    };
    Ok(out)
}

fn translation_shift<'s>(scenario: &'s Scenario, name: &str) -> Option<&'s [f64]> {
    match scenario.maps.get(name) {
        Some(MapDef::Translation { shift }) => Some(shift),
        _ => None,
    }
}

fn is_moebius(scenario: &Scenario, name: &str) -> bool {
    matches!(scenario.maps.get(name), Some(MapDef::Moebius { .. }))
}

fn verify<'a>(env: &'a Env<'a>) -> Vec<Check<'a>> {
    let names = env.names();
    let tol = env.tol;
    let disk = env.ctx.model().is_disk();
    let mut checks: Vec<Check<'a>> = Vec::new();
    for &g in &names {
        for &h in &names {
            for &k in &names {
                let id = format!("identity.{g}.{h}.{k}");
                checks.push(Check {
                    inputs: env.inputs(&[g, h, k], &id),
                    id,
                    anchor: "two-cocycle identity",
                    tol: tol.identity,
                    eval: Box::new(move |_| {
                        let r = env
                            .ctx
                            .coboundary2_residual(env.map(g), env.map(h), env.map(k))?;
                        Ok(vec![Record::residual(
                            format!("identity.{g}.{h}.{k}"),
                            "two-cocycle identity",
                            &env.inputs(&[g, h, k], ""),
                            json!(r),
                            r,
                            tol.identity,
                        )])
                    }),
                });
            }
            let pair = [g, h];
            checks.push(Check {
                id: format!("trilateral.{g}.{h}"),
                anchor: "G + delta k equals the boundary integral of lambda over the trilateral",
                inputs: env.inputs(&pair, "trilateral"),
                tol: tol.cross,
                eval: Box::new(move |_| {
                    let t = env.ctx.trilateral_identity(env.map(g), env.map(h))?;
                    Ok(vec![trilateral_record(
                        env, g, h, t.lhs, t.rhs, t.residual, tol.cross,
                    )])
                }),
            });
            checks.push(Check {
                id: format!("basepoint_change.{g}.{h}"),
                anchor: "changing the basepoint changes G by a coboundary",
                inputs: env.inputs(&pair, "basepoint_change"),
                tol: tol.identity,
                eval: Box::new(move |rng| {
                    let other = env.random_point(rng, 0.6);
                    let r = env
                        .ctx
                        .basepoint_change_residual(&other, env.map(g), env.map(h))?;
                    Ok(vec![Record::residual(
                        format!("basepoint_change.{g}.{h}"),
                        "changing the basepoint changes G by a coboundary",
                        &env.inputs(&pair, &format!("{:?}", other.coords)),
                        json!({ "other_basepoint": other.coords }),
                        r,
                        tol.identity,
                    )])
                }),
            });
            if !disk {
                checks.push(Check {
                    id: format!("primitive_change.{g}.{h}"),
                    anchor: "changing the primitive changes G by a coboundary",
                    inputs: env.inputs(&pair, "primitive_change"),
                    tol: tol.identity,
                    eval: Box::new(move |_| {
                        let r = env.ctx.primitive_change_residual(env.map(g), env.map(h))?;
                        Ok(vec![Record::residual(
                            format!("primitive_change.{g}.{h}"),
                            "changing the primitive changes G by a coboundary",
                            &env.inputs(&pair, "primitive_change"),
                            json!(r),
                            r,
                            tol.identity,
                        )])
                    }),
                });
            }
            if let (Some(u), Some(v)) = (
                translation_shift(env.scenario, g),
                translation_shift(env.scenario, h),
            ) {
                let expected = heisenberg_value(env.ctx.model(), u, v);
                checks.push(Check {
                    id: format!("heisenberg.{g}.{h}"),
                    anchor: "G of two translations is the Heisenberg form",
                    inputs: env.inputs(&pair, "heisenberg"),
                    tol: tol.closed_form,
                    eval: Box::new(move |_| {
                        let v = env.ctx.cocycle(env.map(g), env.map(h))?;
                        Ok(vec![Record::residual(
                            format!("heisenberg.{g}.{h}"),
                            "G of two translations is the Heisenberg form",
                            &env.inputs(&pair, "heisenberg"),
                            json!({ "value": v, "expected": expected }),
                            (v - expected).abs(),
                            tol.closed_form,
                        )])
                    }),
                });
            }
        }
        checks.push(Check {
            id: format!("symplectic.{g}"),
            anchor: "maps preserve the symplectic form",
            inputs: env.inputs(&[g], "symplectic"),
            tol: tol.identity,
            eval: Box::new(move |rng| {
                let mut worst = 0.0f64;
                for _ in 0..env.scenario.samples.points {
                    let p = env.random_point(rng, 1.0);
                    worst = worst.max(env.map(g).verify_symplectic(env.ctx.model(), &p)?);
                }
                Ok(vec![Record::residual(
                    format!("symplectic.{g}"),
                    "maps preserve the symplectic form",
                    &env.inputs(&[g], "symplectic"),
                    json!({ "points": env.scenario.samples.points }),
                    worst,
                    tol.identity,
                )])
            }),
        });
        if disk && is_moebius(env.scenario, g) && env.ctx.basepoint() == env.ctx.model().basepoint()
        {
            checks.push(Check {
                id: format!("k_chain.{g}"),
                anchor: "geodesics from the basepoint are lambda-null",
                inputs: env.inputs(&[g], "k_chain"),
                tol: tol.closed_form,
                eval: Box::new(move |_| {
                    let k = env.ctx.k_chain(env.map(g))?;
                    Ok(vec![Record::residual(
                        format!("k_chain.{g}"),
                        "geodesics from the basepoint are lambda-null",
                        &env.inputs(&[g], "k_chain"),
                        json!(k),
                        k.abs(),
                        tol.closed_form,
                    )])
                }),
            });
        }
    }
    checks.push(Check {
        id: "identity.random".into(),
        anchor: "two-cocycle identity",
        inputs: env.inputs(
            &[],
            &format!("random triples {}", env.scenario.samples.triples),
        ),
        tol: tol.identity,
        eval: Box::new(move |rng| {
            let mut worst = 0.0f64;
            for _ in 0..env.scenario.samples.triples {
                let (g, h, k) = (
                    env.random_map(rng)?,
                    env.random_map(rng)?,
                    env.random_map(rng)?,
                );
                worst = worst.max(env.ctx.coboundary2_residual(&g, &h, &k)?);
            }
            Ok(vec![Record::residual(
                "identity.random",
                "two-cocycle identity",
                &env.inputs(
                    &[],
                    &format!("random triples {}", env.scenario.samples.triples),
                ),
                json!({ "triples": env.scenario.samples.triples }),
                worst,
                tol.identity,
            )])
        }),
    });
    checks.push(Check {
        id: "dlambda.random".into(),
        anchor: "d lambda equals the symplectic form",
        inputs: env.inputs(&[], "dlambda"),
        tol: tol.identity,
        eval: Box::new(move |rng| {
            let mut worst = 0.0f64;
            for _ in 0..env.scenario.samples.points {
                let p = env.random_point(rng, 1.5);
                worst = worst.max(env.ctx.model().check_dlambda(&p, 1e-4)?);
            }
            Ok(vec![Record::residual(
                "dlambda.random",
                "d lambda equals the symplectic form",
                &env.inputs(&[], "dlambda"),
                json!({ "points": env.scenario.samples.points }),
                worst,
                tol.identity,
            )])
        }),
    });
    checks
}

fn heisenberg_value(model: &ManifoldModel<f64>, u: &[f64], v: &[f64]) -> f64 {
    use symplectic_cocycle::geometry::{ModelKind, PlanePrimitive};
    let pairs = u.len() / 2;
    match model.kind() {
        ModelKind::EuclideanPlane {
            primitive: PlanePrimitive::Liouville,
            ..
        } => (0..pairs).map(|i| u[2 * i] * v[2 * i + 1]).sum(),
        _ => (0..pairs)
            .map(|i| 0.5 * (u[2 * i] * v[2 * i + 1] - u[2 * i + 1] * v[2 * i]))
            .sum(),
    }
}

fn trilateral_record(
    env: &Env,
    g: &str,
    h: &str,
    lhs: f64,
    rhs: f64,
    residual: f64,
    tol: f64,
) -> Record {
    Record::residual(
        format!("trilateral.{g}.{h}"),
        "G + delta k equals the boundary integral of lambda over the trilateral",
        &env.inputs(&[g, h], "trilateral"),
        json!({ "lhs": lhs, "rhs": rhs }),
        residual,
        tol,
    )
}

fn kahler<'a>(env: &'a Env<'a>) -> Vec<Check<'a>> {
    let tol = env.tol;
    let isometries: Vec<&str> = env
        .names()
        .into_iter()
        .filter(|n| env.map(n).as_moebius().is_some())
        .collect();
    let mut checks: Vec<Check<'a>> = Vec::new();
    for &g in &isometries {
        for &h in &isometries {
            let pair = [g, h];
            checks.push(Check {
                id: format!("kahler.{g}.{h}"),
                anchor: "G equals the Kahler area cocycle, which is bounded by pi",
                inputs: env.inputs(&pair, "kahler"),
                tol: tol.cross,
                eval: Box::new(move |_| {
                    let (gm, hm) = (env.map(g), env.map(h));
                    let value = env.ctx.cocycle(gm, hm)?;
                    let k = env.ctx.kahler_cocycle(gm, hm)?;
                    let mut rec = Record::residual(
                        format!("kahler.{g}.{h}"),
                        "G equals the Kahler area cocycle, which is bounded by pi",
                        &env.inputs(&pair, "kahler"),
                        json!({ "G": value, "K": k }),
                        (value - k).abs(),
                        tol.cross,
                    );
                    if k.abs() >= PI {
                        rec.pass = false;
                        rec = rec.with_note("|K| reached pi");
                    }
                    let t = env.ctx.trilateral_identity(gm, hm)?;
                    let area = Record::residual(
                        format!("trilateral_area.{g}.{h}"),
                        "trilateral boundary integral equals the geodesic triangle area",
                        &env.inputs(&pair, "trilateral_area"),
                        json!({ "rhs": t.rhs, "area": k }),
                        (t.rhs - k).abs(),
                        tol.cross,
                    );
                    Ok(vec![rec, area])
                }),
            });
        }
    }
    let pairs = env.scenario.samples.pairs;
    checks.push(Check {
        id: "kahler.random".into(),
        anchor: "G equals the Kahler area cocycle, which is bounded by pi",
        inputs: env.inputs(&[], &format!("random isometry pairs {pairs}")),
        tol: tol.cross,
        eval: Box::new(move |rng| {
            let (mut worst, mut max_k) = (0.0f64, 0.0f64);
            for _ in 0..pairs {
                let (g, h) = (families::moebius(rng, 0.8)?, families::moebius(rng, 0.8)?);
                let k = env.ctx.kahler_cocycle(&g, &h)?;
                worst = worst.max((env.ctx.cocycle(&g, &h)? - k).abs());
                max_k = max_k.max(k.abs());
            }
            let mut rec = Record::residual(
                "kahler.random",
                "G equals the Kahler area cocycle, which is bounded by pi",
                &env.inputs(&[], &format!("random isometry pairs {pairs}")),
                json!({ "pairs": pairs, "max_abs_K": max_k }),
                worst,
                tol.cross,
            );
            rec.pass &= max_k < PI;
            Ok(vec![rec])
        }),
    });
    checks.push(Check {
        id: "gauss_bonnet.random".into(),
        anchor: "Gauss-Bonnet area equals the boundary integral of lambda",
        inputs: env.inputs(&[], &format!("random triangles {pairs}")),
        tol: tol.identity,
        eval: Box::new(move |rng| {
            let model = env.ctx.model();
            let mut worst = 0.0f64;
            for _ in 0..pairs {
                let p: Vec<Point<f64>> = (0..3).map(|_| families::disk_point(rng, 0.85)).collect();
                let area = model.triangle_area_gauss_bonnet(&p[0], &p[1], &p[2])?;
                let boundary = PathSpec::Concat(vec![
                    model.geodesic(&p[0], &p[1])?,
                    model.geodesic(&p[1], &p[2])?,
                    model.geodesic(&p[2], &p[0])?,
                ]);
                let stokes = integrate_one_form(|q| model.lambda_at(q), &boundary, 1e-11)?.value;
                worst = worst.max((area - stokes).abs());
            }
            Ok(vec![Record::residual(
                "gauss_bonnet.random",
                "Gauss-Bonnet area equals the boundary integral of lambda",
                &env.inputs(&[], &format!("random triangles {pairs}")),
                json!({ "triangles": pairs }),
                worst,
                tol.identity,
            )])
        }),
    });
    checks
}

fn distortion<'a>(env: &'a Env<'a>) -> std::result::Result<Vec<Check<'a>>, String> {
    let spec = env
        .scenario
        .distortion
        .as_ref()
        .ok_or("suite distortion needs a [distortion] table")?;
    let tol = env.tol;
    let id = "distortion".to_string();
    let mut names: Vec<&str> = vec![spec.h.as_str()];
    names.extend(spec.generators.iter().map(String::as_str));
    names.extend(spec.sample.iter().map(String::as_str));
    let extra = json!({
        "hamiltonian": env.scenario.hamiltonians.get(&spec.hamiltonian),
        "spec": spec,
    })
    .to_string();
    let inputs = env.inputs(&names, &extra);
    let check = Check {
        id,
        anchor: "G(g^n, h) = n G(g, h) forces positive translation length",
        inputs: inputs.clone(),
        tol: tol.linearity,
        eval: Box::new(move |rng| {
            let settings = IntegratorSettings::default().with_exact_radial(spec.exact_radial);
            let iso = IsotopySpec::new(
                env.built.hamiltonians[&spec.hamiltonian].clone(),
                spec.hamiltonian.clone(),
            )
            .with_settings(settings);
            let generators: Vec<(String, SympMap<f64>)> = spec
                .generators
                .iter()
                .map(|n| (n.clone(), env.map(n).clone()))
                .collect();
            let mut probes = vec![env.ctx.basepoint().clone()];
            probes.extend((0..3).map(|_| env.random_point(rng, 1.0)));
            // points inside the supports, where compactly supported maps act
            for (_, g) in &generators {
                for s in g.supports().unwrap_or_default() {
                    for _ in 0..2 {
                        let mut p =
                            families::plane_point::<f64, _>(rng, s.center.dim(), 0.5 * s.radius);
                        p.coords
                            .iter_mut()
                            .zip(&s.center.coords)
                            .for_each(|(x, c)| *x += c);
                        if env.ctx.model().check_point(&p).is_ok() {
                            probes.push(p);
                        }
                    }
                }
            }
            let set = GeneratingSet::new(generators, spec.structure.into())?.with_probes(probes);
            let sample: Vec<SympMap<f64>> =
                spec.sample.iter().map(|n| env.map(n).clone()).collect();
            let report =
                distortion_report(&env.ctx, &iso, env.map(&spec.h), &set, &sample, spec.n_max)?;
            let rec = |id: String, anchor: &str, value: Value, residual: f64, tol: f64| {
                Record::residual(id, anchor, &inputs, value, residual, tol)
            };
            let mut out = vec![rec(
                "distortion.cross_check".into(),
                "G(g, h) equals the action difference of the two fixed points",
                json!({ "G": report.cocycle_value, "action_difference": report.action_difference }),
                report.cross_check_residual,
                tol.cross,
            )];
            for row in &report.linearity {
                out.push(rec(
                    format!("distortion.linearity.n{:02}", row.n),
                    "G(., h) is a homomorphism on maps fixing x and h(x)",
                    json!({ "n": row.n, "value": row.value, "expected": row.expected }),
                    row.relative_deviation,
                    tol.linearity,
                ));
            }
            let mut growth = rec(
                "distortion.monotone_growth".into(),
                "|G(g^n, h)| grows without bound",
                json!(report
                    .linearity
                    .iter()
                    .map(|r| r.value.abs())
                    .collect::<Vec<_>>()),
                0.0,
                0.0,
            );
            growth.pass = report.monotone_growth;
            out.push(growth);
            for (name, lower, upper) in &report.generator_norms {
                let excess = upper.map_or(0.0, |u| (lower - u).max(0.0));
                out.push(rec(
                    format!("distortion.norm.{name}"),
                    "sampled cocycle norm stays below the analytic bound",
                    json!({ "sampled_lower": lower, "analytic_upper": upper }),
                    excess,
                    0.0,
                ));
            }
            // the bound is about g itself, so compare only when g is a generator
            let g_name = spec.generators.iter().find(|n| {
                matches!(env.scenario.maps.get(*n), Some(MapDef::Flow { hamiltonian, time, .. })
                    if *hamiltonian == spec.hamiltonian && *time == 1.0)
            });
            let tl = match g_name {
                Some(n) => Some(translation_length_estimate(
                    &GroupWord::parse(n)?,
                    &set,
                    spec.n_max.min(16),
                )?),
                None => None,
            };
            let excess = match (report.certified_bound, &tl) {
                (Some(c), Some(t)) => (c - t.estimate).max(0.0),
                _ => 0.0,
            };
            out.push(
                rec(
                    "distortion.bound".into(),
                    "translation length of g is at least |G(g,h)| / (2 max generator norm)",
                    json!({
                        "diagnostic": report.diagnostic_bound,
                        "certified": report.certified_bound,
                        "translation_length": tl.as_ref().map(|t| t.estimate),
                        "translation_length_limit": tl.as_ref().and_then(|t| t.limit),
                    }),
                    excess,
                    0.0,
                )
                .with_note(report.caveats.join("; ")),
            );
            Ok(out)
        }),
    };
    Ok(vec![check])
}

/// Rest point of the Hamiltonian, where one is known in closed form.
fn rest_point(def: &HamiltonianDef) -> Option<Vec<f64>> {
    match def {
        HamiltonianDef::Bump { center, .. }
        | HamiltonianDef::Gaussian { center, .. }
        | HamiltonianDef::Rotation { center, .. } => Some(center.clone()),
        HamiltonianDef::Polynomial { quadratic, linear } => {
            let n = linear.len();
            let q = symplectic_cocycle::linalg::Matrix::from_row_major(n, n, quadratic.clone());
            let inv = q.inverse()?;
            Some(inv.mul_vec(linear).iter().map(|x| -x).collect())
        }
    }
}

fn hamiltonian<'a>(env: &'a Env<'a>) -> Vec<Check<'a>> {
    let tol = env.tol;
    let mut checks: Vec<Check<'a>> = Vec::new();
    let hams: &'a BTreeMap<String, HamiltonianSpec<f64>> = &env.built.hamiltonians;
    for (name, ham) in hams {
        let def = &env.scenario.hamiltonians[name];
        let inputs = json!({
            "model": env.scenario.model,
            "basepoint": env.ctx.basepoint().coords,
            "hamiltonian": def,
            "name": name,
        })
        .to_string();
        let scale = ham.support().map_or(1.5, |s| s.radius * 1.2);
        let centre = rest_point(def);
        let points = env.scenario.samples.points;
        let anchor = "action functional: dF = dK, reparametrization invariance, rest points";
        let id = format!("hamiltonian.{name}");
        checks.push(Check {
            id: id.clone(),
            anchor,
            inputs: inputs.clone(),
            tol: tol.cross,
            eval: Box::new(move |rng| {
                let model = env.ctx.model();
                let near = |rng: &mut ChaCha8Rng| -> Point<f64> {
                    match &centre {
                        Some(c) if !model.is_disk() => {
                            let mut p = families::plane_point(rng, c.len(), scale);
                            p.coords.iter_mut().zip(c).for_each(|(x, c)| *x += c);
                            p
                        }
                        _ => families::disk_point(rng, 0.8),
                    }
                };
                let samples: Vec<(f64, Point<f64>)> = (0..points)
                    .map(|_| (rng.gen_range(0.0..1.0), near(rng)))
                    .collect();
                let rec = |suffix: &str, anchor: &str, value: Value, residual: f64, tol: f64| {
                    Record::residual(
                        format!("{id}.{suffix}"),
                        anchor,
                        &inputs,
                        value,
                        residual,
                        tol,
                    )
                };
                let mut out = vec![
                    rec(
                        "gradient",
                        "coded gradient matches central differences of the value",
                        json!({ "points": points }),
                        ham.gradient_consistency(&samples),
                        tol.cross,
                    ),
                    rec(
                        "support",
                        "Hamiltonian vanishes outside its declared support",
                        json!({ "points": points }),
                        ham.support_violation(&samples),
                        0.0,
                    ),
                ];
                let iso = IsotopySpec::new(ham.clone(), name.clone());
                let g = iso.time_one_map(model)?;
                let x = env.ctx.basepoint();
                let fx = env.ctx.action_functional(&iso, x)?;
                let mut incr = 0.0f64;
                for (_, y) in samples.iter().take(points.min(10)) {
                    let lhs = env.ctx.action_functional(&iso, y)? - fx;
                    incr = incr.max((lhs - env.ctx.k_tilde(&g, y)?).abs());
                }
                out.push(rec(
                    "increment",
                    "F(y) - F(x) equals the primitive of g*lambda - lambda",
                    json!({ "points": points.min(10) }),
                    incr,
                    tol.cross,
                ));
                if ham.is_autonomous() {
                    let p = &samples
                        .first()
                        .map(|s| s.1.clone())
                        .unwrap_or_else(|| x.clone());
                    let mut rep = 0.0f64;
                    for r in [
                        Reparametrization::DoubleThenFreeze,
                        Reparametrization::Power(2),
                    ] {
                        let iso2 = IsotopySpec::new(ham.reparametrized(r), "reparametrized");
                        rep = rep.max(env.ctx.isotopy_independence_residual(&iso, &iso2, p)?);
                    }
                    out.push(rec(
                        "reparametrization",
                        "the action does not depend on the time parametrization",
                        json!({ "point": p.coords }),
                        rep,
                        tol.cross,
                    ));
                }
                if let Some(c) = &centre {
                    let cp = Point::new(c.clone());
                    if model.check_point(&cp).is_ok() {
                        let f = env.ctx.action_functional(&iso, &cp)?;
                        let h = ham.value(0.0, c);
                        out.push(rec(
                            "rest_point",
                            "at a rest point the action equals the Hamiltonian",
                            json!({ "F": f, "H": h }),
                            (f - h).abs(),
                            tol.identity,
                        ));
                    }
                }
                Ok(out)
            }),
        });
    }
    checks
}

/// `G(g, h)` over the grid as CSV with header `g,h,value`.
fn table(env: &Env) -> (Vec<Record>, String) {
    let all = env.names();
    let (rows, cols): (Vec<&str>, Vec<&str>) = match &env.scenario.table {
        Some(t) if !t.rows.is_empty() || !t.cols.is_empty() => {
            let pick = |v: &Vec<String>| -> Vec<&str> {
                if v.is_empty() {
                    all.clone()
                } else {
                    v.iter()
                        .map(|s| {
                            env.built
                                .maps
                                .get_key_value(s)
                                .map(|(k, _)| k.as_str())
                                .unwrap_or("")
                        })
                        .collect()
                }
            };
            (pick(&t.rows), pick(&t.cols))
        }
        _ => (all.clone(), all.clone()),
    };
    let cells: Vec<(&str, &str)> = rows
        .iter()
        .flat_map(|g| cols.iter().map(move |h| (*g, *h)))
        .collect();
    let values: Vec<(String, Record)> = cells
        .par_iter()
        .map(|(g, h)| {
            let id = format!("table.{g}.{h}");
            let inputs = env.inputs(&[g, h], "table");
            match env.ctx.cocycle(env.map(g), env.map(h)) {
                Ok(v) => (
                    format!("{g},{h},{v:.15e}"),
                    Record::residual(id, "G over a grid of maps", &inputs, json!(v), 0.0, 0.0),
                ),
                Err(e) => (
                    format!("{g},{h},nan"),
                    Record::failed(id, "G over a grid of maps", &inputs, 0.0, &e),
                ),
            }
        })
        .collect();
    let mut csv = String::from("g,h,value\n");
    let mut records = Vec::with_capacity(values.len());
    for (line, rec) in values {
        csv.push_str(&line);
        csv.push('\n');
        records.push(rec);
    }
    (records, csv)
}
