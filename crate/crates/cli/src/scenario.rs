//! Scenario files: TOML descriptions of a model, named Hamiltonians and maps,
//! the suite to run and its tolerances.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use symplectic_cocycle::geometry::{ManifoldModel, PlanePrimitive, Point};
use symplectic_cocycle::groups::GroupStructure;
use symplectic_cocycle::linalg::Matrix;
use symplectic_cocycle::symplectomap::{
    BaseDiffeo, HamiltonianSpec, IntegratorSettings, Moebius, SympMap,
};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Verify,
    Table,
    Kahler,
    Distortion,
    Hamiltonian,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Verify => "verify",
            Suite::Table => "table",
            Suite::Kahler => "kahler",
            Suite::Distortion => "distortion",
            Suite::Hamiltonian => "hamiltonian",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Primitive {
    #[default]
    Radial,
    Liouville,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelSpec {
    Plane {
        #[serde(default = "one")]
        pairs: usize,
        #[serde(default)]
        primitive: Primitive,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basepoint: Option<Vec<f64>>,
    },
    Disk {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basepoint: Option<Vec<f64>>,
    },
}

fn one() -> usize {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Quadrature tolerance of every line integral.
    pub quadrature: f64,
    /// Exact identities (cocycle, basepoint change).
    pub identity: f64,
    /// Identities between independently computed quantities.
    pub cross: f64,
    /// Closed-form values.
    pub closed_form: f64,
    /// Relative linearity of `n -> G(g^n, h)`.
    pub linearity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quadrature: 1e-9,
            identity: 1e-6,
            cross: 1e-5,
            closed_form: 1e-8,
            linearity: 1e-4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleSizes {
    /// Random triples for the cocycle identity.
    pub triples: usize,
    /// Random pairs for pairwise identities.
    pub pairs: usize,
    /// Random points for pointwise checks.
    pub points: usize,
}

impl Default for SampleSizes {
    fn default() -> Self {
        Self {
            triples: 20,
            pairs: 20,
            points: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum HamiltonianDef {
    /// Compactly supported `A psi(|z - c|^2 / R^2)`.
    Bump {
        center: Vec<f64>,
        radius: f64,
        amplitude: f64,
    },
    Gaussian {
        center: Vec<f64>,
        width: f64,
        amplitude: f64,
    },
    /// `1/2 z^T Q z + b^T z` with `Q` row-major.
    Polynomial {
        quadratic: Vec<f64>,
        linear: Vec<f64>,
    },
    /// Rigid rotation about `center` at `rate` radians per unit time.
    Rotation { center: Vec<f64>, rate: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapDef {
    Identity,
    Translation {
        shift: Vec<f64>,
    },
    /// `z -> A z + shift` with `A` row-major and symplectic.
    Affine {
        matrix: Vec<f64>,
        shift: Vec<f64>,
    },
    /// `transvection(target) o rotation(angle)` on the disk.
    Moebius {
        target: Vec<f64>,
        #[serde(default)]
        angle: f64,
    },
    /// Time-`time` map of a named Hamiltonian.
    Flow {
        hamiltonian: String,
        #[serde(default = "unit_time")]
        time: f64,
        #[serde(default)]
        exact_radial: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        step: Option<f64>,
    },
    /// Lift of `q -> scale q + shift` to `T^* R`.
    LiftAffine {
        scale: f64,
        shift: f64,
    },
    /// Lift of `q -> q + amp sin(rate q)` to `T^* R`.
    LiftWarp {
        amp: f64,
        rate: f64,
    },
    /// Composite of named maps, leftmost applied last; `name^-1` inverts.
    Word {
        factors: Vec<String>,
    },
}

fn unit_time() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    #[default]
    Free,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistortionSpec {
    /// Autonomous Hamiltonian whose time-one map `g` fixes `x` and `h(x)`.
    pub hamiltonian: String,
    #[serde(default)]
    pub exact_radial: bool,
    /// Map sending the basepoint to the second fixed point.
    pub h: String,
    pub generators: Vec<String>,
    #[serde(default)]
    pub structure: Structure,
    /// Maps `h` over which generator norms are sampled.
    pub sample: Vec<String>,
    pub n_max: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TableSpec {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub suite: Suite,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub samples: SampleSizes,
    pub model: ModelSpec,
    #[serde(default)]
    pub hamiltonians: BTreeMap<String, HamiltonianDef>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distortion: Option<DistortionSpec>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Io(e.to_string()))
    }

    /// Resolves every name and builds the model and maps.
    pub fn build(&self) -> Result<Built, CliError> {
        let model = self.build_model()?;
        let mut hamiltonians = BTreeMap::new();
        for (name, def) in &self.hamiltonians {
            hamiltonians.insert(name.clone(), build_hamiltonian(name, def, model.dim())?);
        }
        let mut maps = BTreeMap::new();
        for name in self.maps.keys() {
            let mut visiting = HashSet::new();
            let m = self.build_map(name, &model, &hamiltonians, &mut visiting)?;
            maps.insert(name.clone(), m);
        }
        if let Some(t) = &self.table {
            for n in t.rows.iter().chain(&t.cols) {
                require_map(&maps, n, "table")?;
            }
        }
        if let Some(d) = &self.distortion {
            let h = hamiltonians.get(&d.hamiltonian).ok_or_else(|| {
                CliError::Validation(format!(
                    "distortion refers to undefined hamiltonian {:?}",
                    d.hamiltonian
                ))
            })?;
            if !h.is_autonomous() {
                return Err(CliError::Validation(
                    "distortion hamiltonian must be autonomous".into(),
                ));
            }
            require_map(&maps, &d.h, "distortion.h")?;
            for n in d.generators.iter().chain(&d.sample) {
                require_map(&maps, n, "distortion")?;
            }
            if d.generators.is_empty() || d.sample.is_empty() || d.n_max == 0 {
                return Err(CliError::Validation(
                    "distortion needs generators, a sample and n_max >= 1".into(),
                ));
            }
        }
        if self.suite == Suite::Distortion && self.distortion.is_none() {
            return Err(CliError::Validation(
                "suite distortion needs a [distortion] table".into(),
            ));
        }
        if self.suite == Suite::Kahler && !model.is_disk() {
            return Err(CliError::Validation(
                "suite kahler needs the disk model".into(),
            ));
        }
        Ok(Built {
            model,
            hamiltonians,
            maps,
        })
    }

    fn build_model(&self) -> Result<ManifoldModel<f64>, CliError> {
        let (model, basepoint) = match &self.model {
            ModelSpec::Plane {
                pairs,
                primitive,
                basepoint,
            } => {
                if *pairs == 0 {
                    return Err(CliError::Validation(
                        "model.pairs must be at least 1".into(),
                    ));
                }
                let prim = match primitive {
                    Primitive::Radial => PlanePrimitive::Radial,
                    Primitive::Liouville => PlanePrimitive::Liouville,
                };
                (ManifoldModel::plane(*pairs, prim), basepoint)
            }
            ModelSpec::Disk { basepoint } => (ManifoldModel::disk(), basepoint),
        };
        match basepoint {
            None => Ok(model),
            Some(b) => {
                check_len("model.basepoint", b, model.dim())?;
                model
                    .with_basepoint(Point::new(b.clone()))
                    .map_err(|e| CliError::Validation(format!("model.basepoint: {e}")))
            }
        }
    }

    fn build_map(
        &self,
        name: &str,
        model: &ManifoldModel<f64>,
        hamiltonians: &BTreeMap<String, HamiltonianSpec<f64>>,
        visiting: &mut HashSet<String>,
    ) -> Result<SympMap<f64>, CliError> {
        let def = self
            .maps
            .get(name)
            .ok_or_else(|| CliError::Validation(format!("undefined map {name:?}")))?;
        if !visiting.insert(name.to_string()) {
            return Err(CliError::Validation(format!(
                "map {name:?} refers to itself"
            )));
        }
        let invalid =
            |e: symplectic_cocycle::Error| CliError::Validation(format!("map {name:?}: {e}"));
        let dim = model.dim();
        let m = match def {
            MapDef::Identity => SympMap::identity(),
            MapDef::Translation { shift } => {
                self.plane_only(name, model)?;
                check_len(&format!("maps.{name}.shift"), shift, dim)?;
                SympMap::translation(shift.clone())
            }
            MapDef::Affine { matrix, shift } => {
                self.plane_only(name, model)?;
                check_len(&format!("maps.{name}.matrix"), matrix, dim * dim)?;
                check_len(&format!("maps.{name}.shift"), shift, dim)?;
                SympMap::affine(
                    Matrix::from_row_major(dim, dim, matrix.clone()),
                    shift.clone(),
                )
                .map_err(invalid)?
            }
            MapDef::Moebius { target, angle } => {
                if !model.is_disk() {
                    return Err(CliError::Validation(format!(
                        "map {name:?}: moebius maps live on the disk"
                    )));
                }
                check_len(&format!("maps.{name}.target"), target, 2)?;
                let m = Moebius::transvection(Complex::new(target[0], target[1]))
                    .map_err(invalid)?
                    .compose(&Moebius::rotation(*angle));
                SympMap::moebius(m)
            }
            MapDef::Flow {
                hamiltonian,
                time,
                exact_radial,
                step,
            } => {
                let h = hamiltonians.get(hamiltonian).ok_or_else(|| {
                    CliError::Validation(format!(
                        "map {name:?} refers to undefined hamiltonian {hamiltonian:?}"
                    ))
                })?;
                let mut settings = IntegratorSettings::default().with_exact_radial(*exact_radial);
                if let Some(s) = step {
                    if !(*s > 0.0) {
                        return Err(CliError::Validation(format!(
                            "map {name:?}: step must be positive"
                        )));
                    }
                    settings.step = *s;
                }
                if h.support().is_some() {
                    SympMap::compact_bump(model.clone(), h.clone(), *time, settings)
                } else {
                    SympMap::flow(model.clone(), h.clone(), *time, settings)
                }
                .map_err(invalid)?
            }
            MapDef::LiftAffine { scale, shift } => {
                self.cotangent_only(name, model)?;
                let base = BaseDiffeo::affine(Matrix::from_rows(&[vec![*scale]]), vec![*shift])
                    .map_err(invalid)?;
                SympMap::cotangent_lift(base)
            }
            MapDef::LiftWarp { amp, rate } => {
                self.cotangent_only(name, model)?;
                SympMap::cotangent_lift(BaseDiffeo::warp(*amp, *rate).map_err(invalid)?)
            }
            MapDef::Word { factors } => {
                let mut out = Vec::with_capacity(factors.len());
                for f in factors {
                    let (base, inverse) = match f.strip_suffix("^-1") {
                        Some(b) => (b, true),
                        None => (f.as_str(), false),
                    };
                    let m = self.build_map(base, model, hamiltonians, visiting)?;
                    out.push(if inverse {
                        m.inverse().map_err(invalid)?
                    } else {
                        m
                    });
                }
                SympMap::word(out)
            }
        };
        visiting.remove(name);
        Ok(m)
    }

    fn plane_only(&self, name: &str, model: &ManifoldModel<f64>) -> Result<(), CliError> {
        if model.is_disk() {
            return Err(CliError::Validation(format!(
                "map {name:?}: translations and affine maps live on the plane"
            )));
        }
        Ok(())
    }

    fn cotangent_only(&self, name: &str, model: &ManifoldModel<f64>) -> Result<(), CliError> {
        if model.is_disk() || model.dim() != 2 {
            return Err(CliError::Validation(format!(
                "map {name:?}: cotangent lifts need the plane with one pair (T^* R)"
            )));
        }
        Ok(())
    }
}

fn require_map(
    maps: &BTreeMap<String, SympMap<f64>>,
    name: &str,
    place: &str,
) -> Result<(), CliError> {
    if maps.contains_key(name) {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "{place} refers to undefined map {name:?}"
        )))
    }
}

fn check_len(field: &str, v: &[f64], expected: usize) -> Result<(), CliError> {
    if v.len() != expected {
        return Err(CliError::Validation(format!(
            "{field} has {} entries, expected {expected}",
            v.len()
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Validation(format!(
            "{field} has a non-finite entry"
        )));
    }
    Ok(())
}

fn build_hamiltonian(
    name: &str,
    def: &HamiltonianDef,
    dim: usize,
) -> Result<HamiltonianSpec<f64>, CliError> {
    let field = |f: &str| format!("hamiltonians.{name}.{f}");
    let positive = |f: &str, v: f64| {
        if v > 0.0 {
            Ok(())
        } else {
            Err(CliError::Validation(format!(
                "{} must be positive",
                field(f)
            )))
        }
    };
    let h = match def {
        HamiltonianDef::Bump {
            center,
            radius,
            amplitude,
        } => {
            check_len(&field("center"), center, dim)?;
            positive("radius", *radius)?;
            HamiltonianSpec::bump(Point::new(center.clone()), *radius, *amplitude)
        }
        HamiltonianDef::Gaussian {
            center,
            width,
            amplitude,
        } => {
            check_len(&field("center"), center, dim)?;
            positive("width", *width)?;
            HamiltonianSpec::gaussian(Point::new(center.clone()), *width, *amplitude)
        }
        HamiltonianDef::Polynomial { quadratic, linear } => {
            check_len(&field("quadratic"), quadratic, dim * dim)?;
            check_len(&field("linear"), linear, dim)?;
            HamiltonianSpec::quadratic(quadratic.clone(), linear.clone())
        }
        HamiltonianDef::Rotation { center, rate } => {
            check_len(&field("center"), center, dim)?;
            HamiltonianSpec::rotation(Point::new(center.clone()), *rate)
        }
    };
    Ok(h.with_label(name))
}

/// A validated scenario with its objects constructed.
pub struct Built {
    pub model: ManifoldModel<f64>,
    pub hamiltonians: BTreeMap<String, HamiltonianSpec<f64>>,
    pub maps: BTreeMap<String, SympMap<f64>>,
}

impl From<Structure> for GroupStructure {
    fn from(s: Structure) -> Self {
        match s {
            Structure::Free => GroupStructure::Free,
            Structure::Unknown => GroupStructure::Unknown,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "minimal"
suite = "verify"

[model]
kind = "plane"

[maps.u]
kind = "translation"
shift = [1.0, 0.0]

[maps.v]
kind = "translation"
shift = [0.0, 1.0]

[maps.w]
kind = "word"
factors = ["u", "v^-1"]
"#;

    #[test]
    fn minimal_scenario_builds() {
        let s = Scenario::parse(MINIMAL).unwrap();
        assert_eq!(s.tolerances, Tolerances::default());
        let b = s.build().unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(b.maps.len(), 3);
        let p = b.maps["w"].apply(&Point::new(vec![0.0, 0.0])).unwrap();
        assert_eq!(p.coords, vec![1.0, -1.0]);
    }

    #[test]
    fn round_trip_through_toml() {
        let s = Scenario::parse(MINIMAL).unwrap();
        let again = Scenario::parse(&s.to_toml().unwrap()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn undefined_names_are_reported() {
        let text = MINIMAL.replace("\"v^-1\"", "\"nope\"");
        let err = Scenario::parse(&text).unwrap().build().err().unwrap();
        assert!(
            matches!(&err, CliError::Validation(m) if m.contains("\"nope\"")),
            "{err}"
        );
    }

    #[test]
    fn self_reference_is_rejected() {
        let text = MINIMAL.replace("\"v^-1\"", "\"w\"");
        assert!(Scenario::parse(&text).unwrap().build().is_err());
    }

    #[test]
    fn disk_targets_must_lie_in_the_disk() {
        let text = r#"
name = "bad"
suite = "kahler"
[model]
kind = "disk"
[maps.m]
kind = "moebius"
target = [1.2, 0.0]
"#;
        let err = Scenario::parse(text).unwrap().build().err().unwrap();
        assert!(matches!(err, CliError::Validation(_)));
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = Scenario::parse("name = \nsuite = \"verify\"").unwrap_err();
        assert!(
            matches!(&err, CliError::Parse(m) if m.contains("line")),
            "{err}"
        );
    }
}
