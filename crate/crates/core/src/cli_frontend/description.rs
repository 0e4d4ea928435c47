use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::InputError;
use crate::cc_filter::Candidate;
use crate::curve_model::{CurvePoint, HyperellipticCurve, LocalPoint, ResidueDisk};
use crate::mumford_jacobian::FormalClass;
use crate::ring_tower::rational::parse_rational;
use crate::ring_tower::{LocalRing, PadicRing, Poly, Rational};

/// A rational point in original coordinates, or `"infinity"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Named(String),
    Affine { x: String, y: String },
}

impl PointSpec {
    pub fn infinity() -> Self {
        PointSpec::Named("infinity".to_string())
    }
}

fn default_basepoint() -> PointSpec {
    PointSpec::infinity()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub point: PointSpec,
    pub coefficient: i64,
}

/// A Mordell-Weil element `sum c_i (P_i - infinity)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub terms: Vec<TermSpec>,
}

/// Either a marked rational point or a `Z_p`-point given by little-endian
/// base-`p` digits of its original coordinates modulo `p^precision`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSpec {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational: Option<PointSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
}

/// An `F_p`-point in original coordinates, or `"infinity"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FpPointSpec {
    Named(String),
    Affine { x: u64, y: u64 },
}

/// A `Z_p`-point for an explicit lift: original coordinates as digits, the
/// parameter `t = x^g / y` near infinity, or `"infinity"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LocalSpec {
    Named(String),
    Affine { x: Vec<u64>, y: Vec<u64>, precision: u32 },
    NearInfinity { t: Vec<u64>, precision: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftSpec {
    pub disk: FpPointSpec,
    pub q0: LocalSpec,
    pub q1: LocalSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux_prime_bound: Option<u64>,
}

impl OptionsSpec {
    fn is_empty(&self) -> bool {
        *self == OptionsSpec::default()
    }
}

/// The input document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDescription {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Ascending coefficients of `f` in `y^2 + h y = f`.
    pub f: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub h: Vec<String>,
    pub p: u64,
    #[serde(default = "default_basepoint")]
    pub basepoint: PointSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub known_points: Vec<PointSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<CandidateSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lifts: Vec<LiftSpec>,
    #[serde(default, skip_serializing_if = "OptionsSpec::is_empty")]
    pub options: OptionsSpec,
}

/// A validated description.
#[derive(Clone, Debug)]
pub struct Problem {
    pub description: CurveDescription,
    pub curve: HyperellipticCurve,
    pub basepoint: CurvePoint<Rational>,
    pub known: Vec<CurvePoint<Rational>>,
    pub generators: Vec<FormalClass>,
    pub candidates: Vec<Candidate>,
    pub lifts: BTreeMap<ResidueDisk, (LocalPoint, LocalPoint)>,
}

fn err(field: impl Into<String>, message: impl ToString) -> InputError {
    InputError { field: field.into(), message: message.to_string() }
}

fn poly(field: &str, coeffs: &[String]) -> Result<Poly<Rational>, InputError> {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            parse_rational(c).ok_or_else(|| err(format!("{field}[{i}]"), format!("'{c}' is not a rational number")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Poly::new)
}

fn point(curve: &HyperellipticCurve, field: &str, spec: &PointSpec) -> Result<CurvePoint<Rational>, InputError> {
    match spec {
        PointSpec::Named(name) if name == "infinity" => Ok(CurvePoint::Infinity),
        PointSpec::Named(name) => {
            Err(err(field, format!("unknown point '{name}'; use \"infinity\" or {{\"x\", \"y\"}}")))
        }
        PointSpec::Affine { x, y } => {
            let px = parse_rational(x)
                .ok_or_else(|| err(format!("{field}.x"), format!("'{x}' is not a rational number")))?;
            let py = parse_rational(y)
                .ok_or_else(|| err(format!("{field}.y"), format!("'{y}' is not a rational number")))?;
            curve.rational_point(&px, &py).map_err(|e| err(field, e))
        }
    }
}

fn local(curve: &HyperellipticCurve, field: &str, spec: &LocalSpec) -> Result<LocalPoint, InputError> {
    let p = curve.prime();
    match spec {
        LocalSpec::Named(name) if name == "infinity" => Ok(LocalPoint::Infinity),
        LocalSpec::Named(name) => Err(err(field, format!("unknown point '{name}'"))),
        LocalSpec::Affine { x, y, precision } => {
            let ring = PadicRing::new(p, *precision).map_err(|e| err(format!("{field}.precision"), e))?;
            curve.local_point(ring.from_digits(x), ring.from_digits(y)).map_err(|e| err(field, e))
        }
        LocalSpec::NearInfinity { t, precision } => {
            let ring = PadicRing::new(p, *precision).map_err(|e| err(format!("{field}.precision"), e))?;
            let t = ring.from_digits(t);
            if !t.reduces_to_zero() {
                return Err(err(format!("{field}.t"), "the parameter near infinity must be divisible by p"));
            }
            Ok(LocalPoint::NearInfinity { t })
        }
    }
}

impl CurveDescription {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| err(format!("line {} column {}", e.line(), e.column()), e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptions serialize")
    }

    /// Build and check the curve and every point in the description.
    pub fn validate(&self) -> Result<Problem, InputError> {
        let f = poly("f", &self.f)?;
        let h = poly("h", &self.h)?;
        let curve = HyperellipticCurve::validate(f, h, self.p).map_err(|e| err("f", e))?;
        let basepoint = point(&curve, "basepoint", &self.basepoint)?;
        let known = self
            .known_points
            .iter()
            .enumerate()
            .map(|(i, s)| point(&curve, &format!("known_points[{i}]"), s))
            .collect::<Result<Vec<_>, _>>()?;
        let mut generators = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            let mut class = FormalClass::new();
            for (j, t) in g.terms.iter().enumerate() {
                class.push(point(&curve, &format!("generators[{i}].terms[{j}].point"), &t.point)?, t.coefficient);
            }
            generators.push(class);
        }
        let candidates = self
            .candidates
            .iter()
            .enumerate()
            .map(|(i, c)| candidate(&curve, &format!("candidates[{i}]"), c))
            .collect::<Result<Vec<_>, _>>()?;
        let mut lifts = BTreeMap::new();
        for (i, l) in self.lifts.iter().enumerate() {
            let field = format!("lifts[{i}]");
            let center = match &l.disk {
                FpPointSpec::Named(n) if n == "infinity" => CurvePoint::Infinity,
                FpPointSpec::Named(n) => return Err(err(format!("{field}.disk"), format!("unknown point '{n}'"))),
                FpPointSpec::Affine { x, y } => curve.fp_point(*x, *y).map_err(|e| err(format!("{field}.disk"), e))?,
            };
            let disk = curve.disk_of(&center).map_err(|e| err(format!("{field}.disk"), e))?;
            let q0 = local(&curve, &format!("{field}.q0"), &l.q0)?;
            let q1 = local(&curve, &format!("{field}.q1"), &l.q1)?;
            for (name, q) in [("q0", &q0), ("q1", &q1)] {
                if curve.reduce_local(q) != disk.center {
                    return Err(err(format!("{field}.{name}"), "lift does not reduce to the disk centre"));
                }
            }
            lifts.insert(disk, (q0, q1));
        }
        Ok(Problem { description: self.clone(), curve, basepoint, known, generators, candidates, lifts })
    }
}

fn candidate(curve: &HyperellipticCurve, field: &str, spec: &CandidateSpec) -> Result<Candidate, InputError> {
    match (&spec.rational, &spec.x, &spec.y, spec.precision) {
        (Some(r), None, None, None) => {
            let pt = point(curve, &format!("{field}.rational"), r)?;
            Ok(Candidate { label: spec.label.clone(), point: crate::cc_filter::CandidatePoint::Rational(pt) })
        }
        (None, Some(x), Some(y), Some(m)) => {
            Candidate::from_digits(curve, &spec.label, x, y, m).map_err(|e| err(field, e))
        }
        _ => Err(err(field, "give either 'rational' or all of 'x', 'y' and 'precision'")),
    }
}
