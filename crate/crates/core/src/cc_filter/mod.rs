//! Filtering externally supplied Chabauty-Coleman candidates down to the
//! points whose Abel-Jacobi image can lie in the Mordell-Weil closure, and
//! classifying the points that are removed.

use serde::Serialize;
use thiserror::Error;

use crate::coleman_tiny::{kernel_log, ColemanError, LogVector};
use crate::curve_model::{CurveError, CurvePoint, HyperellipticCurve, LocalPoint};
use crate::glc_engine::{mbar0_from_lattice, sieve_with_table, GlcError, SieveOutcome};
use crate::mumford_jacobian::{subgroup_of, ClassPoint, FormalClass, JacobianError, DEFAULT_SUBGROUP_CAP};
use crate::ring_tower::linalg::solve_mod_pk;
use crate::ring_tower::{LocalRing, PadicResidue, PadicRing, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("candidate {label} is known only modulo p^{precision}; at least p^2 is needed")]
    InsufficientPrecision { label: String, precision: u32 },
    #[error("candidate {label}: {source}")]
    Candidate { label: String, source: CurveError },
    #[error(transparent)]
    Glc(#[from] GlcError),
    #[error(transparent)]
    Coleman(#[from] ColemanError),
    #[error(transparent)]
    Jacobian(#[from] JacobianError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// A candidate point, either an exact rational point or a `Z_p`-point known
/// modulo `p^m`; both are stored on the completed-square model.
#[derive(Clone, Debug, PartialEq)]
pub enum CandidatePoint {
    Rational(CurvePoint<Rational>),
    Padic(LocalPoint),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub label: String,
    pub point: CandidatePoint,
}

impl Candidate {
    /// A marked rational point from original coordinates.
    pub fn rational(curve: &HyperellipticCurve, label: &str, x: &Rational, y: &Rational) -> Result<Self, FilterError> {
        let pt =
            curve.rational_point(x, y).map_err(|source| FilterError::Candidate { label: label.to_string(), source })?;
        Ok(Candidate { label: label.to_string(), point: CandidatePoint::Rational(pt) })
    }

    pub fn infinity(label: &str) -> Self {
        Candidate { label: label.to_string(), point: CandidatePoint::Rational(CurvePoint::Infinity) }
    }

    /// A `Z_p`-point from original coordinates modulo `p^m`, `m >= 2`.
    pub fn padic(
        curve: &HyperellipticCurve,
        label: &str,
        x: PadicResidue,
        y: PadicResidue,
    ) -> Result<Self, FilterError> {
        let precision = x.precision().min(y.precision());
        if precision < 2 {
            return Err(FilterError::InsufficientPrecision { label: label.to_string(), precision });
        }
        let pt =
            curve.local_point(x, y).map_err(|source| FilterError::Candidate { label: label.to_string(), source })?;
        Ok(Candidate { label: label.to_string(), point: CandidatePoint::Padic(pt) })
    }

    /// Like [`Candidate::padic`], from little-endian base-`p` digits.
    pub fn from_digits(
        curve: &HyperellipticCurve,
        label: &str,
        x: &[u64],
        y: &[u64],
        precision: u32,
    ) -> Result<Self, FilterError> {
        let ring = PadicRing::new(curve.prime(), precision.max(1)).map_err(CurveError::from)?;
        Candidate::padic(curve, label, ring.from_digits(x), ring.from_digits(y))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.point, CandidatePoint::Rational(_))
    }

    /// Precision of a `Z_p`-candidate; `None` for an exact point.
    pub fn precision(&self) -> Option<u32> {
        match &self.point {
            CandidatePoint::Rational(_) => None,
            CandidatePoint::Padic(LocalPoint::Affine { x, y }) => Some(x.precision().min(y.precision())),
            CandidatePoint::Padic(LocalPoint::NearInfinity { t }) => Some(t.precision()),
            CandidatePoint::Padic(LocalPoint::Infinity) => None,
        }
    }

    fn class_point(&self) -> ClassPoint {
        match &self.point {
            CandidatePoint::Rational(pt) => ClassPoint::Rational(pt.clone()),
            CandidatePoint::Padic(pt) => ClassPoint::Local(pt.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExcessClassification {
    /// `R - b` reduces outside the generator image in `J(F_p)`.
    Condition1,
    /// The sieve passes, but `log(R - b - T)` is outside the span of the
    /// kernel-of-reduction logs.
    Condition2,
    Retained,
}

/// The data behind one classification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    /// Working precision `N`; logs are compared modulo `p^(N-1)`.
    pub precision: u32,
    /// Coefficients of `T` in the generators.
    pub witness: Option<Vec<i64>>,
    /// `log(R - b - T)`.
    pub log: Option<LogVector>,
    /// Coefficients on the kernel-basis logs when the membership test succeeds.
    pub coefficients: Option<Vec<u64>>,
    /// `log(R - b - T)` minus the closest combination found, when it fails.
    pub residual: Option<Vec<u64>>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FilterEntry {
    pub label: String,
    pub disk: String,
    pub rational: bool,
    pub classification: ExcessClassification,
    pub retained: bool,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FilterReport {
    pub prime: u64,
    pub basepoint: String,
    pub precision_cap: u32,
    /// `p` does not divide `|J(F_p)|`.
    pub saturation_shortcut: bool,
    pub entries: Vec<FilterEntry>,
    pub retained: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FilterOptions {
    /// Upper bound on the working precision `N`.
    pub precision_cap: u32,
    pub subgroup_cap: usize,
}

impl Default for FilterOptions {
    fn default() -> Self {
        FilterOptions { precision_cap: 2, subgroup_cap: DEFAULT_SUBGROUP_CAP }
    }
}

/// `p` does not divide `|J(F_p)|`, so the kernel of reduction of the
/// Mordell-Weil group is already `p`-saturated in `J(Z_p)`.
pub fn saturation_shortcut_check(curve: &HyperellipticCurve) -> Result<bool, CurveError> {
    Ok(curve.jacobian_order()? % curve.prime() != 0)
}

/// Keep the candidates `R` whose class `R - b` can lie in the closure of the
/// group generated by `generators`, testing the sieve at `p` and then the
/// logarithm of `R - b - T` against the kernel-of-reduction logs.
pub fn filter(
    curve: &HyperellipticCurve,
    candidates: &[Candidate],
    generators: &[FormalClass],
    basepoint: &CurvePoint<Rational>,
    options: &FilterOptions,
) -> Result<FilterReport, FilterError> {
    if options.precision_cap < 2 {
        return Err(GlcError::PrecisionTooLow(options.precision_cap).into());
    }
    let table = subgroup_of(curve, generators, options.subgroup_cap)?;
    let sieve = sieve_with_table(curve, &table, basepoint)?;
    let lattice = table.kernel_lattice();
    let shortcut = saturation_shortcut_check(curve)?;
    let mut spans = std::collections::BTreeMap::new();
    let mut entries = Vec::with_capacity(candidates.len());
    for cand in candidates {
        let n = cand.precision().map_or(options.precision_cap, |m| m.min(options.precision_cap));
        if n < 2 {
            return Err(FilterError::InsufficientPrecision { label: cand.label.clone(), precision: n });
        }
        let center = cand.class_point().reduce(curve);
        let disk = curve.disk_of(&center)?;
        let entry = sieve.iter().find(|e| e.disk == disk).expect("every disk is sieved");
        let mut cert = Certificate {
            precision: n,
            witness: None,
            log: None,
            coefficients: None,
            residual: None,
            note: String::new(),
        };
        let computed = match &entry.outcome {
            SieveOutcome::Fail => {
                cert.note = "R - b reduces outside the image of the generators in J(F_p)".to_string();
                ExcessClassification::Condition1
            }
            SieveOutcome::Pass { witness } => {
                cert.witness = Some(witness.clone());
                if let std::collections::btree_map::Entry::Vacant(e) = spans.entry(n) {
                    e.insert(mbar0_from_lattice(curve, generators, &lattice, n)?);
                }
                let m0 = &spans[&n];
                let class = FormalClass::from_point(cand.class_point())
                    .with_term(ClassPoint::Rational(basepoint.clone()), -1)
                    .add(&FormalClass::combination(generators, witness).neg());
                let log = kernel_log(curve, &class, n)?;
                let k = log.precision();
                let g = curve.genus();
                let rows: Vec<Vec<PadicResidue>> =
                    (0..g).map(|i| m0.columns.iter().map(|c| c.entries()[i].reduce(k)).collect()).collect();
                let ncols = m0.columns.len();
                let sol = if ncols == 0 { None } else { Some(solve_mod_pk(&rows, log.entries(), ncols)) };
                let (member, coefficients, residual) = match &sol {
                    Some(s) => (
                        s.solution.is_some(),
                        s.solution.as_ref().map(|x| x.iter().map(|e| e.value()).collect()),
                        Some(s.residual.iter().map(|e| e.value()).collect()),
                    ),
                    None => (log.is_zero(), None, Some(log.values())),
                };
                cert.log = Some(log);
                cert.coefficients = coefficients;
                if member {
                    cert.note = format!(
                        "log(R - b - T) lies in the kernel-log span modulo p^{k}; not refuted at this precision"
                    );
                    ExcessClassification::Retained
                } else {
                    cert.residual = residual;
                    cert.note = format!("log(R - b - T) is outside the kernel-log span modulo p^{k}");
                    if shortcut {
                        cert.note.push_str("; as p does not divide |J(F_p)|, equivalently log(R - b) is not in log M");
                    }
                    ExcessClassification::Condition2
                }
            }
        };
        let (classification, retained) = if cand.is_rational() && computed != ExcessClassification::Retained {
            cert.note = format!(
                "rational point kept although the test gives {computed:?} ({}); the generators or basepoint are inconsistent",
                cert.note
            );
            (ExcessClassification::Retained, true)
        } else {
            (computed, computed == ExcessClassification::Retained)
        };
        entries.push(FilterEntry {
            label: cand.label.clone(),
            disk: curve.disk_label(&disk),
            rational: cand.is_rational(),
            classification,
            retained,
            certificate: cert,
        });
    }
    let retained = entries.iter().filter(|e| e.retained).map(|e| e.label.clone()).collect();
    Ok(FilterReport {
        prime: curve.prime(),
        basepoint: curve.point_label(basepoint),
        precision_cap: options.precision_cap,
        saturation_shortcut: shortcut,
        entries,
        retained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_tower::rational::{rat, ratio};
    use crate::ring_tower::Poly;

    fn genus2() -> (HyperellipticCurve, Vec<FormalClass>) {
        let f = Poly::new(vec![ratio(1, 4), rat(0), rat(1), rat(1), rat(0), rat(1)]);
        let c = HyperellipticCurve::validate(f, Poly::zero(), 5).unwrap();
        let g = FormalClass::from_point(c.rational_point(&rat(0), &ratio(-1, 2)).unwrap());
        (c, vec![g])
    }

    #[test]
    fn basepoint_and_known_points_are_retained() {
        let (c, gens) = genus2();
        let cands = vec![
            Candidate::infinity("b"),
            Candidate::rational(&c, "P", &rat(0), &ratio(1, 2)).unwrap(),
            Candidate::padic(
                &c,
                "P mod 25",
                PadicRing::new(5, 2).unwrap().zero(),
                PadicRing::new(5, 2).unwrap().from_rational(&ratio(-1, 2)).unwrap(),
            )
            .unwrap(),
        ];
        let r = filter(&c, &cands, &gens, &CurvePoint::Infinity, &FilterOptions::default()).unwrap();
        assert!(r.entries.iter().all(|e| e.classification == ExcessClassification::Retained));
        assert_eq!(r.retained.len(), 3);
        assert!(!r.saturation_shortcut);
    }

    #[test]
    fn low_precision_candidates_are_rejected() {
        let (c, _) = genus2();
        let ring = PadicRing::new(5, 1).unwrap();
        let e = Candidate::padic(&c, "Q", ring.zero(), ring.from_u64(2)).unwrap_err();
        assert_eq!(e, FilterError::InsufficientPrecision { label: "Q".into(), precision: 1 });
    }

    #[test]
    fn off_curve_candidates_are_rejected() {
        let (c, _) = genus2();
        assert!(matches!(Candidate::rational(&c, "Q", &rat(1), &rat(1)), Err(FilterError::Candidate { .. })));
        assert!(matches!(Candidate::from_digits(&c, "Q", &[1], &[1], 3), Err(FilterError::Candidate { .. })));
    }

    #[test]
    fn shortcut_tracks_p_dividing_the_order() {
        let (c, _) = genus2();
        assert!(!saturation_shortcut_check(&c).unwrap());
        let f = Poly::new(vec![ratio(1, 4), rat(0), rat(-1), rat(3), rat(-5), rat(5), rat(-3), rat(1)]);
        let g3 = HyperellipticCurve::validate(f, Poly::zero(), 3).unwrap();
        assert!(saturation_shortcut_check(&g3).unwrap());
    }
}
