//! Geometric linear Chabauty modulo `p`: the Mordell-Weil sieve at `p`, the
//! image of the kernel of reduction in `J(Z/p^2)_0`, and one linear system per
//! residue disk.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coleman_tiny::{kernel_log, ColemanError, LogVector};
use crate::curve_model::{CurveError, CurvePoint, DiskKind, HyperellipticCurve, LocalPoint, ResidueDisk};
use crate::mumford_jacobian::{
    subgroup_of, ClassPoint, FormalClass, JacobianError, SubgroupTable, DEFAULT_SUBGROUP_CAP,
};
use crate::ring_tower::linalg::{rank, solve};
use crate::ring_tower::{Fp, IntegerLattice, Rational, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlcError {
    #[error("basepoint does not lie on the curve")]
    BasepointNotOnCurve,
    #[error("working precision must be at least 2, got {0}")]
    PrecisionTooLow(u32),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Jacobian(#[from] JacobianError),
    #[error(transparent)]
    Coleman(#[from] ColemanError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SieveOutcome {
    /// `Q - b` reduces into the generator image; `T = sum witness_i G_i`.
    Pass {
        witness: Vec<i64>,
    },
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SieveEntry {
    #[serde(skip)]
    pub disk: ResidueDisk,
    pub kind: DiskKind,
    pub label: String,
    pub outcome: SieveOutcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionFlag {
    Good,
    Bad,
}

/// Logs of a basis of the kernel of reduction of the generator subgroup.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MbarZero {
    /// Coefficient rows (in the generators) of the kernel basis.
    pub kernel_basis: Vec<Vec<i64>>,
    pub columns: Vec<LogVector>,
    /// Rank of the columns modulo `p`.
    pub rank: usize,
    pub flag: ReductionFlag,
}

impl MbarZero {
    pub fn columns_mod_p(&self) -> Vec<Vec<Fp>> {
        self.columns.iter().map(|c| c.to_fp()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Outcome {
    SieveFail,
    LinearFail,
    /// The unique solution has disk coordinate `mu`; `known_point` is a supplied
    /// rational point in the disk, if any.
    AtMostOne {
        mu: u64,
        known_point: Option<String>,
    },
    Undetermined {
        reason: String,
        known_point: Option<String>,
    },
}

impl Outcome {
    pub fn survives(&self) -> bool {
        matches!(self, Outcome::AtMostOne { .. } | Outcome::Undetermined { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Outcome::SieveFail => "SieveFail",
            Outcome::LinearFail => "LinearFail",
            Outcome::AtMostOne { known_point: Some(_), .. } => "AtMostOne",
            Outcome::AtMostOne { known_point: None, .. } => "AtMostOne (unresolved)",
            Outcome::Undetermined { .. } => "Undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiskVerdict {
    #[serde(skip)]
    pub disk: ResidueDisk,
    pub kind: DiskKind,
    pub label: String,
    pub outcome: Outcome,
    pub witness: Option<Vec<i64>>,
    /// `log(Q_1 - Q_0)`.
    pub d_column: Option<LogVector>,
    /// `phi` modulo `p`, row-major with `g` rows: the `D_Q` column then the kernel columns.
    pub phi: Vec<Vec<u64>>,
    /// `log(Q_0 - b - T)`.
    pub v: Option<LogVector>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlcReport {
    pub label: Option<String>,
    pub prime: u64,
    pub genus: usize,
    pub basepoint: String,
    pub precision: u32,
    pub subgroup_order: u64,
    pub mbar0: MbarZero,
    pub verdicts: Vec<DiskVerdict>,
    /// True when no disk is [`Outcome::Undetermined`].
    pub conclusive: bool,
    /// Upper bound on `#C(Q)` when conclusive.
    pub bound: Option<usize>,
    pub surviving: Vec<String>,
    /// Supplied rational points that landed in a ruled-out disk, which means
    /// the generators do not have the assumed image or saturation.
    pub inconsistencies: Vec<String>,
}

/// Options for [`glc_curve`].
#[derive(Clone, Debug, PartialEq)]
pub struct GlcOptions {
    pub label: Option<String>,
    /// Working precision `N`; logs are taken modulo `p^(N-1)` and verdicts modulo `p`.
    pub precision: u32,
    pub subgroup_cap: usize,
    /// Explicit lifts `(Q_0, Q_1)` per disk, replacing the canonical ones.
    pub lifts: BTreeMap<ResidueDisk, (LocalPoint, LocalPoint)>,
}

impl Default for GlcOptions {
    fn default() -> Self {
        GlcOptions { label: None, precision: 2, subgroup_cap: DEFAULT_SUBGROUP_CAP, lifts: BTreeMap::new() }
    }
}

fn check_basepoint(curve: &HyperellipticCurve, b: &CurvePoint<Rational>) -> Result<(), GlcError> {
    match b {
        CurvePoint::Infinity => Ok(()),
        CurvePoint::Affine { x, y } if curve.is_on_model(x, y) => Ok(()),
        _ => Err(GlcError::BasepointNotOnCurve),
    }
}

/// Sieve every disk against a prebuilt generator subgroup.
pub fn sieve_with_table(
    curve: &HyperellipticCurve,
    table: &SubgroupTable,
    basepoint: &CurvePoint<Rational>,
) -> Result<Vec<SieveEntry>, GlcError> {
    check_basepoint(curve, basepoint)?;
    let jac = table.jacobian();
    let b = jac.point(&curve.reduce_point(basepoint)).ok_or(JacobianError::NotOnCurve)?;
    curve
        .disks()
        .into_iter()
        .map(|disk| {
            let q = jac.point(&disk.center).ok_or(JacobianError::NotOnCurve)?;
            let outcome = match table.membership_with_witness(&jac.sub(&q, &b)) {
                Some(witness) => SieveOutcome::Pass { witness },
                None => SieveOutcome::Fail,
            };
            Ok(SieveEntry { label: curve.disk_label(&disk), kind: disk.kind, disk, outcome })
        })
        .collect()
}

/// Mordell-Weil sieve at `p`: which disks `Q` have `Q - b` in the image of the generators.
pub fn sieve_at_p(
    curve: &HyperellipticCurve,
    generators: &[FormalClass],
    basepoint: &CurvePoint<Rational>,
) -> Result<Vec<SieveEntry>, GlcError> {
    let table = subgroup_of(curve, generators, DEFAULT_SUBGROUP_CAP)?;
    sieve_with_table(curve, &table, basepoint)
}

/// Logs of the kernel-of-reduction basis of `lattice` at working precision `prec`.
pub fn mbar0_from_lattice(
    curve: &HyperellipticCurve,
    generators: &[FormalClass],
    lattice: &IntegerLattice,
    prec: u32,
) -> Result<MbarZero, GlcError> {
    let basis = lattice.rows().to_vec();
    let columns = basis
        .iter()
        .map(|row| kernel_log(curve, &FormalClass::combination(generators, row), prec))
        .collect::<Result<Vec<_>, _>>()?;
    let rank = fp_rank(&columns, curve.genus());
    let flag = if rank == lattice.rank() { ReductionFlag::Good } else { ReductionFlag::Bad };
    Ok(MbarZero { kernel_basis: basis, columns, rank, flag })
}

/// `M_0` modulo `p`: the kernel-of-reduction logs with the good/bad reduction flag.
pub fn mbar0(curve: &HyperellipticCurve, generators: &[FormalClass], prec: u32) -> Result<MbarZero, GlcError> {
    let table = subgroup_of(curve, generators, DEFAULT_SUBGROUP_CAP)?;
    mbar0_from_lattice(curve, generators, &table.kernel_lattice(), prec)
}

fn fp_rank(columns: &[LogVector], genus: usize) -> usize {
    if columns.is_empty() {
        return 0;
    }
    let cols: Vec<Vec<Fp>> = columns.iter().map(|c| c.to_fp()).collect();
    let rows: Vec<Vec<Fp>> = (0..genus).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    rank(&rows)
}

/// The first supplied rational point reducing into `disk`.
pub fn known_point_in(
    curve: &HyperellipticCurve,
    disk: &ResidueDisk,
    known: &[CurvePoint<Rational>],
) -> Option<String> {
    known.iter().find(|pt| curve.reduce_point(pt) == disk.center).map(|pt| curve.point_label(pt))
}

/// Verdict for one residue disk.
///
/// With `Q_0, Q_1` lifts of the disk centre, `phi = [log(Q_1 - Q_0) | M_0 columns]`
/// and `v = log(Q_0 - b - T)`; the disk is ruled out when `phi x = v` has no
/// solution modulo `p` and holds at most one point when the solution is unique.
#[allow(clippy::too_many_arguments)]
pub fn glc_disk(
    curve: &HyperellipticCurve,
    disk: &ResidueDisk,
    sieve: &SieveOutcome,
    generators: &[FormalClass],
    basepoint: &CurvePoint<Rational>,
    mbar0: &MbarZero,
    lifts: Option<&(LocalPoint, LocalPoint)>,
    known: &[CurvePoint<Rational>],
    prec: u32,
) -> DiskVerdict {
    let label = curve.disk_label(disk);
    let known_point = known_point_in(curve, disk, known);
    let base = DiskVerdict {
        disk: disk.clone(),
        kind: disk.kind,
        label,
        outcome: Outcome::SieveFail,
        witness: None,
        d_column: None,
        phi: vec![],
        v: None,
    };
    let SieveOutcome::Pass { witness } = sieve else { return base };
    let undetermined = |reason: String, base: DiskVerdict| DiskVerdict {
        outcome: Outcome::Undetermined { reason, known_point: known_point.clone() },
        ..base
    };
    let base = DiskVerdict { witness: Some(witness.clone()), ..base };
    let lifts = match lifts {
        Some(l) => Ok(l.clone()),
        None => curve.canonical_lift(disk, 0, prec).and_then(|q0| Ok((q0, curve.canonical_lift(disk, 1, prec)?))),
    };
    let (q0, q1) = match lifts {
        Ok(l) => l,
        Err(e) => return undetermined(e.to_string(), base),
    };
    let d_class = FormalClass::new().with_term(q1, 1).with_term(q0.clone(), -1);
    let v_class = FormalClass::new()
        .with_term(q0, 1)
        .with_term(ClassPoint::Rational(basepoint.clone()), -1)
        .add(&FormalClass::combination(generators, witness).neg());
    let (d, v) = match (kernel_log(curve, &d_class, prec), kernel_log(curve, &v_class, prec)) {
        (Ok(d), Ok(v)) => (d, v),
        (Err(e), _) | (_, Err(e)) => return undetermined(e.to_string(), base),
    };
    let g = curve.genus();
    let mut cols = vec![d.to_fp()];
    cols.extend(mbar0.columns_mod_p());
    let phi: Vec<Vec<Fp>> = (0..g).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let phi_values = phi.iter().map(|r| r.iter().map(|x| x.value()).collect()).collect();
    let base = DiskVerdict { d_column: Some(d), v: Some(v.clone()), phi: phi_values, ..base };
    let outcome = match solve_linear(&phi, &v.to_fp()) {
        LinearSolution::None => Outcome::LinearFail,
        LinearSolution::Unique(x) => Outcome::AtMostOne { mu: x[0].value(), known_point },
        LinearSolution::Family { dimension } => {
            return undetermined(format!("solution set modulo p has dimension {dimension}"), base);
        }
    };
    DiskVerdict { outcome, ..base }
}

/// Solutions of `phi x = v` over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    None,
    Unique(Vec<Fp>),
    Family { dimension: usize },
}

/// Solve `phi x = v` modulo `p`, where `phi` has `g` rows and a `D_Q` column first.
pub fn solve_linear(phi: &[Vec<Fp>], v: &[Fp]) -> LinearSolution {
    let ncols = phi.first().map_or(0, |r| r.len());
    let zero = v[0].zero_like();
    match solve(phi, v, ncols, &zero) {
        None => LinearSolution::None,
        Some(x) => {
            let r = rank(phi);
            if r == ncols {
                LinearSolution::Unique(x)
            } else {
                LinearSolution::Family { dimension: ncols - r }
            }
        }
    }
}

/// Run the whole pipeline on every residue disk.
pub fn glc_curve(
    curve: &HyperellipticCurve,
    generators: &[FormalClass],
    basepoint: &CurvePoint<Rational>,
    known: &[CurvePoint<Rational>],
    options: &GlcOptions,
) -> Result<GlcReport, GlcError> {
    if options.precision < 2 {
        return Err(GlcError::PrecisionTooLow(options.precision));
    }
    check_basepoint(curve, basepoint)?;
    let table = subgroup_of(curve, generators, options.subgroup_cap)?;
    let sieve = sieve_with_table(curve, &table, basepoint)?;
    let m0 = mbar0_from_lattice(curve, generators, &table.kernel_lattice(), options.precision)?;
    let verdicts: Vec<DiskVerdict> = sieve
        .iter()
        .map(|entry| {
            glc_disk(
                curve,
                &entry.disk,
                &entry.outcome,
                generators,
                basepoint,
                &m0,
                options.lifts.get(&entry.disk),
                known,
                options.precision,
            )
        })
        .collect();
    let conclusive = !verdicts.iter().any(|v| matches!(v.outcome, Outcome::Undetermined { .. }));
    let bound = conclusive.then(|| verdicts.iter().filter(|v| v.outcome.survives()).count());
    let surviving = verdicts.iter().filter(|v| v.outcome.survives()).map(|v| v.label.clone()).collect();
    let inconsistencies = known
        .iter()
        .filter_map(|pt| {
            let center = curve.reduce_point(pt);
            let v = verdicts.iter().find(|v| v.disk.center == center)?;
            (!v.outcome.survives()).then(|| format!("{} lies in ruled-out disk {}", curve.point_label(pt), v.label))
        })
        .collect();
    Ok(GlcReport {
        label: options.label.clone(),
        prime: curve.prime(),
        genus: curve.genus(),
        basepoint: curve.point_label(basepoint),
        precision: options.precision,
        subgroup_order: table.order(),
        mbar0: m0,
        verdicts,
        conclusive,
        bound,
        surviving,
        inconsistencies,
    })
}
