use std::collections::BTreeMap;

use chabauty::cli_frontend::Problem;
use chabauty::coleman_tiny::{kernel_log, tiny_integral};
use chabauty::curve_model::CurvePoint;
use chabauty::glc_engine::{glc_curve, glc_disk, solve_linear, GlcOptions, LinearSolution, Outcome, SieveOutcome};
use chabauty::mumford_jacobian::{
    enumerate_jacobian, jacobian_mod_p, random_element, subgroup_of, DEFAULT_SUBGROUP_CAP,
};
use chabauty::ring_tower::Fp;
use rand::Rng;

use super::{kernel_rows, random_kernel_class, random_lift, rng};

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Associativity, commutativity, identity and inverses on random triples of `J(F_p)`.
pub fn cantor_axioms(problem: &Problem, seed: u64, triples: usize) -> Check {
    let jac = jacobian_mod_p(&problem.curve);
    let mut r = rng(seed);
    let zero = jac.identity();
    for i in 0..triples {
        let a = random_element(&jac, &mut r);
        let b = random_element(&jac, &mut r);
        let c = random_element(&jac, &mut r);
        let ab = jac.add(&a, &b);
        ensure(jac.is_valid(&ab), || format!("triple {i}: a + b is not a reduced Mumford pair"))?;
        ensure(jac.add(&ab, &c) == jac.add(&a, &jac.add(&b, &c)), || format!("triple {i}: associativity"))?;
        ensure(ab == jac.add(&b, &a), || format!("triple {i}: commutativity"))?;
        ensure(jac.add(&a, &zero) == a, || format!("triple {i}: identity"))?;
        ensure(jac.add(&a, &jac.neg(&a)).is_identity(), || format!("triple {i}: inverse"))?;
    }
    Ok(())
}

/// `|J(F_p)| X = 0` for every element of the generator subgroup.
pub fn lagrange(problem: &Problem) -> Check {
    let n = problem.curve.jacobian_order().map_err(|e| e.to_string())?;
    let table = subgroup_of(&problem.curve, &problem.generators, DEFAULT_SUBGROUP_CAP).map_err(|e| e.to_string())?;
    let jac = table.jacobian();
    for (d, w) in table.elements() {
        ensure(jac.mul(d, n as i64).is_identity(), || format!("{n} * element {w:?} is not zero"))?;
    }
    ensure(n % table.order() == 0, || format!("subgroup order {} does not divide {n}", table.order()))
}

/// `log(A + B) = log A + log B` and `log(iota A) = -log A` on random kernel classes.
pub fn log_additivity(problem: &Problem, seed: u64, classes: usize, prec: u32) -> Check {
    let curve = &problem.curve;
    let rows = kernel_rows(curve, &problem.generators);
    let mut r = rng(seed);
    for i in 0..classes {
        let a = random_kernel_class(curve, &problem.generators, &rows, &mut r, prec);
        let b = random_kernel_class(curve, &problem.generators, &rows, &mut r, prec);
        let log = |c: &chabauty::mumford_jacobian::FormalClass| {
            kernel_log(curve, c, prec).map_err(|e| format!("class {i}: {e}"))
        };
        let (la, lb) = (log(&a)?, log(&b)?);
        ensure(log(&a.add(&b))? == la.add(&lb), || format!("class {i}: log(A + B) != log A + log B"))?;
        ensure(log(&a.involution())? == la.neg(), || format!("class {i}: log(iota A) != -log A"))?;
    }
    Ok(())
}

/// `int_P^Q + int_Q^R = int_P^R` and `int_P^P = 0` inside random disks.
pub fn tiny_composition(problem: &Problem, seed: u64, paths: usize, prec: u32) -> Check {
    let curve = &problem.curve;
    let mut r = rng(seed);
    for i in 0..paths {
        let (disk, p) = random_lift(curve, &mut r, prec);
        let lift = |r: &mut rand_chacha::ChaCha8Rng| {
            curve.canonical_lift(&disk, r.gen_range(0..curve.prime().pow(prec - 1)), prec).unwrap()
        };
        let (q, s) = (lift(&mut r), lift(&mut r));
        let ti = |a, b| tiny_integral(curve, a, b, prec).map_err(|e| format!("path {i}: {e}"));
        ensure(ti(&q, &p)?.add(&ti(&s, &q)?) == ti(&s, &p)?, || format!("path {i}: composition"))?;
        ensure(ti(&p, &p)?.is_zero(), || format!("path {i}: empty path"))?;
        ensure(ti(&q, &p)? == ti(&p, &q)?.neg(), || format!("path {i}: reversal"))?;
    }
    Ok(())
}

/// Logs at `N = 3` reduce to the logs at `N = 2`, and `log(Q_mu - Q_0) = mu log(Q_1 - Q_0)` mod `p`.
pub fn precision_coherence(problem: &Problem, seed: u64, classes: usize) -> Check {
    let curve = &problem.curve;
    let rows = kernel_rows(curve, &problem.generators);
    let mut r = rng(seed);
    for i in 0..classes {
        let c = random_kernel_class(curve, &problem.generators, &rows, &mut r, 3);
        let l3 = kernel_log(curve, &c, 3).map_err(|e| e.to_string())?;
        let l2 = kernel_log(curve, &c, 2).map_err(|e| e.to_string())?;
        ensure(l3.reduce(1) == l2, || format!("class {i}: N = 3 log {l3} does not reduce to N = 2 log {l2}"))?;
    }
    let p = curve.prime();
    for disk in curve.disks() {
        let q0 = curve.canonical_lift(&disk, 0, 2).unwrap();
        let q1 = curve.canonical_lift(&disk, 1, 2).unwrap();
        let d1 = tiny_integral(curve, &q1, &q0, 2).map_err(|e| e.to_string())?;
        for mu in 2..p {
            let qm = curve.canonical_lift(&disk, mu, 2).unwrap();
            let dm = tiny_integral(curve, &qm, &q0, 2).map_err(|e| e.to_string())?;
            ensure(dm == d1.scale(mu as i64), || format!("disk {}: D_{mu} != {mu} D_1", curve.disk_label(&disk)))?;
        }
    }
    Ok(())
}

fn shape(o: &Outcome) -> &'static str {
    match o {
        Outcome::SieveFail => "SieveFail",
        Outcome::LinearFail => "LinearFail",
        Outcome::AtMostOne { .. } => "AtMostOne",
        Outcome::Undetermined { .. } => "Undetermined",
    }
}

fn mu_of(o: &Outcome) -> Option<u64> {
    match o {
        Outcome::AtMostOne { mu, .. } => Some(*mu),
        _ => None,
    }
}

/// Verdicts do not depend on the basepoint, the lifts, the witness `T` or a unit
/// rescaling of the differentials.
pub fn verdict_invariance(problem: &Problem, seed: u64) -> Check {
    let curve = &problem.curve;
    let p = curve.prime();
    let gens = &problem.generators;
    let opts = GlcOptions::default();
    let base = glc_curve(curve, gens, &CurvePoint::Infinity, &problem.known, &opts).map_err(|e| e.to_string())?;

    for b in problem.known.iter().filter(|b| !b.is_infinity()) {
        let other = glc_curve(curve, gens, b, &problem.known, &opts).map_err(|e| e.to_string())?;
        for (x, y) in base.verdicts.iter().zip(&other.verdicts) {
            ensure(shape(&x.outcome) == shape(&y.outcome) && mu_of(&x.outcome) == mu_of(&y.outcome), || {
                format!(
                    "basepoint {}: disk {} changes from {:?} to {:?}",
                    curve.point_label(b),
                    x.label,
                    x.outcome,
                    y.outcome
                )
            })?;
        }
    }

    let mut r = rng(seed);
    let mut lifts = BTreeMap::new();
    for disk in curve.disks() {
        let a = r.gen_range(0..p);
        let b = (a + r.gen_range(1..p)) % p;
        let q0 = curve.canonical_lift(&disk, a, opts.precision).unwrap();
        let q1 = curve.canonical_lift(&disk, b, opts.precision).unwrap();
        lifts.insert(disk, (q0, q1));
    }
    let relifted = glc_curve(curve, gens, &CurvePoint::Infinity, &problem.known, &GlcOptions { lifts, ..opts.clone() })
        .map_err(|e| e.to_string())?;
    for (x, y) in base.verdicts.iter().zip(&relifted.verdicts) {
        ensure(shape(&x.outcome) == shape(&y.outcome), || {
            format!("lifts: disk {} changes from {:?} to {:?}", x.label, x.outcome, y.outcome)
        })?;
    }

    let rows = kernel_rows(curve, gens);
    for v in &base.verdicts {
        let Some(w) = &v.witness else { continue };
        for row in &rows {
            let shifted: Vec<i64> = w.iter().zip(row).map(|(a, b)| a + b).collect();
            let other = glc_disk(
                curve,
                &v.disk,
                &SieveOutcome::Pass { witness: shifted },
                gens,
                &CurvePoint::Infinity,
                &base.mbar0,
                None,
                &problem.known,
                opts.precision,
            );
            ensure(shape(&other.outcome) == shape(&v.outcome) && mu_of(&other.outcome) == mu_of(&v.outcome), || {
                format!("witness: disk {} changes from {:?} to {:?}", v.label, v.outcome, other.outcome)
            })?;
        }
    }

    for v in &base.verdicts {
        let (Some(rhs), false) = (&v.v, v.phi.is_empty()) else { continue };
        let phi: Vec<Vec<Fp>> = v.phi.iter().map(|row| row.iter().map(|&x| Fp::new(x, p)).collect()).collect();
        let rhs = rhs.to_fp();
        let units: Vec<Fp> = (0..phi.len()).map(|_| Fp::new(r.gen_range(1..p), p)).collect();
        let scaled: Vec<Vec<Fp>> =
            phi.iter().zip(&units).map(|(row, u)| row.iter().map(|x| *x * *u).collect()).collect();
        let scaled_rhs: Vec<Fp> = rhs.iter().zip(&units).map(|(x, u)| *x * *u).collect();
        let same = match (solve_linear(&phi, &rhs), solve_linear(&scaled, &scaled_rhs)) {
            (LinearSolution::None, LinearSolution::None) => true,
            (LinearSolution::Unique(a), LinearSolution::Unique(b)) => a == b,
            (LinearSolution::Family { dimension: a }, LinearSolution::Family { dimension: b }) => a == b,
            _ => false,
        };
        ensure(same, || format!("rescaling: disk {} changes", v.label))?;
    }
    Ok(())
}

/// Exhaustive Mumford enumeration of `J(F_p)` agrees with `L(1)`.
pub fn brute_force_order(problem: &Problem) -> Check {
    let jac = jacobian_mod_p(&problem.curve);
    let count = enumerate_jacobian(&jac).len() as u64;
    let order = problem.curve.jacobian_order().map_err(|e| e.to_string())?;
    ensure(count == order, || format!("enumeration gives {count}, L(1) = {order}"))
}
