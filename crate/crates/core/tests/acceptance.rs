mod common;

use chabauty::cc_filter::{filter, ExcessClassification, FilterOptions, FilterReport};
use chabauty::cli_frontend::{execute, CliError, CurveDescription, Flags, Problem};
use chabauty::coleman_tiny::kernel_log;
use chabauty::curve_model::{CurveError, CurvePoint, HyperellipticCurve, ResidueDisk};
use chabauty::glc_engine::{glc_curve, sieve_at_p, GlcOptions, GlcReport, Outcome, ReductionFlag, SieveOutcome};
use chabauty::mumford_jacobian::{saturation_check, subgroup_of, SaturationVerdict, DEFAULT_SUBGROUP_CAP};
use chabauty::ring_tower::rational::rat;
use chabauty::ring_tower::Poly;
use common::checks;
use common::{in_span, mod_p, parallel, problem, values, CURVES};

struct Criterion {
    failures: Vec<String>,
}

impl Criterion {
    fn new() -> Self {
        Criterion { failures: vec![] }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn result(&mut self, r: checks::Check, what: &str) {
        if let Err(e) = r {
            self.failures.push(format!("{what}: {e}"));
        }
    }
}

fn disk_at(curve: &HyperellipticCurve, x: u64, y: u64) -> ResidueDisk {
    curve.disk_of(&curve.fp_point(x, y).unwrap()).unwrap()
}

fn glc(problem: &Problem) -> GlcReport {
    let options = GlcOptions { lifts: problem.lifts.clone(), ..GlcOptions::default() };
    glc_curve(&problem.curve, &problem.generators, &problem.basepoint, &problem.known, &options).unwrap()
}

fn run_filter(problem: &Problem) -> FilterReport {
    filter(&problem.curve, &problem.candidates, &problem.generators, &problem.basepoint, &FilterOptions::default())
        .unwrap()
}

fn known_disks(problem: &Problem) -> Vec<ResidueDisk> {
    let mut disks: Vec<_> =
        problem.known.iter().map(|pt| problem.curve.disk_of(&problem.curve.reduce_point(pt)).unwrap()).collect();
    disks.sort();
    disks
}

fn surviving_disks(report: &GlcReport) -> Vec<ResidueDisk> {
    let mut disks: Vec<_> = report.verdicts.iter().filter(|v| v.outcome.survives()).map(|v| v.disk.clone()).collect();
    disks.sort();
    disks
}

fn classification(report: &FilterReport, label: &str) -> Option<(ExcessClassification, bool)> {
    report.entries.iter().find(|e| e.label == label).map(|e| (e.classification, e.retained))
}

fn genus2_p5(c: &mut Criterion) {
    let pr = problem("genus2_p5");
    let curve = &pr.curve;
    c.check(curve.points_mod_p().len() == 3, "#C(F_5) = 3");
    let table = subgroup_of(curve, &pr.generators, DEFAULT_SUBGROUP_CAP).unwrap();
    c.check(table.order() == 15, format!("order of P1 - infinity is {}, expected 15", table.order()));
    let log = kernel_log(curve, &pr.generators[0].scale(15), 2).unwrap();
    c.check(values(&log) == vec![3, 1], format!("log 15(P1 - infinity) = {log}, expected (3, 1)"));
    let report = glc(&pr);
    let p1_disk = disk_at(curve, 0, 2);
    let d = report.verdicts.iter().find(|v| v.disk == p1_disk).and_then(|v| v.d_column.clone());
    c.check(
        d.as_ref().map(values) == Some(vec![4, 0]),
        format!("D column with the lift x = 5 is {d:?}, expected (4, 0)"),
    );
    c.check(report.verdicts.len() == 3, "three disks");
    for v in &report.verdicts {
        c.check(matches!(v.outcome, Outcome::AtMostOne { .. }), format!("phi not invertible in {}", v.label));
    }
    c.check(report.bound == Some(3), format!("bound {:?}, expected 3", report.bound));
}

/// The fixed change of basis taking our differential coordinates to the
/// tabulated ones: `(a, b) -> (2(b - a), 2a)` modulo 3.
fn tabulated_basis(v: &[u64]) -> Vec<u64> {
    let (a, b) = (v[0] % 3, v[1] % 3);
    vec![(2 * (b + 3 - a)) % 3, (2 * a) % 3]
}

fn genus2_p3_sieve(c: &mut Criterion) {
    let pr = problem("genus2_p3_sieve");
    let curve = &pr.curve;
    let table = subgroup_of(curve, &pr.generators, DEFAULT_SUBGROUP_CAP).unwrap();
    c.check(table.order() == 29, format!("order of d is {}, expected 29", table.order()));
    let log = kernel_log(curve, &pr.generators[0].scale(29), 2).unwrap();
    c.check(tabulated_basis(&mod_p(&log)) == vec![2, 2], format!("log 29d = {log} does not map to (2, 2)"));
    let report = glc(&pr);
    let rows = [
        ((1, 1), 20, vec![0, 2], false),
        ((1, 2), 9, vec![0, 1], false),
        ((2, 0), 16, vec![2, 2], true),
        ((2, 2), 13, vec![1, 1], true),
    ];
    for ((x, y), m, table_d, linear_fail) in rows {
        let disk = disk_at(curve, x, y);
        let v = report.verdicts.iter().find(|v| v.disk == disk).unwrap();
        c.check(v.witness == Some(vec![m]), format!("{}: witness {:?}, expected {m}", v.label, v.witness));
        let d = v.d_column.as_ref().map(|d| tabulated_basis(&mod_p(d))).unwrap_or_default();
        c.check(parallel(&d, &table_d, 3), format!("{}: D direction {d:?} not parallel to {table_d:?}", v.label));
        let ok = if linear_fail {
            v.outcome == Outcome::LinearFail
        } else {
            matches!(v.outcome, Outcome::AtMostOne { known_point: None, .. })
        };
        c.check(ok, format!("{}: verdict {:?}", v.label, v.outcome));
    }
    for disk in known_disks(&pr) {
        let v = report.verdicts.iter().find(|v| v.disk == disk).unwrap();
        c.check(
            matches!(v.outcome, Outcome::AtMostOne { known_point: Some(_), .. }),
            format!("known disk {}: verdict {:?}", v.label, v.outcome),
        );
    }
}

fn genus2_p3_filter(c: &mut Criterion) {
    let pr = problem("genus2_p3_filter");
    let curve = &pr.curve;
    let table = subgroup_of(curve, &pr.generators, DEFAULT_SUBGROUP_CAP).unwrap();
    c.check(table.order() == 11, format!("order of d is {}, expected 11", table.order()));
    let sieve = sieve_at_p(curve, &pr.generators, &pr.basepoint).unwrap();
    let mut passing: Vec<_> =
        sieve.iter().filter(|e| matches!(e.outcome, SieveOutcome::Pass { .. })).map(|e| e.disk.clone()).collect();
    passing.sort();
    c.check(passing == known_disks(&pr), "sieve passes exactly the known-point disks");
    let report = glc(&pr);
    c.check(surviving_disks(&report) == known_disks(&pr), format!("surviving disks {:?}", report.surviving));
    c.check(report.surviving.len() == 3, "three surviving disks");
    let filtered = run_filter(&pr);
    for label in ["C1", "C2", "C3"] {
        let got = classification(&filtered, label);
        c.check(got == Some((ExcessClassification::Condition1, false)), format!("{label}: {got:?}"));
    }
}

fn genus3_p5(c: &mut Criterion) {
    let pr = problem("genus3_p5");
    let curve = &pr.curve;
    c.check(curve.jacobian_order().unwrap() == 340, "|J(F_5)| = 340");
    c.check(curve.points_mod_p().len() == 10, "#C(F_5) = 10");
    for ell in [5, 2, 17] {
        let s = saturation_check(curve, &pr.generators, ell, 100).unwrap();
        c.check(s.verdict == SaturationVerdict::Saturated, format!("saturation at {ell}: {:?}", s.verdict));
    }
    let sieve = sieve_at_p(curve, &pr.generators, &pr.basepoint).unwrap();
    let passing = sieve.iter().filter(|e| matches!(e.outcome, SieveOutcome::Pass { .. })).count();
    c.check(passing == 5, format!("sieve passes {passing} disks, expected 5"));
    let filtered = run_filter(&pr);
    for label in ["W", "R1", "R2", "R3", "R4"] {
        let got = classification(&filtered, label);
        c.check(got == Some((ExcessClassification::Condition1, false)), format!("{label}: {got:?}"));
    }
    for e in filtered.entries.iter().filter(|e| e.rational) {
        c.check(e.retained && e.classification == ExcessClassification::Retained, format!("{} not retained", e.label));
    }
    c.check(filtered.entries.iter().filter(|e| e.rational).count() == 5, "five rational candidates");
}

fn genus3_p3(c: &mut Criterion) {
    let pr = problem("genus3_p3");
    let curve = &pr.curve;
    c.check(curve.jacobian_order().unwrap() == 106, "|J(F_3)| = 106");
    let report = glc(&pr);
    let m0 = &report.mbar0;
    let cols: Vec<Vec<u64>> = m0.columns.iter().map(mod_p).collect();
    c.check(
        m0.rank == 1 && cols.iter().all(|col| parallel(col, &[2, 1, 1], 3)),
        format!("kernel log columns {cols:?}"),
    );
    c.check(m0.flag == ReductionFlag::Bad, "reduction flag Bad");
    let disk = disk_at(curve, 2, 1);
    let v = report.verdicts.iter().find(|v| v.disk == disk).unwrap();
    let d = v.d_column.as_ref().map(mod_p).unwrap_or_default();
    c.check(parallel(&d, &[2, 1, 2], 3), format!("(2 : 1 : 1): D = {d:?}"));
    let rhs = v.v.as_ref().map(mod_p).unwrap_or_default();
    let shift: Vec<u64> = rhs.iter().zip([2u64, 2, 1]).map(|(a, b)| (a + 3 - b) % 3).collect();
    c.check(rhs.len() == 3 && in_span(&cols, &shift, 3), format!("(2 : 1 : 1): v = {rhs:?}"));
    c.check(v.outcome == Outcome::LinearFail, format!("(2 : 1 : 1): verdict {:?}", v.outcome));
    let filtered = run_filter(&pr);
    for label in ["R1", "R2"] {
        let got = classification(&filtered, label);
        c.check(got == Some((ExcessClassification::Condition2, false)), format!("{label}: {got:?}"));
    }
    c.check(surviving_disks(&report) == known_disks(&pr), format!("surviving disks {:?}", report.surviving));
    c.check(report.surviving.len() == 5, "five surviving disks");
}

fn properties(c: &mut Criterion) {
    for (i, name) in CURVES.iter().enumerate() {
        let pr = problem(name);
        let seed = 1000 + i as u64;
        c.result(checks::cantor_axioms(&pr, seed, 1000), &format!("{name} Cantor axioms"));
        c.result(checks::lagrange(&pr), &format!("{name} Lagrange"));
        c.result(checks::log_additivity(&pr, seed, 100, 2), &format!("{name} log additivity"));
        c.result(checks::tiny_composition(&pr, seed, 50, 4), &format!("{name} tiny-integral composition"));
        c.result(checks::precision_coherence(&pr, seed, 10), &format!("{name} precision coherence"));
        c.result(checks::verdict_invariance(&pr, seed), &format!("{name} verdict invariance"));
    }
    c.result(checks::brute_force_order(&problem("genus2_p5")), "genus2_p5 brute-force |J(F_5)|");
}

fn negative_paths(c: &mut Criterion) {
    let even = std::fs::read_to_string(common::data_path("even_degree")).unwrap();
    let err = CurveDescription::parse(&even).unwrap().validate().err();
    c.check(
        err.as_ref().is_some_and(|e| e.field == "f" && e.message.contains("even degree 6")),
        format!("even degree: {err:?}"),
    );
    let quintic = |c0: i64| Poly::new(vec![rat(c0), rat(0), rat(0), rat(0), rat(0), rat(1)]);
    let bad = HyperellipticCurve::validate(quintic(5), Poly::zero(), 5).err();
    c.check(matches!(bad, Some(CurveError::BadReduction { p: 5, .. })), format!("bad reduction: {bad:?}"));
    let two = HyperellipticCurve::validate(quintic(1), Poly::zero(), 2).err();
    c.check(two == Some(CurveError::PrimeTwo), format!("p = 2: {two:?}"));

    let pr = problem("genus2_p5");
    let doubled = vec![pr.generators[0].scale(2)];
    let s = saturation_check(&pr.curve, &doubled, 2, 100).unwrap();
    c.check(s.verdict == SaturationVerdict::Inconclusive, format!("index-2 subgroup at 2: {:?}", s.verdict));
    let s = saturation_check(&pr.curve, &pr.generators, 2, 100).unwrap();
    c.check(s.verdict == SaturationVerdict::Saturated, format!("full subgroup at 2: {:?}", s.verdict));
    let unsaturated = Problem { generators: vec![pr.generators[0].scale(5)], ..pr.clone() };
    let refused = execute("glc", &unsaturated, &Flags::default());
    c.check(matches!(refused, Err(CliError::Computation(_))), "glc refuses generators unsaturated at p");
    let allowed = execute("glc", &unsaturated, &Flags { allow_unsaturated: true, ..Flags::default() });
    c.check(allowed.is_ok(), "glc runs with allow_unsaturated");
    let bad_base =
        glc_curve(&pr.curve, &pr.generators, &CurvePoint::Affine { x: rat(1), y: rat(1) }, &[], &GlcOptions::default());
    c.check(bad_base.is_err(), "basepoint off the curve is rejected");
}

type Run = fn(&mut Criterion);

fn main() {
    let criteria: [(&str, Run); 7] = [
        ("genus 2, p = 5, rank one", genus2_p5),
        ("genus 2, p = 3, sieve and linear failures", genus2_p3_sieve),
        ("genus 2, p = 3, candidate filtering", genus2_p3_filter),
        ("genus 3, p = 5, saturation and Condition1", genus3_p5),
        ("genus 3, p = 3, bad reduction and Condition2", genus3_p3),
        ("property suites", properties),
        ("negative paths", negative_paths),
    ];
    let mut failed = vec![];
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut c = Criterion::new();
        run(&mut c);
        if c.failures.is_empty() {
            println!("criterion {}: PASS ({name})", i + 1);
        } else {
            println!("criterion {}: FAIL ({name}): {}", i + 1, c.failures.join("; "));
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
