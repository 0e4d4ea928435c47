//! Filter Chabauty-Coleman candidates known to finite p-adic precision.

use chabauty::cc_filter::{filter, Candidate, FilterOptions};
use chabauty::curve_model::{CurvePoint, HyperellipticCurve};
use chabauty::mumford_jacobian::FormalClass;
use chabauty::ring_tower::rational::rat;
use chabauty::ring_tower::Poly;

fn main() {
    // y^2 + x y = x^5 + 2x^4 + 4x^3 + 4x^2 + 3x + 1 at p = 3
    let ints = |v: &[i64]| Poly::new(v.iter().map(|&c| rat(c)).collect());
    let curve = HyperellipticCurve::validate(ints(&[1, 3, 4, 4, 2, 1]), ints(&[0, 1]), 3).unwrap();
    let d = FormalClass::from_point(curve.rational_point(&rat(0), &rat(-1)).unwrap());
    // Little-endian base-3 digits of the original coordinates modulo 3^7.
    let candidates = vec![
        Candidate::from_digits(&curve, "C1", &[2, 1, 1, 2, 2, 1, 1], &[2, 0, 2, 1, 1, 0, 2], 7).unwrap(),
        Candidate::from_digits(&curve, "C2", &[1, 0, 2, 2, 2, 0, 1], &[0, 2, 0, 1, 0, 2, 0], 7).unwrap(),
        Candidate::rational(&curve, "(0 : 1 : 1)", &rat(0), &rat(1)).unwrap(),
        Candidate::infinity("infinity"),
    ];
    let report = filter(&curve, &candidates, &[d], &CurvePoint::Infinity, &FilterOptions::default()).unwrap();
    for e in &report.entries {
        println!("{:<12} disk {:<12} {:?}: {}", e.label, e.disk, e.classification, e.certificate.note);
    }
    println!("retained: {:?}", report.retained);
}
