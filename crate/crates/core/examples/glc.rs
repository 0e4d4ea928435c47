//! The Mordell-Weil sieve at p and the per-disk linear systems.

use chabauty::curve_model::{CurvePoint, HyperellipticCurve};
use chabauty::glc_engine::{glc_curve, GlcOptions};
use chabauty::mumford_jacobian::FormalClass;
use chabauty::ring_tower::rational::rat;
use chabauty::ring_tower::Poly;

fn main() {
    // y^2 + (x^2 + x + 1) y = x^5 - x^4 + x^3 at p = 3
    let ints = |v: &[i64]| Poly::new(v.iter().map(|&c| rat(c)).collect());
    let curve = HyperellipticCurve::validate(ints(&[0, 0, 0, 1, -1, 1]), ints(&[1, 1, 1]), 3).unwrap();
    let d = curve.rational_point(&rat(0), &rat(-1)).unwrap();
    let known = vec![CurvePoint::Infinity, d.clone(), d.involution()];
    let report =
        glc_curve(&curve, &[FormalClass::from_point(d)], &CurvePoint::Infinity, &known, &GlcOptions::default())
            .unwrap();
    println!("subgroup order {}, M0 flag {:?}", report.subgroup_order, report.mbar0.flag);
    for v in &report.verdicts {
        let d = v.d_column.as_ref().map(|d| d.to_string()).unwrap_or_default();
        println!("  {:<12} {:<24} witness {:?} D {d}", v.label, v.outcome.name(), v.witness);
    }
    println!("bound {:?}, surviving {:?}", report.bound, report.surviving);
}
