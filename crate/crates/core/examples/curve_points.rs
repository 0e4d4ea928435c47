//! Validate a curve, list its residue disks and compute |J(F_p)|.

use chabauty::curve_model::{HyperellipticCurve, DEFAULT_ENUMERATION_CAP};
use chabauty::ring_tower::rational::{rat, ratio};
use chabauty::ring_tower::Poly;

fn main() {
    // y^2 = x^5 + x^3 + x^2 + 1/4 at p = 5
    let f = Poly::new(vec![ratio(1, 4), rat(0), rat(1), rat(1), rat(0), rat(1)]);
    let curve = HyperellipticCurve::validate(f, Poly::zero(), 5).unwrap();
    println!("genus {}, p = {}", curve.genus(), curve.prime());
    for disk in curve.disks() {
        println!("  disk {} ({:?})", curve.disk_label(&disk), disk.kind);
    }
    let l = curve.lpolynomial(DEFAULT_ENUMERATION_CAP).unwrap();
    println!("L-polynomial coefficients {:?}, |J(F_5)| = {}", l.coeffs, l.jacobian_order());
    let p1 = curve.rational_point(&rat(0), &ratio(-1, 2)).unwrap();
    println!("P1 = {} reduces to {}", curve.point_label(&p1), curve.fp_point_label(&curve.reduce_point(&p1)));
}
