//! Saturation of a generator subgroup at a prime, and what an index-2
//! subgroup looks like.

use chabauty::curve_model::HyperellipticCurve;
use chabauty::mumford_jacobian::{saturation_check, FormalClass};
use chabauty::ring_tower::rational::rat;
use chabauty::ring_tower::Poly;

fn main() {
    let ints = |v: &[i64]| Poly::new(v.iter().map(|&c| rat(c)).collect());
    let curve = HyperellipticCurve::validate(ints(&[1, -4, 4, 4, -12, 16, -12, 4]), Poly::zero(), 5).unwrap();
    let g1 = FormalClass::from_point(curve.rational_point(&rat(0), &rat(1)).unwrap());
    let g2 = FormalClass::from_point(curve.rational_point(&rat(1), &rat(1)).unwrap());
    for ell in [2, 5, 17] {
        let r = saturation_check(&curve, &[g1.clone(), g2.clone()], ell, 100).unwrap();
        let used: Vec<u64> = r.primes.iter().map(|q| q.q).collect();
        println!("<G1, G2> at {ell}: {:?} using q in {used:?}", r.verdict);
    }
    let r = saturation_check(&curve, &[g1.scale(2), g2], 2, 100).unwrap();
    println!("<2 G1, G2> at 2: {:?} ({} classes survive)", r.verdict, r.surviving);
}
