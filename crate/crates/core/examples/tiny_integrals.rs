//! Tiny Coleman integrals inside a residue disk and the logarithm of a
//! class in the kernel of reduction.

use chabauty::coleman_tiny::{kernel_log, tiny_integral};
use chabauty::curve_model::HyperellipticCurve;
use chabauty::mumford_jacobian::FormalClass;
use chabauty::ring_tower::rational::{rat, ratio};
use chabauty::ring_tower::Poly;

fn main() {
    let f = Poly::new(vec![ratio(1, 4), rat(0), rat(1), rat(1), rat(0), rat(1)]);
    let curve = HyperellipticCurve::validate(f, Poly::zero(), 5).unwrap();
    let p1 = curve.rational_point(&rat(0), &ratio(-1, 2)).unwrap();
    let disk = curve.disk_of(&curve.reduce_point(&p1)).unwrap();
    let q0 = curve.localize(&p1, 4).unwrap();
    for mu in 1..4 {
        let q = curve.canonical_lift(&disk, mu, 4).unwrap();
        println!("(1/p) int from P1 to Q_{mu}: {}", tiny_integral(&curve, &q, &q0, 4).unwrap());
    }
    let g = FormalClass::from_point(p1);
    for n in 2..5 {
        println!("log 15(P1 - infinity) at N = {n}: {}", kernel_log(&curve, &g.scale(15), n).unwrap());
    }
}
