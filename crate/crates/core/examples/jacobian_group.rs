//! Cantor arithmetic on J(F_p), the subgroup generated by a rational class
//! and its kernel-of-reduction lattice.

use chabauty::curve_model::HyperellipticCurve;
use chabauty::mumford_jacobian::{
    element_order, enumerate_jacobian, jacobian_mod_p, subgroup_of, FormalClass, DEFAULT_SUBGROUP_CAP,
};
use chabauty::ring_tower::rational::{rat, ratio};
use chabauty::ring_tower::Poly;

fn main() {
    let f = Poly::new(vec![ratio(1, 4), rat(0), rat(1), rat(1), rat(0), rat(1)]);
    let curve = HyperellipticCurve::validate(f, Poly::zero(), 5).unwrap();
    let jac = jacobian_mod_p(&curve);
    let all = enumerate_jacobian(&jac);
    println!("|J(F_5)| by enumeration: {}", all.len());

    let g = FormalClass::from_point(curve.rational_point(&rat(0), &ratio(-1, 2)).unwrap());
    let gbar = g.image_mod_p(&curve).unwrap();
    println!("G = P1 - infinity reduces to u = {:?}, v = {:?}", gbar.u(), gbar.v());
    println!("order of G mod 5: {}", element_order(&jac, &gbar, all.len() as u64));
    println!("3G mod 5: {:?}", jac.mul(&gbar, 3));

    let table = subgroup_of(&curve, &[g], DEFAULT_SUBGROUP_CAP).unwrap();
    println!("kernel of reduction lattice: {:?}", table.kernel_lattice().rows());
}
