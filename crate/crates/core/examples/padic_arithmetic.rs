//! Fixed-precision p-adic residues, Hensel lifting and an unramified extension.

use chabauty::ring_tower::{hensel_lift_root, PadicRing, Poly, Ring, UnramifiedRing};

fn main() {
    let ring = PadicRing::new(7, 6).unwrap();
    let two = ring.from_u64(2);
    let sqrt2 = hensel_lift_root(&Poly::new(vec![-two, ring.zero(), ring.one()]), &ring.from_u64(3)).unwrap();
    println!("sqrt(2) in Z_7 mod 7^6 = {sqrt2}, digits {:?}", sqrt2.digits());
    println!("check: {}", sqrt2 * sqrt2);
    println!("1/3 mod 7^6 = {}", ring.from_u64(3).try_inv().unwrap());

    let ext = UnramifiedRing::new(5, 3, 2).unwrap();
    let a = ext.generator();
    println!("Z_25 mod 5^3: a^2 = {:?}, trace(a) = {}", (a.clone() * a.clone()).coeffs(), a.trace());
}
