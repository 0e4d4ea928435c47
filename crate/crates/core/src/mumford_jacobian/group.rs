use std::collections::HashMap;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Jacobian, JacobianError, MumfordDivisor};
use crate::ring_tower::finite_field::{is_irreducible, GfExt};
use crate::ring_tower::{factorize, Fp, IntegerLattice, Poly};

pub const DEFAULT_SUBGROUP_CAP: usize = 1_000_000;

pub type FpDivisor = MumfordDivisor<Fp>;

/// Order of `d`, given any multiple `n` of it (usually `|J(F_p)|`).
pub fn element_order(jac: &Jacobian<Fp>, d: &FpDivisor, n: u64) -> u64 {
    let mut ord = n;
    for (q, _) in factorize(n) {
        while ord.is_multiple_of(q) && jac.mul(d, (ord / q) as i64).is_identity() {
            ord /= q;
        }
    }
    ord
}

/// Every element of `J(F_p)` by brute force over Mumford pairs. Only for tiny
/// fields; used as an independent check on point counting.
pub fn enumerate_jacobian(jac: &Jacobian<Fp>) -> Vec<FpDivisor> {
    let p = jac.f().lc().expect("nonzero f").p();
    let g = jac.genus();
    let mut out = vec![jac.identity()];
    for d in 1..=g {
        let count = p.pow(d as u32);
        for nu in 0..count {
            let mut uc: Vec<Fp> = digits(nu, p, d);
            uc.push(Fp::new(1, p));
            let u = Poly::new(uc);
            for nv in 0..count {
                let v = Poly::new(digits(nv, p, d));
                if let Some(div) = jac.divisor(u.clone(), v) {
                    out.push(div);
                }
            }
        }
    }
    out
}

fn digits(mut n: u64, p: u64, len: usize) -> Vec<Fp> {
    (0..len)
        .map(|_| {
            let d = Fp::new(n % p, p);
            n /= p;
            d
        })
        .collect()
}

/// A pseudo-random class: the sum of two random prime divisors of degree at most `g`.
pub fn random_element(jac: &Jacobian<Fp>, rng: &mut ChaCha8Rng) -> FpDivisor {
    let a = random_prime_divisor(jac, rng);
    let b = random_prime_divisor(jac, rng);
    jac.add(&a, &b)
}

fn random_prime_divisor(jac: &Jacobian<Fp>, rng: &mut ChaCha8Rng) -> FpDivisor {
    let p = jac.f().lc().expect("nonzero f").p();
    let fc: Vec<u64> = jac.f().coeffs().iter().map(|c| c.value()).collect();
    loop {
        let d = rng.gen_range(1..=jac.genus());
        let mut uc: Vec<Fp> = (0..d).map(|_| Fp::new(rng.gen_range(0..p), p)).collect();
        uc.push(Fp::new(1, p));
        let u = Poly::new(uc);
        if !is_irreducible(&u) {
            continue;
        }
        let field = GfExt::new(&u).expect("irreducible modulus");
        let x = field.from_poly(&Poly::new(vec![Fp::new(0, p), Fp::new(1, p)]));
        let Some(r) = field.sqrt(&field.eval(&fc, &x)) else { continue };
        let r = if rng.gen_bool(0.5) { field.neg(&r) } else { r };
        let v = field.to_poly(&r);
        if let Some(div) = jac.divisor(u, v) {
            return div;
        }
    }
}

/// The subgroup of `J(F_p)` generated by given images, with a coefficient word
/// for every element and a basis of the relation lattice.
#[derive(Clone, Debug)]
pub struct SubgroupTable {
    jac: Jacobian<Fp>,
    generators: Vec<FpDivisor>,
    words: HashMap<FpDivisor, Vec<i64>>,
    relations: Vec<Vec<i64>>,
    orders: Vec<u64>,
}

impl SubgroupTable {
    /// Builds the table one generator at a time: if `k` is the least positive
    /// multiple of `g_i` already in the table, the new table is the union of
    /// `j g_i + H` for `0 <= j < k`, and `k e_i - word(k g_i)` is a relation.
    pub fn build(jac: &Jacobian<Fp>, generators: &[FpDivisor], cap: usize) -> Result<Self, JacobianError> {
        let r = generators.len();
        let mut words: HashMap<FpDivisor, Vec<i64>> = HashMap::new();
        words.insert(jac.identity(), vec![0; r]);
        let mut relations = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            let mut k = 1i64;
            let mut cur = g.clone();
            let mut layers = vec![];
            while !words.contains_key(&cur) {
                if words.len() * (k as usize + 1) > cap {
                    return Err(JacobianError::CapExceeded { cap });
                }
                layers.push(cur.clone());
                cur = jac.add(&cur, g);
                k += 1;
            }
            let mut rel = words[&cur].iter().map(|c| -c).collect::<Vec<_>>();
            rel[i] += k;
            relations.push(rel);
            let base: Vec<(FpDivisor, Vec<i64>)> = words.iter().map(|(d, w)| (d.clone(), w.clone())).collect();
            for (j, shift) in layers.iter().enumerate() {
                for (d, w) in &base {
                    let mut w2 = w.clone();
                    w2[i] += j as i64 + 1;
                    words.insert(jac.add(d, shift), w2);
                }
            }
        }
        let n = words.len() as u64;
        let orders = generators.iter().map(|g| element_order(jac, g, n)).collect();
        Ok(SubgroupTable { jac: jac.clone(), generators: generators.to_vec(), words, relations, orders })
    }

    pub fn order(&self) -> u64 {
        self.words.len() as u64
    }

    pub fn generators(&self) -> &[FpDivisor] {
        &self.generators
    }

    pub fn generator_orders(&self) -> &[u64] {
        &self.orders
    }

    /// Least common multiple of the generator orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, o| acc.lcm(o))
    }

    pub fn contains(&self, target: &FpDivisor) -> bool {
        self.words.contains_key(target)
    }

    /// A word `c` with `sum c_i g_i = target`, entries reduced into `[0, ord g_i)`.
    pub fn membership_with_witness(&self, target: &FpDivisor) -> Option<Vec<i64>> {
        self.words.get(target).cloned()
    }

    pub fn elements(&self) -> impl Iterator<Item = (&FpDivisor, &Vec<i64>)> {
        self.words.iter()
    }

    /// Relations among the generators, one per generator.
    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    /// Basis of `{ c : sum c_i g_i = 0 }`.
    pub fn kernel_lattice(&self) -> IntegerLattice {
        IntegerLattice::from_generators(self.generators.len(), &self.relations)
    }

    pub fn jacobian(&self) -> &Jacobian<Fp> {
        &self.jac
    }
}

/// `J(F_p)` as an explicit group.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupStructure {
    pub order: u64,
    pub exponent: u64,
}

/// Exponent of `J(F_p)`: random classes are added as generators until they
/// generate a subgroup of order `|J(F_p)|`; the exponent is then the lcm of
/// their orders.
pub fn group_structure(jac: &Jacobian<Fp>, order: u64, cap: usize) -> Result<GroupStructure, JacobianError> {
    if order as usize > cap {
        return Err(JacobianError::CapExceeded { cap });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a63);
    let mut gens: Vec<FpDivisor> = Vec::new();
    for _ in 0..64 {
        let table = SubgroupTable::build(jac, &gens, cap)?;
        if table.order() == order {
            return Ok(GroupStructure { order, exponent: table.exponent() });
        }
        let z = random_element(jac, &mut rng);
        if !table.contains(&z) {
            gens.push(z);
        }
    }
    Err(JacobianError::GenerationFailed)
}
