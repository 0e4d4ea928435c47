#![allow(dead_code)]

pub mod checks;

use chabauty::cli_frontend::{CurveDescription, Problem};
use chabauty::coleman_tiny::LogVector;
use chabauty::curve_model::{CurvePoint, HyperellipticCurve, LocalPoint, ResidueDisk};
use chabauty::mumford_jacobian::{subgroup_of, FormalClass, DEFAULT_SUBGROUP_CAP};
use chabauty::ring_tower::Fp;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CURVES: [&str; 5] = ["genus2_p5", "genus2_p3_sieve", "genus2_p3_filter", "genus3_p5", "genus3_p3"];

pub fn data_path(name: &str) -> String {
    format!("{}/data/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

pub fn problem(name: &str) -> Problem {
    let text = std::fs::read_to_string(data_path(name)).unwrap();
    CurveDescription::parse(&text).unwrap().validate().unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fp(v: &[u64], p: u64) -> Vec<Fp> {
    v.iter().map(|&x| Fp::new(x, p)).collect()
}

pub fn values(l: &LogVector) -> Vec<u64> {
    l.values()
}

pub fn mod_p(l: &LogVector) -> Vec<u64> {
    l.to_fp().iter().map(|x| x.value()).collect()
}

/// `a` and `b` are nonzero and proportional over `F_p`.
pub fn parallel(a: &[u64], b: &[u64], p: u64) -> bool {
    let nonzero = |v: &[u64]| v.iter().any(|&x| x % p != 0);
    nonzero(a) && nonzero(b) && (1..p).any(|c| a.iter().zip(b).all(|(x, y)| (c * x) % p == y % p))
}

/// `v` lies in the `F_p`-span of `cols`.
pub fn in_span(cols: &[Vec<u64>], v: &[u64], p: u64) -> bool {
    let n = cols.len() as u32;
    (0..p.pow(n)).any(|mut k| {
        let mut acc = vec![0u64; v.len()];
        for c in cols {
            let a = k % p;
            k /= p;
            for (s, x) in acc.iter_mut().zip(c) {
                *s = (*s + a * x) % p;
            }
        }
        acc.iter().zip(v).all(|(s, x)| *s == x % p)
    })
}

pub fn disk_with_label(curve: &HyperellipticCurve, label: &str) -> ResidueDisk {
    curve.disks().into_iter().find(|d| curve.disk_label(d) == label).unwrap()
}

/// A random lift `mu` in a random disk.
pub fn random_lift(curve: &HyperellipticCurve, rng: &mut ChaCha8Rng, prec: u32) -> (ResidueDisk, LocalPoint) {
    let disks = curve.disks();
    let disk = disks.choose(rng).unwrap().clone();
    let mu = rng.gen_range(0..curve.prime().pow(prec - 1));
    let q = curve.canonical_lift(&disk, mu, prec).unwrap();
    (disk, q)
}

/// Reduced rows of the kernel lattice of the generator subgroup.
pub fn kernel_rows(curve: &HyperellipticCurve, generators: &[FormalClass]) -> Vec<Vec<i64>> {
    let table = subgroup_of(curve, generators, DEFAULT_SUBGROUP_CAP).unwrap();
    let mut rows = table.kernel_lattice().rows().to_vec();
    gauss_reduce(&mut rows);
    rows
}

fn norm(v: &[i64]) -> i128 {
    v.iter().map(|&x| (x as i128) * (x as i128)).sum()
}

/// Pairwise size reduction until no row gets shorter.
fn gauss_reduce(rows: &mut [Vec<i64>]) {
    loop {
        let mut changed = false;
        for i in 0..rows.len() {
            for j in 0..rows.len() {
                if i == j || norm(&rows[j]) == 0 {
                    continue;
                }
                let dot: i128 = rows[i].iter().zip(&rows[j]).map(|(&a, &b)| a as i128 * b as i128).sum();
                let q = (dot as f64 / norm(&rows[j]) as f64).round() as i64;
                if q != 0 {
                    let cand: Vec<i64> = rows[i].iter().zip(&rows[j]).map(|(a, b)| a - q * b).collect();
                    if norm(&cand) < norm(&rows[i]) {
                        rows[i] = cand;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// A random class in the kernel of reduction: a small combination of kernel
/// lattice rows plus differences of points sharing a disk.
pub fn random_kernel_class(
    curve: &HyperellipticCurve,
    generators: &[FormalClass],
    rows: &[Vec<i64>],
    rng: &mut ChaCha8Rng,
    prec: u32,
) -> FormalClass {
    let mut class = FormalClass::new();
    for row in rows {
        let c = rng.gen_range(-1..=1);
        if c != 0 {
            let coeffs: Vec<i64> = row.iter().map(|x| c * x).collect();
            class = class.add(&FormalClass::combination(generators, &coeffs));
        }
    }
    for _ in 0..rng.gen_range(1..=2) {
        let (disk, q) = random_lift(curve, rng, prec);
        let mu = rng.gen_range(0..curve.prime().pow(prec - 1));
        let r = curve.canonical_lift(&disk, mu, prec).unwrap();
        let n = rng.gen_range(1..=2);
        class = class.with_term(q, n).with_term(r, -n);
    }
    class
}

pub fn known_affine(problem: &Problem) -> Vec<CurvePoint<chabauty::ring_tower::Rational>> {
    problem.known.iter().filter(|p| !p.is_infinity()).cloned().collect()
}
