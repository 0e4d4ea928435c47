use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::group::{random_element, FpDivisor, SubgroupTable, DEFAULT_SUBGROUP_CAP};
use super::{FormalClass, Jacobian, JacobianError};
use crate::curve_model::{count_points, good_reduction, lpolynomial_from_counts, CurveError, HyperellipticCurve};
use crate::ring_tower::{is_prime, valuation_u64, Fp, Poly};

/// Largest number of coefficient vectors examined in `G / l G`.
const MAX_CANDIDATES: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SaturationVerdict {
    Saturated,
    Inconclusive,
}

/// An auxiliary prime used by a saturation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxiliaryPrime {
    pub q: u64,
    pub jacobian_order: u64,
    /// Nonzero classes of `G / l G` first shown to be nonzero in `J(F_q) / l J(F_q)`.
    pub eliminated: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationReport {
    pub ell: u64,
    pub verdict: SaturationVerdict,
    pub primes: Vec<AuxiliaryPrime>,
    /// Nonzero classes of `G / l G` (up to scaling) not ruled out by any auxiliary prime.
    pub surviving: usize,
}

/// `|J(F_q)|` for the reduction of `y^2 = f` at `q`, or `None` at bad primes.
pub fn jacobian_order_at(
    f: &Poly<crate::ring_tower::Rational>,
    q: u64,
    cap: u64,
) -> Result<Option<(Jacobian<Fp>, u64)>, CurveError> {
    let Ok(fq) = good_reduction(f, q) else { return Ok(None) };
    let genus = (fq.degree().unwrap_or(1) - 1) / 2;
    let counts = (1..=genus).map(|k| count_points(&fq, k, cap)).collect::<Result<Vec<_>, _>>()?;
    let order = lpolynomial_from_counts(q, &counts).jacobian_order();
    Ok(Some((Jacobian::new(fq), order)))
}

/// Nonzero vectors of `F_l^r` up to scaling: first nonzero entry equal to 1.
fn projective_vectors(ell: u64, r: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for lead in 0..r {
        let free = r - lead - 1;
        for n in 0..ell.pow(free as u32) {
            let mut v = vec![0i64; r];
            v[lead] = 1;
            let mut m = n;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = (m % ell) as i64;
                m /= ell;
            }
            out.push(v);
        }
    }
    out
}

/// The `l`-Sylow subgroup of `J(F_q)`, grown from `seeds` and random classes.
fn sylow_subgroup(
    jac: &Jacobian<Fp>,
    seeds: &[FpDivisor],
    cofactor: u64,
    size: u64,
    rng: &mut ChaCha8Rng,
) -> Result<SubgroupTable, JacobianError> {
    let mut gens: Vec<FpDivisor> = seeds.iter().filter(|d| !d.is_identity()).cloned().collect();
    for _ in 0..256 {
        let table = SubgroupTable::build(jac, &gens, DEFAULT_SUBGROUP_CAP)?;
        if table.order() == size {
            return Ok(table);
        }
        let z = jac.mul(&random_element(jac, rng), cofactor as i64);
        if !table.contains(&z) {
            gens.push(z);
        }
    }
    Err(JacobianError::GenerationFailed)
}

/// Test whether `G = <generators>` is saturated at the prime `l`, using the map
/// `G / l G -> prod_q J(F_q) / l J(F_q)` over good odd primes `q <= aux_bound`
/// with `l | |J(F_q)|`. A class lies in `l J(F_q)` exactly when its image in the
/// `l`-Sylow subgroup `A` (multiplication by the prime-to-`l` cofactor) lies in `l A`.
pub fn saturation_check(
    curve: &HyperellipticCurve,
    generators: &[FormalClass],
    ell: u64,
    aux_bound: u64,
) -> Result<SaturationReport, JacobianError> {
    let r = generators.len();
    let mut survivors = projective_vectors(ell, r);
    if (survivors.len() as u64) > MAX_CANDIDATES {
        return Err(JacobianError::CapExceeded { cap: MAX_CANDIDATES as usize });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a7);
    let mut primes = Vec::new();
    for q in (3..=aux_bound).filter(|&q| is_prime(q)) {
        if survivors.is_empty() {
            break;
        }
        let (jac, order) = match jacobian_order_at(curve.f(), q, crate::curve_model::DEFAULT_ENUMERATION_CAP) {
            Ok(Some(found)) => found,
            Ok(None) => continue,
            Err(CurveError::CapExceeded { .. }) => break,
            Err(e) => return Err(e.into()),
        };
        if order % ell != 0 {
            continue;
        }
        let a = valuation_u64(order, ell);
        let size = ell.pow(a);
        let cofactor = order / size;
        let images = generators
            .iter()
            .map(|g| g.image_mod_q(&jac, q).map(|d| jac.mul(&d, cofactor as i64)))
            .collect::<Result<Vec<_>, _>>()?;
        let sylow = sylow_subgroup(&jac, &images, cofactor, size, &mut rng)?;
        let multiples: HashSet<FpDivisor> = sylow.elements().map(|(d, _)| jac.mul(d, ell as i64)).collect();
        let before = survivors.len();
        survivors.retain(|c| multiples.contains(&jac.combination(&images, c)));
        primes.push(AuxiliaryPrime { q, jacobian_order: order, eliminated: before - survivors.len() });
    }
    let verdict = if survivors.is_empty() { SaturationVerdict::Saturated } else { SaturationVerdict::Inconclusive };
    Ok(SaturationReport { ell, verdict, primes, surviving: survivors.len() })
}
