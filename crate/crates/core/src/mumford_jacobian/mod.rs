//! Jacobian arithmetic in Mumford representation, finite subgroup tables,
//! kernel-of-reduction lattices and saturation checks.

mod cantor;
mod formal;
mod group;
mod saturation;

pub use cantor::{Jacobian, MumfordDivisor};
pub use formal::{reduce_formal, reduce_rational_point, ClassPoint, FormalClass, FormalReduction};
pub use group::{
    element_order, enumerate_jacobian, group_structure, random_element, FpDivisor, GroupStructure, SubgroupTable,
    DEFAULT_SUBGROUP_CAP,
};
pub use saturation::{jacobian_order_at, saturation_check, AuxiliaryPrime, SaturationReport, SaturationVerdict};

use thiserror::Error;

use crate::curve_model::{CurveError, HyperellipticCurve};
use crate::ring_tower::{Fp, IntegerLattice, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JacobianError {
    #[error("subgroup enumeration exceeds the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("point does not lie on the curve")]
    NotOnCurve,
    #[error("only exact rational points can be reduced at auxiliary primes")]
    NotRational,
    #[error("random sampling failed to generate the group")]
    GenerationFailed,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// The Jacobian of the reduction of `curve` modulo its prime.
pub fn jacobian_mod_p(curve: &HyperellipticCurve) -> Jacobian<Fp> {
    Jacobian::new(curve.f_mod_p().clone())
}

/// Images of formal generators in `J(F_p)` and the subgroup they generate.
pub fn subgroup_of(
    curve: &HyperellipticCurve,
    generators: &[FormalClass],
    cap: usize,
) -> Result<SubgroupTable, JacobianError> {
    let jac = jacobian_mod_p(curve);
    let images = generators.iter().map(|g| g.image_mod_p(curve)).collect::<Result<Vec<_>, _>>()?;
    SubgroupTable::build(&jac, &images, cap)
}

/// `{ c : sum c_i g_i reduces to 0 in J(F_p) }`.
pub fn kernel_of_reduction_basis(
    curve: &HyperellipticCurve,
    generators: &[FormalClass],
) -> Result<IntegerLattice, JacobianError> {
    Ok(subgroup_of(curve, generators, DEFAULT_SUBGROUP_CAP)?.kernel_lattice())
}
