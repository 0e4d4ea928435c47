//! Exact and finite-precision arithmetic used by every other module.
//!
//! Values carry their own context (the prime and precision for residues,
//! the extension modulus for unramified elements), so the generic code in
//! [`poly`], [`series`] and [`hensel`] can build constants from any element
//! it already holds via [`Ring::zero_like`] and friends.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub mod finite_field;
pub mod hensel;
pub mod lattice;
pub mod linalg;
pub mod padic;
pub mod poly;
pub mod rational;
pub mod series;
pub mod unramified;

pub use finite_field::{Fp, GfElem, GfExt};
pub use hensel::{hensel_factor, hensel_lift_root, newton_polygon, LocalFactor, NewtonSegment};
pub use lattice::{lattice_kernel, IntegerLattice};
pub use padic::{PadicResidue, PadicRing};
pub use poly::Poly;
pub use rational::Rational;
pub use series::{Antiderivative, TruncatedSeries};
pub use unramified::{UnramifiedElement, UnramifiedRing};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("p^N = {p}^{prec} does not fit the fixed-width residue representation")]
    PrecisionOverflow { p: u64, prec: u32 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("value is not p-integral for p = {0}")]
    NotIntegral(u64),
    #[error("element is not divisible by p")]
    NotDivisibleByP,
    #[error("seed is not a root modulo p")]
    NotARoot,
    #[error("derivative vanishes modulo p at the seed")]
    NonSimpleRoot,
    #[error("reduction modulo p is not coprime-splittable at the requested precision")]
    InseparableConfiguration,
    #[error("polynomial must be monic with unit leading coefficient")]
    NotMonic,
    #[error("modulus is reducible modulo p")]
    ReducibleModulus,
    #[error("precision {0} is below the minimum required")]
    InsufficientPrecision(u32),
}

/// Commutative ring with unit, in value style.
///
/// Implementors carry whatever context they need, so `zero_like` and
/// `one_like` produce constants in the same ring as `self`.
pub trait Ring:
    Clone + PartialEq + fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse when `self` is a unit.
    fn try_inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

/// Rings that are complete local rings truncated at some precision, with
/// residue field of characteristic `p`.
pub trait LocalRing: Ring {
    fn prime(&self) -> u64;
    fn precision(&self) -> u32;
    /// Reinterpret at a higher (or equal) precision by choosing the canonical representative.
    fn lift_to(&self, prec: u32) -> Self;
    /// Drop to a lower (or equal) precision.
    fn reduce_precision(&self, prec: u32) -> Self;
    /// Whether the image in the residue field is zero.
    fn reduces_to_zero(&self) -> bool;
}

/// Small prime test by trial division; enough for the primes this crate handles.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, ascending primes with exponents.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `v_p(n)` for nonzero `n`.
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_of_small_orders() {
        assert_eq!(factorize(340), vec![(2, 2), (5, 1), (17, 1)]);
        assert_eq!(factorize(106), vec![(2, 1), (53, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert!(is_prime(53) && !is_prime(51) && !is_prime(1));
    }
}
