//! Residues modulo `p^N`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{is_prime, LocalRing, Rational, Ring, RingError};

/// Largest modulus we allow, so that products fit in `u128` with room to spare.
const MAX_MODULUS: u64 = 1 << 62;

/// The ring `Z/p^N`. Cheap to copy; acts as a factory for [`PadicResidue`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicRing {
    p: u64,
    prec: u32,
    modulus: u64,
}

impl PadicRing {
    pub fn new(p: u64, prec: u32) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        let mut modulus: u64 = 1;
        for _ in 0..prec {
            modulus =
                modulus.checked_mul(p).filter(|m| *m <= MAX_MODULUS).ok_or(RingError::PrecisionOverflow { p, prec })?;
        }
        Ok(PadicRing { p, prec, modulus })
    }

    /// Largest precision that still fits for this prime.
    pub fn max_precision(p: u64) -> u32 {
        let mut m: u64 = 1;
        let mut n = 0;
        while let Some(next) = m.checked_mul(p).filter(|x| *x <= MAX_MODULUS) {
            m = next;
            n += 1;
        }
        n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn zero(&self) -> PadicResidue {
        PadicResidue { value: 0, ring: *self }
    }

    pub fn one(&self) -> PadicResidue {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> PadicResidue {
        PadicResidue { value: n % self.modulus, ring: *self }
    }

    pub fn from_i64(&self, n: i64) -> PadicResidue {
        let m = self.modulus as i128;
        let v = (n as i128).rem_euclid(m) as u64;
        PadicResidue { value: v, ring: *self }
    }

    pub fn from_bigint(&self, n: &BigInt) -> PadicResidue {
        let m = BigInt::from(self.modulus);
        let v = n.mod_floor(&m).to_u64().expect("reduced value fits");
        PadicResidue { value: v, ring: *self }
    }

    /// Image of a p-integral rational number.
    pub fn from_rational(&self, q: &Rational) -> Result<PadicResidue, RingError> {
        let den = self.from_bigint(q.denom());
        let inv = den.try_inv().ok_or(RingError::NotIntegral(self.p))?;
        Ok(self.from_bigint(q.numer()) * inv)
    }

    /// Number from little-endian base-p digits; extra digits beyond the precision are dropped.
    pub fn from_digits(&self, digits: &[u64]) -> PadicResidue {
        let mut acc = 0u64;
        let mut scale = 1u64;
        for &d in digits.iter().take(self.prec as usize) {
            acc = ((acc as u128 + (d % self.p) as u128 * scale as u128) % self.modulus as u128) as u64;
            scale = scale.wrapping_mul(self.p);
        }
        PadicResidue { value: acc, ring: *self }
    }
}

/// An element of `Z/p^N`, stored as its least nonnegative representative.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicResidue {
    value: u64,
    ring: PadicRing,
}

impl PadicResidue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn ring(&self) -> PadicRing {
        self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p
    }

    pub fn modulus(&self) -> u64 {
        self.ring.modulus
    }

    /// Representative in `(-p^N/2, p^N/2]`.
    pub fn signed_value(&self) -> i64 {
        let m = self.ring.modulus;
        if self.value > m / 2 {
            self.value as i64 - m as i64
        } else {
            self.value as i64
        }
    }

    /// Drop to a lower precision.
    pub fn reduce(&self, prec: u32) -> PadicResidue {
        assert!(prec <= self.ring.prec, "cannot reduce to a higher precision");
        let ring = PadicRing::new(self.ring.p, prec).expect("lower precision fits");
        ring.from_u64(self.value)
    }

    /// `v_p` of the representative, or `None` for zero (valuation at least N).
    pub fn valuation(&self) -> Option<u32> {
        if self.value == 0 {
            None
        } else {
            Some(super::valuation_u64(self.value, self.ring.p))
        }
    }

    pub fn is_unit(&self) -> bool {
        !self.value.is_multiple_of(self.ring.p)
    }

    /// Exact division by `p`; the result has one digit less precision.
    pub fn divide_by_p(&self) -> Result<PadicResidue, RingError> {
        if !self.value.is_multiple_of(self.ring.p) || self.ring.prec == 0 {
            return Err(RingError::NotDivisibleByP);
        }
        let ring = PadicRing::new(self.ring.p, self.ring.prec - 1).expect("lower precision fits");
        Ok(ring.from_u64(self.value / self.ring.p))
    }

    /// The representative divided by `p^k`, kept at the same precision. The top
    /// `k` digits of the result are arbitrary; callers must treat it as known
    /// only modulo `p^(N-k)`.
    pub fn shift_down(&self, k: u32) -> PadicResidue {
        let d = self.ring.p.pow(k);
        assert_eq!(self.value % d, 0, "shift_down of a non-multiple");
        PadicResidue { value: self.value / d, ring: self.ring }
    }

    /// Little-endian base-p digits, `N` of them.
    pub fn digits(&self) -> Vec<u64> {
        let mut v = self.value;
        (0..self.ring.prec)
            .map(|_| {
                let d = v % self.ring.p;
                v /= self.ring.p;
                d
            })
            .collect()
    }

    fn binop(self, rhs: PadicResidue) -> (PadicRing, u64, u64) {
        assert_eq!(self.ring.p, rhs.ring.p, "mixed primes");
        if self.ring.prec <= rhs.ring.prec {
            (self.ring, self.value, rhs.value % self.ring.modulus)
        } else {
            (rhs.ring, self.value % rhs.ring.modulus, rhs.value)
        }
    }
}

impl fmt::Debug for PadicResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.value, self.ring.p, self.ring.prec)
    }
}

impl fmt::Display for PadicResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for PadicResidue {
    type Output = PadicResidue;
    fn add(self, rhs: PadicResidue) -> PadicResidue {
        let (ring, a, b) = self.binop(rhs);
        let s = a as u128 + b as u128;
        PadicResidue { value: (s % ring.modulus as u128) as u64, ring }
    }
}

impl Sub for PadicResidue {
    type Output = PadicResidue;
    fn sub(self, rhs: PadicResidue) -> PadicResidue {
        let (ring, a, b) = self.binop(rhs);
        let v = if a >= b { a - b } else { ring.modulus - (b - a) };
        PadicResidue { value: v % ring.modulus, ring }
    }
}

impl Mul for PadicResidue {
    type Output = PadicResidue;
    fn mul(self, rhs: PadicResidue) -> PadicResidue {
        let (ring, a, b) = self.binop(rhs);
        let v = (a as u128 * b as u128) % ring.modulus as u128;
        PadicResidue { value: v as u64, ring }
    }
}

impl Neg for PadicResidue {
    type Output = PadicResidue;
    fn neg(self) -> PadicResidue {
        let v = if self.value == 0 { 0 } else { self.ring.modulus - self.value };
        PadicResidue { value: v, ring: self.ring }
    }
}

impl Ring for PadicResidue {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }
    fn one_like(&self) -> Self {
        self.ring.one()
    }
    fn int_like(&self, n: i64) -> Self {
        self.ring.from_i64(n)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn try_inv(&self) -> Option<Self> {
        if !self.is_unit() || self.ring.prec == 0 {
            return None;
        }
        let m = self.ring.modulus as i128;
        let (mut r0, mut r1) = (m, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(PadicResidue { value: t0.rem_euclid(m) as u64, ring: self.ring })
    }
}

impl LocalRing for PadicResidue {
    fn prime(&self) -> u64 {
        self.ring.p
    }
    fn precision(&self) -> u32 {
        self.ring.prec
    }
    fn lift_to(&self, prec: u32) -> Self {
        assert!(prec >= self.ring.prec, "lift_to cannot lower precision");
        PadicRing::new(self.ring.p, prec).expect("precision fits").from_u64(self.value)
    }
    fn reduce_precision(&self, prec: u32) -> Self {
        self.reduce(prec)
    }
    fn reduces_to_zero(&self) -> bool {
        self.value.is_multiple_of(self.ring.p)
    }
}

/// `v_p` of a nonzero rational.
pub fn rational_valuation(q: &Rational, p: u64) -> Option<i64> {
    if Zero::is_zero(q) {
        return None;
    }
    let pb = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut v = 0i64;
        while (&n % &pb).is_zero() {
            n /= &pb;
            v += 1;
        }
        v
    };
    Some(count(q.numer()) - count(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverse_of_half_mod_125() {
        let r = PadicRing::new(5, 3).unwrap();
        let half = r.from_i64(2).try_inv().unwrap();
        assert_eq!((half * r.from_i64(2)).value(), 1);
        assert_eq!(half.value(), 63);
    }

    #[test]
    fn divide_by_p_consumes_a_digit() {
        let r = PadicRing::new(3, 4).unwrap();
        let x = r.from_i64(18);
        let y = x.divide_by_p().unwrap();
        assert_eq!(y.value(), 6);
        assert_eq!(y.precision(), 3);
        assert!(r.from_i64(7).divide_by_p().is_err());
    }

    #[test]
    fn overflowing_precision_is_rejected() {
        assert!(matches!(PadicRing::new(5, 40), Err(RingError::PrecisionOverflow { .. })));
        assert!(PadicRing::new(5, PadicRing::max_precision(5)).is_ok());
        assert!(matches!(PadicRing::new(9, 2), Err(RingError::NotPrime(9))));
    }

    #[test]
    fn rationals_reduce_when_integral() {
        let r = PadicRing::new(5, 3).unwrap();
        let q = Rational::new(1.into(), 4.into());
        let x = r.from_rational(&q).unwrap();
        assert_eq!((x * r.from_i64(4)).value(), 1);
        let bad = Rational::new(1.into(), 5.into());
        assert!(r.from_rational(&bad).is_err());
        assert_eq!(rational_valuation(&Rational::new(50.into(), 3.into()), 5), Some(2));
    }

    #[test]
    fn digits_round_trip() {
        let r = PadicRing::new(3, 5).unwrap();
        let x = r.from_digits(&[2, 0, 0, 1, 2]);
        assert_eq!(x.value(), 2 + 27 + 2 * 81);
        assert_eq!(x.digits(), vec![2, 0, 0, 1, 2]);
    }

    fn residue(p: u64, n: u32) -> impl Strategy<Value = PadicResidue> {
        let r = PadicRing::new(p, n).unwrap();
        (0..r.modulus()).prop_map(move |v| r.from_u64(v))
    }

    proptest! {
        #[test]
        fn ring_axioms_hold(n in 1u32..=3, a in 0u64..1000, b in 0u64..1000, c in 0u64..1000) {
            let r = PadicRing::new(5, n).unwrap();
            let (a, b, c) = (r.from_u64(a), r.from_u64(b), r.from_u64(c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a + (-a), r.zero());
            prop_assert_eq!(a - b + b, a);
        }

        #[test]
        fn units_invert(x in residue(7, 3)) {
            if x.is_unit() {
                prop_assert!((x * x.try_inv().unwrap()).is_one());
            } else {
                prop_assert!(x.try_inv().is_none());
            }
        }
    }
}
