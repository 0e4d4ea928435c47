use crate::curve_model::CurvePoint;
use crate::ring_tower::poly::xgcd;
use crate::ring_tower::{Poly, Ring};

/// A reduced divisor class `(u, v)`: `u` monic of degree at most `g`,
/// `deg v < deg u`, and `u | f - v^2`. The identity is `(1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MumfordDivisor<K> {
    u: Poly<K>,
    v: Poly<K>,
}

impl<K: Ring> MumfordDivisor<K> {
    pub fn u(&self) -> &Poly<K> {
        &self.u
    }

    pub fn v(&self) -> &Poly<K> {
        &self.v
    }

    /// Degree of the effective part.
    pub fn degree(&self) -> usize {
        self.u.degree().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.degree() == 0
    }
}

/// Jacobian of `y^2 = f(x)` with `deg f = 2g + 1`, over an exact field `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jacobian<K> {
    f: Poly<K>,
    genus: usize,
}

impl<K: Ring> Jacobian<K> {
    pub fn new(f: Poly<K>) -> Self {
        let genus = f.degree().unwrap_or(1).saturating_sub(1) / 2;
        Jacobian { f, genus }
    }

    pub fn f(&self) -> &Poly<K> {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    fn one(&self) -> K {
        self.f.lc().expect("nonzero f").one_like()
    }

    pub fn identity(&self) -> MumfordDivisor<K> {
        MumfordDivisor { u: Poly::constant(self.one()), v: Poly::zero() }
    }

    /// Build `(u, v)`, checking every Mumford condition.
    pub fn divisor(&self, u: Poly<K>, v: Poly<K>) -> Option<MumfordDivisor<K>> {
        let d = MumfordDivisor { u, v };
        self.is_valid(&d).then_some(d)
    }

    pub fn is_valid(&self, d: &MumfordDivisor<K>) -> bool {
        let du = match d.u.degree() {
            Some(du) => du,
            None => return false,
        };
        d.u.is_monic()
            && du <= self.genus
            && d.v.degree().is_none_or(|dv| dv < du)
            && (&self.f - &(&d.v * &d.v)).rem(&d.u).is_some_and(|r| r.is_zero())
    }

    /// The class of `P - infinity`.
    pub fn point(&self, pt: &CurvePoint<K>) -> Option<MumfordDivisor<K>> {
        match pt {
            CurvePoint::Infinity => Some(self.identity()),
            CurvePoint::Affine { x, y } => self.divisor(Poly::x_minus(x), Poly::constant(y.clone())),
        }
    }

    pub fn neg(&self, d: &MumfordDivisor<K>) -> MumfordDivisor<K> {
        MumfordDivisor { u: d.u.clone(), v: -&d.v }
    }

    pub fn add(&self, a: &MumfordDivisor<K>, b: &MumfordDivisor<K>) -> MumfordDivisor<K> {
        if a.is_identity() {
            return b.clone();
        }
        if b.is_identity() {
            return a.clone();
        }
        let (u, v) = self.compose(a, b);
        self.reduce(u, v)
    }

    pub fn sub(&self, a: &MumfordDivisor<K>, b: &MumfordDivisor<K>) -> MumfordDivisor<K> {
        self.add(a, &self.neg(b))
    }

    /// `n * d` by double-and-add; negative `n` goes through the inverse.
    pub fn mul(&self, d: &MumfordDivisor<K>, n: i64) -> MumfordDivisor<K> {
        let base = if n < 0 { self.neg(d) } else { d.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        let mut pow = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &pow);
            }
            e >>= 1;
            if e > 0 {
                pow = self.add(&pow, &pow);
            }
        }
        acc
    }

    /// `sum c_i d_i`.
    pub fn combination(&self, divisors: &[MumfordDivisor<K>], coeffs: &[i64]) -> MumfordDivisor<K> {
        divisors.iter().zip(coeffs).fold(self.identity(), |acc, (d, &c)| self.add(&acc, &self.mul(d, c)))
    }

    fn compose(&self, a: &MumfordDivisor<K>, b: &MumfordDivisor<K>) -> (Poly<K>, Poly<K>) {
        const FIELD: &str = "Cantor composition runs over a field";
        let (d0, e1, e2) = xgcd(&a.u, &b.u).expect(FIELD);
        let vsum = &a.v + &b.v;
        let (d, c1, c2) = if vsum.is_zero() {
            (d0, Poly::constant(self.one()), Poly::zero())
        } else {
            xgcd(&d0, &vsum).expect(FIELD)
        };
        let s1 = &c1 * &e1;
        let s2 = &c1 * &e2;
        let s3 = c2;
        let d2 = &d * &d;
        let u = (&a.u * &b.u).exact_div(&d2).expect(FIELD);
        let num = &(&(&(&s1 * &a.u) * &b.v) + &(&(&s2 * &b.u) * &a.v)) + &(&s3 * &(&(&a.v * &b.v) + &self.f));
        let v = num.exact_div(&d).expect(FIELD).rem(&u).expect(FIELD);
        (u, v)
    }

    fn reduce(&self, mut u: Poly<K>, mut v: Poly<K>) -> MumfordDivisor<K> {
        const FIELD: &str = "Cantor reduction runs over a field";
        while u.degree().unwrap_or(0) > self.genus {
            let w = (&self.f - &(&v * &v)).exact_div(&u).expect(FIELD);
            u = w.monic().expect(FIELD);
            v = (-&v).rem(&u).expect(FIELD);
        }
        let u = u.monic().expect(FIELD);
        let v = v.rem(&u).expect(FIELD);
        MumfordDivisor { u, v }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_tower::finite_field::fp_poly;
    use crate::ring_tower::rational::{rat, ratio};
    use crate::ring_tower::{Fp, Rational};

    fn genus2_fp() -> Jacobian<Fp> {
        // y^2 = x^5 + x^3 + x^2 + 1/4 over F_5, 1/4 = 4.
        Jacobian::new(fp_poly(&[4, 0, 1, 1, 0, 1], 5))
    }

    #[test]
    fn identity_and_inverse() {
        let j = genus2_fp();
        let p = j.point(&CurvePoint::Affine { x: Fp::new(0, 5), y: Fp::new(2, 5) }).unwrap();
        assert_eq!(j.add(&j.identity(), &p), p);
        assert!(j.add(&p, &j.neg(&p)).is_identity());
        assert!(j.mul(&p, 15).is_identity());
        assert!(!j.mul(&p, 5).is_identity() && !j.mul(&p, 3).is_identity());
    }

    #[test]
    fn rational_arithmetic_stays_valid() {
        let f = Poly::new(vec![ratio(1, 4), rat(0), rat(1), rat(1), rat(0), rat(1)]);
        let j: Jacobian<Rational> = Jacobian::new(f);
        let p = j.point(&CurvePoint::Affine { x: rat(0), y: ratio(-1, 2) }).unwrap();
        let mut acc = j.identity();
        for _ in 0..6 {
            acc = j.add(&acc, &p);
            assert!(j.is_valid(&acc));
        }
        assert_eq!(acc, j.mul(&p, 6));
        assert_eq!(j.mul(&p, -6), j.neg(&acc));
    }
}
