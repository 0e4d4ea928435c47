//! Odd-degree hyperelliptic curves over `Q` with good reduction at an odd prime.
//!
//! Every curve is stored in the form `y^2 = f(x)`: an input `y^2 + h(x) y = f(x)`
//! is rewritten with `y -> y + h/2`, `f -> f + h^2/4`. Points given in the
//! original coordinates are moved with [`HyperellipticCurve::to_model`].

mod disk;
mod points;

pub use disk::{DiskKind, ResidueDisk};
pub use points::{
    count_points, enumerate_points, lpolynomial_from_counts, points_over_fp, CurvePoint, FpPoint, LPolynomial,
    LocalPoint, DEFAULT_ENUMERATION_CAP,
};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::ring_tower::padic::rational_valuation;
use crate::ring_tower::poly::gcd;
use crate::ring_tower::{is_prime, Fp, LocalRing, PadicResidue, PadicRing, Poly, Rational, Ring, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("p = 2 is not supported")]
    PrimeTwo,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("the model y^2 = f(x) has even degree {0} after completing the square")]
    EvenDegree(usize),
    #[error("genus {0} is not supported (only 2 and 3)")]
    UnsupportedGenus(usize),
    #[error("bad reduction at {p}: {reason}")]
    BadReduction { p: u64, reason: String },
    #[error("enumeration needs {needed} field elements, above the cap {cap}")]
    CapExceeded { needed: u128, cap: u64 },
    #[error("point ({x}, {y}) is not on the curve")]
    NotOnCurve { x: String, y: String },
    #[error("point is not in the requested residue disk")]
    WrongDisk,
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperellipticCurve {
    f: Poly<Rational>,
    h: Poly<Rational>,
    original_f: Poly<Rational>,
    p: u64,
    genus: usize,
    f_mod_p: Poly<Fp>,
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

/// Reduce a rational polynomial modulo `q`; fails on a non-integral coefficient.
pub fn reduce_poly(f: &Poly<Rational>, q: u64) -> Option<Poly<Fp>> {
    let ring = PadicRing::new(q, 1).ok()?;
    let mut out = Vec::new();
    for c in f.coeffs() {
        out.push(Fp::new(ring.from_rational(c).ok()?.value(), q));
    }
    Some(Poly::new(out))
}

/// Check good reduction of `y^2 = f` at an odd prime `q`, returning `f mod q`.
pub fn good_reduction(f: &Poly<Rational>, q: u64) -> Result<Poly<Fp>, CurveError> {
    let bad = |reason: &str| CurveError::BadReduction { p: q, reason: reason.to_string() };
    if f.coeffs().iter().any(|c| rational_valuation(c, q).is_some_and(|v| v < 0)) {
        return Err(bad("coefficients are not integral"));
    }
    let fbar = reduce_poly(f, q).ok_or_else(|| bad("coefficients are not integral"))?;
    if fbar.degree() != f.degree() {
        return Err(bad("leading coefficient vanishes"));
    }
    let g = gcd(&fbar, &fbar.derivative()).expect("nonzero polynomial");
    if g.degree() != Some(0) {
        return Err(bad("f is not squarefree"));
    }
    Ok(fbar)
}

impl HyperellipticCurve {
    /// Validate `y^2 + h(x) y = f(x)` at the prime `p`.
    pub fn validate(f: Poly<Rational>, h: Poly<Rational>, p: u64) -> Result<Self, CurveError> {
        if p == 2 {
            return Err(CurveError::PrimeTwo);
        }
        if !is_prime(p) {
            return Err(CurveError::NotPrime(p));
        }
        let h2 = &h * &h;
        let model = &f + &h2.scale(&(half() * half()));
        let deg = model.degree().unwrap_or(0);
        if deg.is_multiple_of(2) {
            return Err(CurveError::EvenDegree(deg));
        }
        let genus = (deg - 1) / 2;
        if !(2..=3).contains(&genus) {
            return Err(CurveError::UnsupportedGenus(genus));
        }
        let f_mod_p = good_reduction(&model, p)?;
        Ok(HyperellipticCurve { f: model, h, original_f: f, p, genus, f_mod_p })
    }

    pub fn f(&self) -> &Poly<Rational> {
        &self.f
    }

    pub fn h(&self) -> &Poly<Rational> {
        &self.h
    }

    pub fn original_f(&self) -> &Poly<Rational> {
        &self.original_f
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn f_mod_p(&self) -> &Poly<Fp> {
        &self.f_mod_p
    }

    /// `f` with coefficients in `Z/p^N`.
    pub fn f_padic(&self, prec: u32) -> Result<Poly<PadicResidue>, CurveError> {
        let ring = PadicRing::new(self.p, prec)?;
        Ok(self.f.try_map(|c| ring.from_rational(c))?)
    }

    /// `h(x)/2` over `Z/p^N`, the shift between original and model ordinates.
    pub fn half_h_padic(&self, prec: u32) -> Result<Poly<PadicResidue>, CurveError> {
        let ring = PadicRing::new(self.p, prec)?;
        Ok(self.h.scale(&half()).try_map(|c| ring.from_rational(c))?)
    }

    /// Original coordinates to model coordinates.
    pub fn to_model(&self, x: &Rational, y: &Rational) -> (Rational, Rational) {
        (x.clone(), y + self.h.eval(x) * half())
    }

    /// Model coordinates to original coordinates.
    pub fn from_model(&self, x: &Rational, y: &Rational) -> (Rational, Rational) {
        (x.clone(), y - self.h.eval(x) * half())
    }

    pub fn is_on_model(&self, x: &Rational, y: &Rational) -> bool {
        y * y == self.f.eval(x)
    }

    /// A rational point given in original coordinates, checked and moved to the model.
    pub fn rational_point(&self, x: &Rational, y: &Rational) -> Result<CurvePoint<Rational>, CurveError> {
        let (mx, my) = self.to_model(x, y);
        if !self.is_on_model(&mx, &my) {
            return Err(CurveError::NotOnCurve { x: x.to_string(), y: y.to_string() });
        }
        Ok(CurvePoint::Affine { x: mx, y: my })
    }

    /// Reduction of a rational model point modulo `p`.
    pub fn reduce_point(&self, pt: &CurvePoint<Rational>) -> FpPoint {
        match pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                if rational_valuation(x, self.p).is_some_and(|v| v < 0) {
                    return CurvePoint::Infinity;
                }
                let ring = PadicRing::new(self.p, 1).expect("p is prime");
                let xr = ring.from_rational(x).expect("integral x");
                let yr = ring.from_rational(y).expect("integral y on an integral model");
                CurvePoint::Affine { x: Fp::new(xr.value(), self.p), y: Fp::new(yr.value(), self.p) }
            }
        }
    }

    /// Reduction of a local point modulo `p`.
    pub fn reduce_local(&self, pt: &LocalPoint) -> FpPoint {
        match pt {
            LocalPoint::Infinity | LocalPoint::NearInfinity { .. } => CurvePoint::Infinity,
            LocalPoint::Affine { x, y } => {
                CurvePoint::Affine { x: Fp::new(x.value(), self.p), y: Fp::new(y.value(), self.p) }
            }
        }
    }

    /// A rational model point as a point over `Z_p` modulo `p^N`.
    pub fn localize(&self, pt: &CurvePoint<Rational>, prec: u32) -> Result<LocalPoint, CurveError> {
        let ring = PadicRing::new(self.p, prec)?;
        match pt {
            CurvePoint::Infinity => Ok(LocalPoint::Infinity),
            CurvePoint::Affine { x, y } => {
                if rational_valuation(x, self.p).is_some_and(|v| v < 0) {
                    // t = x^g / y has positive valuation here.
                    let t = (0..self.genus).fold(Rational::one(), |acc, _| acc * x) / y;
                    Ok(LocalPoint::NearInfinity { t: ring.from_rational(&t)? })
                } else {
                    Ok(LocalPoint::Affine { x: ring.from_rational(x)?, y: ring.from_rational(y)? })
                }
            }
        }
    }

    /// A point over `Z_p` given in original coordinates modulo `p^N`, checked
    /// against the curve and moved to the model.
    pub fn local_point(&self, x: PadicResidue, y: PadicResidue) -> Result<LocalPoint, CurveError> {
        let prec = x.precision().min(y.precision());
        let (x, y) = (x.reduce(prec), y.reduce(prec));
        let pt = LocalPoint::Affine { x, y: y + self.half_h_padic(prec)?.eval(&x) };
        if !self.local_point_on_curve(&pt)? {
            return Err(CurveError::NotOnCurve { x: x.value().to_string(), y: y.value().to_string() });
        }
        Ok(pt)
    }

    /// Projective label `(x : y : 1)` of a model point, in original coordinates.
    pub fn point_label(&self, pt: &CurvePoint<Rational>) -> String {
        match pt {
            CurvePoint::Infinity => "(1 : 0 : 0)".to_string(),
            CurvePoint::Affine { x, y } => {
                let (x, y) = self.from_model(x, y);
                format!("({x} : {y} : 1)")
            }
        }
    }

    /// Check a local point against the model equation at its precision.
    pub fn local_point_on_curve(&self, pt: &LocalPoint) -> Result<bool, CurveError> {
        match pt {
            LocalPoint::Infinity => Ok(true),
            LocalPoint::NearInfinity { t } => Ok(t.reduces_to_zero()),
            LocalPoint::Affine { x, y } => {
                let prec = x.precision().min(y.precision());
                let f = self.f_padic(prec)?;
                Ok(Ring::is_zero(&(*y * *y - f.eval(x))))
            }
        }
    }

    /// `L(T)` from `#C(F_{p^k})`, `k = 1..g`.
    pub fn lpolynomial(&self, cap: u64) -> Result<LPolynomial, CurveError> {
        let counts = (1..=self.genus).map(|k| count_points(&self.f_mod_p, k, cap)).collect::<Result<Vec<_>, _>>()?;
        Ok(lpolynomial_from_counts(self.p, &counts))
    }

    /// `|J(F_p)| = L(1)`.
    pub fn jacobian_order(&self) -> Result<u64, CurveError> {
        Ok(self.lpolynomial(DEFAULT_ENUMERATION_CAP)?.jacobian_order())
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.f.lc().cloned().unwrap_or_else(Rational::one)
    }

    pub fn constant_term_is_zero(&self) -> bool {
        self.f.coeffs().first().is_none_or(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_tower::rational::{rat, ratio};

    fn q(v: &[Rational]) -> Poly<Rational> {
        Poly::new(v.to_vec())
    }

    #[test]
    fn validation_examples() {
        let f = q(&[ratio(1, 4), rat(0), rat(1), rat(1), rat(0), rat(1)]);
        let c = HyperellipticCurve::validate(f, Poly::zero(), 5).unwrap();
        assert_eq!(c.genus(), 2);

        let f = q(&[rat(0), rat(0), rat(0), rat(1), rat(-1), rat(1)]);
        let h = q(&[rat(1), rat(1), rat(1)]);
        let c = HyperellipticCurve::validate(f, h, 3).unwrap();
        assert_eq!(c.genus(), 2);
        // (0, -1) in original coordinates is (0, -1/2) on the model.
        let pt = c.rational_point(&rat(0), &rat(-1)).unwrap();
        assert_eq!(pt, CurvePoint::Affine { x: rat(0), y: ratio(-1, 2) });

        let x5 = q(&[rat(0), rat(0), rat(0), rat(0), rat(0), rat(1)]);
        assert!(matches!(
            HyperellipticCurve::validate(x5.clone(), Poly::zero(), 5),
            Err(CurveError::BadReduction { .. })
        ));
        assert_eq!(HyperellipticCurve::validate(x5.clone(), Poly::zero(), 2), Err(CurveError::PrimeTwo));
        let even = q(&[rat(1), rat(0), rat(0), rat(0), rat(0), rat(0), rat(1)]);
        assert_eq!(HyperellipticCurve::validate(even, Poly::zero(), 5), Err(CurveError::EvenDegree(6)));
    }

    fn ints(v: &[i64]) -> Poly<Rational> {
        Poly::new(v.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn point_counts_and_jacobian_orders() {
        let quintic_p5 =
            HyperellipticCurve::validate(q(&[ratio(1, 4), rat(0), rat(1), rat(1), rat(0), rat(1)]), Poly::zero(), 5)
                .unwrap();
        assert_eq!(quintic_p5.points_mod_p().len(), 3);
        let quintic_p3 = HyperellipticCurve::validate(ints(&[0, 0, 0, 1, -1, 1]), ints(&[1, 1, 1]), 3).unwrap();
        assert_eq!(quintic_p3.points_mod_p().len(), 7);
        let septic_p5 = HyperellipticCurve::validate(ints(&[1, -4, 4, 4, -12, 16, -12, 4]), Poly::zero(), 5).unwrap();
        assert_eq!(septic_p5.points_mod_p().len(), 10);
        assert_eq!(septic_p5.jacobian_order().unwrap(), 340);
        let f56 = q(&[ratio(1, 4), rat(0), rat(-1), rat(3), rat(-5), rat(5), rat(-3), rat(1)]);
        let septic_p3 = HyperellipticCurve::validate(f56, Poly::zero(), 3).unwrap();
        assert_eq!(septic_p3.jacobian_order().unwrap(), 106);
        for c in [&quintic_p5, &quintic_p3, &septic_p5, &septic_p3] {
            let l = c.lpolynomial(DEFAULT_ENUMERATION_CAP).unwrap();
            assert!(l.satisfies_functional_equation() && l.within_weil_bounds());
            // Involution permutes the points; its fixed points are the Weierstrass points.
            let pts = c.points_mod_p();
            for pt in &pts {
                assert!(pts.contains(&pt.involution()));
            }
        }
    }
}
