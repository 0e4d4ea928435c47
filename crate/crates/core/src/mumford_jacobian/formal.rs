use super::{Jacobian, JacobianError, MumfordDivisor};
use crate::curve_model::{CurvePoint, FpPoint, HyperellipticCurve, LocalPoint};
use crate::ring_tower::padic::rational_valuation;
use crate::ring_tower::{Fp, PadicRing, Poly, Rational};

/// A point on the completed-square model, either exact or known modulo `p^N`.
#[derive(Clone, Debug, PartialEq)]
pub enum ClassPoint {
    Rational(CurvePoint<Rational>),
    Local(LocalPoint),
}

impl From<CurvePoint<Rational>> for ClassPoint {
    fn from(pt: CurvePoint<Rational>) -> Self {
        ClassPoint::Rational(pt)
    }
}

impl From<LocalPoint> for ClassPoint {
    fn from(pt: LocalPoint) -> Self {
        ClassPoint::Local(pt)
    }
}

impl ClassPoint {
    pub fn involution(&self) -> Self {
        match self {
            ClassPoint::Rational(pt) => ClassPoint::Rational(pt.involution()),
            ClassPoint::Local(pt) => ClassPoint::Local(pt.involution()),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ClassPoint::Rational(CurvePoint::Infinity) | ClassPoint::Local(LocalPoint::Infinity))
    }

    /// Reduction modulo the curve's prime.
    pub fn reduce(&self, curve: &HyperellipticCurve) -> FpPoint {
        match self {
            ClassPoint::Rational(pt) => curve.reduce_point(pt),
            ClassPoint::Local(pt) => curve.reduce_local(pt),
        }
    }

    /// The point as an element of `C(Z_p)` modulo `p^N`.
    pub fn localize(&self, curve: &HyperellipticCurve, prec: u32) -> Result<LocalPoint, JacobianError> {
        match self {
            ClassPoint::Rational(pt) => Ok(curve.localize(pt, prec)?),
            ClassPoint::Local(pt) => Ok(pt.clone()),
        }
    }
}

/// Reduce a rational model point modulo an auxiliary prime `q` of good reduction.
pub fn reduce_rational_point(pt: &CurvePoint<Rational>, q: u64) -> Result<FpPoint, JacobianError> {
    match pt {
        CurvePoint::Infinity => Ok(CurvePoint::Infinity),
        CurvePoint::Affine { x, y } => {
            if rational_valuation(x, q).is_some_and(|v| v < 0) {
                return Ok(CurvePoint::Infinity);
            }
            let ring = PadicRing::new(q, 1)?;
            let xr = ring.from_rational(x)?;
            let yr = ring.from_rational(y)?;
            Ok(CurvePoint::Affine { x: Fp::new(xr.value(), q), y: Fp::new(yr.value(), q) })
        }
    }
}

/// `sum n_i [P_i - infinity]` as a formal combination of points.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FormalClass {
    terms: Vec<(ClassPoint, i64)>,
}

impl FormalClass {
    pub fn new() -> Self {
        FormalClass::default()
    }

    pub fn from_point(pt: impl Into<ClassPoint>) -> Self {
        FormalClass { terms: vec![(pt.into(), 1)] }
    }

    pub fn with_term(mut self, pt: impl Into<ClassPoint>, n: i64) -> Self {
        self.push(pt, n);
        self
    }

    pub fn push(&mut self, pt: impl Into<ClassPoint>, n: i64) {
        self.terms.push((pt.into(), n));
    }

    pub fn terms(&self) -> &[(ClassPoint, i64)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &FormalClass) -> FormalClass {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        FormalClass { terms }
    }

    pub fn scale(&self, n: i64) -> FormalClass {
        FormalClass { terms: self.terms.iter().map(|(p, m)| (p.clone(), m * n)).collect() }
    }

    pub fn neg(&self) -> FormalClass {
        self.scale(-1)
    }

    /// `sum c_i classes_i`.
    pub fn combination(classes: &[FormalClass], coeffs: &[i64]) -> FormalClass {
        classes.iter().zip(coeffs).fold(FormalClass::new(), |acc, (c, &n)| acc.add(&c.scale(n)))
    }

    /// The hyperelliptic involution applied pointwise (the class is negated).
    pub fn involution(&self) -> FormalClass {
        FormalClass { terms: self.terms.iter().map(|(p, n)| (p.involution(), *n)).collect() }
    }

    /// Merge repeated points, turn `-n [P - inf]` into `n [iota P - inf]`, and
    /// drop the point at infinity and zero multiplicities.
    pub fn normalized(&self) -> FormalClass {
        let flipped = self.terms.iter().filter(|(p, n)| *n != 0 && !p.is_infinity()).map(|(p, n)| {
            if *n < 0 {
                (p.involution(), -n)
            } else {
                (p.clone(), *n)
            }
        });
        let mut terms: Vec<(ClassPoint, i64)> = Vec::new();
        for (p, n) in flipped {
            match terms.iter_mut().find(|(q, _)| *q == p) {
                Some(entry) => entry.1 += n,
                None => terms.push((p, n)),
            }
        }
        FormalClass { terms }
    }

    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|(p, _)| matches!(p, ClassPoint::Rational(_)))
    }

    /// Image in `J(F_p)` for the curve's prime.
    pub fn image_mod_p(&self, curve: &HyperellipticCurve) -> Result<MumfordDivisor<Fp>, JacobianError> {
        let jac = Jacobian::new(curve.f_mod_p().clone());
        let mut acc = jac.identity();
        for (pt, n) in &self.terms {
            let d = jac.point(&pt.reduce(curve)).ok_or(JacobianError::NotOnCurve)?;
            acc = jac.add(&acc, &jac.mul(&d, *n));
        }
        Ok(acc)
    }

    /// Image in `J(F_q)` for an auxiliary prime; only exact points can be moved.
    pub fn image_mod_q(&self, jac_q: &Jacobian<Fp>, q: u64) -> Result<MumfordDivisor<Fp>, JacobianError> {
        let mut acc = jac_q.identity();
        for (pt, n) in &self.terms {
            let ClassPoint::Rational(pt) = pt else { return Err(JacobianError::NotRational) };
            let d = jac_q.point(&reduce_rational_point(pt, q)?).ok_or(JacobianError::NotOnCurve)?;
            acc = jac_q.add(&acc, &jac_q.mul(&d, *n));
        }
        Ok(acc)
    }
}

/// Exact Mumford form of a rational formal class, and its reduction modulo `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalReduction {
    pub over_q: MumfordDivisor<Rational>,
    /// `None` when some coefficient of `u` or `v` is not `p`-integral; the class
    /// then has points reducing to infinity.
    pub mod_p: Option<MumfordDivisor<Fp>>,
}

pub fn reduce_formal(curve: &HyperellipticCurve, fc: &FormalClass) -> Result<FormalReduction, JacobianError> {
    let jac = Jacobian::new(curve.f().clone());
    let mut acc = jac.identity();
    for (pt, n) in fc.terms() {
        let ClassPoint::Rational(pt) = pt else { return Err(JacobianError::NotRational) };
        let d = jac.point(pt).ok_or(JacobianError::NotOnCurve)?;
        acc = jac.add(&acc, &jac.mul(&d, *n));
    }
    let p = curve.prime();
    let ring = PadicRing::new(p, 1)?;
    let reduce = |poly: &Poly<Rational>| -> Option<Poly<Fp>> {
        let coeffs = poly.coeffs().iter().map(|c| ring.from_rational(c).ok().map(|r| Fp::new(r.value(), p)));
        coeffs.collect::<Option<Vec<_>>>().map(Poly::new)
    };
    let mod_p = match (reduce(acc.u()), reduce(acc.v())) {
        (Some(u), Some(v)) => Jacobian::new(curve.f_mod_p().clone()).divisor(u, v),
        _ => None,
    };
    Ok(FormalReduction { over_q: acc, mod_p })
}
