use serde::{Deserialize, Serialize};

use super::points::points_over_fp;
use super::{CurveError, CurvePoint, FpPoint, HyperellipticCurve, LocalPoint};
use crate::ring_tower::{hensel_lift_root, Fp, LocalRing, PadicResidue, PadicRing, Poly, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiskKind {
    /// Parameter `s = x - x0`.
    FiniteOrdinary,
    /// Parameter `s = y`.
    FiniteWeierstrass,
    /// Parameter `t = x^g / y`.
    Infinity,
}

/// The points of `C(Z_p)` reducing to one `F_p`-point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueDisk {
    pub center: FpPoint,
    pub kind: DiskKind,
}

impl ResidueDisk {
    pub fn of(center: FpPoint) -> Self {
        let kind = match &center {
            CurvePoint::Infinity => DiskKind::Infinity,
            CurvePoint::Affine { y, .. } if y.value() == 0 => DiskKind::FiniteWeierstrass,
            CurvePoint::Affine { .. } => DiskKind::FiniteOrdinary,
        };
        ResidueDisk { center, kind }
    }

    pub fn involution(&self) -> Self {
        ResidueDisk { center: self.center.involution(), kind: self.kind }
    }

    pub fn is_weierstrass(&self) -> bool {
        self.kind != DiskKind::FiniteOrdinary
    }

    pub fn label(&self) -> String {
        let (x, y, z) = self.center.triple();
        format!("({x} : {y} : {z})")
    }
}

impl HyperellipticCurve {
    /// `C(F_p)`, sorted with infinity last.
    pub fn points_mod_p(&self) -> Vec<FpPoint> {
        points_over_fp(&self.f_mod_p)
    }

    /// Projective label of an `F_p`-point of the model, in original coordinates.
    pub fn fp_point_label(&self, pt: &FpPoint) -> String {
        match pt {
            CurvePoint::Infinity => "(1 : 0 : 0)".to_string(),
            CurvePoint::Affine { x, y } => {
                let half_h = super::reduce_poly(&self.h.scale(&super::half()), self.p).expect("p-integral h");
                format!("({} : {} : 1)", x.value(), (*y - half_h.eval(x)).value())
            }
        }
    }

    /// The `F_p`-point with original coordinates `(x, y)`, moved to the model.
    pub fn fp_point(&self, x: u64, y: u64) -> Result<FpPoint, CurveError> {
        let half_h = super::reduce_poly(&self.h.scale(&super::half()), self.p).expect("p-integral h");
        let x = Fp::new(x % self.p, self.p);
        let y = Fp::new(y % self.p, self.p) + half_h.eval(&x);
        if y * y != self.f_mod_p.eval(&x) {
            return Err(CurveError::NotOnCurve { x: x.to_string(), y: y.to_string() });
        }
        Ok(CurvePoint::Affine { x, y })
    }

    /// Label of the disk centre in original coordinates.
    pub fn disk_label(&self, disk: &ResidueDisk) -> String {
        self.fp_point_label(&disk.center)
    }

    /// All residue disks, in the order of [`Self::points_mod_p`].
    pub fn disks(&self) -> Vec<ResidueDisk> {
        self.points_mod_p().into_iter().map(ResidueDisk::of).collect()
    }

    pub fn disk_of(&self, pt: &FpPoint) -> Result<ResidueDisk, CurveError> {
        if let CurvePoint::Affine { x, y } = pt {
            if *y * *y != self.f_mod_p.eval(x) {
                return Err(CurveError::NotOnCurve { x: x.to_string(), y: y.to_string() });
            }
        }
        Ok(ResidueDisk::of(pt.clone()))
    }

    /// The `x`-coordinate used as disk centre: the least nonnegative residue for
    /// an ordinary disk, the Hensel root of `f` for a Weierstrass disk.
    pub fn center_x(&self, disk: &ResidueDisk, prec: u32) -> Result<PadicResidue, CurveError> {
        let ring = PadicRing::new(self.p, prec)?;
        match (&disk.center, disk.kind) {
            (CurvePoint::Affine { x, .. }, DiskKind::FiniteOrdinary) => Ok(ring.from_u64(x.value())),
            (CurvePoint::Affine { x, .. }, DiskKind::FiniteWeierstrass) => {
                let f = self.f_padic(prec)?;
                Ok(hensel_lift_root(&f, &ring.from_u64(x.value()))?)
            }
            _ => Err(CurveError::WrongDisk),
        }
    }

    /// The point of the disk with parameter `p * mu`, modulo `p^N`.
    pub fn canonical_lift(&self, disk: &ResidueDisk, mu: u64, prec: u32) -> Result<LocalPoint, CurveError> {
        let ring = PadicRing::new(self.p, prec)?;
        let s = ring.from_u64(mu) * ring.from_u64(self.p);
        let f = self.f_padic(prec)?;
        match (&disk.center, disk.kind) {
            (CurvePoint::Affine { y: ybar, .. }, DiskKind::FiniteOrdinary) => {
                let x = self.center_x(disk, prec)? + s;
                let eq = Poly::new(vec![-f.eval(&x), ring.zero(), ring.one()]);
                let y = hensel_lift_root(&eq, &ring.from_u64(ybar.value()))?;
                Ok(LocalPoint::Affine { x, y })
            }
            (CurvePoint::Affine { x: xbar, .. }, DiskKind::FiniteWeierstrass) => {
                let eq = &f - &Poly::constant(s * s);
                let x = hensel_lift_root(&eq, &ring.from_u64(xbar.value()))?;
                Ok(LocalPoint::Affine { x, y: s })
            }
            (CurvePoint::Infinity, _) => {
                if s.is_zero() {
                    Ok(LocalPoint::Infinity)
                } else {
                    Ok(LocalPoint::NearInfinity { t: s })
                }
            }
            _ => Err(CurveError::WrongDisk),
        }
    }

    /// The disk parameter of a local point (always divisible by `p`).
    pub fn parameter(&self, disk: &ResidueDisk, pt: &LocalPoint, prec: u32) -> Result<PadicResidue, CurveError> {
        if self.reduce_local(pt) != disk.center {
            return Err(CurveError::WrongDisk);
        }
        let ring = PadicRing::new(self.p, prec)?;
        match (disk.kind, pt) {
            (DiskKind::FiniteOrdinary, LocalPoint::Affine { x, .. }) => Ok(*x - self.center_x(disk, x.precision())?),
            (DiskKind::FiniteWeierstrass, LocalPoint::Affine { y, .. }) => Ok(*y),
            (DiskKind::Infinity, LocalPoint::NearInfinity { t }) => Ok(*t),
            (DiskKind::Infinity, LocalPoint::Infinity) => Ok(ring.zero()),
            _ => Err(CurveError::WrongDisk),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_tower::rational::{rat, ratio};
    use crate::ring_tower::{Fp, Rational};

    fn genus2() -> HyperellipticCurve {
        let f = Poly::new(vec![ratio(1, 4), rat(0), rat(1), rat(1), rat(0), rat(1)]);
        HyperellipticCurve::validate(f, Poly::<Rational>::zero(), 5).unwrap()
    }

    #[test]
    fn lift_of_first_point_disk() {
        let c = genus2();
        let disk = c.disk_of(&CurvePoint::Affine { x: Fp::new(0, 5), y: Fp::new(2, 5) }).unwrap();
        assert_eq!(disk.kind, DiskKind::FiniteOrdinary);
        let pt = c.canonical_lift(&disk, 1, 2).unwrap();
        let LocalPoint::Affine { x, y } = pt else { panic!("affine expected") };
        assert_eq!(x.value(), 5);
        let half = PadicRing::new(5, 2).unwrap().from_rational(&ratio(-1, 2)).unwrap();
        assert_eq!(y, half);
        assert!(c.local_point_on_curve(&pt).unwrap());
        assert_eq!(c.canonical_lift(&disk, 0, 3).map(|p| c.reduce_local(&p)).unwrap(), disk.center);
    }

    #[test]
    fn parameters_differ_by_p() {
        let c = genus2();
        for disk in c.disks() {
            let a = c.canonical_lift(&disk, 1, 3).unwrap();
            let b = c.canonical_lift(&disk, 2, 3).unwrap();
            let sa = c.parameter(&disk, &a, 3).unwrap();
            let sb = c.parameter(&disk, &b, 3).unwrap();
            assert_eq!((sb - sa).value(), 5);
        }
    }
}
