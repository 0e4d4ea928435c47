use super::ColemanError;
use crate::curve_model::{CurvePoint, DiskKind, HyperellipticCurve, ResidueDisk};
use crate::ring_tower::{hensel_lift_root, Antiderivative, PadicResidue, PadicRing, Poly, Ring, TruncatedSeries};

type Series = TruncatedSeries<PadicResidue>;

/// Local expansions of the differentials `omega_k = x^k dx / (2y)` on one
/// residue disk, as power series in the disk parameter.
///
/// On a finite ordinary disk the parameter is `s = x - x0`, on a finite
/// Weierstrass disk it is `s = y`, and on the infinity disk it is
/// `t = x^g / y`, where `x = 1/w(t)` with `w` a power series.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskExpansion {
    pub disk: ResidueDisk,
    pub precision: u32,
    pub terms: usize,
    /// `x(s)` on finite disks, `w(t) = 1/x` on the infinity disk.
    pub x: Series,
    /// `y(s)` on finite disks; `None` on the infinity disk.
    pub y: Option<Series>,
    /// `g_k` with `omega_k = g_k(s) ds`, for `k = 0..g`.
    pub integrands: Vec<Series>,
}

impl DiskExpansion {
    pub fn genus(&self) -> usize {
        self.integrands.len()
    }

    pub fn antiderivative(&self, k: usize) -> Antiderivative<PadicResidue> {
        self.integrands[k].antiderivative()
    }

    /// `(1/p) G_k(p mu)` for every `k`, modulo `p^out_prec`.
    pub fn log_at(&self, mu: &PadicResidue, out_prec: u32) -> Result<Vec<PadicResidue>, ColemanError> {
        self.integrands.iter().map(|g| Ok(g.antiderivative().eval_at_p_multiple(mu, out_prec)?)).collect()
    }
}

fn fixed_terms(s: &Series, terms: usize) -> Series {
    TruncatedSeries::new(s.coeffs().to_vec(), terms, s.coeff(0))
}

/// Expand the differential basis on `disk` modulo `p^prec`, keeping `terms`
/// coefficients of each integrand.
pub fn expand_disk(
    curve: &HyperellipticCurve,
    disk: &ResidueDisk,
    prec: u32,
    terms: usize,
) -> Result<DiskExpansion, ColemanError> {
    let ring = PadicRing::new(curve.prime(), prec)?;
    let f = curve.f_padic(prec)?;
    let g = curve.genus();
    let terms = terms.max(1);
    let work = terms + 2;
    let zero = ring.zero();
    let s = TruncatedSeries::var(&zero, work);
    let (x, y, integrands) = match (&disk.center, disk.kind) {
        (CurvePoint::Affine { y: ybar, .. }, DiskKind::FiniteOrdinary) => {
            let x0 = curve.center_x(disk, prec)?;
            let xs = TruncatedSeries::constant(x0, work).add(&s);
            let fs = xs.apply_poly(&f);
            let eq = Poly::new(vec![-f.eval(&x0), ring.zero(), ring.one()]);
            let y0 = hensel_lift_root(&eq, &ring.from_u64(ybar.value()))?;
            let ys = fs.sqrt_with(&y0).ok_or(ColemanError::RamifiedConfiguration)?;
            let inv = ys.scale(&ring.from_i64(2)).inv().ok_or(ColemanError::RamifiedConfiguration)?;
            let ints = (0..g).map(|k| xs.pow(k as u32).mul(&inv)).collect::<Vec<_>>();
            (xs, Some(ys), ints)
        }
        (CurvePoint::Affine { .. }, DiskKind::FiniteWeierstrass) => {
            let x0 = curve.center_x(disk, prec)?;
            let df = f.derivative();
            let s2 = s.mul(&s);
            let mut xs = TruncatedSeries::constant(x0, work);
            // Newton iteration for f(x(s)) = s^2; each step doubles the s-adic accuracy.
            let mut known = 1;
            while known < 2 * work {
                let inv = xs.apply_poly(&df).inv().ok_or(ColemanError::RamifiedConfiguration)?;
                xs = xs.sub(&xs.apply_poly(&f).sub(&s2).mul(&inv));
                known *= 2;
            }
            let inv = xs.apply_poly(&df).inv().ok_or(ColemanError::RamifiedConfiguration)?;
            let ints = (0..g).map(|k| xs.pow(k as u32).mul(&inv)).collect::<Vec<_>>();
            (xs, Some(s.clone()), ints)
        }
        (CurvePoint::Infinity, _) => {
            // w = 1/x satisfies w = t^2 F(w) with F(w) = w^(2g+1) f(1/w).
            let mut rev: Vec<PadicResidue> = f.coeffs().to_vec();
            rev.resize(2 * g + 2, ring.zero());
            rev.reverse();
            let big_f = Poly::new(rev);
            let mut w = TruncatedSeries::new(vec![], work, &zero);
            for _ in 0..work / 2 + 1 {
                w = w.apply_poly(&big_f).shift(2);
            }
            let u = w.apply_poly(&big_f);
            let r = u.scale(&ring.from_i64(2)).add(&u.derivative().shift(1));
            let u_inv = u.inv().ok_or(ColemanError::RamifiedConfiguration)?;
            let minus_half = -ring.from_i64(2).try_inv().expect("p is odd");
            let ints = (0..g)
                .map(|k| {
                    let base = if k + 1 == g { u_inv.clone() } else { u.pow((g - k - 2) as u32) };
                    base.mul(&r).shift(2 * (g - k - 1)).scale(&minus_half)
                })
                .collect::<Vec<_>>();
            (w, None, ints)
        }
        _ => return Err(ColemanError::Curve(crate::curve_model::CurveError::WrongDisk)),
    };
    Ok(DiskExpansion {
        disk: disk.clone(),
        precision: prec,
        terms,
        x: fixed_terms(&x, terms),
        y: y.map(|y| fixed_terms(&y, terms)),
        integrands: integrands.iter().map(|g| fixed_terms(g, terms)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_tower::rational::{rat, ratio};
    use crate::ring_tower::Rational;

    fn genus2() -> HyperellipticCurve {
        let f = Poly::new(vec![ratio(1, 4), rat(0), rat(1), rat(1), rat(0), rat(1)]);
        HyperellipticCurve::validate(f, Poly::<Rational>::zero(), 5).unwrap()
    }

    fn genus3() -> HyperellipticCurve {
        let f = Poly::new(vec![ratio(1, 4), rat(0), rat(-1), rat(3), rat(-5), rat(5), rat(-3), rat(1)]);
        HyperellipticCurve::validate(f, Poly::<Rational>::zero(), 3).unwrap()
    }

    #[test]
    fn finite_disks_satisfy_the_curve_equation() {
        for c in [genus2(), genus3()] {
            let f = c.f_padic(5).unwrap();
            for disk in c.disks().iter().filter(|d| d.kind != DiskKind::Infinity) {
                let e = expand_disk(&c, disk, 5, 10).unwrap();
                let y = e.y.clone().unwrap();
                assert_eq!(y.mul(&y), e.x.apply_poly(&f), "disk {}", disk.label());
            }
        }
    }

    #[test]
    fn weierstrass_leading_term() {
        let f = Poly::new(vec![rat(0), rat(-1), rat(0), rat(0), rat(0), rat(1)]);
        let c = HyperellipticCurve::validate(f, Poly::<Rational>::zero(), 7).unwrap();
        let disk = c.disks().into_iter().find(|d| d.kind == DiskKind::FiniteWeierstrass).unwrap();
        let e = expand_disk(&c, &disk, 4, 6).unwrap();
        let x0 = c.center_x(&disk, 4).unwrap();
        let d = c.f_padic(4).unwrap().derivative().eval(&x0);
        assert_eq!(*e.x.coeff(0), x0);
        assert!(e.x.coeff(1).is_zero());
        assert_eq!(*e.x.coeff(2), d.try_inv().unwrap());
    }

    #[test]
    fn infinity_expansion_is_regular_and_consistent() {
        // Check w = t^2 F(w) and that omega_k = x^k dx/(2y) with x = 1/w, y = 1/(t w^g).
        for c in [genus2(), genus3()] {
            let g = c.genus();
            let disk = c.disks().into_iter().find(|d| d.kind == DiskKind::Infinity).unwrap();
            let terms = 12;
            let e = expand_disk(&c, &disk, 5, terms).unwrap();
            let w = &e.x;
            assert!(w.coeff(0).is_zero() && w.coeff(1).is_zero());
            assert!(w.coeff(2).is_unit());
            // x^k dx/(2y) = -(1/2) t w^(g-k-2) w' dt; multiply through by w to stay polynomial.
            let wp = w.derivative();
            let half = c.f_padic(5).unwrap().lc().unwrap().int_like(2).try_inv().unwrap();
            for k in 0..g {
                let lhs = e.integrands[k].mul(&w.pow(k as u32 + 2));
                let rhs = wp.shift(1).mul(&w.pow(g as u32)).scale(&-half);
                let n = terms - 1;
                assert_eq!(&lhs.coeffs()[..n], &rhs.coeffs()[..n], "k = {k}");
            }
        }
    }
}
