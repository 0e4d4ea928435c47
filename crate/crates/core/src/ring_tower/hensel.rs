//! Newton iteration for simple roots, Hensel lifting of coprime factorizations,
//! and Newton polygons.

use super::finite_field::{factor_mod_p, Fp};
use super::poly::{xgcd, Poly};
use super::{LocalRing, PadicResidue, Ring, RingError};

/// Lift a simple root modulo `p` to the full precision of `seed`.
///
/// `seed` must already live at the target precision; only its residue matters.
pub fn hensel_lift_root<R: LocalRing>(poly: &Poly<R>, seed: &R) -> Result<R, RingError> {
    if !poly.eval(seed).reduces_to_zero() {
        return Err(RingError::NotARoot);
    }
    let d = poly.derivative();
    if d.eval(seed).reduces_to_zero() {
        return Err(RingError::NonSimpleRoot);
    }
    let mut x = seed.clone();
    let mut known = 1u32;
    while known < seed.precision() {
        let inv = d.eval(&x).try_inv().ok_or(RingError::NonSimpleRoot)?;
        x = x.clone() - poly.eval(&x) * inv;
        known *= 2;
    }
    // One more step guards against a seed that was only correct mod p.
    let inv = d.eval(&x).try_inv().ok_or(RingError::NonSimpleRoot)?;
    x = x.clone() - poly.eval(&x) * inv;
    debug_assert!(poly.eval(&x).is_zero());
    Ok(x)
}

/// One edge of a Newton polygon: `length` roots of valuation `rise / length`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonSegment {
    pub length: usize,
    pub rise: u32,
}

impl NewtonSegment {
    pub fn is_integral(&self) -> bool {
        (self.rise as usize).is_multiple_of(self.length)
    }
}

/// Lower convex hull of `(i, v_p(c_i))` for a polynomial over `Z/p^N`.
/// A zero coefficient counts as valuation `N`, which is a lower bound only.
/// Segments are listed from the highest root valuation to the lowest.
pub fn newton_polygon(poly: &Poly<PadicResidue>) -> Vec<NewtonSegment> {
    let Some(deg) = poly.degree() else { return vec![] };
    let n = poly.lc().unwrap().precision();
    let pts: Vec<(usize, u32)> =
        poly.coeffs().iter().enumerate().map(|(i, c)| (i, c.valuation().unwrap_or(n))).collect();
    let mut segs = Vec::new();
    let mut i = 0;
    while i < deg {
        // Pick the next vertex minimizing the slope (v_j - v_i) / (j - i), farthest on ties.
        let (vi, mut best) = (pts[i].1 as i64, i + 1);
        for j in i + 1..=deg {
            let lhs = (pts[j].1 as i64 - vi) * (best - i) as i64;
            let rhs = (pts[best].1 as i64 - vi) * (j - i) as i64;
            if lhs <= rhs {
                best = j;
            }
        }
        let drop = vi - pts[best].1 as i64;
        segs.push(NewtonSegment { length: best - i, rise: drop.max(0) as u32 });
        i = best;
    }
    segs
}

/// A factor of a monic polynomial over `Z/p^N` whose reduction is
/// `residue^multiplicity` for a single monic irreducible `residue`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalFactor {
    pub factor: Poly<PadicResidue>,
    pub residue: Poly<Fp>,
    pub multiplicity: u32,
    /// Newton polygon of the factor recentred at a lift of its residue root
    /// (only for linear residues).
    pub segments: Vec<NewtonSegment>,
    /// True when some root may generate a ramified extension.
    pub ramified: bool,
}

pub fn reduce_mod_p(poly: &Poly<PadicResidue>) -> Poly<Fp> {
    poly.map(|c| Fp::new(c.value(), c.p()))
}

pub fn lift_from_fp(poly: &Poly<Fp>, template: &PadicResidue) -> Poly<PadicResidue> {
    poly.map(|c| template.int_like(c.value() as i64))
}

/// Lift `f = a * b mod p` (with `a`, `b` coprime and `b` monic) to `f = A * B`.
fn lift_pair(
    f: &Poly<PadicResidue>,
    a: &Poly<Fp>,
    b: &Poly<Fp>,
) -> Result<(Poly<PadicResidue>, Poly<PadicResidue>), RingError> {
    let template = *f.lc().unwrap();
    let (g, s, _t) = xgcd(a, b).ok_or(RingError::InseparableConfiguration)?;
    if g.degree() != Some(0) {
        return Err(RingError::InseparableConfiguration);
    }
    let s = lift_from_fp(&s, &template);
    let mut big_b = lift_from_fp(b, &template);
    let prec = template.precision();
    for _ in 0..=prec + 1 {
        let big_a = f.divrem(&big_b).ok_or(RingError::NotMonic)?.0;
        let e = f - &(&big_a * &big_b);
        if e.is_zero() {
            return Ok((big_a, big_b));
        }
        // s A + t B = 1 mod p, so e = (s e) A + (t e) B; correct B by (s e) mod B.
        let corr = (&s * &e).rem(&big_b).ok_or(RingError::NotMonic)?;
        big_b = &big_b + &corr;
    }
    let big_a = f.divrem(&big_b).ok_or(RingError::NotMonic)?.0;
    if (f - &(&big_a * &big_b)).is_zero() {
        Ok((big_a, big_b))
    } else {
        Err(RingError::InseparableConfiguration)
    }
}

/// Split a monic polynomial over `Z/p^N` into factors, one per distinct
/// irreducible factor of its reduction. No slope splitting is attempted inside
/// a factor; the Newton polygon is reported so callers can detect ramification.
pub fn hensel_factor(poly: &Poly<PadicResidue>) -> Result<Vec<LocalFactor>, RingError> {
    if !poly.is_monic() {
        return Err(RingError::NotMonic);
    }
    let template = *poly.lc().unwrap();
    let residue_factors = factor_mod_p(&reduce_mod_p(poly));
    let mut rest = poly.clone();
    let mut out = Vec::new();
    for (idx, (g, e)) in residue_factors.iter().enumerate() {
        let target = g.pow(*e, &Fp::new(1, template.p()));
        let factor = if idx + 1 == residue_factors.len() {
            rest.clone()
        } else {
            let cof = reduce_mod_p(&rest).exact_div(&target).ok_or(RingError::InseparableConfiguration)?;
            let (a, b) = lift_pair(&rest, &cof, &target)?;
            rest = a;
            b
        };
        let (segments, ramified) = if g.degree() == Some(1) {
            let root = template.int_like((-g.coeffs()[0]).value() as i64);
            let segs = newton_polygon(&factor.taylor_shift(&root));
            let ram = segs.iter().any(|s| !s.is_integral());
            (segs, ram)
        } else {
            (vec![], *e > 1)
        };
        out.push(LocalFactor { factor, residue: g.clone(), multiplicity: *e, segments, ramified });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_tower::rational::ratio;
    use crate::ring_tower::PadicRing;

    fn poly(r: &PadicRing, c: &[i64]) -> Poly<PadicResidue> {
        Poly::new(c.iter().map(|&v| r.from_i64(v)).collect())
    }

    #[test]
    fn square_root_of_a_quarter() {
        let r = PadicRing::new(5, 3).unwrap();
        let quarter = r.from_rational(&ratio(1, 4)).unwrap();
        let f = Poly::new(vec![-quarter, r.zero(), r.one()]);
        let y = hensel_lift_root(&f, &r.from_i64(2)).unwrap();
        assert_eq!(y.value() % 5, 2);
        assert_eq!(y * y, quarter);
    }

    #[test]
    fn linear_and_error_cases() {
        let r = PadicRing::new(7, 4).unwrap();
        let f = poly(&r, &[-100, 1]);
        assert_eq!(hensel_lift_root(&f, &r.from_i64(2)).unwrap(), r.from_i64(100));
        let sq = poly(&r, &[0, 0, 1]);
        assert_eq!(hensel_lift_root(&sq, &r.zero()), Err(RingError::NonSimpleRoot));
        assert_eq!(hensel_lift_root(&f, &r.from_i64(1)), Err(RingError::NotARoot));
    }

    #[test]
    fn curve_ordinate_lifts() {
        // y^2 = x^5 + x^3 + x^2 + 1/4 at x = 5.
        let r = PadicRing::new(5, 3).unwrap();
        let rhs = r.from_i64(3125 + 125 + 25) + r.from_rational(&ratio(1, 4)).unwrap();
        let f = Poly::new(vec![-rhs, r.zero(), r.one()]);
        let y = hensel_lift_root(&f, &r.from_i64(2)).unwrap();
        assert!(f.eval(&y).is_zero());
    }

    #[test]
    fn precision_coherence() {
        let r3 = PadicRing::new(3, 3).unwrap();
        let r4 = PadicRing::new(3, 4).unwrap();
        let f3 = poly(&r3, &[-7, 0, 1]);
        let f4 = poly(&r4, &[-7, 0, 1]);
        let a = hensel_lift_root(&f3, &r3.from_i64(1)).unwrap();
        let b = hensel_lift_root(&f4, &r4.from_i64(1)).unwrap();
        assert_eq!(b.reduce(3), a);
    }

    #[test]
    fn ramified_factor_is_flagged() {
        let r = PadicRing::new(5, 3).unwrap();
        let f = poly(&r, &[-5, 0, 1]);
        let fac = hensel_factor(&f).unwrap();
        assert_eq!(fac.len(), 1);
        assert!(fac[0].ramified);
        assert_eq!(fac[0].segments, vec![NewtonSegment { length: 2, rise: 1 }]);
    }

    #[test]
    fn coprime_factors_split() {
        let r = PadicRing::new(5, 3).unwrap();
        let f = &poly(&r, &[-6, 1]) * &poly(&r, &[-12, 1]);
        let fac = hensel_factor(&f).unwrap();
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().any(|l| l.factor == poly(&r, &[-6, 1])));
        assert!(fac.iter().any(|l| l.factor == poly(&r, &[-12, 1])));
        assert!(!fac[0].ramified && !fac[1].ramified);
    }

    #[test]
    fn irreducible_quadratic_stays_whole() {
        let r = PadicRing::new(5, 4).unwrap();
        // (x^2 - 2) (x - 1) with x^2 - 2 irreducible mod 5.
        let f = &poly(&r, &[-2, 0, 1]) * &poly(&r, &[-1, 1]);
        let fac = hensel_factor(&f).unwrap();
        assert_eq!(fac.len(), 2);
        let quad = fac.iter().find(|l| l.factor.degree() == Some(2)).unwrap();
        assert_eq!(quad.factor, poly(&r, &[-2, 0, 1]));
    }
}
