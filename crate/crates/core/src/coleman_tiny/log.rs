use std::collections::BTreeMap;

use super::expansion::expand_disk;
use super::{ColemanError, LogVector};
use crate::curve_model::{CurvePoint, DiskKind, HyperellipticCurve, LocalPoint, ResidueDisk};
use crate::mumford_jacobian::FormalClass;
use crate::ring_tower::linalg::nullspace;
use crate::ring_tower::series::power_sums;
use crate::ring_tower::{
    hensel_factor, newton_polygon, valuation_u64, Antiderivative, Fp, LocalRing, PadicResidue, PadicRing, Poly, Ring,
    TruncatedSeries,
};

/// `(1/p) (G_k(s(P)) - G_k(s(P')))` for two points of one residue disk, i.e. the
/// renormalized integral from `base` to `pt`, modulo `p^(N-1)` where `N` is
/// the smaller of `prec` and the point precisions.
pub fn tiny_integral(
    curve: &HyperellipticCurve,
    pt: &LocalPoint,
    base: &LocalPoint,
    prec: u32,
) -> Result<LogVector, ColemanError> {
    let center = curve.reduce_local(pt);
    if center != curve.reduce_local(base) {
        return Err(ColemanError::DistinctDisks);
    }
    let n = [pt.precision(), base.precision()].into_iter().flatten().fold(prec, u32::min);
    if n < 2 {
        return Err(ColemanError::InsufficientPrecision(n));
    }
    let m = n - 1;
    let disk = curve.disk_of(&center)?;
    let e = expand_disk(curve, &disk, n, Antiderivative::<PadicResidue>::needed_terms(curve.prime(), m))?;
    let at = |q: &LocalPoint| -> Result<Vec<PadicResidue>, ColemanError> {
        let mu = curve.parameter(&disk, q, n)?.shift_down(1);
        e.log_at(&mu, m)
    };
    let (a, b) = (at(pt)?, at(base)?);
    Ok(LogVector::new(a.iter().zip(&b).map(|(x, y)| *x - *y).collect()))
}

/// The points of a class lying in one residue disk, after moving every
/// ordinary fibre onto a single disk with nonnegative total multiplicity.
#[derive(Clone, Debug)]
struct DiskTerms {
    disk: ResidueDisk,
    points: Vec<(LocalPoint, i64)>,
    /// Number of zeros of the auxiliary function in this disk.
    zeros: usize,
}

fn group_by_disk(curve: &HyperellipticCurve, terms: &[(LocalPoint, i64)]) -> Vec<DiskTerms> {
    let p = curve.prime();
    let mut fibers: BTreeMap<u64, Vec<(LocalPoint, i64)>> = BTreeMap::new();
    let mut special: BTreeMap<ResidueDisk, Vec<(LocalPoint, i64)>> = BTreeMap::new();
    for (pt, n) in terms {
        let center = curve.reduce_local(pt);
        match &center {
            CurvePoint::Affine { x, y } if y.value() != 0 => {
                // [P - inf] = -[iota P - inf]
                let moved = if y.value() > p / 2 { (pt.involution(), -n) } else { (pt.clone(), *n) };
                fibers.entry(x.value()).or_default().push(moved);
            }
            _ => special.entry(ResidueDisk::of(center)).or_default().push((pt.clone(), *n)),
        }
    }
    let mut out = Vec::new();
    for (_, mut points) in fibers {
        let c: i64 = points.iter().map(|t| t.1).sum();
        if c < 0 {
            points = points.into_iter().map(|(q, n)| (q.involution(), -n)).collect();
        }
        let disk = ResidueDisk::of(curve.reduce_local(&points[0].0));
        out.push(DiskTerms { disk, points, zeros: c.unsigned_abs() as usize });
    }
    for (disk, points) in special {
        let c: i64 = points.iter().map(|t| t.1).sum();
        // Twice a finite Weierstrass point is linearly equivalent to twice infinity.
        let zeros = if disk.kind == DiskKind::FiniteWeierstrass { c.rem_euclid(2) as usize } else { 0 };
        out.push(DiskTerms { disk, points, zeros });
    }
    out
}

/// `a(x) + y b(x)` over `F_p` with divisor `sum zeros * centre - n * inf`.
fn function_mod_p(curve: &HyperellipticCurve, groups: &[DiskTerms]) -> Result<(Vec<Fp>, Vec<Fp>), ColemanError> {
    let p = curve.prime();
    let g = curve.genus();
    let n: usize = groups.iter().map(|d| d.zeros).sum();
    let na = n / 2 + 1;
    let nb = if n > 2 * g { (n - 2 * g - 1) / 2 + 1 } else { 0 };
    let one = Fp::new(1, p);
    let fbar = curve.f_mod_p();
    let mut rows: Vec<Vec<Fp>> = Vec::new();
    for d in groups.iter().filter(|d| d.zeros > 0) {
        let CurvePoint::Affine { x: x0, y: y0 } = d.disk.center else { unreachable!("infinity carries no zeros") };
        if d.disk.kind == DiskKind::FiniteWeierstrass {
            let mut row: Vec<Fp> = (0..na).map(|i| Ring::pow(&x0, i as u64)).collect();
            row.resize(na + nb, one.zero_like());
            rows.push(row);
            continue;
        }
        let c = d.zeros;
        let xs = TruncatedSeries::constant(x0, c).add(&TruncatedSeries::var(&one, c));
        let ys = xs.apply_poly(fbar).sqrt_with(&y0).ok_or(ColemanError::NoFunctionFound)?;
        let cols: Vec<TruncatedSeries<Fp>> =
            (0..na).map(|i| xs.pow(i as u32)).chain((0..nb).map(|j| ys.mul(&xs.pow(j as u32)))).collect();
        for r in 0..c {
            rows.push(cols.iter().map(|s| *s.coeff(r)).collect());
        }
    }
    let ns = nullspace(&rows, na + nb, &one);
    if ns.len() != 1 {
        return Err(ColemanError::NoFunctionFound);
    }
    let v = &ns[0];
    Ok((v[..na].to_vec(), v[na..].to_vec()))
}

/// What is known about the zeros of the lifted function inside one disk.
enum Zeros {
    None,
    /// Power sums of the parameters `s_z` of the zeros.
    Ordinary {
        psums: Vec<PadicResidue>,
    },
    /// A single zero at parameter `p * mu`.
    Weierstrass {
        mu: PadicResidue,
    },
}

struct ZeroPlan {
    zeros: Vec<Zeros>,
    /// Largest `v_p(m)` over the exponents used in the power-sum evaluation.
    scale: u32,
}

/// Last exponent `m` with `ceil(m * rise / len) - 1 - v_p(m) < out`.
fn term_bound(p: u64, rise: u32, len: usize, out: u32) -> usize {
    let (rise, len) = (rise as usize, len);
    let limit = (out as usize + 42) * len / rise + 2;
    let mut last = 0;
    for k in 1..=limit {
        let lower = (k * rise).div_ceil(len) as i64 - 1 - valuation_u64(k as u64, p) as i64;
        if lower < out as i64 {
            last = k;
        }
    }
    last
}

fn plan_zeros(
    curve: &HyperellipticCurve,
    groups: &[DiskTerms],
    abar: &[Fp],
    bbar: &[Fp],
    w0: u32,
    out: u32,
) -> Result<ZeroPlan, ColemanError> {
    let p = curve.prime();
    let ring = PadicRing::new(p, w0)?;
    let lift = |v: &[Fp]| Poly::new(v.iter().map(|c| ring.from_u64(c.value())).collect());
    let (a, b) = (lift(abar), lift(bbar));
    let f = curve.f_padic(w0)?;
    let norm = &(&a * &a) - &(&f * &(&b * &b));
    let factors = if norm.degree().unwrap_or(0) == 0 {
        vec![]
    } else {
        hensel_factor(&norm.monic().ok_or(ColemanError::NoFunctionFound)?)?
    };
    let mut used = vec![false; factors.len()];
    let mut zeros = Vec::with_capacity(groups.len());
    let mut scale = 0;
    for d in groups {
        if d.zeros == 0 {
            zeros.push(Zeros::None);
            continue;
        }
        let CurvePoint::Affine { x: x0, .. } = d.disk.center else { unreachable!("infinity carries no zeros") };
        let idx = factors
            .iter()
            .position(|lf| lf.residue.degree() == Some(1) && (-lf.residue.coeffs()[0]) == x0)
            .ok_or(ColemanError::NoFunctionFound)?;
        used[idx] = true;
        let factor = &factors[idx].factor;
        if factor.degree() != Some(d.zeros) {
            return Err(ColemanError::NoFunctionFound);
        }
        if d.disk.kind == DiskKind::FiniteWeierstrass {
            let xz = -factor.coeffs()[0];
            let bz = b.eval(&xz).try_inv().ok_or(ColemanError::RamifiedConfiguration)?;
            let yz = -a.eval(&xz) * bz;
            if !yz.reduces_to_zero() {
                return Err(ColemanError::NoFunctionFound);
            }
            zeros.push(Zeros::Weierstrass { mu: yz.shift_down(1) });
            continue;
        }
        let shifted = factor.taylor_shift(&curve.center_x(&d.disk, w0)?);
        let segs = newton_polygon(&shifted);
        // Smallest root valuation rise / length; every root lies in the open disk.
        let seg = segs
            .iter()
            .min_by(|s, t| (s.rise as usize * t.length).cmp(&(t.rise as usize * s.length)))
            .ok_or(ColemanError::NoFunctionFound)?;
        if seg.rise == 0 {
            return Err(ColemanError::NoFunctionFound);
        }
        let terms = term_bound(p, seg.rise, seg.length, out);
        scale = (1..=terms as u64).map(|k| valuation_u64(k, p)).fold(scale, u32::max);
        zeros.push(Zeros::Ordinary { psums: power_sums(&shifted, terms) });
    }
    if used.iter().any(|u| !u) {
        return Err(ColemanError::NoFunctionFound);
    }
    Ok(ZeroPlan { zeros, scale })
}

/// Renormalized logarithm `((1/p) integral_0^D omega_k)_k` of a class in the
/// kernel of reduction, modulo `p^(N-1)` where `N` is the smaller of `prec`
/// and the precisions of the class's points.
///
/// An auxiliary function `g = a(x) + y b(x)` is found over `F_p` whose divisor
/// reduces to the class's points after moving them into one disk per fibre;
/// any coefficientwise lift has a zero divisor `D0` of class zero, so the log
/// is the per-disk difference of antiderivative sums over `D` and `D0`. The
/// sums over `D0` use power sums of the local factors of `a^2 - f b^2`, so no
/// roots are extracted.
pub fn kernel_log(curve: &HyperellipticCurve, class: &FormalClass, prec: u32) -> Result<LogVector, ColemanError> {
    let p = curve.prime();
    let g = curve.genus();
    let class = class.normalized();
    if !class.image_mod_p(curve)?.is_identity() {
        return Err(ColemanError::NotInKernel);
    }
    let mut n = prec;
    let mut terms = Vec::with_capacity(class.terms().len());
    for (pt, k) in class.terms() {
        let local = pt.localize(curve, prec)?;
        if let Some(q) = local.precision() {
            n = n.min(q);
        }
        terms.push((local, *k));
    }
    if n < 2 {
        return Err(ColemanError::InsufficientPrecision(n));
    }
    let out = n - 1;
    let groups = group_by_disk(curve, &terms);
    let (abar, bbar) = function_mod_p(curve, &groups)?;

    let mut w0 = n + 2;
    let plan = loop {
        let plan = plan_zeros(curve, &groups, &abar, &bbar, w0, out)?;
        let required = out + plan.scale + 2;
        if required <= w0 {
            break plan;
        }
        w0 = required;
    };

    let needed = Antiderivative::<PadicResidue>::needed_terms(p, out);
    let small = PadicRing::new(p, out)?;
    let big = PadicRing::new(p, w0)?;
    let mut direct = vec![small.zero(); g];
    let mut scaled = vec![big.zero(); g];
    for (d, z) in groups.iter().zip(&plan.zeros) {
        let t = match z {
            Zeros::Ordinary { psums } => psums.len(),
            _ => 0,
        };
        let e = expand_disk(curve, &d.disk, w0, needed.max(t))?;
        for (pt, k) in &d.points {
            let mu = curve.parameter(&d.disk, pt, w0)?.shift_down(1);
            for (acc, v) in direct.iter_mut().zip(e.log_at(&mu, out)?) {
                *acc = *acc + v * small.from_i64(*k);
            }
        }
        match z {
            Zeros::None => {}
            Zeros::Weierstrass { mu } => {
                for (acc, v) in direct.iter_mut().zip(e.log_at(mu, out)?) {
                    *acc = *acc - v;
                }
            }
            Zeros::Ordinary { psums } => {
                // p^(scale) * sum_z G_k(s_z), term by term without dividing by p.
                for (k, acc) in scaled.iter_mut().enumerate() {
                    let a = e.integrands[k].coeffs();
                    for (i, ps) in psums.iter().enumerate() {
                        let m = i as u64 + 1;
                        let v = valuation_u64(m, p);
                        let u = big.from_u64(m / p.pow(v)).try_inv().expect("unit part");
                        *acc = *acc + a[i] * *ps * u * big.from_u64(p.pow(plan.scale - v));
                    }
                }
            }
        }
    }
    let top = out + plan.scale + 1;
    let lifted = PadicRing::new(p, top)?;
    let factor = p.pow(plan.scale + 1);
    let entries = direct
        .iter()
        .zip(&scaled)
        .map(|(d, s)| {
            let total = d.lift_to(top) * lifted.from_u64(factor) - s.reduce(top);
            if total.value() % factor != 0 {
                return Err(ColemanError::NonIntegral);
            }
            Ok(total.shift_down(plan.scale + 1).reduce(out))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LogVector::new(entries))
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

    #[test]
    fn empty_class_has_zero_log() {
        let c = genus2();
        let l = kernel_log(&c, &FormalClass::new(), 3).unwrap();
        assert!(l.is_zero());
        assert_eq!(l.precision(), 2);
    }

    #[test]
    fn tiny_integral_to_itself_vanishes() {
        let c = genus2();
        let disk = c.disks()[0].clone();
        let pt = c.canonical_lift(&disk, 3, 4).unwrap();
        assert!(tiny_integral(&c, &pt, &pt, 4).unwrap().is_zero());
    }

    #[test]
    fn distinct_disks_are_rejected() {
        let c = genus2();
        let d = c.disks();
        let a = c.canonical_lift(&d[0], 0, 3).unwrap();
        let b = c.canonical_lift(&d[1], 0, 3).unwrap();
        assert_eq!(tiny_integral(&c, &a, &b, 3), Err(ColemanError::DistinctDisks));
    }

    #[test]
    fn rank_one_log() {
        let c = genus2();
        let p1 = c.rational_point(&rat(0), &ratio(-1, 2)).unwrap();
        let class = FormalClass::from_point(p1).scale(15);
        assert_eq!(kernel_log(&c, &class, 2).unwrap().values(), vec![3, 1]);
    }
}
