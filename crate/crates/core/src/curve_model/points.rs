use serde::{Deserialize, Serialize};

use super::CurveError;
use crate::ring_tower::finite_field::{GfElem, GfExt};
use crate::ring_tower::{Fp, LocalRing, PadicResidue, Poly, Ring};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// A point of the smooth projective model. Affine points sort first, so the
/// point at infinity comes last in every sorted list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CurvePoint<T> {
    Affine { x: T, y: T },
    Infinity,
}

pub type FpPoint = CurvePoint<Fp>;

impl<T: Ring> CurvePoint<T> {
    /// The hyperelliptic involution `(x, y) -> (x, -y)`.
    pub fn involution(&self) -> Self {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.clone(), y: -y.clone() },
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }
}

impl FpPoint {
    /// Projective triple `(x : y : z)` with entries in `0..p`.
    pub fn triple(&self) -> (u64, u64, u64) {
        match self {
            CurvePoint::Infinity => (1, 0, 0),
            CurvePoint::Affine { x, y } => (x.value(), y.value(), 1),
        }
    }
}

/// A point of `C(Z_p)` known modulo `p^N`.
///
/// Points reducing to infinity other than infinity itself are stored by their
/// parameter `t = x^g / y`, which has positive valuation on that disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalPoint {
    Affine { x: PadicResidue, y: PadicResidue },
    NearInfinity { t: PadicResidue },
    Infinity,
}

impl LocalPoint {
    pub fn involution(&self) -> Self {
        match self {
            LocalPoint::Affine { x, y } => LocalPoint::Affine { x: *x, y: -*y },
            LocalPoint::NearInfinity { t } => LocalPoint::NearInfinity { t: -*t },
            LocalPoint::Infinity => LocalPoint::Infinity,
        }
    }

    /// Precision of the coordinates; the exact point at infinity has none.
    pub fn precision(&self) -> Option<u32> {
        match self {
            LocalPoint::Affine { x, y } => Some(x.precision().min(y.precision())),
            LocalPoint::NearInfinity { t } => Some(t.precision()),
            LocalPoint::Infinity => None,
        }
    }
}

fn check_cap(p: u64, k: usize, cap: u64) -> Result<u64, CurveError> {
    let needed = (p as u128).pow(k as u32);
    if needed > cap as u128 {
        return Err(CurveError::CapExceeded { needed, cap });
    }
    Ok(needed as u64)
}

fn coefficients(fbar: &Poly<Fp>) -> Vec<u64> {
    fbar.coeffs().iter().map(|c| c.value()).collect()
}

/// Points of `y^2 = fbar(x)` over `F_p`, sorted, infinity last.
pub fn points_over_fp(fbar: &Poly<Fp>) -> Vec<FpPoint> {
    let p = fbar.lc().expect("nonzero").p();
    let mut out = Vec::new();
    for x in 0..p {
        let xf = Fp::new(x, p);
        let v = fbar.eval(&xf);
        if let Some(r) = v.sqrt() {
            if r.is_zero() {
                out.push(CurvePoint::Affine { x: xf, y: r });
            } else {
                out.push(CurvePoint::Affine { x: xf, y: r });
                out.push(CurvePoint::Affine { x: xf, y: -r });
            }
        }
    }
    out.push(CurvePoint::Infinity);
    out.sort();
    out
}

/// Points over `F_{p^k}` (field elements in the power basis of
/// [`GfExt::with_degree`]), sorted, infinity last.
pub fn enumerate_points(fbar: &Poly<Fp>, k: usize, cap: u64) -> Result<Vec<CurvePoint<GfElem>>, CurveError> {
    let p = fbar.lc().expect("nonzero").p();
    let order = check_cap(p, k, cap)?;
    let field = GfExt::with_degree(p, k)?;
    let f = coefficients(fbar);
    let mut out = Vec::new();
    for n in 0..order {
        let x = field.element(n);
        let v = field.eval(&f, &x);
        if let Some(r) = field.sqrt(&v) {
            out.push(CurvePoint::Affine { x, y: r });
            if !field.is_zero(&r) {
                out.push(CurvePoint::Affine { x, y: field.neg(&r) });
            }
        }
    }
    out.push(CurvePoint::Infinity);
    out.sort();
    Ok(out)
}

/// `#C(F_{p^k})` by summing quadratic characters.
pub fn count_points(fbar: &Poly<Fp>, k: usize, cap: u64) -> Result<u64, CurveError> {
    let p = fbar.lc().expect("nonzero").p();
    let order = check_cap(p, k, cap)?;
    let field = GfExt::with_degree(p, k)?;
    let f = coefficients(fbar);
    let mut total: i64 = order as i64 + 1;
    for n in 0..order {
        let x = field.element(n);
        total += field.quadratic_character(&field.eval(&f, &x)) as i64;
    }
    Ok(total as u64)
}

/// Numerator `L(T) = sum a_i T^i` of the zeta function of a genus-g curve over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPolynomial {
    pub q: u64,
    pub genus: usize,
    pub coeffs: Vec<i128>,
}

impl LPolynomial {
    pub fn eval(&self, t: i128) -> i128 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    /// `|J(F_q)| = L(1)`.
    pub fn jacobian_order(&self) -> u64 {
        self.eval(1) as u64
    }

    pub fn satisfies_functional_equation(&self) -> bool {
        let g = self.genus;
        (0..=g).all(|i| self.coeffs[2 * g - i] == (self.q as i128).pow((g - i) as u32) * self.coeffs[i])
    }

    /// `(sqrt q - 1)^{2g} <= L(1) <= (sqrt q + 1)^{2g}`.
    pub fn within_weil_bounds(&self) -> bool {
        let s = (self.q as f64).sqrt();
        let n = self.eval(1) as f64;
        let e = 2 * self.genus as i32;
        n >= (s - 1.0).powi(e) - 0.5 && n <= (s + 1.0).powi(e) + 0.5
    }
}

/// Build `L(T)` from `N_k = #C(F_{q^k})`, `k = 1..g`, via Newton's identities.
pub fn lpolynomial_from_counts(q: u64, counts: &[u64]) -> LPolynomial {
    let g = counts.len();
    let s: Vec<i128> = counts.iter().enumerate().map(|(i, &n)| (q as i128).pow(i as u32 + 1) + 1 - n as i128).collect();
    let mut a = vec![0i128; 2 * g + 1];
    a[0] = 1;
    for i in 1..=g {
        let sum: i128 = (1..=i).map(|j| s[j - 1] * a[i - j]).sum();
        a[i] = -sum / i as i128;
    }
    for i in 0..g {
        a[2 * g - i] = (q as i128).pow((g - i) as u32) * a[i];
    }
    LPolynomial { q, genus: g, coeffs: a }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_tower::finite_field::fp_poly;

    #[test]
    fn counts_match_enumeration() {
        let f = fp_poly(&[1, 0, 1, 1, 0, 1], 7);
        for k in 1..=2 {
            let pts = enumerate_points(&f, k, 1000).unwrap();
            assert_eq!(pts.len() as u64, count_points(&f, k, 1000).unwrap());
        }
        assert_eq!(points_over_fp(&f).len(), enumerate_points(&f, 1, 10).unwrap().len());
    }

    #[test]
    fn cap_is_enforced() {
        let f = fp_poly(&[1, 0, 1, 1, 0, 1], 7);
        assert!(matches!(count_points(&f, 3, 100), Err(CurveError::CapExceeded { needed: 343, cap: 100 })));
    }

    #[test]
    fn genus_one_sanity() {
        // y^2 = x^3 + x + 1 over F_5 has 9 points; L(T) = 1 + 3T + 5T^2, L(1) = 9.
        let l = lpolynomial_from_counts(5, &[9]);
        assert_eq!(l.coeffs, vec![1, 3, 5]);
        assert_eq!(l.jacobian_order(), 9);
    }
}
