//! Unramified extensions `Z_q / p^N = (Z/p^N)[z] / (mu)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::finite_field::{smallest_irreducible, GfElem, GfExt};
use super::series::power_sums;
use super::{hensel_lift_root, LocalRing, PadicResidue, PadicRing, Poly, Ring, RingError};

/// Context for an unramified extension of degree `d` at precision `N`. The
/// modulus is the coefficientwise lift of the smallest monic irreducible of
/// degree `d` over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedRing {
    base: PadicRing,
    degree: usize,
    /// Monic modulus, ascending, length `degree + 1`.
    modulus: Vec<PadicResidue>,
    /// `Tr(z^i)` for `i < degree`.
    traces: Vec<PadicResidue>,
    residue_field: GfExt,
}

impl UnramifiedRing {
    pub fn new(p: u64, prec: u32, degree: usize) -> Result<Arc<Self>, RingError> {
        let base = PadicRing::new(p, prec)?;
        let m = smallest_irreducible(p, degree);
        let residue_field = GfExt::new(&m)?;
        let modulus: Vec<PadicResidue> = m.coeffs().iter().map(|c| base.from_u64(c.value())).collect();
        let mpoly = Poly::new(modulus.clone());
        let mut traces = vec![base.from_u64(degree as u64)];
        traces.extend(power_sums(&mpoly, degree.saturating_sub(1)));
        Ok(Arc::new(UnramifiedRing { base, degree, modulus, traces, residue_field }))
    }

    pub fn base(&self) -> PadicRing {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn residue_field(&self) -> &GfExt {
        &self.residue_field
    }

    pub fn modulus(&self) -> Poly<PadicResidue> {
        Poly::new(self.modulus.clone())
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<PadicResidue>) -> UnramifiedElement {
        let mut c = coeffs;
        c.resize(self.degree, self.base.zero());
        UnramifiedElement { coeffs: c, ring: Arc::clone(self) }
    }

    pub fn embed(self: &Arc<Self>, a: PadicResidue) -> UnramifiedElement {
        self.element(vec![a])
    }

    pub fn generator(self: &Arc<Self>) -> UnramifiedElement {
        if self.degree == 1 {
            return self.embed(-self.modulus[0]);
        }
        self.element(vec![self.base.zero(), self.base.one()])
    }

    /// Teichmuller-free lift of a residue field element (coefficientwise).
    pub fn lift_residue(self: &Arc<Self>, a: &GfElem) -> UnramifiedElement {
        self.element(a[..self.degree].iter().map(|&c| self.base.from_u64(c)).collect())
    }

    /// All roots of `poly` that are simple modulo `p`, found in the residue
    /// field by exhaustion and then Hensel-lifted.
    pub fn simple_roots(self: &Arc<Self>, poly: &Poly<PadicResidue>) -> Result<Vec<UnramifiedElement>, RingError> {
        let lifted: Poly<UnramifiedElement> = poly.map(|c| self.embed(*c));
        let k = &self.residue_field;
        let coeffs: Vec<u64> = poly.coeffs().iter().map(|c| c.value() % self.base.prime()).collect();
        let mut out = Vec::new();
        for n in 0..k.order() {
            let x = k.element(n);
            if k.is_zero(&k.eval(&coeffs, &x)) {
                let seed = self.lift_residue(&x);
                match hensel_lift_root(&lifted, &seed) {
                    Ok(r) => out.push(r),
                    Err(RingError::NonSimpleRoot) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, PartialEq)]
pub struct UnramifiedElement {
    coeffs: Vec<PadicResidue>,
    ring: Arc<UnramifiedRing>,
}

impl UnramifiedElement {
    pub fn coeffs(&self) -> &[PadicResidue] {
        &self.coeffs
    }

    pub fn ring(&self) -> &Arc<UnramifiedRing> {
        &self.ring
    }

    /// Image in the residue field `F_{p^d}`.
    pub fn residue(&self) -> GfElem {
        let mut e = [0; super::finite_field::MAX_EXT_DEGREE];
        for (i, c) in self.coeffs.iter().enumerate() {
            e[i] = c.value() % c.p();
        }
        e
    }

    /// Trace down to `Z/p^N`.
    pub fn trace(&self) -> PadicResidue {
        self.coeffs.iter().zip(&self.ring.traces).fold(self.ring.base.zero(), |acc, (c, t)| acc + *c * *t)
    }

    fn with(&self, coeffs: Vec<PadicResidue>) -> Self {
        UnramifiedElement { coeffs, ring: Arc::clone(&self.ring) }
    }
}

impl fmt::Debug for UnramifiedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<u64> = self.coeffs.iter().map(|c| c.value()).collect();
        write!(f, "{:?} + O({}^{})", vals, self.ring.base.prime(), self.ring.base.precision())
    }
}

impl Add for UnramifiedElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let c = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| *a + *b).collect();
        self.with(c)
    }
}

impl Sub for UnramifiedElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let c = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| *a - *b).collect();
        self.with(c)
    }
}

impl Neg for UnramifiedElement {
    type Output = Self;
    fn neg(self) -> Self {
        let c = self.coeffs.iter().map(|a| -*a).collect();
        self.with(c)
    }
}

impl Mul for UnramifiedElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let d = self.ring.degree;
        let zero = self.ring.base.zero();
        let mut t = vec![zero; 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                t[i + j] = t[i + j] + *a * *b;
            }
        }
        for top in (d..2 * d - 1).rev() {
            let c = t[top];
            t[top] = zero;
            for i in 0..d {
                t[top - d + i] = t[top - d + i] - c * self.ring.modulus[i];
            }
        }
        t.truncate(d);
        self.with(t)
    }
}

impl Ring for UnramifiedElement {
    fn zero_like(&self) -> Self {
        self.ring.element(vec![])
    }
    fn one_like(&self) -> Self {
        self.ring.embed(self.ring.base.one())
    }
    fn int_like(&self, n: i64) -> Self {
        self.ring.embed(self.ring.base.from_i64(n))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn try_inv(&self) -> Option<Self> {
        let k = &self.ring.residue_field;
        let r0 = k.inv(&self.residue())?;
        let two = self.int_like(2);
        let mut x = self.ring.lift_residue(&r0);
        let mut known = 1;
        while known < self.ring.base.precision() {
            x = x.clone() * (two.clone() - self.clone() * x.clone());
            known *= 2;
        }
        Some(x)
    }
}

impl LocalRing for UnramifiedElement {
    fn prime(&self) -> u64 {
        self.ring.base.prime()
    }
    fn precision(&self) -> u32 {
        self.ring.base.precision()
    }
    fn lift_to(&self, prec: u32) -> Self {
        let ring = UnramifiedRing::new(self.prime(), prec, self.ring.degree).expect("valid extension");
        ring.element(self.coeffs.iter().map(|c| c.lift_to(prec)).collect())
    }
    fn reduce_precision(&self, prec: u32) -> Self {
        let ring = UnramifiedRing::new(self.prime(), prec, self.ring.degree).expect("valid extension");
        ring.element(self.coeffs.iter().map(|c| c.reduce(prec)).collect())
    }
    fn reduces_to_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.reduces_to_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn root_of_irreducible_quadratic() {
        // x^2 - 2 is irreducible mod 5; its roots live in the degree-2 extension.
        let ring = UnramifiedRing::new(5, 4, 2).unwrap();
        let b = ring.base();
        let f = Poly::new(vec![b.from_i64(-2), b.zero(), b.one()]);
        let roots = ring.simple_roots(&f).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!((r.clone() * r.clone() - ring.embed(b.from_i64(2))).is_zero());
        }
        // The two roots are negatives of each other, so their traces cancel.
        assert!((roots[0].trace() + roots[1].trace()).is_zero());
    }

    #[test]
    fn trace_of_embedded_scalar() {
        let ring = UnramifiedRing::new(3, 3, 3).unwrap();
        let b = ring.base();
        assert_eq!(ring.embed(b.from_i64(5)).trace(), b.from_i64(15));
        // Tr(z) is minus the subleading coefficient of the modulus.
        let z = ring.generator();
        assert_eq!(z.trace(), -ring.modulus().coeffs()[2]);
    }

    proptest! {
        #[test]
        fn ring_axioms(n in 1u32..=3, a in proptest::collection::vec(0u64..1000, 2),
                       b in proptest::collection::vec(0u64..1000, 2),
                       c in proptest::collection::vec(0u64..1000, 2)) {
            let ring = UnramifiedRing::new(7, n, 2).unwrap();
            let base = ring.base();
            let mk = |v: &Vec<u64>| ring.element(v.iter().map(|&x| base.from_u64(x)).collect());
            let (a, b, c) = (mk(&a), mk(&b), mk(&c));
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            if let Some(inv) = a.try_inv() {
                prop_assert!((a * inv).is_one());
            } else {
                prop_assert!(a.reduces_to_zero());
            }
        }
    }
}
