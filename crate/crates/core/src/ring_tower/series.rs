//! Power series truncated at a fixed order, and their formal antiderivatives.

use super::{LocalRing, Poly, Ring, RingError};

/// `sum_{i < prec} c_i s^i + O(s^prec)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<R> {
    coeffs: Vec<R>,
    prec: usize,
}

impl<R: Ring> TruncatedSeries<R> {
    /// Coefficients beyond `prec` are dropped; missing ones are zero.
    pub fn new(mut coeffs: Vec<R>, prec: usize, template: &R) -> Self {
        coeffs.truncate(prec);
        coeffs.resize(prec, template.zero_like());
        TruncatedSeries { coeffs, prec }
    }

    pub fn constant(c: R, prec: usize) -> Self {
        let t = c.clone();
        Self::new(vec![c], prec, &t)
    }

    /// The parameter `s` itself.
    pub fn var(template: &R, prec: usize) -> Self {
        Self::new(vec![template.zero_like(), template.one_like()], prec, template)
    }

    pub fn from_poly(p: &Poly<R>, prec: usize, template: &R) -> Self {
        Self::new(p.coeffs().to_vec(), prec, template)
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &R {
        &self.coeffs[i]
    }

    fn template(&self) -> &R {
        &self.coeffs[0]
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let c = (0..prec).map(|i| self.coeffs[i].clone() + o.coeffs[i].clone()).collect();
        TruncatedSeries { coeffs: c, prec }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(), prec: self.prec }
    }

    pub fn scale(&self, a: &R) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| c.clone() * a.clone()).collect(), prec: self.prec }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let mut c = vec![self.template().zero_like(); prec];
        for (i, a) in self.coeffs.iter().enumerate().take(prec) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(prec - i) {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedSeries { coeffs: c, prec }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.template().one_like(), self.prec);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `s^k`, keeping the same truncation order.
    pub fn shift(&self, k: usize) -> Self {
        let mut c = vec![self.template().zero_like(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(c, self.prec, self.template())
    }

    /// Inverse when the constant term is a unit (Newton iteration).
    pub fn inv(&self) -> Option<Self> {
        let c0 = self.coeffs[0].try_inv()?;
        let two = c0.int_like(2);
        let mut r = Self::constant(c0, self.prec);
        let mut known = 1;
        while known < self.prec {
            known = (2 * known).min(self.prec);
            // r <- r (2 - self r)
            let e = Self::constant(two.clone(), self.prec).sub(&self.mul(&r));
            r = r.mul(&e);
        }
        Some(r)
    }

    /// Square root with prescribed constant term `root0`, which must satisfy
    /// `root0^2 = c_0` and be invertible together with 2.
    pub fn sqrt_with(&self, root0: &R) -> Option<Self> {
        let half = root0.int_like(2).try_inv()?;
        root0.try_inv()?;
        let mut r = Self::constant(root0.clone(), self.prec);
        let mut known = 1;
        while known < self.prec {
            known = (2 * known).min(self.prec);
            // r <- (r + self / r) / 2
            r = r.add(&self.mul(&r.inv()?)).scale(&half);
        }
        Some(r)
    }

    /// `poly(self)`.
    pub fn apply_poly(&self, poly: &Poly<R>) -> Self {
        let mut acc = Self::new(vec![], self.prec, self.template());
        for c in poly.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Self::constant(c.clone(), self.prec));
        }
        acc
    }

    /// `self(inner)` for `inner` with zero constant term.
    pub fn compose(&self, inner: &Self) -> Self {
        debug_assert!(inner.coeffs[0].is_zero());
        let prec = self.prec.min(inner.prec);
        let mut acc = Self::new(vec![], prec, self.template());
        for c in self.coeffs.iter().take(prec).rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone(), prec));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let c: Vec<R> = self.coeffs.iter().enumerate().skip(1).map(|(i, a)| a.clone() * a.int_like(i as i64)).collect();
        Self::new(c, self.prec.saturating_sub(1).max(1), self.template())
    }

    /// Evaluate the truncated polynomial part.
    pub fn eval_truncated(&self, s: &R) -> R {
        let mut acc = s.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc * s.clone() + c.clone();
        }
        acc
    }

    /// Formal antiderivative with zero constant term. The division by the
    /// exponent is deferred to evaluation, see [`Antiderivative`].
    pub fn antiderivative(&self) -> Antiderivative<R> {
        Antiderivative { integrand: self.coeffs.clone() }
    }
}

/// `G(s) = sum_m a_{m-1} s^m / m`, kept as the integrand coefficients `a`.
///
/// Evaluation is only offered on parameters of the form `s = p * mu`, where
/// `(1/p) * a * (p mu)^m / m = a * mu^m * p^(m - 1 - v) / u` with `m = p^v u`.
/// Since `p^v <= m` and `p >= 3`, the power of `p` is never negative, so the
/// normalized value is computed without ever dividing by `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Antiderivative<R> {
    integrand: Vec<R>,
}

impl<R: LocalRing> Antiderivative<R> {
    pub fn integrand(&self) -> &[R] {
        &self.integrand
    }

    /// Largest exponent `m` whose term can be nonzero modulo `p^out_prec`:
    /// the term has valuation at least `m - 1 - v_p(m)`.
    pub fn needed_terms(p: u64, out_prec: u32) -> usize {
        let mut last = 1;
        for m in 1..(4 * out_prec as usize + 8) {
            let v = super::valuation_u64(m as u64, p) as usize;
            if m - 1 - v < out_prec as usize {
                last = m;
            }
        }
        last
    }

    /// Number of integrand coefficients that must be known.
    pub fn available_terms(&self) -> usize {
        self.integrand.len()
    }

    /// `(1/p) * sum_j G(p mu_j)` given the power sums `psums[m-1] = sum_j mu_j^m`
    /// for `m = 1..`, reduced to precision `out_prec`.
    pub fn eval_over_p(&self, psums: &[R], out_prec: u32) -> Result<R, RingError> {
        let first = psums.first().ok_or(RingError::InsufficientPrecision(out_prec))?;
        let p = first.prime();
        let terms = Self::needed_terms(p, out_prec);
        if psums.len() < terms || self.integrand.len() < terms {
            return Err(RingError::InsufficientPrecision(out_prec));
        }
        let mut acc = first.zero_like();
        for m in 1..=terms {
            let v = super::valuation_u64(m as u64, p);
            let u = m as u64 / p.pow(v);
            let shift = m as u32 - 1 - v;
            if shift >= out_prec {
                continue;
            }
            let a = &self.integrand[m - 1];
            let unit_inv = a.int_like(u as i64).try_inv().expect("u is prime to p");
            let scale = a.int_like(p.pow(shift) as i64);
            acc = acc + a.clone() * psums[m - 1].clone() * unit_inv * scale;
        }
        Ok(reduce_to(acc, out_prec))
    }

    /// `(1/p) * G(p mu)` for a single parameter value.
    pub fn eval_at_p_multiple(&self, mu: &R, out_prec: u32) -> Result<R, RingError> {
        let terms = Self::needed_terms(mu.prime(), out_prec);
        let mut psums = Vec::with_capacity(terms);
        let mut cur = mu.one_like();
        for _ in 0..terms {
            cur = cur * mu.clone();
            psums.push(cur.clone());
        }
        self.eval_over_p(&psums, out_prec)
    }
}

/// Reduce any local element to a target precision via its own ring.
fn reduce_to<R: LocalRing>(x: R, prec: u32) -> R {
    if x.precision() <= prec {
        x
    } else {
        x.reduce_precision(prec)
    }
}

/// Power sums `P_1..P_count` of the roots of a monic polynomial (Newton's identities).
pub fn power_sums<R: Ring>(monic: &Poly<R>, count: usize) -> Vec<R> {
    let c = monic.degree().unwrap_or(0);
    let template = monic.lc().cloned().expect("nonzero polynomial");
    // monic = s^c + b_{c-1} s^{c-1} + ... + b_0; e-coefficients via b_{c-i}.
    let b = |i: usize| -> R {
        if i == 0 || i > c {
            template.zero_like()
        } else {
            monic.coeff(c - i).cloned().unwrap_or_else(|| template.zero_like())
        }
    };
    let mut out: Vec<R> = Vec::with_capacity(count);
    for m in 1..=count {
        let mut acc = template.zero_like();
        for i in 1..m.min(c + 1) {
            acc = acc + b(i) * out[m - i - 1].clone();
        }
        if m <= c {
            acc = acc + b(m) * template.int_like(m as i64);
        }
        out.push(-acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_tower::{PadicResidue, PadicRing};
    use proptest::prelude::*;

    fn ring() -> PadicRing {
        PadicRing::new(5, 6).unwrap()
    }

    #[test]
    fn inverse_and_sqrt() {
        let r = ring();
        let f = TruncatedSeries::new(vec![r.from_i64(4), r.from_i64(3), r.from_i64(7)], 8, &r.zero());
        let inv = f.inv().unwrap();
        assert_eq!(f.mul(&inv), TruncatedSeries::constant(r.one(), 8));
        let root = f.sqrt_with(&r.from_i64(2)).unwrap();
        assert_eq!(root.mul(&root), f);
    }

    #[test]
    fn power_sums_match_roots() {
        let r = ring();
        let roots = [r.from_i64(2), r.from_i64(-7), r.from_i64(11)];
        let mut poly = Poly::constant(r.one());
        for a in &roots {
            poly = &poly * &Poly::x_minus(a);
        }
        let ps = power_sums(&poly, 6);
        for (m, pm) in ps.iter().enumerate() {
            let direct = roots.iter().fold(r.zero(), |acc, a| acc + Ring::pow(a, m as u64 + 1));
            assert_eq!(*pm, direct);
        }
    }

    #[test]
    fn needed_terms_for_low_precision() {
        assert_eq!(Antiderivative::<PadicResidue>::needed_terms(5, 1), 1);
        assert_eq!(Antiderivative::<PadicResidue>::needed_terms(3, 1), 1);
        assert_eq!(Antiderivative::<PadicResidue>::needed_terms(3, 2), 3);
        assert_eq!(Antiderivative::<PadicResidue>::needed_terms(5, 3), 3);
    }

    proptest! {
        // Modulo p only the linear term of the antiderivative matters.
        #[test]
        fn log_is_linear_mod_p(c in proptest::collection::vec(0u64..15625, 6), mu in 0u64..15625) {
            let r = ring();
            let s = TruncatedSeries::new(c.iter().map(|&v| r.from_u64(v)).collect(), 6, &r.zero());
            let g = s.antiderivative();
            let mu = r.from_u64(mu);
            let full = g.eval_at_p_multiple(&mu, 1).unwrap();
            let linear = (*s.coeff(0) * mu).reduce(1);
            prop_assert_eq!(full, linear);
        }

        #[test]
        fn normalized_eval_matches_direct_sum(c in proptest::collection::vec(0u64..15625, 8), mu in 0u64..625) {
            // Direct evaluation in Z/5^6 of sum a (5 mu)^m / m, with m < 5 so m is a unit,
            // is p times the normalized value.
            let r = ring();
            let s = TruncatedSeries::new(c.iter().map(|&v| r.from_u64(v)).collect(), 8, &r.zero());
            let g = s.antiderivative();
            let mu = r.from_u64(mu);
            let smu = mu * r.from_i64(5);
            let mut direct = r.zero();
            for m in 1..=4u64 {
                direct = direct + *s.coeff(m as usize - 1) * Ring::pow(&smu, m) * r.from_u64(m).try_inv().unwrap();
            }
            let norm = g.eval_at_p_multiple(&mu, 3).unwrap();
            prop_assert_eq!(direct.reduce(4), (norm.lift_to(6) * r.from_i64(5)).reduce(4));
        }
    }
}
