//! Dense univariate polynomials over any [`Ring`].

use std::ops::{Add, Mul, Neg, Sub};

use super::Ring;

/// Coefficients in ascending order, trailing zeros trimmed. The zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^deg`.
    pub fn monomial(c: R, deg: usize) -> Self {
        let mut v = vec![c.zero_like(); deg];
        v.push(c);
        Poly::new(v)
    }

    /// `x - a`.
    pub fn x_minus(a: &R) -> Self {
        Poly::new(vec![-a.clone(), a.one_like()])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&R> {
        self.coeffs.get(i)
    }

    /// Coefficient `i`, using `template` to build a zero beyond the degree.
    pub fn coeff_or_zero(&self, i: usize, template: &R) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(|| template.zero_like())
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.clone() * c.int_like(i as i64)).collect())
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Fallible coefficient map, e.g. reduction of rationals modulo p^N.
    pub fn try_map<S: Ring, E>(&self, f: impl Fn(&R) -> Result<S, E>) -> Result<Poly<S>, E> {
        Ok(Poly::new(self.coeffs.iter().map(f).collect::<Result<_, _>>()?))
    }

    /// Division with remainder by a divisor whose leading coefficient is a unit.
    pub fn divrem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let inv = d.lc()?.try_inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut quot = vec![inv.zero_like(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = rem[i].clone() * inv.clone();
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let k = i - dd + j;
                    rem[k] = rem[k].clone() - q.clone() * dc.clone();
                }
            }
            quot[i - dd] = q;
        }
        rem.truncate(dd);
        Some((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, d: &Self) -> Option<Self> {
        self.divrem(d).map(|(_, r)| r)
    }

    /// Exact quotient; `None` when the divisor's leading coefficient is not a unit
    /// or the division leaves a remainder.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d)?;
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Option<Self> {
        let inv = self.lc()?.try_inv()?;
        Some(self.scale(&inv))
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_some_and(|c| c.is_one())
    }

    /// `p(x + a)`.
    pub fn taylor_shift(&self, a: &R) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                c[j] = c[j].clone() + a.clone() * c[j + 1].clone();
            }
        }
        Poly::new(c)
    }

    pub fn pow(&self, e: u32, template: &R) -> Self {
        let mut acc = Poly::constant(template.one_like());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Option<Self> {
        let template = m.lc()?.clone();
        let mut base = self.rem(m)?;
        let mut acc = Poly::constant(template.one_like()).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m)?;
            }
            base = (&base * &base).rem(m)?;
            e >>= 1;
        }
        Some(acc)
    }

    /// Evaluate at a polynomial argument, `self(q)`.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Poly::constant(c.clone());
        }
        acc
    }
}

/// Monic gcd with Bezout cofactors: `g = s*a + t*b`. Requires every leading
/// coefficient met along the way to be invertible, which always holds over a field.
pub fn xgcd<R: Ring>(a: &Poly<R>, b: &Poly<R>) -> Option<(Poly<R>, Poly<R>, Poly<R>)> {
    let template = a.lc().or(b.lc())?.clone();
    let one = Poly::constant(template.one_like());
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (one.clone(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), one);
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1)?;
        let s2 = &s0 - &(&q * &s1);
        let t2 = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = r0.lc()?.try_inv()?;
    Some((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
}

pub fn gcd<R: Ring>(a: &Poly<R>, b: &Poly<R>) -> Option<Poly<R>> {
    if a.is_zero() && b.is_zero() {
        return Some(Poly::zero());
    }
    xgcd(a, b).map(|(g, _, _)| g)
}

impl<R: Ring> Add for &Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: &Poly<R>) -> Poly<R> {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut c = long.coeffs.clone();
        for (i, b) in short.coeffs.iter().enumerate() {
            c[i] = c[i].clone() + b.clone();
        }
        Poly::new(c)
    }
}

impl<R: Ring> Sub for &Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: &Poly<R>) -> Poly<R> {
        self + &(-rhs)
    }
}

impl<R: Ring> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<R: Ring> Mul for &Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: &Poly<R>) -> Poly<R> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut c = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(c)
    }
}
