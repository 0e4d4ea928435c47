//! Prime fields, small extensions `F_{p^k}`, and factorization over `F_p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::poly::{gcd, Poly};
use super::{is_prime, Ring, RingError};

/// An element of `F_p`. Carries its prime so it can live inside [`Poly`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    pub fn new(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }

    pub fn from_i64(v: i64, p: u64) -> Self {
        Fp { v: (v as i128).rem_euclid(p as i128) as u64, p }
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Representative in `(-p/2, p/2]`.
    pub fn signed(&self) -> i64 {
        if self.v > self.p / 2 {
            self.v as i64 - self.p as i64
        } else {
            self.v as i64
        }
    }

    pub fn legendre(&self) -> i8 {
        if self.v == 0 {
            return 0;
        }
        if Ring::pow(self, (self.p - 1) / 2).v == 1 {
            1
        } else {
            -1
        }
    }

    /// A square root when one exists (Tonelli-Shanks).
    pub fn sqrt(&self) -> Option<Fp> {
        let p = self.p;
        if self.v == 0 {
            return Some(*self);
        }
        if p == 2 {
            return Some(*self);
        }
        if self.legendre() != 1 {
            return None;
        }
        let mut q = p - 1;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = Fp::new(2, p);
        while z.legendre() != -1 {
            z = z + Fp::new(1, p);
        }
        let mut m = s;
        let mut c = Ring::pow(&z, q);
        let mut t = Ring::pow(self, q);
        let mut r = Ring::pow(self, q.div_ceil(2));
        while t.v != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2.v != 1 {
                t2 = t2 * t2;
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = b * b;
            }
            m = i;
            c = b * b;
            t = t * c;
            r = r * b;
        }
        Some(r)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        let s = self.v + rhs.v;
        Fp { v: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        let v = if self.v >= rhs.v { self.v - rhs.v } else { self.v + self.p - rhs.v };
        Fp { v, p: self.p }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp { v: ((self.v as u128 * rhs.v as u128) % self.p as u128) as u64, p: self.p }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
}

impl Ring for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1 % self.p, p: self.p }
    }
    fn int_like(&self, n: i64) -> Self {
        Fp::from_i64(n, self.p)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn try_inv(&self) -> Option<Self> {
        if self.v == 0 {
            None
        } else {
            Some(Ring::pow(self, self.p - 2))
        }
    }
}

/// Polynomial over `F_p` from ascending integer coefficients.
pub fn fp_poly(coeffs: &[i64], p: u64) -> Poly<Fp> {
    Poly::new(coeffs.iter().map(|&c| Fp::from_i64(c, p)).collect())
}

fn x_poly(p: u64) -> Poly<Fp> {
    fp_poly(&[0, 1], p)
}

/// Rabin's test: `m` of degree `d` is irreducible iff `x^{p^d} = x mod m` and
/// `gcd(x^{p^{d/r}} - x, m) = 1` for each prime `r | d`.
pub fn is_irreducible(m: &Poly<Fp>) -> bool {
    let Some(d) = m.degree() else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let p = m.lc().unwrap().p();
    let x = x_poly(p);
    let frob_power = |k: usize| -> Poly<Fp> {
        let mut acc = x.rem(m).unwrap();
        for _ in 0..k {
            acc = acc.pow_mod(p as u128, m).unwrap();
        }
        acc
    };
    if &frob_power(d) - &x.rem(m).unwrap() != Poly::zero() {
        return false;
    }
    for (r, _) in super::factorize(d as u64) {
        let h = &frob_power(d / r as usize) - &x;
        let g = gcd(&h, m).unwrap();
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

/// The monic irreducible of degree `d` over `F_p` whose coefficient vector
/// `(c_0, ..., c_{d-1})`, read as base-p digits of an integer, is smallest.
pub fn smallest_irreducible(p: u64, d: usize) -> Poly<Fp> {
    let total = (p as u128).pow(d as u32);
    for n in 0..total {
        let mut c = Vec::with_capacity(d + 1);
        let mut k = n;
        for _ in 0..d {
            c.push(Fp::new((k % p as u128) as u64, p));
            k /= p as u128;
        }
        c.push(Fp::new(1, p));
        let m = Poly::new(c);
        if is_irreducible(&m) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Squarefree decomposition: pairs `(g, e)` with `poly = lc * prod g^e`, each `g`
/// monic squarefree and pairwise coprime.
pub fn squarefree_decomposition(poly: &Poly<Fp>) -> Vec<(Poly<Fp>, u32)> {
    let Some(f) = poly.monic() else { return vec![] };
    if f.degree() == Some(0) {
        return vec![];
    }
    let p = f.lc().unwrap().p();
    let mut out = Vec::new();
    let d = f.derivative();
    if d.is_zero() {
        // f(x) = h(x^p); over a prime field the p-th root of each coefficient is itself.
        let h = Poly::new(f.coeffs().iter().step_by(p as usize).copied().collect());
        for (g, e) in squarefree_decomposition(&h) {
            out.push((g, e * p as u32));
        }
        return out;
    }
    let mut c = gcd(&f, &d).unwrap();
    let mut w = f.exact_div(&c).unwrap();
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = gcd(&w, &c).unwrap();
        let z = w.exact_div(&y).unwrap();
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w).unwrap();
    }
    if c.degree().unwrap_or(0) > 0 {
        // What is left is a p-th power.
        let h = Poly::new(c.coeffs().iter().step_by(p as usize).copied().collect());
        for (g, e) in squarefree_decomposition(&h) {
            out.push((g, e * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &Poly<Fp>) -> Vec<(Poly<Fp>, usize)> {
    let p = f.lc().unwrap().p();
    let x = x_poly(p);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest).unwrap();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(p as u128, &rest).unwrap();
        let g = gcd(&(&h - &x), &rest).unwrap();
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.exact_div(&g).unwrap();
            h = h.rem(&rest).unwrap_or_else(Poly::zero);
            out.push((g, d));
        }
    }
    if let Some(deg) = rest.degree().filter(|&k| k > 0) {
        out.push((rest, deg));
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus, odd p) with a fixed seed.
fn equal_degree(f: &Poly<Fp>, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly<Fp>> {
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.clone()];
    }
    let p = f.lc().unwrap().p();
    let e = ((p as u128).pow(d as u32) - 1) / 2;
    loop {
        let a = Poly::new((0..n).map(|_| Fp::new(rng.gen_range(0..p), p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = &a.pow_mod(e, f).unwrap() - &fp_poly(&[1], p);
        let g = gcd(&b, f).unwrap();
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.exact_div(&g).unwrap(), d, rng));
            return out;
        }
    }
}

/// Full factorization over `F_p` (p odd) into monic irreducibles with
/// multiplicities, sorted by (degree, coefficients). Deterministic.
pub fn factor_mod_p(poly: &Poly<Fp>) -> Vec<(Poly<Fp>, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for (g, e) in squarefree_decomposition(poly) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d, &mut rng) {
                out.push((irr, e));
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.coeffs().iter().rev().cmp(b.0.coeffs().iter().rev()))
    });
    // Equal factors can appear twice when p-th powers were split off.
    let mut merged: Vec<(Poly<Fp>, u32)> = Vec::new();
    for (g, e) in out {
        match merged.last_mut() {
            Some((h, m)) if *h == g => *m += e,
            _ => merged.push((g, e)),
        }
    }
    merged
}

/// Roots in `F_p` of a nonzero polynomial, ascending, without multiplicity.
pub fn roots_mod_p(poly: &Poly<Fp>) -> Vec<Fp> {
    let mut r: Vec<Fp> =
        factor_mod_p(poly).into_iter().filter(|(g, _)| g.degree() == Some(1)).map(|(g, _)| -g.coeffs()[0]).collect();
    r.sort();
    r
}

pub const MAX_EXT_DEGREE: usize = 4;

/// Element of `F_{p^k}` as ascending coefficients in the power basis.
pub type GfElem = [u64; MAX_EXT_DEGREE];

/// The field `F_p[z]/(m)` for a monic irreducible `m` of degree `k <= 4`.
///
/// Elements are plain arrays and the field acts as the arithmetic context,
/// which keeps the point-counting loops allocation-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfExt {
    p: u64,
    k: usize,
    /// `m = z^k + sum_{i<k} modulus[i] z^i`.
    modulus: [u64; MAX_EXT_DEGREE],
    residues: Vec<i8>,
}

impl GfExt {
    pub fn new(m: &Poly<Fp>) -> Result<Self, RingError> {
        let k = m.degree().ok_or(RingError::NotMonic)?;
        if !m.is_monic() || k == 0 || k > MAX_EXT_DEGREE {
            return Err(RingError::NotMonic);
        }
        let p = m.lc().unwrap().p();
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if !is_irreducible(m) {
            return Err(RingError::ReducibleModulus);
        }
        let mut modulus = [0; MAX_EXT_DEGREE];
        for (i, c) in m.coeffs().iter().take(k).enumerate() {
            modulus[i] = c.value();
        }
        let residues = if p <= 1 << 22 {
            let mut t = vec![-1i8; p as usize];
            t[0] = 0;
            for a in 1..p {
                t[((a as u128 * a as u128) % p as u128) as usize] = 1;
            }
            t
        } else {
            Vec::new()
        };
        Ok(GfExt { p, k, modulus, residues })
    }

    /// `F_{p^k}` using the deterministic modulus of [`smallest_irreducible`].
    pub fn with_degree(p: u64, k: usize) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        GfExt::new(&smallest_irreducible(p, k))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    pub fn modulus(&self) -> Poly<Fp> {
        let mut c: Vec<Fp> = self.modulus[..self.k].iter().map(|&v| Fp::new(v, self.p)).collect();
        c.push(Fp::new(1, self.p));
        Poly::new(c)
    }

    pub fn zero(&self) -> GfElem {
        [0; MAX_EXT_DEGREE]
    }

    pub fn one(&self) -> GfElem {
        self.from_base(1)
    }

    pub fn from_base(&self, a: u64) -> GfElem {
        let mut e = [0; MAX_EXT_DEGREE];
        e[0] = a % self.p;
        e
    }

    /// The class of `z`.
    pub fn generator(&self) -> GfElem {
        if self.k == 1 {
            return self.from_base(self.p - self.modulus[0]);
        }
        let mut e = [0; MAX_EXT_DEGREE];
        e[1] = 1;
        e
    }

    /// The element numbered `n` in base-p digit order; `0..order()` enumerates the field.
    pub fn element(&self, mut n: u64) -> GfElem {
        let mut e = [0; MAX_EXT_DEGREE];
        for c in e.iter_mut().take(self.k) {
            *c = n % self.p;
            n /= self.p;
        }
        e
    }

    pub fn from_poly(&self, a: &Poly<Fp>) -> GfElem {
        let r = a.rem(&self.modulus()).expect("modulus is monic");
        let mut e = [0; MAX_EXT_DEGREE];
        for (i, c) in r.coeffs().iter().enumerate() {
            e[i] = c.value();
        }
        e
    }

    pub fn to_poly(&self, a: &GfElem) -> Poly<Fp> {
        Poly::new(a[..self.k].iter().map(|&v| Fp::new(v, self.p)).collect())
    }

    pub fn is_zero(&self, a: &GfElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let mut r = [0; MAX_EXT_DEGREE];
        for i in 0..self.k {
            let s = a[i] + b[i];
            r[i] = if s >= self.p { s - self.p } else { s };
        }
        r
    }

    pub fn sub(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let mut r = [0; MAX_EXT_DEGREE];
        for i in 0..self.k {
            r[i] = if a[i] >= b[i] { a[i] - b[i] } else { a[i] + self.p - b[i] };
        }
        r
    }

    pub fn neg(&self, a: &GfElem) -> GfElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let p = self.p as u128;
        let k = self.k;
        let mut t = [0u128; 2 * MAX_EXT_DEGREE - 1];
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                t[i + j] += a[i] as u128 * b[j] as u128;
            }
        }
        for c in t.iter_mut() {
            *c %= p;
        }
        // z^k = -sum modulus[i] z^i
        for top in (k..2 * k - 1).rev() {
            let c = t[top];
            if c == 0 {
                continue;
            }
            t[top] = 0;
            for i in 0..k {
                t[top - k + i] = (t[top - k + i] + (p - self.modulus[i] as u128) * c) % p;
            }
        }
        let mut r = [0; MAX_EXT_DEGREE];
        for i in 0..k {
            r[i] = t[i] as u64;
        }
        r
    }

    pub fn pow(&self, a: &GfElem, mut e: u128) -> GfElem {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &GfElem) -> Option<GfElem> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.pow(a, self.order() as u128 - 2))
        }
    }

    /// Norm to `F_p`, computed as the determinant of multiplication by `a`.
    pub fn norm(&self, a: &GfElem) -> u64 {
        let k = self.k;
        let p = self.p;
        if k == 1 {
            return a[0];
        }
        let mut rows = [[0u64; MAX_EXT_DEGREE]; MAX_EXT_DEGREE];
        let mut cur = *a;
        let z = self.generator();
        for row in rows.iter_mut().take(k) {
            *row = cur;
            cur = self.mul(&cur, &z);
        }
        // Gaussian elimination mod p.
        let mut det: u64 = 1;
        for col in 0..k {
            let Some(piv) = (col..k).find(|&r| rows[r][col] != 0) else { return 0 };
            if piv != col {
                rows.swap(piv, col);
                det = (p - det) % p;
            }
            let inv = Fp::new(rows[col][col], p).try_inv().unwrap().value();
            det = ((det as u128 * rows[col][col] as u128) % p as u128) as u64;
            for r in col + 1..k {
                let factor = ((rows[r][col] as u128 * inv as u128) % p as u128) as u64;
                if factor == 0 {
                    continue;
                }
                for c in col..k {
                    let sub = ((factor as u128 * rows[col][c] as u128) % p as u128) as u64;
                    rows[r][c] = (rows[r][c] + p - sub) % p;
                }
            }
        }
        det
    }

    /// Quadratic character: 0, 1 or -1.
    pub fn quadratic_character(&self, a: &GfElem) -> i8 {
        let n = self.norm(a);
        if !self.residues.is_empty() {
            self.residues[n as usize]
        } else {
            Fp::new(n, self.p).legendre()
        }
    }

    pub fn sqrt(&self, a: &GfElem) -> Option<GfElem> {
        if self.is_zero(a) {
            return Some(*a);
        }
        if self.quadratic_character(a) != 1 {
            return None;
        }
        let q = self.order() as u128;
        let mut odd = q - 1;
        let mut s = 0u32;
        while odd.is_multiple_of(2) {
            odd /= 2;
            s += 1;
        }
        let mut n = 1u64;
        let z = loop {
            let cand = self.element(n);
            if self.quadratic_character(&cand) == -1 {
                break cand;
            }
            n += 1;
        };
        let one = self.one();
        let mut m = s;
        let mut c = self.pow(&z, odd);
        let mut t = self.pow(a, odd);
        let mut r = self.pow(a, odd.div_ceil(2));
        while t != one {
            let mut i = 0;
            let mut t2 = t;
            while t2 != one {
                t2 = self.mul(&t2, &t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(&b, &b);
            }
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }

    /// Evaluate an `F_p` polynomial at an extension element.
    pub fn eval(&self, f: &[u64], x: &GfElem) -> GfElem {
        let mut acc = self.zero();
        for &c in f.iter().rev() {
            acc = self.mul(&acc, x);
            acc[0] = (acc[0] + c) % self.p;
        }
        acc
    }
}
