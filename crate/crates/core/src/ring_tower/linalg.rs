//! Dense linear algebra over fields and over `Z/p^k`.
//!
//! Matrices are row-major `Vec<Vec<R>>`.

use super::{PadicResidue, Ring};

/// Reduced row echelon form over a field. Returns the pivot columns.
pub fn rref<R: Ring>(m: &mut [Vec<R>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].try_inv().expect("nonzero field element is invertible");
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<R: Ring>(m: &[Vec<R>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Basis of `{ x : m x = 0 }` over a field; `template` supplies constants when `m` has no rows.
pub fn nullspace<R: Ring>(m: &[Vec<R>], ncols: usize, template: &R) -> Vec<Vec<R>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![template.zero_like(); ncols];
        v[free] = template.one_like();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `m x = b` over a field, if one exists.
pub fn solve<R: Ring>(m: &[Vec<R>], b: &[R], ncols: usize, template: &R) -> Option<Vec<R>> {
    let mut aug: Vec<Vec<R>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![template.zero_like(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols].clone();
    }
    Some(x)
}

/// Columns of `m` as rows, i.e. the transpose.
pub fn transpose<R: Clone>(m: &[Vec<R>]) -> Vec<Vec<R>> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect()
}

pub fn mat_vec<R: Ring>(m: &[Vec<R>], x: &[R], template: &R) -> Vec<R> {
    m.iter()
        .map(|row| row.iter().zip(x).fold(template.zero_like(), |acc, (a, b)| acc + a.clone() * b.clone()))
        .collect()
}

/// Outcome of solving `m x = b` over `Z/p^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularSolution {
    /// A solution when one exists.
    pub solution: Option<Vec<PadicResidue>>,
    /// Valuations of the diagonal after elimination (`None` for a zero pivot).
    pub elementary_valuations: Vec<Option<u32>>,
    /// `b - m x` for the best partial solution; zero exactly when solvable.
    pub residual: Vec<PadicResidue>,
}

/// Solve `m x = b` over `Z/p^k` by elimination with minimal-valuation pivots
/// (row and column operations, as for a Smith form).
pub fn solve_mod_pk(m: &[Vec<PadicResidue>], b: &[PadicResidue], ncols: usize) -> ModularSolution {
    let template = b[0];
    let rows = m.len();
    let mut a: Vec<Vec<PadicResidue>> = m.to_vec();
    let mut rhs = b.to_vec();
    // Column transform: x = v y.
    let mut v: Vec<Vec<PadicResidue>> =
        (0..ncols).map(|i| (0..ncols).map(|j| template.int_like(i64::from(i == j))).collect()).collect();
    let mut diag_vals = Vec::new();
    let mut t = 0;
    while t < rows.min(ncols) {
        let mut best: Option<(usize, usize, u32)> = None;
        for i in t..rows {
            for j in t..ncols {
                if let Some(val) = a[i][j].valuation() {
                    if best.is_none_or(|(_, _, bv)| val < bv) {
                        best = Some((i, j, val));
                    }
                }
            }
        }
        let Some((pi, pj, val)) = best else { break };
        a.swap(t, pi);
        rhs.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        // Pivot = p^val * unit; every entry in the block is divisible by p^val.
        let piv = a[t][t];
        let unit = piv.shift_down(val);
        let uinv = unit.try_inv().expect("unit part is invertible");
        for i in 0..rows {
            if i == t || a[i][t].is_zero() {
                continue;
            }
            let f = a[i][t].shift_down(val) * uinv;
            let src = a[t].clone();
            for (x, s) in a[i].iter_mut().zip(&src) {
                *x = *x - f * *s;
            }
            rhs[i] = rhs[i] - f * rhs[t];
        }
        for j in t + 1..ncols {
            if a[t][j].is_zero() {
                continue;
            }
            let f = a[t][j].shift_down(val) * uinv;
            for row in a.iter_mut() {
                let s = row[t];
                row[j] = row[j] - f * s;
            }
            for row in v.iter_mut() {
                let s = row[t];
                row[j] = row[j] - f * s;
            }
        }
        diag_vals.push(Some(val));
        t += 1;
    }
    let mut y = vec![template.zero_like(); ncols];
    let mut ok = true;
    for i in 0..rows {
        if i < diag_vals.len() {
            let val = diag_vals[i].unwrap();
            let bv = rhs[i].valuation();
            if bv.is_some_and(|bv| bv < val) {
                ok = false;
                continue;
            }
            let unit = a[i][i].shift_down(val);
            y[i] = rhs[i].shift_down(val) * unit.try_inv().unwrap();
        } else if !rhs[i].is_zero() {
            ok = false;
        }
    }
    let x = mat_vec(&v, &y, &template);
    let ax = mat_vec(m, &x, &template);
    let residual: Vec<PadicResidue> = b.iter().zip(&ax).map(|(bi, ai)| *bi - *ai).collect();
    let solvable = ok && residual.iter().all(|r| r.is_zero());
    ModularSolution { solution: solvable.then_some(x), elementary_valuations: diag_vals, residual }
}
