//! Integer lattices in Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A sublattice of `Z^n` given by a basis in row Hermite normal form:
/// pivots strictly move right, are positive, and entries above a pivot lie in `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerLattice {
    dim: usize,
    rows: Vec<Vec<i64>>,
}

impl IntegerLattice {
    /// The lattice spanned by arbitrary integer rows of length `dim`.
    pub fn from_generators(dim: usize, gens: &[Vec<i64>]) -> Self {
        let big: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|r| {
                assert_eq!(r.len(), dim, "generator has wrong length");
                r.iter().map(|&x| BigInt::from(x)).collect()
            })
            .collect();
        let h = hnf(big, dim);
        IntegerLattice {
            dim,
            rows: h
                .into_iter()
                .map(|r| r.into_iter().map(|x| x.to_i64().expect("HNF entry fits in i64")).collect())
                .collect(),
        }
    }

    pub fn full(dim: usize) -> Self {
        let rows = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
        IntegerLattice { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Index in `Z^dim` for a full-rank lattice (product of the pivots).
    pub fn index(&self) -> Option<u128> {
        if self.rank() != self.dim {
            return None;
        }
        Some(self.rows.iter().enumerate().map(|(i, r)| r[i] as u128).product())
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let mut w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for row in &self.rows {
            let Some(col) = row.iter().position(|&x| x != 0) else { continue };
            let piv = BigInt::from(row[col]);
            let (q, r) = w[col].div_mod_floor(&piv);
            if !r.is_zero() {
                return false;
            }
            for (wj, &rj) in w.iter_mut().zip(row) {
                *wj -= &q * BigInt::from(rj);
            }
        }
        w.iter().all(|x| x.is_zero())
    }
}

/// Row Hermite normal form; zero rows are dropped.
fn hnf(mut m: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let mut top = 0;
    for col in 0..ncols {
        loop {
            let pivot =
                (top..m.len()).filter(|&r| !m[r][col].is_zero()).min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
            let Some(piv) = pivot else { break };
            m.swap(top, piv);
            let mut done = true;
            for r in top + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let q = m[r][col].div_floor(&m[top][col]);
                let src = m[top].clone();
                for (x, s) in m[r].iter_mut().zip(&src) {
                    *x -= &q * s;
                }
                if !m[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if top >= m.len() || m[top][col].is_zero() {
            continue;
        }
        if m[top][col].is_negative() {
            for x in m[top].iter_mut() {
                *x = -x.clone();
            }
        }
        let src = m[top].clone();
        for r in 0..top {
            let q = m[r][col].div_floor(&src[col]);
            if q.is_zero() {
                continue;
            }
            for (x, s) in m[r].iter_mut().zip(&src) {
                *x -= &q * s;
            }
        }
        top += 1;
        if top == m.len() {
            break;
        }
    }
    m.truncate(top);
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    m
}

/// `{ c in Z^r : sum c_i images[i] lies in the span of relations }`, where the
/// finite group is `Z^k / <relations>` and each image has length `k`.
pub fn lattice_kernel(images: &[Vec<i64>], relations: &[Vec<i64>]) -> IntegerLattice {
    let r = images.len();
    let k = images.first().map(|v| v.len()).or(relations.first().map(|v| v.len())).unwrap_or(0);
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(r + relations.len());
    for (i, img) in images.iter().enumerate() {
        let mut row: Vec<BigInt> = img.iter().map(|&x| BigInt::from(x)).collect();
        row.extend((0..r).map(|j| BigInt::from(i64::from(i == j))));
        rows.push(row);
    }
    for rel in relations {
        let mut row: Vec<BigInt> = rel.iter().map(|&x| BigInt::from(x)).collect();
        row.extend((0..r).map(|_| BigInt::zero()));
        rows.push(row);
    }
    let h = hnf(rows, k + r);
    let kernel: Vec<Vec<i64>> = h
        .into_iter()
        .filter(|row| row[..k].iter().all(|x| x.is_zero()))
        .map(|row| row[k..].iter().map(|x| x.to_i64().expect("kernel entry fits in i64")).collect())
        .collect();
    IntegerLattice::from_generators(r, &kernel)
}
