//! Exact integer linear algebra on small dense matrices.
//!
//! Everything here works over arbitrary-precision integers; inputs are `i64`
//! rows because the matrices we build are 0/±1 exponent data.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m = to_big(rows);
    bareiss_rank(&mut m)
}

fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Determinant of a square matrix (fraction-free).
pub fn determinant(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut m = to_big(rows);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &m[n - 1][n - 1]
    }
}

/// Unimodular row reduction pivoting on the first `pivot_cols` columns.
///
/// Returns the pivot columns. Rows `0..pivots.len()` end up in Hermite form
/// on those columns (positive pivots, entries above a pivot reduced into
/// `[0, pivot)`); the remaining rows are zero on the pivot block.
fn hermite_in_place(m: &mut [Vec<BigInt>], pivot_cols: usize) -> Vec<usize> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == nrows {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c at or below r becomes the pivot
            let best = (r..nrows).filter(|&i| !m[i][c].is_zero()).min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
            let Some(best) = best else { break };
            m.swap(r, best);
            let mut done = true;
            for i in r + 1..nrows {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let (head, tail) = m.split_at_mut(i);
                let pivot_row = &head[r];
                for (x, y) in tail[0].iter_mut().zip(pivot_row) {
                    *x -= &q * y;
                }
                if !tail[0][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < nrows && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = m[i][c].div_floor(&m[r][c]);
                if q.is_zero() {
                    continue;
                }
                let (head, tail) = m.split_at_mut(r);
                for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                    *x -= &q * y;
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    pivots
}

/// Hermite basis of the lattice spanned by the rows.
#[derive(Debug, Clone)]
pub struct HermiteBasis {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl HermiteBasis {
    pub fn new(rows: &[Vec<i64>]) -> Self {
        let mut m = to_big(rows);
        let ncols = m.first().map_or(0, Vec::len);
        let pivots = hermite_in_place(&mut m, ncols);
        m.truncate(pivots.len());
        HermiteBasis { rows: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        let mut rest: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        let mut coords = Vec::with_capacity(self.rank());
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let (q, rem) = rest[c].div_rem(&row[c]);
            if !rem.is_zero() {
                return None;
            }
            for (x, y) in rest.iter_mut().zip(row) {
                *x -= &q * y;
            }
            coords.push(q.to_i64()?);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    /// Ambient vector with the given coordinates.
    pub fn expand(&self, coords: &[i64]) -> Vec<i64> {
        let ncols = self.rows.first().map_or(0, Vec::len);
        let mut out = vec![BigInt::zero(); ncols];
        for (row, &c) in self.rows.iter().zip(coords) {
            if c == 0 {
                continue;
            }
            for (x, y) in out.iter_mut().zip(row) {
                *x += y * c;
            }
        }
        out.iter().map(|x| x.to_i64().expect("lattice vector fits i64")).collect()
    }
}

/// A Z-basis of `{x in Z^n : A x = 0}` where `a` has `n` columns.
fn kernel_rows(a: &[Vec<i64>], n: usize) -> Result<Vec<Vec<BigInt>>> {
    let m = a.len();
    // rows of [A^T | I_n]
    let mut aug: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigInt> = a.iter().map(|r| BigInt::from(r[j])).collect();
            row.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let pivots = hermite_in_place(&mut aug, m);
    let mut basis = Vec::with_capacity(n - pivots.len());
    for row in &aug[pivots.len()..] {
        basis.push(row[m..].to_vec());
    }
    Ok(basis)
}

/// Size-reduced Z-basis of the kernel.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Result<Vec<Vec<i64>>> {
    let mut basis = kernel_rows(a, n)?.iter().map(|r| to_i64_row(r)).collect::<Result<Vec<_>>>()?;
    size_reduce(&mut basis);
    Ok(basis)
}

/// Kernel basis in row Hermite form, with its pivot columns. Every row is
/// nonnegative on every pivot column.
pub fn integer_kernel_hermite(a: &[Vec<i64>], n: usize) -> Result<(Vec<Vec<i64>>, Vec<usize>)> {
    let mut rows = kernel_rows(a, n)?;
    let pivots = hermite_in_place(&mut rows, n);
    let basis = rows.iter().map(|r| to_i64_row(r)).collect::<Result<Vec<_>>>()?;
    Ok((basis, pivots))
}

fn to_i64_row(row: &[BigInt]) -> Result<Vec<i64>> {
    row.iter()
        .map(ToPrimitive::to_i64)
        .collect::<Option<Vec<i64>>>()
        .ok_or_else(|| Error::InternalCheckFailed("kernel entry overflow".into()))
}

fn l1(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).sum()
}

/// Greedy pairwise reduction of a lattice basis: replace `b_i` by `b_i ± b_j`
/// while that shrinks its l1 norm. Unimodular, so the lattice is unchanged.
pub fn size_reduce(basis: &mut [Vec<i64>]) {
    let k = basis.len();
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let cur = l1(&basis[i]);
                for sign in [1i64, -1] {
                    let cand: i64 = basis[i].iter().zip(&basis[j]).map(|(x, y)| (x - sign * y).abs()).sum();
                    if cand < cur {
                        let bj = basis[j].clone();
                        for (x, y) in basis[i].iter_mut().zip(&bj) {
                            *x -= sign * y;
                        }
                        improved = true;
                        break;
                    }
                }
            }
        }
    }
}

/// Inverse of a square integer matrix as `(det, adj)` with `adj = det * inverse`.
pub fn adjugate(rows: &[Vec<i64>]) -> Option<(BigInt, Vec<Vec<BigInt>>)> {
    let n = rows.len();
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            row.extend((0..n).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            let (pr, other) = if i < c {
                let (a, b) = m.split_at_mut(c);
                (&b[0], &mut a[i])
            } else {
                let (a, b) = m.split_at_mut(i);
                (&a[c], &mut b[0])
            };
            for (x, y) in other.iter_mut().zip(pr) {
                *x -= &f * y;
            }
        }
    }
    let det = determinant(rows);
    let adj = m
        .iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| {
                    let v = x * BigRational::from_integer(det.clone());
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect()
        })
        .collect();
    Some((det, adj))
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}
