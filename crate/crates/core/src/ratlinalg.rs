//! Exact integer and rational linear algebra on the lattice `M = Z^r`, plus
//! Bernoulli numbers.

#![allow(clippy::needless_range_loop)]

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::BadDimensions {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::BadDimensions {
                    rows: rows.len(),
                    cols,
                    len: entries.len() + row.len(),
                });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix::new(rows.len(), cols, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::BadDimensions {
                rows: other.rows,
                cols: other.cols,
                len: self.cols,
            });
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                entries.push(acc);
            }
        }
        IntMatrix::new(self.rows, other.cols, entries)
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect()
            })
            .collect()
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(mat: &IntMatrix) -> Result<BigInt> {
    if mat.rows != mat.cols {
        return Err(Error::NonSquare {
            rows: mat.rows,
            cols: mat.cols,
        });
    }
    let n = mat.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| mat.row(i).to_vec()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Row-style Hermite normal form of a square non-singular matrix: an upper
/// triangular basis of the same row lattice with positive diagonal, entries
/// above the diagonal reduced into `[0, d_j)`.
pub fn hermite_normal_form(mat: &IntMatrix) -> Result<IntMatrix> {
    if mat.rows != mat.cols {
        return Err(Error::NonSquare {
            rows: mat.rows,
            cols: mat.cols,
        });
    }
    let n = mat.rows;
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| mat.row(i).to_vec()).collect();
    for col in 0..n {
        loop {
            let pivot = (col..n)
                .filter(|&i| !a[i][col].is_zero())
                .min_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()));
            let Some(p) = pivot else {
                return Err(Error::Singular);
            };
            a.swap(col, p);
            let mut done = true;
            for i in col + 1..n {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[col][col]);
                for j in col..n {
                    let v = &a[col][j] * &q;
                    a[i][j] -= v;
                }
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[col][col].is_negative() {
            for x in a[col].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..col {
            let q = a[i][col].div_floor(&a[col][col]);
            if !q.is_zero() {
                for j in col..n {
                    let v = &a[col][j] * &q;
                    a[i][j] -= v;
                }
            }
        }
    }
    IntMatrix::new(n, n, a.into_iter().flatten().collect())
}

/// A complete system of representatives of `M / M_sigma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetReps {
    pub representatives: Vec<Vec<BigInt>>,
    pub index: BigInt,
}

/// Representatives of `Z^r / L` where `L` is spanned by the rows of
/// `sigma_matrix`, as the box `prod [0, d_i)` of the Hermite diagonal, in
/// lexicographic order.
pub fn coset_representatives(sigma_matrix: &IntMatrix) -> Result<CosetReps> {
    let d = det(sigma_matrix)?;
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let h = hermite_normal_form(sigma_matrix)?;
    let n = h.rows();
    let diag: Vec<BigInt> = (0..n).map(|i| h.get(i, i).clone()).collect();
    let mut reps = vec![Vec::new()];
    for di in &diag {
        let mut next = Vec::new();
        for prefix in &reps {
            let mut x = BigInt::zero();
            while &x < di {
                let mut v: Vec<BigInt> = prefix.clone();
                v.push(x.clone());
                next.push(v);
                x += 1;
            }
        }
        reps = next;
    }
    Ok(CosetReps {
        representatives: reps,
        index: d.abs(),
    })
}

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Bernoulli number `B_n` for the generating series `w/(e^w - 1)`, so that
/// `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    let mut memo = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    while memo.len() <= n {
        let m = memo.len();
        if m == 0 {
            memo.push(Rational::one());
            continue;
        }
        if m > 1 && m % 2 == 1 {
            memo.push(Rational::zero());
            continue;
        }
        // sum_{k<=m} C(m+1, k) B_k = 0
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (k, b) in memo.iter().enumerate() {
            if !b.is_zero() {
                acc += b * Rational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        memo.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    memo[n].clone()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Generalized binomial coefficient `C(n, k)` for any integer `n`.
pub fn binomial(n: i64, k: u64) -> Rational {
    let mut num = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(n - i);
    }
    Rational::new(num, factorial(k))
}

/// Inverse of a square rational matrix, `None` when singular.
pub fn rational_inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..2 * n {
                    let v = &a[col][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(a: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut a = rows.to_vec();
    rref(&mut a).len()
}

/// Basis of `{x : A x = 0}` for the matrix with the given rows.
pub fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut a = rows.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Clears denominators and divides by the content; the first non-zero entry
/// is made positive.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in ints.iter_mut() {
            *x = -x.clone();
        }
    }
    ints
}

/// Coordinates `c` of `v` in the basis given by `rows`: `v = sum c_i rows_i`.
pub fn coordinates_in_basis(rows: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let n = rows.len();
    // transpose: columns are basis vectors
    let t: Vec<Vec<Rational>> = (0..n)
        .map(|j| (0..n).map(|i| rows[i][j].clone()).collect())
        .collect();
    let inv = rational_inverse(&t)?;
    Some(
        inv.iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect(),
    )
}
