//! Exact linear algebra over `Q` and `Z`.
//!
//! Dense row-major matrices of [`BigRational`] entries. Ranks are computed with
//! fraction-free (Bareiss) elimination on the denominator-cleared integer matrix;
//! echelon forms, kernels and coordinate extraction use rational Gauss–Jordan.
//! Integer lattice helpers (row-style Hermite reduction, basis completion,
//! compound matrices) live at the bottom of the file.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Q>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        QMatrix { rows: n, cols, data }
    }

    pub fn from_int_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Q]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| dot(self.row(r), v))
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn push_row(&mut self, row: Vec<Q>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &QMatrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
    }

    pub fn scale(&self, s: &Q) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// Rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        bareiss_rank(self.to_integer_rows())
    }

    /// Each row multiplied by the lcm of its denominators.
    fn to_integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows_iter()
            .map(|row| {
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect()
            })
            .collect()
    }

    /// Determinant of a square matrix (Bareiss).
    pub fn determinant(&self) -> Q {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return Q::one();
        }
        let mut scale = Q::one();
        let mut rows = Vec::with_capacity(self.rows);
        for row in self.rows_iter() {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale /= Q::from_integer(l.clone());
            rows.push(row.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect());
        }
        Q::from_integer(bareiss_det(rows)) * scale
    }

    /// Reduced row echelon form; returns the nonzero rows and their pivot columns.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(r, j)] * &f;
                        m[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        Echelon { rows: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Basis of the right kernel `{x : Ax = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let e = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in e.pivots.iter().enumerate() {
                    v[p] = -e.rows[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `Ax = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = b[r].clone();
        }
        let e = aug.rref();
        if e.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in e.pivots.iter().enumerate() {
            x[p] = e.rows[(i, self.cols)].clone();
        }
        Some(x)
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon form of a matrix, used as a canonical basis of its row space.
///
/// The coordinates of a vector of the row space in this basis are its entries at the
/// pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: QMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.rows.ncols()
    }

    /// Subtracts row-space components, leaving a vector supported off the pivots.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (o, x) in out.iter_mut().zip(self.rows.row(i)) {
                if !x.is_zero() {
                    *o -= &f * x;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` in the echelon basis; `None` when `v` is outside the row space.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }
}

/// Rank of an integer matrix by Bareiss elimination (all divisions exact).
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
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

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
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
    sign * m[n - 1][n - 1].clone()
}

// ---------------------------------------------------------------------------
// Integer lattices

pub type IntMatrix = Vec<Vec<i64>>;

fn checked(x: Option<i64>) -> Result<i64> {
    x.ok_or(Error::Overflow)
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides out the content of a nonzero integer vector.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_slice(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Row-style Hermite reduction of the matrix whose columns are `gens`.
///
/// Returns a unimodular `U` (n×n) together with its inverse such that `U·G` is upper
/// triangular, where `G` is the n×k matrix with the generators as columns. The rows of
/// `U` past the rank annihilate every generator and project `Z^n` onto the quotient by
/// the saturation of the span.
pub struct Hermite {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    /// `U·G`, n×k.
    pub reduced: IntMatrix,
    pub rank: usize,
}

pub fn hermite(n: usize, gens: &[Vec<i64>]) -> Result<Hermite> {
    let k = gens.len();
    let mut a: IntMatrix = (0..n).map(|i| gens.iter().map(|g| g[i]).collect()).collect();
    let mut u: IntMatrix = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut u_inv = u.clone();
    let mut r = 0;
    for c in 0..k {
        if r == n {
            break;
        }
        // Euclid on column c among rows r..n until a single nonzero entry remains.
        loop {
            let nz: Vec<usize> = (r..n).filter(|&i| a[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| (a[i][c].abs(), i)).unwrap();
            for &i in &nz {
                if i == p {
                    continue;
                }
                let f = a[i][c] / a[p][c];
                row_addmul(&mut a, i, p, -f)?;
                row_addmul(&mut u, i, p, -f)?;
                // U' = E·U with E = I - f e_i e_p^T, so U'^{-1} = U^{-1}·(I + f e_i e_p^T).
                col_addmul(&mut u_inv, p, i, f)?;
            }
        }
        let Some(p) = (r..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            u.swap(p, r);
            for row in u_inv.iter_mut() {
                row.swap(p, r);
            }
        }
        if a[r][c] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
            for x in u[r].iter_mut() {
                *x = -*x;
            }
            for row in u_inv.iter_mut() {
                row[r] = -row[r];
            }
        }
        r += 1;
    }
    Ok(Hermite { u, u_inv, reduced: a, rank: r })
}

fn row_addmul(m: &mut IntMatrix, dst: usize, src: usize, f: i64) -> Result<()> {
    if f == 0 {
        return Ok(());
    }
    for j in 0..m[dst].len() {
        let v = checked(m[src][j].checked_mul(f))?;
        m[dst][j] = checked(m[dst][j].checked_add(v))?;
    }
    Ok(())
}

fn col_addmul(m: &mut IntMatrix, dst: usize, src: usize, f: i64) -> Result<()> {
    if f == 0 {
        return Ok(());
    }
    for row in m.iter_mut() {
        let v = checked(row[src].checked_mul(f))?;
        row[dst] = checked(row[dst].checked_add(v))?;
    }
    Ok(())
}

/// gcd of the maximal minors of the matrix with the given columns; 0 if they are dependent.
pub fn maximal_minor_gcd(n: usize, gens: &[Vec<i64>]) -> Result<i64> {
    let h = hermite(n, gens)?;
    if h.rank < gens.len() {
        return Ok(0);
    }
    // U unimodular, so the gcd of maximal minors equals |det| of the triangular block.
    let mut d: i64 = 1;
    for i in 0..h.rank {
        d = checked(d.checked_mul(h.reduced[i][i]))?;
    }
    Ok(d.abs())
}

pub fn int_mat_vec(m: &IntMatrix, v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn int_mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize) -> IntMatrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// All `p`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < p - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    rec(0, n, p, &mut cur, &mut out);
    out
}

/// Coordinates of `v_1 ∧ … ∧ v_p` in the lexicographic basis of `∧^p Q^r`.
pub fn wedge(r: usize, vectors: &[Vec<Q>]) -> Vec<Q> {
    let p = vectors.len();
    subsets(r, p)
        .into_iter()
        .map(|rows| {
            let m = QMatrix::from_rows(
                p,
                rows.iter().map(|&i| vectors.iter().map(|v| v[i].clone()).collect()).collect(),
            );
            m.determinant()
        })
        .collect()
}

/// The `p`-th compound of an `r_out × r_in` matrix: the matrix of `∧^p` of the map.
pub fn compound(m: &QMatrix, p: usize) -> QMatrix {
    let rows_idx = subsets(m.nrows(), p);
    let cols_idx = subsets(m.ncols(), p);
    let mut out = QMatrix::zeros(rows_idx.len(), cols_idx.len());
    for (a, ri) in rows_idx.iter().enumerate() {
        for (b, ci) in cols_idx.iter().enumerate() {
            let sub = QMatrix::from_rows(
                p,
                ri.iter().map(|&i| ci.iter().map(|&j| m[(i, j)].clone()).collect()).collect(),
            );
            out[(a, b)] = sub.determinant();
        }
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Leading principal minors of a square matrix, in order.
pub fn leading_minors(m: &QMatrix) -> Vec<Q> {
    (1..=m.nrows())
        .map(|k| {
            let sub = QMatrix::from_rows(
                k,
                (0..k).map(|i| (0..k).map(|j| m[(i, j)].clone()).collect()).collect(),
            );
            sub.determinant()
        })
        .collect()
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}
