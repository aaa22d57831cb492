//! Dense integer matrices and the Smith normal form.
//!
//! Elimination runs on checked `i64` first. If any intermediate value overflows the
//! whole computation is repeated over `BigInt`; results that do not fit back into
//! `i64` are reported as [`Error::Overflow`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major integer matrix. Columns are images of source basis vectors.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { rows: rows.len(), cols, data: rows.concat() }
    }

    /// A matrix with an explicit shape, for the `0 × n` and `n × 0` cases.
    pub fn from_rows_shaped(rows: usize, cols: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ParameterMismatch(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if b != 0 {
                        let prod = a.checked_mul(b).ok_or_else(|| Error::Overflow("matrix product".into()))?;
                        let cell = &mut out[(i, j)];
                        *cell = cell.checked_add(prod).ok_or_else(|| Error::Overflow("matrix product".into()))?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ParameterMismatch("matrix shapes differ".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: i64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    /// Adds `c` at `(i, j)`.
    pub fn bump(&mut self, i: usize, j: usize, c: i64) {
        self[(i, j)] += c;
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::ParameterMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if Zero::is_zero(&a[k][k]) {
                match (k + 1..n).find(|&i| !Zero::is_zero(&a[i][k])) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(if n == 0 { BigInt::one() } else { sign * &a[n - 1][n - 1] })
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> Result<usize> {
        Ok(invariant_factors(self)?.len())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(i64::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `U · M · V = S`, with `U` and `V` unimodular and `S` diagonal, `d1 | d2 | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub s: Matrix,
    pub v: Matrix,
}

impl SmithForm {
    /// The nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s[(i, i)]).filter(|&d| d != 0).collect()
    }
}

pub fn smith_normal_form(m: &Matrix) -> Result<SmithForm> {
    let (s, t) = run_with_fallback(m, true)?;
    let [u, u_inv, v] = t.expect("tracked");
    Ok(SmithForm { u, u_inv, s, v })
}

/// Nonzero invariant factors only; skips the transforms.
pub fn invariant_factors(m: &Matrix) -> Result<Vec<i64>> {
    let (s, _) = run_with_fallback(m, false)?;
    Ok((0..s.rows.min(s.cols)).map(|i| s[(i, i)]).filter(|&d| d != 0).collect())
}

/// Columns spanning the integer kernel, in row-echelon form with positive pivots.
pub fn kernel_basis(m: &Matrix) -> Result<Matrix> {
    let f = smith_normal_form(m)?;
    let r = f.invariant_factors().len();
    let vectors: Vec<Vec<i64>> = (r..m.cols()).map(|j| f.v.column(j)).collect();
    Ok(columns(m.cols(), &echelon(vectors)))
}

/// Integer row echelon form of a list of independent vectors, pivots positive and
/// entries above each pivot reduced into `[0, pivot)`.
pub fn echelon(mut rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let width = rows.first().map_or(0, Vec::len);
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut col = 0;
    while col < width && !rows.is_empty() {
        // Euclid on the column until a single row carries it.
        loop {
            let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let piv = *nonzero.iter().min_by_key(|&&i| rows[i][col].abs()).expect("nonempty");
            for &i in &nonzero {
                if i != piv {
                    let q = rows[i][col].div_euclid(rows[piv][col]);
                    let pr = rows[piv].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pr) {
                        *x -= q * y;
                    }
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| rows[i][col] != 0) {
            let mut row = rows.remove(i);
            if row[col] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            for prev in out.iter_mut() {
                let q = prev[col].div_euclid(row[col]);
                for (x, y) in prev.iter_mut().zip(&row) {
                    *x -= q * y;
                }
            }
            out.push(row);
        }
        col += 1;
    }
    out
}

fn columns(height: usize, vectors: &[Vec<i64>]) -> Matrix {
    let mut m = Matrix::zeros(height, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        for (i, &x) in v.iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    m
}

type Outcome = (Matrix, Option<[Matrix; 3]>);

/// Transforms with entries beyond this are shrunk before they are returned.
const LARGE_TRANSFORM: u64 = 1 << 16;

fn run_with_fallback(m: &Matrix, track: bool) -> Result<Outcome> {
    let small: Work<Checked> = Work::new(m, track);
    if let Ok(w) = small.run() {
        let (s, t) = w.finish(|x| Ok(x.0));
        let large = t.as_ref().is_some_and(|t| t.iter().any(|x| x.data.iter().any(|e| e.unsigned_abs() > LARGE_TRANSFORM)));
        if !large {
            return Ok((s, t));
        }
    }
    let big: Work<BigInt> = Work::new(m, track);
    let mut w = big.run().expect("big integers do not overflow");
    if track {
        w.shrink_transforms();
    }
    let to_i64 = |x: BigInt| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()));
    w.try_finish(to_i64)
}

#[derive(Debug)]
struct Overflowed;

/// Arithmetic the elimination needs; `i64` reports overflow instead of wrapping.
trait Scalar: Clone + fmt::Debug {
    fn from_i64(x: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn neg(&self) -> std::result::Result<Self, Overflowed>;
    /// `self - q * other`.
    fn sub_mul(&self, q: &Self, other: &Self) -> std::result::Result<Self, Overflowed>;
    /// Quotient rounded to the nearest integer, so remainders stay small.
    fn div_nearest(&self, other: &Self) -> std::result::Result<Self, Overflowed>;
    fn divides(&self, other: &Self) -> bool;
}

#[derive(Clone, Copy, Debug)]
struct Checked(i64);

impl Scalar for Checked {
    fn from_i64(x: i64) -> Self {
        Checked(x)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn is_negative(&self) -> bool {
        self.0 < 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.0.unsigned_abs() < other.0.unsigned_abs()
    }
    fn neg(&self) -> std::result::Result<Self, Overflowed> {
        self.0.checked_neg().map(Checked).ok_or(Overflowed)
    }
    fn sub_mul(&self, q: &Self, other: &Self) -> std::result::Result<Self, Overflowed> {
        q.0.checked_mul(other.0).and_then(|p| self.0.checked_sub(p)).map(Checked).ok_or(Overflowed)
    }
    fn div_nearest(&self, other: &Self) -> std::result::Result<Self, Overflowed> {
        if self.0 == i64::MIN && other.0 == -1 {
            return Err(Overflowed);
        }
        let (q, r) = Integer::div_mod_floor(&(self.0 as i128), &(other.0 as i128));
        let up = if other.0 > 0 { 2 * r > other.0 as i128 } else { 2 * r < other.0 as i128 };
        Ok(Checked((q + up as i128) as i64))
    }
    fn divides(&self, other: &Self) -> bool {
        other.0 % self.0 == 0
    }
}

impl Scalar for BigInt {
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.abs() < other.abs()
    }
    fn neg(&self) -> std::result::Result<Self, Overflowed> {
        Ok(-self)
    }
    fn sub_mul(&self, q: &Self, other: &Self) -> std::result::Result<Self, Overflowed> {
        Ok(self - q * other)
    }
    fn div_nearest(&self, other: &Self) -> std::result::Result<Self, Overflowed> {
        let (q, r) = Integer::div_mod_floor(self, other);
        let twice: BigInt = &r * 2;
        let up = if Signed::is_positive(other) { &twice > other } else { &twice < other };
        Ok(if up { q + 1 } else { q })
    }
    fn divides(&self, other: &Self) -> bool {
        Zero::is_zero(&(other % self))
    }
}

struct Work<T> {
    rows: usize,
    cols: usize,
    a: Vec<Vec<T>>,
    u: Option<Vec<Vec<T>>>,
    u_inv: Option<Vec<Vec<T>>>,
    v: Option<Vec<Vec<T>>>,
}

fn ident<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n).map(|i| (0..n).map(|j| T::from_i64((i == j) as i64)).collect()).collect()
}

impl<T: Scalar> Work<T> {
    fn new(m: &Matrix, track: bool) -> Self {
        let a = (0..m.rows).map(|i| m.row(i).iter().map(|&x| T::from_i64(x)).collect()).collect();
        Self { rows: m.rows, cols: m.cols, a, u: track.then(|| ident(m.rows)), u_inv: track.then(|| ident(m.rows)), v: track.then(|| ident(m.cols)) }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
        if let Some(w) = &mut self.u_inv {
            for row in w {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v {
                row.swap(i, j);
            }
        }
    }

    /// row_i -= q * row_j
    fn row_op(&mut self, i: usize, j: usize, q: &T) -> std::result::Result<(), Overflowed> {
        for c in 0..self.cols {
            let x = self.a[i][c].sub_mul(q, &self.a[j][c])?;
            self.a[i][c] = x;
        }
        if let Some(u) = &mut self.u {
            for c in 0..u[i].len() {
                let x = u[i][c].sub_mul(q, &u[j][c])?;
                u[i][c] = x;
            }
        }
        // The inverse picks up the inverse operation on the right: col_j += q * col_i.
        if let Some(w) = &mut self.u_inv {
            let minus_q = q.neg()?;
            for row in w.iter_mut() {
                let x = row[j].sub_mul(&minus_q, &row[i])?;
                row[j] = x;
            }
        }
        Ok(())
    }

    /// col_i -= q * col_j
    fn col_op(&mut self, i: usize, j: usize, q: &T) -> std::result::Result<(), Overflowed> {
        for r in 0..self.rows {
            let x = self.a[r][i].sub_mul(q, &self.a[r][j])?;
            self.a[r][i] = x;
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                let x = row[i].sub_mul(q, &row[j])?;
                row[i] = x;
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> std::result::Result<(), Overflowed> {
        for c in 0..self.cols {
            self.a[i][c] = self.a[i][c].neg()?;
        }
        if let Some(u) = &mut self.u {
            for c in 0..u[i].len() {
                u[i][c] = u[i][c].neg()?;
            }
        }
        if let Some(w) = &mut self.u_inv {
            for row in w.iter_mut() {
                row[i] = row[i].neg()?;
            }
        }
        Ok(())
    }

    fn run(mut self) -> std::result::Result<Self, Overflowed> {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            // Smallest nonzero entry of the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..self.rows {
                for j in t..self.cols {
                    if !self.a[i][j].is_zero() && best.is_none_or(|(bi, bj)| self.a[i][j].abs_lt(&self.a[bi][bj])) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            self.swap_rows(t, bi);
            self.swap_cols(t, bj);
            loop {
                let mut clean = true;
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].div_nearest(&self.a[t][t])?;
                        self.row_op(i, t, &q)?;
                        if !self.a[i][t].is_zero() {
                            clean = false;
                            if self.a[i][t].abs_lt(&self.a[t][t]) {
                                self.swap_rows(t, i);
                            }
                        }
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].div_nearest(&self.a[t][t])?;
                        self.col_op(j, t, &q)?;
                        if !self.a[t][j].is_zero() {
                            clean = false;
                            if self.a[t][j].abs_lt(&self.a[t][t]) {
                                self.swap_cols(t, j);
                            }
                        }
                    }
                }
                if !clean {
                    continue;
                }
                // Divisibility: fold an offending row into row t and go again.
                let offender = (t + 1..self.rows).find(|&i| (t + 1..self.cols).any(|j| !self.a[t][t].divides(&self.a[i][j])));
                match offender {
                    Some(i) => {
                        let minus_one = T::from_i64(-1);
                        self.row_op(t, i, &minus_one)?;
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t)?;
            }
        }
        Ok(self)
    }

    fn finish(self, conv: impl Fn(T) -> Result<i64>) -> Outcome {
        self.try_finish(conv).expect("values already fit")
    }

    fn try_finish(self, conv: impl Fn(T) -> Result<i64>) -> Result<Outcome> {
        let to_matrix = |rows: Vec<Vec<T>>, r: usize, c: usize| -> Result<Matrix> {
            let data = rows.into_iter().flatten().map(&conv).collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_rows_shaped(r, c, data))
        };
        let (r, c) = (self.rows, self.cols);
        let s = to_matrix(self.a, r, c)?;
        let transforms = match (self.u, self.u_inv, self.v) {
            (Some(u), Some(w), Some(v)) => Some([to_matrix(u, r, r)?, to_matrix(w, r, r)?, to_matrix(v, c, c)?]),
            _ => None,
        };
        Ok((s, transforms))
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_of(rows: &[Vec<BigInt>]) -> BigInt {
    rows.iter().map(|r| dot(r, r)).sum()
}

/// `round(-num / den)`, or zero when `den` is zero.
fn nearest_step(num: &BigInt, den: &BigInt) -> BigInt {
    if Zero::is_zero(den) {
        return BigInt::zero();
    }
    let (q, r) = Integer::div_mod_floor(&-num, den);
    if &r * 2 > *den {
        q + 1
    } else {
        q
    }
}

fn column(rows: &[Vec<BigInt>], j: usize) -> Vec<BigInt> {
    rows.iter().map(|r| r[j].clone()).collect()
}

/// `target += k * source` on rows or columns.
fn add_row(rows: &mut [Vec<BigInt>], target: usize, source: usize, k: &BigInt) {
    let src = rows[source].clone();
    for (x, y) in rows[target].iter_mut().zip(&src) {
        *x += k * y;
    }
}

fn add_col(rows: &mut [Vec<BigInt>], target: usize, source: usize, k: &BigInt) {
    for r in rows.iter_mut() {
        let y = r[source].clone();
        r[target] += k * y;
    }
}

impl Work<BigInt> {
    /// Greedy size reduction of `U`, `U⁻¹` and `V` through paired operations that keep
    /// `U·M·V` unchanged: adding row `j` of `U` to row `i` is undone on the diagonal by a
    /// column operation on `V`, which needs `d_i | d_j`, and symmetrically for columns.
    fn shrink_transforms(&mut self) {
        let d: Vec<BigInt> =
            (0..self.rows.max(self.cols)).map(|k| if k < self.rows && k < self.cols { self.a[k][k].clone() } else { BigInt::zero() }).collect();
        // c with d_j = c·d_i, if it exists.
        let ratio = |i: usize, j: usize| -> Option<BigInt> {
            match (Zero::is_zero(&d[i]), Zero::is_zero(&d[j])) {
                (_, true) => Some(BigInt::zero()),
                (true, false) => None,
                _ => d[j].is_multiple_of(&d[i]).then(|| &d[j] / &d[i]),
            }
        };
        let (mut u, mut w, mut v) = (self.u.take().expect("tracked"), self.u_inv.take().expect("tracked"), self.v.take().expect("tracked"));
        let cost = |u: &[Vec<BigInt>], w: &[Vec<BigInt>], v: &[Vec<BigInt>]| norm_of(u) + norm_of(w) + norm_of(v);
        let mut current = cost(&u, &w, &v);
        for _ in 0..200 {
            let mut improved = false;
            for i in 0..self.rows {
                for j in 0..self.rows {
                    let Some(c) = (i != j).then(|| ratio(i, j)).flatten() else { continue };
                    let q = nearest_step(&dot(&u[i], &u[j]), &dot(&u[j], &u[j]));
                    if Zero::is_zero(&q) {
                        continue;
                    }
                    let (mut u2, mut w2, mut v2) = (u.clone(), w.clone(), v.clone());
                    add_row(&mut u2, i, j, &q);
                    add_col(&mut w2, j, i, &-&q);
                    if !Zero::is_zero(&c) {
                        add_col(&mut v2, j, i, &-(&q * &c));
                    }
                    let next = cost(&u2, &w2, &v2);
                    if next < current {
                        (u, w, v, current, improved) = (u2, w2, v2, next, true);
                    }
                }
            }
            for i in 0..self.cols {
                for j in 0..self.cols {
                    let Some(c) = (i != j).then(|| ratio(i, j)).flatten() else { continue };
                    let (vi, vj) = (column(&v, i), column(&v, j));
                    let q = nearest_step(&dot(&vi, &vj), &dot(&vj, &vj));
                    if Zero::is_zero(&q) {
                        continue;
                    }
                    let (mut u2, mut w2, mut v2) = (u.clone(), w.clone(), v.clone());
                    add_col(&mut v2, i, j, &q);
                    if !Zero::is_zero(&c) {
                        let k = &q * &c;
                        add_row(&mut u2, j, i, &-&k);
                        add_col(&mut w2, i, j, &k);
                    }
                    let next = cost(&u2, &w2, &v2);
                    if next < current {
                        (u, w, v, current, improved) = (u2, w2, v2, next, true);
                    }
                }
            }
            if !improved {
                break;
            }
        }
        (self.u, self.u_inv, self.v) = (Some(u), Some(w), Some(v));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &Matrix) -> SmithForm {
        let f = smith_normal_form(m).unwrap();
        assert_eq!(f.u.mul(m).unwrap().mul(&f.v).unwrap(), f.s);
        assert_eq!(f.u.mul(&f.u_inv).unwrap(), Matrix::identity(m.rows()));
        assert_eq!(f.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(f.v.determinant().unwrap().abs(), BigInt::one());
        f
    }

    #[test]
    fn diag_two_three() {
        let f = check(&Matrix::diagonal(&[2, 3]));
        assert_eq!(f.s, Matrix::diagonal(&[1, 6]));
    }

    #[test]
    fn zero_matrix() {
        let f = check(&Matrix::zeros(2, 3));
        assert!(f.s.is_zero());
        assert_eq!(f.u, Matrix::identity(2));
        assert_eq!(f.v, Matrix::identity(3));
    }

    #[test]
    fn two_by_two() {
        let f = check(&Matrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(f.s, Matrix::diagonal(&[2, 4]));
    }

    #[test]
    fn empty_shapes() {
        assert!(invariant_factors(&Matrix::zeros(0, 4)).unwrap().is_empty());
        assert!(invariant_factors(&Matrix::zeros(3, 0)).unwrap().is_empty());
        assert_eq!(Matrix::zeros(0, 0).determinant().unwrap(), BigInt::one());
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = i64::MAX / 2;
        let m = Matrix::from_rows(&[vec![big, big - 1], vec![big - 1, big - 2]]);
        // det = -1, so the form is the identity even though products overflow i64.
        assert_eq!(invariant_factors(&m).unwrap(), vec![1, 1]);
    }

    #[test]
    fn factor_too_large_is_an_error() {
        let big = i64::MAX / 2 + 1;
        let m = Matrix::diagonal(&[big, 3]);
        assert!(matches!(invariant_factors(&m), Err(Error::Overflow(_))));
    }

    #[test]
    fn kernel_of_restriction() {
        // A(G) → A(Z/p): 1 ↦ 1, t2 ↦ 2, tp ↦ tp, t2p ↦ 2tp.
        let m = Matrix::from_rows(&[vec![1, 2, 0, 0], vec![0, 0, 1, 2]]);
        let k = kernel_basis(&m).unwrap();
        assert_eq!(k.transpose(), Matrix::from_rows(&[vec![2, -1, 0, 0], vec![0, 0, 2, -1]]));
    }

    #[test]
    fn determinant_small() {
        let m = Matrix::from_rows(&[vec![0, 2, 1], vec![1, 0, 0], vec![3, 1, 4]]);
        assert_eq!(m.determinant().unwrap(), BigInt::from(-7));
    }
}
