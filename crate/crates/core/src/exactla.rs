//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision. Vectors and matrices are plain
//! values: operations never mutate their inputs.

use std::fmt;
use std::ops::{Deref, Index};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Extended Euclid: returns `(g, x, y)` with `x*a + y*b = g >= 0`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a Int>) -> Int {
    values
        .into_iter()
        .fold(Int::one(), |acc, v| if v.is_zero() { acc } else { acc.lcm(v) })
}

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVector(Vec<Int>);

impl IntVector {
    pub fn new(entries: Vec<Int>) -> Self {
        IntVector(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&v| Int::from(v)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![Int::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Int::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<Int> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &[Int]) -> Int {
        debug_assert_eq!(self.0.len(), other.len());
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    /// gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> Int {
        self.0.iter().fold(Int::zero(), |g, v| g.gcd(v))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// The primitive vector on the same ray; the zero vector is returned unchanged.
    pub fn primitive(&self) -> IntVector {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntVector(self.0.iter().map(|v| v / &g).collect())
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &Int) -> IntVector {
        IntVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn to_rat(&self) -> RatVector {
        RatVector(self.0.iter().map(|v| Rat::from_integer(v.clone())).collect())
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn all_positive(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.0.iter().all(|v| !v.is_negative())
    }

    pub fn max_abs(&self) -> Int {
        self.0.iter().map(Signed::abs).max().unwrap_or_else(Int::zero)
    }
}

impl Deref for IntVector {
    type Target = [Int];
    fn deref(&self) -> &[Int] {
        &self.0
    }
}

impl From<Vec<Int>> for IntVector {
    fn from(v: Vec<Int>) -> Self {
        IntVector(v)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RatVector(Vec<Rat>);

impl RatVector {
    pub fn new(entries: Vec<Rat>) -> Self {
        RatVector(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector::from_i64(entries).to_rat()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<Rat> {
        self.0
    }

    pub fn dot(&self, other: &[Rat]) -> Rat {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub fn dot_int(&self, other: &[Int]) -> Rat {
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| a * Rat::from_integer(b.clone()))
            .sum()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rat::is_integer)
    }

    pub fn to_int(&self) -> Option<IntVector> {
        if !self.is_integral() {
            return None;
        }
        Some(IntVector(self.0.iter().map(|v| v.to_integer()).collect()))
    }

    pub fn all_positive(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }

    /// Smallest positive integer multiple that is integral, made primitive.
    pub fn clear_denominators(&self) -> IntVector {
        let l = lcm_all(self.0.iter().map(|v| v.denom()));
        IntVector(
            self.0
                .iter()
                .map(|v| (v * Rat::from_integer(l.clone())).to_integer())
                .collect(),
        )
        .primitive()
    }

    pub fn scale(&self, k: &Rat) -> RatVector {
        RatVector(self.0.iter().map(|v| v * k).collect())
    }
}

impl Deref for RatVector {
    type Target = [Rat];
    fn deref(&self) -> &[Rat] {
        &self.0
    }
}

impl From<Vec<Rat>> for RatVector {
    fn from(v: Vec<Rat>) -> Self {
        RatVector(v)
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// Row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[IntVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.dim());
        if let Some(bad) = rows.iter().find(|r| r.dim() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.dim()
            )));
        }
        let data = rows.iter().flat_map(|r| r.iter().cloned()).collect();
        Self::new(rows.len(), cols, data)
    }

    /// Convenience constructor for literal matrices; panics on ragged input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<IntVector> = rows.iter().map(|r| IntVector::from_i64(r)).collect();
        Self::from_rows(&rows).expect("ragged literal matrix")
    }

    pub fn from_columns(cols: &[IntVector]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Int::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Int::one();
        }
        IntMatrix { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> IntVector {
        IntVector(self.row(i).to_vec())
    }

    pub fn row_vectors(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row_vector(i)).collect()
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                data.push((0..self.cols).map(|k| &self[(i, k)] * &other[(k, j)]).sum());
            }
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[Int]) -> Result<IntVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(IntVector(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        IntMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| Rat::from_integer(v.clone())).collect(),
        }
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn max_abs(&self) -> Int {
        self.data.iter().map(Signed::abs).max().unwrap_or_else(Int::zero)
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<Int> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a: Vec<Vec<Int>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = Int::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        negate = !negate;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        let d = if n == 0 { Int::one() } else { a[n - 1][n - 1].clone() };
        Ok(if negate { -d } else { d })
    }

    pub fn rank(&self) -> usize {
        self.to_rat().rank()
    }

    /// Primitive integer vectors spanning the rational kernel.
    pub fn kernel_basis(&self) -> Vec<IntVector> {
        self.to_rat()
            .kernel_basis()
            .iter()
            .map(RatVector::clear_denominators)
            .collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_grid(f, self.rows, self.cols, |i, j| self[(i, j)].to_string())
    }
}

/// Row-major rational matrix. Zero-row matrices are allowed (an eliminated
/// system ends up with no rows).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_i64_rows(rows).to_rat()
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::identity(n).to_rat()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVector {
        RatVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<RatVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(RatVector(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    pub fn to_int(&self) -> Option<IntMatrix> {
        if !self.data.iter().all(Rat::is_integer) {
            return None;
        }
        Some(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.to_integer()).collect(),
        })
    }

    /// `k * self`, which must be integral (e.g. `det * inverse`).
    pub fn to_int_scaled(&self, k: &Int) -> IntMatrix {
        let k = Rat::from_integer(k.clone());
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|v| {
                    let s = v * &k;
                    assert!(s.is_integer(), "scaled matrix is not integral");
                    s.to_integer()
                })
                .collect(),
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let inv = a[(r, c)].recip();
            for j in c..self.cols {
                let v = &a[(r, j)] * &inv;
                a.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let factor = a[(i, c)].clone();
                for j in c..self.cols {
                    let v = &a[(i, j)] - &factor * &a[(r, j)];
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..n {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let factor = &a[(i, c)] / &pivot;
                for j in c..n {
                    let v = &a[(i, j)] - &factor * &a[(c, j)];
                    a.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Vec::with_capacity(n * 2 * n);
        for i in 0..n {
            aug.extend_from_slice(self.row(i));
            for j in 0..n {
                aug.push(if i == j { Rat::one() } else { Rat::zero() });
            }
        }
        let aug = RatMatrix {
            rows: n,
            cols: 2 * n,
            data: aug,
        };
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            data.extend_from_slice(&r.row(i)[n..]);
        }
        Some(RatMatrix { rows: n, cols: n, data })
    }

    /// Basis of the rational kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<RatVector> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, free)].clone();
            }
            basis.push(RatVector(v));
        }
        basis
    }

    /// Copy with one row and one column removed.
    pub fn minor(&self, row: usize, col: usize) -> RatMatrix {
        let mut data = Vec::with_capacity((self.rows.saturating_sub(1)) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != row) {
            for j in (0..self.cols).filter(|&j| j != col) {
                data.push(self[(i, j)].clone());
            }
        }
        RatMatrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_grid(f, self.rows, self.cols, |i, j| self[(i, j)].to_string())
    }
}

fn write_grid(
    f: &mut fmt::Formatter<'_>,
    rows: usize,
    cols: usize,
    cell: impl Fn(usize, usize) -> String,
) -> fmt::Result {
    let cells: Vec<Vec<String>> = (0..rows).map(|i| (0..cols).map(|j| cell(i, j)).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    for (i, row) in cells.iter().enumerate() {
        if i > 0 {
            writeln!(f)?;
        }
        write!(f, "[")?;
        for (j, c) in row.iter().enumerate() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c:>width$}")?;
        }
        write!(f, "]")?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Solving and lattice operations
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(RatVector),
    NoSolution,
    Underdetermined,
}

/// Solve `m * x = b` exactly.
pub fn solve_rational(m: &RatMatrix, b: &RatVector) -> Result<Solution> {
    if b.dim() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.dim(),
            m.rows()
        )));
    }
    let n = m.cols();
    let mut data = Vec::with_capacity(m.rows() * (n + 1));
    for i in 0..m.rows() {
        data.extend_from_slice(m.row(i));
        data.push(b[i].clone());
    }
    let aug = RatMatrix::new(m.rows(), n + 1, data)?;
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&n) {
        return Ok(Solution::NoSolution);
    }
    if pivots.len() < n {
        return Ok(Solution::Underdetermined);
    }
    Ok(Solution::Unique(RatVector((0..n).map(|i| r[(i, n)].clone()).collect())))
}

/// Column-style Hermite reduction: returns `(h, w)` with `h = m * w`, `w`
/// unimodular, and `h` in lower echelon form. Pivot entries are positive and
/// the pivot of row-rank position `k` sits in column `k`.
pub fn column_hermite(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h: Vec<Vec<Int>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut w: Vec<Vec<Int>> = (0..cols).map(|i| IntMatrix::identity(cols).row(i).to_vec()).collect();

    // Apply a 2x2 unimodular column operation to columns p and c of both matrices.
    fn combine(mat: &mut [Vec<Int>], p: usize, c: usize, t: [&Int; 4]) {
        for row in mat.iter_mut() {
            let (a, b) = (row[p].clone(), row[c].clone());
            row[p] = t[0] * &a + t[1] * &b;
            row[c] = t[2] * &a + t[3] * &b;
        }
    }

    let mut pivot_col = 0;
    for i in 0..rows {
        if pivot_col == cols {
            break;
        }
        for c in pivot_col + 1..cols {
            if h[i][c].is_zero() {
                continue;
            }
            let (a, b) = (h[i][pivot_col].clone(), h[i][c].clone());
            let (g, x, y) = ext_gcd(&a, &b);
            let (bg, ag) = (-(&b / &g), &a / &g);
            // new_p = x*col_p + y*col_c, new_c = (-b/g)*col_p + (a/g)*col_c
            combine(&mut h, pivot_col, c, [&x, &y, &bg, &ag]);
            combine(&mut w, pivot_col, c, [&x, &y, &bg, &ag]);
        }
        if h[i][pivot_col].is_zero() {
            continue;
        }
        if h[i][pivot_col].is_negative() {
            for row in h.iter_mut().chain(w.iter_mut()) {
                row[pivot_col] = -row[pivot_col].clone();
            }
        }
        pivot_col += 1;
    }
    let flat = |v: Vec<Vec<Int>>, r, c| IntMatrix::new(r, c, v.into_iter().flatten().collect());
    (
        flat(h, rows, cols).expect("shape preserved"),
        flat(w, cols, cols).expect("shape preserved"),
    )
}

/// Integer matrix with determinant ±1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMap {
    matrix: IntMatrix,
}

impl UnimodularMap {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        let det = matrix.det()?;
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular(det));
        }
        Ok(UnimodularMap { matrix })
    }

    pub fn identity(d: usize) -> Self {
        UnimodularMap {
            matrix: IntMatrix::identity(d),
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn det(&self) -> Int {
        self.matrix.det().expect("square by construction")
    }

    pub fn apply(&self, v: &[Int]) -> Result<IntVector> {
        self.matrix.mul_vec(v)
    }

    pub fn inverse(&self) -> UnimodularMap {
        let inv = self
            .matrix
            .to_rat()
            .inverse()
            .and_then(|m| m.to_int())
            .expect("inverse of a unimodular matrix is integral");
        UnimodularMap { matrix: inv }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &UnimodularMap) -> Result<UnimodularMap> {
        Ok(UnimodularMap {
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }
}

/// Complete `basis` (k primitive, independent vectors spanning a saturated
/// sublattice of Z^d) to a unimodular matrix whose first k columns are the
/// input. The determinant is made +1 whenever a completion column exists.
pub fn extend_to_unimodular(basis: &[IntVector]) -> Result<UnimodularMap> {
    let Some(d) = basis.first().map(|v| v.dim()) else {
        return Err(Error::DimensionMismatch("empty basis".into()));
    };
    let k = basis.len();
    if k > d || basis.iter().any(|v| v.dim() != d) {
        return Err(Error::DimensionMismatch(format!(
            "{k} vectors of differing or excess dimension in Z^{d}"
        )));
    }
    let bt = IntMatrix::from_rows(basis)?;
    let (h, w) = column_hermite(&bt);
    if (0..k).any(|i| h[(i, i)].is_zero()) {
        return Err(Error::LinearlyDependent);
    }
    let index: Int = (0..k).map(|i| h[(i, i)].clone()).product();
    if !index.is_one() {
        return Err(Error::NonSaturated { index });
    }
    // w^T * B = [h_k^T; 0], so B = (w^T)^-1 [h_k^T; 0].
    let vinv = UnimodularMap { matrix: w.transpose() }.inverse();
    let mut scale = IntMatrix::identity(d).data;
    for i in 0..k {
        for j in 0..k {
            scale[i * d + j] = h[(j, i)].clone();
        }
    }
    let scale = IntMatrix::new(d, d, scale)?;
    let mut u = vinv.matrix.mul(&scale)?;
    let det = u.det()?;
    if det.is_negative() {
        if d - k >= 2 {
            for i in 0..d {
                u.data.swap(i * d + d - 2, i * d + d - 1);
            }
        } else if d - k == 1 {
            for i in 0..d {
                let v = -u.data[i * d + d - 1].clone();
                u.data[i * d + d - 1] = v;
            }
        }
    }
    debug_assert!((0..k).all(|j| u.column(j) == basis[j]));
    UnimodularMap::new(u)
}
