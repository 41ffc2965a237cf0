//! Dense exact linear algebra over a [`Field`](crate::scalars::Field).
//!
//! Elimination always takes the first nonzero entry in a column as pivot, so every
//! result (particular solutions, kernel bases, subspace bases) is deterministic.
//! Vectors are plain `Vec<Scalar>`; matrices act on column vectors.

use std::fmt;

use thiserror::Error;

use crate::scalars::{FieldRef, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("linear system has no solution")]
    NoSolution,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
}

pub type Vector = Vec<Scalar>;

pub fn zero_vector(field: &FieldRef, n: usize) -> Vector {
    vec![Scalar::zero(field); n]
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn unit_vector(field: &FieldRef, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = Scalar::one(field);
    v
}

/// `a + c * b`, in place.
pub fn axpy(a: &mut [Scalar], c: &Scalar, b: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x += &(c * y);
        }
    }
}

pub fn scale_vector(v: &[Scalar], c: &Scalar) -> Vector {
    v.iter().map(|x| x * c).collect()
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldRef,
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zeros(field: &FieldRef, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![zero_vector(field, cols); rows],
        }
    }

    pub fn identity(field: &FieldRef, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i][i] = Scalar::one(field);
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(field: &FieldRef, cols: usize, rows: Vec<Vector>) -> Result<Self, LinAlgError> {
        for r in &rows {
            if r.len() != cols {
                return Err(LinAlgError::DimensionMismatch { expected: cols, found: r.len() });
            }
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data: rows })
    }

    /// Builds a matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: &FieldRef, rows: usize, columns: &[Vector]) -> Result<Self, LinAlgError> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(LinAlgError::DimensionMismatch { expected: rows, found: c.len() });
            }
            for (i, x) in c.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[Vector] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vector {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(self
            .data
            .iter()
            .map(|row| {
                let mut acc = Scalar::zero(&self.field);
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| scale_vector(r, c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| is_zero_vector(r))
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = self.data[r][c].inv().expect("pivot is nonzero");
            if !inv.is_one() {
                for x in self.data[r].iter_mut() {
                    if !x.is_zero() {
                        *x = &*x * &inv;
                    }
                }
            }
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i == r || self.data[i][c].is_zero() {
                    continue;
                }
                let factor = -&self.data[i][c];
                axpy(&mut self.data[i], &factor, &pivot_row);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Particular solution of `A x = b` with every free variable set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vector, LinAlgError> {
        if b.len() != self.rows {
            return Err(LinAlgError::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][self.cols] = b[i].clone();
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Err(LinAlgError::NoSolution);
        }
        let mut x = zero_vector(&self.field, self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.data[r][self.cols].clone();
        }
        Ok(x)
    }

    /// Null space `{x : A x = 0}` as a canonical subspace of `F^cols`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = unit_vector(&self.field, self.cols, f);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, f);
            }
            basis.push(v);
        }
        Subspace::span(&self.field, self.cols, basis).expect("kernel vectors have ambient length")
    }

    /// Column space as a canonical subspace of `F^rows`.
    pub fn image(&self) -> Subspace {
        let cols: Vec<Vector> = (0..self.cols).map(|j| self.column(j)).collect();
        Subspace::span(&self.field, self.rows, cols).expect("columns have ambient length")
    }

    pub fn determinant(&self) -> Result<Scalar, LinAlgError> {
        if self.rows != self.cols {
            return Err(LinAlgError::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let mut m = self.clone();
        let mut det = Scalar::one(&self.field);
        for c in 0..self.cols {
            let Some(p) = (c..self.rows).find(|&i| !m.data[i][c].is_zero()) else {
                return Ok(Scalar::zero(&self.field));
            };
            if p != c {
                m.data.swap(p, c);
                det = -det;
            }
            let pivot = m.data[c][c].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            let pivot_row = m.data[c].clone();
            for i in c + 1..self.rows {
                if m.data[i][c].is_zero() {
                    continue;
                }
                let factor = -(&m.data[i][c] * &inv);
                axpy(&mut m.data[i], &factor, &pivot_row);
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix, LinAlgError> {
        if self.rows != self.cols {
            return Err(LinAlgError::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][n + i] = Scalar::one(&self.field);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinAlgError::Singular);
        }
        let mut inv = Matrix::zeros(&self.field, n, n);
        for i in 0..n {
            inv.data[i] = aug.data[i][n..].to_vec();
        }
        Ok(inv)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A linear subspace of `F^n`, stored by its reduced row echelon basis.
///
/// Two subspaces are equal iff their stored bases are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(field: &FieldRef, ambient_dim: usize, vectors: Vec<Vector>) -> Result<Self, LinAlgError> {
        let m = Matrix::from_rows(field, ambient_dim, vectors)?;
        let (mut r, pivots) = m.rref();
        r.data.truncate(pivots.len());
        r.rows = pivots.len();
        Ok(Subspace { ambient_dim, basis: r, pivots })
    }

    pub fn zero(field: &FieldRef, ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zeros(field, 0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(field: &FieldRef, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(field, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn field(&self) -> &FieldRef {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        self.basis.row_vectors()
    }

    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, n: usize) -> Result<(), LinAlgError> {
        if n != self.ambient_dim {
            return Err(LinAlgError::DimensionMismatch { expected: self.ambient_dim, found: n });
        }
        Ok(())
    }

    /// `v` minus the combination of basis rows that clears every pivot column.
    pub fn reduce(&self, v: &[Scalar]) -> Result<Vector, LinAlgError> {
        self.check(v.len())?;
        let mut out = v.to_vec();
        for (row, &p) in self.basis.row_vectors().iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let c = -&out[p];
            axpy(&mut out, &c, row);
        }
        Ok(out)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool, LinAlgError> {
        Ok(is_zero_vector(&self.reduce(v)?))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool, LinAlgError> {
        self.check(other.ambient_dim)?;
        for b in other.basis() {
            if !self.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coordinates of `v` in the stored basis, or `None` if `v` is not in the subspace.
    pub fn coords(&self, v: &[Scalar]) -> Result<Option<Vector>, LinAlgError> {
        self.check(v.len())?;
        let c: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rem = v.to_vec();
        for (row, x) in self.basis.row_vectors().iter().zip(&c) {
            axpy(&mut rem, &-x, row);
        }
        Ok(is_zero_vector(&rem).then_some(c))
    }

    /// Coordinates of the image of `v` in `F^n / self`, using the standard unit
    /// vectors at the non-pivot columns as complement basis.
    pub fn quotient_coords(&self, v: &[Scalar]) -> Result<Vector, LinAlgError> {
        let r = self.reduce(v)?;
        Ok((0..self.ambient_dim)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| r[c].clone())
            .collect())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check(other.ambient_dim)?;
        let mut vs = self.basis().to_vec();
        vs.extend(other.basis().iter().cloned());
        Subspace::span(self.field(), self.ambient_dim, vs)
    }

    /// Intersection via the Zassenhaus algorithm.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check(other.ambient_dim)?;
        let n = self.ambient_dim;
        let field = self.field().clone();
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for u in self.basis() {
            let mut r = u.clone();
            r.extend(u.iter().cloned());
            rows.push(r);
        }
        for v in other.basis() {
            let mut r = v.clone();
            r.extend(zero_vector(&field, n));
            rows.push(r);
        }
        let m = Matrix::from_rows(&field, 2 * n, rows)?;
        let (r, pivots) = m.rref();
        let vs: Vec<Vector> = pivots
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= n)
            .map(|(i, _)| r.row(i)[n..].to_vec())
            .collect();
        Subspace::span(&field, n, vs)
    }

    /// Image of the subspace under a linear map given as a matrix acting on columns.
    pub fn map(&self, m: &Matrix) -> Result<Subspace, LinAlgError> {
        let imgs = self
            .basis()
            .iter()
            .map(|b| m.mul_vec(b))
            .collect::<Result<Vec<_>, _>>()?;
        Subspace::span(self.field(), m.rows(), imgs)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) ", self.dim(), self.ambient_dim)?;
        self.basis.fmt(f)
    }
}
