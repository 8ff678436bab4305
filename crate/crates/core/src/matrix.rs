//! Dense matrices over GF(q) and the exact elimination routines everything
//! else is built on.

use std::fmt;

use thiserror::Error;

use crate::field::{Elem, Field};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operands are over different fields")]
    FieldMismatch,
    #[error("entry {0} is not a valid field element")]
    BadEntry(u64),
}

/// Row-major dense matrix of field representatives.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Matrix {}x{} over {:?}",
            self.rows, self.cols, self.field
        )?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Result of reduction to reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    /// The nonzero rows of the RREF, in pivot order.
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Rref {
    /// Basis of the right kernel of the reduced matrix.
    pub fn kernel(&self) -> Matrix {
        kernel_from_rref(self, self.matrix.cols)
    }
}

impl Matrix {
    pub fn new(
        field: &Field,
        rows: usize,
        cols: usize,
        data: Vec<Elem>,
    ) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&e| e as usize >= field.order()) {
            return Err(MatrixError::BadEntry(bad as u64));
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from explicit rows, all of length `cols`.
    pub fn from_rows<R: AsRef<[Elem]>>(
        field: &Field,
        cols: usize,
        rows: &[R],
    ) -> Result<Self, MatrixError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(MatrixError::Dimension(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(field, rows.len(), cols, data)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        self.row_iter().map(<[Elem]>::to_vec).collect()
    }

    fn same_field(&self, other: &Matrix) -> Result<(), MatrixError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(MatrixError::FieldMismatch)
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(MatrixError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for (i, &c) in self.row(r).iter().enumerate() {
                self.field.axpy(dst, c, other.row(i));
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, `v * self`.
    pub fn vec_mul(&self, v: &[Elem]) -> Result<Vec<Elem>, MatrixError> {
        if v.len() != self.rows {
            return Err(MatrixError::Dimension(format!(
                "vector of length {} times {}x{}",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![0; self.cols];
        for (i, &c) in v.iter().enumerate() {
            self.field.axpy(&mut out, c, self.row(i));
        }
        Ok(out)
    }

    /// Matrix times column vector, `self * v^T`.
    pub fn mul_vec(&self, v: &[Elem]) -> Result<Vec<Elem>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::Dimension(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(self.row_iter().map(|r| self.field.dot(r, v)).collect())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(MatrixError::Dimension(format!(
                "stacking {} columns on {}",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in self.row_iter() {
            data.extend(cols.iter().map(|&c| r[c]));
        }
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    /// Applies a coordinate permutation: column `j` of the result is column
    /// `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Matrix {
        self.select_columns(perm)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            field: self.field.clone(),
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    /// Reduced row echelon form, computed by incremental insertion into an
    /// [`Echelon`] basis.
    pub fn rref(&self) -> Rref {
        let mut e = Echelon::new(&self.field, self.cols);
        for r in self.row_iter() {
            e.insert(r.to_vec());
            if e.is_full() {
                break;
            }
        }
        e.into_rref()
    }

    /// Textbook Gauss-Jordan elimination. Slow reference for [`Matrix::rref`].
    pub fn rref_reference(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pr) = (rank..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if pr != rank {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, rank * m.cols + c);
                }
            }
            let inv = f.inv(m.get(rank, col)).expect("nonzero pivot");
            f.scale(m.row_mut(rank), inv);
            let pivot_row = m.row(rank).to_vec();
            for r in 0..m.rows {
                if r != rank {
                    let c = m.get(r, col);
                    if c != 0 {
                        f.axpy(m.row_mut(r), f.neg(c), &pivot_row);
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        let matrix = m.select_rows(&(0..rank).collect::<Vec<_>>());
        Rref {
            matrix,
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis (as rows) of the right kernel `{x : self * x^T = 0}`.
    pub fn kernel(&self) -> Matrix {
        kernel_from_rref(&self.rref(), self.cols)
    }

    /// Some `x` with `self * x^T = b^T`, or `None` when the system is
    /// inconsistent.
    pub fn solve(&self, b: &[Elem]) -> Result<Option<Vec<Elem>>, MatrixError> {
        if b.len() != self.rows {
            return Err(MatrixError::Dimension(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.rows
            )));
        }
        let mut e = Echelon::new(&self.field, self.cols + 1);
        for (r, &bi) in self.row_iter().zip(b) {
            let mut v = Vec::with_capacity(self.cols + 1);
            v.extend_from_slice(r);
            v.push(bi);
            e.insert(v);
        }
        let rref = e.into_rref();
        if rref.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (i, &p) in rref.pivots.iter().enumerate() {
            x[p] = rref.matrix.get(i, self.cols);
        }
        Ok(Some(x))
    }

    /// RREF basis of `rowspace(self) + rowspace(other)`.
    pub fn row_space_sum(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        Ok(self.vstack(other)?.rref().matrix)
    }

    /// RREF basis of `rowspace(self) ∩ rowspace(other)`, computed as
    /// `(A^⊥ + B^⊥)^⊥`.
    pub fn row_space_intersection(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(MatrixError::Dimension(format!(
                "intersecting spaces of length {} and {}",
                self.cols, other.cols
            )));
        }
        let duals = self.kernel().vstack(&other.kernel())?;
        Ok(duals.kernel().rref().matrix)
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[Elem]) -> Result<bool, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let rref = self.rref();
        let mut e = Echelon::from_rref(&rref, self.cols);
        let before = e.rank();
        e.insert(v.to_vec());
        Ok(e.rank() == before)
    }
}

fn kernel_from_rref(rref: &Rref, cols: usize) -> Matrix {
    let field = rref.matrix.field();
    let mut is_pivot = vec![false; cols];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut out = Matrix::zeros(field, free.len(), cols);
    for (k, &fc) in free.iter().enumerate() {
        let row = out.row_mut(k);
        row[fc] = 1;
        for (i, &p) in rref.pivots.iter().enumerate() {
            row[p] = field.neg(rref.matrix.get(i, fc));
        }
    }
    out
}

/// A fully reduced row basis that grows one vector at a time.
///
/// Every stored row has a 1 at its pivot and 0 at every other stored pivot,
/// so reducing a vector is a single pass over the rows.
#[derive(Clone)]
pub struct Echelon {
    field: Field,
    cols: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &Field, cols: usize) -> Self {
        Echelon {
            field: field.clone(),
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Starts from an already reduced basis.
    pub fn from_rref(rref: &Rref, cols: usize) -> Self {
        Echelon {
            field: rref.matrix.field().clone(),
            cols,
            rows: rref.matrix.to_rows(),
            pivots: rref.pivots.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Reduces `v` in place against the basis.
    pub fn reduce(&self, v: &mut [Elem]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                self.field.axpy(v, self.field.neg(c), row);
            }
        }
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[p]).expect("nonzero");
        self.field.scale(&mut v, inv);
        for row in &mut self.rows {
            let c = row[p];
            if c != 0 {
                self.field.axpy(row, self.field.neg(c), &v);
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn into_rref(self) -> Rref {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        let mut data = Vec::with_capacity(order.len() * self.cols);
        for &i in &order {
            data.extend_from_slice(&self.rows[i]);
        }
        let rank = order.len();
        Rref {
            matrix: Matrix {
                field: self.field,
                rows: rank,
                cols: self.cols,
                data,
            },
            rank,
            pivots,
        }
    }
}
