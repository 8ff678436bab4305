//! Linear codes in canonical (RREF) generator form and the coordinatewise
//! (Schur) algebra on them.

use thiserror::Error;

use crate::field::{Elem, Field};
use crate::matrix::{Echelon, Matrix, MatrixError};

/// Hard cap on the work of exact minimum-distance computations.
pub const DISTANCE_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("codes of length {0} and {1} cannot be combined")]
    LengthMismatch(usize, usize),
    #[error("codes are over different fields")]
    FieldMismatch,
    #[error("coordinate {index} out of range for length {n}")]
    BadIndex { index: usize, n: usize },
    #[error("vector is not a codeword")]
    NotCodeword,
    #[error("vector has length {got}, expected {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("the zero code has no minimum distance")]
    ZeroCode,
    #[error("exact distance computation exceeds the work budget ({0})")]
    TooLarge(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A linear code of length n over GF(q). The generator is kept in reduced
/// row echelon form, so two codes are equal iff their generators are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    gen: Matrix,
}

impl LinearCode {
    /// The row space of `m`.
    pub fn from_generator(m: &Matrix) -> Self {
        LinearCode {
            gen: m.rref().matrix,
        }
    }

    pub fn from_rows<R: AsRef<[Elem]>>(
        field: &Field,
        n: usize,
        rows: &[R],
    ) -> Result<Self, CodeError> {
        Ok(Self::from_generator(&Matrix::from_rows(field, n, rows)?))
    }

    /// Wraps a matrix that is already in RREF with no zero rows.
    pub(crate) fn from_rref(gen: Matrix) -> Self {
        LinearCode { gen }
    }

    pub fn zero(field: &Field, n: usize) -> Self {
        LinearCode {
            gen: Matrix::zeros(field, 0, n),
        }
    }

    pub fn full(field: &Field, n: usize) -> Self {
        LinearCode {
            gen: Matrix::identity(field, n),
        }
    }

    /// The code spanned by the all-ones word.
    pub fn repetition(field: &Field, n: usize) -> Self {
        LinearCode {
            gen: Matrix::new(field, 1, n, vec![1; n]).expect("shape"),
        }
    }

    pub fn len(&self) -> usize {
        self.gen.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.gen.cols() == 0
    }

    pub fn dimension(&self) -> usize {
        self.gen.rows()
    }

    pub fn field(&self) -> &Field {
        self.gen.field()
    }

    /// Canonical generator matrix.
    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    pub fn basis(&self) -> impl Iterator<Item = &[Elem]> {
        self.gen.row_iter()
    }

    fn compatible(&self, other: &LinearCode) -> Result<(), CodeError> {
        if self.field() != other.field() {
            return Err(CodeError::FieldMismatch);
        }
        if self.len() != other.len() {
            return Err(CodeError::LengthMismatch(self.len(), other.len()));
        }
        Ok(())
    }

    fn check_word(&self, v: &[Elem]) -> Result<(), CodeError> {
        if v.len() != self.len() {
            return Err(CodeError::BadLength {
                got: v.len(),
                expected: self.len(),
            });
        }
        Ok(())
    }

    fn check_positions(&self, pos: &[usize]) -> Result<Vec<usize>, CodeError> {
        let n = self.len();
        if let Some(&index) = pos.iter().find(|&&i| i >= n) {
            return Err(CodeError::BadIndex { index, n });
        }
        let mut p = pos.to_vec();
        p.sort_unstable();
        p.dedup();
        Ok(p)
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode::from_generator(&self.gen.kernel())
    }

    /// A parity-check matrix: the canonical generator of the dual.
    pub fn parity_check(&self) -> Matrix {
        self.dual().gen
    }

    /// Span of all `a * b` over basis vectors `a` of `self`, `b` of `other`.
    pub fn schur_product(&self, other: &LinearCode) -> Result<LinearCode, CodeError> {
        self.compatible(other)?;
        let f = self.field();
        let n = self.len();
        let mut e = Echelon::new(f, n);
        let mut w = vec![0; n];
        'outer: for a in self.basis() {
            for b in other.basis() {
                for ((wi, &ai), &bi) in w.iter_mut().zip(a).zip(b) {
                    *wi = f.mul(ai, bi);
                }
                e.insert(w.clone());
                if e.is_full() {
                    break 'outer;
                }
            }
        }
        Ok(LinearCode::from_rref(e.into_rref().matrix))
    }

    /// `self * self`, from the k(k+1)/2 products `g_i * g_j`, `i <= j`.
    pub fn schur_square(&self) -> LinearCode {
        let f = self.field();
        let n = self.len();
        let k = self.dimension();
        let mut e = Echelon::new(f, n);
        let mut w = vec![0; n];
        'outer: for i in 0..k {
            let a = self.gen.row(i);
            for j in i..k {
                let b = self.gen.row(j);
                for ((wi, &ai), &bi) in w.iter_mut().zip(a).zip(b) {
                    *wi = f.mul(ai, bi);
                }
                e.insert(w.clone());
                if e.is_full() {
                    break 'outer;
                }
            }
        }
        LinearCode::from_rref(e.into_rref().matrix)
    }

    /// Deletes the coordinates in `pos`.
    pub fn puncture(&self, pos: &[usize]) -> Result<LinearCode, CodeError> {
        let pos = self.check_positions(pos)?;
        let keep: Vec<usize> = (0..self.len())
            .filter(|i| pos.binary_search(i).is_err())
            .collect();
        Ok(LinearCode::from_generator(&self.gen.select_columns(&keep)))
    }

    /// The subcode vanishing on `pos`, kept at full length.
    pub fn shorten(&self, pos: &[usize]) -> Result<LinearCode, CodeError> {
        let pos = self.check_positions(pos)?;
        if pos.is_empty() {
            return Ok(self.clone());
        }
        let coeffs = self.gen.select_columns(&pos).transpose().kernel();
        Ok(LinearCode::from_generator(&coeffs.mul(&self.gen)?))
    }

    /// Coordinates where every codeword vanishes.
    pub fn degenerate_positions(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| self.gen.row_iter().all(|r| r[c] == 0))
            .collect()
    }

    pub fn encode(&self, msg: &[Elem]) -> Result<Vec<Elem>, CodeError> {
        if msg.len() != self.dimension() {
            return Err(CodeError::BadLength {
                got: msg.len(),
                expected: self.dimension(),
            });
        }
        Ok(self.gen.vec_mul(msg)?)
    }

    /// Inverse of [`LinearCode::encode`]: reads the message off the pivot
    /// coordinates and checks the re-encoding.
    pub fn unencode(&self, word: &[Elem]) -> Result<Vec<Elem>, CodeError> {
        self.check_word(word)?;
        let msg: Vec<Elem> = (0..self.dimension())
            .map(|i| {
                let p = self
                    .gen
                    .row(i)
                    .iter()
                    .position(|&x| x != 0)
                    .expect("nonzero row");
                word[p]
            })
            .collect();
        if self.gen.vec_mul(&msg)? != word {
            return Err(CodeError::NotCodeword);
        }
        Ok(msg)
    }

    pub fn contains(&self, word: &[Elem]) -> Result<bool, CodeError> {
        self.check_word(word)?;
        Ok(self.unencode(word).is_ok())
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> Result<bool, CodeError> {
        self.compatible(other)?;
        for r in self.basis() {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether every word of `self` is orthogonal to every word of `other`.
    pub fn is_orthogonal_to(&self, other: &LinearCode) -> Result<bool, CodeError> {
        self.compatible(other)?;
        let f = self.field();
        Ok(self
            .basis()
            .all(|a| other.basis().all(|b| f.dot(a, b) == 0)))
    }

    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode, CodeError> {
        self.compatible(other)?;
        Ok(LinearCode::from_rref(self.gen.row_space_sum(&other.gen)?))
    }

    pub fn intersection(&self, other: &LinearCode) -> Result<LinearCode, CodeError> {
        self.compatible(other)?;
        Ok(LinearCode::from_rref(
            self.gen.row_space_intersection(&other.gen)?,
        ))
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> LinearCode {
        LinearCode::from_generator(&self.gen.permute_columns(perm))
    }

    /// Exact minimum distance, by codeword enumeration when `q^k` is small
    /// and otherwise by searching for the smallest set of linearly dependent
    /// columns of a parity-check matrix.
    pub fn minimum_distance(&self) -> Result<usize, CodeError> {
        let k = self.dimension();
        if k == 0 {
            return Err(CodeError::ZeroCode);
        }
        if enumeration_feasible(self.field().order(), k) {
            return Ok(self.enumerate_min_weight());
        }
        let h = self.parity_check();
        let mut budget = DISTANCE_BUDGET;
        match min_dependency(&h, self.len() - k + 1, &mut budget)? {
            Some(d) => Ok(d),
            None => unreachable!("Singleton bound"),
        }
    }

    /// Decides `d(self) > bound` exactly without necessarily computing d.
    pub fn distance_exceeds(&self, bound: usize) -> Result<bool, CodeError> {
        if self.dimension() == 0 {
            return Ok(true);
        }
        if enumeration_feasible(self.field().order(), self.dimension()) {
            return Ok(self.enumerate_min_weight() > bound);
        }
        let h = self.parity_check();
        let mut budget = DISTANCE_BUDGET;
        Ok(min_dependency(&h, bound, &mut budget)?.is_none())
    }

    fn enumerate_min_weight(&self) -> usize {
        // Projective enumeration: the first nonzero coefficient is 1.
        let f = self.field();
        let q = f.order();
        let k = self.dimension();
        let mut best = self.len();
        fn walk(code: &LinearCode, row: usize, acc: &mut Vec<Elem>, q: usize, best: &mut usize) {
            let k = code.dimension();
            if row == k {
                let w = acc.iter().filter(|&&x| x != 0).count();
                if w > 0 && w < *best {
                    *best = w;
                }
                return;
            }
            let f = code.field();
            let g = code.generator().row(row);
            for c in 0..q as Elem {
                f.axpy(acc, c, g);
                walk(code, row + 1, acc, q, best);
                f.axpy(acc, f.neg(c), g);
            }
        }
        for lead in 0..k {
            let mut acc = self.gen.row(lead).to_vec();
            walk(self, lead + 1, &mut acc, q, &mut best);
        }
        best
    }
}

fn enumeration_feasible(q: usize, k: usize) -> bool {
    (q as f64).powi(k as i32) <= DISTANCE_BUDGET as f64
}

/// Size of the smallest linearly dependent set of columns of `h` with at
/// most `max_w` columns, by iterative deepening over independent sets.
fn min_dependency(h: &Matrix, max_w: usize, budget: &mut u64) -> Result<Option<usize>, CodeError> {
    let n = h.cols();
    let cols: Vec<Vec<Elem>> = (0..n)
        .map(|c| h.row_iter().map(|r| r[c]).collect())
        .collect();
    let r = h.rows();
    for w in 1..=max_w.min(n) {
        let base = Echelon::new(h.field(), r);
        if search_dependency(&cols, &base, 0, w, budget)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Is there a dependent set of exactly `w` columns (with indices >= start)
/// extending the independent set spanned by `span`?
fn search_dependency(
    cols: &[Vec<Elem>],
    span: &Echelon,
    start: usize,
    w: usize,
    budget: &mut u64,
) -> Result<bool, CodeError> {
    for c in start..cols.len() {
        if *budget == 0 {
            return Err(CodeError::TooLarge(format!(
                "more than {DISTANCE_BUDGET} column subsets"
            )));
        }
        *budget -= 1;
        if w == 1 {
            if span.contains(&cols[c]) {
                return Ok(true);
            }
            continue;
        }
        if cols.len() - c < w {
            break;
        }
        let mut next = span.clone();
        if !next.insert(cols[c].clone()) {
            // Already dependent on fewer columns; found at a smaller depth.
            continue;
        }
        if search_dependency(cols, &next, c + 1, w - 1, budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}
