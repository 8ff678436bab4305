//! Error-correcting pairs: verification of the four pair conditions and the
//! kernel/erasure decoder.

use serde::Serialize;
use thiserror::Error;

use crate::code::{CodeError, LinearCode};
use crate::field::Elem;
use crate::matrix::{Matrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EcpError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("codes in the pair have inconsistent lengths or fields")]
    Inconsistent,
    #[error("the pair cannot locate the errors (M(y) = 0)")]
    NoLocator,
    #[error("no locator gives a unique consistent erasure solution")]
    Erasure,
    #[error("decoded error has weight {weight} > t = {t}")]
    WeightOverflow { weight: usize, t: usize },
}

/// Codes (A, B) meant to correct `t` errors in `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcpPair {
    pub a: LinearCode,
    pub b: LinearCode,
    pub c: LinearCode,
    pub t: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Compute true minimum distances (subject to the work budget).
    Exact,
    /// Use the given lower bounds for d(A), d(B^⊥) and d(C).
    Designed {
        d_a: usize,
        d_b_perp: usize,
        d_c: usize,
    },
}

/// Outcome of each pair condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EcpReport {
    /// (A * B) ⊥ C.
    pub e1: bool,
    /// k(A) > t.
    pub e2: bool,
    /// d(B^⊥) > t.
    pub e3: bool,
    /// d(A) + d(C) > n.
    pub e4: bool,
}

impl EcpReport {
    pub fn all(&self) -> bool {
        self.e1 && self.e2 && self.e3 && self.e4
    }
}

impl EcpPair {
    pub fn new(a: LinearCode, b: LinearCode, c: LinearCode, t: usize) -> Result<Self, EcpError> {
        let n = c.len();
        if a.len() != n || b.len() != n || a.field() != c.field() || b.field() != c.field() {
            return Err(EcpError::Inconsistent);
        }
        Ok(EcpPair { a, b, c, t })
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn verify(&self, mode: VerifyMode) -> Result<EcpReport, EcpError> {
        let n = self.len();
        let e1 = self.a.schur_product(&self.b)?.is_orthogonal_to(&self.c)?;
        let e2 = self.a.dimension() > self.t;
        let (e3, e4) = match mode {
            VerifyMode::Designed { d_a, d_b_perp, d_c } => (d_b_perp > self.t, d_a + d_c > n),
            VerifyMode::Exact => {
                let e3 = self.b.dual().distance_exceeds(self.t)?;
                // Compute the distance of the smaller code, then certify the
                // other against the remaining margin.
                let (small, large) = if self.a.dimension() <= self.c.dimension() {
                    (&self.a, &self.c)
                } else {
                    (&self.c, &self.a)
                };
                let e4 = match small.dimension() {
                    0 => true,
                    _ => {
                        let d = small.minimum_distance()?;
                        d > n || large.distance_exceeds(n - d)?
                    }
                };
                (e3, e4)
            }
        };
        Ok(EcpReport { e1, e2, e3, e4 })
    }

    /// Basis of M(y) = {a ∈ A : (a * y) · b = 0 for all b ∈ B}.
    pub fn locator_space(&self, y: &[Elem]) -> Result<LinearCode, EcpError> {
        let f = self.c.field();
        let n = self.len();
        if y.len() != n {
            return Err(CodeError::BadLength {
                got: y.len(),
                expected: n,
            }
            .into());
        }
        let ay: Vec<Vec<Elem>> = self
            .a
            .basis()
            .map(|a| a.iter().zip(y).map(|(&ai, &yi)| f.mul(ai, yi)).collect())
            .collect();
        let k = ay.len();
        let mut rows = Vec::with_capacity(self.b.dimension());
        for b in self.b.basis() {
            rows.push(ay.iter().map(|v| f.dot(v, b)).collect::<Vec<_>>());
        }
        let coeffs = if rows.is_empty() {
            Matrix::identity(f, k)
        } else {
            Matrix::from_rows(f, k, &rows)?.kernel()
        };
        Ok(LinearCode::from_generator(&coeffs.mul(self.a.generator())?))
    }

    /// Returns `(c, e)` with `y = c + e`, `c ∈ C` and `wt(e) <= t`.
    pub fn decode(&self, y: &[Elem]) -> Result<(Vec<Elem>, Vec<Elem>), EcpError> {
        let f = self.c.field();
        let n = self.len();
        if self.c.contains(y)? {
            return Ok((y.to_vec(), vec![0; n]));
        }
        let h = self.c.parity_check();
        let syndrome = h.mul_vec(y)?;
        let m = self.locator_space(y)?;
        if m.dimension() == 0 {
            return Err(EcpError::NoLocator);
        }
        for a in m.basis() {
            let support: Vec<usize> = (0..n).filter(|&i| a[i] == 0).collect();
            let hj = h.select_columns(&support);
            if hj.rank() != support.len() {
                continue;
            }
            let Some(ej) = hj.solve(&syndrome)? else {
                continue;
            };
            let mut e = vec![0; n];
            for (&i, &v) in support.iter().zip(&ej) {
                e[i] = v;
            }
            let weight = e.iter().filter(|&&v| v != 0).count();
            if weight > self.t {
                return Err(EcpError::WeightOverflow { weight, t: self.t });
            }
            let c: Vec<Elem> = y.iter().zip(&e).map(|(&yi, &ei)| f.sub(yi, ei)).collect();
            assert!(self.c.contains(&c)?, "erasure solution left the code");
            return Ok((c, e));
        }
        Err(EcpError::Erasure)
    }
}
