//! One-point AG codes C_L(mP∞ - Σ s_i Q_i) by evaluation of monomial bases.

use thiserror::Error;

use crate::code::{CodeError, LinearCode};
use crate::curve::{CurveError, Monomial, OnePointCurve};
use crate::field::Elem;
use crate::matrix::{Matrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("evaluation rank {rank} below basis size {expected} for m = {m}")]
    RankDeficient {
        m: usize,
        rank: usize,
        expected: usize,
    },
    #[error("L(F - D) has dimension {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

/// Rows are the monomials of `basis` evaluated at every point.
pub fn evaluation_matrix(curve: &OnePointCurve, basis: &[Monomial]) -> Matrix {
    let n = curve.len();
    let mut data = Vec::with_capacity(basis.len() * n);
    for mono in basis {
        data.extend((0..n).map(|i| curve.evaluate(mono, i)));
    }
    Matrix::new(curve.field(), basis.len(), n, data).expect("sized by construction")
}

/// C_L(mP∞). For `m < n` the evaluation map is injective and its rank is
/// checked against the basis size.
pub fn ag_code(curve: &OnePointCurve, m: usize) -> Result<LinearCode, AgError> {
    let basis = curve.verified_pole_basis(m)?;
    let ev = evaluation_matrix(curve, &basis);
    let code = LinearCode::from_generator(&ev);
    if m < curve.len() && code.dimension() != basis.len() {
        return Err(AgError::RankDeficient {
            m,
            rank: code.dimension(),
            expected: basis.len(),
        });
    }
    Ok(code)
}

/// The public code C_L(mP∞)^⊥. Requires `n > m > 2g - 2`.
pub fn public_code(curve: &OnePointCurve, m: usize) -> Result<LinearCode, AgError> {
    check_range(curve, m)?;
    Ok(ag_code(curve, m)?.dual())
}

fn check_range(curve: &OnePointCurve, m: usize) -> Result<(), AgError> {
    let (n, g) = (curve.len(), curve.genus());
    if !(m < n && m + 2 > 2 * g) {
        return Err(AgError::Parameter(format!(
            "need n > m > 2g - 2, got n = {n}, m = {m}, g = {g}"
        )));
    }
    Ok(())
}

/// C_L(mP∞ - Σ s_i Q_i) for `shifts = [(i, s_i), ...]`, computed from the
/// power-series expansions of the basis of L(mP∞) at each Q_i.
pub fn ag_code_shifted(
    curve: &OnePointCurve,
    m: usize,
    shifts: &[(usize, usize)],
) -> Result<LinearCode, AgError> {
    let basis = curve.verified_pole_basis(m)?;
    let field = curve.field();
    let k = basis.len();
    let mut constraints: Vec<Vec<Elem>> = Vec::new();
    let mut total = 0;
    for &(point, s) in shifts {
        if s == 0 {
            continue;
        }
        total += s;
        let ex = curve.monomial_expansions(&basis, point, s)?;
        for order in 0..s {
            constraints.push(ex.iter().map(|series| series[order]).collect());
        }
    }
    let coeffs = if constraints.is_empty() {
        Matrix::identity(field, k)
    } else {
        Matrix::from_rows(field, k, &constraints)?.kernel()
    };
    if m + 2 > 2 * curve.genus() + total {
        let expected = m + 1 - total - curve.genus();
        if coeffs.rows() != expected {
            return Err(AgError::DimensionMismatch {
                got: coeffs.rows(),
                expected,
            });
        }
    }
    let ev = evaluation_matrix(curve, &basis);
    let gen = coeffs.mul(&ev)?;
    Ok(LinearCode::from_generator(&gen))
}

/// The filtration code C_L(mP∞ - sQ_p) at full length.
pub fn oracle_filtration(
    curve: &OnePointCurve,
    m: usize,
    p_index: usize,
    s: usize,
) -> Result<LinearCode, AgError> {
    if p_index >= curve.len() {
        return Err(AgError::Parameter(format!(
            "point index {p_index} out of range"
        )));
    }
    ag_code_shifted(curve, m, &[(p_index, s)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm(r: u32) -> OnePointCurve {
        OnePointCurve::hermitian(r).unwrap()
    }

    #[test]
    fn dimensions() {
        let c = herm(3);
        assert_eq!(ag_code(&c, 13).unwrap().dimension(), 11);
        assert_eq!(public_code(&c, 13).unwrap().dimension(), 16);
        // m = 2g - 1.
        assert_eq!(ag_code(&c, 5).unwrap().dimension(), 3);
        assert!(public_code(&c, 27).is_err());
        assert!(public_code(&c, 3).is_err());
    }

    #[test]
    fn hermitian_table_dimensions() {
        let c = herm(7);
        assert_eq!(ag_code(&c, 170).unwrap().dimension(), 150);
        assert_eq!(public_code(&c, 170).unwrap().dimension(), 193);
    }

    #[test]
    fn suzuki_code_dimensions() {
        let c = OnePointCurve::suzuki(2).unwrap();
        for m in 27..64 {
            assert_eq!(ag_code(&c, m).unwrap().dimension(), m - 13);
        }
    }

    #[test]
    fn minimum_distance_bound_r2() {
        let c = herm(2);
        for m in 1..8 {
            let code = ag_code(&c, m).unwrap();
            assert!(code.minimum_distance().unwrap() >= 8 - m);
        }
    }

    #[test]
    fn filtration_oracle() {
        let c = herm(3);
        let b0 = ag_code(&c, 13).unwrap();
        assert_eq!(oracle_filtration(&c, 13, 0, 0).unwrap(), b0);
        let b1 = oracle_filtration(&c, 13, 0, 1).unwrap();
        assert_eq!(b1, b0.shorten(&[0]).unwrap());
        let mut prev = b0;
        for s in 1..=6 {
            let bs = oracle_filtration(&c, 13, 0, s).unwrap();
            assert_eq!(bs.dimension(), 13 - s - 3 + 1);
            assert!(bs.is_subcode_of(&prev).unwrap());
            prev = bs;
        }
    }

    #[test]
    fn filtration_matches_shortening_at_other_points() {
        let c = herm(3);
        let b0 = ag_code(&c, 13).unwrap();
        for p in [3, 11, 26] {
            let b1 = oracle_filtration(&c, 13, p, 1).unwrap();
            assert_eq!(b1, b0.shorten(&[p]).unwrap());
        }
    }

    #[test]
    fn multi_point_shift() {
        let c = herm(3);
        let code = ag_code_shifted(&c, 13, &[(0, 2), (5, 1)]).unwrap();
        assert_eq!(code.dimension(), 13 - 3 - 3 + 1);
        let direct = ag_code(&c, 13).unwrap().shorten(&[0, 5]).unwrap();
        assert!(code.is_subcode_of(&direct).unwrap());
    }

    #[test]
    fn suzuki_filtration() {
        let c = OnePointCurve::suzuki(2).unwrap();
        for s in 0..6 {
            let b = oracle_filtration(&c, 50, 7, s).unwrap();
            assert_eq!(b.dimension(), 50 - s - 14 + 1);
        }
    }
}
