//! One-point curves: rational points, a monomial basis of L(mP∞) with known
//! pole orders, and local power-series expansions at the affine points.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{prime_power, Elem, Field, FieldDescriptor, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("invalid curve parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("point {0:?} does not satisfy the curve equation")]
    NotOnCurve(Vec<Elem>),
    #[error("duplicate point {0:?}")]
    DuplicatePoint(Vec<Elem>),
    #[error("monomial basis for m = {m} has {got} functions, expected {expected}")]
    BasisMismatch {
        m: usize,
        got: usize,
        expected: usize,
    },
    #[error("local expansions are not available for custom curves")]
    NoExpansions,
    #[error("point index {0} out of range")]
    BadPoint(usize),
}

/// A product of the curve's generator functions, `prod g_i^{e_i}`, with its
/// pole order at P∞.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub pole: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveKind {
    /// `y^r + y = x^(r+1)` over GF(r^2).
    Hermitian { r: u32 },
    /// `y^q - y = x^q0 (x^q - x)` over GF(q), `q = 2 q0^2`.
    Suzuki { q0: u32 },
    /// Explicit points and monomials.
    Custom,
}

/// Serialized curve description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveDescriptor {
    Hermitian {
        r: u32,
        field: FieldDescriptor,
        point_order: String,
    },
    Suzuki {
        q0: u32,
        field: FieldDescriptor,
        point_order: String,
    },
    Custom {
        field: FieldDescriptor,
        genus: usize,
        /// Values of the generator functions at each point.
        points: Vec<Vec<u32>>,
        monomials: Vec<Monomial>,
    },
}

const LEX: &str = "lex";

#[derive(Debug, Clone)]
pub struct OnePointCurve {
    field: Field,
    kind: CurveKind,
    genus: usize,
    /// Affine coordinates, sorted lexicographically by representative.
    points: Vec<Vec<Elem>>,
    /// Values of the generator functions at each point.
    values: Vec<Vec<Elem>>,
    gen_poles: Vec<u32>,
    monomials: Vec<Monomial>,
}

impl OnePointCurve {
    /// Hermitian curve over GF(r^2) with the canonical field modulus.
    pub fn hermitian(r: u32) -> Result<Self, CurveError> {
        if r < 2 || prime_power(r as u64).is_none() || (r as u64).pow(2) > crate::field::MAX_ORDER {
            return Err(CurveError::BadParameter(format!(
                "Hermitian r = {r} must be a prime power with r^2 <= 65536"
            )));
        }
        Self::hermitian_over(&Field::gf((r as u64).pow(2))?, r)
    }

    pub fn hermitian_over(field: &Field, r: u32) -> Result<Self, CurveError> {
        if r < 2 || field.order() as u64 != (r as u64).pow(2) || prime_power(r as u64).is_none() {
            return Err(CurveError::BadParameter(format!(
                "Hermitian r = {r} needs GF(r^2), got GF({})",
                field.order()
            )));
        }
        let f = field.clone();
        // Bucket y by the value of y^r + y, then read off the solutions.
        let mut by_trace: Vec<Vec<Elem>> = vec![Vec::new(); f.order()];
        for y in f.elements() {
            let t = f.add(f.pow(y, r as i64)?, y);
            by_trace[t as usize].push(y);
        }
        let mut points = Vec::new();
        for x in f.elements() {
            let rhs = f.pow(x, r as i64 + 1)?;
            for &y in &by_trace[rhs as usize] {
                points.push(vec![x, y]);
            }
        }
        let values = points.clone();
        let genus = (r * (r - 1) / 2) as usize;
        Ok(OnePointCurve {
            field: f,
            kind: CurveKind::Hermitian { r },
            genus,
            points,
            values,
            gen_poles: vec![r, r + 1],
            monomials: Vec::new(),
        })
    }

    /// Suzuki curve over GF(2 q0^2) with the canonical field modulus.
    pub fn suzuki(q0: u32) -> Result<Self, CurveError> {
        if q0 < 2 || !q0.is_power_of_two() || 2 * (q0 as u64).pow(2) > crate::field::MAX_ORDER {
            return Err(CurveError::BadParameter(format!(
                "Suzuki q0 = {q0} must be a power of two >= 2 with 2 q0^2 <= 65536"
            )));
        }
        Self::suzuki_over(&Field::gf(2 * (q0 as u64).pow(2))?, q0)
    }

    pub fn suzuki_over(field: &Field, q0: u32) -> Result<Self, CurveError> {
        let q = 2 * q0 as usize * q0 as usize;
        if q0 < 2 || !q0.is_power_of_two() || field.order() != q {
            return Err(CurveError::BadParameter(format!(
                "Suzuki q0 = {q0} needs GF({q}), got GF({})",
                field.order()
            )));
        }
        let f = field.clone();
        let mut points = Vec::with_capacity(q * q);
        let mut values = Vec::with_capacity(q * q);
        let (q0i, qi) = (q0 as i64, q as i64);
        for x in f.elements() {
            let rhs = f.mul(f.pow(x, q0i)?, f.sub(f.pow(x, qi)?, x));
            for y in f.elements() {
                if f.sub(f.pow(y, qi)?, y) != rhs {
                    return Err(CurveError::NotOnCurve(vec![x, y]));
                }
                let y2q0 = f.pow(y, 2 * q0i)?;
                let z = f.sub(f.pow(x, 2 * q0i + 1)?, y2q0);
                let w = f.sub(f.mul(x, y2q0), f.pow(z, 2 * q0i)?);
                points.push(vec![x, y]);
                values.push(vec![x, y, z, w]);
            }
        }
        let qq = q as u32;
        Ok(OnePointCurve {
            field: f,
            kind: CurveKind::Suzuki { q0 },
            genus: q0 as usize * (q - 1),
            points,
            values,
            gen_poles: vec![qq, qq + q0, qq + 2 * q0, qq + 2 * q0 + 1],
            monomials: Vec::new(),
        })
    }

    /// A curve given by explicit generator values at each point and an
    /// explicit monomial list with pairwise distinct pole orders.
    pub fn custom(
        field: &Field,
        genus: usize,
        points: Vec<Vec<Elem>>,
        mut monomials: Vec<Monomial>,
    ) -> Result<Self, CurveError> {
        let arity = points.first().map_or(0, Vec::len);
        let mut seen = std::collections::HashSet::new();
        for p in &points {
            if p.len() != arity || p.iter().any(|&c| c as usize >= field.order()) {
                return Err(CurveError::BadParameter(format!("malformed point {p:?}")));
            }
            if !seen.insert(p.clone()) {
                return Err(CurveError::DuplicatePoint(p.clone()));
            }
        }
        monomials.sort_by_key(|m| m.pole);
        if monomials.windows(2).any(|w| w[0].pole == w[1].pole) {
            return Err(CurveError::BadParameter(
                "monomial pole orders must be distinct".into(),
            ));
        }
        if monomials.iter().any(|m| m.exponents.len() != arity) {
            return Err(CurveError::BadParameter(
                "monomial arity differs from point arity".into(),
            ));
        }
        Ok(OnePointCurve {
            field: field.clone(),
            kind: CurveKind::Custom,
            genus,
            values: points.clone(),
            points,
            gen_poles: Vec::new(),
            monomials,
        })
    }

    pub fn from_descriptor(d: &CurveDescriptor) -> Result<Self, CurveError> {
        match d {
            CurveDescriptor::Hermitian {
                r,
                field,
                point_order,
            } => {
                check_order(point_order)?;
                Self::hermitian_over(&Field::from_descriptor(field)?, *r)
            }
            CurveDescriptor::Suzuki {
                q0,
                field,
                point_order,
            } => {
                check_order(point_order)?;
                Self::suzuki_over(&Field::from_descriptor(field)?, *q0)
            }
            CurveDescriptor::Custom {
                field,
                genus,
                points,
                monomials,
            } => {
                let f = Field::from_descriptor(field)?;
                let pts = points
                    .iter()
                    .map(|p| {
                        p.iter()
                            .map(|&c| f.check(c as u64))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Self::custom(&f, *genus, pts, monomials.clone())
            }
        }
    }

    pub fn descriptor(&self) -> CurveDescriptor {
        let field = self.field.descriptor();
        match self.kind {
            CurveKind::Hermitian { r } => CurveDescriptor::Hermitian {
                r,
                field,
                point_order: LEX.into(),
            },
            CurveKind::Suzuki { q0 } => CurveDescriptor::Suzuki {
                q0,
                field,
                point_order: LEX.into(),
            },
            CurveKind::Custom => CurveDescriptor::Custom {
                field,
                genus: self.genus,
                points: self
                    .values
                    .iter()
                    .map(|p| p.iter().map(|&c| c as u32).collect())
                    .collect(),
                monomials: self.monomials.clone(),
            },
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Number of affine rational points, the code length n.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Elem>] {
        &self.points
    }

    /// Pole orders at P∞ of the generator functions.
    pub fn generator_poles(&self) -> &[u32] {
        &self.gen_poles
    }

    /// A basis of L(mP∞) as monomials with pairwise distinct pole orders,
    /// sorted by pole order.
    pub fn pole_basis(&self, m: usize) -> Vec<Monomial> {
        match self.kind {
            CurveKind::Hermitian { r } => {
                let mut out = Vec::new();
                for j in 0..r {
                    let mut i = 0;
                    while (i * r + j * (r + 1)) as usize <= m {
                        out.push(Monomial {
                            exponents: vec![i, j],
                            pole: i * r + j * (r + 1),
                        });
                        i += 1;
                    }
                }
                out.sort_by_key(|mo| mo.pole);
                out
            }
            CurveKind::Suzuki { .. } => {
                // One monomial x^a y^b z^c w^d per pole order, taking the
                // lexicographically smallest (d, c, b) that works.
                let g = &self.gen_poles;
                (0..=m as u32)
                    .filter_map(|rho| {
                        for d in 0..=rho / g[3] {
                            let r3 = rho - d * g[3];
                            for c in 0..=r3 / g[2] {
                                let r2 = r3 - c * g[2];
                                for b in 0..=r2 / g[1] {
                                    let r1 = r2 - b * g[1];
                                    if r1.is_multiple_of(g[0]) {
                                        return Some(Monomial {
                                            exponents: vec![r1 / g[0], b, c, d],
                                            pole: rho,
                                        });
                                    }
                                }
                            }
                        }
                        None
                    })
                    .collect()
            }
            CurveKind::Custom => self
                .monomials
                .iter()
                .filter(|mo| mo.pole as usize <= m)
                .cloned()
                .collect(),
        }
    }

    /// The basis for `m`, checked against the Riemann-Roch dimension
    /// `m - g + 1` whenever `m > 2g - 2`.
    pub fn verified_pole_basis(&self, m: usize) -> Result<Vec<Monomial>, CurveError> {
        let basis = self.pole_basis(m);
        if m + 2 > 2 * self.genus {
            let expected = m + 1 - self.genus;
            if basis.len() != expected {
                return Err(CurveError::BasisMismatch {
                    m,
                    got: basis.len(),
                    expected,
                });
            }
        }
        Ok(basis)
    }

    /// Value of a monomial at point `i`.
    pub fn evaluate(&self, mono: &Monomial, i: usize) -> Elem {
        let f = &self.field;
        let n = (f.order() - 1) as u64;
        let mut log = 0u64;
        for (&v, &e) in self.values[i].iter().zip(&mono.exponents) {
            if e == 0 {
                continue;
            }
            if v == 0 {
                return 0;
            }
            log = (log + f.log(v) as u64 * e as u64) % n;
        }
        f.exp(log)
    }

    /// Power-series expansions of the generator functions at point `i` in
    /// the local parameter `t = x - x(P)`, truncated mod `t^precision`.
    pub fn local_expansion(
        &self,
        i: usize,
        precision: usize,
    ) -> Result<Vec<Vec<Elem>>, CurveError> {
        if i >= self.len() {
            return Err(CurveError::BadPoint(i));
        }
        if self.kind == CurveKind::Custom {
            return Err(CurveError::NoExpansions);
        }
        let f = &self.field;
        let s = Series { f, prec: precision };
        let (a, b) = (self.points[i][0], self.points[i][1]);
        let x = s.linear(a);
        match self.kind {
            CurveKind::Hermitian { r } => {
                // Y^r + Y = (a + t)^(r+1) - a^(r+1) with Y = y - b.
                let mut rhs = s.pow(&x, r as u64 + 1);
                rhs[0] = f.sub(rhs[0], f.pow(a, r as i64 + 1)?);
                let mut big_y = s.zero();
                for _ in 0..=precision {
                    big_y = s.sub(&rhs, &s.pow(&big_y, r as u64));
                }
                let mut y = big_y;
                if precision > 0 {
                    y[0] = f.add(y[0], b);
                }
                Ok(vec![x, y])
            }
            CurveKind::Suzuki { q0 } => {
                let q = 2 * q0 as u64 * q0 as u64;
                // Y^q - Y = R(t); the constant term of R vanishes on GF(q).
                let rhs = s.mul(&s.pow(&x, q0 as u64), &s.sub(&s.pow(&x, q), &x));
                let mut big_y = s.zero();
                for _ in 0..=precision {
                    big_y = s.sub(&s.pow(&big_y, q), &rhs);
                }
                let mut y = big_y;
                if precision > 0 {
                    y[0] = f.add(y[0], b);
                }
                let y2q0 = s.pow(&y, 2 * q0 as u64);
                let z = s.sub(&s.pow(&x, 2 * q0 as u64 + 1), &y2q0);
                let w = s.sub(&s.mul(&x, &y2q0), &s.pow(&z, 2 * q0 as u64));
                Ok(vec![x, y, z, w])
            }
            CurveKind::Custom => Err(CurveError::NoExpansions),
        }
    }

    /// Expansions of each monomial at point `i`, truncated mod `t^precision`.
    pub fn monomial_expansions(
        &self,
        basis: &[Monomial],
        i: usize,
        precision: usize,
    ) -> Result<Vec<Vec<Elem>>, CurveError> {
        let gens = self.local_expansion(i, precision)?;
        let s = Series {
            f: &self.field,
            prec: precision,
        };
        let mut powers: Vec<Vec<Vec<Elem>>> = gens.iter().map(|_| vec![s.one()]).collect();
        let mut out = Vec::with_capacity(basis.len());
        for mono in basis {
            let mut acc = s.one();
            for (g, &e) in mono.exponents.iter().enumerate() {
                while powers[g].len() <= e as usize {
                    let next = s.mul(powers[g].last().expect("nonempty"), &gens[g]);
                    powers[g].push(next);
                }
                acc = s.mul(&acc, &powers[g][e as usize]);
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Brute-force check that every stored point lies on the curve.
    pub fn verify_points(&self) -> Result<(), CurveError> {
        let f = &self.field;
        for p in &self.points {
            let ok = match self.kind {
                CurveKind::Hermitian { r } => {
                    f.add(f.pow(p[1], r as i64)?, p[1]) == f.pow(p[0], r as i64 + 1)?
                }
                CurveKind::Suzuki { q0 } => {
                    let q = 2 * q0 as i64 * q0 as i64;
                    f.sub(f.pow(p[1], q)?, p[1])
                        == f.mul(f.pow(p[0], q0 as i64)?, f.sub(f.pow(p[0], q)?, p[0]))
                }
                CurveKind::Custom => true,
            };
            if !ok {
                return Err(CurveError::NotOnCurve(p.clone()));
            }
        }
        Ok(())
    }
}

fn check_order(order: &str) -> Result<(), CurveError> {
    if order == LEX {
        Ok(())
    } else {
        Err(CurveError::BadParameter(format!(
            "unknown point order {order:?}"
        )))
    }
}

/// Truncated power series over a field.
struct Series<'a> {
    f: &'a Field,
    prec: usize,
}

impl Series<'_> {
    fn zero(&self) -> Vec<Elem> {
        vec![0; self.prec]
    }

    fn one(&self) -> Vec<Elem> {
        let mut v = self.zero();
        if self.prec > 0 {
            v[0] = 1;
        }
        v
    }

    /// `a + t`.
    fn linear(&self, a: Elem) -> Vec<Elem> {
        let mut v = self.zero();
        if self.prec > 0 {
            v[0] = a;
        }
        if self.prec > 1 {
            v[1] = 1;
        }
        v
    }

    fn sub(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| self.f.sub(x, y)).collect()
    }

    fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let mut out = self.zero();
        for (i, &ai) in a.iter().enumerate() {
            if ai != 0 {
                self.f.axpy(&mut out[i..], ai, &b[..self.prec - i]);
            }
        }
        out
    }

    fn pow(&self, a: &[Elem], mut e: u64) -> Vec<Elem> {
        let mut result = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }
}

/// Gaps of the numerical semigroup generated by `gens` (which must have
/// gcd 1).
pub fn semigroup_gaps(gens: &[u32]) -> Vec<u32> {
    let bound = gens.iter().max().copied().unwrap_or(1) as usize;
    let limit = bound * bound + 1;
    let mut reach = vec![false; limit + 1];
    reach[0] = true;
    for v in 1..=limit {
        reach[v] = gens
            .iter()
            .any(|&g| v >= g as usize && reach[v - g as usize]);
    }
    (1..=limit as u32).filter(|&v| !reach[v as usize]).collect()
}
