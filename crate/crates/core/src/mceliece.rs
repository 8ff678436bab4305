//! McEliece over the dual of a one-point AG code.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::agcode::{ag_code, public_code, AgError};
use crate::code::{CodeError, LinearCode};
use crate::curve::OnePointCurve;
use crate::ecp::{EcpError, EcpPair};
use crate::field::{Elem, Field};
use crate::matrix::{Matrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("invalid scheme parameters: {0}")]
    Parameter(String),
    #[error(transparent)]
    Ag(#[from] AgError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("decoding failed: {0}")]
    Decode(#[from] EcpError),
    #[error("vector has length {got}, expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("decoded word is not in the public code")]
    NotCodeword,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub g_pub: Matrix,
    pub t: usize,
}

impl PublicKey {
    pub fn field(&self) -> &Field {
        self.g_pub.field()
    }

    pub fn len(&self) -> usize {
        self.g_pub.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.g_pub.cols() == 0
    }

    /// Message length.
    pub fn dimension(&self) -> usize {
        self.g_pub.rows()
    }

    /// The code spanned by the public generator.
    pub fn code(&self) -> LinearCode {
        LinearCode::from_generator(&self.g_pub)
    }

    /// Solves `msg * G_pub = c`.
    pub fn unencode(&self, c: &[Elem]) -> Result<Vec<Elem>, SchemeError> {
        self.check_len(c)?;
        self.g_pub
            .transpose()
            .solve(c)?
            .ok_or(SchemeError::NotCodeword)
    }

    fn check_len(&self, v: &[Elem]) -> Result<(), SchemeError> {
        if v.len() != self.len() {
            return Err(SchemeError::Length {
                got: v.len(),
                expected: self.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SecretKey {
    pub curve: OnePointCurve,
    pub m: usize,
    /// Invertible k x k scrambler.
    pub s: Matrix,
    /// Column `j` of `G_pub` is column `perm[j]` of `S * G_can`.
    pub perm: Vec<usize>,
    pub seed: u64,
}

impl SecretKey {
    pub fn t(&self) -> usize {
        error_budget(self.m, self.curve.genus())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub y: Vec<Elem>,
}

/// `t = ⌊(d* - g - 1)/2⌋` with `d* = m - 2g + 2`, clamped at zero.
pub fn error_budget(m: usize, g: usize) -> usize {
    (m + 1).saturating_sub(3 * g) / 2
}

/// Checks `n > m` and `t > 0`.
pub fn check_scheme_params(n: usize, g: usize, m: usize) -> Result<usize, SchemeError> {
    if m >= n {
        return Err(SchemeError::Parameter(format!(
            "need m < n, got m = {m}, n = {n}"
        )));
    }
    let t = error_budget(m, g);
    if t == 0 {
        return Err(SchemeError::Parameter(format!(
            "m = {m} gives t = 0 for g = {g}; need m >= 3g + 1 = {}",
            3 * g + 1
        )));
    }
    Ok(t)
}

pub fn random_invertible(field: &Field, k: usize, rng: &mut impl Rng) -> Matrix {
    let q = field.order();
    loop {
        let data = (0..k * k).map(|_| rng.gen_range(0..q) as Elem).collect();
        let m = Matrix::new(field, k, k, data).expect("sized");
        if m.rank() == k {
            return m;
        }
    }
}

pub fn keygen(
    curve: &OnePointCurve,
    m: usize,
    seed: u64,
    permute: bool,
) -> Result<(PublicKey, SecretKey), SchemeError> {
    let n = curve.len();
    let t = check_scheme_params(n, curve.genus(), m)?;
    let g_can = public_code(curve, m)?;
    let field = curve.field();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let s = random_invertible(field, g_can.dimension(), &mut rng);
    let mut perm: Vec<usize> = (0..n).collect();
    if permute {
        perm.shuffle(&mut rng);
    }
    let g_pub = s.mul(g_can.generator())?.permute_columns(&perm);
    let pk = PublicKey { g_pub, t };
    let sk = SecretKey {
        curve: curve.clone(),
        m,
        s,
        perm,
        seed,
    };
    Ok((pk, sk))
}

/// Error vector of exactly `weight` nonzero entries.
pub fn random_error(field: &Field, n: usize, weight: usize, rng: &mut impl Rng) -> Vec<Elem> {
    let q = field.order();
    let mut e = vec![0; n];
    for p in rand::seq::index::sample(rng, n, weight) {
        e[p] = rng.gen_range(1..q) as Elem;
    }
    e
}

/// `y = msg * G_pub + e` with `wt(e) = weight` (default `t`).
pub fn encrypt(
    pk: &PublicKey,
    msg: &[Elem],
    seed: u64,
    weight: Option<usize>,
) -> Result<Ciphertext, SchemeError> {
    if msg.len() != pk.dimension() {
        return Err(SchemeError::Length {
            got: msg.len(),
            expected: pk.dimension(),
        });
    }
    let w = weight.unwrap_or(pk.t);
    if w > pk.len() {
        return Err(SchemeError::Parameter(format!(
            "error weight {w} exceeds n"
        )));
    }
    let f = pk.field();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let e = random_error(f, pk.len(), w, &mut rng);
    let mut y = pk.g_pub.vec_mul(msg)?;
    for (yi, ei) in y.iter_mut().zip(e) {
        *yi = f.add(*yi, ei);
    }
    Ok(Ciphertext { y })
}

/// `A = C_L((t+g)P∞)`, `B = C_L((m-t-g)P∞)` in public coordinates.
pub fn legitimate_pair(sk: &SecretKey) -> Result<EcpPair, SchemeError> {
    let g = sk.curve.genus();
    let t = sk.t();
    if sk.m <= t + g {
        return Err(SchemeError::Parameter(format!(
            "need m > t + g, got m = {}, t + g = {}",
            sk.m,
            t + g
        )));
    }
    let a = ag_code(&sk.curve, t + g)?.permute(&sk.perm);
    let b = ag_code(&sk.curve, sk.m - t - g)?.permute(&sk.perm);
    let c = public_code(&sk.curve, sk.m)?.permute(&sk.perm);
    Ok(EcpPair::new(a, b, c, t)?)
}

pub fn decrypt(sk: &SecretKey, ct: &Ciphertext) -> Result<Vec<Elem>, SchemeError> {
    let n = sk.curve.len();
    if ct.y.len() != n {
        return Err(SchemeError::Length {
            got: ct.y.len(),
            expected: n,
        });
    }
    let pair = legitimate_pair(sk)?;
    let (c, _) = pair.decode(&ct.y)?;
    // Undo π, read msg * S off the canonical generator, then undo S.
    let mut unperm = vec![0; n];
    for (j, &p) in sk.perm.iter().enumerate() {
        unperm[p] = c[j];
    }
    let ms = public_code(&sk.curve, sk.m)?.unencode(&unperm)?;
    sk.s.transpose().solve(&ms)?.ok_or(SchemeError::NotCodeword)
}
