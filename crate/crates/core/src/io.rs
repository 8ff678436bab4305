//! JSON files for keys, ciphertexts, messages and attack transcripts.
//!
//! Matrices are arrays of rows of integer field representatives, and every
//! file carries the field description.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attack::{Algorithm, AttackTranscript, ParamRoute, Route};
use crate::code::LinearCode;
use crate::curve::{CurveDescriptor, OnePointCurve};
use crate::ecp::EcpPair;
use crate::field::{Elem, Field, FieldDescriptor};
use crate::matrix::Matrix;
use crate::mceliece::{check_scheme_params, Ciphertext, PublicKey, SecretKey};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("format error: {0}")]
    Format(String),
}

fn format_err(msg: impl Into<String>) -> IoError {
    IoError::Format(msg.into())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.display().to_string(),
        source,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    fs::write(path, to_json(value)).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn field_of(d: &FieldDescriptor) -> Result<Field, IoError> {
    Field::from_descriptor(d).map_err(|e| format_err(format!("field: {e}")))
}

fn vector(field: &Field, name: &str, v: &[u32], n: usize) -> Result<Vec<Elem>, IoError> {
    if v.len() != n {
        return Err(format_err(format!(
            "{name} has length {}, expected {n}",
            v.len()
        )));
    }
    v.iter()
        .map(|&x| {
            field.check(x as u64).map_err(|_| {
                format_err(format!(
                    "{name}: {x} is not an element of GF({})",
                    field.order()
                ))
            })
        })
        .collect()
}

fn matrix(field: &Field, name: &str, rows: &[Vec<u32>], cols: usize) -> Result<Matrix, IoError> {
    let mut data = Vec::with_capacity(rows.len() * cols);
    for (i, r) in rows.iter().enumerate() {
        data.extend(vector(field, &format!("{name} row {i}"), r, cols)?);
    }
    Matrix::new(field, rows.len(), cols, data).map_err(|e| format_err(format!("{name}: {e}")))
}

fn rows_of(m: &Matrix) -> Vec<Vec<u32>> {
    m.row_iter()
        .map(|r| r.iter().map(|&x| x as u32).collect())
        .collect()
}

fn vec_of(v: &[Elem]) -> Vec<u32> {
    v.iter().map(|&x| x as u32).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PublicKeyFile {
    pub field: FieldDescriptor,
    pub n: usize,
    pub t: usize,
    #[serde(rename = "G")]
    pub g: Vec<Vec<u32>>,
}

impl PublicKeyFile {
    pub fn from_key(pk: &PublicKey) -> Self {
        PublicKeyFile {
            field: pk.field().descriptor(),
            n: pk.len(),
            t: pk.t,
            g: rows_of(&pk.g_pub),
        }
    }

    pub fn to_key(&self) -> Result<PublicKey, IoError> {
        let field = field_of(&self.field)?;
        let g_pub = matrix(&field, "G", &self.g, self.n)?;
        if g_pub.rank() != g_pub.rows() {
            return Err(format_err("G does not have full row rank"));
        }
        Ok(PublicKey { g_pub, t: self.t })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecretKeyFile {
    pub curve: CurveDescriptor,
    pub m: usize,
    #[serde(rename = "S")]
    pub s: Vec<Vec<u32>>,
    pub perm: Vec<usize>,
    pub seed: u64,
}

impl SecretKeyFile {
    pub fn from_key(sk: &SecretKey) -> Self {
        SecretKeyFile {
            curve: sk.curve.descriptor(),
            m: sk.m,
            s: rows_of(&sk.s),
            perm: sk.perm.clone(),
            seed: sk.seed,
        }
    }

    pub fn to_key(&self) -> Result<SecretKey, IoError> {
        let curve = OnePointCurve::from_descriptor(&self.curve)
            .map_err(|e| format_err(format!("curve: {e}")))?;
        let n = curve.len();
        check_scheme_params(n, curve.genus(), self.m).map_err(|e| format_err(e.to_string()))?;
        let k = n - self.m + curve.genus() - 1;
        if self.s.len() != k {
            return Err(format_err(format!(
                "S has {} rows, expected {k}",
                self.s.len()
            )));
        }
        let s = matrix(curve.field(), "S", &self.s, k)?;
        if s.rank() != k {
            return Err(format_err("S is not invertible"));
        }
        let mut seen = vec![false; n];
        if self.perm.len() != n
            || self
                .perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(format_err(format!("perm is not a permutation of 0..{n}")));
        }
        Ok(SecretKey {
            curve,
            m: self.m,
            s,
            perm: self.perm.clone(),
            seed: self.seed,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CiphertextFile {
    pub field: FieldDescriptor,
    pub n: usize,
    pub y: Vec<u32>,
}

impl CiphertextFile {
    pub fn from_ciphertext(field: &Field, ct: &Ciphertext) -> Self {
        CiphertextFile {
            field: field.descriptor(),
            n: ct.y.len(),
            y: vec_of(&ct.y),
        }
    }

    /// Checks the ciphertext against the field and length it must match.
    pub fn to_ciphertext(&self, field: &Field, n: usize) -> Result<Ciphertext, IoError> {
        if self.field != field.descriptor() {
            return Err(format_err("ciphertext field does not match the key"));
        }
        if self.n != n {
            return Err(format_err(format!(
                "ciphertext has n = {}, key has n = {n}",
                self.n
            )));
        }
        Ok(Ciphertext {
            y: vector(field, "y", &self.y, n)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessageFile {
    pub field: FieldDescriptor,
    pub msg: Vec<u32>,
}

impl MessageFile {
    pub fn new(field: &Field, msg: &[Elem]) -> Self {
        MessageFile {
            field: field.descriptor(),
            msg: vec_of(msg),
        }
    }

    pub fn to_message(&self, field: &Field, k: usize) -> Result<Vec<Elem>, IoError> {
        if self.field != field.descriptor() {
            return Err(format_err("message field does not match the key"));
        }
        vector(field, "msg", &self.msg, k)
    }
}

/// What the attack recovered; enough to decrypt together with the public key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranscriptFile {
    pub field: FieldDescriptor,
    pub n: usize,
    pub m: usize,
    pub g: usize,
    pub t: usize,
    pub param_route: ParamRoute,
    pub route: Route,
    pub p_index: usize,
    pub algorithm: Algorithm,
    pub lambda: usize,
    #[serde(rename = "B_hat")]
    pub b_hat: Vec<Vec<u32>>,
    #[serde(rename = "A0")]
    pub a0: Vec<Vec<u32>>,
}

impl TranscriptFile {
    pub fn from_transcript(tr: &AttackTranscript) -> Self {
        TranscriptFile {
            field: tr.b_hat.field().descriptor(),
            n: tr.b_hat.len(),
            m: tr.m,
            g: tr.g,
            t: tr.t,
            param_route: tr.param_route,
            route: tr.route,
            p_index: tr.p_index,
            algorithm: tr.algorithm,
            lambda: tr.lambda,
            b_hat: rows_of(tr.b_hat.generator()),
            a0: rows_of(tr.pair.a.generator()),
        }
    }

    /// Rebuilds the pair for the public key it was recovered from.
    pub fn to_pair(&self, pk: &PublicKey) -> Result<EcpPair, IoError> {
        let field = pk.field();
        if self.field != field.descriptor() || self.n != pk.len() || self.t != pk.t {
            return Err(format_err("transcript does not belong to this public key"));
        }
        let a = LinearCode::from_generator(&matrix(field, "A0", &self.a0, self.n)?);
        let b = LinearCode::from_generator(&matrix(field, "B_hat", &self.b_hat, self.n)?);
        EcpPair::new(a, b, pk.code(), self.t).map_err(|e| format_err(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mceliece::{encrypt, keygen};

    #[test]
    fn key_round_trip() {
        let curve = OnePointCurve::hermitian(3).unwrap();
        let (pk, sk) = keygen(&curve, 13, 42, true).unwrap();
        let text = to_json(&PublicKeyFile::from_key(&pk));
        let back: PublicKeyFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_key().unwrap(), pk);
        let text = to_json(&SecretKeyFile::from_key(&sk));
        let back: SecretKeyFile = serde_json::from_str(&text).unwrap();
        let sk2 = back.to_key().unwrap();
        assert_eq!((sk2.m, &sk2.s, &sk2.perm), (sk.m, &sk.s, &sk.perm));
    }

    #[test]
    fn ciphertext_checks() {
        let curve = OnePointCurve::hermitian(3).unwrap();
        let (pk, _) = keygen(&curve, 13, 1, true).unwrap();
        let ct = encrypt(&pk, &vec![1; pk.dimension()], 3, None).unwrap();
        let file = CiphertextFile::from_ciphertext(pk.field(), &ct);
        assert_eq!(file.to_ciphertext(pk.field(), 27).unwrap(), ct);
        assert!(file.to_ciphertext(pk.field(), 26).is_err());
        let mut bad = file.clone();
        bad.y[0] = 9;
        assert!(bad.to_ciphertext(pk.field(), 27).is_err());
        let other = Field::gf(4).unwrap();
        assert!(file.to_ciphertext(&other, 27).is_err());
    }

    #[test]
    fn rejects_unknown_fields_and_bad_perm() {
        let curve = OnePointCurve::hermitian(2).unwrap();
        let (_, sk) = keygen(&curve, 4, 1, true).unwrap();
        let mut file = SecretKeyFile::from_key(&sk);
        file.perm[0] = file.perm[1];
        assert!(file.to_key().is_err());
        let text = r#"{"field":{"p":2,"k":2,"modulus":[1,1,1]},"msg":[],"extra":1}"#;
        assert!(serde_json::from_str::<MessageFile>(text).is_err());
    }
}
