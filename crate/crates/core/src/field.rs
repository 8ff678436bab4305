//! Arithmetic in GF(p^k) for p^k <= 2^16.
//!
//! An element is stored as its integer representative `rep`, the base-p
//! encoding of the coefficient vector of a polynomial residue modulo the
//! field's (monic, irreducible) modulus: `rep = c_0 + c_1 p + ... + c_{k-1} p^{k-1}`.
//!
//! Multiplication goes through exp/log tables built once per field.
//! Addition is XOR in characteristic 2, a full table for small odd-order
//! fields and Zech logarithms above that.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Raw element representative.
pub type Elem = u16;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

const ADD_TABLE_LIMIT: usize = 1024;
const NO_ZECH: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {0} is outside 2..=65536")]
    OrderOutOfRange(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus {0:?} is not a monic irreducible polynomial of degree >= 1")]
    BadModulus(Vec<u32>),
    #[error("representative {rep} out of range for GF({q})")]
    BadRep { rep: u64, q: usize },
    #[error("elements belong to different fields")]
    Mismatch,
    #[error("zero has no inverse")]
    ZeroInverse,
}

/// Serialized field description: characteristic, degree and the modulus
/// coefficients from the constant term up to the leading 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

enum Addition {
    Xor,
    Table(Vec<Elem>),
    Zech(Vec<u32>),
}

struct Inner {
    p: u32,
    k: u32,
    q: usize,
    modulus: Vec<u32>,
    generator: Elem,
    /// `exp[i] = generator^i` for `0 <= i < 2(q-1)`.
    exp: Vec<Elem>,
    log: Vec<u32>,
    addition: Addition,
}

/// A finite field description together with its arithmetic tables.
///
/// Cloning is cheap; clones share the tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.0.p, self.0.k, self.0.modulus)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p as u32, k))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Polynomials over GF(p) as coefficient vectors, low degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (r[r.len() - 1] * lead_inv) % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - (c * mi) % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_rem(&out, m, p)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|x| (a * x) % p == 1).expect("nonzero residue")
}

fn digits(rep: usize, p: u32, k: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(k as usize);
    let mut r = rep;
    for _ in 0..k {
        v.push((r % p as usize) as u32);
        r /= p as usize;
    }
    poly_trim(&mut v);
    v
}

fn undigits(d: &[u32], p: u32) -> usize {
    d.iter()
        .rev()
        .fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

fn digit_add(a: usize, b: usize, p: u32, k: u32) -> usize {
    let (mut a, mut b) = (a, b);
    let mut out = 0usize;
    let mut place = 1usize;
    for _ in 0..k {
        let s = (a % p as usize + b % p as usize) % p as usize;
        out += s * place;
        place *= p as usize;
        a /= p as usize;
        b /= p as usize;
    }
    out
}

/// Brute-force irreducibility: no monic factor of degree <= deg/2.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = match modulus.len().checked_sub(1) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if modulus[deg] == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as usize).pow(d as u32);
        for low in 0..count {
            let mut f = digits(low, p, d as u32);
            f.resize(d, 0);
            f.push(1);
            if poly_rem(modulus, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn x_is_primitive(modulus: &[u32], p: u32, k: u32) -> bool {
    let q = (p as u64).pow(k);
    let x = if k == 1 {
        // GF(p)[x]/(x + c) sends x to -c.
        let c = (p - modulus[0]) % p;
        if c == 0 {
            return false;
        }
        vec![c]
    } else {
        vec![0, 1]
    };
    let order = q - 1;
    let one = vec![1u32];
    prime_factors(order).into_iter().all(|l| {
        let e = order / l;
        poly_pow(&x, e, modulus, p) != one
    }) && poly_pow(&x, order, modulus, p) == one
}

fn poly_pow(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

/// The canonical modulus: the first monic primitive polynomial of degree `k`
/// when the low coefficients `c_0..c_{k-1}` are read as a base-p number.
pub fn default_modulus(p: u32, k: u32) -> Vec<u32> {
    let count = (p as usize).pow(k);
    for low in 1..count {
        let mut f = digits(low, p, k);
        f.resize(k as usize, 0);
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) && x_is_primitive(&f, p, k) {
            return f;
        }
    }
    unreachable!("every finite field has a primitive polynomial")
}

impl Field {
    /// GF(p^k) with the canonical modulus.
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if k == 0 || q > MAX_ORDER {
            return Err(FieldError::OrderOutOfRange(q));
        }
        Self::with_modulus(p, default_modulus(p, k))
    }

    /// GF(q) with the canonical modulus.
    pub fn gf(q: u64) -> Result<Self, FieldError> {
        if !(2..=MAX_ORDER).contains(&q) {
            return Err(FieldError::OrderOutOfRange(q));
        }
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, k)
    }

    /// GF(p)[x]/(modulus); the modulus must be monic and irreducible.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if modulus.len() < 2
            || modulus.last() != Some(&1)
            || modulus.iter().any(|&c| c >= p)
            || !is_irreducible(&modulus, p)
        {
            return Err(FieldError::BadModulus(modulus));
        }
        let k = (modulus.len() - 1) as u32;
        let q64 = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q64 > MAX_ORDER {
            return Err(FieldError::OrderOutOfRange(q64));
        }
        let q = q64 as usize;

        let slow_mul = |a: usize, b: usize| -> usize {
            if k == 1 {
                return a * b % p as usize;
            }
            undigits(
                &poly_mulmod(&digits(a, p, k), &digits(b, p, k), &modulus, p),
                p,
            )
        };
        let slow_pow = |a: usize, mut e: u64| -> usize {
            let mut r = 1usize;
            let mut b = a;
            while e > 0 {
                if e & 1 == 1 {
                    r = slow_mul(r, b);
                }
                b = slow_mul(b, b);
                e >>= 1;
            }
            r
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&a| factors.iter().all(|l| slow_pow(a, order / l) != 1))
            .expect("multiplicative group is cyclic");

        let mut exp = vec![0 as Elem; 2 * (q - 1)];
        let mut log = vec![0u32; q];
        let mut cur = 1usize;
        for (i, e) in exp.iter_mut().take(q - 1).enumerate() {
            *e = cur as Elem;
            log[cur] = i as u32;
            cur = slow_mul(cur, generator);
        }
        for i in q - 1..2 * (q - 1) {
            exp[i] = exp[i - (q - 1)];
        }

        let addition = if p == 2 {
            Addition::Xor
        } else if q <= ADD_TABLE_LIMIT {
            let mut t = vec![0 as Elem; q * q];
            for a in 0..q {
                for b in 0..q {
                    t[a * q + b] = digit_add(a, b, p, k) as Elem;
                }
            }
            Addition::Table(t)
        } else {
            let zech = (0..q - 1)
                .map(|i| {
                    let s = digit_add(1, exp[i] as usize, p, k);
                    if s == 0 {
                        NO_ZECH
                    } else {
                        log[s]
                    }
                })
                .collect();
            Addition::Zech(zech)
        };

        Ok(Field(Arc::new(Inner {
            p,
            k,
            q,
            modulus,
            generator: generator as Elem,
            exp,
            log,
            addition,
        })))
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Self, FieldError> {
        let f = Self::with_modulus(d.p, d.modulus.clone())?;
        if f.k() != d.k {
            return Err(FieldError::BadModulus(d.modulus.clone()));
        }
        Ok(f)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.0.p,
            k: self.0.k,
            modulus: self.0.modulus.clone(),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    /// Number of elements q.
    pub fn order(&self) -> usize {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn generator(&self) -> Elem {
        self.0.generator
    }

    pub fn check(&self, rep: u64) -> Result<Elem, FieldError> {
        if rep < self.0.q as u64 {
            Ok(rep as Elem)
        } else {
            Err(FieldError::BadRep { rep, q: self.0.q })
        }
    }

    /// All elements in ascending representative order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(|r| r as Elem)
    }

    pub fn element(&self, rep: u64) -> Result<FieldElement, FieldError> {
        Ok(FieldElement {
            rep: self.check(rep)?,
            field: self.clone(),
        })
    }

    pub fn enumerate(&self) -> Vec<FieldElement> {
        self.elements()
            .map(|rep| FieldElement {
                rep,
                field: self.clone(),
            })
            .collect()
    }

    /// Discrete log base the table generator; `a` must be nonzero.
    #[inline]
    pub fn log(&self, a: Elem) -> u32 {
        debug_assert!(a != 0);
        self.0.log[a as usize]
    }

    /// `generator^i` for any `i`.
    #[inline]
    pub fn exp(&self, i: u64) -> Elem {
        self.0.exp[(i % (self.0.q as u64 - 1)) as usize]
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.addition {
            Addition::Xor => a ^ b,
            Addition::Table(t) => t[a as usize * self.0.q + b as usize],
            Addition::Zech(z) => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let la = self.0.log[a as usize] as usize;
                let lb = self.0.log[b as usize] as usize;
                let n = self.0.q - 1;
                let d = (lb + n - la) % n;
                match z[d] {
                    NO_ZECH => 0,
                    zd => self.0.exp[la + zd as usize],
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.0.p == 2 || a == 0 {
            return a;
        }
        let half = (self.0.q - 1) / 2;
        self.0.exp[self.0.log[a as usize] as usize + half]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.0.exp[(self.0.log[a as usize] + self.0.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let n = self.0.q - 1;
        Ok(self.0.exp[(n - self.0.log[a as usize] as usize) % n])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: i64) -> Result<Elem, FieldError> {
        if a == 0 {
            return match e {
                0 => Ok(1),
                e if e > 0 => Ok(0),
                _ => Err(FieldError::ZeroInverse),
            };
        }
        let n = (self.0.q - 1) as i128;
        let l = (self.0.log[a as usize] as i128 * e as i128).rem_euclid(n);
        Ok(self.0.exp[l as usize])
    }

    /// `a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.0.p as i64).expect("nonnegative exponent")
    }

    /// `dst[i] += c * src[i]`.
    pub fn axpy(&self, dst: &mut [Elem], c: Elem, src: &[Elem]) {
        debug_assert_eq!(dst.len(), src.len());
        if c == 0 {
            return;
        }
        let lc = self.0.log[c as usize] as usize;
        let exp = &self.0.exp[lc..];
        let log = &self.0.log;
        match &self.0.addition {
            Addition::Xor => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d ^= exp[log[s as usize] as usize];
                    }
                }
            }
            Addition::Table(t) => {
                let q = self.0.q;
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        let v = exp[log[s as usize] as usize];
                        *d = t[*d as usize * q + v as usize];
                    }
                }
            }
            Addition::Zech(_) => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        let v = exp[log[s as usize] as usize];
                        *d = self.add(*d, v);
                    }
                }
            }
        }
    }

    /// `row[i] *= c`.
    pub fn scale(&self, row: &mut [Elem], c: Elem) {
        if c == 1 {
            return;
        }
        if c == 0 {
            row.fill(0);
            return;
        }
        let lc = self.0.log[c as usize] as usize;
        for x in row.iter_mut() {
            if *x != 0 {
                *x = self.0.exp[lc + self.0.log[*x as usize] as usize];
            }
        }
    }

    /// Sum of `a[i] * b[i]`.
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

/// An element bundled with its field. Binary operations check that both
/// operands live in the same field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    rep: Elem,
    field: Field,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

impl FieldElement {
    pub fn rep(&self) -> Elem {
        self.rep
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.rep == 0
    }

    fn same(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::Mismatch)
        }
    }

    fn with(&self, rep: Elem) -> Self {
        FieldElement {
            rep,
            field: self.field.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same(other)?;
        Ok(self.with(self.field.add(self.rep, other.rep)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.same(other)?;
        Ok(self.with(self.field.sub(self.rep, other.rep)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same(other)?;
        Ok(self.with(self.field.mul(self.rep, other.rep)))
    }

    pub fn neg(&self) -> Self {
        self.with(self.field.neg(self.rep))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        Ok(self.with(self.field.inv(self.rep)?))
    }

    pub fn pow(&self, e: i64) -> Result<Self, FieldError> {
        Ok(self.with(self.field.pow(self.rep, e)?))
    }

    pub fn frobenius(&self) -> Self {
        self.with(self.field.frobenius(self.rep))
    }
}
