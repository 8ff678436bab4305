//! C ABI over the agmc library.
//!
//! Objects are opaque handles released with their `_free` function. Every
//! fallible call returns an `AgmcStatus`; on failure the message is available
//! from `agmc_last_error` on the same thread until the next failing call.
//! Field elements are passed as integer representatives in `uint16_t`.
//!
//! # Safety
//!
//! Handle arguments must be null or come from this library and not yet be
//! freed. Buffers must be valid for the lengths passed with them, and string
//! arguments must be NUL-terminated.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use agmc::attack::{attack_decrypt, attack_pipeline, Algorithm, AttackOptions, AttackTranscript};
use agmc::curve::OnePointCurve;
use agmc::io::{to_json, PublicKeyFile, SecretKeyFile, TranscriptFile};
use agmc::mceliece::{decrypt, encrypt, keygen, Ciphertext, PublicKey, SchemeError, SecretKey};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgmcStatus {
    Ok = 0,
    NullPointer = 1,
    /// Parameters outside the supported range.
    Parameter = 2,
    /// Malformed input: bad JSON, wrong length, value outside the field.
    Format = 3,
    /// A ciphertext could not be decoded.
    Decode = 4,
    /// The attack failed at some stage.
    Attack = 5,
    /// Output buffer too small.
    Buffer = 6,
    Panic = 7,
}

pub struct AgmcPublicKey {
    inner: PublicKey,
}

pub struct AgmcSecretKey {
    inner: SecretKey,
}

pub struct AgmcTranscript {
    inner: AttackTranscript,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).expect("nul bytes removed"));
}

struct Fail(AgmcStatus, String);

impl From<SchemeError> for Fail {
    fn from(e: SchemeError) -> Self {
        let status = match e {
            SchemeError::Parameter(_) => AgmcStatus::Parameter,
            SchemeError::Length { .. } => AgmcStatus::Format,
            _ => AgmcStatus::Decode,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> AgmcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AgmcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            AgmcStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(AgmcStatus::NullPointer, "null pointer argument".into())
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out(src: &[u16], out: *mut u16, out_len: usize) -> Result<(), Fail> {
    if out_len < src.len() {
        return Err(Fail(
            AgmcStatus::Buffer,
            format!("output needs {} entries, buffer has {out_len}", src.len()),
        ));
    }
    if !src.is_empty() {
        if out.is_null() {
            return Err(null());
        }
        ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    }
    Ok(())
}

unsafe fn c_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(AgmcStatus::Format, "string is not UTF-8".into()))
}

fn json_out(json: String, out: *mut *mut c_char) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    let s = CString::new(json).map_err(|_| Fail(AgmcStatus::Format, "nul byte in JSON".into()))?;
    unsafe { *out = s.into_raw() };
    Ok(())
}

/// Message of the last failure on this thread; empty if none. Owned by the
/// library.
#[no_mangle]
pub extern "C" fn agmc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by a `_to_json` function.
#[no_mangle]
pub unsafe extern "C" fn agmc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn keygen_with(
    curve: Result<OnePointCurve, agmc::curve::CurveError>,
    m: usize,
    seed: u64,
    permute: bool,
    pk_out: *mut *mut AgmcPublicKey,
    sk_out: *mut *mut AgmcSecretKey,
) -> AgmcStatus {
    guard(|| {
        if pk_out.is_null() || sk_out.is_null() {
            return Err(null());
        }
        let curve = curve.map_err(|e| Fail(AgmcStatus::Parameter, e.to_string()))?;
        let (pk, sk) = keygen(&curve, m, seed, permute)?;
        unsafe {
            *pk_out = Box::into_raw(Box::new(AgmcPublicKey { inner: pk }));
            *sk_out = Box::into_raw(Box::new(AgmcSecretKey { inner: sk }));
        }
        Ok(())
    })
}

/// Key pair over the Hermitian curve with parameter `r`, `q = r^2`.
#[no_mangle]
pub extern "C" fn agmc_keygen_hermitian(
    r: u32,
    m: usize,
    seed: u64,
    permute: bool,
    pk_out: *mut *mut AgmcPublicKey,
    sk_out: *mut *mut AgmcSecretKey,
) -> AgmcStatus {
    keygen_with(
        OnePointCurve::hermitian(r),
        m,
        seed,
        permute,
        pk_out,
        sk_out,
    )
}

/// Key pair over the Suzuki curve with parameter `q0`, `q = 2 q0^2`.
#[no_mangle]
pub extern "C" fn agmc_keygen_suzuki(
    q0: u32,
    m: usize,
    seed: u64,
    permute: bool,
    pk_out: *mut *mut AgmcPublicKey,
    sk_out: *mut *mut AgmcSecretKey,
) -> AgmcStatus {
    keygen_with(OnePointCurve::suzuki(q0), m, seed, permute, pk_out, sk_out)
}

#[no_mangle]
pub unsafe extern "C" fn agmc_public_key_free(pk: *mut AgmcPublicKey) {
    if !pk.is_null() {
        drop(Box::from_raw(pk));
    }
}

#[no_mangle]
pub unsafe extern "C" fn agmc_secret_key_free(sk: *mut AgmcSecretKey) {
    if !sk.is_null() {
        drop(Box::from_raw(sk));
    }
}

#[no_mangle]
pub unsafe extern "C" fn agmc_transcript_free(tr: *mut AgmcTranscript) {
    if !tr.is_null() {
        drop(Box::from_raw(tr));
    }
}

/// Code length; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn agmc_public_key_length(pk: *const AgmcPublicKey) -> usize {
    pk.as_ref().map_or(0, |p| p.inner.len())
}

/// Message length; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn agmc_public_key_dimension(pk: *const AgmcPublicKey) -> usize {
    pk.as_ref().map_or(0, |p| p.inner.dimension())
}

/// Error budget; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn agmc_public_key_errors(pk: *const AgmcPublicKey) -> usize {
    pk.as_ref().map_or(0, |p| p.inner.t)
}

/// Field order; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn agmc_public_key_field_order(pk: *const AgmcPublicKey) -> usize {
    pk.as_ref().map_or(0, |p| p.inner.field().order())
}

#[no_mangle]
pub unsafe extern "C" fn agmc_public_key_to_json(
    pk: *const AgmcPublicKey,
    out: *mut *mut c_char,
) -> AgmcStatus {
    guard(|| {
        let pk = pk.as_ref().ok_or_else(null)?;
        json_out(to_json(&PublicKeyFile::from_key(&pk.inner)), out)
    })
}

#[no_mangle]
pub unsafe extern "C" fn agmc_public_key_from_json(
    json: *const c_char,
    out: *mut *mut AgmcPublicKey,
) -> AgmcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let file: PublicKeyFile = serde_json::from_str(c_str(json)?)
            .map_err(|e| Fail(AgmcStatus::Format, e.to_string()))?;
        let pk = file
            .to_key()
            .map_err(|e| Fail(AgmcStatus::Format, e.to_string()))?;
        *out = Box::into_raw(Box::new(AgmcPublicKey { inner: pk }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn agmc_secret_key_to_json(
    sk: *const AgmcSecretKey,
    out: *mut *mut c_char,
) -> AgmcStatus {
    guard(|| {
        let sk = sk.as_ref().ok_or_else(null)?;
        json_out(to_json(&SecretKeyFile::from_key(&sk.inner)), out)
    })
}

#[no_mangle]
pub unsafe extern "C" fn agmc_secret_key_from_json(
    json: *const c_char,
    out: *mut *mut AgmcSecretKey,
) -> AgmcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let file: SecretKeyFile = serde_json::from_str(c_str(json)?)
            .map_err(|e| Fail(AgmcStatus::Format, e.to_string()))?;
        let sk = file
            .to_key()
            .map_err(|e| Fail(AgmcStatus::Format, e.to_string()))?;
        *out = Box::into_raw(Box::new(AgmcSecretKey { inner: sk }));
        Ok(())
    })
}

fn check_elems(pk: &PublicKey, v: &[u16]) -> Result<(), Fail> {
    let q = pk.field().order();
    match v.iter().find(|&&x| x as usize >= q) {
        Some(x) => Err(Fail(
            AgmcStatus::Format,
            format!("{x} is not an element of GF({q})"),
        )),
        None => Ok(()),
    }
}

/// Encrypts `msg` (length `dimension`) with exactly `t` errors into `y_out`
/// (length at least `length`).
#[no_mangle]
pub unsafe extern "C" fn agmc_encrypt(
    pk: *const AgmcPublicKey,
    msg: *const u16,
    msg_len: usize,
    seed: u64,
    y_out: *mut u16,
    y_len: usize,
) -> AgmcStatus {
    guard(|| {
        let pk = &pk.as_ref().ok_or_else(null)?.inner;
        let msg = slice(msg, msg_len)?;
        check_elems(pk, msg)?;
        let ct = encrypt(pk, msg, seed, None)?;
        write_out(&ct.y, y_out, y_len)
    })
}

/// Decrypts `y` into `msg_out` (length at least the message length).
#[no_mangle]
pub unsafe extern "C" fn agmc_decrypt(
    sk: *const AgmcSecretKey,
    y: *const u16,
    y_len: usize,
    msg_out: *mut u16,
    msg_len: usize,
) -> AgmcStatus {
    guard(|| {
        let sk = &sk.as_ref().ok_or_else(null)?.inner;
        let y = slice(y, y_len)?.to_vec();
        let q = sk.curve.field().order();
        if y.iter().any(|&x| x as usize >= q) {
            return Err(Fail(
                AgmcStatus::Format,
                format!("ciphertext entry outside GF({q})"),
            ));
        }
        let msg = decrypt(sk, &Ciphertext { y })?;
        write_out(&msg, msg_out, msg_len)
    })
}

/// Runs the attack on a public key; `algorithm` is 1 or 2.
#[no_mangle]
pub unsafe extern "C" fn agmc_attack(
    pk: *const AgmcPublicKey,
    algorithm: u32,
    out: *mut *mut AgmcTranscript,
) -> AgmcStatus {
    guard(|| {
        let pk = &pk.as_ref().ok_or_else(null)?.inner;
        if out.is_null() {
            return Err(null());
        }
        let algorithm = match algorithm {
            1 => Algorithm::One,
            2 => Algorithm::Two,
            a => {
                return Err(Fail(
                    AgmcStatus::Parameter,
                    format!("unknown algorithm {a}"),
                ))
            }
        };
        let opts = AttackOptions {
            algorithm,
            ..AttackOptions::default()
        };
        let tr = attack_pipeline(pk, &opts).map_err(|e| {
            let status = if e.source.is_guard() {
                AgmcStatus::Parameter
            } else {
                AgmcStatus::Attack
            };
            Fail(status, e.to_string())
        })?;
        *out = Box::into_raw(Box::new(AgmcTranscript { inner: tr }));
        Ok(())
    })
}

/// Recovered degree m; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn agmc_transcript_degree(tr: *const AgmcTranscript) -> usize {
    tr.as_ref().map_or(0, |t| t.inner.m)
}

/// Recovered genus; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn agmc_transcript_genus(tr: *const AgmcTranscript) -> usize {
    tr.as_ref().map_or(0, |t| t.inner.g)
}

/// Linear systems solved; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn agmc_transcript_systems(tr: *const AgmcTranscript) -> usize {
    tr.as_ref().map_or(0, |t| t.inner.lambda)
}

#[no_mangle]
pub unsafe extern "C" fn agmc_transcript_to_json(
    tr: *const AgmcTranscript,
    out: *mut *mut c_char,
) -> AgmcStatus {
    guard(|| {
        let tr = tr.as_ref().ok_or_else(null)?;
        json_out(to_json(&TranscriptFile::from_transcript(&tr.inner)), out)
    })
}

/// Decrypts `y` with the recovered pair.
#[no_mangle]
pub unsafe extern "C" fn agmc_attack_decrypt(
    tr: *const AgmcTranscript,
    pk: *const AgmcPublicKey,
    y: *const u16,
    y_len: usize,
    msg_out: *mut u16,
    msg_len: usize,
) -> AgmcStatus {
    guard(|| {
        let tr = &tr.as_ref().ok_or_else(null)?.inner;
        let pk = &pk.as_ref().ok_or_else(null)?.inner;
        let y = slice(y, y_len)?;
        check_elems(pk, y)?;
        let msg = attack_decrypt(&tr.pair, pk, &Ciphertext { y: y.to_vec() }).map_err(|e| {
            let status = if y.len() == pk.len() {
                AgmcStatus::Decode
            } else {
                AgmcStatus::Format
            };
            Fail(status, e.to_string())
        })?;
        write_out(&msg, msg_out, msg_len)
    })
}
