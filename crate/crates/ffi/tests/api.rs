use std::ffi::{CStr, CString};
use std::ptr;

use agmc_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(agmc_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn keys(r: u32, m: usize, seed: u64) -> (*mut AgmcPublicKey, *mut AgmcSecretKey) {
    let mut pk = ptr::null_mut();
    let mut sk = ptr::null_mut();
    assert_eq!(
        agmc_keygen_hermitian(r, m, seed, true, &mut pk, &mut sk),
        AgmcStatus::Ok
    );
    (pk, sk)
}

#[test]
fn encrypt_decrypt_attack() {
    let (pk, sk) = keys(3, 13, 42);
    unsafe {
        let (n, k) = (agmc_public_key_length(pk), agmc_public_key_dimension(pk));
        assert_eq!(
            (
                n,
                k,
                agmc_public_key_errors(pk),
                agmc_public_key_field_order(pk)
            ),
            (27, 16, 2, 9)
        );
        let mut tr = ptr::null_mut();
        assert_eq!(agmc_attack(pk, 2, &mut tr), AgmcStatus::Ok);
        assert_eq!(
            (agmc_transcript_degree(tr), agmc_transcript_genus(tr)),
            (13, 3)
        );
        assert_eq!(agmc_transcript_systems(tr), 8);
        for seed in 0..20u64 {
            let msg: Vec<u16> = (0..k).map(|i| ((i as u64 * 7 + seed) % 9) as u16).collect();
            let mut y = vec![0u16; n];
            assert_eq!(
                agmc_encrypt(pk, msg.as_ptr(), k, seed, y.as_mut_ptr(), n),
                AgmcStatus::Ok
            );
            let mut out = vec![0u16; k];
            assert_eq!(
                agmc_decrypt(sk, y.as_ptr(), n, out.as_mut_ptr(), k),
                AgmcStatus::Ok
            );
            assert_eq!(out, msg);
            let mut out = vec![0u16; k];
            assert_eq!(
                agmc_attack_decrypt(tr, pk, y.as_ptr(), n, out.as_mut_ptr(), k),
                AgmcStatus::Ok
            );
            assert_eq!(out, msg);
        }
        agmc_transcript_free(tr);
        agmc_public_key_free(pk);
        agmc_secret_key_free(sk);
    }
}

#[test]
fn json_round_trip() {
    let (pk, sk) = keys(2, 4, 1);
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(agmc_public_key_to_json(pk, &mut s), AgmcStatus::Ok);
        let mut pk2 = ptr::null_mut();
        assert_eq!(agmc_public_key_from_json(s, &mut pk2), AgmcStatus::Ok);
        assert_eq!(agmc_public_key_length(pk2), 8);
        agmc_string_free(s);
        let mut s = ptr::null_mut();
        assert_eq!(agmc_secret_key_to_json(sk, &mut s), AgmcStatus::Ok);
        let mut sk2 = ptr::null_mut();
        assert_eq!(agmc_secret_key_from_json(s, &mut sk2), AgmcStatus::Ok);
        agmc_string_free(s);
        let bad = CString::new("{\"n\": 3}").unwrap();
        let mut pk3 = ptr::null_mut();
        assert_eq!(
            agmc_public_key_from_json(bad.as_ptr(), &mut pk3),
            AgmcStatus::Format
        );
        assert!(pk3.is_null());
        assert!(!last_error().is_empty());
        for p in [pk, pk2] {
            agmc_public_key_free(p);
        }
        for s in [sk, sk2] {
            agmc_secret_key_free(s);
        }
    }
}

#[test]
fn error_codes() {
    let mut pk = ptr::null_mut();
    let mut sk = ptr::null_mut();
    assert_eq!(
        agmc_keygen_hermitian(3, 9, 0, true, &mut pk, &mut sk),
        AgmcStatus::Parameter
    );
    assert!(last_error().contains("t = 0"), "{}", last_error());
    assert_eq!(
        agmc_keygen_hermitian(6, 50, 0, true, &mut pk, &mut sk),
        AgmcStatus::Parameter
    );
    assert_eq!(
        agmc_keygen_hermitian(3, 13, 0, true, ptr::null_mut(), &mut sk),
        AgmcStatus::NullPointer
    );
    let (pk, sk) = keys(3, 13, 5);
    unsafe {
        let msg = [0u16; 16];
        let mut y = vec![0u16; 27];
        assert_eq!(
            agmc_encrypt(pk, msg.as_ptr(), 15, 0, y.as_mut_ptr(), 27),
            AgmcStatus::Format
        );
        assert_eq!(
            agmc_encrypt(pk, msg.as_ptr(), 16, 0, y.as_mut_ptr(), 26),
            AgmcStatus::Buffer
        );
        let bad = [9u16; 16];
        assert_eq!(
            agmc_encrypt(pk, bad.as_ptr(), 16, 0, y.as_mut_ptr(), 27),
            AgmcStatus::Format
        );
        let mut out = vec![0u16; 16];
        assert_eq!(
            agmc_decrypt(sk, y.as_ptr(), 20, out.as_mut_ptr(), 16),
            AgmcStatus::Format
        );
        let mut tr = ptr::null_mut();
        assert_eq!(agmc_attack(pk, 3, &mut tr), AgmcStatus::Parameter);
        assert_eq!(
            agmc_attack(ptr::null(), 2, &mut tr),
            AgmcStatus::NullPointer
        );
        assert_eq!(agmc_public_key_length(ptr::null()), 0);
        agmc_public_key_free(pk);
        agmc_secret_key_free(sk);
    }
    // The attack refuses r = 2, m = 4.
    let (pk, sk) = keys(2, 4, 0);
    unsafe {
        let mut tr = ptr::null_mut();
        assert_eq!(agmc_attack(pk, 2, &mut tr), AgmcStatus::Parameter);
        assert!(tr.is_null());
        agmc_public_key_free(pk);
        agmc_secret_key_free(sk);
        agmc_public_key_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/agmc.h")).unwrap();
    for name in [
        "agmc_last_error",
        "agmc_keygen_hermitian",
        "agmc_keygen_suzuki",
        "agmc_encrypt",
        "agmc_decrypt",
        "agmc_attack",
        "agmc_attack_decrypt",
        "agmc_transcript_free",
        "typedef struct AgmcPublicKey AgmcPublicKey",
        "AGMC_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
