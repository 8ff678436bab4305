#ifndef AGMC_H
#define AGMC_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum AgmcStatus {
  AGMC_STATUS_OK = 0,
  AGMC_STATUS_NULL_POINTER = 1,
  /**
   * Parameters outside the supported range.
   */
  AGMC_STATUS_PARAMETER = 2,
  /**
   * Malformed input: bad JSON, wrong length, value outside the field.
   */
  AGMC_STATUS_FORMAT = 3,
  /**
   * A ciphertext could not be decoded.
   */
  AGMC_STATUS_DECODE = 4,
  /**
   * The attack failed at some stage.
   */
  AGMC_STATUS_ATTACK = 5,
  /**
   * Output buffer too small.
   */
  AGMC_STATUS_BUFFER = 6,
  AGMC_STATUS_PANIC = 7,
} AgmcStatus;

typedef struct AgmcPublicKey AgmcPublicKey;

typedef struct AgmcSecretKey AgmcSecretKey;

typedef struct AgmcTranscript AgmcTranscript;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty if none. Owned by the
 * library.
 */
const char *agmc_last_error(void);

/**
 * Releases a string returned by a `_to_json` function.
 */
void agmc_string_free(char *s);

/**
 * Key pair over the Hermitian curve with parameter `r`, `q = r^2`.
 */
enum AgmcStatus agmc_keygen_hermitian(uint32_t r,
                                      size_t m,
                                      uint64_t seed,
                                      bool permute,
                                      struct AgmcPublicKey **pk_out,
                                      struct AgmcSecretKey **sk_out);

/**
 * Key pair over the Suzuki curve with parameter `q0`, `q = 2 q0^2`.
 */
enum AgmcStatus agmc_keygen_suzuki(uint32_t q0,
                                   size_t m,
                                   uint64_t seed,
                                   bool permute,
                                   struct AgmcPublicKey **pk_out,
                                   struct AgmcSecretKey **sk_out);

void agmc_public_key_free(struct AgmcPublicKey *pk);

void agmc_secret_key_free(struct AgmcSecretKey *sk);

void agmc_transcript_free(struct AgmcTranscript *tr);

/**
 * Code length; 0 for a null handle.
 */
size_t agmc_public_key_length(const struct AgmcPublicKey *pk);

/**
 * Message length; 0 for a null handle.
 */
size_t agmc_public_key_dimension(const struct AgmcPublicKey *pk);

/**
 * Error budget; 0 for a null handle.
 */
size_t agmc_public_key_errors(const struct AgmcPublicKey *pk);

/**
 * Field order; 0 for a null handle.
 */
size_t agmc_public_key_field_order(const struct AgmcPublicKey *pk);

enum AgmcStatus agmc_public_key_to_json(const struct AgmcPublicKey *pk, char **out);

enum AgmcStatus agmc_public_key_from_json(const char *json, struct AgmcPublicKey **out);

enum AgmcStatus agmc_secret_key_to_json(const struct AgmcSecretKey *sk, char **out);

enum AgmcStatus agmc_secret_key_from_json(const char *json, struct AgmcSecretKey **out);

/**
 * Encrypts `msg` (length `dimension`) with exactly `t` errors into `y_out`
 * (length at least `length`).
 */
enum AgmcStatus agmc_encrypt(const struct AgmcPublicKey *pk,
                             const uint16_t *msg,
                             size_t msg_len,
                             uint64_t seed,
                             uint16_t *y_out,
                             size_t y_len);

/**
 * Decrypts `y` into `msg_out` (length at least the message length).
 */
enum AgmcStatus agmc_decrypt(const struct AgmcSecretKey *sk,
                             const uint16_t *y,
                             size_t y_len,
                             uint16_t *msg_out,
                             size_t msg_len);

/**
 * Runs the attack on a public key; `algorithm` is 1 or 2.
 */
enum AgmcStatus agmc_attack(const struct AgmcPublicKey *pk,
                            uint32_t algorithm,
                            struct AgmcTranscript **out);

/**
 * Recovered degree m; 0 for a null handle.
 */
size_t agmc_transcript_degree(const struct AgmcTranscript *tr);

/**
 * Recovered genus; 0 for a null handle.
 */
size_t agmc_transcript_genus(const struct AgmcTranscript *tr);

/**
 * Linear systems solved; 0 for a null handle.
 */
size_t agmc_transcript_systems(const struct AgmcTranscript *tr);

enum AgmcStatus agmc_transcript_to_json(const struct AgmcTranscript *tr, char **out);

/**
 * Decrypts `y` with the recovered pair.
 */
enum AgmcStatus agmc_attack_decrypt(const struct AgmcTranscript *tr,
                                    const struct AgmcPublicKey *pk,
                                    const uint16_t *y,
                                    size_t y_len,
                                    uint16_t *msg_out,
                                    size_t msg_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AGMC_H */
