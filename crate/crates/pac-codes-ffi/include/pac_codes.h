/* C interface of the PAC code toolkit. Generated by cbindgen; do not edit. */

#ifndef PAC_CODES_H
#define PAC_CODES_H



#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every API call.
 */
typedef enum PacStatus {
  PAC_STATUS_OK = 0,
  PAC_STATUS_NULL_POINTER = 1,
  PAC_STATUS_INVALID_ARGUMENT = 2,
  PAC_STATUS_RESOURCE_LIMIT = 3,
  /*
   Fano decoding hit its cycle cap before reaching the last tree level.
   */
  PAC_STATUS_DECODE_FAILURE = 4,
  PAC_STATUS_INTERNAL_ERROR = 5,
} PacStatus;

/*
 An immutable PAC code description (opaque).
 */
typedef struct PacCode PacCode;

/*
 A reusable Fano decoder bound to one code (opaque).
 */
typedef struct PacFanoDecoder PacFanoDecoder;

/*
 A reusable list decoder bound to one code (opaque).
 */
typedef struct PacListDecoder PacListDecoder;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Build a code. `profile` is `"rm"` or `"polar"` (the latter uses
 `design_snr_db`); `generator` is the binary/octal tap string, e.g.
 `"1011011"` or `"0o133"`.

 # Safety
 `profile` and `generator` must be valid NUL-terminated C strings and
 `out` a valid pointer; the returned handle must be released with
 [`pac_code_destroy`].
 */
enum PacStatus pac_code_create(uint32_t n,
                               uint32_t k,
                               const char *profile,
                               double design_snr_db,
                               const char *generator,
                               struct PacCode **out);

/*
 Release a code handle. NULL is ignored.

 # Safety
 `code` must be NULL or a pointer from [`pac_code_create`], not yet freed.
 */
void pac_code_destroy(struct PacCode *code);

/*
 # Safety
 `code` must be a live handle from [`pac_code_create`].
 */
uint32_t pac_code_block_length(const struct PacCode *code);

/*
 # Safety
 `code` must be a live handle from [`pac_code_create`].
 */
uint32_t pac_code_dimension(const struct PacCode *code);

/*
 Encode `k` data bits (bytes 0/1) into `n` codeword bits.

 # Safety
 `data` must point to `k` readable bytes and `codeword` to `n` writable
 bytes for the handle's code.
 */
enum PacStatus pac_encode(const struct PacCode *code, const uint8_t *data, uint8_t *codeword);

/*
 Create a list decoder bound to the code.

 # Safety
 `code` must be a live handle and `out` a valid pointer; release the
 result with [`pac_list_decoder_destroy`].
 */
enum PacStatus pac_list_decoder_create(const struct PacCode *code,
                                       uint32_t list_size,
                                       struct PacListDecoder **out);

/*
 # Safety
 `dec` must be NULL or a pointer from [`pac_list_decoder_create`], not
 yet freed.
 */
void pac_list_decoder_destroy(struct PacListDecoder *dec);

/*
 Decode one frame of `n` channel LLRs (positive favors bit 0). Writes the
 best candidate's data bits, codeword bits, and path metric; any output
 pointer may be NULL to skip it.

 # Safety
 `llrs` must point to `n` readable doubles; non-NULL outputs must be
 writable for `k` bytes (`data_out`), `n` bytes (`codeword_out`), and one
 double (`metric_out`).
 */
enum PacStatus pac_list_decode(struct PacListDecoder *dec,
                               const double *llrs,
                               uint8_t *data_out,
                               uint8_t *codeword_out,
                               double *metric_out);

/*
 Create a Fano decoder. `bias_snr_db` selects the SNR at which the
 reliability-derived per-phase bias is computed.

 # Safety
 `code` must be a live handle and `out` a valid pointer; release the
 result with [`pac_fano_decoder_destroy`].
 */
enum PacStatus pac_fano_decoder_create(const struct PacCode *code,
                                       double delta,
                                       uint64_t cycle_cap,
                                       double bias_snr_db,
                                       struct PacFanoDecoder **out);

/*
 # Safety
 `dec` must be NULL or a pointer from [`pac_fano_decoder_create`], not
 yet freed.
 */
void pac_fano_decoder_destroy(struct PacFanoDecoder *dec);

/*
 Fano-decode one frame. On success writes the outputs as in
 [`pac_list_decode`] plus the consumed cycle count; returns
 `DecodeFailure` (cycles still written) when the cap is exhausted.

 # Safety
 Pointer contracts as in [`pac_list_decode`]; `cycles_out` may be NULL or
 must be writable for one u64.
 */
enum PacStatus pac_fano_decode(struct PacFanoDecoder *dec,
                               const double *llrs,
                               uint8_t *data_out,
                               uint8_t *codeword_out,
                               double *metric_out,
                               uint64_t *cycles_out);

/*
 Static description of a status code.
 */
const char *pac_status_message(enum PacStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PAC_CODES_H */
