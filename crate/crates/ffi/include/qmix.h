/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef QMIX_H
#define QMIX_H

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

/*
 Result of every fallible call.
 */
typedef enum QmixStatus {
  QMIX_STATUS_OK = 0,
  QMIX_STATUS_NULL_POINTER = 1,
  QMIX_STATUS_INVALID_ARGUMENT = 2,
  QMIX_STATUS_PARSE = 3,
  QMIX_STATUS_VALIDATION = 4,
  QMIX_STATUS_IO = 5,
  /*
   the operation does not apply to this kind of model
   */
  QMIX_STATUS_UNSUPPORTED = 6,
  /*
   the stationary state is not unique or not full rank
   */
  QMIX_STATUS_NOT_PRIMITIVE = 7,
  /*
   the fermionic drift has an eigenvalue with nonnegative real part
   */
  QMIX_STATUS_NOT_STABLE = 8,
  /*
   invalid regions or sites
   */
  QMIX_STATUS_REGION = 9,
  QMIX_STATUS_NUMERICAL = 10,
  QMIX_STATUS_PANIC = 11,
} QmixStatus;

typedef enum QmixModelKind {
  QMIX_MODEL_KIND_SPIN = 0,
  QMIX_MODEL_KIND_DAVIES = 1,
  QMIX_MODEL_KIND_FERMION = 2,
} QmixModelKind;

/*
 A dense matrix in row-major order; the imaginary part is zero for real
 results.
 */
typedef struct QmixMatrix QmixMatrix;

/*
 A parsed, validated and built model.
 */
typedef struct QmixModel QmixModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *qmix_version(void);

/*
 Message of the last failed call on this thread, or NULL after a
 successful call. Valid until the next call on this thread.
 */
const char *qmix_last_error(void);

/*
 Reads and builds a model from a JSON file.

 # Safety
 `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QmixStatus qmix_model_load(const char *path, struct QmixModel **out);

/*
 Builds a model from JSON text.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QmixStatus qmix_model_parse(const char *json, struct QmixModel **out);

/*
 Releases a model; NULL is ignored.

 # Safety
 `model` must come from `qmix_model_load` or `qmix_model_parse` and not
 have been freed.
 */
void qmix_model_free(struct QmixModel *model);

/*
 # Safety
 `model` must be a live handle and `out` a valid pointer.
 */
enum QmixStatus qmix_model_kind(const struct QmixModel *model, enum QmixModelKind *out);

/*
 Number of lattice sites (fermionic modes for fermion models).

 # Safety
 `model` must be a live handle and `out` a valid pointer.
 */
enum QmixStatus qmix_model_sites(const struct QmixModel *model, size_t *out);

/*
 Spectral gap of the generator.

 # Safety
 `model` must be a live handle and `out` a valid pointer.
 */
enum QmixStatus qmix_spectral_gap(const struct QmixModel *model, double *out);

/*
 χ² mixing constant λ_s; `Unsupported` when the generator is not
 s-reversible or the model is fermionic.

 # Safety
 `model` must be a live handle and `out` a valid pointer.
 */
enum QmixStatus qmix_chi2_constant(const struct QmixModel *model, double s, double *out);

/*
 Stationary state: the density matrix of a spin model or the Majorana
 covariance matrix of a fermion model.

 # Safety
 `model` must be a live handle and `out` a valid pointer.
 */
enum QmixStatus qmix_stationary_state(const struct QmixModel *model, struct QmixMatrix **out);

/*
 ‖σ⁻¹‖, the inverse of the smallest eigenvalue of the stationary state.

 # Safety
 `model` must be a live handle and `out` a valid pointer.
 */
enum QmixStatus qmix_inverse_norm(const struct QmixModel *model, double *out);

/*
 Mutual information I(A:B) of the stationary state in nats.

 # Safety
 `model` must be a live handle, `a` and `b` must point to `a_len` and
 `b_len` site indices, and `out` must be a valid pointer.
 */
enum QmixStatus qmix_mutual_information(const struct QmixModel *model,
                                        const size_t *a,
                                        size_t a_len,
                                        const size_t *b,
                                        size_t b_len,
                                        double *out);

/*
 # Safety
 `matrix` must be a live handle; `rows` and `cols` valid pointers.
 */
enum QmixStatus qmix_matrix_shape(const struct QmixMatrix *matrix, size_t *rows, size_t *cols);

/*
 Copies the entries in row-major order into buffers of `len` ≥ rows·cols
 doubles. `im` may be NULL to skip the imaginary part.

 # Safety
 `matrix` must be a live handle, `re` must hold `len` doubles and `im`
 must be NULL or hold `len` doubles.
 */
enum QmixStatus qmix_matrix_copy(const struct QmixMatrix *matrix,
                                 double *re,
                                 double *im,
                                 size_t len);

/*
 Releases a matrix; NULL is ignored.

 # Safety
 `matrix` must come from this library and not have been freed.
 */
void qmix_matrix_free(struct QmixMatrix *matrix);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QMIX_H */
