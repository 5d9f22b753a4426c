#ifndef SELFORG_H
#define SELFORG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum SelforgStatus {
  SELFORG_STATUS_OK = 0,
  SELFORG_STATUS_NULL_POINTER = 1,
  SELFORG_STATUS_INVALID_ARGUMENT = 2,
  SELFORG_STATUS_DIMENSION_MISMATCH = 3,
  SELFORG_STATUS_PARSE = 4,
  SELFORG_STATUS_IO = 5,
  SELFORG_STATUS_BUFFER_TOO_SMALL = 6,
  SELFORG_STATUS_FAILED = 7,
  SELFORG_STATUS_PANIC = 8,
} SelforgStatus;

typedef enum SelforgModelKind {
  SELFORG_MODEL_KIND_SOM = 0,
  SELFORG_MODEL_KIND_GCS = 1,
  SELFORG_MODEL_KIND_GNG = 2,
  SELFORG_MODEL_KIND_SOTA = 3,
} SelforgModelKind;

/**
 * Training configuration: model kind plus `key = value` parameters.
 */
typedef struct SelforgConfig SelforgConfig;

/**
 * An immutable dataset.
 */
typedef struct SelforgDataset SelforgDataset;

/**
 * A trained model in its exported form.
 */
typedef struct SelforgModel SelforgModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *selforg_last_error(void);

/**
 * Copies `rows * dim` row-major values into a new dataset.
 *
 * # Safety
 * `values` must point to `rows * dim` readable doubles; `out` must be writable.
 */
enum SelforgStatus selforg_dataset_from_buffer(const double *values,
                                               size_t rows,
                                               size_t dim,
                                               struct SelforgDataset **out);

/**
 * Reads a dataset CSV file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum SelforgStatus selforg_dataset_from_csv(const char *path,
                                            bool has_header,
                                            struct SelforgDataset **out);

/**
 * `n` points uniform in the box `[low, high]` of dimension `dim`.
 *
 * # Safety
 * `low` and `high` must point to `dim` doubles; `out` must be writable.
 */
enum SelforgStatus selforg_synth_uniform(const double *low,
                                         const double *high,
                                         size_t dim,
                                         size_t n,
                                         uint64_t seed,
                                         struct SelforgDataset **out);

/**
 * `n` points from `k` isotropic Gaussians; `centers` is `k * dim` row-major.
 * Labels are the component indices.
 *
 * # Safety
 * `centers` must point to `k * dim` doubles, `sigmas` and `weights` to `k`.
 */
enum SelforgStatus selforg_synth_mixture(const double *centers,
                                         const double *sigmas,
                                         const double *weights,
                                         size_t k,
                                         size_t dim,
                                         size_t n,
                                         uint64_t seed,
                                         struct SelforgDataset **out);

/**
 * `n` points in two `side x side` squares separated horizontally by `gap`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SelforgStatus selforg_synth_two_squares(double side,
                                             double gap,
                                             size_t n,
                                             uint64_t seed,
                                             struct SelforgDataset **out);

/**
 * # Safety
 * `data` must be null or a handle from this library, not used afterwards.
 */
void selforg_dataset_free(struct SelforgDataset *data);

/**
 * Row count, or 0 for a null handle.
 *
 * # Safety
 * `data` must be null or a live handle.
 */
size_t selforg_dataset_rows(const struct SelforgDataset *data);

/**
 * Dimension, or 0 for a null handle.
 *
 * # Safety
 * `data` must be null or a live handle.
 */
size_t selforg_dataset_dim(const struct SelforgDataset *data);

/**
 * Copies the labels into `out`. Fails with `InvalidArgument` when the dataset has none.
 *
 * # Safety
 * `data` must be a live handle; `out` must hold `len` integers.
 */
enum SelforgStatus selforg_dataset_labels(const struct SelforgDataset *data,
                                          int64_t *out,
                                          size_t len);

/**
 * Defaults for `kind`. Never null.
 */
struct SelforgConfig *selforg_config_new(enum SelforgModelKind kind);

/**
 * Sets one parameter using the config-file key names, e.g. `gng.max_age`.
 *
 * # Safety
 * `config` must be a live handle; `key` and `value` NUL-terminated strings.
 */
enum SelforgStatus selforg_config_set(struct SelforgConfig *config,
                                      const char *key,
                                      const char *value);

/**
 * # Safety
 * `config` must be null or a handle from this library, not used afterwards.
 */
void selforg_config_free(struct SelforgConfig *config);

/**
 * Trains on `data` with `config`.
 *
 * # Safety
 * `config` and `data` must be live handles; `out` must be writable.
 */
enum SelforgStatus selforg_train(const struct SelforgConfig *config,
                                 const struct SelforgDataset *data,
                                 struct SelforgModel **out);

/**
 * # Safety
 * `model` must be null or a handle from this library, not used afterwards.
 */
void selforg_model_free(struct SelforgModel *model);

/**
 * Stored units (every tree node for SOTA), or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t selforg_model_n_units(const struct SelforgModel *model);

/**
 * Units that compete for inputs (the leaves for SOTA), or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t selforg_model_n_competing(const struct SelforgModel *model);

/**
 * Input dimension, or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t selforg_model_dim(const struct SelforgModel *model);

/**
 * Edge count of the exported graph or tree, or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t selforg_model_n_edges(const struct SelforgModel *model);

/**
 * Copies unit ids into `ids` and row-major reference vectors into `vectors`,
 * in id order. Sizes: `n_units` and `n_units * dim`.
 *
 * # Safety
 * `model` must be a live handle; `ids` and `vectors` must hold `ids_len` and
 * `vectors_len` elements.
 */
enum SelforgStatus selforg_model_codebook(const struct SelforgModel *model,
                                          size_t *ids,
                                          size_t ids_len,
                                          double *vectors,
                                          size_t vectors_len);

/**
 * Writes the winning unit id of every row of `data` into `out`.
 *
 * # Safety
 * `model` and `data` must be live handles; `out` must hold `len` elements.
 */
enum SelforgStatus selforg_model_assign(const struct SelforgModel *model,
                                        const struct SelforgDataset *data,
                                        size_t *out,
                                        size_t len);

/**
 * Mean distance from each row of `data` to its winning unit.
 *
 * # Safety
 * `model` and `data` must be live handles; `out` must be writable.
 */
enum SelforgStatus selforg_model_quantization_error(const struct SelforgModel *model,
                                                    const struct SelforgDataset *data,
                                                    double *out);

/**
 * Connected components of the exported graph (1 for a grid or a tree).
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum SelforgStatus selforg_model_components(const struct SelforgModel *model, size_t *out);

/**
 * Writes the command line tool's artifact set into `dir`. Assignments,
 * metrics and SOM hit counts are computed on `data`.
 *
 * # Safety
 * `model` and `data` must be live handles; `dir` a NUL-terminated string.
 */
enum SelforgStatus selforg_model_write(const struct SelforgModel *model,
                                       const struct SelforgDataset *data,
                                       const char *dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SELFORG_H */
