/* SPDX-License-Identifier: Apache-2.0
 *
 * C API for the SEDD (shallow encoder / deep decoder) image encryption
 * library. All functions return a sedd_status; on failure a thread-local
 * message is available via sedd_last_error(). Handles are opaque and
 * freed with their matching *_free function (NULL is accepted).
 */
#ifndef SEDD_H
#define SEDD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sedd_status {
    SEDD_OK = 0,
    SEDD_ERR_ARGUMENT = 1,
    SEDD_ERR_SHAPE = 2,
    SEDD_ERR_CONFIG = 3,
    SEDD_ERR_IO = 4,
    SEDD_ERR_FORMAT = 5,
    SEDD_ERR_CORRUPT = 6,
    SEDD_ERR_EMPTY_CORPUS = 7,
    SEDD_ERR_DIVERGED = 8,
    SEDD_ERR_VALIDITY = 9,
} sedd_status;

const char* sedd_status_name(int status);
/* Message for the most recent failure on this thread ("" if none). */
const char* sedd_last_error(void);

typedef struct sedd_encoder sedd_encoder;   /* the secret key */
typedef struct sedd_decoder sedd_decoder;
typedef struct sedd_images sedd_images;     /* an ordered image corpus */
typedef struct sedd_encodings sedd_encodings;
typedef struct sedd_pairs sedd_pairs;       /* encoding/target rows + split */
typedef struct sedd_history sedd_history;
typedef struct sedd_report sedd_report;

/* ---- encoder (key) ---- */

int sedd_encoder_create(uint32_t image_h, uint32_t image_w, uint32_t hidden_units,
                        uint32_t encoding_size, uint64_t seed, sedd_encoder** out);
int sedd_encoder_save(const sedd_encoder* enc, const char* path);
int sedd_encoder_load(const char* path, sedd_encoder** out);
uint64_t sedd_encoder_param_count(const sedd_encoder* enc);
uint32_t sedd_encoder_image_h(const sedd_encoder* enc);
uint32_t sedd_encoder_image_w(const sedd_encoder* enc);
uint32_t sedd_encoder_encoding_size(const sedd_encoder* enc);
void sedd_encoder_free(sedd_encoder* enc);

/* ---- image corpora ---- */

/* PNG/JPEG files in lexicographic filename order; limit 0 means all. */
int sedd_images_load_dir(const char* path, uint64_t limit, sedd_images** out);
int sedd_images_resize(sedd_images* imgs, uint32_t target_h, uint32_t target_w);
size_t sedd_images_count(const sedd_images* imgs);
void sedd_images_free(sedd_images* imgs);

/* ---- encodings (ciphertext) ---- */

int sedd_encode(const sedd_encoder* enc, const sedd_images* imgs,
                sedd_encodings** out);
int sedd_encodings_save(const sedd_encodings* encs, const char* path);
int sedd_encodings_load(const char* path, sedd_encodings** out);
size_t sedd_encodings_count(const sedd_encodings* encs);
uint32_t sedd_encodings_dim(const sedd_encodings* encs);
/* Copies row `index` into out[0..dim). */
int sedd_encodings_row(const sedd_encodings* encs, size_t index, float* out,
                       size_t out_len);
void sedd_encodings_free(sedd_encodings* encs);

/* ---- pair dataset ---- */

int sedd_pairs_build(const sedd_encoder* enc, const sedd_images* imgs,
                     sedd_pairs** out);
/* Pairs from a saved encodings file plus a targets file written in the
 * same row format (targets row length must equal image_h*image_w*3). */
int sedd_pairs_from_files(const char* encodings_path, const char* targets_path,
                          uint32_t image_h, uint32_t image_w, sedd_pairs** out);
/* Persist the target rows of a pair dataset (same row format as encodings). */
int sedd_pairs_save_targets(const sedd_pairs* pairs, const char* path);
int sedd_pairs_split(sedd_pairs* pairs, double test_fraction, uint64_t seed);
size_t sedd_pairs_count(const sedd_pairs* pairs);
void sedd_pairs_free(sedd_pairs* pairs);

/* ---- decoder ---- */

typedef struct sedd_training_config {
    float learning_rate;       /* default 0.01 */
    uint32_t batch_size;       /* default 32 */
    uint32_t max_epochs;       /* default 20 */
    double early_stop_test_mse; /* default 0.075 */
    uint32_t patience;         /* default 5 */
    uint64_t shuffle_seed;
} sedd_training_config;

void sedd_training_config_defaults(sedd_training_config* cfg);

int sedd_decoder_create(uint32_t encoding_size, const uint32_t* hidden_sizes,
                        size_t hidden_count, uint32_t image_h, uint32_t image_w,
                        float alpha, const float* dropout_rates, uint64_t seed,
                        sedd_decoder** out);
int sedd_decoder_train(sedd_decoder* dec, const sedd_pairs* pairs,
                       const sedd_training_config* cfg, sedd_history** out_history);
int sedd_decoder_save(const sedd_decoder* dec, const char* path);
int sedd_decoder_load(const char* path, sedd_decoder** out);
uint64_t sedd_decoder_param_count(const sedd_decoder* dec);
/* Decodes every encoding row and writes <out_dir>/decoded_NNNNN.png. */
int sedd_decode_to_dir(const sedd_decoder* dec, const sedd_encodings* encs,
                       const char* out_dir);
void sedd_decoder_free(sedd_decoder* dec);

/* ---- training history ---- */

size_t sedd_history_epochs(const sedd_history* h);
int sedd_history_row(const sedd_history* h, size_t epoch_index, double* train_mse,
                     double* test_mse, double* seconds);
/* 0 ReachedThreshold, 1 Patience, 2 MaxEpochs */
int sedd_history_stop_reason(const sedd_history* h);
int sedd_history_write_csv(const sedd_history* h, const char* path);
void sedd_history_free(sedd_history* h);

/* ---- evaluation and the captured-key attack ---- */

int sedd_evaluate(const sedd_decoder* dec, const sedd_pairs* pairs,
                  sedd_report** out);
int sedd_attack(const sedd_encoder* captured, const sedd_images* attacker_corpus,
                const sedd_pairs* defender_pairs, const sedd_training_config* cfg,
                const uint32_t* hidden_sizes, size_t hidden_count, float alpha,
                const float* dropout_rates, uint64_t attacker_seed,
                sedd_report** out);
double sedd_report_mean_mse(const sedd_report* r);
double sedd_report_baseline_mse(const sedd_report* r);
int sedd_report_write_csv(const sedd_report* r, const char* path);
/* Human-readable summary; returns required length excluding NUL. */
size_t sedd_report_summary(const sedd_report* r, char* buf, size_t buf_len);
void sedd_report_free(sedd_report* r);

#ifdef __cplusplus
}
#endif

#endif /* SEDD_H */
