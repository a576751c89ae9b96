// SPDX-License-Identifier: Apache-2.0
#include "sedd/sedd.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "codec.hpp"
#include "dataset.hpp"
#include "decoder.hpp"
#include "encoder.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "image_io.hpp"

using namespace sedd;

struct sedd_encoder {
    EncoderModel model;
};
struct sedd_decoder {
    DecoderModel model;
    float alpha = 0.2f;
};
struct sedd_images {
    std::vector<ImageRecord> images;
    std::size_t skipped = 0;
};
struct sedd_encodings {
    std::vector<FloatVector> rows;
};
struct sedd_pairs {
    PairDataset ds;
};
struct sedd_history {
    TrainingHistory history;
};
struct sedd_report {
    ReconstructionReport report;
};

namespace {

thread_local std::string g_last_error;

int fail(int status, const std::string& msg) {
    g_last_error = msg;
    return status;
}

int fail(const Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return SEDD_OK;
    } catch (const Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        return fail(SEDD_ERR_IO, e.what());
    }
}

int require(bool ok, const char* msg) {
    return ok ? SEDD_OK : fail(SEDD_ERR_ARGUMENT, msg);
}

}  // namespace

extern "C" {

const char* sedd_status_name(int status) {
    switch (status) {
        case SEDD_OK: return "ok";
        case SEDD_ERR_ARGUMENT: return "argument error";
        case SEDD_ERR_SHAPE: return "shape error";
        case SEDD_ERR_CONFIG: return "config error";
        case SEDD_ERR_IO: return "i/o error";
        case SEDD_ERR_FORMAT: return "format error";
        case SEDD_ERR_CORRUPT: return "corrupt file";
        case SEDD_ERR_EMPTY_CORPUS: return "empty corpus";
        case SEDD_ERR_DIVERGED: return "training diverged";
        case SEDD_ERR_VALIDITY: return "experiment validity error";
    }
    return "unknown error";
}

const char* sedd_last_error(void) { return g_last_error.c_str(); }

/* ---- encoder ---- */

int sedd_encoder_create(uint32_t image_h, uint32_t image_w, uint32_t hidden_units,
                        uint32_t encoding_size, uint64_t seed, sedd_encoder** out) {
    if (int rc = require(out != nullptr, "out is NULL")) return rc;
    return guarded([&] {
        auto enc = std::make_unique<sedd_encoder>();
        enc->model = init_encoder(image_h, image_w, hidden_units, encoding_size, seed);
        *out = enc.release();
    });
}

int sedd_encoder_save(const sedd_encoder* enc, const char* path) {
    if (int rc = require(enc && path, "encoder/path is NULL")) return rc;
    return guarded([&] { save_encoder(enc->model, path); });
}

int sedd_encoder_load(const char* path, sedd_encoder** out) {
    if (int rc = require(path && out, "path/out is NULL")) return rc;
    return guarded([&] {
        auto enc = std::make_unique<sedd_encoder>();
        enc->model = load_encoder(path);
        *out = enc.release();
    });
}

uint64_t sedd_encoder_param_count(const sedd_encoder* enc) {
    return enc ? count_encoder_params(enc->model) : 0;
}
uint32_t sedd_encoder_image_h(const sedd_encoder* enc) {
    return enc ? static_cast<uint32_t>(enc->model.image_h) : 0;
}
uint32_t sedd_encoder_image_w(const sedd_encoder* enc) {
    return enc ? static_cast<uint32_t>(enc->model.image_w) : 0;
}
uint32_t sedd_encoder_encoding_size(const sedd_encoder* enc) {
    return enc ? static_cast<uint32_t>(enc->model.encoding_size()) : 0;
}
void sedd_encoder_free(sedd_encoder* enc) { delete enc; }

/* ---- images ---- */

int sedd_images_load_dir(const char* path, uint64_t limit, sedd_images** out) {
    if (int rc = require(path && out, "path/out is NULL")) return rc;
    return guarded([&] {
        auto imgs = std::make_unique<sedd_images>();
        std::optional<std::size_t> lim;
        if (limit > 0) lim = static_cast<std::size_t>(limit);
        CorpusLoadResult res = load_image_dir(path, lim);
        imgs->images = std::move(res.images);
        imgs->skipped = res.skipped;
        *out = imgs.release();
    });
}

int sedd_images_resize(sedd_images* imgs, uint32_t target_h, uint32_t target_w) {
    if (int rc = require(imgs && target_h > 0 && target_w > 0,
                         "images NULL or target size zero"))
        return rc;
    return guarded([&] {
        for (ImageRecord& img : imgs->images) {
            img = resize_image(img, target_h, target_w);
        }
    });
}

size_t sedd_images_count(const sedd_images* imgs) {
    return imgs ? imgs->images.size() : 0;
}
void sedd_images_free(sedd_images* imgs) { delete imgs; }

/* ---- encodings ---- */

int sedd_encode(const sedd_encoder* enc, const sedd_images* imgs,
                sedd_encodings** out) {
    if (int rc = require(enc && imgs && out, "NULL argument")) return rc;
    return guarded([&] {
        auto encs = std::make_unique<sedd_encodings>();
        encs->rows.reserve(imgs->images.size());
        for (const ImageRecord& img : imgs->images) {
            encs->rows.push_back(encode_image(enc->model, img));
        }
        *out = encs.release();
    });
}

int sedd_encodings_save(const sedd_encodings* encs, const char* path) {
    if (int rc = require(encs && path, "NULL argument")) return rc;
    return guarded([&] { save_encodings(encs->rows, path); });
}

int sedd_encodings_load(const char* path, sedd_encodings** out) {
    if (int rc = require(path && out, "NULL argument")) return rc;
    return guarded([&] {
        auto encs = std::make_unique<sedd_encodings>();
        encs->rows = load_encodings(path);
        *out = encs.release();
    });
}

size_t sedd_encodings_count(const sedd_encodings* encs) {
    return encs ? encs->rows.size() : 0;
}
uint32_t sedd_encodings_dim(const sedd_encodings* encs) {
    return (encs && !encs->rows.empty())
               ? static_cast<uint32_t>(encs->rows.front().size())
               : 0;
}

int sedd_encodings_row(const sedd_encodings* encs, size_t index, float* out,
                       size_t out_len) {
    if (int rc = require(encs && out, "NULL argument")) return rc;
    if (index >= encs->rows.size()) return fail(SEDD_ERR_ARGUMENT, "row out of range");
    const FloatVector& row = encs->rows[index];
    if (out_len < row.size()) return fail(SEDD_ERR_ARGUMENT, "buffer too small");
    std::memcpy(out, row.data(), row.size() * sizeof(float));
    return SEDD_OK;
}

void sedd_encodings_free(sedd_encodings* encs) { delete encs; }

/* ---- pairs ---- */

int sedd_pairs_build(const sedd_encoder* enc, const sedd_images* imgs,
                     sedd_pairs** out) {
    if (int rc = require(enc && imgs && out, "NULL argument")) return rc;
    return guarded([&] {
        auto pairs = std::make_unique<sedd_pairs>();
        pairs->ds = build_encoding_pairs(enc->model, imgs->images);
        *out = pairs.release();
    });
}

int sedd_pairs_from_files(const char* encodings_path, const char* targets_path,
                          uint32_t image_h, uint32_t image_w, sedd_pairs** out) {
    if (int rc = require(encodings_path && targets_path && out, "NULL argument"))
        return rc;
    return guarded([&] {
        auto pairs = std::make_unique<sedd_pairs>();
        std::vector<FloatVector> encodings = load_encodings(encodings_path);
        std::vector<FloatVector> targets = load_encodings(targets_path);
        if (encodings.size() != targets.size()) {
            throw ShapeError("encoding/target row counts differ: " +
                             std::to_string(encodings.size()) + " vs " +
                             std::to_string(targets.size()));
        }
        const std::size_t n = static_cast<std::size_t>(image_h) * image_w * 3;
        for (const FloatVector& t : targets) {
            if (t.size() != n) {
                throw ShapeError("target row length " + std::to_string(t.size()) +
                                 " does not match " + std::to_string(image_h) + "x" +
                                 std::to_string(image_w) + "x3");
            }
        }
        pairs->ds.encoding_dim = encodings.empty() ? 0 : encodings.front().size();
        pairs->ds.target_dim = n;
        pairs->ds.encodings = std::move(encodings);
        pairs->ds.targets = std::move(targets);
        pairs->ds.source_ids.assign(pairs->ds.encodings.size(), "");
        *out = pairs.release();
    });
}

int sedd_pairs_save_targets(const sedd_pairs* pairs, const char* path) {
    if (int rc = require(pairs && path, "NULL argument")) return rc;
    return guarded([&] { save_encodings(pairs->ds.targets, path); });
}

int sedd_pairs_split(sedd_pairs* pairs, double test_fraction, uint64_t seed) {
    if (int rc = require(pairs != nullptr, "pairs is NULL")) return rc;
    return guarded([&] { split_dataset(pairs->ds, test_fraction, seed); });
}

size_t sedd_pairs_count(const sedd_pairs* pairs) {
    return pairs ? pairs->ds.size() : 0;
}
void sedd_pairs_free(sedd_pairs* pairs) { delete pairs; }

/* ---- decoder ---- */

void sedd_training_config_defaults(sedd_training_config* cfg) {
    if (!cfg) return;
    cfg->learning_rate = 0.01f;
    cfg->batch_size = 32;
    cfg->max_epochs = 20;
    cfg->early_stop_test_mse = 0.075;
    cfg->patience = 5;
    cfg->shuffle_seed = 0;
}

namespace {

TrainingConfig to_core_config(const sedd_training_config& cfg) {
    TrainingConfig c;
    c.learning_rate = cfg.learning_rate;
    c.batch_size = cfg.batch_size;
    c.max_epochs = cfg.max_epochs;
    c.early_stop_test_mse = cfg.early_stop_test_mse;
    c.patience = cfg.patience;
    c.shuffle_seed = cfg.shuffle_seed;
    return c;
}

}  // namespace

int sedd_decoder_create(uint32_t encoding_size, const uint32_t* hidden_sizes,
                        size_t hidden_count, uint32_t image_h, uint32_t image_w,
                        float alpha, const float* dropout_rates, uint64_t seed,
                        sedd_decoder** out) {
    if (int rc = require(hidden_sizes && dropout_rates && out, "NULL argument"))
        return rc;
    return guarded([&] {
        std::vector<std::size_t> hidden(hidden_sizes, hidden_sizes + hidden_count);
        std::vector<float> rates(dropout_rates, dropout_rates + hidden_count);
        auto dec = std::make_unique<sedd_decoder>();
        dec->model = init_decoder(encoding_size, hidden, image_h, image_w, alpha,
                                  rates, seed);
        dec->alpha = alpha;
        *out = dec.release();
    });
}

int sedd_decoder_train(sedd_decoder* dec, const sedd_pairs* pairs,
                       const sedd_training_config* cfg, sedd_history** out_history) {
    if (int rc = require(dec && pairs && cfg, "NULL argument")) return rc;
    return guarded([&] {
        TrainingHistory h = train_decoder(dec->model, pairs->ds, to_core_config(*cfg));
        if (out_history) {
            auto hist = std::make_unique<sedd_history>();
            hist->history = std::move(h);
            *out_history = hist.release();
        }
    });
}

int sedd_decoder_save(const sedd_decoder* dec, const char* path) {
    if (int rc = require(dec && path, "NULL argument")) return rc;
    return guarded([&] { save_decoder(dec->model, path); });
}

int sedd_decoder_load(const char* path, sedd_decoder** out) {
    if (int rc = require(path && out, "NULL argument")) return rc;
    return guarded([&] {
        auto dec = std::make_unique<sedd_decoder>();
        dec->model = load_decoder(path);
        dec->alpha = dec->model.net.alpha;
        *out = dec.release();
    });
}

uint64_t sedd_decoder_param_count(const sedd_decoder* dec) {
    return dec ? dec->model.net.param_count() : 0;
}

int sedd_decode_to_dir(const sedd_decoder* dec, const sedd_encodings* encs,
                       const char* out_dir) {
    if (int rc = require(dec && encs && out_dir, "NULL argument")) return rc;
    return guarded([&] {
        std::filesystem::create_directories(out_dir);
        char name[32];
        for (std::size_t i = 0; i < encs->rows.size(); ++i) {
            const ImageRecord img = decode_image(dec->model, encs->rows[i]);
            std::snprintf(name, sizeof(name), "decoded_%05zu.png", i);
            save_png(img, (std::filesystem::path(out_dir) / name).string());
        }
    });
}

void sedd_decoder_free(sedd_decoder* dec) { delete dec; }

/* ---- history ---- */

size_t sedd_history_epochs(const sedd_history* h) {
    return h ? h->history.epochs.size() : 0;
}

int sedd_history_row(const sedd_history* h, size_t epoch_index, double* train_mse,
                     double* test_mse, double* seconds) {
    if (int rc = require(h != nullptr, "history is NULL")) return rc;
    if (epoch_index >= h->history.epochs.size()) {
        return fail(SEDD_ERR_ARGUMENT, "epoch index out of range");
    }
    const EpochRecord& r = h->history.epochs[epoch_index];
    if (train_mse) *train_mse = r.train_mse;
    if (test_mse) *test_mse = r.test_mse;
    if (seconds) *seconds = r.seconds;
    return SEDD_OK;
}

int sedd_history_stop_reason(const sedd_history* h) {
    return h ? static_cast<int>(h->history.stop_reason) : -1;
}

int sedd_history_write_csv(const sedd_history* h, const char* path) {
    if (int rc = require(h && path, "NULL argument")) return rc;
    return guarded([&] { write_history_csv(h->history, path); });
}

void sedd_history_free(sedd_history* h) { delete h; }

/* ---- evaluation ---- */

int sedd_evaluate(const sedd_decoder* dec, const sedd_pairs* pairs,
                  sedd_report** out) {
    if (int rc = require(dec && pairs && out, "NULL argument")) return rc;
    return guarded([&] {
        auto rep = std::make_unique<sedd_report>();
        rep->report = evaluate_decoder(dec->model, pairs->ds, Split::Test);
        *out = rep.release();
    });
}

int sedd_attack(const sedd_encoder* captured, const sedd_images* attacker_corpus,
                const sedd_pairs* defender_pairs, const sedd_training_config* cfg,
                const uint32_t* hidden_sizes, size_t hidden_count, float alpha,
                const float* dropout_rates, uint64_t attacker_seed,
                sedd_report** out) {
    if (int rc = require(captured && attacker_corpus && defender_pairs && cfg &&
                             hidden_sizes && dropout_rates && out,
                         "NULL argument"))
        return rc;
    return guarded([&] {
        std::vector<std::size_t> hidden(hidden_sizes, hidden_sizes + hidden_count);
        std::vector<float> rates(dropout_rates, dropout_rates + hidden_count);
        auto rep = std::make_unique<sedd_report>();
        rep->report = adversary_attack(captured->model, attacker_corpus->images,
                                       defender_pairs->ds, to_core_config(*cfg),
                                       hidden, rates, alpha, attacker_seed);
        *out = rep.release();
    });
}

double sedd_report_mean_mse(const sedd_report* r) {
    return r ? r->report.mean_mse : -1.0;
}
double sedd_report_baseline_mse(const sedd_report* r) {
    return r ? r->report.baseline_mse : -1.0;
}

int sedd_report_write_csv(const sedd_report* r, const char* path) {
    if (int rc = require(r && path, "NULL argument")) return rc;
    return guarded([&] { write_report_csv(r->report, path); });
}

size_t sedd_report_summary(const sedd_report* r, char* buf, size_t buf_len) {
    if (!r) return 0;
    const std::string s = report_summary(r->report);
    if (buf && buf_len > 0) {
        const std::size_t n = std::min(buf_len - 1, s.size());
        std::memcpy(buf, s.data(), n);
        buf[n] = '\0';
    }
    return s.size();
}

void sedd_report_free(sedd_report* r) { delete r; }

}  // extern "C"
