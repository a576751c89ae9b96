// SPDX-License-Identifier: Apache-2.0
//
// sedd — command line front end for the SEDD image encryption library.
// Every command is deterministic: identical inputs and flags produce
// byte-identical outputs. Seeds default to fixed constants; pass --seed
// from a secure source if a key is meant to be secret.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "sedd/sedd.h"

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultKeySeed = 1;
constexpr std::uint64_t kDefaultDecoderSeed = 2;
constexpr std::uint64_t kDefaultSplitSeed = 3;
constexpr std::uint64_t kDefaultShuffleSeed = 4;
constexpr std::uint64_t kDefaultAttackerSeed = 5;

[[noreturn]] void die(int status) {
    std::fprintf(stderr, "error: %s (%s)\n", sedd_last_error(),
                 sedd_status_name(status));
    std::exit(status);
}

void check(int status) {
    if (status != SEDD_OK) die(status);
}

[[noreturn]] void die_arg(const std::string& msg) {
    std::fprintf(stderr, "error: %s (argument error)\n", msg.c_str());
    std::exit(SEDD_ERR_ARGUMENT);
}

struct TrainFlags {
    float lr = 0.01f;
    std::uint32_t batch_size = 32;
    std::uint32_t max_epochs = 20;
    double threshold = 0.075;
    std::uint32_t patience = 5;
    std::uint64_t shuffle_seed = kDefaultShuffleSeed;
    float alpha = 0.2f;
    std::vector<std::uint32_t> hidden = {512, 512, 512};
    std::vector<float> dropout = {0.3f, 0.3f, 0.2f};
};

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
    cmd->add_option("--lr", f.lr, "SGD learning rate")->capture_default_str();
    cmd->add_option("--batch-size", f.batch_size, "mini-batch size")
        ->capture_default_str();
    cmd->add_option("--max-epochs", f.max_epochs, "epoch cap")
        ->capture_default_str();
    cmd->add_option("--threshold", f.threshold,
                    "early-stop test MSE threshold")
        ->capture_default_str();
    cmd->add_option("--patience", f.patience,
                    "stop after this many epochs without test improvement")
        ->capture_default_str();
    cmd->add_option("--shuffle-seed", f.shuffle_seed, "epoch shuffle seed")
        ->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "LeakyRelu slope")
        ->capture_default_str();
    cmd->add_option("--hidden", f.hidden,
                    "decoder hidden layer sizes")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--dropout", f.dropout,
                    "per-hidden-layer dropout rates")
        ->delimiter(',')
        ->capture_default_str();
}

sedd_training_config to_config(const TrainFlags& f) {
    sedd_training_config cfg;
    sedd_training_config_defaults(&cfg);
    cfg.learning_rate = f.lr;
    cfg.batch_size = f.batch_size;
    cfg.max_epochs = f.max_epochs;
    cfg.early_stop_test_mse = f.threshold;
    cfg.patience = f.patience;
    cfg.shuffle_seed = f.shuffle_seed;
    return cfg;
}

void validate_train_flags(const TrainFlags& f) {
    if (f.hidden.empty()) die_arg("--hidden needs at least one layer");
    if (f.hidden.size() != f.dropout.size()) {
        die_arg("--hidden and --dropout must have the same number of entries");
    }
}

sedd_images* load_resized(const std::string& dir, std::uint64_t limit,
                          const sedd_encoder* key) {
    sedd_images* imgs = nullptr;
    check(sedd_images_load_dir(dir.c_str(), limit, &imgs));
    check(sedd_images_resize(imgs, sedd_encoder_image_h(key),
                             sedd_encoder_image_w(key)));
    return imgs;
}

const char* stop_reason_text(int r) {
    switch (r) {
        case 0: return "ReachedThreshold";
        case 1: return "Patience";
        case 2: return "MaxEpochs";
    }
    return "?";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SEDD: image encryption with a random shallow encoder (the key) "
                 "and a trained deep decoder"};
    app.require_subcommand(1);

    // ---- init-encoder ----
    auto* c_init = app.add_subcommand("init-encoder", "generate a key (encoder) file");
    std::uint32_t height = 150, width = 150, hidden_units = 10, encoding_size = 1024;
    std::uint64_t key_seed = kDefaultKeySeed;
    std::string key_out;
    bool force = false;
    c_init->add_option("--height", height, "image height")
        ->capture_default_str();
    c_init->add_option("--width", width, "image width")
        ->capture_default_str();
    c_init->add_option("--hidden", hidden_units, "encoder hidden units")
        ->capture_default_str();
    c_init
        ->add_option("--encoding-size", encoding_size,
                     "encoding length p")
        ->capture_default_str();
    c_init->add_option("--seed", key_seed, "key seed; the seed IS the key")
        ->capture_default_str();
    c_init->add_option("--out", key_out, "output key file")->required();
    c_init->add_flag("--force", force, "overwrite an existing key file");

    // ---- encode ----
    auto* c_enc = app.add_subcommand("encode", "encrypt a directory of images");
    std::string enc_key, enc_images, enc_out;
    std::uint64_t enc_limit = 0;
    c_enc->add_option("--key", enc_key, "key (encoder) file")->required();
    c_enc->add_option("--images", enc_images, "directory of PNG/JPEG images")
        ->required();
    c_enc->add_option("--limit", enc_limit, "encode at most this many images (0 = all)")
        ->capture_default_str();
    c_enc->add_option("--out", enc_out, "output encodings file")->required();

    // ---- train ----
    auto* c_train = app.add_subcommand("train", "train a decoder on image/encoding pairs");
    std::string tr_key, tr_images, tr_encodings, tr_targets, tr_out, tr_history;
    std::uint64_t tr_limit = 0, tr_decoder_seed = kDefaultDecoderSeed,
                  tr_split_seed = kDefaultSplitSeed;
    double tr_test_fraction = 0.1;
    TrainFlags tr_flags;
    c_train->add_option("--key", tr_key, "key (encoder) file")->required();
    c_train->add_option("--images", tr_images, "directory of training images");
    c_train->add_option("--encodings", tr_encodings,
                        "prebuilt encodings file (with --targets, instead of --images)");
    c_train->add_option("--targets", tr_targets, "prebuilt targets file");
    c_train->add_option("--limit", tr_limit, "use at most this many images (0 = all)")
        ->capture_default_str();
    c_train->add_option("--out", tr_out, "output decoder file")->required();
    c_train->add_option("--history", tr_history, "write per-epoch CSV here");
    c_train->add_option("--decoder-seed", tr_decoder_seed, "decoder init seed")
        ->capture_default_str();
    c_train->add_option("--test-fraction", tr_test_fraction, "held-out fraction")
        ->capture_default_str();
    c_train->add_option("--split-seed", tr_split_seed, "train/test split seed")
        ->capture_default_str();
    add_train_flags(c_train, tr_flags);

    // ---- decode ----
    auto* c_dec = app.add_subcommand("decode", "decrypt an encodings file to PNGs");
    std::string dec_decoder, dec_encodings, dec_dir;
    c_dec->add_option("--decoder", dec_decoder, "trained decoder file")->required();
    c_dec->add_option("--encodings", dec_encodings, "encodings file")->required();
    c_dec->add_option("--out-dir", dec_dir, "output directory for decoded_NNNNN.png")
        ->required();

    // ---- eval ----
    auto* c_eval = app.add_subcommand("eval", "score a decoder on a held-out split");
    std::string ev_decoder, ev_key, ev_images, ev_out;
    std::uint64_t ev_limit = 0, ev_split_seed = kDefaultSplitSeed;
    double ev_test_fraction = 0.1;
    c_eval->add_option("--decoder", ev_decoder, "trained decoder file")->required();
    c_eval->add_option("--key", ev_key, "key (encoder) file")->required();
    c_eval->add_option("--images", ev_images, "directory of images")->required();
    c_eval->add_option("--limit", ev_limit, "use at most this many images (0 = all)")
        ->capture_default_str();
    c_eval->add_option("--test-fraction", ev_test_fraction, "held-out fraction")
        ->capture_default_str();
    c_eval->add_option("--split-seed", ev_split_seed, "train/test split seed")
        ->capture_default_str();
    c_eval->add_option("--out", ev_out, "write source_id,mse,psnr CSV here");

    // ---- attack ----
    auto* c_atk = app.add_subcommand(
        "attack", "train an adversary decoder from a captured key and score it");
    std::string ak_key, ak_attacker_images, ak_images, ak_out;
    std::uint64_t ak_limit = 0, ak_attacker_seed = kDefaultAttackerSeed,
                  ak_split_seed = kDefaultSplitSeed;
    double ak_test_fraction = 0.1;
    TrainFlags ak_flags;
    c_atk->add_option("--key", ak_key, "captured key (encoder) file")->required();
    c_atk->add_option("--attacker-images", ak_attacker_images,
                      "attacker's own image directory (disjoint from defender's)")
        ->required();
    c_atk->add_option("--images", ak_images, "defender's image directory")->required();
    c_atk->add_option("--limit", ak_limit, "per-corpus image cap (0 = all)")
        ->capture_default_str();
    c_atk->add_option("--attacker-seed", ak_attacker_seed, "adversary decoder seed")
        ->capture_default_str();
    c_atk->add_option("--test-fraction", ak_test_fraction,
                      "defender held-out fraction")
        ->capture_default_str();
    c_atk->add_option("--split-seed", ak_split_seed, "defender split seed")
        ->capture_default_str();
    c_atk->add_option("--out", ak_out, "write attack report CSV here");
    add_train_flags(c_atk, ak_flags);

    CLI11_PARSE(app, argc, argv);

    if (c_init->parsed()) {
        if (encoding_size == 0 || hidden_units == 0 || height == 0 || width == 0) {
            die_arg("dimensions must be positive");
        }
        if (fs::exists(key_out) && !force) {
            die_arg("refusing to overwrite existing key file " + key_out +
                    " (pass --force)");
        }
        sedd_encoder* enc = nullptr;
        check(sedd_encoder_create(height, width, hidden_units, encoding_size,
                                  key_seed, &enc));
        check(sedd_encoder_save(enc, key_out.c_str()));
        std::printf("wrote key %s (%llu parameters, %ux%u images -> %u values)\n",
                    key_out.c_str(),
                    static_cast<unsigned long long>(sedd_encoder_param_count(enc)),
                    height, width, encoding_size);
        sedd_encoder_free(enc);
        return 0;
    }

    if (c_enc->parsed()) {
        sedd_encoder* key = nullptr;
        check(sedd_encoder_load(enc_key.c_str(), &key));
        sedd_images* imgs = load_resized(enc_images, enc_limit, key);
        sedd_encodings* encs = nullptr;
        check(sedd_encode(key, imgs, &encs));
        check(sedd_encodings_save(encs, enc_out.c_str()));
        std::printf("encoded %zu images -> %s (%ju bytes)\n",
                    sedd_encodings_count(encs), enc_out.c_str(),
                    static_cast<uintmax_t>(fs::file_size(enc_out)));
        sedd_encodings_free(encs);
        sedd_images_free(imgs);
        sedd_encoder_free(key);
        return 0;
    }

    if (c_train->parsed()) {
        validate_train_flags(tr_flags);
        const bool from_files = !tr_encodings.empty() || !tr_targets.empty();
        if (from_files && (tr_encodings.empty() || tr_targets.empty())) {
            die_arg("--encodings and --targets must be given together");
        }
        if (from_files == !tr_images.empty()) {
            die_arg("give either --images or --encodings/--targets");
        }
        sedd_encoder* key = nullptr;
        check(sedd_encoder_load(tr_key.c_str(), &key));
        sedd_pairs* pairs = nullptr;
        if (from_files) {
            check(sedd_pairs_from_files(tr_encodings.c_str(), tr_targets.c_str(),
                                        sedd_encoder_image_h(key),
                                        sedd_encoder_image_w(key), &pairs));
        } else {
            sedd_images* imgs = load_resized(tr_images, tr_limit, key);
            check(sedd_pairs_build(key, imgs, &pairs));
            sedd_images_free(imgs);
        }
        check(sedd_pairs_split(pairs, tr_test_fraction, tr_split_seed));

        sedd_decoder* dec = nullptr;
        std::vector<float> rates(tr_flags.dropout.begin(), tr_flags.dropout.end());
        check(sedd_decoder_create(sedd_encoder_encoding_size(key),
                                  tr_flags.hidden.data(), tr_flags.hidden.size(),
                                  sedd_encoder_image_h(key),
                                  sedd_encoder_image_w(key), tr_flags.alpha,
                                  rates.data(), tr_decoder_seed, &dec));
        const sedd_training_config cfg = to_config(tr_flags);
        sedd_history* hist = nullptr;
        check(sedd_decoder_train(dec, pairs, &cfg, &hist));
        check(sedd_decoder_save(dec, tr_out.c_str()));
        if (!tr_history.empty()) {
            check(sedd_history_write_csv(hist, tr_history.c_str()));
        }
        const std::size_t epochs = sedd_history_epochs(hist);
        double train_mse = 0, test_mse = 0;
        sedd_history_row(hist, epochs - 1, &train_mse, &test_mse, nullptr);
        std::printf("trained %zu epochs (%s); final train mse %.6f, test mse %.6f\n",
                    epochs, stop_reason_text(sedd_history_stop_reason(hist)),
                    train_mse, test_mse);
        std::printf("wrote decoder %s (%llu parameters)\n", tr_out.c_str(),
                    static_cast<unsigned long long>(sedd_decoder_param_count(dec)));
        sedd_history_free(hist);
        sedd_decoder_free(dec);
        sedd_pairs_free(pairs);
        sedd_encoder_free(key);
        return 0;
    }

    if (c_dec->parsed()) {
        sedd_decoder* dec = nullptr;
        check(sedd_decoder_load(dec_decoder.c_str(), &dec));
        sedd_encodings* encs = nullptr;
        check(sedd_encodings_load(dec_encodings.c_str(), &encs));
        check(sedd_decode_to_dir(dec, encs, dec_dir.c_str()));
        std::printf("decoded %zu images into %s\n", sedd_encodings_count(encs),
                    dec_dir.c_str());
        sedd_encodings_free(encs);
        sedd_decoder_free(dec);
        return 0;
    }

    if (c_eval->parsed()) {
        sedd_decoder* dec = nullptr;
        check(sedd_decoder_load(ev_decoder.c_str(), &dec));
        sedd_encoder* key = nullptr;
        check(sedd_encoder_load(ev_key.c_str(), &key));
        sedd_images* imgs = load_resized(ev_images, ev_limit, key);
        sedd_pairs* pairs = nullptr;
        check(sedd_pairs_build(key, imgs, &pairs));
        check(sedd_pairs_split(pairs, ev_test_fraction, ev_split_seed));
        sedd_report* rep = nullptr;
        check(sedd_evaluate(dec, pairs, &rep));
        if (!ev_out.empty()) check(sedd_report_write_csv(rep, ev_out.c_str()));
        std::vector<char> buf(sedd_report_summary(rep, nullptr, 0) + 1);
        sedd_report_summary(rep, buf.data(), buf.size());
        std::fputs(buf.data(), stdout);
        sedd_report_free(rep);
        sedd_pairs_free(pairs);
        sedd_images_free(imgs);
        sedd_encoder_free(key);
        sedd_decoder_free(dec);
        return 0;
    }

    if (c_atk->parsed()) {
        validate_train_flags(ak_flags);
        sedd_encoder* key = nullptr;
        check(sedd_encoder_load(ak_key.c_str(), &key));
        sedd_images* defender = load_resized(ak_images, ak_limit, key);
        sedd_images* attacker = load_resized(ak_attacker_images, ak_limit, key);
        sedd_pairs* pairs = nullptr;
        check(sedd_pairs_build(key, defender, &pairs));
        check(sedd_pairs_split(pairs, ak_test_fraction, ak_split_seed));
        const sedd_training_config cfg = to_config(ak_flags);
        std::vector<float> rates(ak_flags.dropout.begin(), ak_flags.dropout.end());
        sedd_report* rep = nullptr;
        check(sedd_attack(key, attacker, pairs, &cfg, ak_flags.hidden.data(),
                          ak_flags.hidden.size(), ak_flags.alpha, rates.data(),
                          ak_attacker_seed, &rep));
        if (!ak_out.empty()) check(sedd_report_write_csv(rep, ak_out.c_str()));
        std::vector<char> buf(sedd_report_summary(rep, nullptr, 0) + 1);
        sedd_report_summary(rep, buf.data(), buf.size());
        std::fputs(buf.data(), stdout);
        sedd_report_free(rep);
        sedd_pairs_free(pairs);
        sedd_images_free(attacker);
        sedd_images_free(defender);
        sedd_encoder_free(key);
        return 0;
    }

    return 0;
}
