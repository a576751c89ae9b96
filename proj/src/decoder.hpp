// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dataset.hpp"
#include "image.hpp"
#include "nn.hpp"

namespace sedd {

// The decoder: LeakyRelu+dropout hidden layers, Sigmoid output of size
// image_h*image_w*3. Trained with SGD on encoding/image pairs; whoever
// holds a trained decoder can decrypt.
struct DecoderModel {
    FeedForwardNet net;
    std::size_t image_h = 0;
    std::size_t image_w = 0;
    std::uint64_t seed = 0;

    std::size_t encoding_size() const { return net.input_dim(); }
    std::size_t output_dim() const { return net.output_dim(); }
};

struct TrainingConfig {
    float learning_rate = 0.01f;
    std::size_t batch_size = 32;
    std::size_t max_epochs = 20;
    double early_stop_test_mse = 0.075;
    std::size_t patience = 5;
    std::uint64_t shuffle_seed = 0;
};

enum class StopReason : std::uint8_t {
    ReachedThreshold = 0,
    Patience = 1,
    MaxEpochs = 2,
};

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double train_mse = 0.0;
    double test_mse = 0.0;
    double seconds = 0.0;
};

struct TrainingHistory {
    std::vector<EpochRecord> epochs;
    StopReason stop_reason = StopReason::MaxEpochs;
    std::size_t best_epoch = 0;
};

// Test-only seam: lets tests drive the measured test MSE directly.
struct TrainHooks {
    std::function<double(const DecoderModel&, const PairDataset&, std::size_t epoch)>
        test_eval;
};

DecoderModel init_decoder(std::size_t p, const std::vector<std::size_t>& hidden_sizes,
                          std::size_t image_h, std::size_t image_w, float alpha,
                          const std::vector<float>& dropout_rates, std::uint64_t seed);

// Per epoch: deterministic shuffle, mini-batch mean-gradient SGD with fresh
// dropout masks, then full train/test MSE in inference mode. Stops at the
// first epoch whose test MSE is below the threshold, after `patience`
// epochs without improvement, or at max_epochs. The model is restored to
// the epoch with the lowest test MSE (earliest on ties).
TrainingHistory train_decoder(DecoderModel& model, const PairDataset& dataset,
                              const TrainingConfig& config,
                              const TrainHooks* hooks = nullptr);

// Mean test-set MSE of a model, inference mode.
double dataset_mse(const DecoderModel& model, const PairDataset& dataset, Split split);

ImageRecord decode_image(const DecoderModel& model, const EncodingVector& x);

const char* stop_reason_name(StopReason r);

// CSV: header `epoch,train_mse,test_mse,seconds`, one row per epoch.
void write_history_csv(const TrainingHistory& history, const std::string& path);

}  // namespace sedd
