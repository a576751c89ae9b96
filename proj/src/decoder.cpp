// SPDX-License-Identifier: Apache-2.0
#include "decoder.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "error.hpp"
#include "rng.hpp"

namespace sedd {

DecoderModel init_decoder(std::size_t p, const std::vector<std::size_t>& hidden_sizes,
                          std::size_t image_h, std::size_t image_w, float alpha,
                          const std::vector<float>& dropout_rates, std::uint64_t seed) {
    if (hidden_sizes.empty()) {
        throw ConfigError("init_decoder: need at least one hidden layer");
    }
    if (hidden_sizes.size() != dropout_rates.size()) {
        throw ConfigError("init_decoder: " + std::to_string(hidden_sizes.size()) +
                          " hidden sizes but " + std::to_string(dropout_rates.size()) +
                          " dropout rates");
    }
    if (p == 0 || image_h == 0 || image_w == 0) {
        throw ConfigError("init_decoder: dimensions must be positive");
    }
    for (float r : dropout_rates) {
        if (!(r >= 0.0f && r < 1.0f)) {
            throw ConfigError("init_decoder: dropout rate must be in [0,1)");
        }
    }
    if (!(alpha >= 0.0f && alpha < 1.0f)) {
        throw ConfigError("init_decoder: alpha must be in [0,1)");
    }

    DecoderModel model;
    model.image_h = image_h;
    model.image_w = image_w;
    model.seed = seed;
    model.net.alpha = alpha;

    const std::size_t n = image_h * image_w * 3;
    std::size_t in = p;
    for (std::size_t l = 0; l < hidden_sizes.size(); ++l) {
        NetLayer layer;
        layer.dense.weights = Matrix(hidden_sizes[l], in);
        layer.dense.bias.assign(hidden_sizes[l], 0.0f);
        layer.dense.activation = ActivationKind::LeakyRelu;
        layer.dropout_rate = dropout_rates[l];
        model.net.layers.push_back(std::move(layer));
        in = hidden_sizes[l];
    }
    NetLayer out_layer;
    out_layer.dense.weights = Matrix(n, in);
    out_layer.dense.bias.assign(n, 0.0f);
    out_layer.dense.activation = ActivationKind::Sigmoid;
    model.net.layers.push_back(std::move(out_layer));

    DeterministicRng rng(seed);
    for (NetLayer& layer : model.net.layers) {
        init_dense_glorot(layer.dense, rng);
    }
    return model;
}

double dataset_mse(const DecoderModel& model, const PairDataset& dataset, Split split) {
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (dataset.split[i] != split) continue;
        const FloatVector y = net_infer(model.net, dataset.encodings[i]);
        acc += mse_loss(y, dataset.targets[i]);
        ++count;
    }
    if (count == 0) {
        throw ConfigError("dataset_mse: split has no rows");
    }
    return acc / static_cast<double>(count);
}

namespace {

struct GradAccumulator {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> bias;

    explicit GradAccumulator(const FeedForwardNet& net) {
        weights.resize(net.layers.size());
        bias.resize(net.layers.size());
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            weights[l].assign(net.layers[l].dense.weights.size(), 0.0);
            bias[l].assign(net.layers[l].dense.bias.size(), 0.0);
        }
    }

    void reset() {
        for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
        for (auto& b : bias) std::fill(b.begin(), b.end(), 0.0);
    }

    void add(const GradientSet& g) {
        for (std::size_t l = 0; l < weights.size(); ++l) {
            const auto& gw = g.layers[l].weights.data;
            for (std::size_t i = 0; i < gw.size(); ++i) weights[l][i] += gw[i];
            const auto& gb = g.layers[l].bias;
            for (std::size_t i = 0; i < gb.size(); ++i) bias[l][i] += gb[i];
        }
    }

    void mean_into(GradientSet& g, std::size_t count) const {
        const double inv = 1.0 / static_cast<double>(count);
        for (std::size_t l = 0; l < weights.size(); ++l) {
            auto& gw = g.layers[l].weights.data;
            for (std::size_t i = 0; i < gw.size(); ++i) {
                gw[i] = static_cast<float>(weights[l][i] * inv);
            }
            auto& gb = g.layers[l].bias;
            for (std::size_t i = 0; i < gb.size(); ++i) {
                gb[i] = static_cast<float>(bias[l][i] * inv);
            }
        }
    }
};

}  // namespace

TrainingHistory train_decoder(DecoderModel& model, const PairDataset& dataset,
                              const TrainingConfig& config, const TrainHooks* hooks) {
    if (config.batch_size < 1 || config.max_epochs < 1) {
        throw ConfigError("train_decoder: batch_size and max_epochs must be >= 1");
    }
    if (!(config.early_stop_test_mse > 0.0)) {
        throw ConfigError("train_decoder: early_stop_test_mse must be positive");
    }
    const std::vector<std::size_t> train_rows = dataset.rows_in(Split::Train);
    const std::vector<std::size_t> test_rows = dataset.rows_in(Split::Test);
    if (train_rows.empty() || test_rows.empty()) {
        throw ConfigError("train_decoder: train and test splits must both be nonempty");
    }

    TrainingHistory history;
    DeterministicRng dropout_rng(config.shuffle_seed ^ 0xD5EDDD50A0B7C0DEULL);

    FeedForwardNet best_net = model.net;
    double best_test = std::numeric_limits<double>::infinity();
    std::size_t epochs_since_improve = 0;

    std::vector<std::size_t> order = train_rows;
    GradAccumulator acc(model.net);
    GradientSet example_grads = GradientSet::zeros_like(model.net);
    GradientSet batch_grads = GradientSet::zeros_like(model.net);
    ForwardCache cache;

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();

        DeterministicRng shuffle_rng(config.shuffle_seed +
                                     0x9E3779B97F4A7C15ULL * epoch);
        order = train_rows;
        for (std::size_t i = order.size(); i-- > 1;) {
            const std::size_t j = shuffle_rng.next_below(i + 1);
            std::swap(order[i], order[j]);
        }

        for (std::size_t start = 0; start < order.size();
             start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            acc.reset();
            for (std::size_t i = start; i < end; ++i) {
                const std::size_t row = order[i];
                FloatVector y;
                net_forward(model.net, dataset.encodings[row], /*training=*/true,
                            dropout_rng, y, &cache);
                const double loss =
                    backprop(model.net, cache, dataset.targets[row], example_grads);
                if (!std::isfinite(loss)) {
                    throw Error(ErrorCode::Diverged,
                                "train_decoder: non-finite loss at epoch " +
                                    std::to_string(epoch) + ", batch " +
                                    std::to_string(start / config.batch_size + 1));
                }
                acc.add(example_grads);
            }
            acc.mean_into(batch_grads, end - start);
            // The optimized objective is the per-example *sum* of squared
            // residuals; backprop returns gradients of the per-example mean,
            // so fold the output dimension into the step size.
            const float step = config.learning_rate *
                               static_cast<float>(dataset.target_dim);
            sgd_step(model.net, batch_grads, step);
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_mse = dataset_mse(model, dataset, Split::Train);
        rec.test_mse = (hooks && hooks->test_eval)
                           ? hooks->test_eval(model, dataset, epoch)
                           : dataset_mse(model, dataset, Split::Test);
        rec.seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        history.epochs.push_back(rec);

        if (rec.test_mse < best_test) {
            best_test = rec.test_mse;
            best_net = model.net;
            history.best_epoch = epoch;
            epochs_since_improve = 0;
        } else {
            ++epochs_since_improve;
        }

        if (rec.test_mse < config.early_stop_test_mse) {
            history.stop_reason = StopReason::ReachedThreshold;
            break;
        }
        if (epochs_since_improve >= config.patience) {
            history.stop_reason = StopReason::Patience;
            break;
        }
        history.stop_reason = StopReason::MaxEpochs;
    }

    model.net = std::move(best_net);
    return history;
}

ImageRecord decode_image(const DecoderModel& model, const EncodingVector& x) {
    if (x.size() != model.encoding_size()) {
        throw ShapeError("decode_image: expected encoding of length " +
                         std::to_string(model.encoding_size()) + ", got " +
                         std::to_string(x.size()));
    }
    return reshape_to_image(net_infer(model.net, x), model.image_h, model.image_w);
}

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::ReachedThreshold: return "ReachedThreshold";
        case StopReason::Patience: return "Patience";
        case StopReason::MaxEpochs: return "MaxEpochs";
    }
    return "?";
}

void write_history_csv(const TrainingHistory& history, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "epoch,train_mse,test_mse,seconds\n";
    for (const EpochRecord& r : history.epochs) {
        out << r.epoch << ',' << r.train_mse << ',' << r.test_mse << ','
            << r.seconds << '\n';
    }
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace sedd
