// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "image.hpp"
#include "nn.hpp"
#include "rng.hpp"

namespace sedd::testutil {

// ---- independent double-precision oracle for gradient checks ----
//
// Re-states the whole forward computation in binary64 with its own loops so
// finite differences of it are an oracle that shares no code with backprop.
struct OracleNet {
    struct Layer {
        std::size_t in, out;
        ActivationKind act;
        std::vector<double> mask;  // frozen dropout factors, 1.0 = keep
    };
    std::vector<Layer> layers;
    double alpha = 0.0;
    std::vector<double> input;
    std::vector<double> target;

    static OracleNet from(const FeedForwardNet& net, const ForwardCache& cache,
                          const FloatVector& target_f) {
        OracleNet o;
        o.alpha = net.alpha;
        o.input.assign(cache.input.begin(), cache.input.end());
        o.target.assign(target_f.begin(), target_f.end());
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            Layer layer;
            layer.in = net.layers[l].dense.in_units();
            layer.out = net.layers[l].dense.out_units();
            layer.act = net.layers[l].dense.activation;
            layer.mask.assign(cache.mask[l].begin(), cache.mask[l].end());
            o.layers.push_back(std::move(layer));
        }
        return o;
    }

    double activate(ActivationKind k, double z) const {
        switch (k) {
            case ActivationKind::Identity: return z;
            case ActivationKind::Relu: return z > 0 ? z : 0;
            case ActivationKind::LeakyRelu: return z >= 0 ? z : alpha * z;
            case ActivationKind::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
        }
        return z;
    }

    // params: per layer, row-major weights then biases, concatenated.
    double loss(const std::vector<double>& params) const {
        std::vector<double> cur = input;
        std::size_t off = 0;
        for (const Layer& layer : layers) {
            std::vector<double> next(layer.out);
            for (std::size_t r = 0; r < layer.out; ++r) {
                double z = 0.0;
                for (std::size_t c = 0; c < layer.in; ++c) {
                    z += params[off + r * layer.in + c] * cur[c];
                }
                z += params[off + layer.out * layer.in + r];
                next[r] = activate(layer.act, z) * layer.mask[r];
            }
            off += layer.out * layer.in + layer.out;
            cur = std::move(next);
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const double d = cur[i] - target[i];
            acc += d * d;
        }
        return acc / static_cast<double>(cur.size());
    }
};

inline std::vector<double> flatten_params(const FeedForwardNet& net) {
    std::vector<double> p;
    for (const NetLayer& l : net.layers) {
        for (float v : l.dense.weights.data) p.push_back(v);
        for (float v : l.dense.bias) p.push_back(v);
    }
    return p;
}

inline std::vector<double> flatten_grads(const GradientSet& g) {
    std::vector<double> out;
    for (const auto& l : g.layers) {
        for (float v : l.weights.data) out.push_back(v);
        for (float v : l.bias) out.push_back(v);
    }
    return out;
}

inline std::vector<double> finite_difference_grads(const OracleNet& oracle,
                                                   std::vector<double> params,
                                                   double step = 1e-3) {
    std::vector<double> grads(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + step;
        const double hi = oracle.loss(params);
        params[i] = saved - step;
        const double lo = oracle.loss(params);
        params[i] = saved;
        grads[i] = (hi - lo) / (2.0 * step);
    }
    return grads;
}

inline double relative_error(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

// ---- synthetic corpora: random smooth gradients plus a few shapes ----
inline ImageRecord synth_image(DeterministicRng& rng, std::size_t h, std::size_t w,
                               const std::string& source_id) {
    ImageRecord img(h, w);
    img.source_id = source_id;

    float c0[3], c1[3];
    for (int ch = 0; ch < 3; ++ch) {
        c0[ch] = rng.next_uniform() * 255.0f;
        c1[ch] = rng.next_uniform() * 255.0f;
    }
    const float gx = rng.next_uniform() * 2.0f - 1.0f;
    const float gy = rng.next_uniform() * 2.0f - 1.0f;
    const float norm = std::max(1e-3f, std::abs(gx) * (w - 1.0f) + std::abs(gy) * (h - 1.0f));
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            float t = (gx * c + gy * r) / norm + 0.5f;
            t = std::min(1.0f, std::max(0.0f, t));
            std::uint8_t* px = img.pixel(r, c);
            for (int ch = 0; ch < 3; ++ch) {
                px[ch] = static_cast<std::uint8_t>(c0[ch] + t * (c1[ch] - c0[ch]));
            }
        }
    }

    const std::size_t shapes = 1 + rng.next_below(3);
    for (std::size_t s = 0; s < shapes; ++s) {
        std::uint8_t col[3];
        for (int ch = 0; ch < 3; ++ch) {
            col[ch] = static_cast<std::uint8_t>(rng.next_below(256));
        }
        const bool circle = rng.next_below(2) == 0;
        const std::size_t cy = rng.next_below(h), cx = rng.next_below(w);
        const std::size_t rad = 1 + rng.next_below(std::max<std::size_t>(2, h / 3));
        for (std::size_t r = 0; r < h; ++r) {
            for (std::size_t c = 0; c < w; ++c) {
                const double dy = static_cast<double>(r) - static_cast<double>(cy);
                const double dx = static_cast<double>(c) - static_cast<double>(cx);
                const bool inside = circle
                                        ? (dy * dy + dx * dx <= static_cast<double>(rad * rad))
                                        : (std::abs(dy) <= static_cast<double>(rad) &&
                                           std::abs(dx) <= static_cast<double>(rad));
                if (inside) {
                    std::uint8_t* px = img.pixel(r, c);
                    for (int ch = 0; ch < 3; ++ch) px[ch] = col[ch];
                }
            }
        }
    }
    return img;
}

inline std::vector<ImageRecord> synth_corpus(std::uint64_t seed, std::size_t count,
                                             std::size_t h, std::size_t w,
                                             const std::string& prefix = "synth") {
    DeterministicRng rng(seed);
    std::vector<ImageRecord> images;
    images.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        images.push_back(synth_image(rng, h, w, prefix + "_" + std::to_string(i)));
    }
    return images;
}

// Scratch directory that cleans up after itself.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("sedd_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::filesystem::path path() const { return path_; }
    std::string str(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace sedd::testutil
