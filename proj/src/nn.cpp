// SPDX-License-Identifier: Apache-2.0
#include "nn.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace sedd {

float apply_activation(ActivationKind kind, float z, float alpha) {
    switch (kind) {
        case ActivationKind::Identity:
            return z;
        case ActivationKind::Relu:
            return z > 0.0f ? z : 0.0f;
        case ActivationKind::LeakyRelu:
            return z >= 0.0f ? z : alpha * z;
        case ActivationKind::Sigmoid: {
            // Clamped into the open interval: binary32 saturates for |z| over
            // ~17 and downstream contracts require outputs strictly in (0,1).
            float s;
            if (z >= 0.0f) {
                s = 1.0f / (1.0f + std::exp(-z));
            } else {
                const float e = std::exp(z);
                s = e / (1.0f + e);
            }
            if (s >= 1.0f) s = 1.0f - 0x1.0p-24f;
            if (s <= 0.0f) s = 0x1.0p-126f;
            return s;
        }
    }
    return z;
}

float activation_derivative(ActivationKind kind, float z, float alpha) {
    switch (kind) {
        case ActivationKind::Identity:
            return 1.0f;
        case ActivationKind::Relu:
            return z > 0.0f ? 1.0f : 0.0f;
        case ActivationKind::LeakyRelu:
            // at exactly 0 the derivative is defined as alpha
            return z > 0.0f ? 1.0f : alpha;
        case ActivationKind::Sigmoid: {
            const float s = apply_activation(ActivationKind::Sigmoid, z, alpha);
            return s * (1.0f - s);
        }
    }
    return 1.0f;
}

void activation_apply(ActivationKind kind, float alpha, const FloatVector& v,
                      FloatVector& out) {
    out.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = apply_activation(kind, v[i], alpha);
    }
}

void activation_grad(ActivationKind kind, float alpha,
                     const FloatVector& pre_activation, FloatVector& out) {
    out.resize(pre_activation.size());
    for (std::size_t i = 0; i < pre_activation.size(); ++i) {
        out[i] = activation_derivative(kind, pre_activation[i], alpha);
    }
}

void dense_forward(const DenseLayer& layer, float alpha, const FloatVector& x,
                   FloatVector& pre, FloatVector& out) {
    matvec(layer.weights, x, pre);
    for (std::size_t r = 0; r < pre.size(); ++r) {
        pre[r] += layer.bias[r];
    }
    activation_apply(layer.activation, alpha, pre, out);
}

void dropout_forward(float rate, const FloatVector& v, bool training,
                     DeterministicRng& rng, FloatVector& out, FloatVector& mask) {
    out.resize(v.size());
    mask.resize(v.size());
    if (!training || rate <= 0.0f) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            out[i] = v[i];
            mask[i] = 1.0f;
        }
        return;
    }
    const float scale = 1.0f / (1.0f - rate);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const float keep = rng.next_uniform() >= rate ? scale : 0.0f;
        mask[i] = keep;
        out[i] = v[i] * keep;
    }
}

double mse_loss(const FloatVector& predicted, const FloatVector& target) {
    if (predicted.size() != target.size()) {
        throw ShapeError("mse_loss: length mismatch, " +
                         std::to_string(predicted.size()) + " vs " +
                         std::to_string(target.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = static_cast<double>(predicted[i]) - static_cast<double>(target[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(predicted.size());
}

std::uint64_t FeedForwardNet::param_count() const {
    std::uint64_t n = 0;
    for (const auto& l : layers) {
        n += static_cast<std::uint64_t>(l.dense.weights.size()) + l.dense.bias.size();
    }
    return n;
}

void net_forward(const FeedForwardNet& net, const FloatVector& x, bool training,
                 DeterministicRng& rng, FloatVector& y, ForwardCache* cache) {
    const std::size_t k = net.layers.size();
    if (cache) {
        cache->input = x;
        cache->pre.resize(k);
        cache->activated.resize(k);
        cache->out.resize(k);
        cache->mask.resize(k);
    }
    FloatVector cur = x;
    FloatVector pre, act, dropped, mask;
    for (std::size_t l = 0; l < k; ++l) {
        const NetLayer& layer = net.layers[l];
        dense_forward(layer.dense, net.alpha, cur, pre, act);
        dropout_forward(layer.dropout_rate, act, training, rng, dropped, mask);
        if (cache) {
            cache->pre[l] = pre;
            cache->activated[l] = act;
            cache->out[l] = dropped;
            cache->mask[l] = mask;
        }
        cur = dropped;
    }
    y = std::move(cur);
}

FloatVector net_infer(const FeedForwardNet& net, const FloatVector& x) {
    DeterministicRng unused(0);
    FloatVector y;
    net_forward(net, x, /*training=*/false, unused, y, nullptr);
    return y;
}

GradientSet GradientSet::zeros_like(const FeedForwardNet& net) {
    GradientSet g;
    g.layers.resize(net.layers.size());
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const DenseLayer& d = net.layers[l].dense;
        g.layers[l].weights = Matrix(d.out_units(), d.in_units());
        g.layers[l].bias.assign(d.out_units(), 0.0f);
    }
    return g;
}

double backprop(const FeedForwardNet& net, const ForwardCache& cache,
                const FloatVector& target, GradientSet& grads) {
    const std::size_t k = net.layers.size();
    const FloatVector& y = cache.out[k - 1];
    if (y.size() != target.size()) {
        throw ShapeError("backprop: output/target length mismatch, " +
                         std::to_string(y.size()) + " vs " +
                         std::to_string(target.size()));
    }
    if (grads.layers.size() != k) grads = GradientSet::zeros_like(net);

    const double loss = mse_loss(y, target);
    const std::size_t n = y.size();

    // delta = dL/d(out of current layer), kept in binary64
    std::vector<double> delta(n);
    for (std::size_t i = 0; i < n; ++i) {
        delta[i] = 2.0 * (static_cast<double>(y[i]) - static_cast<double>(target[i])) /
                   static_cast<double>(n);
    }

    std::vector<double> delta_prev;
    for (std::size_t l = k; l-- > 0;) {
        const NetLayer& layer = net.layers[l];
        const FloatVector& pre = cache.pre[l];
        const FloatVector& mask = cache.mask[l];
        const FloatVector& in = (l == 0) ? cache.input : cache.out[l - 1];
        const std::size_t out_n = pre.size();

        // through dropout and the activation
        for (std::size_t i = 0; i < out_n; ++i) {
            delta[i] *= static_cast<double>(mask[i]) *
                        static_cast<double>(activation_derivative(
                            layer.dense.activation, pre[i], net.alpha));
        }

        GradientSet::LayerGrads& g = grads.layers[l];
        for (std::size_t r = 0; r < out_n; ++r) {
            const float dr = static_cast<float>(delta[r]);
            g.bias[r] = dr;
            float* wrow = g.weights.row(r);
            for (std::size_t c = 0; c < in.size(); ++c) {
                wrow[c] = static_cast<float>(delta[r] * static_cast<double>(in[c]));
            }
        }

        if (l > 0) {
            const Matrix& w = layer.dense.weights;
            delta_prev.assign(w.cols, 0.0);
            for (std::size_t r = 0; r < w.rows; ++r) {
                const float* wrow = w.row(r);
                const double dr = delta[r];
                for (std::size_t c = 0; c < w.cols; ++c) {
                    delta_prev[c] += static_cast<double>(wrow[c]) * dr;
                }
            }
            delta.swap(delta_prev);
        }
    }
    return loss;
}

void sgd_step(FeedForwardNet& net, const GradientSet& grads, float learning_rate) {
    if (grads.layers.size() != net.layers.size()) {
        throw ShapeError("sgd_step: gradient layer count mismatch");
    }
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        DenseLayer& d = net.layers[l].dense;
        const GradientSet::LayerGrads& g = grads.layers[l];
        if (g.weights.rows != d.weights.rows || g.weights.cols != d.weights.cols) {
            throw ShapeError("sgd_step: gradient shape mismatch at layer " +
                             std::to_string(l));
        }
        for (std::size_t i = 0; i < d.weights.size(); ++i) {
            d.weights.data[i] -= learning_rate * g.weights.data[i];
        }
        for (std::size_t i = 0; i < d.bias.size(); ++i) {
            d.bias[i] -= learning_rate * g.bias[i];
        }
    }
}

void init_dense_glorot(DenseLayer& layer, DeterministicRng& rng) {
    const double fan_in = static_cast<double>(layer.in_units());
    const double fan_out = static_cast<double>(layer.out_units());
    const float limit = static_cast<float>(std::sqrt(6.0 / (fan_in + fan_out)));
    for (std::size_t i = 0; i < layer.weights.size(); ++i) {
        layer.weights.data[i] = (2.0f * rng.next_uniform() - 1.0f) * limit;
    }
    for (std::size_t i = 0; i < layer.bias.size(); ++i) {
        layer.bias[i] = 0.0f;
    }
}

}  // namespace sedd
