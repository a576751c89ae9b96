// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "rng.hpp"
#include "tensor.hpp"

namespace sedd {

enum class ActivationKind : std::uint8_t {
    Identity = 0,
    Relu = 1,
    LeakyRelu = 2,
    Sigmoid = 3,
};

// Conventions fixed for reproducibility: Relu'(0) = 0, LeakyRelu'(0) = alpha,
// sigmoid computed in the branch form that never exponentiates a positive z.
float apply_activation(ActivationKind kind, float z, float alpha);
float activation_derivative(ActivationKind kind, float z, float alpha);

void activation_apply(ActivationKind kind, float alpha, const FloatVector& v,
                      FloatVector& out);
void activation_grad(ActivationKind kind, float alpha,
                     const FloatVector& pre_activation, FloatVector& out);

struct DenseLayer {
    Matrix weights;  // out_units x in_units
    FloatVector bias;
    ActivationKind activation = ActivationKind::Identity;

    std::size_t in_units() const { return weights.cols; }
    std::size_t out_units() const { return weights.rows; }
};

// pre = W x + b, out = activation(pre). pre is kept for backprop.
void dense_forward(const DenseLayer& layer, float alpha, const FloatVector& x,
                   FloatVector& pre, FloatVector& out);

// Inverted dropout: in training, each element is zeroed with probability
// `rate` and survivors scaled by 1/(1-rate); at inference the input passes
// through unchanged. The mask stores the applied per-element factor.
void dropout_forward(float rate, const FloatVector& v, bool training,
                     DeterministicRng& rng, FloatVector& out, FloatVector& mask);

double mse_loss(const FloatVector& predicted, const FloatVector& target);

// A plain feed-forward stack: dense -> activation -> dropout per layer.
// Both the encoder and the decoder are instances of this.
struct NetLayer {
    DenseLayer dense;
    float dropout_rate = 0.0f;
};

struct FeedForwardNet {
    std::vector<NetLayer> layers;
    float alpha = 0.0f;  // shared LeakyRelu slope

    std::size_t input_dim() const { return layers.front().dense.in_units(); }
    std::size_t output_dim() const { return layers.back().dense.out_units(); }
    std::uint64_t param_count() const;
};

struct ForwardCache {
    FloatVector input;
    std::vector<FloatVector> pre;        // per layer, before activation
    std::vector<FloatVector> activated;  // after activation, before dropout
    std::vector<FloatVector> out;        // after dropout
    std::vector<FloatVector> mask;       // dropout factors applied
};

// Runs the net; with `cache` non-null every intermediate needed by backprop
// is recorded. Dropout draws from `rng` only in training mode.
void net_forward(const FeedForwardNet& net, const FloatVector& x, bool training,
                 DeterministicRng& rng, FloatVector& y, ForwardCache* cache);

FloatVector net_infer(const FeedForwardNet& net, const FloatVector& x);

struct GradientSet {
    struct LayerGrads {
        Matrix weights;
        FloatVector bias;
    };
    std::vector<LayerGrads> layers;

    static GradientSet zeros_like(const FeedForwardNet& net);
};

// Reverse-mode gradients of mse_loss(y, target) w.r.t. every weight and
// bias, using the masks recorded in `cache`. Returns the loss.
double backprop(const FeedForwardNet& net, const ForwardCache& cache,
                const FloatVector& target, GradientSet& grads);

// p <- p - learning_rate * grad(p); plain SGD.
void sgd_step(FeedForwardNet& net, const GradientSet& grads, float learning_rate);

// Glorot-uniform weights in (-L, L) with L = sqrt(6/(fan_in+fan_out)), drawn
// row-major; biases zero (no draws consumed).
void init_dense_glorot(DenseLayer& layer, DeterministicRng& rng);

}  // namespace sedd
