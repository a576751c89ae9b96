// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "image.hpp"
#include "nn.hpp"

namespace sedd {

// The encoder is the secret key: a fixed single-hidden-layer network
// (flatten -> Relu hidden -> Sigmoid output) whose random parameters are
// never trained. Same seed, same key, on every platform.
struct EncoderModel {
    FeedForwardNet net;  // [hidden Relu, output Sigmoid], no dropout
    std::size_t image_h = 0;
    std::size_t image_w = 0;
    std::uint64_t seed = 0;

    std::size_t input_dim() const { return net.input_dim(); }
    std::size_t hidden_units() const { return net.layers.front().dense.out_units(); }
    std::size_t encoding_size() const { return net.output_dim(); }
};

// An encoding is the ciphertext: encoding_size sigmoid outputs in (0,1).
using EncodingVector = FloatVector;

EncoderModel init_encoder(std::size_t image_h, std::size_t image_w,
                          std::size_t h_units, std::size_t p, std::uint64_t seed);

EncodingVector encode_image(const EncoderModel& model, const ImageRecord& image);
EncodingVector encode_flat(const EncoderModel& model, const FloatVector& flat);

std::uint64_t count_encoder_params(const EncoderModel& model);

}  // namespace sedd
