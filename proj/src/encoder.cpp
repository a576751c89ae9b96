// SPDX-License-Identifier: Apache-2.0
#include "encoder.hpp"

#include <string>

#include "error.hpp"

namespace sedd {

EncoderModel init_encoder(std::size_t image_h, std::size_t image_w,
                          std::size_t h_units, std::size_t p, std::uint64_t seed) {
    if (image_h == 0 || image_w == 0 || h_units == 0 || p == 0) {
        throw ConfigError("init_encoder: all dimensions must be positive");
    }
    const std::size_t n = image_h * image_w * 3;

    EncoderModel model;
    model.image_h = image_h;
    model.image_w = image_w;
    model.seed = seed;
    model.net.alpha = 0.0f;
    model.net.layers.resize(2);

    DenseLayer& hidden = model.net.layers[0].dense;
    hidden.weights = Matrix(h_units, n);
    hidden.bias.assign(h_units, 0.0f);
    hidden.activation = ActivationKind::Relu;

    DenseLayer& output = model.net.layers[1].dense;
    output.weights = Matrix(p, h_units);
    output.bias.assign(p, 0.0f);
    output.activation = ActivationKind::Sigmoid;

    // Draw order: hidden layer first, then output, row-major within each.
    DeterministicRng rng(seed);
    init_dense_glorot(hidden, rng);
    init_dense_glorot(output, rng);
    return model;
}

EncodingVector encode_flat(const EncoderModel& model, const FloatVector& flat) {
    if (flat.size() != model.input_dim()) {
        throw ShapeError("encode: expected flattened input of length " +
                         std::to_string(model.input_dim()) + ", got " +
                         std::to_string(flat.size()));
    }
    return net_infer(model.net, flat);
}

EncodingVector encode_image(const EncoderModel& model, const ImageRecord& image) {
    if (image.height != model.image_h || image.width != model.image_w) {
        throw ShapeError("encode_image: image is " + std::to_string(image.height) +
                         "x" + std::to_string(image.width) + ", key expects " +
                         std::to_string(model.image_h) + "x" +
                         std::to_string(model.image_w) +
                         (image.source_id.empty() ? "" : " (" + image.source_id + ")"));
    }
    return encode_flat(model, flatten_image(image));
}

std::uint64_t count_encoder_params(const EncoderModel& model) {
    return model.net.param_count();
}

}  // namespace sedd
