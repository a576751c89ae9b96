// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tensor.hpp"

namespace sedd {

struct ImageRecord {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> pixels;  // height*width*3, row-major RGB
    std::string source_id;

    ImageRecord() = default;
    ImageRecord(std::size_t h, std::size_t w)
        : height(h), width(w), pixels(h * w * 3, 0) {}

    std::uint8_t* pixel(std::size_t r, std::size_t c) {
        return pixels.data() + (r * width + c) * 3;
    }
    const std::uint8_t* pixel(std::size_t r, std::size_t c) const {
        return pixels.data() + (r * width + c) * 3;
    }
};

// Row-major, RGB interleaved per pixel, 8-bit values scaled to [0,1] by /255.
FloatVector flatten_image(const ImageRecord& image);

// Inverse of flatten_image: round(v*255) half-up, clamped to [0,255].
ImageRecord reshape_to_image(const FloatVector& y, std::size_t image_h,
                             std::size_t image_w);

// Bilinear resize per channel with half-pixel-centered sample coordinates.
ImageRecord resize_image(const ImageRecord& img, std::size_t target_h,
                         std::size_t target_w);

}  // namespace sedd
