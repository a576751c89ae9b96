// SPDX-License-Identifier: Apache-2.0
#include "image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace sedd {

FloatVector flatten_image(const ImageRecord& image) {
    if (image.pixels.size() != image.height * image.width * 3) {
        throw FormatError("flatten_image: pixel buffer length " +
                          std::to_string(image.pixels.size()) +
                          " does not match " + std::to_string(image.height) + "x" +
                          std::to_string(image.width) + "x3");
    }
    FloatVector out(image.pixels.size());
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        out[i] = static_cast<float>(image.pixels[i]) / 255.0f;
    }
    return out;
}

ImageRecord reshape_to_image(const FloatVector& y, std::size_t image_h,
                             std::size_t image_w) {
    const std::size_t n = image_h * image_w * 3;
    if (y.size() != n) {
        throw ShapeError("reshape_to_image: expected " + std::to_string(n) +
                         " values, got " + std::to_string(y.size()));
    }
    ImageRecord img(image_h, image_w);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::floor(static_cast<double>(y[i]) * 255.0 + 0.5);
        img.pixels[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
    return img;
}

ImageRecord resize_image(const ImageRecord& img, std::size_t target_h,
                         std::size_t target_w) {
    if (img.height == target_h && img.width == target_w) return ImageRecord(img);

    ImageRecord out(target_h, target_w);
    out.source_id = img.source_id;
    const double sy = static_cast<double>(img.height) / static_cast<double>(target_h);
    const double sx = static_cast<double>(img.width) / static_cast<double>(target_w);
    const auto hi_y = static_cast<std::ptrdiff_t>(img.height) - 1;
    const auto hi_x = static_cast<std::ptrdiff_t>(img.width) - 1;

    for (std::size_t r = 0; r < target_h; ++r) {
        const double fy = (static_cast<double>(r) + 0.5) * sy - 0.5;
        std::ptrdiff_t y0 = static_cast<std::ptrdiff_t>(std::floor(fy));
        const double wy = fy - static_cast<double>(y0);
        const std::ptrdiff_t y0c = std::clamp<std::ptrdiff_t>(y0, 0, hi_y);
        const std::ptrdiff_t y1c = std::clamp<std::ptrdiff_t>(y0 + 1, 0, hi_y);
        for (std::size_t c = 0; c < target_w; ++c) {
            const double fx = (static_cast<double>(c) + 0.5) * sx - 0.5;
            std::ptrdiff_t x0 = static_cast<std::ptrdiff_t>(std::floor(fx));
            const double wx = fx - static_cast<double>(x0);
            const std::ptrdiff_t x0c = std::clamp<std::ptrdiff_t>(x0, 0, hi_x);
            const std::ptrdiff_t x1c = std::clamp<std::ptrdiff_t>(x0 + 1, 0, hi_x);
            const std::uint8_t* p00 = img.pixel(y0c, x0c);
            const std::uint8_t* p01 = img.pixel(y0c, x1c);
            const std::uint8_t* p10 = img.pixel(y1c, x0c);
            const std::uint8_t* p11 = img.pixel(y1c, x1c);
            std::uint8_t* dst = out.pixel(r, c);
            for (int ch = 0; ch < 3; ++ch) {
                const double top = p00[ch] * (1.0 - wx) + p01[ch] * wx;
                const double bot = p10[ch] * (1.0 - wx) + p11[ch] * wx;
                const double v = std::floor(top * (1.0 - wy) + bot * wy + 0.5);
                dst[ch] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
            }
        }
    }
    return out;
}

}  // namespace sedd
