// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "image.hpp"

namespace sedd {

ImageRecord load_image_file(const std::string& path);

// Fixed settings so identical pixels always produce identical bytes.
void save_png(const ImageRecord& img, const std::string& path);

struct CorpusLoadResult {
    std::vector<ImageRecord> images;
    std::size_t skipped = 0;  // non-image files in the directory
};

// PNG/JPEG files in lexicographic filename order; grayscale inputs come
// back replicated to 3 channels. source_id is the filename.
CorpusLoadResult load_image_dir(const std::string& path,
                                std::optional<std::size_t> limit = {});

}  // namespace sedd
