// SPDX-License-Identifier: Apache-2.0
#include "dataset.hpp"

#include <cmath>
#include <numeric>

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace sedd {

std::vector<std::size_t> PairDataset::rows_in(Split s) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < split.size(); ++i) {
        if (split[i] == s) rows.push_back(i);
    }
    return rows;
}

PairDataset build_encoding_pairs(const EncoderModel& encoder,
                                 const std::vector<ImageRecord>& images) {
    PairDataset ds;
    ds.encoding_dim = encoder.encoding_size();
    ds.target_dim = encoder.input_dim();
    for (const ImageRecord& img : images) {
        if (img.height != encoder.image_h || img.width != encoder.image_w) {
            throw ShapeError("build_encoding_pairs: image '" + img.source_id +
                             "' is " + std::to_string(img.height) + "x" +
                             std::to_string(img.width) + ", key expects " +
                             std::to_string(encoder.image_h) + "x" +
                             std::to_string(encoder.image_w));
        }
        if (img.pixels.size() != img.height * img.width * 3) {
            throw FormatError("build_encoding_pairs: image '" + img.source_id +
                              "' has a malformed pixel buffer");
        }
    }
    ds.encodings.resize(images.size());
    ds.targets.resize(images.size());
    ds.source_ids.resize(images.size());
    // Per-image work is independent; rows land in corpus order.
    parallel_for(images.size(), [&](std::size_t i) {
        ds.targets[i] = flatten_image(images[i]);
        ds.encodings[i] = encode_image(encoder, images[i]);
        ds.source_ids[i] = images[i].source_id;
    });
    return ds;
}

void split_dataset(PairDataset& ds, double test_fraction, std::uint64_t seed) {
    const std::size_t m = ds.size();
    if (m < 2) {
        throw ConfigError("split_dataset: need at least 2 rows, have " +
                          std::to_string(m));
    }
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError("split_dataset: test_fraction must be in (0,1)");
    }
    const std::size_t n_test = static_cast<std::size_t>(
        std::ceil(static_cast<double>(m) * test_fraction));
    if (n_test == 0 || n_test >= m) {
        throw ConfigError("split_dataset: degenerate split (" +
                          std::to_string(n_test) + " test of " +
                          std::to_string(m) + ")");
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    DeterministicRng rng(seed);
    for (std::size_t i = m; i-- > 1;) {
        const std::size_t j = rng.next_below(i + 1);
        std::swap(order[i], order[j]);
    }

    ds.split.assign(m, Split::Train);
    for (std::size_t i = 0; i < n_test; ++i) {
        ds.split[order[i]] = Split::Test;
    }
}

}  // namespace sedd
