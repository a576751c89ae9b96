// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "encoder.hpp"
#include "image.hpp"

namespace sedd {

enum class Split : std::uint8_t { Train = 0, Test = 1 };

// m matched rows of (encoding, [0,1]-scaled flattened image target).
struct PairDataset {
    std::size_t encoding_dim = 0;  // p
    std::size_t target_dim = 0;    // n
    std::vector<FloatVector> encodings;
    std::vector<FloatVector> targets;
    std::vector<Split> split;  // empty until split_dataset
    std::vector<std::string> source_ids;

    std::size_t size() const { return encodings.size(); }
    std::vector<std::size_t> rows_in(Split s) const;
};

PairDataset build_encoding_pairs(const EncoderModel& encoder,
                                 const std::vector<ImageRecord>& images);

// Deterministic shuffle; first ceil(m*test_fraction) rows of the shuffled
// order become Test. Both sides must end up nonempty.
void split_dataset(PairDataset& ds, double test_fraction, std::uint64_t seed);

}  // namespace sedd
