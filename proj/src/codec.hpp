// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "decoder.hpp"
#include "encoder.hpp"

namespace sedd {

// Fixed little-endian binary formats with a trailing CRC32, documented
// byte-for-byte in the README. The encoder file IS the secret key, so
// round trips must be bit-exact on every platform.

inline constexpr std::uint8_t kRoleEncoder = 0x01;
inline constexpr std::uint8_t kRoleDecoder = 0x02;
inline constexpr std::uint16_t kModelFormatVersion = 1;

std::vector<std::uint8_t> serialize_encoder(const EncoderModel& model);
std::vector<std::uint8_t> serialize_decoder(const DecoderModel& model);

// Peeks the role byte without full parsing (magic must match).
std::uint8_t model_role(const std::vector<std::uint8_t>& bytes);

EncoderModel deserialize_encoder(const std::vector<std::uint8_t>& bytes);
DecoderModel deserialize_decoder(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> serialize_encodings(const std::vector<FloatVector>& rows);
std::vector<FloatVector> deserialize_encodings(const std::vector<std::uint8_t>& bytes);

// File wrappers; writes go to a temporary name and are atomically renamed.
std::uint64_t save_encoder(const EncoderModel& model, const std::string& path);
std::uint64_t save_decoder(const DecoderModel& model, const std::string& path);
EncoderModel load_encoder(const std::string& path);
DecoderModel load_decoder(const std::string& path);
std::uint64_t save_encodings(const std::vector<FloatVector>& rows,
                             const std::string& path);
std::vector<FloatVector> load_encodings(const std::string& path);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_atomic(const std::vector<std::uint8_t>& bytes,
                       const std::string& path);

}  // namespace sedd
