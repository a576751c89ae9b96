// SPDX-License-Identifier: Apache-2.0
#include "codec.hpp"

#include <zlib.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "error.hpp"

namespace sedd {

namespace {

constexpr char kModelMagic[8] = {'S', 'E', 'D', 'D', 'M', 'D', 'L', '1'};
constexpr char kEncodingMagic[8] = {'S', 'E', 'D', 'D', 'E', 'N', 'C', '1'};

class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v) {
        for (int i = 0; i < 2; ++i) buf_.push_back((v >> (8 * i)) & 0xFF);
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back((v >> (8 * i)) & 0xFF);
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back((v >> (8 * i)) & 0xFF);
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void raw(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + n);
    }
    void append_crc() {
        const auto c = static_cast<std::uint32_t>(
            crc32(0L, buf_.data(), static_cast<uInt>(buf_.size())));
        u32(c);
    }
    std::vector<std::uint8_t> take() { return std::move(buf_); }

private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
    explicit ByteReader(const std::vector<std::uint8_t>& b) : buf_(b) {}

    std::uint8_t u8() { return take(1)[0]; }
    std::uint16_t u16() {
        const auto* p = take(2);
        return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    }
    std::uint32_t u32() {
        const auto* p = take(4);
        return static_cast<std::uint32_t>(p[0]) |
               (static_cast<std::uint32_t>(p[1]) << 8) |
               (static_cast<std::uint32_t>(p[2]) << 16) |
               (static_cast<std::uint32_t>(p[3]) << 24);
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        const auto* p = take(8);
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    const std::uint8_t* take(std::size_t n) {
        if (pos_ + n > buf_.size()) {
            throw CorruptError("file truncated: needed " + std::to_string(n) +
                               " bytes at offset " + std::to_string(pos_));
        }
        const std::uint8_t* p = buf_.data() + pos_;
        pos_ += n;
        return p;
    }
    std::size_t remaining() const { return buf_.size() - pos_; }

private:
    const std::vector<std::uint8_t>& buf_;
    std::size_t pos_ = 0;
};

void check_magic(const std::vector<std::uint8_t>& bytes, const char magic[8],
                 const char* what) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), magic, 8) != 0) {
        throw FormatError(std::string("not a ") + what + " file (bad magic)");
    }
}

void check_crc(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 12) throw CorruptError("file too short");
    ByteReader tail(bytes);
    tail.take(bytes.size() - 4);
    const std::uint32_t stored =
        static_cast<std::uint32_t>(bytes[bytes.size() - 4]) |
        (static_cast<std::uint32_t>(bytes[bytes.size() - 3]) << 8) |
        (static_cast<std::uint32_t>(bytes[bytes.size() - 2]) << 16) |
        (static_cast<std::uint32_t>(bytes[bytes.size() - 1]) << 24);
    const auto actual = static_cast<std::uint32_t>(
        crc32(0L, bytes.data(), static_cast<uInt>(bytes.size() - 4)));
    if (stored != actual) {
        throw CorruptError("CRC mismatch: file is corrupted");
    }
}

std::vector<std::uint8_t> serialize_net(std::uint8_t role, const FeedForwardNet& net,
                                        std::size_t image_h, std::size_t image_w,
                                        std::uint64_t seed) {
    ByteWriter w;
    w.raw(kModelMagic, 8);
    w.u8(role);
    w.u16(kModelFormatVersion);
    w.u32(static_cast<std::uint32_t>(image_h));
    w.u32(static_cast<std::uint32_t>(image_w));
    w.u16(static_cast<std::uint16_t>(net.layers.size()));
    w.f32(net.alpha);
    w.u64(seed);
    for (const NetLayer& layer : net.layers) {
        w.u32(static_cast<std::uint32_t>(layer.dense.in_units()));
        w.u32(static_cast<std::uint32_t>(layer.dense.out_units()));
        w.u8(static_cast<std::uint8_t>(layer.dense.activation));
        w.f32(layer.dropout_rate);
        for (float v : layer.dense.weights.data) w.f32(v);
        for (float v : layer.dense.bias) w.f32(v);
    }
    w.append_crc();
    return w.take();
}

struct ParsedModel {
    std::uint8_t role;
    FeedForwardNet net;
    std::size_t image_h, image_w;
    std::uint64_t seed;
};

ParsedModel parse_model(const std::vector<std::uint8_t>& bytes) {
    check_magic(bytes, kModelMagic, "SEDD model");
    check_crc(bytes);

    ByteReader r(bytes);
    r.take(8);
    ParsedModel m;
    m.role = r.u8();
    if (m.role != kRoleEncoder && m.role != kRoleDecoder) {
        throw FormatError("unknown model role " + std::to_string(m.role));
    }
    const std::uint16_t version = r.u16();
    if (version != kModelFormatVersion) {
        throw FormatError("unsupported model format version " +
                          std::to_string(version));
    }
    m.image_h = r.u32();
    m.image_w = r.u32();
    const std::uint16_t layer_count = r.u16();
    m.net.alpha = r.f32();
    m.seed = r.u64();
    if (layer_count == 0) throw FormatError("model has no layers");

    std::size_t prev_out = 0;
    for (std::uint16_t l = 0; l < layer_count; ++l) {
        const std::uint32_t in = r.u32();
        const std::uint32_t out = r.u32();
        const std::uint8_t act = r.u8();
        if (act > static_cast<std::uint8_t>(ActivationKind::Sigmoid)) {
            throw FormatError("unknown activation code " + std::to_string(act));
        }
        NetLayer layer;
        layer.dense.activation = static_cast<ActivationKind>(act);
        layer.dropout_rate = r.f32();
        if (!(layer.dropout_rate >= 0.0f && layer.dropout_rate < 1.0f)) {
            throw CorruptError("dropout rate out of range in layer " +
                               std::to_string(l));
        }
        if (l > 0 && in != prev_out) {
            throw Error(ErrorCode::Corrupt,
                        "broken shape chain at layer " + std::to_string(l) + ": " +
                            std::to_string(prev_out) + " -> " + std::to_string(in));
        }
        prev_out = out;
        layer.dense.weights = Matrix(out, in);
        for (std::size_t i = 0; i < layer.dense.weights.size(); ++i) {
            layer.dense.weights.data[i] = r.f32();
        }
        layer.dense.bias.resize(out);
        for (std::size_t i = 0; i < out; ++i) layer.dense.bias[i] = r.f32();
        if (!all_finite(layer.dense.weights) || !all_finite(layer.dense.bias)) {
            throw CorruptError("non-finite parameter in layer " + std::to_string(l));
        }
        m.net.layers.push_back(std::move(layer));
    }
    if (r.remaining() != 4) {
        throw CorruptError("trailing bytes after model payload");
    }
    return m;
}

}  // namespace

std::vector<std::uint8_t> serialize_encoder(const EncoderModel& model) {
    return serialize_net(kRoleEncoder, model.net, model.image_h, model.image_w,
                         model.seed);
}

std::vector<std::uint8_t> serialize_decoder(const DecoderModel& model) {
    return serialize_net(kRoleDecoder, model.net, model.image_h, model.image_w,
                         model.seed);
}

std::uint8_t model_role(const std::vector<std::uint8_t>& bytes) {
    check_magic(bytes, kModelMagic, "SEDD model");
    if (bytes.size() < 9) throw CorruptError("file too short");
    return bytes[8];
}

EncoderModel deserialize_encoder(const std::vector<std::uint8_t>& bytes) {
    ParsedModel m = parse_model(bytes);
    if (m.role != kRoleEncoder) {
        throw FormatError("expected an encoder (key) file, found role " +
                          std::to_string(m.role));
    }
    EncoderModel enc;
    enc.net = std::move(m.net);
    enc.image_h = m.image_h;
    enc.image_w = m.image_w;
    enc.seed = m.seed;
    if (enc.net.layers.size() != 2 ||
        enc.input_dim() != enc.image_h * enc.image_w * 3) {
        throw Error(ErrorCode::Corrupt, "encoder structure is inconsistent");
    }
    return enc;
}

DecoderModel deserialize_decoder(const std::vector<std::uint8_t>& bytes) {
    ParsedModel m = parse_model(bytes);
    if (m.role != kRoleDecoder) {
        throw FormatError("expected a decoder file, found role " +
                          std::to_string(m.role));
    }
    DecoderModel dec;
    dec.net = std::move(m.net);
    dec.image_h = m.image_h;
    dec.image_w = m.image_w;
    dec.seed = m.seed;
    if (dec.output_dim() != dec.image_h * dec.image_w * 3) {
        throw Error(ErrorCode::Corrupt, "decoder structure is inconsistent");
    }
    return dec;
}

std::vector<std::uint8_t> serialize_encodings(const std::vector<FloatVector>& rows) {
    const std::size_t p = rows.empty() ? 0 : rows.front().size();
    for (const FloatVector& r : rows) {
        if (r.size() != p) {
            throw ShapeError("encodings of mixed lengths: " + std::to_string(p) +
                             " vs " + std::to_string(r.size()));
        }
    }
    ByteWriter w;
    w.raw(kEncodingMagic, 8);
    w.u32(static_cast<std::uint32_t>(p));
    w.u32(static_cast<std::uint32_t>(rows.size()));
    for (const FloatVector& r : rows) {
        for (float v : r) w.f32(v);
    }
    w.append_crc();
    return w.take();
}

std::vector<FloatVector> deserialize_encodings(const std::vector<std::uint8_t>& bytes) {
    check_magic(bytes, kEncodingMagic, "SEDD encoding");
    check_crc(bytes);
    ByteReader r(bytes);
    r.take(8);
    const std::uint32_t p = r.u32();
    const std::uint32_t count = r.u32();
    if (r.remaining() != static_cast<std::size_t>(p) * count * 4 + 4) {
        throw CorruptError("encoding file length does not match header");
    }
    std::vector<FloatVector> rows(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        rows[i].resize(p);
        for (std::uint32_t j = 0; j < p; ++j) {
            rows[i][j] = r.f32();
            if (!std::isfinite(rows[i][j])) {
                throw CorruptError("non-finite value in encoding row " +
                                   std::to_string(i));
            }
        }
    }
    return rows;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>()};
    if (in.bad()) throw IoError("read failure on " + path);
    return bytes;
}

void write_file_atomic(const std::vector<std::uint8_t>& bytes,
                       const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failure on " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::uint64_t save_encoder(const EncoderModel& model, const std::string& path) {
    auto bytes = serialize_encoder(model);
    write_file_atomic(bytes, path);
    return bytes.size();
}

std::uint64_t save_decoder(const DecoderModel& model, const std::string& path) {
    auto bytes = serialize_decoder(model);
    write_file_atomic(bytes, path);
    return bytes.size();
}

EncoderModel load_encoder(const std::string& path) {
    return deserialize_encoder(read_file_bytes(path));
}

DecoderModel load_decoder(const std::string& path) {
    return deserialize_decoder(read_file_bytes(path));
}

std::uint64_t save_encodings(const std::vector<FloatVector>& rows,
                             const std::string& path) {
    auto bytes = serialize_encodings(rows);
    write_file_atomic(bytes, path);
    return bytes.size();
}

std::vector<FloatVector> load_encodings(const std::string& path) {
    return deserialize_encodings(read_file_bytes(path));
}

}  // namespace sedd
