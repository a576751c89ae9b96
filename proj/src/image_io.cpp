// SPDX-License-Identifier: Apache-2.0
#include "image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "error.hpp"

#include <jpeglib.h>

namespace fs = std::filesystem;

namespace sedd {

namespace {

std::string lower_ext(const fs::path& p) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return e;
}

ImageRecord load_png_file(const std::string& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
        throw IoError("cannot read PNG " + path + ": " + image.message);
    }
    image.format = PNG_FORMAT_RGB;
    ImageRecord rec(image.height, image.width);
    rec.source_id = fs::path(path).filename().string();
    if (!png_image_finish_read(&image, nullptr, rec.pixels.data(), 0, nullptr)) {
        png_image_free(&image);
        throw IoError("cannot decode PNG " + path + ": " + image.message);
    }
    return rec;
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(mgr->jump, 1);
}

ImageRecord load_jpeg_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw IoError("cannot open " + path);

    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit;

    ImageRecord rec;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        std::fclose(f);
        throw IoError("cannot decode JPEG " + path);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, f);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    rec = ImageRecord(cinfo.output_height, cinfo.output_width);
    rec.source_id = fs::path(path).filename().string();
    const std::size_t stride = rec.width * 3;
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = rec.pixels.data() + cinfo.output_scanline * stride;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    std::fclose(f);
    return rec;
}

}  // namespace

ImageRecord load_image_file(const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".png") return load_png_file(path);
    if (ext == ".jpg" || ext == ".jpeg") return load_jpeg_file(path);
    throw FormatError("unsupported image format: " + path);
}

void save_png(const ImageRecord& img, const std::string& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width);
    image.height = static_cast<png_uint_32>(img.height);
    image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels.data(), 0,
                                 nullptr)) {
        throw IoError("cannot write PNG " + path + ": " + image.message);
    }
}

CorpusLoadResult load_image_dir(const std::string& path,
                                std::optional<std::size_t> limit) {
    std::error_code ec;
    if (!fs::is_directory(path, ec)) {
        throw IoError("not a readable directory: " + path);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path, ec)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    if (ec) throw IoError("cannot list directory " + path + ": " + ec.message());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) {
                  return a.filename().string() < b.filename().string();
              });

    CorpusLoadResult result;
    for (const fs::path& f : files) {
        const std::string ext = lower_ext(f);
        if (ext != ".png" && ext != ".jpg" && ext != ".jpeg") {
            ++result.skipped;
            continue;
        }
        if (limit && result.images.size() >= *limit) break;
        result.images.push_back(load_image_file(f.string()));
    }
    if (result.images.empty()) {
        throw Error(ErrorCode::EmptyCorpus,
                    "no decodable images found in " + path);
    }
    return result;
}

}  // namespace sedd
