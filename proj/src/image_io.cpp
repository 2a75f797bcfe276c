#include "rowweed/image_io.hpp"

#include <png.h>

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "rowweed/errors.hpp"

namespace rowweed {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) throw IoError("cannot open " + path.string());
    return f;
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriter() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

void write_png_common(const std::filesystem::path& path, int width, int height, int color_type,
                      int bit_depth, const std::vector<png_bytep>& rows,
                      const std::vector<std::array<std::uint8_t, 3>>* palette) {
    FilePtr f = open_file(path, "wb");
    PngWriter w;
    w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!w.png) throw IoError("png_create_write_struct failed");
    w.info = png_create_info_struct(w.png);
    if (!w.info) throw IoError("png_create_info_struct failed");
    if (setjmp(png_jmpbuf(w.png))) throw IoError("png write failed for " + path.string());

    png_init_io(w.png, f.get());
    png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                 bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    std::vector<png_color> pal;
    if (palette) {
        pal.reserve(palette->size());
        for (const auto& c : *palette) pal.push_back({c[0], c[1], c[2]});
        png_set_PLTE(w.png, w.info, pal.data(), static_cast<int>(pal.size()));
    }
    png_write_info(w.png, w.info);
    if (bit_depth == 16) png_set_swap(w.png);  // rows are little-endian in memory
    png_write_image(w.png, const_cast<png_bytepp>(rows.data()));
    png_write_end(w.png, nullptr);
}

}  // namespace

RgbImage read_png_rgb(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8))
        throw IoError(path.string() + " is not a PNG file");

    PngReader r;
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) throw IoError("png_create_read_struct failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info) throw IoError("png_create_info_struct failed");
    if (setjmp(png_jmpbuf(r.png))) throw IoError("png read failed for " + path.string());

    png_init_io(r.png, f.get());
    png_set_sig_bytes(r.png, 8);
    png_read_info(r.png, r.info);

    png_set_palette_to_rgb(r.png);
    png_set_expand_gray_1_2_4_to_8(r.png);
    png_set_strip_16(r.png);
    png_set_strip_alpha(r.png);
    png_set_gray_to_rgb(r.png);
    png_read_update_info(r.png, r.info);

    const int width = static_cast<int>(png_get_image_width(r.png, r.info));
    const int height = static_cast<int>(png_get_image_height(r.png, r.info));
    if (png_get_rowbytes(r.png, r.info) != static_cast<std::size_t>(width) * 3)
        throw IoError("unexpected row size reading " + path.string());

    RgbImage img(width, height);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) rows[y] = img.data.data() + static_cast<std::size_t>(y) * width * 3;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return img;
}

RgbImage read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P6") throw IoError(path.string() + " is not a P6 PPM");
    auto next_token = [&in, &path]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw IoError("truncated PPM header in " + path.string());
    };
    const int width = std::stoi(next_token());
    const int height = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (width < 1 || height < 1 || maxval != 255)
        throw IoError("unsupported PPM header in " + path.string());
    in.get();  // single whitespace after maxval
    RgbImage img(width, height);
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
        throw IoError("truncated PPM data in " + path.string());
    return img;
}

RgbImage read_image(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".ppm" || ext == ".PPM") return read_ppm(path);
    return read_png_rgb(path);
}

void write_png_rgb(const std::filesystem::path& path, const RgbImage& img) {
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = const_cast<png_bytep>(img.data.data() + static_cast<std::size_t>(y) * img.width * 3);
    write_png_common(path, img.width, img.height, PNG_COLOR_TYPE_RGB, 8, rows, nullptr);
}

void write_png_mask(const std::filesystem::path& path, const BinaryMask& mask) {
    std::vector<std::uint8_t> bytes(mask.bits.size());
    for (std::size_t i = 0; i < mask.bits.size(); ++i) bytes[i] = mask.bits[i] ? 255 : 0;
    std::vector<png_bytep> rows(mask.height);
    for (int y = 0; y < mask.height; ++y)
        rows[y] = bytes.data() + static_cast<std::size_t>(y) * mask.width;
    write_png_common(path, mask.width, mask.height, PNG_COLOR_TYPE_GRAY, 8, rows, nullptr);
}

void write_png_labels16(const std::filesystem::path& path, const LabelMap& labels) {
    std::vector<std::uint16_t> bytes(labels.labels.size());
    for (std::size_t i = 0; i < labels.labels.size(); ++i)
        bytes[i] = static_cast<std::uint16_t>(std::min<std::int32_t>(labels.labels[i], 65535));
    std::vector<png_bytep> rows(labels.height);
    for (int y = 0; y < labels.height; ++y)
        rows[y] = reinterpret_cast<png_bytep>(bytes.data() + static_cast<std::size_t>(y) * labels.width);
    write_png_common(path, labels.width, labels.height, PNG_COLOR_TYPE_GRAY, 16, rows, nullptr);
}

void write_png_indexed(const std::filesystem::path& path, int width, int height,
                       const std::vector<std::uint8_t>& values,
                       const std::vector<std::array<std::uint8_t, 3>>& palette) {
    if (values.size() != static_cast<std::size_t>(width) * height)
        throw IoError("write_png_indexed: value buffer does not match dimensions");
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(values.data() + static_cast<std::size_t>(y) * width);
    write_png_common(path, width, height, PNG_COLOR_TYPE_PALETTE, 8, rows, &palette);
}

std::vector<std::uint8_t> read_png_indices(const std::filesystem::path& path, int& width,
                                           int& height) {
    FilePtr f = open_file(path, "rb");
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8))
        throw IoError(path.string() + " is not a PNG file");

    PngReader r;
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) throw IoError("png_create_read_struct failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info) throw IoError("png_create_info_struct failed");
    if (setjmp(png_jmpbuf(r.png))) throw IoError("png read failed for " + path.string());

    png_init_io(r.png, f.get());
    png_set_sig_bytes(r.png, 8);
    png_read_info(r.png, r.info);

    const int color_type = png_get_color_type(r.png, r.info);
    if (color_type != PNG_COLOR_TYPE_PALETTE && color_type != PNG_COLOR_TYPE_GRAY)
        throw IoError(path.string() + ": expected an indexed or grayscale PNG");
    if (png_get_bit_depth(r.png, r.info) < 8) png_set_packing(r.png);
    if (png_get_bit_depth(r.png, r.info) == 16) png_set_strip_16(r.png);
    png_read_update_info(r.png, r.info);

    width = static_cast<int>(png_get_image_width(r.png, r.info));
    height = static_cast<int>(png_get_image_height(r.png, r.info));
    std::vector<std::uint8_t> values(static_cast<std::size_t>(width) * height);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = values.data() + static_cast<std::size_t>(y) * width;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return values;
}

}  // namespace rowweed
