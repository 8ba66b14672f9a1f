#include "mview/map_io.hpp"

#include "mview/error.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

namespace mview {

namespace {

constexpr std::array<char, 8> kF32Magic = {'M', 'V', 'I', 'E', 'W', 'F', '3', '2'};

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) {
            std::fclose(f);
        }
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) {
        throw IoError("cannot open " + path.string());
    }
    return f;
}

void put_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
    buf.push_back(static_cast<unsigned char>(v & 0xff));
    buf.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
    buf.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
    buf.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

// libpng reader state with RAII cleanup; all throws happen after cleanup.
struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;

    ~PngReader() {
        if (png) {
            png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        }
    }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;

    ~PngWriter() {
        if (png) {
            png_destroy_write_struct(&png, info ? &info : nullptr);
        }
    }
};

// Decoded rows as raw bytes plus layout, shared by the map and image loaders.
struct DecodedPng {
    int rows = 0;
    int cols = 0;
    int channels = 0;
    int bit_depth = 0;
    std::vector<unsigned char> bytes;  // row-major, 16-bit values big-endian
};

DecodedPng decode_png(const std::filesystem::path& path, bool force_gray) {
    FilePtr fp = open_file(path, "rb");
    PngReader reader;
    reader.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!reader.png) {
        throw IoError("libpng: read struct allocation failed");
    }
    reader.info = png_create_info_struct(reader.png);
    if (!reader.info) {
        throw IoError("libpng: info struct allocation failed");
    }
    if (setjmp(png_jmpbuf(reader.png))) {
        throw ParseError("failed to decode PNG " + path.string());
    }
    png_init_io(reader.png, fp.get());
    png_read_info(reader.png, reader.info);

    png_uint_32 width = 0, height = 0;
    int bit_depth = 0, color_type = 0;
    png_get_IHDR(reader.png, reader.info, &width, &height, &bit_depth, &color_type, nullptr,
                 nullptr, nullptr);

    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(reader.png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(reader.png);
    }
    if (png_get_valid(reader.png, reader.info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(reader.png);
    }
    if (color_type & PNG_COLOR_MASK_ALPHA || png_get_valid(reader.png, reader.info, PNG_INFO_tRNS)) {
        png_set_strip_alpha(reader.png);
    }
    if (force_gray && (color_type & PNG_COLOR_MASK_COLOR)) {
        png_set_rgb_to_gray_fixed(reader.png, 1, -1, -1);
    }
    png_read_update_info(reader.png, reader.info);

    DecodedPng out;
    out.rows = static_cast<int>(height);
    out.cols = static_cast<int>(width);
    out.bit_depth = png_get_bit_depth(reader.png, reader.info);
    out.channels = png_get_channels(reader.png, reader.info);

    const std::size_t row_bytes = png_get_rowbytes(reader.png, reader.info);
    out.bytes.resize(row_bytes * out.rows);
    std::vector<png_bytep> row_ptrs(out.rows);
    for (int r = 0; r < out.rows; ++r) {
        row_ptrs[r] = out.bytes.data() + row_bytes * r;
    }
    png_read_image(reader.png, row_ptrs.data());
    png_read_end(reader.png, nullptr);
    return out;
}

void encode_png(const std::filesystem::path& path, int rows, int cols, int channels,
                int bit_depth, const std::vector<unsigned char>& bytes) {
    FilePtr fp = open_file(path, "wb");
    PngWriter writer;
    writer.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!writer.png) {
        throw IoError("libpng: write struct allocation failed");
    }
    writer.info = png_create_info_struct(writer.png);
    if (!writer.info) {
        throw IoError("libpng: info struct allocation failed");
    }
    if (setjmp(png_jmpbuf(writer.png))) {
        throw IoError("failed to encode PNG " + path.string());
    }
    png_init_io(writer.png, fp.get());
    const int color_type = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(writer.png, writer.info, static_cast<png_uint_32>(cols),
                 static_cast<png_uint_32>(rows), bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(writer.png, writer.info);

    const std::size_t row_bytes = static_cast<std::size_t>(cols) * channels * (bit_depth / 8);
    std::vector<png_bytep> row_ptrs(rows);
    for (int r = 0; r < rows; ++r) {
        row_ptrs[r] = const_cast<png_bytep>(bytes.data() + row_bytes * r);
    }
    png_write_image(writer.png, row_ptrs.data());
    png_write_end(writer.png, nullptr);
}

}  // namespace

ScoreMap load_map_f32(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    std::array<unsigned char, 16> header{};
    if (std::fread(header.data(), 1, header.size(), f.get()) != header.size()) {
        throw ParseError(path.string() + ": truncated f32 header");
    }
    if (std::memcmp(header.data(), kF32Magic.data(), kF32Magic.size()) != 0) {
        throw ParseError(path.string() + ": bad f32 magic");
    }
    const std::uint32_t rows = get_u32(header.data() + 8);
    const std::uint32_t cols = get_u32(header.data() + 12);
    if (rows == 0 || cols == 0 || rows > (1u << 20) || cols > (1u << 20)) {
        throw ParseError(path.string() + ": implausible f32 shape");
    }

    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    std::vector<float> values(n);
    if (std::fread(values.data(), sizeof(float), n, f.get()) != n) {
        throw ParseError(path.string() + ": truncated f32 payload");
    }

    ScoreMap map(static_cast<int>(rows), static_cast<int>(cols));
    std::copy(values.begin(), values.end(), map.data().begin());
    map.validate();
    return map;
}

void save_map_f32(const std::filesystem::path& path, const ScoreMap& map) {
    std::vector<unsigned char> header(kF32Magic.begin(), kF32Magic.end());
    put_u32(header, static_cast<std::uint32_t>(map.rows()));
    put_u32(header, static_cast<std::uint32_t>(map.cols()));

    std::vector<float> values(map.data().size());
    std::transform(map.data().begin(), map.data().end(), values.begin(),
                   [](double v) { return static_cast<float>(v); });

    FilePtr f = open_file(path, "wb");
    if (std::fwrite(header.data(), 1, header.size(), f.get()) != header.size() ||
        std::fwrite(values.data(), sizeof(float), values.size(), f.get()) != values.size()) {
        throw IoError("short write to " + path.string());
    }
}

ScoreMap load_map_png(const std::filesystem::path& path) {
    const DecodedPng png = decode_png(path, /*force_gray=*/true);
    if (png.channels != 1) {
        throw ParseError(path.string() + ": expected grayscale for a score map");
    }
    ScoreMap map(png.rows, png.cols);
    if (png.bit_depth == 8) {
        for (std::size_t i = 0; i < map.data().size(); ++i) {
            map.data()[i] = png.bytes[i] / 255.0;
        }
    } else {
        for (std::size_t i = 0; i < map.data().size(); ++i) {
            // PNG 16-bit samples are big-endian.
            const unsigned hi = png.bytes[2 * i];
            const unsigned lo = png.bytes[2 * i + 1];
            map.data()[i] = ((hi << 8) | lo) / 65535.0;
        }
    }
    return map;
}

void save_map_png(const std::filesystem::path& path, const ScoreMap& map, PngBits bits) {
    const std::size_t n = map.data().size();
    std::vector<unsigned char> bytes;
    if (bits == PngBits::Eight) {
        bytes.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::clamp(map.data()[i], 0.0, 1.0);
            bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0));
        }
    } else {
        bytes.resize(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::clamp(map.data()[i], 0.0, 1.0);
            const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
            bytes[2 * i] = static_cast<unsigned char>(q >> 8);
            bytes[2 * i + 1] = static_cast<unsigned char>(q & 0xff);
        }
    }
    encode_png(path, map.rows(), map.cols(), 1, static_cast<int>(bits), bytes);
}

ScoreMap load_map(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".f32") {
        return load_map_f32(path);
    }
    if (ext == ".png") {
        return load_map_png(path);
    }
    throw IoError(path.string() + ": unknown map extension (expected .f32 or .png)");
}

void save_map(const std::filesystem::path& path, const ScoreMap& map, PngBits bits) {
    const std::string ext = path.extension().string();
    if (ext == ".f32") {
        save_map_f32(path, map);
    } else if (ext == ".png") {
        save_map_png(path, map, bits);
    } else {
        throw IoError(path.string() + ": unknown map extension (expected .f32 or .png)");
    }
}

ImageU8 load_image(const std::filesystem::path& path) {
    const DecodedPng png = decode_png(path, /*force_gray=*/false);
    if (png.channels != 1 && png.channels != 3) {
        throw ParseError(path.string() + ": expected 1- or 3-channel PNG");
    }
    ImageU8 img(png.rows, png.cols, png.channels);
    const std::size_t n = img.data.size();
    if (png.bit_depth == 8) {
        std::copy_n(png.bytes.begin(), n, img.data.begin());
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            img.data[i] = png.bytes[2 * i];  // keep the high byte
        }
    }
    return img;
}

void save_image(const std::filesystem::path& path, const ImageU8& image) {
    if (image.channels != 1 && image.channels != 3) {
        throw IoError("images must have 1 or 3 channels");
    }
    encode_png(path, image.rows, image.cols, image.channels, 8, image.data);
}

}  // namespace mview
