#include "lowlux/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "lowlux/errors.hpp"

namespace lowlux {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw IoError("cannot open '" + path + "'");
    return f;
}

ImageF from_interleaved8(const std::vector<unsigned char>& bytes, int w, int h) {
    ImageF image(w, h, 3);
    double* r = image.plane(0);
    double* g = image.plane(1);
    double* b = image.plane(2);
    const std::size_t n = image.pixels_per_plane();
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = bytes[i * 3 + 0] / 255.0;
        g[i] = bytes[i * 3 + 1] / 255.0;
        b[i] = bytes[i * 3 + 2] / 255.0;
    }
    return image;
}

ImageF load_png(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    std::vector<unsigned char> bytes;
    std::vector<png_bytep> rows;

    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png: allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png: allocation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png: failed to decode '" + path + "'");
    }

    png_init_io(png, f.get());
    png_read_info(png, info);

    const int bit_depth = png_get_bit_depth(png, info);
    if (bit_depth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png: 16-bit input is not supported, re-encode '" + path +
                      "' as 8-bit");
    }

    const int color_type = png_get_color_type(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(png);
    }
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int w = int(png_get_image_width(png, info));
    const int h = int(png_get_image_height(png, info));
    bytes.resize(std::size_t(w) * h * 3);
    rows.resize(h);
    for (int y = 0; y < h; ++y) rows[y] = bytes.data() + std::size_t(y) * w * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return from_interleaved8(bytes, w, h);
}

struct JpegErrorTrap {
    jpeg_error_mgr mgr;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* trap = reinterpret_cast<JpegErrorTrap*>(cinfo->err);
    std::longjmp(trap->jump, 1);
}

ImageF load_jpeg(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    std::vector<unsigned char> bytes;

    jpeg_decompress_struct cinfo{};
    JpegErrorTrap trap{};
    cinfo.err = jpeg_std_error(&trap.mgr);
    trap.mgr.error_exit = jpeg_error_exit;
    if (setjmp(trap.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw IoError("jpeg: failed to decode '" + path + "'");
    }

    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, f.get());
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const int w = int(cinfo.output_width);
    const int h = int(cinfo.output_height);
    bytes.resize(std::size_t(w) * h * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        unsigned char* row = bytes.data() + std::size_t(cinfo.output_scanline) * w * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return from_interleaved8(bytes, w, h);
}

std::vector<unsigned char> to_interleaved8(const ImageF& image) {
    std::vector<unsigned char> bytes(image.pixels_per_plane() * 3);
    for (int c = 0; c < 3; ++c) {
        const double* src = image.channels() == 3 ? image.plane(c) : image.plane(0);
        for (std::size_t i = 0; i < image.pixels_per_plane(); ++i) {
            const double v = std::clamp(src[i], 0.0, 1.0);
            bytes[i * 3 + c] = static_cast<unsigned char>(std::lround(v * 255.0));
        }
    }
    return bytes;
}

void save_png(const ImageF& image, const std::string& path) {
    const std::vector<unsigned char> bytes = to_interleaved8(image);
    FilePtr f = open_file(path, "wb");
    std::vector<png_bytep> rows;

    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png: allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png: allocation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png: failed to encode '" + path + "'");
    }

    png_init_io(png, f.get());
    png_set_IHDR(png, info, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    rows.resize(image.height());
    for (int y = 0; y < image.height(); ++y) {
        rows[y] = const_cast<png_bytep>(bytes.data() + std::size_t(y) * image.width() * 3);
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_jpeg(const ImageF& image, const std::string& path) {
    const std::vector<unsigned char> bytes = to_interleaved8(image);
    FilePtr f = open_file(path, "wb");

    jpeg_compress_struct cinfo{};
    JpegErrorTrap trap{};
    cinfo.err = jpeg_std_error(&trap.mgr);
    trap.mgr.error_exit = jpeg_error_exit;
    if (setjmp(trap.jump)) {
        jpeg_destroy_compress(&cinfo);
        throw IoError("jpeg: failed to encode '" + path + "'");
    }

    jpeg_create_compress(&cinfo);
    jpeg_stdio_dest(&cinfo, f.get());
    cinfo.image_width = JDIMENSION(image.width());
    cinfo.image_height = JDIMENSION(image.height());
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, 95, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    while (cinfo.next_scanline < cinfo.image_height) {
        const unsigned char* row =
            bytes.data() + std::size_t(cinfo.next_scanline) * image.width() * 3;
        JSAMPROW rows[1] = {const_cast<JSAMPROW>(row)};
        jpeg_write_scanlines(&cinfo, rows, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
}

bool has_suffix(const std::string& s, const char* suffix) {
    const std::size_t len = std::strlen(suffix);
    if (s.size() < len) return false;
    for (std::size_t i = 0; i < len; ++i) {
        if (std::tolower(s[s.size() - len + i]) != suffix[i]) return false;
    }
    return true;
}

}  // namespace

ImageF load_image(const std::string& path) {
    unsigned char magic[4] = {0, 0, 0, 0};
    {
        FilePtr f = open_file(path, "rb");
        if (std::fread(magic, 1, sizeof(magic), f.get()) < 2) {
            throw IoError("cannot read '" + path + "'");
        }
    }
    if (magic[0] == 0x89 && magic[1] == 'P') return load_png(path);
    if (magic[0] == 0xFF && magic[1] == 0xD8) return load_jpeg(path);
    throw IoError("'" + path + "' is neither PNG nor JPEG");
}

void save_image(const ImageF& image, const std::string& path) {
    if (image.empty()) throw IoError("refusing to save an empty image");
    if (has_suffix(path, ".jpg") || has_suffix(path, ".jpeg")) {
        save_jpeg(image, path);
    } else {
        save_png(image, path);
    }
}

}  // namespace lowlux
