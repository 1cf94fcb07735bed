#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include <png.h>

#include "lowlux/errors.hpp"
#include "lowlux/image_io.hpp"
#include "testutil.hpp"

using lowlux::ImageF;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "lowlux_io_tests";
    fs::create_directories(dir);
    return dir;
}

// Raw libpng writer used to craft inputs the library must reject or expand.
void write_png_depth(const fs::path& path, int width, int height, int bit_depth,
                     int color_type) {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    REQUIRE(f != nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                              nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, f);
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
    const int bytes_per_sample = bit_depth / 8;
    std::vector<unsigned char> row(
        static_cast<std::size_t>(width) * channels * bytes_per_sample, 0x42);
    for (int y = 0; y < height; ++y) png_write_row(png, row.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(f);
}

std::vector<char> file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::vector<char>(std::istreambuf_iterator<char>(in),
                             std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("png round trip is lossless at 8 bits") {
    const fs::path path = scratch_dir() / "roundtrip.png";
    const ImageF scene = testutil::synthetic_rgb(37, 23, 201);
    lowlux::save_image(scene, path.string());

    const ImageF loaded = lowlux::load_image(path.string());
    const ImageF expected = testutil::quantize8(scene);
    REQUIRE(loaded.width() == 37);
    REQUIRE(loaded.height() == 23);
    for (std::size_t i = 0; i < expected.data().size(); ++i) {
        CHECK(loaded.data()[i] == doctest::Approx(expected.data()[i]).epsilon(1e-12));
    }

    // A second save of already-quantized data reproduces the file bit for bit.
    const fs::path again = scratch_dir() / "roundtrip2.png";
    lowlux::save_image(loaded, again.string());
    CHECK(file_bytes(path) == file_bytes(again));
}

TEST_CASE("jpeg encode/decode stays close") {
    const fs::path path = scratch_dir() / "smoke.jpg";
    const ImageF scene = testutil::synthetic_rgb(64, 48, 202);
    lowlux::save_image(scene, path.string());

    const ImageF loaded = lowlux::load_image(path.string());
    REQUIRE(loaded.width() == 64);
    REQUIRE(loaded.height() == 48);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < scene.data().size(); ++i) {
        max_dev = std::max(max_dev, std::abs(loaded.data()[i] - scene.data()[i]));
    }
    CHECK(max_dev < 0.15);
}

TEST_CASE("grayscale and palette-free inputs expand to three channels") {
    const fs::path path = scratch_dir() / "gray.png";
    write_png_depth(path, 6, 4, 8, PNG_COLOR_TYPE_GRAY);
    const ImageF loaded = lowlux::load_image(path.string());
    CHECK(loaded.channels() == 3);
    CHECK(loaded.at(0, 0, 0) == doctest::Approx(0x42 / 255.0).epsilon(1e-12));
    CHECK(loaded.at(0, 0, 0) == loaded.at(1, 0, 0));
    CHECK(loaded.at(1, 0, 0) == loaded.at(2, 0, 0));
}

TEST_CASE("sixteen-bit input is rejected with a clear message") {
    const fs::path path = scratch_dir() / "deep.png";
    write_png_depth(path, 6, 4, 16, PNG_COLOR_TYPE_RGB);
    CHECK_THROWS_WITH_AS(lowlux::load_image(path.string()),
                         doctest::Contains("16-bit"), lowlux::IoError);
}

TEST_CASE("missing and non-image files are I/O errors") {
    CHECK_THROWS_AS(lowlux::load_image("/nonexistent/nowhere.png"), lowlux::IoError);

    const fs::path path = scratch_dir() / "not_an_image.png";
    std::ofstream(path) << "plain text, no pixels";
    CHECK_THROWS_AS(lowlux::load_image(path.string()), lowlux::IoError);
}
