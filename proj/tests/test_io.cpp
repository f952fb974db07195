#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <png.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "monogenic/io.hpp"

using namespace monogenic;
using namespace monogenic::io;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "monogenic_io_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Gray8 random_gray(int w, int h, unsigned seed) {
  std::mt19937 rng(seed);
  Gray8 g(w, h);
  for (auto& x : g.samples()) x = static_cast<std::uint8_t>(rng() & 0xff);
  return g;
}

// Minimal libpng writer for fixtures the library cannot produce itself.
void write_png_raw(const fs::path& p, int w, int h, int color_type, int depth,
                   const std::vector<std::uint8_t>& rows) {
  FILE* fp = std::fopen(p.c_str(), "wb");
  REQUIRE(fp);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, fp);
  png_set_IHDR(png, info, w, h, depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = rows.size() / h;
  for (int y = 0; y < h; ++y) png_write_row(png, rows.data() + y * stride);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

TEST_CASE("format names") {
  CHECK(parse_format("pgm") == ImageFormat::Pgm);
  CHECK(parse_format("png") == ImageFormat::Png);
  CHECK_FALSE(parse_format("jpg").has_value());
  CHECK(extension(ImageFormat::Png) == ".png");
}

TEST_CASE("PGM round trip is exact") {
  const Gray8 g = random_gray(17, 11, 1);
  const fs::path p = scratch("rt.pgm");
  write_pgm(p, g);
  const std::string bytes = read_bytes(p);
  CHECK(bytes.rfind("P5\n17 11\n255\n", 0) == 0);
  CHECK(bytes.size() == 13 + 17 * 11);
  const ScalarField f = read_image(p);
  REQUIRE(f.width() == 17);
  REQUIRE(f.height() == 11);
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(f[i] == g[i] / 255.0);
  CHECK(to_gray8(f, 0.0, 1.0) == g);
}

TEST_CASE("PGM with comments and 16-bit samples") {
  std::string body = "P5\n# a comment\n3 2 # trailing\n65535\n";
  for (int v : {0, 65535, 32768, 1, 256, 4096}) {
    body.push_back(static_cast<char>(v >> 8));
    body.push_back(static_cast<char>(v & 0xff));
  }
  const fs::path p = scratch("c16.pgm");
  write_bytes(p, body);
  const ScalarField f = read_image(p);
  CHECK(f(1, 0) == 1.0);
  CHECK(f(2, 0) == doctest::Approx(32768.0 / 65535.0));
  CHECK(f(1, 1) == doctest::Approx(256.0 / 65535.0));
}

TEST_CASE("PNG round trips") {
  const Gray8 g = random_gray(23, 9, 2);
  const fs::path p = scratch("rt.png");
  write_png(p, g);
  CHECK(to_gray8(read_image(p), 0.0, 1.0) == g);

  Mask m(13, 5);
  for (std::size_t i = 0; i < m.size(); i += 3) m[i] = 1;
  const fs::path pb = scratch("bi.png");
  write_png_bilevel(pb, m);
  const ScalarField fb = read_image(pb);
  for (std::size_t i = 0; i < m.size(); ++i) REQUIRE(fb[i] == (m[i] ? 1.0 : 0.0));

  const fs::path pe = scratch("edges.pgm");
  write_edge_map(pe, m, ImageFormat::Pgm);
  const ScalarField fe = read_image(pe);
  for (std::size_t i = 0; i < m.size(); ++i) REQUIRE(fe[i] == (m[i] ? 1.0 : 0.0));
}

TEST_CASE("RGB, alpha and 16-bit PNG input") {
  std::vector<std::uint8_t> rgb = {255, 0, 0, 0, 255, 0, 0, 0, 255, 255, 255, 255};
  const fs::path p = scratch("rgb.png");
  write_png_raw(p, 4, 1, PNG_COLOR_TYPE_RGB, 8, rgb);
  const ScalarField f = read_image(p);
  CHECK(f[0] == doctest::Approx(0.299));
  CHECK(f[1] == doctest::Approx(0.587));
  CHECK(f[2] == doctest::Approx(0.114));
  CHECK(f[3] == doctest::Approx(1.0));

  std::vector<std::uint8_t> ga = {100, 7, 200, 255};
  const fs::path pa = scratch("ga.png");
  write_png_raw(pa, 2, 1, PNG_COLOR_TYPE_GRAY_ALPHA, 8, ga);
  const ScalarField fa = read_image(pa);
  CHECK(fa[0] == 100 / 255.0);
  CHECK(fa[1] == 200 / 255.0);

  std::vector<std::uint8_t> g16 = {0x12, 0x34, 0xff, 0xff};
  const fs::path p16 = scratch("g16.png");
  write_png_raw(p16, 2, 1, PNG_COLOR_TYPE_GRAY, 16, g16);
  const ScalarField f16 = read_image(p16);
  CHECK(f16[0] == doctest::Approx(0x1234 / 65535.0));
  CHECK(f16[1] == 1.0);
}

TEST_CASE("read errors") {
  auto code = [](const fs::path& p) {
    try {
      read_image(p);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ZeroNorm;
  };
  CHECK(code(scratch("does-not-exist.pgm")) == ErrorCode::UnreadableInput);
  const fs::path txt = scratch("text.pgm");
  write_bytes(txt, "hello world, not an image");
  CHECK(code(txt) == ErrorCode::UnsupportedFormat);
  const fs::path ascii = scratch("ascii.pgm");
  write_bytes(ascii, "P2\n2 1\n255\n0 255\n");
  CHECK(code(ascii) == ErrorCode::UnsupportedFormat);
  const fs::path trunc = scratch("trunc.pgm");
  write_bytes(trunc, "P5\n4 4\n255\nabc");
  CHECK(code(trunc) == ErrorCode::UnreadableInput);
  const fs::path badpng = scratch("bad.png");
  write_bytes(badpng, std::string("\x89PNG\r\n\x1a\n", 8) + "garbage");
  CHECK(code(badpng) == ErrorCode::UnreadableInput);
  CHECK_THROWS_AS(write_pgm(scratch("no-such-dir") / "x" / "y.pgm", Gray8(2, 2)), Error);
}

TEST_CASE("gray mapping") {
  ScalarField f(3, 1);
  f[0] = -2.0;
  f[1] = 0.0;
  f[2] = 2.0;
  const Gray8 g = to_gray8(f);
  CHECK(g[0] == 0);
  CHECK(g[1] == 128);
  CHECK(g[2] == 255);
  CHECK(to_gray8(ScalarField(2, 2, 5.0))[0] == 0);
  const Gray8 c = to_gray8(f, -1.0, 1.0);
  CHECK(c[0] == 0);
  CHECK(c[2] == 255);
}

TEST_CASE("PFM round trip") {
  ScalarField f(5, 3);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 5; ++x) f(x, y) = 0.1 * x - 1.3 * y;
  }
  const fs::path p = scratch("f.pfm");
  write_pfm(p, f);
  const std::string bytes = read_bytes(p);
  CHECK(bytes.rfind("Pf\n5 3\n-1", 0) == 0);
  const ScalarField g = read_pfm(p);
  for (std::size_t i = 0; i < f.size(); ++i) REQUIRE(g[i] == static_cast<float>(f[i]));
}
