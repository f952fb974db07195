#include "monogenic/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "monogenic/edgeops.hpp"

namespace monogenic::io {

namespace fs = std::filesystem;

namespace {

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableInput, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::UnreadableInput, "cannot read " + path.string());
  return bytes;
}

void write_bytes(const fs::path& path, const std::string& header,
                 const std::vector<unsigned char>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot create " + path.string());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

// Netpbm header token, skipping whitespace and comments.
std::string next_token(const std::vector<unsigned char>& b, std::size_t& pos) {
  while (pos < b.size()) {
    if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else if (std::isspace(b[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  std::string tok;
  while (pos < b.size() && !std::isspace(b[pos]) && b[pos] != '#') tok.push_back(static_cast<char>(b[pos++]));
  return tok;
}

int parse_positive(const std::string& tok, const fs::path& path) {
  try {
    std::size_t used = 0;
    const long v = std::stol(tok, &used);
    if (used == tok.size() && v > 0 && v <= (1L << 30)) return static_cast<int>(v);
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::UnreadableInput, "malformed PGM header in " + path.string());
}

ScalarField decode_pgm(const std::vector<unsigned char>& b, const fs::path& path) {
  std::size_t pos = 2;
  const int w = parse_positive(next_token(b, pos), path);
  const int h = parse_positive(next_token(b, pos), path);
  const int maxval = parse_positive(next_token(b, pos), path);
  if (maxval > 65535) throw Error(ErrorCode::UnsupportedFormat, "PGM maxval above 65535");
  ++pos;  // single whitespace before the raster
  const std::size_t bps = maxval > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (pos > b.size() || b.size() - pos < n * bps) {
    throw Error(ErrorCode::UnreadableInput, "truncated PGM raster in " + path.string());
  }
  ScalarField f(w, h);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned v = bps == 1 ? b[pos + i] : (b[pos + 2 * i] << 8) | b[pos + 2 * i + 1];
    f[i] = static_cast<double>(v) / maxval;
  }
  return f;
}

struct PngRead {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngRead() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct MemoryReader {
  const std::vector<unsigned char>* bytes;
  std::size_t pos;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t len) {
  auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (r->bytes->size() - r->pos < len) png_error(png, "unexpected end of data");
  std::memcpy(out, r->bytes->data() + r->pos, len);
  r->pos += len;
}

struct RawPng {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<unsigned char> data;
  std::vector<png_bytep> rows;
};

// Only plain data is touched between setjmp and a possible longjmp.
bool decode_png_raw(PngRead& ctx, MemoryReader& reader, RawPng& raw) {
  if (setjmp(png_jmpbuf(ctx.png))) return false;
  png_set_read_fn(ctx.png, &reader, read_from_memory);
  png_read_info(ctx.png, ctx.info);
  const int color = png_get_color_type(ctx.png, ctx.info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(ctx.png, ctx.info) < 8) {
    png_set_expand_gray_1_2_4_to_8(ctx.png);
  }
  if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
  png_set_strip_alpha(ctx.png);
  png_read_update_info(ctx.png, ctx.info);
  raw.width = png_get_image_width(ctx.png, ctx.info);
  raw.height = png_get_image_height(ctx.png, ctx.info);
  raw.channels = png_get_channels(ctx.png, ctx.info);
  raw.bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  const png_size_t stride = png_get_rowbytes(ctx.png, ctx.info);
  raw.data.resize(stride * raw.height);
  raw.rows.resize(raw.height);
  for (png_uint_32 y = 0; y < raw.height; ++y) raw.rows[y] = raw.data.data() + y * stride;
  png_read_image(ctx.png, raw.rows.data());
  png_read_end(ctx.png, nullptr);
  return true;
}

ScalarField decode_png(const std::vector<unsigned char>& b, const fs::path& path) {
  PngRead ctx;
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw Error(ErrorCode::IoFailure, "libpng initialisation failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw Error(ErrorCode::IoFailure, "libpng initialisation failed");
  MemoryReader reader{&b, 0};
  RawPng raw;
  if (!decode_png_raw(ctx, reader, raw)) {
    throw Error(ErrorCode::UnreadableInput, "corrupt PNG " + path.string());
  }
  if ((raw.channels != 1 && raw.channels != 3) || (raw.bit_depth != 8 && raw.bit_depth != 16)) {
    throw Error(ErrorCode::UnsupportedFormat, "unsupported PNG layout in " + path.string());
  }
  ScalarField f(static_cast<int>(raw.width), static_cast<int>(raw.height));
  const double maxval = raw.bit_depth == 8 ? 255.0 : 65535.0;
  for (png_uint_32 y = 0; y < raw.height; ++y) {
    const unsigned char* row = raw.rows[y];
    for (png_uint_32 x = 0; x < raw.width; ++x) {
      std::array<double, 3> c{};
      for (int k = 0; k < raw.channels; ++k) {
        const std::size_t j = static_cast<std::size_t>(x) * raw.channels + k;
        c[k] = raw.bit_depth == 8 ? row[j] : (row[2 * j] << 8) | row[2 * j + 1];
      }
      const double v = raw.channels == 1 ? c[0] : edgeops::luminance(c[0], c[1], c[2]);
      f(static_cast<int>(x), static_cast<int>(y)) = v / maxval;
    }
  }
  return f;
}

struct PngWrite {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* file = nullptr;
  ~PngWrite() {
    png_destroy_write_struct(&png, info ? &info : nullptr);
    if (file) std::fclose(file);
  }
};

bool encode_png_raw(PngWrite& ctx, int w, int h, int depth, std::vector<png_bytep>& rows) {
  if (setjmp(png_jmpbuf(ctx.png))) return false;
  png_init_io(ctx.png, ctx.file);
  png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), depth,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  png_write_image(ctx.png, rows.data());
  png_write_end(ctx.png, nullptr);
  return true;
}

void write_png_rows(const fs::path& path, int w, int h, int depth,
                    std::vector<unsigned char>& data, std::size_t stride) {
  PngWrite ctx;
  ctx.file = std::fopen(path.c_str(), "wb");
  if (!ctx.file) throw Error(ErrorCode::IoFailure, "cannot create " + path.string());
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw Error(ErrorCode::IoFailure, "libpng initialisation failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw Error(ErrorCode::IoFailure, "libpng initialisation failed");
  std::vector<png_bytep> rows(static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) rows[y] = data.data() + y * stride;
  if (!encode_png_raw(ctx, w, h, depth, rows)) {
    throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  }
}

}  // namespace

std::string_view extension(ImageFormat f) { return f == ImageFormat::Pgm ? ".pgm" : ".png"; }

std::optional<ImageFormat> parse_format(std::string_view name) {
  if (name == "pgm") return ImageFormat::Pgm;
  if (name == "png") return ImageFormat::Png;
  return std::nullopt;
}

ScalarField read_image(const fs::path& path) {
  const std::vector<unsigned char> b = read_bytes(path);
  static constexpr std::array<unsigned char, 8> kPngSig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (b.size() >= 8 && std::equal(kPngSig.begin(), kPngSig.end(), b.begin())) {
    return decode_png(b, path);
  }
  if (b.size() >= 2 && b[0] == 'P' && b[1] == '5') return decode_pgm(b, path);
  if (b.empty()) throw Error(ErrorCode::UnreadableInput, "empty file " + path.string());
  throw Error(ErrorCode::UnsupportedFormat, "not a binary PGM or PNG: " + path.string());
}

void write_pgm(const fs::path& path, const Gray8& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  write_bytes(path, header, img.vector());
}

void write_png(const fs::path& path, const Gray8& img) {
  std::vector<unsigned char> data(img.vector());
  write_png_rows(path, img.width(), img.height(), 8, data, static_cast<std::size_t>(img.width()));
}

void write_png_bilevel(const fs::path& path, const Mask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  const std::size_t stride = (static_cast<std::size_t>(w) + 7) / 8;
  std::vector<unsigned char> data(stride * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask(x, y)) data[y * stride + x / 8] |= static_cast<unsigned char>(0x80u >> (x % 8));
    }
  }
  write_png_rows(path, w, h, 1, data, stride);
}

void write_edge_map(const fs::path& path, const Mask& mask, ImageFormat format) {
  if (format == ImageFormat::Png) {
    write_png_bilevel(path, mask);
    return;
  }
  Gray8 img(mask.width(), mask.height());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = mask[i] ? 255 : 0;
  write_pgm(path, img);
}

void write_gray(const fs::path& path, const Gray8& img, ImageFormat format) {
  if (format == ImageFormat::Png) {
    write_png(path, img);
  } else {
    write_pgm(path, img);
  }
}

Gray8 to_gray8(const ScalarField& f) {
  const auto [lo, hi] = std::minmax_element(f.samples().begin(), f.samples().end());
  return to_gray8(f, *lo, *hi);
}

Gray8 to_gray8(const ScalarField& f, double lo, double hi) {
  Gray8 out(f.width(), f.height());
  const double span = hi - lo;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double t = span > 0.0 ? (f[i] - lo) / span : 0.0;
    out[i] = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
  }
  return out;
}

void write_pfm(const fs::path& path, const ScalarField& f) {
  static_assert(sizeof(float) == 4);
  const std::string header =
      "Pf\n" + std::to_string(f.width()) + " " + std::to_string(f.height()) + "\n-1.0\n";
  std::vector<unsigned char> body(f.size() * 4);
  std::size_t k = 0;
  for (int y = f.height() - 1; y >= 0; --y) {
    for (int x = 0; x < f.width(); ++x) {
      auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(f(x, y)));
      for (int byte = 0; byte < 4; ++byte) body[k++] = static_cast<unsigned char>(bits >> (8 * byte));
    }
  }
  write_bytes(path, header, body);
}

ScalarField read_pfm(const fs::path& path) {
  const std::vector<unsigned char> b = read_bytes(path);
  if (b.size() < 2 || b[0] != 'P' || b[1] != 'f') {
    throw Error(ErrorCode::UnsupportedFormat, "not a grayscale PFM: " + path.string());
  }
  std::size_t pos = 2;
  const int w = parse_positive(next_token(b, pos), path);
  const int h = parse_positive(next_token(b, pos), path);
  const std::string scale = next_token(b, pos);
  if (scale.empty() || scale[0] != '-') {
    throw Error(ErrorCode::UnsupportedFormat, "big-endian PFM not supported");
  }
  ++pos;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (pos > b.size() || b.size() - pos < 4 * n) {
    throw Error(ErrorCode::UnreadableInput, "truncated PFM in " + path.string());
  }
  ScalarField f(w, h);
  std::size_t k = pos;
  for (int y = h - 1; y >= 0; --y) {
    for (int x = 0; x < w; ++x) {
      std::uint32_t bits = 0;
      for (int byte = 0; byte < 4; ++byte) bits |= static_cast<std::uint32_t>(b[k++]) << (8 * byte);
      f(x, y) = std::bit_cast<float>(bits);
    }
  }
  return f;
}

}  // namespace monogenic::io
