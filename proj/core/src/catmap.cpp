#include "qlg/catmap.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "qlg/errors.hpp"

namespace qlg {

PixelImage PixelImage::zeros(std::size_t n) {
  PixelImage img;
  img.n = n;
  img.pix.assign(n * n, 0);
  return img;
}

PixelImage cat_step(const PixelImage& img) {
  const std::size_t n = img.n;
  PixelImage out = PixelImage::zeros(n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      out.at((2 * x + y) % n, (x + y) % n) = img.at(x, y);
  return out;
}

PixelImage point_inversion(const PixelImage& img) {
  const std::size_t n = img.n;
  PixelImage out = PixelImage::zeros(n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      out.at(x == 0 ? 0 : n - x, y == 0 ? 0 : n - y) = img.at(x, y);
  return out;
}

namespace {
using Mat2 = std::array<std::uint64_t, 4>; // row-major [[a,b],[c,d]] mod n

Mat2 mul(const Mat2& p, const Mat2& q, std::uint64_t n) {
  return {(p[0] * q[0] + p[1] * q[2]) % n, (p[0] * q[1] + p[1] * q[3]) % n,
          (p[2] * q[0] + p[3] * q[2]) % n, (p[2] * q[1] + p[3] * q[3]) % n};
}

bool is_identity(const Mat2& m, std::uint64_t n) {
  return m[0] % n == 1 % n && m[1] == 0 && m[2] == 0 && m[3] % n == 1 % n;
}

bool is_minus_identity(const Mat2& m, std::uint64_t n) {
  const std::uint64_t neg1 = (n - 1) % n;
  return m[0] == neg1 && m[1] == 0 && m[2] == 0 && m[3] == neg1;
}
} // namespace

CatPeriod cat_period(std::uint64_t n) {
  if (n == 0) throw ConfigError("cat map size must be >= 1");
  if (n > (1ull << 31)) throw ConfigError("cat map size too large for modular arithmetic here");
  CatPeriod out;
  if (n == 1) {
    out.period = 1;
    out.half_inversion = false;
    return out;
  }
  const Mat2 m{2 % n, 1 % n, 1 % n, 1 % n};
  Mat2 acc = m;
  std::uint64_t t = 1;
  // The order mod n divides the order mod each prime power factor and is
  // bounded by 3n; a plain walk is fast for any desk-scale n.
  const std::uint64_t bound = 6 * n + 4;
  while (!is_identity(acc, n)) {
    acc = mul(acc, m, n);
    ++t;
    if (t > bound) throw NumericError("cat map period search exceeded its bound");
  }
  out.period = t;
  if (t % 2 == 0) {
    Mat2 half{1 % n, 0, 0, 1 % n};
    for (std::uint64_t i = 0; i < t / 2; ++i) half = mul(half, m, n);
    out.half_inversion = is_minus_identity(half, n);
  }
  return out;
}

PixelImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open PGM file: " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw IoError("not a binary PGM (P5) file: " + path + " (magic '" + magic + "')");
  auto next_int = [&in, &path]() {
    // skip whitespace and '#' comment lines
    for (;;) {
      const int c = in.peek();
      if (c == EOF) break;
      if (c == '#') {
        std::string junk;
        std::getline(in, junk);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        in.get();
      } else {
        break;
      }
    }
    long long v = -1;
    if (!(in >> v) || v < 0) throw IoError("malformed PGM header in " + path);
    return static_cast<std::uint64_t>(v);
  };
  const std::uint64_t w = next_int();
  const std::uint64_t h = next_int();
  const std::uint64_t maxval = next_int();
  if (w != h) throw IoError("PGM image must be square, got " + std::to_string(w) + "x" +
                            std::to_string(h));
  if (w == 0 || w > 65536) throw IoError("unreasonable PGM size " + std::to_string(w));
  if (maxval == 0 || maxval > 255) throw IoError("PGM maxval must be 1..255");
  in.get(); // single whitespace after maxval
  PixelImage img = PixelImage::zeros(w);
  in.read(reinterpret_cast<char*>(img.pix.data()), static_cast<std::streamsize>(img.pix.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pix.size()))
    throw IoError("truncated PGM payload in " + path);
  return img;
}

void save_pgm(const PixelImage& img, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write PGM file: " + tmp);
    char header[64];
    std::snprintf(header, sizeof header, "P5\n%zu %zu\n255\n", img.n, img.n);
    out << header;
    out.write(reinterpret_cast<const char*>(img.pix.data()),
              static_cast<std::streamsize>(img.pix.size()));
    if (!out) throw IoError("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw IoError("cannot rename " + tmp + " to " + path);
}

PixelImage test_pattern(std::size_t n) {
  PixelImage img = PixelImage::zeros(n);
  const double c = static_cast<double>(n) / 2.0;
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      const double dx = static_cast<double>(x) - c;
      const double dy = static_cast<double>(y) - c;
      const double r = std::sqrt(dx * dx + dy * dy);
      const int v = static_cast<int>(x * 7 + y * 13 + static_cast<std::size_t>(r * 4.0)) % 256;
      img.at(x, y) = static_cast<std::uint8_t>(v);
    }
  return img;
}

} // namespace qlg
