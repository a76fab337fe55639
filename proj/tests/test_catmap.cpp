#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qlg/catmap.hpp"
#include "qlg/errors.hpp"

using namespace qlg;

namespace {

// Order of [[2,1],[1,1]] mod n by explicit matrix powering, and the matrix at
// half period, independent of the production implementation.
struct Mat {
  std::uint64_t a, b, c, d;
};
Mat mul(const Mat& l, const Mat& r, std::uint64_t n) {
  return {(l.a * r.a + l.b * r.c) % n, (l.a * r.b + l.b * r.d) % n,
          (l.c * r.a + l.d * r.c) % n, (l.c * r.b + l.d * r.d) % n};
}
std::uint64_t brute_period(std::uint64_t n, bool* half_inv) {
  const Mat m{2 % n, 1 % n, 1 % n, 1 % n};
  Mat p = m;
  std::uint64_t t = 1;
  while (!(p.a == 1 % n && p.b == 0 && p.c == 0 && p.d == 1 % n)) {
    p = mul(p, m, n);
    ++t;
    REQUIRE(t < 100000);
  }
  if (half_inv) {
    *half_inv = false;
    if (t % 2 == 0) {
      Mat h{1 % n, 0, 0, 1 % n};
      for (std::uint64_t i = 0; i < t / 2; ++i) h = mul(h, m, n);
      const std::uint64_t neg = (n - 1) % n;
      *half_inv = h.a == neg && h.b == 0 && h.c == 0 && h.d == neg;
    }
  }
  return t;
}

PixelImage distinct_labels(std::size_t n) {
  // n^2 <= 256 keeps every pixel value unique
  PixelImage img = PixelImage::zeros(n);
  for (std::size_t i = 0; i < n * n; ++i) img.pix[i] = static_cast<std::uint8_t>(i);
  return img;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_SUITE("catmap") {

TEST_CASE("the map fixes a 1x1 image") {
  PixelImage img = PixelImage::zeros(1);
  img.pix[0] = 42;
  CHECK(cat_step(img) == img);
}

TEST_CASE("pixels move by the matrix rule") {
  PixelImage img = PixelImage::zeros(5);
  img.at(1, 0) = 9;
  const PixelImage out = cat_step(img);
  CHECK(out.at(2, 1) == 9);
  CHECK(out.at(1, 0) == 0);
}

TEST_CASE("the inverse rule undoes a step") {
  const std::size_t n = 13;
  PixelImage img = distinct_labels(n);
  const PixelImage stepped = cat_step(img);
  // a pixel now at (x, y) started at ((x - y) mod n, (2y - x) mod n)
  PixelImage undone = PixelImage::zeros(n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      undone.at((x + n - y) % n, (2 * y + 2 * n - x) % n) = stepped.at(x, y);
  CHECK(undone == img);
}

TEST_CASE("the map is a permutation") {
  const std::size_t n = 16;
  PixelImage img = distinct_labels(n);
  const PixelImage out = cat_step(img);
  std::array<int, 256> count{};
  for (std::uint8_t v : out.pix) ++count[v];
  for (std::size_t i = 0; i < n * n; ++i) CHECK(count[i] == 1);
}

TEST_CASE("period and half-period flag match brute-force matrix powers") {
  for (std::uint64_t n : {1ull, 2ull, 3ull, 4ull, 5ull, 6ull, 7ull, 8ull, 9ull, 10ull, 11ull,
                          12ull, 13ull, 29ull, 50ull}) {
    bool half = false;
    const std::uint64_t expect = brute_period(n, &half);
    const CatPeriod got = cat_period(n);
    CHECK(got.period == expect);
    CHECK(got.half_inversion == half);
  }
}

TEST_CASE("image iteration confirms the period on a distinct-label image") {
  const std::size_t n = 13;
  bool half = false;
  const std::uint64_t period = brute_period(n, &half);
  PixelImage img = distinct_labels(n);
  const PixelImage img0 = img;
  for (std::uint64_t t = 1; t <= period; ++t) {
    img = cat_step(img);
    if (t < period) CHECK(!(img == img0));
  }
  CHECK(img == img0);
}

TEST_CASE("half-period inversion shows up on the image when flagged") {
  // n=5: period 10 with inversion at 5 (found by the brute-force oracle)
  bool half = false;
  const std::uint64_t period = brute_period(5, &half);
  REQUIRE(half);
  PixelImage img = distinct_labels(5);
  const PixelImage img0 = img;
  for (std::uint64_t t = 0; t < period / 2; ++t) img = cat_step(img);
  CHECK(img == point_inversion(img0));
}

TEST_CASE("point inversion of images is an involution") {
  PixelImage img = test_pattern(9);
  CHECK(point_inversion(point_inversion(img)) == img);
  const PixelImage inv = point_inversion(img);
  CHECK(inv.at(0, 0) == img.at(0, 0));
  CHECK(inv.at(1, 0) == img.at(8, 0));
  CHECK(inv.at(3, 7) == img.at(6, 2));
}

TEST_CASE("published resolutions give the advertised periods") {
  const CatPeriod a = cat_period(313);
  CHECK(a.period == 314);
  CHECK(a.half_inversion);
  const CatPeriod b = cat_period(315);
  CHECK(b.period == 120);
  CHECK(!b.half_inversion);
}

TEST_CASE("huge resolutions are rejected rather than overflowed") {
  CHECK_THROWS_AS(cat_period(std::uint64_t(1) << 40), ConfigError);
}

TEST_CASE("pgm round trip is exact") {
  const PixelImage img = test_pattern(17);
  const auto path = temp_file("qlg_test_roundtrip.pgm");
  save_pgm(img, path.string());
  const PixelImage back = load_pgm(path.string());
  CHECK(back == img);
  std::filesystem::remove(path);
}

TEST_CASE("pgm loader rejects malformed files") {
  const auto bad_magic = temp_file("qlg_test_badmagic.pgm");
  {
    std::ofstream out(bad_magic, std::ios::binary);
    out << "P6\n3 3\n255\n.........";
  }
  CHECK_THROWS_AS(load_pgm(bad_magic.string()), IoError);
  std::filesystem::remove(bad_magic);

  const auto non_square = temp_file("qlg_test_nonsquare.pgm");
  {
    std::ofstream out(non_square, std::ios::binary);
    out << "P5\n4 2\n255\n";
    out.write("12345678", 8);
  }
  CHECK_THROWS_AS(load_pgm(non_square.string()), IoError);
  std::filesystem::remove(non_square);

  const auto truncated = temp_file("qlg_test_truncated.pgm");
  {
    std::ofstream out(truncated, std::ios::binary);
    out << "P5\n4 4\n255\n";
    out.write("1234567", 7); // 9 bytes missing
  }
  CHECK_THROWS_AS(load_pgm(truncated.string()), IoError);
  std::filesystem::remove(truncated);

  const auto deep = temp_file("qlg_test_deep.pgm");
  {
    std::ofstream out(deep, std::ios::binary);
    out << "P5\n2 2\n65535\n";
    out.write("12345678", 8);
  }
  CHECK_THROWS_AS(load_pgm(deep.string()), IoError);
  std::filesystem::remove(deep);

  CHECK_THROWS_AS(load_pgm("/nonexistent/qlg_missing.pgm"), IoError);
}

TEST_CASE("pgm files with comments parse") {
  const auto path = temp_file("qlg_test_comment.pgm");
  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n# a comment\n2 2\n255\n";
    out.write("\x01\x02\x03\x04", 4);
  }
  const PixelImage img = load_pgm(path.string());
  CHECK(img.n == 2);
  CHECK(img.at(0, 0) == 1);
  CHECK(img.at(1, 1) == 4);
  std::filesystem::remove(path);
}

TEST_CASE("test pattern is deterministic and non-uniform") {
  const PixelImage a = test_pattern(32);
  const PixelImage b = test_pattern(32);
  CHECK(a == b);
  bool varies = false;
  for (std::size_t i = 1; i < a.pix.size(); ++i) varies = varies || a.pix[i] != a.pix[0];
  CHECK(varies);
}

} // TEST_SUITE
