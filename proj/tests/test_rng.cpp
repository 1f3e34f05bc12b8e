#include <doctest.h>

#include <tamed_sde/rng.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

using namespace tamed_sde;

// Raw block-cipher vectors frozen from an independent implementation of
// the same counter generator (numpy.random.Philox with matching key and
// counter layout).
TEST_CASE("philox4x64 reference vectors") {
  using B = rng::Block;

  CHECK(rng::philox4x64({0, 0, 0, 0}, {0, 0}) ==
        B{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL,
          0xd7e772cee186176bULL, 0x7e68b68aec7ba23bULL});

  CHECK(rng::philox4x64({1, 0, 0, 0}, {0, 0}) ==
        B{0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL,
          0x1c8667a55d902e79ULL, 0x907d7a052fd5b4dcULL});

  CHECK(rng::philox4x64({0, 0, 0, 0}, {0xdeadbeefULL, 0x12345678ULL}) ==
        B{0x6f983d00674b709fULL, 0x49a9b33ab59eb109ULL,
          0x2c97db7ff4030ca5ULL, 0xf350115b2d463351ULL});

  CHECK(rng::philox4x64({0x2a, 7, 3, 1}, {0x9e3779b97f4a7c15ULL, 0}) ==
        B{0xd651540fc56ea74bULL, 0x3d745665bba78b3dULL,
          0x1ab3c39ba319a62cULL, 0xcf506ee465d686faULL});

  const uint64_t ff = 0xffffffffffffffffULL;
  CHECK(rng::philox4x64({ff, ff, ff, ff}, {ff, ff}) ==
        B{0x87b092c3013fe90bULL, 0x438c3c67be8d0224ULL,
          0x9cc7d7c69cd777b6ULL, 0xa09caebf594f0ba0ULL});
}

TEST_CASE("uniform transforms stay in their half-open ranges") {
  CHECK(rng::uniform01(0) == 0.0);
  CHECK(rng::uniform01(0xffffffffffffffffULL) < 1.0);
  CHECK(rng::uniform01_pos(0) > 0.0);
  CHECK(rng::uniform01_pos(0xffffffffffffffffULL) <= 1.0);
  // granularity: 53-bit mantissa steps
  CHECK(rng::uniform01(1ULL << 11) == std::ldexp(1.0, -53));
}

TEST_CASE("normal draws have the right first moments") {
  rng::Stream s{12345, rng::Draw::lattice_gaussian, 0, 0, 0};
  const int n = 200000;
  std::vector<double> z(n);
  for (int i = 0; i < n; i += 4) rng::normals(s, i / 4, z.data() + i, 4);

  double m1 = 0, m2 = 0, m4 = 0;
  for (double v : z) {
    m1 += v;
    m2 += v * v;
    m4 += v * v * v * v;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  // 5-sigma bands for the sample moments of N(0,1)
  CHECK(std::abs(m1) < 5.0 / std::sqrt(double(n)));
  CHECK(std::abs(m2 - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(m4 - 3.0) < 5.0 * std::sqrt(96.0 / n));
}

TEST_CASE("multi-block normal fills match single-block draws") {
  rng::Stream s{77, rng::Draw::chain_gaussian, 4, 1, 2};
  double a[12];
  rng::normals(s, 9, a, 12);
  // same bytes as three 4-draw fills at consecutive block indices
  for (int blk = 0; blk < 3; ++blk) {
    double b[4];
    const rng::Block x = s.block(9, blk);
    rng::normal_pair(x[0], x[1], b[0], b[1]);
    rng::normal_pair(x[2], x[3], b[2], b[3]);
    for (int i = 0; i < 4; ++i) CHECK(a[4 * blk + i] == b[i]);
  }
}

TEST_CASE("streams with different coordinates do not collide") {
  const uint64_t seed = 99;
  rng::Stream base{seed, rng::Draw::lattice_gaussian, 5, 1, 0};
  rng::Stream other_kind{seed, rng::Draw::chain_gaussian, 5, 1, 0};
  rng::Stream other_path{seed, rng::Draw::lattice_gaussian, 6, 1, 0};
  rng::Stream other_level{seed, rng::Draw::lattice_gaussian, 5, 2, 0};
  rng::Stream other_slot{seed, rng::Draw::lattice_gaussian, 5, 1, 1};

  double a[4], b[4];
  rng::normals(base, 0, a, 4);
  for (const auto& s : {other_kind, other_path, other_level, other_slot}) {
    rng::normals(s, 0, b, 4);
    bool all_equal = true;
    for (int i = 0; i < 4; ++i) all_equal = all_equal && (a[i] == b[i]);
    CHECK_FALSE(all_equal);
  }
  // and the same coordinates reproduce exactly
  rng::normals(rng::Stream{seed, rng::Draw::lattice_gaussian, 5, 1, 0}, 0, b, 4);
  for (int i = 0; i < 4; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("index draws are unbiased across outcomes") {
  rng::Stream s{2024, rng::Draw::batch_index, 3, 0, 2};
  const int n = 100000;
  const int k = 5;
  std::array<int, 5> counts{};
  for (int i = 0; i < n; ++i) counts[size_t(rng::index_draw(s, i, k))]++;
  // multinomial: each count ~ Binomial(n, 1/k), 5-sigma band
  const double mean = double(n) / k;
  const double sd = std::sqrt(double(n) * (1.0 / k) * (1.0 - 1.0 / k));
  for (int c : counts) CHECK(std::abs(c - mean) < 5.0 * sd);

  CHECK_THROWS_AS((void)rng::index_draw(s, 0, 0), std::invalid_argument);
}
