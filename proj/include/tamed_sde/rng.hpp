#ifndef TAMED_SDE_RNG_HPP
#define TAMED_SDE_RNG_HPP

// Counter-addressed randomness.
//
// Every random draw in the library is computed from a fixed-size address, so
// any draw is reproducible without generator history and worker count never
// changes a stream. Ports that want bit-equal streams must reproduce, exactly:
//
//   generator: Philox4x64-10 (the standard 4x64 network, 10 rounds,
//              multipliers 0xd2e7470ee14c6c93 / 0xca5a826395121157, key
//              increments 0x9e3779b97f4a7c15 / 0xbb67ae8584caa73b)
//   counter:   { path, step, (kind << 56) | (level << 48) | (slot << 40) | block, 0 }
//   key:       { master_seed, 0x243f6a8885a308d3 }
//
//   uniforms:  u      = (x >> 11) * 2^-53          in [0, 1)
//              u_pos  = ((x >> 11) + 1) * 2^-53    in (0, 1]
//   gaussians: Box-Muller on consecutive output lanes,
//              z0 = sqrt(-2 ln u_pos(x0)) * cos(2 pi u(x1))
//              z1 = sqrt(-2 ln u_pos(x0)) * sin(2 pi u(x1))
//              lanes 0..3 of a block come from output pairs (0,1) and (2,3)
//   indices:   128-bit multiply-shift (x * n) >> 64; exact for n dividing 2^64
//
// `level` is the dyadic grid level a draw belongs to, `slot` a scheme slot
// (0 = shared across schemes, which is what couples all schemes on one
// Brownian lattice), `kind` the draw type below.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace tamed_sde::rng {

using Block = std::array<std::uint64_t, 4>;

struct Key {
  std::uint64_t k0 = 0;
  std::uint64_t k1 = 0;
};

inline constexpr std::uint64_t kPhiloxM0 = 0xd2e7470ee14c6c93ull;
inline constexpr std::uint64_t kPhiloxM1 = 0xca5a826395121157ull;
inline constexpr std::uint64_t kPhiloxW0 = 0x9e3779b97f4a7c15ull;
inline constexpr std::uint64_t kPhiloxW1 = 0xbb67ae8584caa73bull;
inline constexpr std::uint64_t kKeyPad = 0x243f6a8885a308d3ull;

inline Block philox4x64(Block ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    const auto p0 = static_cast<unsigned __int128>(kPhiloxM0) * ctr[0];
    const auto p1 = static_cast<unsigned __int128>(kPhiloxM1) * ctr[2];
    const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
    const auto lo0 = static_cast<std::uint64_t>(p0);
    const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
    const auto lo1 = static_cast<std::uint64_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key.k0, lo1, hi0 ^ ctr[3] ^ key.k1, lo0};
    key.k0 += kPhiloxW0;
    key.k1 += kPhiloxW1;
  }
  return ctr;
}

enum class Draw : std::uint64_t {
  lattice_gaussian = 1,  // Brownian lattice increments, shared by all schemes
  batch_index = 2,       // per-step batch picks of the rbm scheme
  chain_gaussian = 3,    // sampler noise
  chain_batch = 4,       // sampler batch picks
  synthetic = 5,         // test fixtures and property-test inputs
};

// Address of a substream; `step` and `block` index draws inside it.
struct Stream {
  std::uint64_t master_seed = 0;
  Draw kind = Draw::synthetic;
  std::uint64_t path = 0;
  std::uint32_t level = 0;
  std::uint32_t slot = 0;

  Block block(std::uint64_t step, std::uint64_t block_index = 0) const {
    const std::uint64_t packed = (static_cast<std::uint64_t>(kind) << 56) |
                                 (static_cast<std::uint64_t>(level & 0xff) << 48) |
                                 (static_cast<std::uint64_t>(slot & 0xff) << 40) |
                                 (block_index & 0xffffffffffull);
    return philox4x64({path, step, packed, 0}, Key{master_seed, kKeyPad});
  }
};

inline double uniform01(std::uint64_t word) { return static_cast<double>(word >> 11) * 0x1p-53; }

inline double uniform01_pos(std::uint64_t word) {
  return static_cast<double>((word >> 11) + 1) * 0x1p-53;
}

inline void normal_pair(std::uint64_t a, std::uint64_t b, double& z0, double& z1) {
  const double rad = std::sqrt(-2.0 * std::log(uniform01_pos(a)));
  const double ang = 2.0 * std::numbers::pi * uniform01(b);
  z0 = rad * std::cos(ang);
  z1 = rad * std::sin(ang);
}

// Fills out[0..n) with the standard normals of one step, four per block.
inline void normals(const Stream& s, std::uint64_t step, double* out, int n) {
  for (int base = 0; base < n; base += 4) {
    const Block b = s.block(step, static_cast<std::uint64_t>(base / 4));
    const int take = n - base;
    double z0, z1;
    normal_pair(b[0], b[1], z0, z1);
    out[base] = z0;
    if (take > 1) out[base + 1] = z1;
    if (take > 2) {
      double z2, z3;
      normal_pair(b[2], b[3], z2, z3);
      out[base + 2] = z2;
      if (take > 3) out[base + 3] = z3;
    }
  }
}

// Uniform index in [0, n_outcomes) from the first output lane of the step's block.
inline int index_draw(const Stream& s, std::uint64_t step, int n_outcomes) {
  if (n_outcomes <= 0) throw std::invalid_argument("rng::index_draw: need n_outcomes > 0");
  const std::uint64_t word = s.block(step)[0];
  const auto wide = static_cast<unsigned __int128>(word) *
                    static_cast<unsigned __int128>(static_cast<std::uint64_t>(n_outcomes));
  return static_cast<int>(static_cast<std::uint64_t>(wide >> 64));
}

}  // namespace tamed_sde::rng

#endif
