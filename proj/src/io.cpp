#include "tamed_sde/io.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tamed_sde/version.hpp"

namespace tamed_sde {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

// SHA-256, FIPS 180-4. Single-shot; outputs here are at most a few hundred
// megabytes and hashed once per run.
class Sha256 {
 public:
  void update(const unsigned char* data, std::size_t len) {
    total_ += len;
    while (len > 0) {
      const std::size_t take = std::min(len, std::size_t{64} - fill_);
      std::copy(data, data + take, block_.begin() + static_cast<std::ptrdiff_t>(fill_));
      fill_ += take;
      data += take;
      len -= take;
      if (fill_ == 64) {
        compress();
        fill_ = 0;
      }
    }
  }

  std::string hex_digest() {
    const std::uint64_t bits = total_ * 8;
    const unsigned char one = 0x80;
    update(&one, 1);
    const unsigned char zero = 0x00;
    while (fill_ != 56) update(&zero, 1);
    std::array<unsigned char, 8> len_bytes;
    for (int i = 0; i < 8; ++i)
      len_bytes[static_cast<std::size_t>(i)] =
          static_cast<unsigned char>(bits >> (56 - 8 * i));
    update(len_bytes.data(), 8);

    std::string out;
    out.reserve(64);
    static const char* digits = "0123456789abcdef";
    for (std::uint32_t word : h_) {
      for (int i = 28; i >= 0; i -= 4) out.push_back(digits[(word >> i) & 0xf]);
    }
    return out;
  }

 private:
  static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

  void compress() {
    static constexpr std::array<std::uint32_t, 64> k = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
        0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
        0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
        0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
        0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
        0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
        0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
        0xc67178f2};
    std::array<std::uint32_t, 64> w;
    for (int i = 0; i < 16; ++i)
      w[static_cast<std::size_t>(i)] =
          (static_cast<std::uint32_t>(block_[static_cast<std::size_t>(4 * i)]) << 24) |
          (static_cast<std::uint32_t>(block_[static_cast<std::size_t>(4 * i + 1)]) << 16) |
          (static_cast<std::uint32_t>(block_[static_cast<std::size_t>(4 * i + 2)]) << 8) |
          static_cast<std::uint32_t>(block_[static_cast<std::size_t>(4 * i + 3)]);
    for (int i = 16; i < 64; ++i) {
      const std::uint32_t s0 = rotr(w[static_cast<std::size_t>(i - 15)], 7) ^
                               rotr(w[static_cast<std::size_t>(i - 15)], 18) ^
                               (w[static_cast<std::size_t>(i - 15)] >> 3);
      const std::uint32_t s1 = rotr(w[static_cast<std::size_t>(i - 2)], 17) ^
                               rotr(w[static_cast<std::size_t>(i - 2)], 19) ^
                               (w[static_cast<std::size_t>(i - 2)] >> 10);
      w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i - 16)] + s0 +
                                       w[static_cast<std::size_t>(i - 7)] + s1;
    }
    auto a = h_[0], b = h_[1], c = h_[2], d = h_[3];
    auto e = h_[4], f = h_[5], g = h_[6], h = h_[7];
    for (int i = 0; i < 64; ++i) {
      const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      const std::uint32_t ch = (e & f) ^ (~e & g);
      const std::uint32_t t1 =
          h + s1 + ch + k[static_cast<std::size_t>(i)] + w[static_cast<std::size_t>(i)];
      const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      const std::uint32_t t2 = s0 + maj;
      h = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    h_[0] += a;
    h_[1] += b;
    h_[2] += c;
    h_[3] += d;
    h_[4] += e;
    h_[5] += f;
    h_[6] += g;
    h_[7] += h;
  }

  std::array<std::uint32_t, 8> h_ = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                     0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  std::array<unsigned char, 64> block_ = {};
  std::size_t fill_ = 0;
  std::uint64_t total_ = 0;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 hasher;
  hasher.update(reinterpret_cast<const unsigned char*>(data.data()), data.size());
  return hasher.hex_digest();
}

std::string errors_csv(const std::vector<ErrorRow>& rows) {
  std::string out =
      "scheme,h,strong_rmse,strong_stderr,fname,weak_err,weak_stderr,"
      "taming_active_fraction,diverged\n";
  for (const auto& r : rows) {
    out += r.scheme;
    out += ',';
    out += format_double(r.h);
    out += ',';
    out += format_double(r.strong_rmse);
    out += ',';
    out += format_double(r.strong_stderr);
    out += ',';
    out += r.fname;
    out += ',';
    out += format_double(r.weak_err);
    out += ',';
    out += format_double(r.weak_stderr);
    out += ',';
    out += format_double(r.taming_active_fraction);
    out += ',';
    out += std::to_string(r.diverged);
    out += '\n';
  }
  return out;
}

std::string orders_csv(const std::vector<OrderReport>& reports) {
  std::string out = "scheme,error_kind,fname,slope,intercept,residual\n";
  for (const auto& r : reports) {
    out += r.scheme;
    out += ',';
    out += r.error_kind;
    out += ',';
    out += r.fname;
    out += ',';
    out += format_double(r.slope);
    out += ',';
    out += format_double(r.intercept);
    out += ',';
    out += format_double(r.residual);
    out += '\n';
  }
  return out;
}

std::string manifest_text(double duration_seconds,
                          const std::vector<std::pair<std::string, std::string>>& checksums,
                          const std::string& config_echo) {
  std::ostringstream out;
  out << "tool_version = " << kToolVersion << '\n';
  out << "duration_seconds = " << format_double(duration_seconds) << '\n';
  out << "[checksums]\n";
  for (const auto& [file, sum] : checksums) out << file << " = " << sum << '\n';
  out << "[config]\n";
  out << config_echo;
  if (!config_echo.empty() && config_echo.back() != '\n') out << '\n';
  return out.str();
}

std::string manifest_checksum_section(const std::string& manifest) {
  const auto begin = manifest.find("[checksums]\n");
  if (begin == std::string::npos) return {};
  const auto body = begin + std::string("[checksums]\n").size();
  const auto end = manifest.find("[config]\n", body);
  return manifest.substr(body, end == std::string::npos ? std::string::npos : end - body);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace tamed_sde
