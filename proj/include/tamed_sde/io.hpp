#ifndef TAMED_SDE_IO_HPP
#define TAMED_SDE_IO_HPP

// Byte-stable output: CSV rendering with 17-significant-digit floats, file
// checksums, and the run manifest.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tamed_sde/analysis.hpp"

namespace tamed_sde {

// Shortest-round-trip style decimal rendering ("%.17g", '.' separator).
std::string format_double(double v);

std::string sha256_hex(std::string_view data);

std::string errors_csv(const std::vector<ErrorRow>& rows);
std::string orders_csv(const std::vector<OrderReport>& reports);

// tool version and duration, a [checksums] section (file = sha256), and the
// configuration echoed verbatim under [config].
std::string manifest_text(double duration_seconds,
                          const std::vector<std::pair<std::string, std::string>>& checksums,
                          const std::string& config_echo);

// The lines of the [checksums] section, for re-run comparisons.
std::string manifest_checksum_section(const std::string& manifest);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace tamed_sde

#endif
