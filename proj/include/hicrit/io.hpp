#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "hicrit/scan.hpp"

namespace hicrit {

/// One value per line; blank lines and lines starting with '#' are skipped.
/// Throws InputError naming the offending line. Range checks are left to
/// PValueSample.
std::vector<double> read_values(std::istream& in);
std::vector<double> read_values(const std::filesystem::path& path);

/// Scan matrices: comma-separated text with one sequence per row, or the
/// binary layout "HCRT", u32 N, u32 T, 4 reserved bytes, then N*T
/// little-endian doubles in row-major order. sigma is set to 1.
ScanDataset read_scan_csv(std::istream& in);
ScanDataset read_scan_binary(std::istream& in);
/// Picks the format from the leading magic bytes.
ScanDataset read_scan(const std::filesystem::path& path);

void write_scan_csv(std::ostream& out, const ScanDataset& data);
void write_scan_binary(std::ostream& out, const ScanDataset& data);

}  // namespace hicrit
