#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sublog {

// Key files are little-endian: an 8-byte unsigned count u, then u keys.
// Raw files carry 8-byte unsigned integer keys; normalized files carry
// 8-byte IEEE-754 reals in [0, 1], ascending.

std::vector<std::uint64_t> read_raw_key_file(const std::string& path);
void write_raw_key_file(const std::string& path, const std::vector<std::uint64_t>& keys);

std::vector<double> read_norm_key_file(const std::string& path);
void write_norm_key_file(const std::string& path, const std::vector<double>& keys);

// Little-endian scalar helpers shared by the index serializers.
void put_u64(std::ostream& out, std::uint64_t v);
void put_f64(std::ostream& out, double v);
std::uint64_t get_u64(std::istream& in);
double get_f64(std::istream& in);

}  // namespace sublog
