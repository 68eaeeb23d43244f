#include "sublog/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "sublog/errors.hpp"

namespace sublog {

namespace {

void put_bytes(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_bytes(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (in.gcount() != 8) throw TruncatedFile("unexpected end of file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

template <typename T, typename Conv>
std::vector<T> read_key_file(const std::string& path, Conv conv) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open '" + path + "'");
    in.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::uint64_t>(in.tellg());
    in.seekg(0);
    if (bytes < 8) throw BadHeader("key file shorter than its header: '" + path + "'");
    const std::uint64_t count = get_bytes(in);
    if (bytes != 8 + 8 * count) {
        if (bytes < 8 + 8 * count) throw TruncatedFile("key file payload truncated: '" + path + "'");
        throw BadHeader("key file longer than its header declares: '" + path + "'");
    }
    std::vector<T> keys(count);
    for (auto& k : keys) k = conv(get_bytes(in));
    return keys;
}

template <typename T, typename Conv>
void write_key_file(const std::string& path, const std::vector<T>& keys, Conv conv) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot create '" + path + "'");
    put_bytes(out, keys.size());
    for (const T& k : keys) put_bytes(out, conv(k));
    out.flush();
    if (!out) throw IoFailure("write to '" + path + "' failed");
}

}  // namespace

std::vector<std::uint64_t> read_raw_key_file(const std::string& path) {
    return read_key_file<std::uint64_t>(path, [](std::uint64_t v) { return v; });
}

void write_raw_key_file(const std::string& path, const std::vector<std::uint64_t>& keys) {
    write_key_file(path, keys, [](std::uint64_t v) { return v; });
}

std::vector<double> read_norm_key_file(const std::string& path) {
    auto keys = read_key_file<double>(path, [](std::uint64_t v) { return std::bit_cast<double>(v); });
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
        if (!(keys[i] <= keys[i + 1])) {
            throw BadHeader("normalized key file is not ascending: '" + path + "'");
        }
    }
    return keys;
}

void write_norm_key_file(const std::string& path, const std::vector<double>& keys) {
    write_key_file(path, keys, [](double v) { return std::bit_cast<std::uint64_t>(v); });
}

void put_u64(std::ostream& out, std::uint64_t v) { put_bytes(out, v); }
void put_f64(std::ostream& out, double v) { put_bytes(out, std::bit_cast<std::uint64_t>(v)); }
std::uint64_t get_u64(std::istream& in) { return get_bytes(in); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_bytes(in)); }

}  // namespace sublog
