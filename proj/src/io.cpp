#include "hicrit/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "hicrit/error.hpp"

namespace hicrit {

namespace {

constexpr std::array<char, 4> kMagic{'H', 'C', 'R', 'T'};

static_assert(std::endian::native == std::endian::little, "binary scan format assumes little-endian");

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, std::size_t line) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw InputError("line " + std::to_string(line) + ": not a number: '" + std::string(token) +
                         "'");
    }
    return v;
}

std::ifstream open(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ifstream in(path, mode);
    if (!in) throw InputError("cannot open " + path.string());
    return in;
}

std::uint32_t read_u32(const char* p) {
    std::uint32_t v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

}  // namespace

std::vector<double> read_values(std::istream& in) {
    std::vector<double> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        out.push_back(parse_double(t, number));
    }
    if (out.empty()) throw InputError("no values in input");
    return out;
}

std::vector<double> read_values(const std::filesystem::path& path) {
    auto in = open(path, std::ios::in);
    return read_values(in);
}

ScanDataset read_scan_csv(std::istream& in) {
    ScanDataset data;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::size_t count = 0;
        std::size_t start = 0;
        while (true) {
            const auto comma = t.find(',', start);
            data.y.push_back(parse_double(t.substr(start, comma - start), number));
            ++count;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (data.n_seq == 0) {
            data.length = count;
        } else if (count != data.length) {
            throw InputError("line " + std::to_string(number) + ": expected " +
                             std::to_string(data.length) + " columns, found " +
                             std::to_string(count));
        }
        ++data.n_seq;
    }
    if (data.n_seq == 0) throw InputError("no rows in scan input");
    data.sigma.assign(data.n_seq, 1.0);
    return data;
}

ScanDataset read_scan_binary(std::istream& in) {
    std::array<char, 16> header{};
    if (!in.read(header.data(), header.size())) throw InputError("truncated scan header");
    if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0) {
        throw InputError("bad scan file magic");
    }
    ScanDataset data;
    data.n_seq = read_u32(header.data() + 4);
    data.length = read_u32(header.data() + 8);
    if (data.n_seq == 0 || data.length == 0) throw InputError("empty scan matrix");
    data.y.resize(data.n_seq * data.length);
    const auto bytes = static_cast<std::streamsize>(data.y.size() * sizeof(double));
    if (!in.read(reinterpret_cast<char*>(data.y.data()), bytes)) {
        throw InputError("truncated scan body");
    }
    data.sigma.assign(data.n_seq, 1.0);
    return data;
}

ScanDataset read_scan(const std::filesystem::path& path) {
    auto in = open(path, std::ios::in | std::ios::binary);
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    const bool binary = in.gcount() == 4 && magic == kMagic;
    in.clear();
    in.seekg(0);
    return binary ? read_scan_binary(in) : read_scan_csv(in);
}

void write_scan_csv(std::ostream& out, const ScanDataset& data) {
    std::array<char, 32> buf{};
    for (std::size_t i = 0; i < data.n_seq; ++i) {
        const double* row = data.row(i);
        for (std::size_t t = 0; t < data.length; ++t) {
            if (t) out.put(',');
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), row[t]);
            out.write(buf.data(), res.ptr - buf.data());
        }
        out.put('\n');
    }
}

void write_scan_binary(std::ostream& out, const ScanDataset& data) {
    if (data.n_seq > UINT32_MAX || data.length > UINT32_MAX) {
        throw InputError("scan matrix too large for the binary format");
    }
    std::array<char, 16> header{};
    std::memcpy(header.data(), kMagic.data(), kMagic.size());
    const auto n = static_cast<std::uint32_t>(data.n_seq);
    const auto t = static_cast<std::uint32_t>(data.length);
    std::memcpy(header.data() + 4, &n, sizeof n);
    std::memcpy(header.data() + 8, &t, sizeof t);
    out.write(header.data(), header.size());
    out.write(reinterpret_cast<const char*>(data.y.data()),
              static_cast<std::streamsize>(data.y.size() * sizeof(double)));
}

}  // namespace hicrit
