#include "besovlab/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "besovlab/error.hpp"

namespace besovlab {

namespace {

template <typename T>
void put_le(std::ostream& out, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& in, const std::string& path) {
    unsigned char buf[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) throw Error("io", "truncated file " + path);
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "cannot open " + path + " for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot open " + path);
    return in;
}

void expect_magic(std::istream& in, const char* magic, const std::string& path) {
    char buf[4];
    if (!in.read(buf, 4) || std::memcmp(buf, magic, 4) != 0) {
        throw Error("io", path + " does not start with magic " + magic);
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in = open_in(path);
    const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return fnv1a64(data);
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_snapshot(const std::string& path, const SampledField& field, double t) {
    if (field.dim() != 2) throw Error("invalid-argument", "snapshots store 2D fields");
    std::ofstream out = open_out(path);
    out.write("PSNP", 4);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.level()));
    put_le<double>(out, t);
    for (double v : field.values()) put_le<double>(out, v);
    if (!out) throw Error("io", "write failed for " + path);
}

Snapshot read_snapshot(const std::string& path, Box box) {
    std::ifstream in = open_in(path);
    expect_magic(in, "PSNP", path);
    const auto level = get_le<std::uint32_t>(in, path);
    if (level > 14) throw Error("io", "snapshot level out of range in " + path);
    Snapshot s;
    s.t = get_le<double>(in, path);
    s.field = SampledField(2, static_cast<int>(level), box);
    for (double& v : s.field.values()) v = get_le<double>(in, path);
    return s;
}

void write_coeff_csv(std::ostream& out, const CoeffTree& tree) {
    out << "level,j_k1,j_k2,type,coeff\n";
    tree.for_each([&](const WaveletIndex& idx, double c) {
        out << idx.level << ',' << idx.k[0] << ',' << idx.k[1] << ',' << idx.type << ',' << format_double(c) << '\n';
    });
}

void write_coeff_binary(const std::string& path, const CoeffTree& tree) {
    std::ofstream out = open_out(path);
    out.write("CTRE", 4);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(tree.dim()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(tree.max_level()));
    tree.for_each([&](const WaveletIndex& idx, double c) {
        if (c == 0.0) return;
        put_le<std::uint32_t>(out, static_cast<std::uint32_t>(idx.level));
        put_le<std::int32_t>(out, idx.k[0]);
        put_le<std::int32_t>(out, idx.k[1]);
        put_le<std::uint32_t>(out, static_cast<std::uint32_t>(idx.type));
        put_le<double>(out, c);
    });
    if (!out) throw Error("io", "write failed for " + path);
}

CoeffTree read_coeff_binary(const std::string& path, int order, Box box) {
    std::ifstream in = open_in(path);
    expect_magic(in, "CTRE", path);
    const auto d = get_le<std::uint32_t>(in, path);
    const auto J = get_le<std::uint32_t>(in, path);
    CoeffTree tree(static_cast<int>(d), static_cast<int>(J), order, box);
    while (in.peek() != std::char_traits<char>::eof()) {
        WaveletIndex idx;
        idx.level = static_cast<int>(get_le<std::uint32_t>(in, path));
        idx.k[0] = get_le<std::int32_t>(in, path);
        idx.k[1] = get_le<std::int32_t>(in, path);
        idx.type = static_cast<int>(get_le<std::uint32_t>(in, path));
        tree.set(idx, get_le<double>(in, path));
    }
    return tree;
}

}  // namespace besovlab
