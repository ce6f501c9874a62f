#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "besovlab/field.hpp"
#include "besovlab/wavelet.hpp"

namespace besovlab {

/// "%.17g" formatting used for every floating-point output.
std::string format_double(double v);

/// RFC-4180 field quoting: wraps in double quotes when the field holds a
/// comma, quote, CR or LF; embedded quotes are doubled.
std::string csv_escape(std::string_view field);

/// Joins already formatted fields into one CSV record (no line terminator).
std::string csv_row(const std::vector<std::string>& fields);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
/// Hash of a file's contents; throws Error("io") when unreadable.
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t v);

struct Snapshot {
    SampledField field;
    double t = 0.0;
};

/// Binary snapshot: "PSNP", u32 grid level, f64 t, row-major f64 values,
/// little-endian. Only 2D fields are stored.
void write_snapshot(const std::string& path, const SampledField& field, double t);
/// Reads a snapshot onto `box` (mask all inside).
Snapshot read_snapshot(const std::string& path, Box box = {});

/// CSV with header level,j_k1,j_k2,type,coeff; the father row has type 0.
void write_coeff_csv(std::ostream& out, const CoeffTree& tree);
/// Binary: "CTRE", u32 d, u32 J, then records (u32 level, i32 k1, i32 k2,
/// u32 type, f64 coeff), little-endian. Zero coefficients are skipped.
void write_coeff_binary(const std::string& path, const CoeffTree& tree);
CoeffTree read_coeff_binary(const std::string& path, int order = 4, Box box = {});

}  // namespace besovlab
