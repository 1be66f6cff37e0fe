#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace scenetok {

// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }

    bool operator==(const Matrix&) const = default;
};

// Fixed sine-cosine table indexed by a numeric token's ordinal in the numeric
// vocabulary (0 = range_min). Column 2i holds sin(pos / 10000^(2i/d)) and
// column 2i+1 the matching cosine.
using EncodingTable = Matrix;

// Throws OddDimensionError unless d is even and >= 2; n must be >= 1.
EncodingTable sincos_table(std::size_t n, std::size_t d);
EncodingTable sincos_table_serial(std::size_t n, std::size_t d);

enum class EncodingMode { Fixed, Learned, Hybrid };

// Fixed -> table, Learned -> learned, Hybrid -> elementwise sum.
// Throws ShapeMismatchError when the shapes differ.
Matrix combine(const Matrix& learned, const EncodingTable& fixed, EncodingMode mode);

// Binary export: magic "NENC", uint64 n, uint64 d, then n*d float64 values,
// all little-endian.
void write_table(std::ostream& out, const EncodingTable& table);
EncodingTable read_table(std::istream& in);

}  // namespace scenetok
