#include "scenetok/number_encoding.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "scenetok/errors.hpp"

namespace scenetok {

namespace {

constexpr char kTableMagic[4] = {'N', 'E', 'N', 'C'};

void check_dims(std::size_t n, std::size_t d) {
    if (d < 2 || d % 2 != 0) throw OddDimensionError("encoding dimension must be even and >= 2, got " + std::to_string(d));
    if (n < 1) throw ShapeMismatchError("encoding table needs at least one position");
}

// One divisor per column pair; shared by the serial and parallel paths.
std::vector<double> pair_divisors(std::size_t d) {
    std::vector<double> div(d / 2);
    for (std::size_t i = 0; i < d / 2; ++i) {
        div[i] = std::pow(10000.0, static_cast<double>(2 * i) / static_cast<double>(d));
    }
    return div;
}

void fill_row(double* row, std::size_t pos, const std::vector<double>& div) {
    const double p = static_cast<double>(pos);
    for (std::size_t i = 0; i < div.size(); ++i) {
        const double angle = p / div[i];
        row[2 * i] = std::sin(angle);
        row[2 * i + 1] = std::cos(angle);
    }
}

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) throw SchemaError("truncated encoding table");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

EncodingTable sincos_table_serial(std::size_t n, std::size_t d) {
    check_dims(n, d);
    EncodingTable t(n, d);
    const auto div = pair_divisors(d);
    for (std::size_t pos = 0; pos < n; ++pos) fill_row(&t.values[pos * d], pos, div);
    return t;
}

EncodingTable sincos_table(std::size_t n, std::size_t d) {
    check_dims(n, d);
    EncodingTable t(n, d);
    const auto div = pair_divisors(d);
    const auto rows = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long pos = 0; pos < rows; ++pos) {
        fill_row(&t.values[static_cast<std::size_t>(pos) * d], static_cast<std::size_t>(pos), div);
    }
    return t;
}

Matrix combine(const Matrix& learned, const EncodingTable& fixed, EncodingMode mode) {
    if (learned.rows != fixed.rows || learned.cols != fixed.cols) {
        throw ShapeMismatchError("learned " + std::to_string(learned.rows) + "x" + std::to_string(learned.cols) +
                                 " vs fixed " + std::to_string(fixed.rows) + "x" + std::to_string(fixed.cols));
    }
    switch (mode) {
        case EncodingMode::Fixed: return fixed;
        case EncodingMode::Learned: return learned;
        case EncodingMode::Hybrid: break;
    }
    Matrix out = learned;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += fixed.values[i];
    return out;
}

void write_table(std::ostream& out, const EncodingTable& table) {
    out.write(kTableMagic, 4);
    put_u64(out, table.rows);
    put_u64(out, table.cols);
    for (double v : table.values) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

EncodingTable read_table(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kTableMagic, 4) != 0) throw SchemaError("not an NENC table");
    const auto n = get_u64(in);
    const auto d = get_u64(in);
    if (n == 0 || d == 0 || n > (std::uint64_t{1} << 32) / d) throw SchemaError("implausible NENC table shape");
    EncodingTable t(n, d);
    for (auto& v : t.values) v = std::bit_cast<double>(get_u64(in));
    return t;
}

}  // namespace scenetok
