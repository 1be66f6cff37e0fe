#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "scenetok/scene.hpp"

namespace scenetok {

// Equally spaced bins over a single numeric range shared by every coordinate
// axis. All bookkeeping is done in integer "units" of 10^-decimals so token
// strings are produced without going through floating-point formatting.
struct QuantizerConfig {
    double granularity = 0.05;
    double range_min = -8.0;
    double range_max = 8.0;
    int decimals = 2;

    // Derived by make(): granularity in units, and the bin indices of the bounds.
    std::int64_t unit = 5;
    std::int64_t min_step = -160;
    std::int64_t max_step = 160;

    // Validates and fills the derived fields. Throws ConfigError when the
    // granularity has no short decimal expansion or the bounds are off-grid.
    static QuantizerConfig make(double granularity, double range_min, double range_max);

    // Default config for a dataset style: [-8, 8] for CLEVR/ObjaWorld and
    // [-10, 10] for Objectron/ARKitScenes, both at granularity 0.05.
    static QuantizerConfig for_style(DatasetStyle style, double granularity = 0.05);

    std::size_t vocab_size() const { return static_cast<std::size_t>(max_step - min_step + 1); }

    bool operator==(const QuantizerConfig&) const = default;
};

// Canonical numeric token for x: nearest bin, ties away from zero, clamped to
// the range. Throws NonFiniteError for NaN/inf.
std::string quantize(double x, const QuantizerConfig& cfg);

// Bin index of x (same rounding and clamping as quantize).
std::int64_t quantize_step(double x, const QuantizerConfig& cfg);

std::string format_step(std::int64_t step, const QuantizerConfig& cfg);

// Exact decimal value of a canonical token. Throws UnknownTokenError for
// anything that is not a canonical in-range token.
double dequantize(std::string_view token, const QuantizerConfig& cfg);

// Bin index of a canonical token; throws UnknownTokenError like dequantize.
std::int64_t token_step(std::string_view token, const QuantizerConfig& cfg);

// dequantize(quantize(x)): the grid value nearest to x.
double snap(double x, const QuantizerConfig& cfg);

// All canonical tokens from range_min to range_max, ascending.
std::vector<std::string> numeric_vocab(const QuantizerConfig& cfg);

}  // namespace scenetok
