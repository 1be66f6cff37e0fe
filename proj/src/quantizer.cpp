#include "scenetok/quantizer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "scenetok/errors.hpp"

namespace scenetok {

namespace {

constexpr int kMaxDecimals = 9;
// Relative slack used when deciding whether a value sits on a decimal grid
// point or exactly between two bins.
constexpr double kGridEps = 1e-9;

std::int64_t pow10(int n) {
    std::int64_t p = 1;
    while (n-- > 0) p *= 10;
    return p;
}

std::int64_t round_half_away(double q) {
    double a = std::fabs(q);
    double f = std::floor(a);
    double r = (a - f >= 0.5 - kGridEps) ? f + 1.0 : f;
    return static_cast<std::int64_t>(q < 0 ? -r : r);
}

std::int64_t grid_index(double value, double granularity, const char* what) {
    double q = value / granularity;
    double r = std::round(q);
    if (std::fabs(q - r) > kGridEps * std::max(1.0, std::fabs(q))) {
        throw ConfigError(std::string(what) + " is not a multiple of the granularity");
    }
    return static_cast<std::int64_t>(r);
}

}  // namespace

QuantizerConfig QuantizerConfig::make(double granularity, double range_min, double range_max) {
    if (!std::isfinite(granularity) || granularity <= 0.0) {
        throw ConfigError("granularity must be a positive finite number");
    }
    if (!std::isfinite(range_min) || !std::isfinite(range_max) || range_min > range_max) {
        throw ConfigError("range must satisfy range_min <= range_max");
    }
    QuantizerConfig cfg;
    cfg.granularity = granularity;
    cfg.range_min = range_min;
    cfg.range_max = range_max;
    cfg.decimals = -1;
    for (int d = 0; d <= kMaxDecimals; ++d) {
        double scaled = granularity * static_cast<double>(pow10(d));
        if (std::fabs(scaled - std::round(scaled)) <= 1e-6) {
            cfg.decimals = d;
            cfg.unit = static_cast<std::int64_t>(std::round(scaled));
            break;
        }
    }
    if (cfg.decimals < 0 || cfg.unit <= 0) {
        throw ConfigError("granularity needs a finite decimal expansion of at most 9 digits");
    }
    cfg.min_step = grid_index(range_min, granularity, "range_min");
    cfg.max_step = grid_index(range_max, granularity, "range_max");
    return cfg;
}

QuantizerConfig QuantizerConfig::for_style(DatasetStyle style, double granularity) {
    switch (style) {
        case DatasetStyle::Objectron:
        case DatasetStyle::ArkitScenes:
            return make(granularity, -10.0, 10.0);
        default:
            return make(granularity, -8.0, 8.0);
    }
}

std::int64_t quantize_step(double x, const QuantizerConfig& cfg) {
    if (!std::isfinite(x)) throw NonFiniteError("cannot quantize a non-finite value");
    x = std::clamp(x, cfg.range_min, cfg.range_max);
    return std::clamp(round_half_away(x / cfg.granularity), cfg.min_step, cfg.max_step);
}

std::string format_step(std::int64_t step, const QuantizerConfig& cfg) {
    const std::int64_t scale = pow10(cfg.decimals);
    const std::int64_t v = step * cfg.unit;
    const std::uint64_t mag = static_cast<std::uint64_t>(v < 0 ? -v : v);
    std::string out;
    if (v < 0) out.push_back('-');
    out += std::to_string(mag / static_cast<std::uint64_t>(scale));
    if (cfg.decimals > 0) {
        std::string frac = std::to_string(mag % static_cast<std::uint64_t>(scale));
        out.push_back('.');
        out.append(static_cast<std::size_t>(cfg.decimals) - frac.size(), '0');
        out += frac;
    }
    return out;
}

std::string quantize(double x, const QuantizerConfig& cfg) { return format_step(quantize_step(x, cfg), cfg); }

std::int64_t token_step(std::string_view token, const QuantizerConfig& cfg) {
    auto reject = [&]() -> UnknownTokenError {
        return UnknownTokenError("'" + std::string(token) + "' is not a numeric token of this quantizer");
    };
    // 18 digits keeps the scaled value inside int64.
    if (token.empty() || token.size() > 20) throw reject();
    std::size_t pos = 0;
    bool negative = token[0] == '-';
    if (negative) ++pos;
    std::int64_t v = 0;
    std::size_t int_digits = 0;
    while (pos < token.size() && token[pos] >= '0' && token[pos] <= '9') {
        v = v * 10 + (token[pos] - '0');
        ++pos;
        ++int_digits;
    }
    if (int_digits == 0) throw reject();
    if (cfg.decimals > 0) {
        if (pos >= token.size() || token[pos] != '.') throw reject();
        ++pos;
        for (int i = 0; i < cfg.decimals; ++i, ++pos) {
            if (pos >= token.size() || token[pos] < '0' || token[pos] > '9') throw reject();
            v = v * 10 + (token[pos] - '0');
        }
    }
    if (pos != token.size()) throw reject();
    if (negative) v = -v;
    if (v % cfg.unit != 0) throw reject();
    std::int64_t step = v / cfg.unit;
    if (step < cfg.min_step || step > cfg.max_step) throw reject();
    // Rejects leading zeros and "-0.00".
    if (format_step(step, cfg) != token) throw reject();
    return step;
}

double dequantize(std::string_view token, const QuantizerConfig& cfg) {
    token_step(token, cfg);
    double value = 0.0;
    std::from_chars(token.data(), token.data() + token.size(), value);
    return value;
}

double snap(double x, const QuantizerConfig& cfg) { return dequantize(quantize(x, cfg), cfg); }

std::vector<std::string> numeric_vocab(const QuantizerConfig& cfg) {
    std::vector<std::string> out;
    out.reserve(cfg.vocab_size());
    for (std::int64_t k = cfg.min_step; k <= cfg.max_step; ++k) out.push_back(format_step(k, cfg));
    return out;
}

}  // namespace scenetok
