#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "scenetok/vocabulary.hpp"

namespace scenetok {

using Sequence = std::vector<TokenId>;

// For each position, the share of sequences carrying that position's most
// common token. Throws EmptyInputError on no sequences, RaggedInputError when
// lengths differ.
std::vector<double> position_concentration(std::span<const Sequence> sequences);
std::vector<double> position_concentration_serial(std::span<const Sequence> sequences);

// Most common token per position; ties go to the smaller ID.
std::vector<TokenId> position_mode(std::span<const Sequence> sequences);

struct UsageHistogram {
    TokenId lo = 0;                     // first code of the range
    std::vector<std::uint64_t> counts;  // counts[c - lo]

    std::uint64_t total() const;
    std::size_t used() const;
    double used_fraction() const;
};

// Counts codes in [lo, hi). Throws OutOfRangeError on any code outside it and
// ConfigError when the range is empty.
UsageHistogram usage_histogram(std::span<const Sequence> sequences, TokenId lo, TokenId hi);
UsageHistogram usage_histogram_serial(std::span<const Sequence> sequences, TokenId lo, TokenId hi);

// CSV with header "position,share" / "code,count".
void write_concentration_csv(std::ostream& out, std::span<const double> shares);
void write_usage_csv(std::ostream& out, const UsageHistogram& hist);

}  // namespace scenetok
