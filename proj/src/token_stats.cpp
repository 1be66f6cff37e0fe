#include "scenetok/token_stats.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <unordered_map>

#include "scenetok/errors.hpp"
#include "scenetok/parallel.hpp"

namespace scenetok {

namespace {

std::size_t common_length(std::span<const Sequence> sequences) {
    if (sequences.empty()) throw EmptyInputError("no sequences");
    const std::size_t len = sequences.front().size();
    for (std::size_t i = 1; i < sequences.size(); ++i) {
        if (sequences[i].size() != len) {
            throw RaggedInputError("sequence " + std::to_string(i) + " has length " +
                                   std::to_string(sequences[i].size()) + ", expected " + std::to_string(len));
        }
    }
    return len;
}

std::pair<TokenId, std::size_t> mode_at(std::span<const Sequence> sequences, std::size_t pos) {
    std::unordered_map<TokenId, std::size_t> counts;
    for (const auto& s : sequences) ++counts[s[pos]];
    TokenId best = 0;
    std::size_t best_count = 0;
    for (const auto& [id, c] : counts) {
        if (c > best_count || (c == best_count && id < best)) {
            best = id;
            best_count = c;
        }
    }
    return {best, best_count};
}

void check_range(TokenId lo, TokenId hi) {
    if (lo >= hi) throw ConfigError("empty code range");
}

[[noreturn]] void out_of_range(TokenId id, TokenId lo, TokenId hi) {
    throw OutOfRangeError("code " + std::to_string(id) + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + ")");
}

}  // namespace

std::vector<double> position_concentration_serial(std::span<const Sequence> sequences) {
    const std::size_t len = common_length(sequences);
    std::vector<double> out(len);
    const double n = static_cast<double>(sequences.size());
    for (std::size_t p = 0; p < len; ++p) out[p] = static_cast<double>(mode_at(sequences, p).second) / n;
    return out;
}

std::vector<double> position_concentration(std::span<const Sequence> sequences) {
    const std::size_t len = common_length(sequences);
    std::vector<double> out(len);
    const double n = static_cast<double>(sequences.size());
    parallel_for(len, [&](std::size_t p) { out[p] = static_cast<double>(mode_at(sequences, p).second) / n; });
    return out;
}

std::vector<TokenId> position_mode(std::span<const Sequence> sequences) {
    const std::size_t len = common_length(sequences);
    std::vector<TokenId> out(len);
    for (std::size_t p = 0; p < len; ++p) out[p] = mode_at(sequences, p).first;
    return out;
}

std::uint64_t UsageHistogram::total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

std::size_t UsageHistogram::used() const {
    return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
}

double UsageHistogram::used_fraction() const {
    return counts.empty() ? 0.0 : static_cast<double>(used()) / static_cast<double>(counts.size());
}

UsageHistogram usage_histogram_serial(std::span<const Sequence> sequences, TokenId lo, TokenId hi) {
    check_range(lo, hi);
    UsageHistogram h{lo, std::vector<std::uint64_t>(hi - lo, 0)};
    for (const auto& s : sequences) {
        for (TokenId id : s) {
            if (id < lo || id >= hi) out_of_range(id, lo, hi);
            ++h.counts[id - lo];
        }
    }
    return h;
}

UsageHistogram usage_histogram(std::span<const Sequence> sequences, TokenId lo, TokenId hi) {
    check_range(lo, hi);
    const std::size_t width = hi - lo;
    const int threads = std::max(1, thread_count());
    // One private histogram per chunk, merged in chunk order.
    const std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(threads) * 4,
                                                     std::max<std::size_t>(sequences.size(), 1));
    std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(width, 0));
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t begin = sequences.size() * c / chunks;
        const std::size_t end = sequences.size() * (c + 1) / chunks;
        auto& local = partial[c];
        for (std::size_t i = begin; i < end; ++i) {
            for (TokenId id : sequences[i]) {
                if (id < lo || id >= hi) out_of_range(id, lo, hi);
                ++local[id - lo];
            }
        }
    });
    UsageHistogram h{lo, std::vector<std::uint64_t>(width, 0)};
    for (const auto& local : partial) {
        for (std::size_t k = 0; k < width; ++k) h.counts[k] += local[k];
    }
    return h;
}

void write_concentration_csv(std::ostream& out, std::span<const double> shares) {
    out << "position,share\n";
    char buf[64];
    for (std::size_t p = 0; p < shares.size(); ++p) {
        std::snprintf(buf, sizeof buf, "%.17g", shares[p]);
        out << p << ',' << buf << '\n';
    }
}

void write_usage_csv(std::ostream& out, const UsageHistogram& hist) {
    out << "code,count\n";
    for (std::size_t k = 0; k < hist.counts.size(); ++k) out << hist.lo + k << ',' << hist.counts[k] << '\n';
}

}  // namespace scenetok
