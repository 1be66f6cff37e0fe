#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scenetok/errors.hpp"

namespace scenetok {

enum class HopOrder { LeftFirst, RightFirst };

// Center-out visiting order over a flattened raster sequence: start at
// floor(length/2), then alternate one step left and one step right, carrying
// on along whichever side remains once the other is exhausted.
struct ReorderPlan {
    std::size_t length = 0;
    std::vector<std::size_t> perm;  // perm[k] = raster index emitted at position k
};

ReorderPlan center_plan(std::size_t length, HopOrder order = HopOrder::LeftFirst);

// out[k] = tokens[perm[k]]
template <typename T>
std::vector<T> apply(const ReorderPlan& plan, std::span<const T> tokens) {
    if (tokens.size() != plan.length) {
        throw LengthMismatchError("reorder plan expects " + std::to_string(plan.length) + " tokens, got " +
                                  std::to_string(tokens.size()));
    }
    std::vector<T> out;
    out.reserve(plan.length);
    for (auto idx : plan.perm) out.push_back(tokens[idx]);
    return out;
}

// Inverse of apply: out[perm[k]] = tokens[k]
template <typename T>
std::vector<T> invert(const ReorderPlan& plan, std::span<const T> tokens) {
    if (tokens.size() != plan.length) {
        throw LengthMismatchError("reorder plan expects " + std::to_string(plan.length) + " tokens, got " +
                                  std::to_string(tokens.size()));
    }
    std::vector<T> out(plan.length);
    for (std::size_t k = 0; k < plan.length; ++k) out[plan.perm[k]] = tokens[k];
    return out;
}

}  // namespace scenetok
