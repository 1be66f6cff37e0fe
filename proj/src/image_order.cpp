#include "scenetok/image_order.hpp"

namespace scenetok {

ReorderPlan center_plan(std::size_t length, HopOrder order) {
    if (length == 0) throw LengthMismatchError("reorder plan length must be at least 1");
    ReorderPlan plan;
    plan.length = length;
    plan.perm.reserve(length);
    const std::size_t center = length / 2;
    plan.perm.push_back(center);
    for (std::size_t hop = 1; plan.perm.size() < length; ++hop) {
        const bool has_left = hop <= center;
        const bool has_right = center + hop < length;
        if (order == HopOrder::LeftFirst) {
            if (has_left) plan.perm.push_back(center - hop);
            if (has_right) plan.perm.push_back(center + hop);
        } else {
            if (has_right) plan.perm.push_back(center + hop);
            if (has_left) plan.perm.push_back(center - hop);
        }
    }
    return plan;
}

}  // namespace scenetok
