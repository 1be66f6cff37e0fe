#pragma once

// Shared fixtures and independent reference implementations for the tests.
// Nothing here calls into the library code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scenetok/evaluator.hpp"
#include "scenetok/scene.hpp"
#include "scenetok/sequence_builder.hpp"
#include "scenetok/vocabulary.hpp"

namespace testsupport {

using scenetok::DatasetStyle;
using scenetok::Scene;
using scenetok::SceneObject;
using scenetok::Vec3;

inline std::vector<std::string> split(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

inline SceneObject clevr(const char* size, const char* color, const char* material, const char* shape, Vec3 loc) {
    SceneObject o;
    o.size = size;
    o.color = color;
    o.material = material;
    o.shape = shape;
    o.location = loc;
    return o;
}

inline SceneObject obja(const char* shape, Vec3 loc, Vec3 pose) {
    SceneObject o;
    o.shape = shape;
    o.location = loc;
    o.pose = pose;
    return o;
}

inline SceneObject boxed(const char* category, Vec3 center, Vec3 dims) {
    SceneObject o;
    o.category = category;
    o.center_cam = center;
    o.dimensions = dims;
    return o;
}

// The two-object scene of the reference CLEVR listing.
inline Scene listing_clevr_scene() {
    Scene s;
    s.dataset_style = DatasetStyle::Clevr;
    s.objects = {clevr("large", "cyan", "metal", "cube", {-0.55, 0.05, 0.70}),
                 clevr("small", "yellow", "metal", "cylinder", {1.25, 2.50, 0.35})};
    return s;
}

inline const char* kListingClevrTokens =
    "[SCENE-START] [OBJECT-START] [SIZE] large [COLOR] cyan [MATERIAL] metal [SHAPE] cube "
    "[LOCATION] -0.55 0.05 0.70 [OBJECT-END] [OBJECT-START] [SIZE] small [COLOR] yellow "
    "[MATERIAL] metal [SHAPE] cylinder [LOCATION] 1.25 2.50 0.35 [OBJECT-END] [SCENE-END]";

inline const char* kListingObjaTokens =
    "[SCENE-START] "
    "[OBJECT-START] [SHAPE] table [LOCATION] -2.70 -2.20 0.20 [POSE] 0.00 0.00 -0.10 [OBJECT-END] "
    "[OBJECT-START] [SHAPE] person [LOCATION] -0.20 -0.70 0.85 [POSE] 0.00 0.00 0.55 [OBJECT-END] "
    "[OBJECT-START] [SHAPE] person [LOCATION] -0.75 -2.80 0.85 [POSE] 0.00 0.00 -2.55 [OBJECT-END] "
    "[OBJECT-START] [SHAPE] table [LOCATION] 2.75 1.90 0.20 [POSE] 0.00 0.00 1.95 [OBJECT-END] "
    "[OBJECT-START] [SHAPE] sofa [LOCATION] 0.40 2.75 0.30 [POSE] 0.00 0.00 -0.95 [OBJECT-END] "
    "[SCENE-END]";

inline const char* kListingObjectronTokens =
    "[SCENE-START] [OBJECT-START] [CATEGORY] bicycle [CENTER_CAM] 0.00 -0.10 2.45 "
    "[DIMENSIONS] 0.60 1.10 1.00 [OBJECT-END] [SCENE-END]";

// --- oracles ---------------------------------------------------------------

// Sine-cosine encoding evaluated in long double via exp/log rather than pow.
inline double oracle_sincos(std::size_t pos, std::size_t col, std::size_t d) {
    const long double i = static_cast<long double>(col / 2);
    const long double rate = std::exp(-(2.0L * i / static_cast<long double>(d)) * std::log(10000.0L));
    const long double angle = static_cast<long double>(pos) * rate;
    return static_cast<double>(col % 2 == 0 ? std::sin(angle) : std::cos(angle));
}

// Center-out order as a sort: by distance from the center, then the side
// taken first wins the tie.
inline std::vector<std::size_t> oracle_center_perm(std::size_t n, bool left_first) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    const auto c = static_cast<long long>(n / 2);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const long long da = std::llabs(static_cast<long long>(a) - c);
        const long long db = std::llabs(static_cast<long long>(b) - c);
        if (da != db) return da < db;
        return left_first ? a < b : a > b;
    });
    return idx;
}

// Canonical token via long double rounding and printf, half away from zero.
inline std::string oracle_quantize(double x, double g, int decimals, double lo, double hi) {
    long double q = std::round(static_cast<long double>(x) / g);
    const long double qmin = std::round(static_cast<long double>(lo) / g);
    const long double qmax = std::round(static_cast<long double>(hi) / g);
    q = std::clamp(q, qmin, qmax);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*Lf", decimals, q * static_cast<long double>(g));
    std::string s = buf;
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
    return s;
}

struct OracleCounts {
    std::size_t tp = 0, fp = 0, fn = 0;
};

// Maximum-cardinality matching by exhaustive search over every assignment of
// predictions to GT objects (or to nothing).
inline OracleCounts oracle_optimal_matching(const Scene& gt, const Scene& pred,
                                            const std::function<bool(const SceneObject&, const SceneObject&)>& ok) {
    const std::size_t np = pred.objects.size(), ng = gt.objects.size();
    std::vector<bool> used(ng, false);
    std::size_t best = 0;
    std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t p, std::size_t matched) {
        if (matched + (np - p) <= best) return;
        if (p == np) {
            best = std::max(best, matched);
            return;
        }
        for (std::size_t g = 0; g < ng; ++g) {
            if (!used[g] && ok(pred.objects[p], gt.objects[g])) {
                used[g] = true;
                dfs(p + 1, matched + 1);
                used[g] = false;
            }
        }
        dfs(p + 1, matched);
    };
    dfs(0, 0);
    return {best, np - best, ng - best};
}

inline double oracle_jaccard(const OracleCounts& c) {
    const auto denom = c.tp + c.fp + c.fn;
    return denom == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

// Positions of target image payload tokens, counted independently of the
// weighting code: walk the sequence and track [IMAGE-START]/[IMAGE-END] after
// the separator.
inline std::vector<std::size_t> target_image_payload(const scenetok::TaskSequence& seq, const scenetok::Vocabulary& v) {
    std::vector<std::size_t> out;
    const auto sep = std::find(seq.ids.begin(), seq.ids.end(), v.lookup("[OUTPUT-SEP]")) - seq.ids.begin();
    bool inside = false;
    for (std::size_t i = static_cast<std::size_t>(sep) + 1; i < seq.ids.size(); ++i) {
        if (seq.ids[i] == v.lookup("[IMAGE-START]")) inside = true;
        else if (seq.ids[i] == v.lookup("[IMAGE-END]")) inside = false;
        else if (inside) out.push_back(i);
    }
    return out;
}

// Prediction derived from a ground-truth scene: objects dropped, jittered by at
// most max_shift per axis, relabelled, or hallucinated far from everything.
// With GT objects at least min_sep apart and sqrt(3)*max_shift + tau < min_sep,
// every prediction lies within tau of at most one GT object.
inline Scene perturb_prediction(const Scene& gt, std::mt19937_64& rng, double max_shift,
                                const std::vector<std::string>& colors) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> shift(-max_shift, max_shift);
    Scene pred;
    pred.dataset_style = gt.dataset_style;
    for (const auto& o : gt.objects) {
        const double r = unit(rng);
        if (r < 0.15) continue;
        SceneObject p = o;
        if (p.location) {
            for (auto& v : *p.location) v += shift(rng);
        }
        if (r > 0.9 && p.color) p.color = colors[static_cast<std::size_t>(unit(rng) * colors.size()) % colors.size()];
        pred.objects.push_back(std::move(p));
    }
    if (unit(rng) < 0.3 && !gt.objects.empty()) {
        SceneObject ghost = gt.objects.front();
        ghost.location = Vec3{50.0 + unit(rng), 50.0, 0.35};
        pred.objects.push_back(ghost);
    }
    std::shuffle(pred.objects.begin(), pred.objects.end(), rng);
    return pred;
}

}  // namespace testsupport
