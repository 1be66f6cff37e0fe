#include "scenetok/evaluator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "scenetok/errors.hpp"
#include "scenetok/parallel.hpp"

namespace scenetok {

namespace {

bool same_family(DatasetStyle a, DatasetStyle b) {
    auto f = [](DatasetStyle s) { return s == DatasetStyle::ArkitScenes ? DatasetStyle::Objectron : s; };
    return f(a) == f(b);
}

void check_pair(const Scene& gt, const Scene& pred) {
    if (!gt.objects.empty() && !pred.objects.empty() && !same_family(gt.dataset_style, pred.dataset_style)) {
        throw StyleMismatchError("cannot compare a '" + std::string(style_name(pred.dataset_style)) +
                                 "' prediction with a '" + std::string(style_name(gt.dataset_style)) + "' scene");
    }
}

// Counts for every tau at once; compatibility and distances are tau-independent.
std::vector<SceneCounts> score_scene(const Scene& gt, const Scene& pred, const MatchCriteria& crit,
                                     std::span<const double> taus) {
    check_pair(gt, pred);
    std::vector<SceneCounts> out;
    out.reserve(taus.size());
    for (double tau : taus) out.push_back(jaccard_scene(gt, pred, crit, tau));
    return out;
}

EvalReport finish_report(std::vector<std::vector<SceneCounts>> by_scene, std::span<const double> taus) {
    EvalReport report;
    report.taus.assign(taus.begin(), taus.end());
    report.per_scene.assign(taus.size(), std::vector<SceneCounts>(by_scene.size()));
    report.per_tau.assign(taus.size(), 0.0);
    for (std::size_t t = 0; t < taus.size(); ++t) {
        double sum = 0.0;
        for (std::size_t s = 0; s < by_scene.size(); ++s) {
            report.per_scene[t][s] = by_scene[s][t];
            sum += by_scene[s][t].jaccard;
        }
        report.per_tau[t] = sum / static_cast<double>(by_scene.size());
    }
    double total = 0.0;
    for (double v : report.per_tau) total += v;
    report.mean_jaccard = taus.empty() ? 0.0 : total / static_cast<double>(taus.size());
    return report;
}

void check_dataset(std::span<const Scene> gts, std::span<const Scene> preds, std::span<const double> taus) {
    if (gts.size() != preds.size()) {
        throw LengthMismatchError(std::to_string(gts.size()) + " ground-truth scenes vs " +
                                  std::to_string(preds.size()) + " predictions");
    }
    if (gts.empty()) throw LengthMismatchError("evaluation needs at least one scene");
    if (taus.empty()) throw ConfigError("at least one tau is required");
    for (double t : taus) {
        if (!(t > 0.0)) throw ConfigError("tau must be positive");
    }
}

}  // namespace

MatchCriteria MatchCriteria::for_style(DatasetStyle style) {
    MatchCriteria c;
    switch (style) {
        case DatasetStyle::Clevr:
            c.attributes = {Attribute::Shape, Attribute::Size, Attribute::Color, Attribute::Material};
            break;
        case DatasetStyle::ObjaWorld:
            c.attributes = {Attribute::Shape};
            c.pose_tolerance = 0.15;
            break;
        case DatasetStyle::ObjaWorldShapes:
            // Geometry is a code sequence, not a label; only the pose constraint applies.
            c.pose_tolerance = 0.15;
            break;
        case DatasetStyle::Objectron:
            c.attributes = {Attribute::Category};
            c.dims_mae_max = 0.05;
            c.distance_field = DistanceField::CenterCam;
            break;
        case DatasetStyle::ArkitScenes:
            c.attributes = {Attribute::Category};
            c.dims_mae_max = 1.00;
            c.distance_field = DistanceField::CenterCam;
            break;
    }
    return c;
}

std::vector<double> default_taus(DatasetStyle style) {
    if (style == DatasetStyle::ArkitScenes) return {1.25, 1.50, 1.75, 2.00, 2.25};
    return {0.05, 0.10, 0.15, 0.20, 0.25};
}

double wrapped_angle_diff(double a, double b) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double d = std::fmod(std::fabs(a - b), two_pi);
    return std::min(d, two_pi - d);
}

bool attributes_match(const SceneObject& pred, const SceneObject& gt, const MatchCriteria& crit) {
    for (auto a : crit.attributes) {
        const auto& p = attribute_value(pred, a);
        const auto& g = attribute_value(gt, a);
        if (!p || !g || *p != *g) return false;
    }
    return true;
}

bool pair_compatible(const SceneObject& pred, const SceneObject& gt, const MatchCriteria& crit) {
    if (!attributes_match(pred, gt, crit)) return false;
    if (crit.pose_tolerance) {
        if (!pred.pose || !gt.pose) return false;
        if (wrapped_angle_diff((*pred.pose)[2], (*gt.pose)[2]) > *crit.pose_tolerance + kBoundEps) return false;
    }
    if (crit.dims_mae_max) {
        if (!pred.dimensions || !gt.dimensions) return false;
        double mae = 0.0;
        for (std::size_t i = 0; i < 3; ++i) mae += std::fabs((*pred.dimensions)[i] - (*gt.dimensions)[i]);
        mae /= 3.0;
        if (mae > *crit.dims_mae_max + kBoundEps) return false;
    }
    return true;
}

double object_distance(const SceneObject& a, const SceneObject& b, const MatchCriteria& crit) {
    const auto& pa = crit.distance_field == DistanceField::Location ? a.location : a.center_cam;
    const auto& pb = crit.distance_field == DistanceField::Location ? b.location : b.center_cam;
    if (!pa || !pb) return std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        double d = (*pa)[i] - (*pb)[i];
        s += d * d;
    }
    return std::sqrt(s);
}

SceneCounts jaccard_scene(const Scene& gt, const Scene& pred, const MatchCriteria& crit, double tau) {
    check_pair(gt, pred);
    SceneCounts c;
    std::vector<bool> matched(gt.objects.size(), false);
    for (const auto& p : pred.objects) {
        bool found = false;
        for (std::size_t j = 0; j < gt.objects.size(); ++j) {
            if (!matched[j] && pair_compatible(p, gt.objects[j], crit) &&
                object_distance(p, gt.objects[j], crit) < tau - kBoundEps) {
                matched[j] = true;
                found = true;
                ++c.tp;
                break;
            }
        }
        if (!found) ++c.fp;
    }
    c.fn = static_cast<std::size_t>(std::count(matched.begin(), matched.end(), false));
    const std::size_t denom = c.tp + c.fp + c.fn;
    c.jaccard = denom == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
    return c;
}

EvalReport jaccard_dataset_serial(std::span<const Scene> gts, std::span<const Scene> preds,
                                  const MatchCriteria& crit, std::span<const double> taus) {
    check_dataset(gts, preds, taus);
    std::vector<std::vector<SceneCounts>> by_scene;
    by_scene.reserve(gts.size());
    for (std::size_t s = 0; s < gts.size(); ++s) by_scene.push_back(score_scene(gts[s], preds[s], crit, taus));
    return finish_report(std::move(by_scene), taus);
}

EvalReport jaccard_dataset(std::span<const Scene> gts, std::span<const Scene> preds, const MatchCriteria& crit,
                           std::span<const double> taus) {
    check_dataset(gts, preds, taus);
    std::vector<std::vector<SceneCounts>> by_scene(gts.size());
    parallel_for(gts.size(), [&](std::size_t s) { by_scene[s] = score_scene(gts[s], preds[s], crit, taus); });
    return finish_report(std::move(by_scene), taus);
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json per_tau_json = nlohmann::json::array();
    nlohmann::json scenes = nlohmann::json::array();
    for (std::size_t t = 0; t < taus.size(); ++t) {
        per_tau_json.push_back({{"tau", taus[t]}, {"jaccard", per_tau[t]}});
        nlohmann::json counts = nlohmann::json::array();
        for (const auto& c : per_scene[t]) counts.push_back({{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"j", c.jaccard}});
        scenes.push_back({{"tau", taus[t]}, {"scenes", std::move(counts)}});
    }
    return {{"per_tau", std::move(per_tau_json)}, {"mean", mean_jaccard}, {"per_scene", std::move(scenes)}};
}

std::string normalize_answer(std::string_view answer) {
    std::string out;
    bool pending_space = false;
    for (char ch : answer) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(ch);
    }
    return out;
}

double qa_accuracy(std::span<const std::string> predicted, std::span<const std::string> expected) {
    if (predicted.size() != expected.size()) {
        throw LengthMismatchError(std::to_string(predicted.size()) + " predictions vs " +
                                  std::to_string(expected.size()) + " answers");
    }
    if (expected.empty()) throw EmptyInputError("qa_accuracy needs at least one answer");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (normalize_answer(predicted[i]) == normalize_answer(expected[i])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(expected.size());
}

namespace {

// Per-type answer frequencies from the training split.
std::map<AnswerType, std::map<std::string, std::size_t>> answer_counts(std::span<const QAItem> train) {
    std::map<AnswerType, std::map<std::string, std::size_t>> counts;
    for (const auto& item : train) ++counts[item.answer_type][normalize_answer(item.answer)];
    return counts;
}

}  // namespace

std::vector<std::pair<AnswerType, std::string>> majority_answers(std::span<const QAItem> train) {
    std::vector<std::pair<AnswerType, std::string>> out;
    for (const auto& [type, answers] : answer_counts(train)) {
        // std::map iterates answers in lexicographic order, so strict > keeps the smallest on ties.
        const std::pair<const std::string, std::size_t>* best = nullptr;
        for (const auto& entry : answers) {
            if (!best || entry.second > best->second) best = &entry;
        }
        out.emplace_back(type, best->first);
    }
    return out;
}

QABaselines qa_baselines(std::span<const QAItem> train, std::span<const QAItem> test) {
    if (train.empty() || test.empty()) throw EmptyInputError("qa_baselines needs non-empty train and test sets");
    const auto counts = answer_counts(train);
    std::map<AnswerType, std::string> majority;
    for (auto& [type, answer] : majority_answers(train)) majority[type] = answer;

    double random_hits = 0.0;
    std::size_t freq_hits = 0;
    for (const auto& item : test) {
        const auto answer = normalize_answer(item.answer);
        auto space = counts.find(item.answer_type);
        if (space == counts.end()) continue;
        if (space->second.count(answer)) random_hits += 1.0 / static_cast<double>(space->second.size());
        if (majority[item.answer_type] == answer) ++freq_hits;
    }
    const auto n = static_cast<double>(test.size());
    return {random_hits / n, static_cast<double>(freq_hits) / n};
}

double simulate_random_baseline(std::span<const QAItem> train, std::span<const QAItem> test, std::size_t runs,
                                std::mt19937_64& rng) {
    if (train.empty() || test.empty() || runs == 0) throw EmptyInputError("simulation needs data and runs > 0");
    std::map<AnswerType, std::vector<std::string>> spaces;
    for (const auto& [type, answers] : answer_counts(train)) {
        for (const auto& entry : answers) spaces[type].push_back(entry.first);
    }
    std::size_t hits = 0;
    for (std::size_t r = 0; r < runs; ++r) {
        for (const auto& item : test) {
            auto it = spaces.find(item.answer_type);
            if (it == spaces.end()) continue;
            std::uniform_int_distribution<std::size_t> pick(0, it->second.size() - 1);
            if (it->second[pick(rng)] == normalize_answer(item.answer)) ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(runs * test.size());
}

}  // namespace scenetok
