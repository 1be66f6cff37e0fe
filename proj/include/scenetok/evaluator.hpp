#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenetok/scene.hpp"

namespace scenetok {

enum class DistanceField { Location, CenterCam };

// Which object pairs may match. Presets follow the per-dataset rules:
//   CLEVR        shape, size, color, material
//   ObjaWorld    shape, azimuth within 0.15 rad
//   Objectron    category, dimension MAE <= 0.05
//   ARKitScenes  category, dimension MAE <= 1.00
struct MatchCriteria {
    std::vector<Attribute> attributes;
    std::optional<double> pose_tolerance;
    std::optional<double> dims_mae_max;
    DistanceField distance_field = DistanceField::Location;

    static MatchCriteria for_style(DatasetStyle style);
};

// Comparisons against pose/dims/tau bounds treat values within this distance
// of the bound as sitting on it, so grid-aligned ties resolve the same way on
// every platform.
inline constexpr double kBoundEps = 1e-9;

std::vector<double> default_taus(DatasetStyle style);

struct SceneCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double jaccard = 0.0;

    bool operator==(const SceneCounts&) const = default;
};

struct EvalReport {
    std::vector<double> taus;
    std::vector<double> per_tau;                       // mean Jaccard per tau
    double mean_jaccard = 0.0;                         // mean over per_tau
    std::vector<std::vector<SceneCounts>> per_scene;   // [tau][scene]

    nlohmann::json to_json() const;
};

bool attributes_match(const SceneObject& pred, const SceneObject& gt, const MatchCriteria& crit);
// Attribute plus pose/dims constraints; everything except distance.
bool pair_compatible(const SceneObject& pred, const SceneObject& gt, const MatchCriteria& crit);
double object_distance(const SceneObject& a, const SceneObject& b, const MatchCriteria& crit);
// |a - b| on the circle, in [0, pi].
double wrapped_angle_diff(double a, double b);

// Greedy first-fit matching: predictions in order, each takes the first
// unmatched compatible GT object closer than tau. J = 1 when both scenes are
// empty. Throws StyleMismatchError when the scenes' styles differ.
SceneCounts jaccard_scene(const Scene& gt, const Scene& pred, const MatchCriteria& crit, double tau);

// Throws LengthMismatchError unless |gts| == |preds| > 0.
EvalReport jaccard_dataset(std::span<const Scene> gts, std::span<const Scene> preds, const MatchCriteria& crit,
                           std::span<const double> taus);
EvalReport jaccard_dataset_serial(std::span<const Scene> gts, std::span<const Scene> preds,
                                  const MatchCriteria& crit, std::span<const double> taus);

// Trims and collapses internal whitespace; case is kept.
std::string normalize_answer(std::string_view answer);

// Fraction of exact matches after whitespace normalization.
double qa_accuracy(std::span<const std::string> predicted, std::span<const std::string> expected);

struct QABaselines {
    double random_expected = 0.0;
    double frequency = 0.0;
};

// The answer space of a type is the set of distinct answers seen for it in
// training. Random: expected accuracy of a uniform guess over that space.
// Frequency: accuracy of always answering the per-type training majority
// (ties go to the lexicographically smallest answer).
QABaselines qa_baselines(std::span<const QAItem> train, std::span<const QAItem> test);

// Majority training answer per type, for types seen in training.
std::vector<std::pair<AnswerType, std::string>> majority_answers(std::span<const QAItem> train);

// Monte Carlo version of the random baseline: mean accuracy over `runs`
// passes of uniform guessing.
double simulate_random_baseline(std::span<const QAItem> train, std::span<const QAItem> test, std::size_t runs,
                                std::mt19937_64& rng);

}  // namespace scenetok
