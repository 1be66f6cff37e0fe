#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "scenetok/quantizer.hpp"
#include "scenetok/scene.hpp"

namespace scenetok {

struct GenConfig {
    std::uint64_t seed = 0;
    DatasetStyle style = DatasetStyle::Clevr;
    std::size_t min_objects = 3;
    std::size_t max_objects = 10;

    std::vector<std::string> sizes{"small", "large"};
    std::vector<std::string> colors{"gray", "red", "blue", "green", "brown", "purple", "cyan", "yellow"};
    std::vector<std::string> materials{"rubber", "metal"};
    std::vector<std::string> shapes{"cube", "sphere", "cylinder"};
    std::vector<std::string> assets{"person", "bird", "bench", "lamppost", "sofa", "table"};

    // x and y are drawn on the quantizer grid inside this interval.
    double position_min = -3.0;
    double position_max = 3.0;
    double min_separation = 0.4;
    // Azimuth range for ObjaWorld poses (radians).
    double azimuth_min = -3.1;
    double azimuth_max = 3.1;
    std::size_t max_attempts = 1000;

    QuantizerConfig quantizer = QuantizerConfig::for_style(DatasetStyle::Clevr);

    // Throws ConfigError on empty attribute sets, min > max, and the like.
    void validate() const;
};

// Resting height of a CLEVR object: large 0.70, small 0.35.
double clevr_height(const std::string& size);

// Deterministic in cfg.seed. Throws PlacementInfeasibleError when an object
// cannot be placed min_separation away from the others in max_attempts draws.
Scene generate_scene(const GenConfig& cfg);
Scene generate_scene(const GenConfig& cfg, std::mt19937_64& rng);

// Scene i uses a seed derived from (cfg.seed, i), so the corpus does not
// depend on how the work is split across threads.
std::vector<Scene> generate_corpus(const GenConfig& cfg, std::size_t count);
std::vector<Scene> generate_corpus_serial(const GenConfig& cfg, std::size_t count);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

enum class EditOp { ChangeAttr, Add, Remove, Move };
enum class Direction { Left, Right, Front, Behind };

// Describes an object by any subset of its word attributes.
struct ObjectRef {
    std::optional<std::string> size;
    std::optional<std::string> color;
    std::optional<std::string> material;
    std::optional<std::string> shape;

    static ObjectRef full(const SceneObject& object);
    bool matches(const SceneObject& object) const;
    // "small red rubber cube", or "... object" when the shape is left out.
    std::string describe() const;
};

struct EditParams {
    ObjectRef target;          // ChangeAttr/Remove/Move: edited object; Add: anchor
    Attribute attribute = Attribute::Color;
    std::string value;         // ChangeAttr
    SceneObject new_object;    // Add: x and y are set from the anchor; z is kept
    Direction direction = Direction::Left;
    double distance = 1.0;     // Add: offset from the anchor
    double dx = 0.0, dy = 0.0; // Move
};

struct EditResult {
    Scene scene;
    std::string instruction;
};

// Applies one edit and renders its instruction. Left/right move along -x/+x,
// front/behind along -y/+y.
// Throws TargetNotFoundError / AmbiguousReferenceError when the reference does
// not pick out exactly one object, PlacementInfeasibleError when an added
// object would violate min_separation.
EditResult edit_scene(const Scene& scene, EditOp op, const EditParams& params, const GenConfig& cfg);

// Picks a random applicable edit whose target is uniquely referenced.
EditResult random_edit(const Scene& scene, const GenConfig& cfg, std::mt19937_64& rng);

}  // namespace scenetok
