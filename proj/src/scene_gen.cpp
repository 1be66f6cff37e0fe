#include "scenetok/scene_gen.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "scenetok/errors.hpp"
#include "scenetok/parallel.hpp"

namespace scenetok {

namespace {

template <typename T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> dist(0, items.size() - 1);
    return items[dist(rng)];
}

// Grid value k * granularity, routed through the canonical token so it is
// bit-identical to what the parser reads back.
double grid_value(std::int64_t k, const QuantizerConfig& q) { return dequantize(format_step(k, q), q); }

double draw_on_grid(double lo, double hi, const QuantizerConfig& q, std::mt19937_64& rng) {
    auto kmin = static_cast<std::int64_t>(std::ceil(lo / q.granularity - 1e-9));
    auto kmax = static_cast<std::int64_t>(std::floor(hi / q.granularity + 1e-9));
    kmin = std::max(kmin, q.min_step);
    kmax = std::min(kmax, q.max_step);
    if (kmin > kmax) throw ConfigError("sampling interval contains no grid point");
    std::uniform_int_distribution<std::int64_t> dist(kmin, kmax);
    return grid_value(dist(rng), q);
}

double xy_distance(const Vec3& a, const Vec3& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

bool far_enough(const Vec3& p, const std::vector<SceneObject>& placed, double min_sep, const SceneObject* skip = nullptr) {
    for (const auto& o : placed) {
        if (&o == skip || !o.location) continue;
        if (xy_distance(p, *o.location) < min_sep - 1e-9) return false;
    }
    return true;
}

double asset_height(const std::string& asset) {
    static const std::unordered_map<std::string, double> heights{
        {"person", 0.85}, {"table", 0.20}, {"sofa", 0.30}, {"bench", 0.25}, {"bird", 0.15}, {"lamppost", 1.00},
    };
    auto it = heights.find(asset);
    return it == heights.end() ? 0.50 : it->second;
}

SceneObject random_object(const GenConfig& cfg, std::mt19937_64& rng) {
    const auto& q = cfg.quantizer;
    SceneObject o;
    switch (cfg.style) {
        case DatasetStyle::Clevr:
            o.size = pick(cfg.sizes, rng);
            o.color = pick(cfg.colors, rng);
            o.material = pick(cfg.materials, rng);
            o.shape = pick(cfg.shapes, rng);
            o.location = Vec3{0.0, 0.0, snap(clevr_height(*o.size), q)};
            break;
        case DatasetStyle::ObjaWorld:
            o.shape = pick(cfg.assets, rng);
            o.location = Vec3{0.0, 0.0, snap(asset_height(*o.shape), q)};
            o.pose = Vec3{snap(0.0, q), snap(0.0, q), draw_on_grid(cfg.azimuth_min, cfg.azimuth_max, q, rng)};
            break;
        case DatasetStyle::ObjaWorldShapes: {
            std::uniform_int_distribution<std::uint32_t> code(0, kShapeCodebookSize - 1);
            std::vector<std::uint32_t> codes(kShapeCodesPerObject);
            for (auto& c : codes) c = code(rng);
            o.shape_codes = std::move(codes);
            o.location = Vec3{0.0, 0.0, snap(0.0, q)};
            o.pose = Vec3{snap(0.0, q), snap(0.0, q), draw_on_grid(cfg.azimuth_min, cfg.azimuth_max, q, rng)};
            break;
        }
        default:
            throw ConfigError("the generator supports clevr, objaworld and objaworld_shapes scenes");
    }
    return o;
}

std::size_t resolve(const Scene& scene, const ObjectRef& ref) {
    std::size_t found = scene.objects.size();
    std::size_t hits = 0;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        if (ref.matches(scene.objects[i])) {
            if (hits++ == 0) found = i;
        }
    }
    if (hits == 0) throw TargetNotFoundError("no object matches '" + ref.describe() + "'");
    if (hits > 1) throw AmbiguousReferenceError("'" + ref.describe() + "' matches " + std::to_string(hits) + " objects");
    return found;
}

std::string_view direction_word(Direction d) {
    switch (d) {
        case Direction::Left: return "left";
        case Direction::Right: return "right";
        case Direction::Front: return "front";
        case Direction::Behind: return "behind";
    }
    return "left";
}

// Shortest attribute subset that still picks out `index` alone.
ObjectRef minimal_ref(const Scene& scene, std::size_t index) {
    const auto full = ObjectRef::full(scene.objects[index]);
    ObjectRef best = full;
    std::size_t best_size = 5;
    for (unsigned mask = 1; mask < 16; ++mask) {
        ObjectRef r;
        if (mask & 1) r.color = full.color;
        if (mask & 2) r.size = full.size;
        if (mask & 4) r.material = full.material;
        if (mask & 8) r.shape = full.shape;
        std::size_t n = std::size_t(bool(r.size)) + bool(r.color) + bool(r.material) + bool(r.shape);
        if (n == 0 || n >= best_size) continue;
        std::size_t hits = 0;
        for (const auto& o : scene.objects) hits += r.matches(o) ? 1 : 0;
        if (hits == 1) {
            best = r;
            best_size = n;
        }
    }
    return best;
}

bool uniquely_referenced(const Scene& scene, const ObjectRef& ref) {
    std::size_t hits = 0;
    for (const auto& o : scene.objects) hits += ref.matches(o) ? 1 : 0;
    return hits == 1;
}

}  // namespace

void GenConfig::validate() const {
    if (min_objects > max_objects) throw ConfigError("min_objects must not exceed max_objects");
    if (min_separation < 0.0) throw ConfigError("min_separation must be non-negative");
    if (position_min > position_max) throw ConfigError("empty position range");
    if (style == DatasetStyle::Clevr && (sizes.empty() || colors.empty() || materials.empty() || shapes.empty())) {
        throw ConfigError("attribute sets must not be empty");
    }
    if (style == DatasetStyle::ObjaWorld && assets.empty()) throw ConfigError("asset list must not be empty");
    if (max_attempts == 0) throw ConfigError("max_attempts must be positive");
}

double clevr_height(const std::string& size) { return size == "large" ? 0.70 : 0.35; }

Scene generate_scene(const GenConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    Scene scene;
    scene.dataset_style = cfg.style;
    std::uniform_int_distribution<std::size_t> count(cfg.min_objects, cfg.max_objects);
    const std::size_t n = count(rng);
    scene.objects.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        SceneObject o = random_object(cfg, rng);
        bool placed = false;
        for (std::size_t attempt = 0; attempt < cfg.max_attempts && !placed; ++attempt) {
            Vec3 p = *o.location;
            p[0] = draw_on_grid(cfg.position_min, cfg.position_max, cfg.quantizer, rng);
            p[1] = draw_on_grid(cfg.position_min, cfg.position_max, cfg.quantizer, rng);
            if (far_enough(p, scene.objects, cfg.min_separation)) {
                o.location = p;
                placed = true;
            }
        }
        if (!placed) {
            throw PlacementInfeasibleError("could not place object " + std::to_string(i + 1) + " of " +
                                           std::to_string(n) + " with separation " +
                                           std::to_string(cfg.min_separation));
        }
        scene.objects.push_back(std::move(o));
    }
    return scene;
}

Scene generate_scene(const GenConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    return generate_scene(cfg, rng);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 over the pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<Scene> generate_corpus_serial(const GenConfig& cfg, std::size_t count) {
    std::vector<Scene> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::mt19937_64 rng(derive_seed(cfg.seed, i));
        out.push_back(generate_scene(cfg, rng));
    }
    return out;
}

std::vector<Scene> generate_corpus(const GenConfig& cfg, std::size_t count) {
    cfg.validate();
    std::vector<Scene> out(count);
    parallel_for(count, [&](std::size_t i) {
        std::mt19937_64 rng(derive_seed(cfg.seed, i));
        out[i] = generate_scene(cfg, rng);
    });
    return out;
}

ObjectRef ObjectRef::full(const SceneObject& o) { return ObjectRef{o.size, o.color, o.material, o.shape}; }

bool ObjectRef::matches(const SceneObject& o) const {
    return (!size || size == o.size) && (!color || color == o.color) && (!material || material == o.material) &&
           (!shape || shape == o.shape);
}

std::string ObjectRef::describe() const {
    std::string out;
    for (const auto* w : {&size, &color, &material, &shape}) {
        if (!*w) continue;
        if (!out.empty()) out.push_back(' ');
        out += **w;
    }
    if (!shape) out += out.empty() ? "object" : " object";
    return out;
}

EditResult edit_scene(const Scene& scene, EditOp op, const EditParams& params, const GenConfig& cfg) {
    const auto& q = cfg.quantizer;
    EditResult result{scene, {}};
    auto& objects = result.scene.objects;
    switch (op) {
        case EditOp::ChangeAttr: {
            auto& obj = objects[resolve(scene, params.target)];
            auto& slot = attribute_value(obj, params.attribute);
            if (!slot) throw SchemaError("object has no " + std::string(attribute_name(params.attribute)));
            if (params.value.empty()) throw ConfigError("new attribute value must not be empty");
            slot = params.value;
            if (params.attribute == Attribute::Size && obj.location && scene.dataset_style == DatasetStyle::Clevr) {
                (*obj.location)[2] = snap(clevr_height(params.value), q);
            }
            result.instruction = "Change the " + params.target.describe() + " to have " + params.value + " " +
                                 std::string(attribute_name(params.attribute));
            break;
        }
        case EditOp::Add: {
            const auto& anchor = objects[resolve(scene, params.target)];
            SceneObject added = params.new_object;
            if (!added.location || !anchor.location) throw SchemaError("added object and anchor need a location");
            double dx = 0, dy = 0;
            switch (params.direction) {
                case Direction::Left: dx = -params.distance; break;
                case Direction::Right: dx = params.distance; break;
                case Direction::Front: dy = -params.distance; break;
                case Direction::Behind: dy = params.distance; break;
            }
            (*added.location)[0] = snap((*anchor.location)[0] + dx, q);
            (*added.location)[1] = snap((*anchor.location)[1] + dy, q);
            (*added.location)[2] = snap((*added.location)[2], q);
            validate_object(added, scene.dataset_style);
            if (!far_enough(*added.location, objects, cfg.min_separation)) {
                throw PlacementInfeasibleError("added object would sit closer than min_separation to another object");
            }
            result.instruction = "Put a " + ObjectRef::full(added).describe() + " to the " +
                                 std::string(direction_word(params.direction)) + " of the " + params.target.describe();
            objects.push_back(std::move(added));
            break;
        }
        case EditOp::Remove: {
            objects.erase(objects.begin() + static_cast<std::ptrdiff_t>(resolve(scene, params.target)));
            result.instruction = "Remove the " + params.target.describe();
            break;
        }
        case EditOp::Move: {
            auto& obj = objects[resolve(scene, params.target)];
            if (!obj.location) throw SchemaError("object has no location");
            if (params.dx == 0.0 && params.dy == 0.0) throw ConfigError("move needs a non-zero offset");
            (*obj.location)[0] = snap((*obj.location)[0] + params.dx, q);
            (*obj.location)[1] = snap((*obj.location)[1] + params.dy, q);
            std::vector<std::string> dirs;
            if (params.dx < 0) dirs.emplace_back("left");
            if (params.dx > 0) dirs.emplace_back("right");
            if (params.dy < 0) dirs.emplace_back("front");
            if (params.dy > 0) dirs.emplace_back("behind");
            std::string words = params.target.describe();
            if (!params.target.shape && words.size() >= 6) words.resize(words.size() - 6);  // drop " object"
            if (words == "object") words.clear();
            result.instruction = "Move the " + (words.empty() ? std::string() : words + " ") + "object to " + dirs[0];
            if (dirs.size() > 1) result.instruction += " and " + dirs[1];
            break;
        }
    }
    return result;
}

EditResult random_edit(const Scene& scene, const GenConfig& cfg, std::mt19937_64& rng) {
    if (scene.dataset_style != DatasetStyle::Clevr && scene.dataset_style != DatasetStyle::ObjaWorld) {
        throw ConfigError("random edits support clevr and objaworld scenes");
    }
    std::vector<std::size_t> unique;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        if (uniquely_referenced(scene, ObjectRef::full(scene.objects[i]))) unique.push_back(i);
    }
    GenConfig obj_cfg = cfg;
    obj_cfg.style = scene.dataset_style;
    const std::vector<EditOp> ops{EditOp::ChangeAttr, EditOp::Add, EditOp::Remove, EditOp::Move};

    for (int attempt = 0; attempt < 64; ++attempt) {
        if (unique.empty()) break;
        const EditOp op = pick(ops, rng);
        const std::size_t index = pick(unique, rng);
        EditParams params;
        params.target = minimal_ref(scene, index);
        const auto& obj = scene.objects[index];
        try {
            switch (op) {
                case EditOp::ChangeAttr: {
                    std::vector<Attribute> attrs{Attribute::Shape};
                    if (scene.dataset_style == DatasetStyle::Clevr) {
                        attrs = {Attribute::Color, Attribute::Size, Attribute::Material, Attribute::Shape};
                    }
                    params.attribute = pick(attrs, rng);
                    const auto& pool = params.attribute == Attribute::Color      ? cfg.colors
                                       : params.attribute == Attribute::Size     ? cfg.sizes
                                       : params.attribute == Attribute::Material ? cfg.materials
                                       : scene.dataset_style == DatasetStyle::Clevr ? cfg.shapes
                                                                                    : cfg.assets;
                    std::vector<std::string> others;
                    for (const auto& v : pool) {
                        if (v != *attribute_value(obj, params.attribute)) others.push_back(v);
                    }
                    if (others.empty()) continue;
                    params.value = pick(others, rng);
                    break;
                }
                case EditOp::Add:
                    params.new_object = random_object(obj_cfg, rng);
                    params.direction = pick(std::vector<Direction>{Direction::Left, Direction::Right,
                                                                   Direction::Front, Direction::Behind},
                                            rng);
                    params.distance = 1.0;
                    break;
                case EditOp::Remove:
                    break;
                case EditOp::Move: {
                    const double step = draw_on_grid(0.5, 1.5, cfg.quantizer, rng);
                    std::vector<double> choices{-step, 0.0, step};
                    do {
                        params.dx = pick(choices, rng);
                        params.dy = pick(choices, rng);
                    } while (params.dx == 0.0 && params.dy == 0.0);
                    break;
                }
            }
            return edit_scene(scene, op, params, cfg);
        } catch (const PlacementInfeasibleError&) {
            continue;
        } catch (const AmbiguousReferenceError&) {
            continue;
        }
    }
    throw TargetNotFoundError("no applicable edit for this scene");
}

}  // namespace scenetok
