#include "scenetok/scene.hpp"

#include <cmath>

#include "scenetok/errors.hpp"

namespace scenetok {

namespace {

using nlohmann::json;

struct StyleName {
    DatasetStyle style;
    std::string_view name;
};

constexpr std::array<StyleName, 5> kStyleNames{{
    {DatasetStyle::Clevr, "clevr"},
    {DatasetStyle::ObjaWorld, "objaworld"},
    {DatasetStyle::ObjaWorldShapes, "objaworld_shapes"},
    {DatasetStyle::Objectron, "objectron"},
    {DatasetStyle::ArkitScenes, "arkitscenes"},
}};

constexpr std::array<std::string_view, 10> kObjectKeys{
    "size", "color", "material", "shape", "shape_codes",
    "category", "location", "pose", "center_cam", "dimensions",
};

bool same_family(DatasetStyle a, DatasetStyle b) {
    auto family = [](DatasetStyle s) {
        return s == DatasetStyle::ArkitScenes ? DatasetStyle::Objectron : s;
    };
    return family(a) == family(b);
}

std::optional<std::string> read_word(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_string()) throw SchemaError(std::string("field '") + key + "' must be a string");
    auto value = it->get<std::string>();
    if (value.empty() || value.find_first_of(" \t\r\n") != std::string::npos) {
        throw SchemaError(std::string("field '") + key + "' must be a single non-empty word");
    }
    return value;
}

std::optional<Vec3> read_vec3(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_array() || it->size() != 3) {
        throw SchemaError(std::string("field '") + key + "' must be an array of 3 numbers");
    }
    Vec3 v{};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& e = (*it)[i];
        if (!e.is_number()) throw SchemaError(std::string("field '") + key + "' has a non-numeric entry");
        v[i] = e.get<double>();
        if (!std::isfinite(v[i])) throw NonFiniteError(std::string("field '") + key + "' is not finite");
    }
    return v;
}

std::optional<std::vector<std::uint32_t>> read_codes(const json& obj) {
    auto it = obj.find("shape_codes");
    if (it == obj.end()) return std::nullopt;
    if (!it->is_array()) throw SchemaError("field 'shape_codes' must be an array");
    std::vector<std::uint32_t> codes;
    codes.reserve(it->size());
    for (const auto& e : *it) {
        if (!e.is_number_integer()) throw SchemaError("shape code must be an integer");
        auto v = e.get<std::int64_t>();
        if (v < 0 || v >= static_cast<std::int64_t>(kShapeCodebookSize)) {
            throw SchemaError("shape code " + std::to_string(v) + " outside [0, 8191]");
        }
        codes.push_back(static_cast<std::uint32_t>(v));
    }
    return codes;
}

SceneObject object_from_json(const json& obj) {
    if (!obj.is_object()) throw SchemaError("scene object must be a JSON object");
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (auto k : kObjectKeys) known = known || key == k;
        if (!known) throw SchemaError("unknown object field '" + key + "'");
    }
    SceneObject o;
    o.size = read_word(obj, "size");
    o.color = read_word(obj, "color");
    o.material = read_word(obj, "material");
    o.shape = read_word(obj, "shape");
    o.shape_codes = read_codes(obj);
    o.category = read_word(obj, "category");
    o.location = read_vec3(obj, "location");
    o.pose = read_vec3(obj, "pose");
    o.center_cam = read_vec3(obj, "center_cam");
    o.dimensions = read_vec3(obj, "dimensions");
    return o;
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

}  // namespace

std::string_view style_name(DatasetStyle style) {
    for (const auto& s : kStyleNames) {
        if (s.style == style) return s.name;
    }
    return "clevr";
}

DatasetStyle parse_style(std::string_view name) {
    for (const auto& s : kStyleNames) {
        if (s.name == name) return s.style;
    }
    throw SchemaError("unknown dataset style '" + std::string(name) + "'");
}

std::string_view attribute_name(Attribute attribute) {
    switch (attribute) {
        case Attribute::Size: return "size";
        case Attribute::Color: return "color";
        case Attribute::Material: return "material";
        case Attribute::Shape: return "shape";
        case Attribute::Category: return "category";
    }
    return "shape";
}

std::optional<std::string>& attribute_value(SceneObject& o, Attribute attribute) {
    switch (attribute) {
        case Attribute::Size: return o.size;
        case Attribute::Color: return o.color;
        case Attribute::Material: return o.material;
        case Attribute::Shape: return o.shape;
        case Attribute::Category: return o.category;
    }
    return o.shape;
}

const std::optional<std::string>& attribute_value(const SceneObject& o, Attribute attribute) {
    return attribute_value(const_cast<SceneObject&>(o), attribute);
}

std::string_view answer_type_name(AnswerType type) {
    switch (type) {
        case AnswerType::Bool: return "bool";
        case AnswerType::Number: return "number";
        case AnswerType::Shape: return "shape";
        case AnswerType::Color: return "color";
        case AnswerType::Material: return "material";
        case AnswerType::Size: return "size";
    }
    return "bool";
}

AnswerType parse_answer_type(std::string_view name) {
    for (auto t : {AnswerType::Bool, AnswerType::Number, AnswerType::Shape, AnswerType::Color,
                   AnswerType::Material, AnswerType::Size}) {
        if (answer_type_name(t) == name) return t;
    }
    throw SchemaError("unknown answer type '" + std::string(name) + "'");
}

DatasetStyle infer_object_style(const SceneObject& o) {
    int identity = int(o.shape.has_value()) + int(o.shape_codes.has_value()) + int(o.category.has_value());
    if (identity != 1) {
        throw SchemaError("object must carry exactly one of shape, shape_codes, category");
    }
    if (o.shape_codes) return DatasetStyle::ObjaWorldShapes;
    if (o.category) return DatasetStyle::Objectron;
    if (o.size || o.color || o.material) return DatasetStyle::Clevr;
    return DatasetStyle::ObjaWorld;
}

void validate_object(const SceneObject& o, DatasetStyle style) {
    DatasetStyle inferred = infer_object_style(o);
    if (!same_family(inferred, style)) {
        throw StyleMixError("object of style '" + std::string(style_name(inferred)) +
                            "' in a '" + std::string(style_name(style)) + "' scene");
    }
    auto require = [&](bool present, const char* field, bool wanted) {
        if (present != wanted) {
            throw SchemaError(std::string(style_name(style)) + " object " +
                              (wanted ? "is missing '" : "must not carry '") + field + "'");
        }
    };
    const bool clevr = style == DatasetStyle::Clevr;
    const bool obja = style == DatasetStyle::ObjaWorld || style == DatasetStyle::ObjaWorldShapes;
    const bool boxed = style == DatasetStyle::Objectron || style == DatasetStyle::ArkitScenes;
    require(o.size.has_value(), "size", clevr);
    require(o.color.has_value(), "color", clevr);
    require(o.material.has_value(), "material", clevr);
    require(o.location.has_value(), "location", clevr || obja);
    require(o.pose.has_value(), "pose", obja);
    require(o.center_cam.has_value(), "center_cam", boxed);
    require(o.dimensions.has_value(), "dimensions", boxed);
    if (o.shape_codes && o.shape_codes->size() != kShapeCodesPerObject) {
        throw SchemaError("shape_codes must hold exactly 512 codes, got " +
                          std::to_string(o.shape_codes->size()));
    }
}

void validate_scene(const Scene& scene) {
    for (const auto& o : scene.objects) validate_object(o, scene.dataset_style);
}

const Vec3& object_coords(const SceneObject& o) {
    if (o.location) return *o.location;
    if (o.center_cam) return *o.center_cam;
    throw SchemaError("object has neither location nor center_cam");
}

Scene scene_from_json(const json& doc) {
    if (!doc.is_object()) throw SchemaError("scene document must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "dataset_style" && key != "objects") throw SchemaError("unknown scene field '" + key + "'");
    }
    auto objs = doc.find("objects");
    if (objs == doc.end() || !objs->is_array()) throw SchemaError("scene needs an 'objects' array");

    Scene scene;
    scene.objects.reserve(objs->size());
    for (const auto& o : *objs) scene.objects.push_back(object_from_json(o));

    std::optional<DatasetStyle> declared;
    if (auto it = doc.find("dataset_style"); it != doc.end()) {
        if (!it->is_string()) throw SchemaError("'dataset_style' must be a string");
        declared = parse_style(it->get<std::string>());
    }

    std::optional<DatasetStyle> inferred;
    for (const auto& o : scene.objects) {
        DatasetStyle s = infer_object_style(o);
        if (inferred && *inferred != s) throw StyleMixError("scene mixes object styles");
        inferred = s;
    }
    if (declared && inferred && !same_family(*declared, *inferred)) {
        throw StyleMixError("objects do not match declared style '" +
                            std::string(style_name(*declared)) + "'");
    }
    scene.dataset_style = declared.value_or(inferred.value_or(DatasetStyle::Clevr));
    validate_scene(scene);
    return scene;
}

Scene scene_from_json_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    } catch (const json::out_of_range& e) {
        // number literal too large for a double
        throw NonFiniteError(e.what());
    }
    return scene_from_json(doc);
}

json scene_to_json(const Scene& scene) {
    json objects = json::array();
    for (const auto& o : scene.objects) {
        json j = json::object();
        if (o.size) j["size"] = *o.size;
        if (o.color) j["color"] = *o.color;
        if (o.material) j["material"] = *o.material;
        if (o.shape) j["shape"] = *o.shape;
        if (o.shape_codes) j["shape_codes"] = *o.shape_codes;
        if (o.category) j["category"] = *o.category;
        if (o.location) j["location"] = vec_json(*o.location);
        if (o.pose) j["pose"] = vec_json(*o.pose);
        if (o.center_cam) j["center_cam"] = vec_json(*o.center_cam);
        if (o.dimensions) j["dimensions"] = vec_json(*o.dimensions);
        objects.push_back(std::move(j));
    }
    return json{{"dataset_style", std::string(style_name(scene.dataset_style))},
                {"objects", std::move(objects)}};
}

QAItem qa_item_from_json(const json& doc) {
    if (!doc.is_object()) throw SchemaError("QA item must be a JSON object");
    QAItem item;
    try {
        item.question = doc.at("question").get<std::string>();
        item.answer = doc.at("answer").get<std::string>();
        item.answer_type = parse_answer_type(doc.at("answer_type").get<std::string>());
    } catch (const json::exception& e) {
        throw SchemaError(std::string("bad QA item: ") + e.what());
    }
    std::size_t words = 0;
    bool in_word = false;
    for (char c : item.answer) {
        bool space = c == ' ' || c == '\t';
        if (!space && !in_word) ++words;
        in_word = !space;
    }
    if (words < 1 || words > 2) throw SchemaError("QA answer must be 1-2 words: '" + item.answer + "'");
    return item;
}

json qa_item_to_json(const QAItem& item) {
    return json{{"question", item.question},
                {"answer", item.answer},
                {"answer_type", std::string(answer_type_name(item.answer_type))}};
}

}  // namespace scenetok
