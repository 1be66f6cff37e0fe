#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace scenetok {

using Vec3 = std::array<double, 3>;

inline constexpr std::size_t kShapeCodesPerObject = 512;
inline constexpr std::uint32_t kShapeCodebookSize = 8192;

enum class DatasetStyle { Clevr, ObjaWorld, ObjaWorldShapes, Objectron, ArkitScenes };

std::string_view style_name(DatasetStyle style);
// Accepts the names produced by style_name; throws SchemaError otherwise.
DatasetStyle parse_style(std::string_view name);

// One object of the structured 3D modality. Which fields are present decides
// the dataset style; absent fields stay absent and are never defaulted.
struct SceneObject {
    std::optional<std::string> size;
    std::optional<std::string> color;
    std::optional<std::string> material;
    std::optional<std::string> shape;
    std::optional<std::vector<std::uint32_t>> shape_codes;
    std::optional<std::string> category;
    std::optional<Vec3> location;
    std::optional<Vec3> pose;
    std::optional<Vec3> center_cam;
    std::optional<Vec3> dimensions;

    bool operator==(const SceneObject&) const = default;
};

struct Scene {
    DatasetStyle dataset_style = DatasetStyle::Clevr;
    std::vector<SceneObject> objects;

    bool operator==(const Scene&) const = default;
};

enum class Attribute { Size, Color, Material, Shape, Category };

std::string_view attribute_name(Attribute attribute);
// Word-valued attribute of an object (absent when the object lacks it).
const std::optional<std::string>& attribute_value(const SceneObject& object, Attribute attribute);
std::optional<std::string>& attribute_value(SceneObject& object, Attribute attribute);

enum class AnswerType { Bool, Number, Shape, Color, Material, Size };

std::string_view answer_type_name(AnswerType type);
AnswerType parse_answer_type(std::string_view name);

struct QAItem {
    std::string question;
    std::string answer;
    AnswerType answer_type = AnswerType::Bool;
};

// Style the object's field set belongs to. Objectron and ARKitScenes share a
// field set, so category objects report Objectron here.
DatasetStyle infer_object_style(const SceneObject& object);

// Throws SchemaError if the object does not carry exactly the fields of `style`.
void validate_object(const SceneObject& object, DatasetStyle style);
void validate_scene(const Scene& scene);

// The coordinate triple used for spatial matching (location or center_cam).
const Vec3& object_coords(const SceneObject& object);

Scene scene_from_json(const nlohmann::json& doc);
Scene scene_from_json_text(std::string_view text);
nlohmann::json scene_to_json(const Scene& scene);

QAItem qa_item_from_json(const nlohmann::json& doc);
nlohmann::json qa_item_to_json(const QAItem& item);

}  // namespace scenetok
