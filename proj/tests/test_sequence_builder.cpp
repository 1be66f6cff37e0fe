#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "scenetok/errors.hpp"
#include "scenetok/sequence_builder.hpp"
#include "scenetok/serializer.hpp"
#include "support.hpp"

using namespace scenetok;

namespace {

const QuantizerConfig kQ = QuantizerConfig::make(0.05, -8, 8);

std::vector<std::uint32_t> ramp(std::uint32_t offset = 0) {
    std::vector<std::uint32_t> img(256);
    for (std::uint32_t i = 0; i < 256; ++i) img[i] = (i * 7 + offset) % 1024;
    return img;
}

Scene seven_objects() {
    Scene s;
    for (int i = 0; i < 7; ++i) {
        s.objects.push_back(testsupport::clevr("large", "gray", "metal", "cube", {-3.0 + i, 1.0, 0.70}));
    }
    return s;
}

void check_default_weights(const TaskSequence& seq, const Vocabulary& v) {
    validate_sequence(seq, v);
    const auto payload = testsupport::target_image_payload(seq, v);
    for (std::size_t i = 0; i < seq.ids.size(); ++i) {
        const bool head = std::find(payload.begin(), payload.begin() + std::min<std::size_t>(5, payload.size()), i) !=
                          payload.begin() + std::min<std::size_t>(5, payload.size());
        const double expected = seq.roles[i] == Role::Context ? 0.0 : head ? 10.0 : 1.0;
        REQUIRE(seq.weights[i] == expected);
    }
}

}  // namespace

TEST_CASE("rendering layout") {
    const auto v = Vocabulary::standard(kQ);
    SequenceBuilder b(v);
    const auto scene = seven_objects();
    auto seq = b.rendering(scene, ramp());
    // [BOS] + scene (14*7+2) + [OUTPUT-SEP] + image (256+2) + [EOS]
    CHECK(seq.ids.size() == 1 + 100 + 1 + 258 + 1);
    CHECK(seq.ids.front() == v.lookup("[BOS]"));
    CHECK(seq.ids[101] == v.lookup("[OUTPUT-SEP]"));
    CHECK(seq.ids.back() == v.lookup("[EOS]"));
    for (std::size_t i = 1; i <= 100; ++i) REQUIRE(seq.roles[i] == Role::Context);
    for (std::size_t i = 102; i < seq.ids.size(); ++i) REQUIRE(seq.roles[i] == Role::Target);
    check_default_weights(seq, v);

    auto blocks = decompose(seq, v);
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0].kind == BlockKind::Scene);
    CHECK(blocks[1].kind == BlockKind::Image);
    CHECK(b.image_payload(blocks[1]) == ramp());
    CHECK(parse_scene_ids(blocks[0].ids, v, ParseMode::Strict).scene == scene);
}

TEST_CASE("center reordering of image payloads") {
    const auto v = Vocabulary::standard(kQ);
    BuildOptions opts;
    opts.center_reorder = true;
    SequenceBuilder b(v, opts);
    auto seq = b.rendering(Scene{}, ramp());
    auto blocks = decompose(seq, v);
    const auto img = ramp();
    const auto expected = apply<std::uint32_t>(center_plan(256), img);
    for (std::size_t k = 0; k < 256; ++k) REQUIRE(v.image_code_of(blocks[1].ids[k + 1]) == expected[k]);
    CHECK(b.image_payload(blocks[1]) == img);
    check_default_weights(seq, v);
}

TEST_CASE("recognition layout") {
    const auto v = Vocabulary::standard(kQ);
    SequenceBuilder b(v);
    const auto scene = testsupport::listing_clevr_scene();
    auto seq = b.recognition(ramp(), scene);
    auto blocks = decompose(seq, v);
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0].kind == BlockKind::Image);
    CHECK(blocks[0].role == Role::Context);
    CHECK(blocks[1].ids == serialize_scene_ids(scene, v));
    CHECK(blocks[1].role == Role::Target);
    check_default_weights(seq, v);
    CHECK(std::count(seq.weights.begin(), seq.weights.end(), 10.0) == 0);

    auto empty = b.recognition(ramp(), Scene{});
    CHECK(decompose(empty, v)[1].ids.size() == 2);
}

TEST_CASE("instruction layout and modality order") {
    const auto v = Vocabulary::standard(kQ);
    SequenceBuilder b(v);
    const auto scene = testsupport::listing_clevr_scene();
    auto edited = scene;
    edited.objects[0].color = "purple";
    const char* text = "Change the cyan object to have purple color";
    auto img_first = b.instruction(ramp(), scene, text, ramp(3), edited, ModalityOrder::ImageFirst);
    auto scene_first = b.instruction(ramp(), scene, text, ramp(3), edited, ModalityOrder::SceneFirst);
    CHECK(img_first.ids[1] == v.lookup("[IMAGE-START]"));
    CHECK(scene_first.ids[1] == v.lookup("[SCENE-START]"));
    auto a = img_first.ids, c = scene_first.ids;
    std::sort(a.begin(), a.end());
    std::sort(c.begin(), c.end());
    CHECK(a == c);
    check_default_weights(img_first, v);
    check_default_weights(scene_first, v);

    auto blocks = decompose(img_first, v);
    REQUIRE(blocks.size() == 5);
    CHECK(blocks[2].kind == BlockKind::Text);
    CHECK(blocks[3].kind == BlockKind::Image);
    CHECK(blocks[3].role == Role::Target);
    CHECK(parse_scene_ids(blocks[4].ids, v, ParseMode::Strict).scene == edited);
    CHECK_THROWS_AS(b.instruction(ramp(), scene, "   ", ramp(), edited), SchemaError);
}

TEST_CASE("QA layout") {
    const auto v = Vocabulary::standard(kQ);
    SequenceBuilder b(v);
    const auto scene = testsupport::listing_clevr_scene();
    auto seq = b.qa(ramp(), scene, "What size is the metal cube?", "large");
    auto blocks = decompose(seq, v);
    REQUIRE(blocks.size() == 4);
    CHECK(blocks[2].kind == BlockKind::Text);
    CHECK(blocks[2].ids.front() == v.lookup("[TEXT-START]"));
    CHECK(blocks[2].ids.back() == v.lookup("[TEXT-END]"));
    CHECK(blocks[3].ids.size() == 1 + 2);
    check_default_weights(seq, v);

    auto no_scene = b.qa(ramp(), scene, "Is there a cube?", "True", false);
    auto nb = decompose(no_scene, v);
    REQUIRE(nb.size() == 3);
    CHECK(std::none_of(nb.begin(), nb.end(), [](const auto& blk) { return blk.kind == BlockKind::Scene; }));

    auto two_words = b.qa(ramp(), scene, "What is the large object?", "metal cube");
    CHECK(decompose(two_words, v).back().ids.size() == 2 + 2);
    CHECK_THROWS_AS(b.qa(ramp(), scene, "What?", "a big cube"), SchemaError);
    CHECK_THROWS_AS(b.qa(ramp(), scene, "What?", ""), SchemaError);
}

TEST_CASE("loss weight parameters") {
    const auto v = Vocabulary::standard(kQ);
    BuildOptions opts;
    opts.image_head_length = 0;
    auto seq = SequenceBuilder(v, opts).rendering(Scene{}, ramp());
    for (std::size_t i = 0; i < seq.ids.size(); ++i) REQUIRE(seq.weights[i] == (seq.roles[i] == Role::Target ? 1.0 : 0.0));

    auto custom = loss_weights(seq, v, 3.0, 2, 0.5);
    const auto payload = testsupport::target_image_payload(custom, v);
    CHECK(custom.weights[payload[0]] == 3.0);
    CHECK(custom.weights[payload[1]] == 3.0);
    CHECK(custom.weights[payload[2]] == 1.0);
    CHECK(custom.weights[0] == 0.5);
    CHECK_THROWS_AS(loss_weights(seq, v, 0.0, 5), ConfigError);
}

TEST_CASE("image length is enforced") {
    const auto v = Vocabulary::standard(kQ);
    SequenceBuilder b(v);
    CHECK_THROWS_AS(b.rendering(Scene{}, std::vector<std::uint32_t>(255, 0)), ImageLengthError);
    CHECK_THROWS_AS(b.rendering(Scene{}, std::vector<std::uint32_t>(256, 1024)), UnknownTokenError);
    BuildOptions small;
    small.image_length = 16;
    CHECK(SequenceBuilder(v, small).rendering(Scene{}, std::vector<std::uint32_t>(16, 1)).ids.size() == 1 + 2 + 1 + 18 + 1);
}

TEST_CASE("sequence validation") {
    const auto v = Vocabulary::standard(kQ);
    auto seq = SequenceBuilder(v).rendering(Scene{}, ramp());
    auto bad = seq;
    bad.roles[1] = Role::Target;
    CHECK_THROWS_AS(validate_sequence(bad, v), SchemaError);
    bad = seq;
    bad.ids.insert(bad.ids.begin() + 2, v.lookup("[OUTPUT-SEP]"));
    bad.roles.insert(bad.roles.begin() + 2, Role::Context);
    bad.weights.insert(bad.weights.begin() + 2, 0.0);
    CHECK_THROWS_AS(validate_sequence(bad, v), SchemaError);
    bad = seq;
    bad.ids.pop_back();
    CHECK_THROWS_AS(validate_sequence(bad, v), SchemaError);
}
