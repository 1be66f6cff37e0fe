#include <doctest.h>

#include <random>

#include "scenetok/errors.hpp"
#include "scenetok/scene_gen.hpp"
#include "scenetok/serializer.hpp"
#include "support.hpp"

using namespace scenetok;
using testsupport::split;

namespace {
const QuantizerConfig kQ = QuantizerConfig::make(0.05, -8, 8);

Scene clevr_with(std::size_t n) {
    Scene s;
    for (std::size_t i = 0; i < n; ++i) {
        s.objects.push_back(testsupport::clevr("small", "red", "rubber", "cube", {0.5 * double(i), -1.0, 0.35}));
    }
    return s;
}
}  // namespace

TEST_CASE("reference CLEVR listing is reproduced token for token") {
    const auto tokens = serialize_scene(testsupport::listing_clevr_scene(), kQ);
    CHECK(tokens == split(testsupport::kListingClevrTokens));
    auto parsed = parse_scene(tokens, kQ, ParseMode::Strict);
    CHECK(parsed.diagnostics.empty());
    CHECK(parsed.scene == testsupport::listing_clevr_scene());
}

TEST_CASE("reference ObjaWorld listing parses with poses intact") {
    const auto tokens = split(testsupport::kListingObjaTokens);
    auto r = parse_scene(tokens, kQ, ParseMode::Strict);
    CHECK(r.scene.dataset_style == DatasetStyle::ObjaWorld);
    REQUIRE(r.scene.objects.size() == 5);
    CHECK(r.scene.objects[0].pose == Vec3{0.0, 0.0, -0.10});
    CHECK(r.scene.objects[2].pose == Vec3{0.0, 0.0, -2.55});
    CHECK(r.scene.objects[4].location == Vec3{0.40, 2.75, 0.30});
    CHECK(serialize_scene(r.scene, kQ) == tokens);
}

TEST_CASE("reference Objectron listing") {
    const auto q = QuantizerConfig::for_style(DatasetStyle::Objectron);
    const auto tokens = split(testsupport::kListingObjectronTokens);
    auto r = parse_scene(tokens, q, ParseMode::Strict);
    CHECK(r.scene.dataset_style == DatasetStyle::Objectron);
    REQUIRE(r.scene.objects.size() == 1);
    CHECK(*r.scene.objects[0].category == "bicycle");
    CHECK(r.scene.objects[0].dimensions == Vec3{0.60, 1.10, 1.00});
    auto arkit = parse_scene(tokens, q, ParseMode::Strict, DatasetStyle::ArkitScenes);
    CHECK(arkit.scene.dataset_style == DatasetStyle::ArkitScenes);
    CHECK(serialize_scene(r.scene, q) == tokens);
}

TEST_CASE("scene length grows linearly with object count") {
    // Counted from the listing: [OBJECT-START] + 4 x (marker, word) + [LOCATION] + 3 numbers + [OBJECT-END].
    const std::size_t per_object = 1 + 4 * 2 + 1 + 3 + 1;
    CHECK(object_token_count(DatasetStyle::Clevr) == per_object);
    for (std::size_t n = 0; n <= 10; ++n) {
        CAPTURE(n);
        CHECK(serialize_scene(clevr_with(n), kQ).size() == per_object * n + 2);
    }
    CHECK(serialize_scene(Scene{}, kQ) == std::vector<std::string>{"[SCENE-START]", "[SCENE-END]"});
    CHECK(object_token_count(DatasetStyle::ObjaWorld) == 12);
    CHECK(object_token_count(DatasetStyle::ObjaWorldShapes) == 523);
    CHECK(object_token_count(DatasetStyle::Objectron) == 12);
}

TEST_CASE("mean sequence length") {
    std::vector<Scene> uniform;
    for (std::size_t n = 3; n <= 10; ++n) uniform.push_back(clevr_with(n));
    CHECK(mean_sequence_length(uniform, kQ) == doctest::Approx(14 * 6.5 + 2));
    CHECK(serialize_scene(clevr_with(7), kQ).size() == 100);
    std::vector<Scene> empties(4);
    CHECK(mean_sequence_length(empties, kQ) == 2.0);
    CHECK_THROWS_AS(mean_sequence_length({}, kQ), EmptyInputError);
}

TEST_CASE("fragmenting baseline") {
    CHECK(fragment_token("-0.55") == std::vector<std::string>{"-", "0", ".", "55"});
    CHECK(fragment_token("2.00") == std::vector<std::string>{"2", ".", "00"});
    CHECK(fragment_token("[OBJECT-START]") == std::vector<std::string>{"[", "OBJECT", "-", "START", "]"});
    CHECK(fragment_token("[CENTER_CAM]") == std::vector<std::string>{"[", "CENTER", "_", "CAM", "]"});
    CHECK(fragment_token("cube") == std::vector<std::string>{"cube"});

    GenConfig cfg;
    cfg.seed = 3;
    auto corpus = generate_corpus(cfg, 200);
    const double ratio = fragmenting_baseline_length(corpus, kQ) / mean_sequence_length(corpus, kQ);
    CHECK(ratio >= 2.0);
    CHECK(ratio <= 4.0);
}

TEST_CASE("shape-code objects") {
    Scene s;
    s.dataset_style = DatasetStyle::ObjaWorldShapes;
    SceneObject o;
    std::vector<std::uint32_t> codes(512);
    for (std::uint32_t i = 0; i < 512; ++i) codes[i] = (i * 37) % 8192;
    o.shape_codes = codes;
    o.location = Vec3{-0.15, 1.05, 0.00};
    o.pose = Vec3{0.00, 0.00, 3.00};
    s.objects = {o};
    auto tokens = serialize_scene(s, kQ);
    CHECK(tokens.size() == 523 + 2);
    CHECK(tokens[2] == "[SHAPE]");
    CHECK(tokens[3] == "<shape_0>");
    CHECK(tokens[3 + 512] == "[LOCATION]");
    CHECK(parse_scene(tokens, kQ, ParseMode::Strict).scene == s);

    s.objects[0].shape_codes->pop_back();
    CHECK_THROWS_AS(serialize_scene(s, kQ), ShapeCodeLengthError);
}

TEST_CASE("round trip on generated scenes of every generator style") {
    for (auto style : {DatasetStyle::Clevr, DatasetStyle::ObjaWorld, DatasetStyle::ObjaWorldShapes}) {
        GenConfig cfg;
        cfg.style = style;
        cfg.seed = 17;
        for (const auto& s : generate_corpus(cfg, 50)) {
            auto r = parse_scene(serialize_scene(s, kQ), kQ, ParseMode::Strict, style);
            REQUIRE(r.scene == s);
        }
    }
}

TEST_CASE("off-grid coordinates round trip to their snapped value") {
    Scene s = testsupport::listing_clevr_scene();
    s.objects[0].location = Vec3{-0.5512, 0.049, 0.7};
    auto r = parse_scene(serialize_scene(s, kQ), kQ, ParseMode::Strict);
    CHECK(r.scene.objects[0].location == Vec3{-0.55, 0.05, 0.70});
}

TEST_CASE("strict parse rejects malformed input") {
    auto tokens = split(testsupport::kListingClevrTokens);
    auto bad = tokens;
    bad[4] = "[MATERIAL]";
    CHECK_THROWS_AS(parse_scene(bad, kQ, ParseMode::Strict), GrammarError);
    try {
        parse_scene(bad, kQ, ParseMode::Strict);
    } catch (const GrammarError& e) {
        CHECK(e.position() == 4);
    }
    auto truncated = std::vector<std::string>(tokens.begin(), tokens.begin() + 20);
    CHECK_THROWS_AS(parse_scene(truncated, kQ, ParseMode::Strict), GrammarError);
    auto off_grid = tokens;
    off_grid[12] = "-0.56";
    CHECK_THROWS_AS(parse_scene(off_grid, kQ, ParseMode::Strict), GrammarError);
    auto trailing = tokens;
    trailing.push_back("cube");
    CHECK_THROWS_AS(parse_scene(trailing, kQ, ParseMode::Strict), GrammarError);
    CHECK_THROWS_AS(parse_scene(std::vector<std::string>{}, kQ, ParseMode::Strict), GrammarError);
}

TEST_CASE("lenient parse keeps complete objects on truncation") {
    auto tokens = split(testsupport::kListingClevrTokens);
    auto truncated = std::vector<std::string>(tokens.begin(), tokens.begin() + 20);
    auto r = parse_scene(truncated, kQ, ParseMode::Lenient);
    REQUIRE(r.scene.objects.size() == 1);
    CHECK(r.scene.objects[0] == testsupport::listing_clevr_scene().objects[0]);
    CHECK(r.diagnostics.size() == 1);
}

TEST_CASE("lenient parse skips a broken block and resyncs") {
    auto tokens = split(testsupport::kListingClevrTokens);
    tokens[3] = "huge?";  // still a word; keep the block valid
    tokens[4] = "[MATERIAL]";
    auto r = parse_scene(tokens, kQ, ParseMode::Lenient);
    REQUIRE(r.scene.objects.size() == 1);
    CHECK(*r.scene.objects[0].color == "yellow");
    CHECK(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].position == 4);

    auto unclosed = split(testsupport::kListingClevrTokens);
    unclosed.pop_back();
    auto u = parse_scene(unclosed, kQ, ParseMode::Lenient);
    CHECK(u.scene.objects.size() == 2);
    CHECK(u.diagnostics.size() == 1);
}

TEST_CASE("lenient parse drops objects of a foreign style") {
    auto clevr = split(testsupport::kListingClevrTokens);
    auto obja = split(testsupport::kListingObjaTokens);
    std::vector<std::string> mixed(clevr.begin(), clevr.end() - 1);
    mixed.insert(mixed.end(), obja.begin() + 1, obja.begin() + 13);
    mixed.push_back("[SCENE-END]");
    auto r = parse_scene(mixed, kQ, ParseMode::Lenient);
    CHECK(r.scene.objects.size() == 2);
    CHECK(r.diagnostics.size() == 1);
    CHECK_THROWS_AS(parse_scene(mixed, kQ, ParseMode::Strict), GrammarError);
}

TEST_CASE("ID level wrappers") {
    const auto vocab = Vocabulary::standard(kQ);
    auto ids = serialize_scene_ids(testsupport::listing_clevr_scene(), vocab);
    CHECK(ids.size() == 30);
    CHECK(ids.front() == vocab.lookup("[SCENE-START]"));
    CHECK(parse_scene_ids(ids, vocab, ParseMode::Strict).scene == testsupport::listing_clevr_scene());
    ids[5] = static_cast<TokenId>(vocab.total_size() + 5);
    CHECK_THROWS_AS(parse_scene_ids(ids, vocab, ParseMode::Strict), GrammarError);
    auto lenient = parse_scene_ids(ids, vocab, ParseMode::Lenient);
    CHECK(lenient.scene.objects.size() == 1);
}

TEST_CASE("batch serialization matches the serial path") {
    GenConfig cfg;
    cfg.seed = 99;
    auto corpus = generate_corpus(cfg, 300);
    CHECK(serialize_batch(corpus, kQ) == serialize_batch_serial(corpus, kQ));
}
