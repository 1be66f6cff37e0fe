#include <doctest.h>

#include <set>
#include <sstream>

#include "scenetok/errors.hpp"
#include "scenetok/vocabulary.hpp"

using namespace scenetok;

namespace {
const QuantizerConfig kQ = QuantizerConfig::make(0.05, -8, 8);
}

TEST_CASE("block layout") {
    const auto v = Vocabulary::standard(kQ);
    CHECK(v.base_size() == 128000);
    CHECK(v.special_count() == 20);
    CHECK(v.numeric_count() == 321);
    CHECK(v.image_codes() == 1024);
    CHECK(v.shape_codes() == 0);
    CHECK(v.total_size() == 128000 + 20 + 321 + 1024);
    CHECK(v.specials_begin() == 128000);
    CHECK(v.image_begin() == 128000 + 20 + 321);
    CHECK(v.kind(v.lookup("[SCENE-START]")) == TokenKind::Special);
    CHECK(v.lookup("[SCENE-START]") >= v.specials_begin());
    CHECK(v.lookup("[SCENE-START]") < v.numeric_begin());
}

TEST_CASE("shape codes add exactly one 8192 block") {
    const auto off = Vocabulary::standard(kQ, false);
    const auto on = Vocabulary::standard(kQ, true);
    CHECK(on.total_size() - off.total_size() == 8192);
    CHECK(on.lookup(ShapeCode{0}) == on.shape_begin());
    CHECK(on.lookup(ImageCode{0}) != on.lookup(ShapeCode{0}));
    CHECK_THROWS_AS(off.lookup(ShapeCode{0}), UnknownTokenError);
    CHECK_THROWS_AS(on.lookup(ShapeCode{8192}), UnknownTokenError);
}

TEST_CASE("image block is contiguous") {
    const auto v = Vocabulary::standard(kQ);
    for (std::uint32_t c = 0; c < 1024; ++c) {
        REQUIRE(v.lookup(ImageCode{c}) == v.image_begin() + c);
        REQUIRE(v.image_code_of(v.image_begin() + c) == c);
    }
    CHECK_THROWS_AS(v.lookup(ImageCode{1024}), UnknownTokenError);
    CHECK_THROWS_AS(v.image_code_of(v.numeric_begin()), UnknownTokenError);
}

TEST_CASE("id and token are a bijection over the whole space") {
    const auto v = Vocabulary::standard(kQ, true);
    for (TokenId id = 0; id < v.total_size(); ++id) {
        REQUIRE(v.lookup(v.id_to_token(id)) == id);
    }
    CHECK_THROWS_AS(v.id_to_token(static_cast<TokenId>(v.total_size())), UnknownTokenError);
    CHECK_THROWS_AS(v.lookup("definitely-not-a-token"), UnknownTokenError);
}

TEST_CASE("a single-point numeric range yields one numeric token") {
    const auto v = Vocabulary::standard(QuantizerConfig::make(0.05, 0, 0));
    CHECK(v.numeric_count() == 1);
    CHECK(v.id_to_token(v.numeric_begin()) == "0.00");
}

TEST_CASE("duplicates and missing markers are rejected") {
    auto specials = default_specials();
    specials.push_back("[SCENE-START]");
    CHECK_THROWS_AS(Vocabulary::build(kQ, specials, 1024, false), DuplicateTokenError);
    auto words = default_words();
    words.push_back("cube");
    CHECK_THROWS_AS(Vocabulary::build(kQ, default_specials(), 1024, false, words), DuplicateTokenError);
    auto missing = default_specials();
    missing.pop_back();
    CHECK_THROWS_AS(Vocabulary::build(kQ, missing, 1024, false), ConfigError);
    // Integer granularity would print numbers that collide with the number words.
    CHECK_THROWS_AS(Vocabulary::standard(QuantizerConfig::make(1, -8, 8)), DuplicateTokenError);
}

TEST_CASE("encode and decode") {
    const auto v = Vocabulary::standard(kQ);
    std::vector<std::string> toks{"[SCENE-START]", "cube", "-0.55", "<img_7>", "[SCENE-END]"};
    auto ids = v.encode(toks);
    CHECK(v.decode(ids) == toks);
    CHECK(v.kind(ids[1]) == TokenKind::Text);
    CHECK(v.kind(ids[2]) == TokenKind::Numeric);
    CHECK(v.kind(ids[3]) == TokenKind::Image);
    CHECK(v.id_to_token(127999) == "<text_127999>");
}

TEST_CASE("split_words peels punctuation") {
    CHECK(split_words("What size is the rubber sphere?") ==
          std::vector<std::string>{"What", "size", "is", "the", "rubber", "sphere", "?"});
    CHECK(split_words("  a,  b. ") == std::vector<std::string>{"a", ",", "b", "."});
    CHECK(split_words("").empty());
}

TEST_CASE("manifest round trip") {
    auto words = default_words();
    words.push_back("giraffe");
    const auto v = Vocabulary::build(QuantizerConfig::make(0.01, -10, 10), default_specials(), 1024, true, words);
    std::stringstream ss;
    v.write_manifest(ss);
    const auto r = Vocabulary::read_manifest(ss);
    CHECK(r.total_size() == v.total_size());
    CHECK(r.quantizer() == v.quantizer());
    CHECK(r.words() == v.words());
    for (TokenId id : {0u, 100u, 128000u, 128019u, 128020u, 130000u, static_cast<TokenId>(v.total_size() - 1)}) {
        REQUIRE(r.id_to_token(id) == v.id_to_token(id));
    }
    std::stringstream bad("not a manifest\n");
    CHECK_THROWS_AS(Vocabulary::read_manifest(bad), SchemaError);
}
