#include "scenetok/serializer.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <unordered_set>

#include "scenetok/errors.hpp"
#include "scenetok/parallel.hpp"

namespace scenetok {

namespace {

namespace mk = markers;

void push_vec(TokenString& out, std::string_view marker, const Vec3& v, const QuantizerConfig& cfg) {
    out.emplace_back(marker);
    for (double x : v) out.push_back(quantize(x, cfg));
}

void serialize_object(const SceneObject& o, DatasetStyle style, const QuantizerConfig& cfg, TokenString& out) {
    if (o.shape_codes && o.shape_codes->size() != kShapeCodesPerObject) {
        throw ShapeCodeLengthError("object carries " + std::to_string(o.shape_codes->size()) +
                                   " shape codes, expected 512");
    }
    validate_object(o, style);
    out.emplace_back(mk::kObjectStart);
    switch (style) {
        case DatasetStyle::Clevr:
            out.emplace_back(mk::kSize);
            out.push_back(*o.size);
            out.emplace_back(mk::kColor);
            out.push_back(*o.color);
            out.emplace_back(mk::kMaterial);
            out.push_back(*o.material);
            out.emplace_back(mk::kShape);
            out.push_back(*o.shape);
            push_vec(out, mk::kLocation, *o.location, cfg);
            break;
        case DatasetStyle::ObjaWorld:
        case DatasetStyle::ObjaWorldShapes:
            out.emplace_back(mk::kShape);
            if (o.shape_codes) {
                for (auto c : *o.shape_codes) out.push_back(shape_code_token(c));
            } else {
                out.push_back(*o.shape);
            }
            push_vec(out, mk::kLocation, *o.location, cfg);
            push_vec(out, mk::kPose, *o.pose, cfg);
            break;
        case DatasetStyle::Objectron:
        case DatasetStyle::ArkitScenes:
            out.emplace_back(mk::kCategory);
            out.push_back(*o.category);
            push_vec(out, mk::kCenterCam, *o.center_cam, cfg);
            push_vec(out, mk::kDimensions, *o.dimensions, cfg);
            break;
    }
    out.emplace_back(mk::kObjectEnd);
}

const std::unordered_set<std::string>& marker_set() {
    static const std::unordered_set<std::string> set = [] {
        auto v = default_specials();
        return std::unordered_set<std::string>(v.begin(), v.end());
    }();
    return set;
}

bool is_marker(const std::string& t) { return marker_set().count(t) != 0; }

std::optional<std::uint32_t> parse_shape_code(std::string_view t) {
    constexpr std::string_view prefix = "<shape_";
    if (t.size() <= prefix.size() + 1 || t.substr(0, prefix.size()) != prefix || t.back() != '>') return std::nullopt;
    auto digits = t.substr(prefix.size(), t.size() - prefix.size() - 1);
    if (digits.size() > 1 && digits[0] == '0') return std::nullopt;
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || v >= kShapeCodebookSize) return std::nullopt;
    return v;
}

bool is_coded(const std::string& t) { return t.size() > 2 && t.front() == '<' && t.back() == '>'; }

// Failure inside one object block; `position` is where the grammar broke.
struct BlockError {
    std::size_t position;
    std::string message;
    bool truncated;
};

class Cursor {
public:
    Cursor(std::span<const std::string> tokens, const QuantizerConfig& cfg) : tokens_(tokens), cfg_(cfg) {}

    bool at_end() const { return pos_ >= tokens_.size(); }
    std::size_t pos() const { return pos_; }
    void seek(std::size_t p) { pos_ = p; }
    const std::string& peek() const { return tokens_[pos_]; }
    bool peek_is(std::string_view t) const { return !at_end() && tokens_[pos_] == t; }

    void expect(std::string_view marker) {
        need(std::string("expected ") + std::string(marker));
        if (tokens_[pos_] != marker) fail("expected " + std::string(marker) + ", found '" + tokens_[pos_] + "'");
        ++pos_;
    }

    std::string word() {
        need("expected a word");
        const auto& t = tokens_[pos_];
        if (is_marker(t) || is_coded(t) || is_numeric(t)) fail("expected a word, found '" + t + "'");
        ++pos_;
        return t;
    }

    double number() {
        need("expected a number");
        const auto& t = tokens_[pos_];
        if (!is_numeric(t)) fail("expected a numeric token, found '" + t + "'");
        ++pos_;
        return dequantize(t, cfg_);
    }

    Vec3 vec() { return Vec3{number(), number(), number()}; }

    std::uint32_t shape_code() {
        need("expected a shape code");
        auto code = parse_shape_code(tokens_[pos_]);
        if (!code) fail("expected a shape code, found '" + tokens_[pos_] + "'");
        ++pos_;
        return *code;
    }

    [[noreturn]] void fail(std::string message) const { throw BlockError{pos_, std::move(message), false}; }

private:
    void need(const std::string& what) const {
        if (at_end()) throw BlockError{pos_, "unexpected end of input: " + what, true};
    }
    bool is_numeric(const std::string& t) const {
        try {
            token_step(t, cfg_);
            return true;
        } catch (const UnknownTokenError&) {
            return false;
        }
    }

    std::span<const std::string> tokens_;
    const QuantizerConfig& cfg_;
    std::size_t pos_ = 0;
};

// Parses one object block starting at [OBJECT-START].
std::pair<SceneObject, DatasetStyle> parse_object(Cursor& c) {
    c.expect(mk::kObjectStart);
    SceneObject o;
    DatasetStyle style;
    if (c.peek_is(mk::kSize)) {
        style = DatasetStyle::Clevr;
        c.expect(mk::kSize);
        o.size = c.word();
        c.expect(mk::kColor);
        o.color = c.word();
        c.expect(mk::kMaterial);
        o.material = c.word();
        c.expect(mk::kShape);
        o.shape = c.word();
        c.expect(mk::kLocation);
        o.location = c.vec();
    } else if (c.peek_is(mk::kShape)) {
        c.expect(mk::kShape);
        if (!c.at_end() && parse_shape_code(c.peek())) {
            style = DatasetStyle::ObjaWorldShapes;
            std::vector<std::uint32_t> codes;
            codes.reserve(kShapeCodesPerObject);
            for (std::size_t i = 0; i < kShapeCodesPerObject; ++i) codes.push_back(c.shape_code());
            o.shape_codes = std::move(codes);
        } else {
            style = DatasetStyle::ObjaWorld;
            o.shape = c.word();
        }
        c.expect(mk::kLocation);
        o.location = c.vec();
        c.expect(mk::kPose);
        o.pose = c.vec();
    } else if (c.peek_is(mk::kCategory)) {
        style = DatasetStyle::Objectron;
        c.expect(mk::kCategory);
        o.category = c.word();
        c.expect(mk::kCenterCam);
        o.center_cam = c.vec();
        c.expect(mk::kDimensions);
        o.dimensions = c.vec();
    } else {
        c.expect(mk::kSize);  // reports the unexpected token (or truncation)
        style = DatasetStyle::Clevr;
    }
    c.expect(mk::kObjectEnd);
    return {std::move(o), style};
}

bool same_family(DatasetStyle a, DatasetStyle b) {
    auto f = [](DatasetStyle s) { return s == DatasetStyle::ArkitScenes ? DatasetStyle::Objectron : s; };
    return f(a) == f(b);
}

}  // namespace

std::size_t object_token_count(DatasetStyle style) {
    switch (style) {
        case DatasetStyle::Clevr: return 14;
        case DatasetStyle::ObjaWorld: return 12;
        case DatasetStyle::ObjaWorldShapes: return 11 + kShapeCodesPerObject;
        case DatasetStyle::Objectron:
        case DatasetStyle::ArkitScenes: return 12;
    }
    return 0;
}

TokenString serialize_scene(const Scene& scene, const QuantizerConfig& cfg) {
    TokenString out;
    out.reserve(2 + scene.objects.size() * object_token_count(scene.dataset_style));
    out.emplace_back(mk::kSceneStart);
    for (const auto& o : scene.objects) serialize_object(o, scene.dataset_style, cfg, out);
    out.emplace_back(mk::kSceneEnd);
    return out;
}

ParseResult parse_scene(std::span<const std::string> tokens, const QuantizerConfig& cfg, ParseMode mode,
                        std::optional<DatasetStyle> style) {
    const bool strict = mode == ParseMode::Strict;
    ParseResult result;
    std::optional<DatasetStyle> scene_style = style;
    Cursor c(tokens, cfg);

    auto report = [&](std::size_t pos, std::string msg) {
        if (strict) throw GrammarError(pos, msg);
        result.diagnostics.push_back({pos, std::move(msg)});
    };
    // Lenient resync: next [OBJECT-START] or [SCENE-END] at or after `from`.
    auto resync = [&](std::size_t from) {
        c.seek(from);
        while (!c.at_end() && !c.peek_is(mk::kObjectStart) && !c.peek_is(mk::kSceneEnd)) c.seek(c.pos() + 1);
    };

    if (c.peek_is(mk::kSceneStart)) {
        c.seek(1);
    } else {
        report(0, c.at_end() ? "empty token sequence" : "expected [SCENE-START], found '" + c.peek() + "'");
        resync(0);
    }

    bool closed = false;
    bool truncated = false;
    while (!c.at_end()) {
        if (c.peek_is(mk::kSceneEnd)) {
            c.seek(c.pos() + 1);
            closed = true;
            break;
        }
        const std::size_t block_start = c.pos();
        if (!c.peek_is(mk::kObjectStart)) {
            report(block_start, "expected [OBJECT-START] or [SCENE-END], found '" + c.peek() + "'");
            resync(block_start + 1);
            continue;
        }
        try {
            auto [object, object_style] = parse_object(c);
            if (scene_style && !same_family(*scene_style, object_style)) {
                report(block_start, "object of style '" + std::string(style_name(object_style)) +
                                        "' in a '" + std::string(style_name(*scene_style)) + "' scene");
                continue;
            }
            if (!scene_style) scene_style = object_style;
            result.scene.objects.push_back(std::move(object));
        } catch (const BlockError& e) {
            report(e.position, e.message);
            if (e.truncated) {
                truncated = true;
                break;
            }
            // Never resync onto the block's own [OBJECT-START].
            resync(std::max(e.position, block_start + 1));
        }
    }
    if (!closed && !truncated) report(tokens.size(), "missing [SCENE-END]");
    if (closed && !c.at_end()) report(c.pos(), "trailing tokens after [SCENE-END]");

    result.scene.dataset_style = scene_style.value_or(DatasetStyle::Clevr);
    return result;
}

std::vector<TokenId> serialize_scene_ids(const Scene& scene, const Vocabulary& vocab) {
    auto tokens = serialize_scene(scene, vocab.quantizer());
    return vocab.encode(tokens);
}

ParseResult parse_scene_ids(std::span<const TokenId> ids, const Vocabulary& vocab, ParseMode mode,
                            std::optional<DatasetStyle> style) {
    TokenString tokens;
    tokens.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        try {
            tokens.push_back(vocab.id_to_token(ids[i]));
        } catch (const UnknownTokenError& e) {
            if (mode == ParseMode::Strict) throw GrammarError(i, e.what());
            tokens.emplace_back("<unk>");
        }
    }
    return parse_scene(tokens, vocab.quantizer(), mode, style);
}

double mean_sequence_length(std::span<const Scene> scenes, const QuantizerConfig& cfg) {
    if (scenes.empty()) throw EmptyInputError("mean_sequence_length needs at least one scene");
    double total = 0.0;
    for (const auto& s : scenes) total += static_cast<double>(serialize_scene(s, cfg).size());
    return total / static_cast<double>(scenes.size());
}

std::vector<std::string> fragment_token(const std::string& token) {
    std::vector<std::string> pieces;
    if (is_marker(token)) {
        pieces.emplace_back("[");
        std::string word;
        for (std::size_t i = 1; i + 1 < token.size(); ++i) {
            char ch = token[i];
            if (ch == '-' || ch == '_') {
                if (!word.empty()) pieces.push_back(std::move(word));
                word.clear();
                pieces.emplace_back(1, ch);
            } else {
                word.push_back(ch);
            }
        }
        if (!word.empty()) pieces.push_back(std::move(word));
        pieces.emplace_back("]");
        return pieces;
    }
    // Decimal number: [-] digits [. digits]
    std::size_t i = 0;
    if (i < token.size() && token[i] == '-') ++i;
    std::size_t int_start = i;
    while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) ++i;
    std::size_t int_end = i;
    bool numeric = int_end > int_start;
    std::size_t frac_start = i, frac_end = i;
    if (numeric && i < token.size() && token[i] == '.') {
        frac_start = ++i;
        while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) ++i;
        frac_end = i;
        numeric = frac_end > frac_start;
    }
    if (!numeric || i != token.size()) return {token};
    if (int_start == 1) pieces.emplace_back("-");
    pieces.push_back(token.substr(int_start, int_end - int_start));
    if (frac_end > frac_start) {
        pieces.emplace_back(".");
        pieces.push_back(token.substr(frac_start, frac_end - frac_start));
    }
    return pieces;
}

double fragmenting_baseline_length(std::span<const Scene> scenes, const QuantizerConfig& cfg) {
    if (scenes.empty()) throw EmptyInputError("fragmenting_baseline_length needs at least one scene");
    double total = 0.0;
    for (const auto& s : scenes) {
        for (const auto& t : serialize_scene(s, cfg)) total += static_cast<double>(fragment_token(t).size());
    }
    return total / static_cast<double>(scenes.size());
}

std::vector<TokenString> serialize_batch_serial(std::span<const Scene> scenes, const QuantizerConfig& cfg) {
    std::vector<TokenString> out;
    out.reserve(scenes.size());
    for (const auto& s : scenes) out.push_back(serialize_scene(s, cfg));
    return out;
}

std::vector<TokenString> serialize_batch(std::span<const Scene> scenes, const QuantizerConfig& cfg) {
    std::vector<TokenString> out(scenes.size());
    parallel_for(scenes.size(), [&](std::size_t i) { out[i] = serialize_scene(scenes[i], cfg); });
    return out;
}

}  // namespace scenetok
