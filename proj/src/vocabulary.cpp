#include "scenetok/vocabulary.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "scenetok/errors.hpp"

namespace scenetok {

namespace {

constexpr std::string_view kTextPrefix = "<text_";
constexpr std::string_view kImagePrefix = "<img_";
constexpr std::string_view kShapePrefix = "<shape_";
constexpr std::string_view kManifestMagic = "#scenetok-vocab 1";

// Parses "<prefixN>" and returns N.
std::optional<std::uint64_t> parse_coded(std::string_view token, std::string_view prefix) {
    if (token.size() <= prefix.size() + 1 || token.substr(0, prefix.size()) != prefix || token.back() != '>') {
        return std::nullopt;
    }
    std::string_view digits = token.substr(prefix.size(), token.size() - prefix.size() - 1);
    if (digits.size() > 1 && digits[0] == '0') return std::nullopt;
    std::uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
    return n;
}

bool is_reserved_form(std::string_view token) {
    return parse_coded(token, kTextPrefix) || parse_coded(token, kImagePrefix) ||
           parse_coded(token, kShapePrefix);
}

}  // namespace

std::vector<std::string> default_specials() {
    using namespace markers;
    return {std::string(kSceneStart), std::string(kSceneEnd),  std::string(kObjectStart),
            std::string(kObjectEnd),  std::string(kSize),      std::string(kColor),
            std::string(kMaterial),   std::string(kShape),     std::string(kLocation),
            std::string(kPose),       std::string(kCategory),  std::string(kCenterCam),
            std::string(kDimensions), std::string(kTextStart), std::string(kTextEnd),
            std::string(kImageStart), std::string(kImageEnd),  std::string(kOutputSep),
            std::string(kBos),        std::string(kEos)};
}

std::vector<std::string> default_words() {
    return {
        // CLEVR attributes
        "small", "large", "gray", "red", "blue", "green", "brown", "purple", "cyan", "yellow",
        "rubber", "metal", "cube", "sphere", "cylinder",
        // ObjaWorld assets
        "person", "bird", "bench", "lamppost", "sofa", "table",
        // Objectron / ARKitScenes categories
        "bicycle", "books", "bottle", "camera", "cereal_box", "chair", "cup", "laptop", "shoe",
        "bathtub", "bed", "cabinet", "refrigerator", "shelves", "sink", "stove", "toilet", "tv",
        // QA answers
        "True", "False", "0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10",
        // instruction templates
        "Change", "Transform", "Set", "Put", "Insert", "Remove", "Take", "out", "Move",
        "the", "a", "an", "object", "to", "have", "of", "color", "size", "material", "shape",
        "position", "towards", "left", "right", "front", "behind", "and",
        // question fragments
        "What", "How", "many", "Is", "Are", "there", "is", "are", "any", "same", "as", "other",
        "?", ".", ",",
    };
}

std::vector<std::string> split_words(std::string_view text) {
    auto is_punct = [](char c) { return c == '?' || c == '.' || c == ',' || c == '!' || c == ';' || c == ':'; };
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::string_view word = text.substr(start, i - start);
        if (word.empty()) continue;
        std::size_t tail = word.size();
        while (tail > 1 && is_punct(word[tail - 1])) --tail;
        out.emplace_back(word.substr(0, tail));
        for (std::size_t k = tail; k < word.size(); ++k) out.emplace_back(1, word[k]);
    }
    return out;
}

std::string image_code_token(std::uint32_t code) { return std::string(kImagePrefix) + std::to_string(code) + ">"; }
std::string shape_code_token(std::uint32_t code) { return std::string(kShapePrefix) + std::to_string(code) + ">"; }

Vocabulary Vocabulary::build(const QuantizerConfig& quantizer, std::vector<std::string> specials,
                             std::size_t image_codes, bool with_shapes, std::vector<std::string> words,
                             std::size_t base_size) {
    if (specials.empty()) throw ConfigError("special token list must not be empty");
    for (auto required : default_specials()) {
        bool found = false;
        for (const auto& s : specials) found = found || s == required;
        if (!found) throw ConfigError("special token list lacks required marker " + required);
    }
    if (words.size() > base_size) throw ConfigError("word registry larger than the text block");
    for (const auto& w : words) {
        if (w.empty() || is_reserved_form(w)) throw ConfigError("invalid word token '" + w + "'");
    }
    Vocabulary v;
    v.quantizer_ = quantizer;
    v.base_size_ = base_size;
    v.image_codes_ = image_codes;
    v.shape_codes_ = with_shapes ? kShapeCodebookSize : 0;
    v.words_ = std::move(words);
    v.specials_ = std::move(specials);
    v.numeric_ = numeric_vocab(quantizer);
    v.index();
    return v;
}

Vocabulary Vocabulary::standard(const QuantizerConfig& quantizer, bool with_shapes) {
    return build(quantizer, default_specials(), kImageCodebookSize, with_shapes);
}

void Vocabulary::index() {
    by_token_.clear();
    by_token_.reserve(words_.size() + specials_.size() + numeric_.size());
    auto add = [&](const std::string& token, TokenId id) {
        if (!by_token_.emplace(token, id).second) throw DuplicateTokenError("duplicate token '" + token + "'");
    };
    for (std::size_t i = 0; i < words_.size(); ++i) add(words_[i], static_cast<TokenId>(i));
    for (std::size_t i = 0; i < specials_.size(); ++i) add(specials_[i], specials_begin() + static_cast<TokenId>(i));
    for (std::size_t i = 0; i < numeric_.size(); ++i) add(numeric_[i], numeric_begin() + static_cast<TokenId>(i));
}

TokenId Vocabulary::lookup(std::string_view token) const {
    if (auto it = by_token_.find(std::string(token)); it != by_token_.end()) return it->second;
    if (auto n = parse_coded(token, kImagePrefix)) return lookup(ImageCode{static_cast<std::uint32_t>(std::min<std::uint64_t>(*n, UINT32_MAX))});
    if (auto n = parse_coded(token, kShapePrefix)) return lookup(ShapeCode{static_cast<std::uint32_t>(std::min<std::uint64_t>(*n, UINT32_MAX))});
    if (auto n = parse_coded(token, kTextPrefix); n && *n >= words_.size() && *n < base_size_) {
        return static_cast<TokenId>(*n);
    }
    throw UnknownTokenError("unknown token '" + std::string(token) + "'");
}

TokenId Vocabulary::lookup(ImageCode code) const {
    if (code.value >= image_codes_) throw UnknownTokenError("image code " + std::to_string(code.value) + " out of range");
    return image_begin() + code.value;
}

TokenId Vocabulary::lookup(ShapeCode code) const {
    if (code.value >= shape_codes_) throw UnknownTokenError("shape code " + std::to_string(code.value) + " out of range");
    return shape_begin() + code.value;
}

TokenKind Vocabulary::kind(TokenId id) const {
    if (id < specials_begin()) return TokenKind::Text;
    if (id < numeric_begin()) return TokenKind::Special;
    if (id < image_begin()) return TokenKind::Numeric;
    if (id < shape_begin()) return TokenKind::Image;
    if (id < total_size()) return TokenKind::Shape;
    throw UnknownTokenError("token ID " + std::to_string(id) + " outside vocabulary of size " +
                            std::to_string(total_size()));
}

std::string Vocabulary::id_to_token(TokenId id) const {
    switch (kind(id)) {
        case TokenKind::Text:
            if (id < words_.size()) return words_[id];
            return std::string(kTextPrefix) + std::to_string(id) + ">";
        case TokenKind::Special: return specials_[id - specials_begin()];
        case TokenKind::Numeric: return numeric_[id - numeric_begin()];
        case TokenKind::Image: return image_code_token(id - image_begin());
        case TokenKind::Shape: return shape_code_token(id - shape_begin());
    }
    return {};
}

std::uint32_t Vocabulary::image_code_of(TokenId id) const {
    if (id < image_begin() || id >= shape_begin()) throw UnknownTokenError("ID " + std::to_string(id) + " is not an image code");
    return id - image_begin();
}

std::uint32_t Vocabulary::shape_code_of(TokenId id) const {
    if (id < shape_begin() || id >= total_size()) throw UnknownTokenError("ID " + std::to_string(id) + " is not a shape code");
    return id - shape_begin();
}

bool Vocabulary::contains(std::string_view token) const {
    try {
        lookup(token);
        return true;
    } catch (const UnknownTokenError&) {
        return false;
    }
}

std::vector<TokenId> Vocabulary::encode(std::span<const std::string> tokens) const {
    std::vector<TokenId> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(lookup(t));
    return ids;
}

std::vector<std::string> Vocabulary::decode(std::span<const TokenId> ids) const {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (auto id : ids) out.push_back(id_to_token(id));
    return out;
}

void Vocabulary::write_manifest(std::ostream& out) const {
    out << kManifestMagic << '\n';
    out << "@quantizer\t" << format_step(1, quantizer_) << '\t' << format_step(quantizer_.min_step, quantizer_)
        << '\t' << format_step(quantizer_.max_step, quantizer_) << '\n';
    out << "@base\t0\t" << base_size_ << '\n';
    out << "@words\t0\t" << words_.size() << '\n';
    out << "@specials\t" << specials_begin() << '\t' << specials_.size() << '\n';
    out << "@numeric\t" << numeric_begin() << '\t' << numeric_.size() << '\n';
    out << "@image\t" << image_begin() << '\t' << image_codes_ << '\n';
    out << "@shape\t" << shape_begin() << '\t' << shape_codes_ << '\n';
    out << "@total\t0\t" << total_size() << '\n';
    for (std::size_t i = 0; i < words_.size(); ++i) out << i << '\t' << words_[i] << '\n';
    for (std::size_t i = 0; i < specials_.size(); ++i) out << specials_begin() + i << '\t' << specials_[i] << '\n';
    for (std::size_t i = 0; i < numeric_.size(); ++i) out << numeric_begin() + i << '\t' << numeric_[i] << '\n';
}

Vocabulary Vocabulary::read_manifest(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kManifestMagic) throw SchemaError("not a vocabulary manifest");

    struct Block {
        std::size_t start = 0, count = 0;
        bool seen = false;
    };
    std::unordered_map<std::string, Block> blocks;
    std::optional<QuantizerConfig> quantizer;
    std::vector<std::pair<std::size_t, std::string>> entries;

    auto to_size = [](const std::string& s) {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw SchemaError("bad number '" + s + "' in manifest");
        return v;
    };
    auto to_double = [](const std::string& s) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw SchemaError("bad number '" + s + "' in manifest");
        return v;
    };

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, '\t')) cols.push_back(col);
        if (line[0] == '@') {
            if (cols.size() != (cols[0] == "@quantizer" ? 4u : 3u)) throw SchemaError("bad manifest header: " + line);
            if (cols[0] == "@quantizer") {
                quantizer = QuantizerConfig::make(to_double(cols[1]), to_double(cols[2]), to_double(cols[3]));
            } else {
                blocks[cols[0].substr(1)] = Block{to_size(cols[1]), to_size(cols[2]), true};
            }
            continue;
        }
        if (cols.size() != 2) throw SchemaError("bad manifest entry: " + line);
        entries.emplace_back(to_size(cols[0]), cols[1]);
    }
    for (const char* name : {"base", "words", "specials", "numeric", "image", "shape"}) {
        if (!blocks[name].seen) throw SchemaError(std::string("manifest lacks @") + name);
    }
    if (!quantizer) throw SchemaError("manifest lacks @quantizer");

    const auto& words = blocks["words"];
    const auto& specials = blocks["specials"];
    std::vector<std::string> word_list(words.count), special_list(specials.count);
    std::vector<bool> filled_words(words.count), filled_specials(specials.count);
    for (auto& [id, token] : entries) {
        if (id < words.count) {
            word_list[id] = token;
            filled_words[id] = true;
        } else if (id >= specials.start && id < specials.start + specials.count) {
            special_list[id - specials.start] = token;
            filled_specials[id - specials.start] = true;
        }
    }
    for (bool f : filled_words) if (!f) throw SchemaError("manifest word block has gaps");
    for (bool f : filled_specials) if (!f) throw SchemaError("manifest special block has gaps");

    const auto& shape = blocks["shape"];
    if (shape.count != 0 && shape.count != kShapeCodebookSize) throw SchemaError("shape block must hold 0 or 8192 codes");
    Vocabulary v = build(*quantizer, std::move(special_list), blocks["image"].count, shape.count != 0,
                         std::move(word_list), blocks["base"].count);

    // Numeric tokens are regenerated from the quantizer; the listed ones must agree.
    if (v.numeric_begin() != blocks["numeric"].start || v.numeric_count() != blocks["numeric"].count ||
        v.image_begin() != blocks["image"].start || v.shape_begin() != shape.start) {
        throw SchemaError("manifest block layout disagrees with its quantizer");
    }
    for (auto& [id, token] : entries) {
        if (id >= v.numeric_begin() && id < v.image_begin() && v.id_to_token(static_cast<TokenId>(id)) != token) {
            throw SchemaError("manifest numeric token mismatch at ID " + std::to_string(id));
        }
    }
    return v;
}

}  // namespace scenetok
