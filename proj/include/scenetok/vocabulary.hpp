#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scenetok/quantizer.hpp"

namespace scenetok {

using TokenId = std::uint32_t;

inline constexpr std::size_t kBaseTextSize = 128000;
inline constexpr std::size_t kImageCodebookSize = 1024;

// Typed codebook entries, so an image code and a shape code with the same
// index never resolve to the same ID by accident.
struct ImageCode {
    std::uint32_t value;
};
struct ShapeCode {
    std::uint32_t value;
};

enum class TokenKind { Text, Special, Numeric, Image, Shape };

namespace markers {
inline constexpr std::string_view kSceneStart = "[SCENE-START]";
inline constexpr std::string_view kSceneEnd = "[SCENE-END]";
inline constexpr std::string_view kObjectStart = "[OBJECT-START]";
inline constexpr std::string_view kObjectEnd = "[OBJECT-END]";
inline constexpr std::string_view kSize = "[SIZE]";
inline constexpr std::string_view kColor = "[COLOR]";
inline constexpr std::string_view kMaterial = "[MATERIAL]";
inline constexpr std::string_view kShape = "[SHAPE]";
inline constexpr std::string_view kLocation = "[LOCATION]";
inline constexpr std::string_view kPose = "[POSE]";
inline constexpr std::string_view kCategory = "[CATEGORY]";
inline constexpr std::string_view kCenterCam = "[CENTER_CAM]";
inline constexpr std::string_view kDimensions = "[DIMENSIONS]";
inline constexpr std::string_view kTextStart = "[TEXT-START]";
inline constexpr std::string_view kTextEnd = "[TEXT-END]";
inline constexpr std::string_view kImageStart = "[IMAGE-START]";
inline constexpr std::string_view kImageEnd = "[IMAGE-END]";
inline constexpr std::string_view kOutputSep = "[OUTPUT-SEP]";
inline constexpr std::string_view kBos = "[BOS]";
inline constexpr std::string_view kEos = "[EOS]";
}  // namespace markers

// The full marker inventory, in ID order.
std::vector<std::string> default_specials();

// Attribute, category, answer and instruction-template words registered in
// the text block by default.
std::vector<std::string> default_words();

// Whitespace split with sentence punctuation peeled off into its own token.
std::vector<std::string> split_words(std::string_view text);

std::string image_code_token(std::uint32_t code);
std::string shape_code_token(std::uint32_t code);

// Unified token-ID space laid out as contiguous blocks:
//   [text base][specials][numeric][image codes][shape codes]
// The text block is opaque apart from a small registry of known words, which
// occupy its first IDs. Immutable once built.
class Vocabulary {
public:
    static Vocabulary build(const QuantizerConfig& quantizer,
                            std::vector<std::string> specials,
                            std::size_t image_codes,
                            bool with_shapes,
                            std::vector<std::string> words = default_words(),
                            std::size_t base_size = kBaseTextSize);

    // Default specials and words, 1024 image codes.
    static Vocabulary standard(const QuantizerConfig& quantizer, bool with_shapes = false);

    TokenId lookup(std::string_view token) const;
    TokenId lookup(ImageCode code) const;
    TokenId lookup(ShapeCode code) const;
    std::string id_to_token(TokenId id) const;
    TokenKind kind(TokenId id) const;

    std::vector<TokenId> encode(std::span<const std::string> tokens) const;
    std::vector<std::string> decode(std::span<const TokenId> ids) const;

    bool contains(std::string_view token) const;

    // Payload index of an image/shape code ID. Throws UnknownTokenError when
    // the ID is outside that block.
    std::uint32_t image_code_of(TokenId id) const;
    std::uint32_t shape_code_of(TokenId id) const;

    std::size_t base_size() const { return base_size_; }
    std::size_t special_count() const { return specials_.size(); }
    std::size_t numeric_count() const { return numeric_.size(); }
    std::size_t image_codes() const { return image_codes_; }
    std::size_t shape_codes() const { return shape_codes_; }
    std::size_t word_count() const { return words_.size(); }
    std::size_t total_size() const {
        return base_size_ + specials_.size() + numeric_.size() + image_codes_ + shape_codes_;
    }

    TokenId specials_begin() const { return static_cast<TokenId>(base_size_); }
    TokenId numeric_begin() const { return specials_begin() + static_cast<TokenId>(specials_.size()); }
    TokenId image_begin() const { return numeric_begin() + static_cast<TokenId>(numeric_.size()); }
    TokenId shape_begin() const { return image_begin() + static_cast<TokenId>(image_codes_); }

    const QuantizerConfig& quantizer() const { return quantizer_; }
    const std::vector<std::string>& words() const { return words_; }

    // Line-oriented manifest: `@block<TAB>start<TAB>count` headers, then
    // `ID<TAB>token` for words, specials and numeric tokens.
    void write_manifest(std::ostream& out) const;
    static Vocabulary read_manifest(std::istream& in);

private:
    Vocabulary() = default;
    void index();

    QuantizerConfig quantizer_;
    std::size_t base_size_ = kBaseTextSize;
    std::size_t image_codes_ = kImageCodebookSize;
    std::size_t shape_codes_ = 0;
    std::vector<std::string> words_;
    std::vector<std::string> specials_;
    std::vector<std::string> numeric_;
    std::unordered_map<std::string, TokenId> by_token_;
};

}  // namespace scenetok
