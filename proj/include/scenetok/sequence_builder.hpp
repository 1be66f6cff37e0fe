#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenetok/image_order.hpp"
#include "scenetok/scene.hpp"
#include "scenetok/vocabulary.hpp"

namespace scenetok {

enum class Role : std::uint8_t { Context, Target };

struct TaskSequence {
    std::vector<TokenId> ids;
    std::vector<Role> roles;
    std::vector<double> weights;
};

enum class ModalityOrder { ImageFirst, SceneFirst };

inline constexpr std::size_t kImageTokensPerImage = 256;
inline constexpr double kDefaultImageHeadWeight = 10.0;
inline constexpr std::size_t kDefaultImageHeadLength = 5;

struct BuildOptions {
    bool center_reorder = false;
    HopOrder hop_order = HopOrder::LeftFirst;
    double context_weight = 0.0;
    double image_head_weight = kDefaultImageHeadWeight;
    std::size_t image_head_length = kDefaultImageHeadLength;
    std::size_t image_length = kImageTokensPerImage;
};

// Re-weights a built sequence: CONTEXT -> context_weight, TARGET -> 1.0,
// except the first `head_len` payload tokens of every target image block,
// which get `image_head_weight`.
TaskSequence loss_weights(TaskSequence seq, const Vocabulary& vocab, double image_head_weight,
                          std::size_t head_len, double context_weight = 0.0);

// Throws SchemaError unless the sequence is [BOS] ... [OUTPUT-SEP] ... [EOS]
// with parallel arrays, one separator and roles split at the separator.
void validate_sequence(const TaskSequence& seq, const Vocabulary& vocab);

enum class BlockKind { Scene, Image, Text };

// One framed block of a task sequence, markers included.
struct SequenceBlock {
    BlockKind kind;
    Role role;
    std::vector<TokenId> ids;
};

// Splits a valid sequence back into its framed blocks, in order.
std::vector<SequenceBlock> decompose(const TaskSequence& seq, const Vocabulary& vocab);

// Assembles the four task layouts. Image arguments are codebook indices
// (0..image_codes-1), one per raster position; scenes are serialized with the
// vocabulary's quantizer. Weights are applied with the options' defaults.
class SequenceBuilder {
public:
    explicit SequenceBuilder(const Vocabulary& vocab, BuildOptions options = {});

    // [BOS] scene [OUTPUT-SEP] image [EOS]
    TaskSequence rendering(const Scene& scene, std::span<const std::uint32_t> image) const;
    // [BOS] image [OUTPUT-SEP] scene [EOS]
    TaskSequence recognition(std::span<const std::uint32_t> image, const Scene& scene) const;
    // ImageFirst: [BOS] image scene text [OUTPUT-SEP] out-image out-scene [EOS]
    // SceneFirst swaps the image and scene blocks on both sides.
    TaskSequence instruction(std::span<const std::uint32_t> image, const Scene& scene, std::string_view instruction,
                             std::span<const std::uint32_t> out_image, const Scene& out_scene,
                             ModalityOrder order = ModalityOrder::ImageFirst) const;
    // [BOS] image [scene] question [OUTPUT-SEP] [TEXT-START] answer [TEXT-END] [EOS]
    TaskSequence qa(std::span<const std::uint32_t> image, const Scene& scene, std::string_view question,
                    std::string_view answer, bool include_scene = true) const;

    std::vector<TokenId> image_block(std::span<const std::uint32_t> image) const;
    std::vector<TokenId> scene_block(const Scene& scene) const;
    std::vector<TokenId> text_block(std::string_view text) const;

    // Raster-order image codes of an image block (undoing the center reorder
    // when it is enabled).
    std::vector<std::uint32_t> image_payload(const SequenceBlock& block) const;

    const BuildOptions& options() const { return options_; }

private:
    TaskSequence finish(TaskSequence seq) const;

    const Vocabulary& vocab_;
    BuildOptions options_;
    ReorderPlan plan_;
};

}  // namespace scenetok
