#include "scenetok/sequence_builder.hpp"

#include "scenetok/errors.hpp"
#include "scenetok/serializer.hpp"

namespace scenetok {

namespace {

namespace mk = markers;

void append(TaskSequence& seq, const std::vector<TokenId>& ids, Role role) {
    seq.ids.insert(seq.ids.end(), ids.begin(), ids.end());
    seq.roles.insert(seq.roles.end(), ids.size(), role);
}

void append_one(TaskSequence& seq, TokenId id, Role role) {
    seq.ids.push_back(id);
    seq.roles.push_back(role);
}

std::size_t word_count(std::string_view text) { return split_words(text).size(); }

}  // namespace

TaskSequence loss_weights(TaskSequence seq, const Vocabulary& vocab, double image_head_weight, std::size_t head_len,
                          double context_weight) {
    if (!(image_head_weight > 0.0)) throw ConfigError("image head weight must be positive");
    const TokenId image_start = vocab.lookup(mk::kImageStart);
    const TokenId image_end = vocab.lookup(mk::kImageEnd);
    seq.weights.assign(seq.ids.size(), 0.0);
    bool in_target_image = false;
    std::size_t payload_index = 0;
    for (std::size_t i = 0; i < seq.ids.size(); ++i) {
        if (seq.roles[i] == Role::Context) {
            seq.weights[i] = context_weight;
            continue;
        }
        const TokenId id = seq.ids[i];
        seq.weights[i] = 1.0;
        if (id == image_start) {
            in_target_image = true;
            payload_index = 0;
        } else if (id == image_end) {
            in_target_image = false;
        } else if (in_target_image) {
            if (payload_index < head_len) seq.weights[i] = image_head_weight;
            ++payload_index;
        }
    }
    return seq;
}

void validate_sequence(const TaskSequence& seq, const Vocabulary& vocab) {
    if (seq.ids.size() != seq.roles.size() || seq.ids.size() != seq.weights.size()) {
        throw SchemaError("ids, roles and weights must have equal length");
    }
    if (seq.ids.size() < 3) throw SchemaError("sequence too short");
    if (seq.ids.front() != vocab.lookup(mk::kBos)) throw SchemaError("sequence must start with [BOS]");
    if (seq.ids.back() != vocab.lookup(mk::kEos)) throw SchemaError("sequence must end with [EOS]");
    const TokenId sep = vocab.lookup(mk::kOutputSep);
    std::size_t seps = 0, sep_at = 0;
    for (std::size_t i = 0; i < seq.ids.size(); ++i) {
        if (seq.ids[i] == sep) {
            ++seps;
            sep_at = i;
        }
    }
    if (seps != 1) throw SchemaError("sequence must contain exactly one [OUTPUT-SEP]");
    for (std::size_t i = 0; i < seq.ids.size(); ++i) {
        const Role expected = i > sep_at ? Role::Target : Role::Context;
        if (seq.roles[i] != expected) throw SchemaError("role at " + std::to_string(i) + " disagrees with [OUTPUT-SEP]");
        if (seq.weights[i] < 0.0) throw SchemaError("negative loss weight");
        if (expected == Role::Target && !(seq.weights[i] > 0.0)) throw SchemaError("target weight must be positive");
    }
}

std::vector<SequenceBlock> decompose(const TaskSequence& seq, const Vocabulary& vocab) {
    validate_sequence(seq, vocab);
    struct Frame {
        TokenId open, close;
        BlockKind kind;
    };
    const Frame frames[] = {
        {vocab.lookup(mk::kSceneStart), vocab.lookup(mk::kSceneEnd), BlockKind::Scene},
        {vocab.lookup(mk::kImageStart), vocab.lookup(mk::kImageEnd), BlockKind::Image},
        {vocab.lookup(mk::kTextStart), vocab.lookup(mk::kTextEnd), BlockKind::Text},
    };
    const TokenId sep = vocab.lookup(mk::kOutputSep);
    std::vector<SequenceBlock> blocks;
    std::size_t i = 1;
    const std::size_t last = seq.ids.size() - 1;
    while (i < last) {
        if (seq.ids[i] == sep) {
            ++i;
            continue;
        }
        const Frame* frame = nullptr;
        for (const auto& f : frames) {
            if (seq.ids[i] == f.open) frame = &f;
        }
        if (!frame) throw SchemaError("unframed token at position " + std::to_string(i));
        std::size_t j = i + 1;
        while (j < last && seq.ids[j] != frame->close) ++j;
        if (j >= last) throw SchemaError("unterminated block at position " + std::to_string(i));
        blocks.push_back({frame->kind, seq.roles[i],
                          std::vector<TokenId>(seq.ids.begin() + static_cast<std::ptrdiff_t>(i),
                                               seq.ids.begin() + static_cast<std::ptrdiff_t>(j + 1))});
        i = j + 1;
    }
    return blocks;
}

SequenceBuilder::SequenceBuilder(const Vocabulary& vocab, BuildOptions options)
    : vocab_(vocab), options_(options), plan_(center_plan(options.image_length, options.hop_order)) {}

std::vector<TokenId> SequenceBuilder::image_block(std::span<const std::uint32_t> image) const {
    if (image.size() != options_.image_length) {
        throw ImageLengthError("image must have " + std::to_string(options_.image_length) + " tokens, got " +
                               std::to_string(image.size()));
    }
    std::vector<std::uint32_t> ordered = options_.center_reorder
                                             ? apply(plan_, image)
                                             : std::vector<std::uint32_t>(image.begin(), image.end());
    std::vector<TokenId> ids;
    ids.reserve(ordered.size() + 2);
    ids.push_back(vocab_.lookup(mk::kImageStart));
    for (auto code : ordered) ids.push_back(vocab_.lookup(ImageCode{code}));
    ids.push_back(vocab_.lookup(mk::kImageEnd));
    return ids;
}

std::vector<TokenId> SequenceBuilder::scene_block(const Scene& scene) const {
    return serialize_scene_ids(scene, vocab_);
}

std::vector<TokenId> SequenceBuilder::text_block(std::string_view text) const {
    auto words = split_words(text);
    if (words.empty()) throw SchemaError("text block must not be empty");
    std::vector<TokenId> ids;
    ids.reserve(words.size() + 2);
    ids.push_back(vocab_.lookup(mk::kTextStart));
    for (const auto& w : words) ids.push_back(vocab_.lookup(w));
    ids.push_back(vocab_.lookup(mk::kTextEnd));
    return ids;
}

std::vector<std::uint32_t> SequenceBuilder::image_payload(const SequenceBlock& block) const {
    if (block.kind != BlockKind::Image || block.ids.size() < 2) throw SchemaError("not an image block");
    std::vector<std::uint32_t> codes;
    codes.reserve(block.ids.size() - 2);
    for (std::size_t i = 1; i + 1 < block.ids.size(); ++i) codes.push_back(vocab_.image_code_of(block.ids[i]));
    if (options_.center_reorder) {
        if (codes.size() != plan_.length) throw LengthMismatchError("image block length differs from the plan");
        return invert(plan_, std::span<const std::uint32_t>(codes));
    }
    return codes;
}

TaskSequence SequenceBuilder::finish(TaskSequence seq) const {
    append_one(seq, vocab_.lookup(mk::kEos), Role::Target);
    return loss_weights(std::move(seq), vocab_, options_.image_head_weight, options_.image_head_length,
                        options_.context_weight);
}

TaskSequence SequenceBuilder::rendering(const Scene& scene, std::span<const std::uint32_t> image) const {
    auto image_ids = image_block(image);
    TaskSequence seq;
    append_one(seq, vocab_.lookup(mk::kBos), Role::Context);
    append(seq, scene_block(scene), Role::Context);
    append_one(seq, vocab_.lookup(mk::kOutputSep), Role::Context);
    append(seq, image_ids, Role::Target);
    return finish(std::move(seq));
}

TaskSequence SequenceBuilder::recognition(std::span<const std::uint32_t> image, const Scene& scene) const {
    auto image_ids = image_block(image);
    TaskSequence seq;
    append_one(seq, vocab_.lookup(mk::kBos), Role::Context);
    append(seq, image_ids, Role::Context);
    append_one(seq, vocab_.lookup(mk::kOutputSep), Role::Context);
    append(seq, scene_block(scene), Role::Target);
    return finish(std::move(seq));
}

TaskSequence SequenceBuilder::instruction(std::span<const std::uint32_t> image, const Scene& scene,
                                          std::string_view instruction, std::span<const std::uint32_t> out_image,
                                          const Scene& out_scene, ModalityOrder order) const {
    if (word_count(instruction) == 0) throw SchemaError("instruction text must not be empty");
    auto in_image = image_block(image);
    auto in_scene = scene_block(scene);
    auto target_image = image_block(out_image);
    auto target_scene = scene_block(out_scene);
    const bool image_first = order == ModalityOrder::ImageFirst;

    TaskSequence seq;
    append_one(seq, vocab_.lookup(mk::kBos), Role::Context);
    append(seq, image_first ? in_image : in_scene, Role::Context);
    append(seq, image_first ? in_scene : in_image, Role::Context);
    append(seq, text_block(instruction), Role::Context);
    append_one(seq, vocab_.lookup(mk::kOutputSep), Role::Context);
    append(seq, image_first ? target_image : target_scene, Role::Target);
    append(seq, image_first ? target_scene : target_image, Role::Target);
    return finish(std::move(seq));
}

TaskSequence SequenceBuilder::qa(std::span<const std::uint32_t> image, const Scene& scene, std::string_view question,
                                 std::string_view answer, bool include_scene) const {
    const auto answer_words = word_count(answer);
    if (answer_words < 1 || answer_words > 2) {
        throw SchemaError("answer must be 1-2 words, got '" + std::string(answer) + "'");
    }
    TaskSequence seq;
    append_one(seq, vocab_.lookup(mk::kBos), Role::Context);
    append(seq, image_block(image), Role::Context);
    if (include_scene) append(seq, scene_block(scene), Role::Context);
    append(seq, text_block(question), Role::Context);
    append_one(seq, vocab_.lookup(mk::kOutputSep), Role::Context);
    append(seq, text_block(answer), Role::Target);
    return finish(std::move(seq));
}

}  // namespace scenetok
