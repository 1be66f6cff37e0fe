#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scenetok/quantizer.hpp"
#include "scenetok/scene.hpp"
#include "scenetok/vocabulary.hpp"

namespace scenetok {

// Scene in pre-ID form: one string per token.
using TokenString = std::vector<std::string>;

enum class ParseMode { Strict, Lenient };

struct ParseDiagnostic {
    std::size_t position = 0;
    std::string message;
};

struct ParseResult {
    Scene scene;
    std::vector<ParseDiagnostic> diagnostics;
};

// Token layout per object:
//   CLEVR       [OBJECT-START] [SIZE] w [COLOR] w [MATERIAL] w [SHAPE] w [LOCATION] n n n [OBJECT-END]
//   ObjaWorld   [OBJECT-START] [SHAPE] w [LOCATION] n n n [POSE] n n n [OBJECT-END]
//   shapes      [OBJECT-START] [SHAPE] c*512 [LOCATION] n n n [POSE] n n n [OBJECT-END]
//   boxed       [OBJECT-START] [CATEGORY] w [CENTER_CAM] n n n [DIMENSIONS] n n n [OBJECT-END]
// and the whole scene is wrapped in [SCENE-START] ... [SCENE-END].
TokenString serialize_scene(const Scene& scene, const QuantizerConfig& cfg);

// Tokens one object of `style` occupies, markers included.
std::size_t object_token_count(DatasetStyle style);

// Strict mode throws GrammarError at the first violation. Lenient mode never
// throws: malformed object blocks are skipped (resync on the next
// [OBJECT-START] or [SCENE-END]) and reported as diagnostics.
//
// Objectron and ARKitScenes token streams are indistinguishable, as is an
// empty scene of any style; `style` pins the result in those cases.
ParseResult parse_scene(std::span<const std::string> tokens, const QuantizerConfig& cfg, ParseMode mode,
                        std::optional<DatasetStyle> style = std::nullopt);

// ID-level convenience wrappers. In lenient mode IDs outside the vocabulary
// decode to a placeholder that the grammar rejects.
std::vector<TokenId> serialize_scene_ids(const Scene& scene, const Vocabulary& vocab);
ParseResult parse_scene_ids(std::span<const TokenId> ids, const Vocabulary& vocab, ParseMode mode,
                            std::optional<DatasetStyle> style = std::nullopt);

double mean_sequence_length(std::span<const Scene> scenes, const QuantizerConfig& cfg);

// Splits a token the way a generic subword text tokenizer would: numbers into
// sign / integer / point / fraction pieces, markers into bracket and word
// pieces. Everything else stays whole.
std::vector<std::string> fragment_token(const std::string& token);

// Mean fragment count of the serialized scenes; emulates the sequence length
// a stock text tokenizer would see for the same scenes.
double fragmenting_baseline_length(std::span<const Scene> scenes, const QuantizerConfig& cfg);

// Batch serialization; the OpenMP and serial paths produce identical output
// in input order.
std::vector<TokenString> serialize_batch(std::span<const Scene> scenes, const QuantizerConfig& cfg);
std::vector<TokenString> serialize_batch_serial(std::span<const Scene> scenes, const QuantizerConfig& cfg);

}  // namespace scenetok
