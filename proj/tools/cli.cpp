#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scenetok/errors.hpp"
#include "scenetok/evaluator.hpp"
#include "scenetok/image_order.hpp"
#include "scenetok/parallel.hpp"
#include "scenetok/scene_gen.hpp"
#include "scenetok/sequence_builder.hpp"
#include "scenetok/serializer.hpp"
#include "scenetok/token_stats.hpp"
#include "scenetok/token_stream.hpp"
#include "scenetok/vocabulary.hpp"

namespace scenetok::cli {

namespace {

using nlohmann::json;

// Flags shared by every subcommand that needs a vocabulary or quantizer.
struct VocabFlags {
    double granularity = 0.05;
    std::vector<double> range;
    std::string dataset;
    std::string manifest;
    bool with_shapes = false;
};

struct Streams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

class Input {
public:
    Input(const std::string& path, std::istream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
        if (!*file_) throw IoError("cannot open '" + path + "' for reading");
        stream_ = file_.get();
    }
    std::istream& get() { return *stream_; }

private:
    std::unique_ptr<std::ifstream> file_;
    std::istream* stream_ = nullptr;
};

class Output {
public:
    Output(const std::string& path, std::ostream& fallback, bool binary = false) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path, binary ? std::ios::binary : std::ios::out);
        if (!*file_) throw IoError("cannot open '" + path + "' for writing");
        stream_ = file_.get();
    }
    std::ostream& get() { return *stream_; }
    void finish() {
        stream_->flush();
        if (!*stream_) throw IoError("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t") == std::string::npos; }

// Re-raises a library error with the 1-based input line prepended, keeping its code.
template <typename F>
auto at_line(std::size_t line, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.code(), "line " + std::to_string(line) + ": " + e.what());
    } catch (const json::exception& e) {
        throw SchemaError("line " + std::to_string(line) + ": " + e.what());
    }
}

std::vector<json> read_jsonl(std::istream& in) {
    std::vector<json> docs;
    auto lines = read_lines(in);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        try {
            docs.push_back(json::parse(lines[i]));
        } catch (const json::parse_error& e) {
            throw SchemaError("line " + std::to_string(i + 1) + ": malformed JSON: " + e.what());
        } catch (const json::out_of_range& e) {
            throw NonFiniteError("line " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return docs;
}

std::vector<Scene> read_scenes(std::istream& in) {
    auto docs = read_jsonl(in);
    std::vector<Scene> scenes;
    scenes.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        scenes.push_back(at_line(i + 1, [&] { return scene_from_json(docs[i]); }));
    }
    return scenes;
}

std::vector<std::vector<TokenId>> read_id_lines(std::istream& in) {
    std::vector<std::vector<TokenId>> out;
    auto lines = read_lines(in);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        out.push_back(at_line(i + 1, [&] { return parse_id_line(lines[i]); }));
    }
    return out;
}

std::optional<DatasetStyle> flag_style(const std::string& name) {
    if (name.empty()) return std::nullopt;
    return parse_style(name);
}

QuantizerConfig make_quantizer(const VocabFlags& f, std::optional<DatasetStyle> fallback_style = std::nullopt) {
    const auto style = flag_style(f.dataset).value_or(fallback_style.value_or(DatasetStyle::Clevr));
    if (f.range.empty()) return QuantizerConfig::for_style(style, f.granularity);
    if (f.range.size() != 2) throw UsageError("--range takes two values: min,max");
    return QuantizerConfig::make(f.granularity, f.range[0], f.range[1]);
}

std::optional<DatasetStyle> first_style(const std::vector<Scene>& scenes) {
    if (scenes.empty()) return std::nullopt;
    return scenes.front().dataset_style;
}

// Words of the scenes (and extra text) that the default registry lacks are
// appended in sorted order, so the same input always yields the same IDs.
Vocabulary make_vocab(const VocabFlags& f, const QuantizerConfig& q, const std::vector<Scene>& scenes,
                      const std::vector<std::string>& texts = {}) {
    if (!f.manifest.empty()) {
        std::ifstream in(f.manifest);
        if (!in) throw IoError("cannot open vocabulary manifest '" + f.manifest + "'");
        return Vocabulary::read_manifest(in);
    }
    bool shapes = f.with_shapes;
    auto words = default_words();
    std::set<std::string> known(words.begin(), words.end());
    std::set<std::string> extra;
    auto add = [&](const std::optional<std::string>& w) {
        if (w && !known.count(*w)) extra.insert(*w);
    };
    for (const auto& s : scenes) {
        for (const auto& o : s.objects) {
            add(o.size);
            add(o.color);
            add(o.material);
            add(o.shape);
            add(o.category);
            shapes = shapes || o.shape_codes.has_value();
        }
    }
    for (const auto& t : texts) {
        for (auto& w : split_words(t)) add(w);
    }
    words.insert(words.end(), extra.begin(), extra.end());
    return Vocabulary::build(q, default_specials(), kImageCodebookSize, shapes, std::move(words));
}

void add_vocab_flags(CLI::App* cmd, VocabFlags& f, bool manifest = true) {
    cmd->add_option("--granularity", f.granularity, "Bin width of numeric tokens")->capture_default_str();
    cmd->add_option("--range", f.range, "Numeric range as min,max")->delimiter(',')->expected(2);
    cmd->add_option("--dataset", f.dataset, "Dataset style (clevr, objaworld, objaworld_shapes, objectron, arkitscenes)");
    if (manifest) cmd->add_option("--vocab", f.manifest, "Vocabulary manifest to use instead of building one");
}

HopOrder parse_hop(const std::string& s) {
    if (s == "left") return HopOrder::LeftFirst;
    if (s == "right") return HopOrder::RightFirst;
    throw UsageError("--hop must be left or right");
}

std::vector<std::uint32_t> image_codes(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw SchemaError(std::string("record needs '") + key + "'");
    return it->get<std::vector<std::uint32_t>>();
}

std::string text_field(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_string()) throw SchemaError(std::string("record needs string '") + key + "'");
    return it->get<std::string>();
}

// --- gen -------------------------------------------------------------------

struct GenFlags {
    std::string style = "clevr";
    std::size_t n = 10;
    std::uint64_t seed = 0;
    std::size_t min_objects = 3;
    std::size_t max_objects = 10;
    double min_separation = 0.4;
    double granularity = 0.05;
    bool edits = false;
    std::string out;
};

void cmd_gen(const GenFlags& f, Streams io) {
    GenConfig cfg;
    cfg.style = parse_style(f.style);
    cfg.seed = f.seed;
    cfg.min_objects = f.min_objects;
    cfg.max_objects = f.max_objects;
    cfg.min_separation = f.min_separation;
    cfg.quantizer = QuantizerConfig::for_style(cfg.style, f.granularity);
    auto scenes = generate_corpus(cfg, f.n);

    std::vector<std::string> lines(scenes.size());
    if (f.edits) {
        parallel_for(scenes.size(), [&](std::size_t i) {
            std::mt19937_64 rng(derive_seed(~f.seed, i));
            auto edit = random_edit(scenes[i], cfg, rng);
            lines[i] = json{{"scene", scene_to_json(scenes[i])},
                            {"instruction", edit.instruction},
                            {"edited", scene_to_json(edit.scene)}}
                           .dump();
        });
    } else {
        parallel_for(scenes.size(), [&](std::size_t i) { lines[i] = scene_to_json(scenes[i]).dump(); });
    }
    Output out(f.out, io.out);
    for (const auto& l : lines) out.get() << l << '\n';
    out.finish();
}

// --- serialize / parse -----------------------------------------------------

struct SerializeFlags {
    VocabFlags vocab;
    std::string in;
    std::string out;
    bool ids = false;
    bool binary = false;
};

void cmd_serialize(const SerializeFlags& f, Streams io) {
    Input in(f.in, io.in);
    auto scenes = read_scenes(in.get());
    const auto q = make_quantizer(f.vocab, first_style(scenes));
    if (!f.ids && !f.binary) {
        auto tokens = serialize_batch(scenes, q);
        Output out(f.out, io.out);
        for (const auto& t : tokens) write_token_line(out.get(), t);
        out.finish();
        return;
    }
    const auto vocab = make_vocab(f.vocab, q, scenes);
    std::vector<std::vector<TokenId>> ids(scenes.size());
    parallel_for(scenes.size(), [&](std::size_t i) {
        ids[i] = at_line(i + 1, [&] { return serialize_scene_ids(scenes[i], vocab); });
    });
    if (f.binary) {
        if (f.out.empty() || f.out == "-") throw UsageError("--binary needs --out FILE");
        Output out(f.out, io.out, true);
        BinaryStreamWriter writer(out.get());
        for (const auto& s : ids) writer.write(s);
        out.finish();
        return;
    }
    Output out(f.out, io.out);
    for (const auto& s : ids) write_id_line(out.get(), s);
    out.finish();
}

struct ParseFlags {
    VocabFlags vocab;
    std::string in;
    std::string out;
    bool ids = false;
    bool lenient = false;
};

void cmd_parse(const ParseFlags& f, Streams io) {
    Input in(f.in, io.in);
    const auto hint = flag_style(f.vocab.dataset);
    const auto q = make_quantizer(f.vocab);
    const auto mode = f.lenient ? ParseMode::Lenient : ParseMode::Strict;
    auto lines = read_lines(in.get());
    std::optional<Vocabulary> vocab;
    if (f.ids) vocab = make_vocab(f.vocab, q, {});

    Output out(f.out, io.out);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        auto result = at_line(i + 1, [&] {
            if (f.ids) return parse_scene_ids(parse_id_line(lines[i]), *vocab, mode, hint);
            auto tokens = split_token_line(lines[i]);
            return parse_scene(tokens, q, mode, hint);
        });
        for (const auto& d : result.diagnostics) {
            io.err << "line " << i + 1 << ": token " << d.position << ": " << d.message << '\n';
        }
        out.get() << scene_to_json(result.scene).dump() << '\n';
    }
    out.finish();
}

// --- build-seq / reorder ---------------------------------------------------

struct BuildFlags {
    VocabFlags vocab;
    std::string in;
    std::string out;
    std::string task = "rendering";
    std::string order = "image-first";
    std::string hop = "left";
    std::string weights;
    bool center_reorder = false;
    bool no_scene = false;
    std::size_t image_length = kImageTokensPerImage;
    double head_weight = kDefaultImageHeadWeight;
    std::size_t head_length = kDefaultImageHeadLength;
};

void cmd_build(const BuildFlags& f, Streams io) {
    Input in(f.in, io.in);
    auto docs = read_jsonl(in.get());
    if (f.order != "image-first" && f.order != "scene-first") throw UsageError("--order must be image-first or scene-first");
    const auto order = f.order == "image-first" ? ModalityOrder::ImageFirst : ModalityOrder::SceneFirst;

    // Parse every record up front so vocabulary words are known before building.
    struct Record {
        Scene scene, out_scene;
        std::vector<std::uint32_t> image, out_image;
        std::string text, answer;
    };
    std::vector<Record> records(docs.size());
    std::vector<Scene> all_scenes;
    std::vector<std::string> texts;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        at_line(i + 1, [&] {
            auto& r = records[i];
            const auto& d = docs[i];
            r.scene = scene_from_json(d.at("scene"));
            r.image = image_codes(d, "image");
            all_scenes.push_back(r.scene);
            if (f.task == "instruction") {
                r.text = text_field(d, "instruction");
                r.out_scene = scene_from_json(d.at("out_scene"));
                r.out_image = image_codes(d, "out_image");
                all_scenes.push_back(r.out_scene);
            } else if (f.task == "qa") {
                r.text = text_field(d, "question");
                r.answer = text_field(d, "answer");
                texts.push_back(r.answer);
            }
            if (!r.text.empty()) texts.push_back(r.text);
            return 0;
        });
    }
    if (f.task != "rendering" && f.task != "recognition" && f.task != "instruction" && f.task != "qa") {
        throw UsageError("--task must be rendering, recognition, instruction or qa");
    }
    const auto q = make_quantizer(f.vocab, first_style(all_scenes));
    const auto vocab = make_vocab(f.vocab, q, all_scenes, texts);
    BuildOptions opts;
    opts.center_reorder = f.center_reorder;
    opts.hop_order = parse_hop(f.hop);
    opts.image_length = f.image_length;
    opts.image_head_weight = f.head_weight;
    opts.image_head_length = f.head_length;
    const SequenceBuilder builder(vocab, opts);

    std::vector<TaskSequence> seqs(records.size());
    parallel_for(records.size(), [&](std::size_t i) {
        const auto& r = records[i];
        seqs[i] = at_line(i + 1, [&] {
            if (f.task == "rendering") return builder.rendering(r.scene, r.image);
            if (f.task == "recognition") return builder.recognition(r.image, r.scene);
            if (f.task == "instruction") return builder.instruction(r.image, r.scene, r.text, r.out_image, r.out_scene, order);
            return builder.qa(r.image, r.scene, r.text, r.answer, !f.no_scene);
        });
    });

    Output out(f.out, io.out);
    for (const auto& s : seqs) write_id_line(out.get(), s.ids);
    out.finish();
    if (!f.weights.empty()) {
        Output w(f.weights, io.out);
        for (const auto& s : seqs) write_weight_line(w.get(), s.weights);
        w.finish();
    }
}

struct ReorderFlags {
    std::string in;
    std::string out;
    std::string hop = "left";
    bool invert = false;
};

void cmd_reorder(const ReorderFlags& f, Streams io) {
    Input in(f.in, io.in);
    auto rows = read_id_lines(in.get());
    const auto hop = parse_hop(f.hop);
    std::map<std::size_t, ReorderPlan> plans;
    Output out(f.out, io.out);
    for (const auto& row : rows) {
        auto it = plans.find(row.size());
        if (it == plans.end()) it = plans.emplace(row.size(), center_plan(row.size(), hop)).first;
        auto result = f.invert ? invert<TokenId>(it->second, row) : apply<TokenId>(it->second, row);
        write_id_line(out.get(), result);
    }
    out.finish();
}

// --- eval ------------------------------------------------------------------

struct JaccardFlags {
    std::string gt;
    std::string pred;
    std::string dataset;
    std::vector<double> taus;
    std::string out;
};

void cmd_eval_jaccard(const JaccardFlags& f, Streams io) {
    Input gin(f.gt, io.in);
    auto gts = read_scenes(gin.get());
    if (f.pred.empty()) throw UsageError("--pred is required");
    Input pin(f.pred, io.in);
    auto preds = read_scenes(pin.get());
    const auto style = flag_style(f.dataset).value_or(first_style(gts).value_or(DatasetStyle::Clevr));
    const auto taus = f.taus.empty() ? default_taus(style) : f.taus;
    auto report = jaccard_dataset(gts, preds, MatchCriteria::for_style(style), taus);
    auto doc = report.to_json();
    doc["dataset"] = std::string(style_name(style));
    Output out(f.out, io.out);
    out.get() << doc.dump(2) << '\n';
    out.finish();
}

std::vector<QAItem> read_qa(std::istream& in) {
    auto docs = read_jsonl(in);
    std::vector<QAItem> items;
    for (std::size_t i = 0; i < docs.size(); ++i) items.push_back(at_line(i + 1, [&] { return qa_item_from_json(docs[i]); }));
    return items;
}

struct QAFlags {
    std::string gold;
    std::string pred;
    std::string train;
    std::string test;
    std::size_t runs = 0;
    std::uint64_t seed = 0;
    std::string out;
};

void cmd_eval_qa(const QAFlags& f, Streams io) {
    if (f.gold.empty() || f.pred.empty()) throw UsageError("--gold and --pred are required");
    Input gin(f.gold, io.in);
    auto gold = read_qa(gin.get());
    Input pin(f.pred, io.in);
    auto predicted = read_lines(pin.get());
    while (!predicted.empty() && blank(predicted.back()) && predicted.size() > gold.size()) predicted.pop_back();
    std::vector<std::string> expected;
    for (const auto& g : gold) expected.push_back(g.answer);
    const double acc = qa_accuracy(predicted, expected);
    Output out(f.out, io.out);
    out.get() << json{{"accuracy", acc}, {"n", gold.size()}}.dump(2) << '\n';
    out.finish();
}

void cmd_eval_baselines(const QAFlags& f, Streams io) {
    if (f.train.empty() || f.test.empty()) throw UsageError("--train and --test are required");
    Input trin(f.train, io.in);
    auto train = read_qa(trin.get());
    Input tein(f.test, io.in);
    auto test = read_qa(tein.get());
    auto b = qa_baselines(train, test);
    json majority = json::object();
    for (const auto& [type, answer] : majority_answers(train)) majority[std::string(answer_type_name(type))] = answer;
    json doc{{"random_expected", b.random_expected}, {"frequency", b.frequency}, {"majority", majority}};
    if (f.runs > 0) {
        std::mt19937_64 rng(f.seed);
        doc["random_simulated"] = simulate_random_baseline(train, test, f.runs, rng);
    }
    Output out(f.out, io.out);
    out.get() << doc.dump(2) << '\n';
    out.finish();
}

// --- stats -----------------------------------------------------------------

struct StatsFlags {
    VocabFlags vocab;
    std::string in;
    std::string out;
    bool center_reorder = false;
    std::string hop = "left";
    TokenId lo = 0;
    TokenId hi = static_cast<TokenId>(kImageCodebookSize);
};

void cmd_stats_position(const StatsFlags& f, Streams io) {
    Input in(f.in, io.in);
    auto rows = read_id_lines(in.get());
    if (f.center_reorder && !rows.empty()) {
        const auto plan = center_plan(rows.front().size(), parse_hop(f.hop));
        for (auto& r : rows) r = apply<TokenId>(plan, r);
    }
    auto shares = position_concentration(rows);
    Output out(f.out, io.out);
    write_concentration_csv(out.get(), shares);
    out.finish();
}

void cmd_stats_usage(const StatsFlags& f, Streams io) {
    Input in(f.in, io.in);
    auto rows = read_id_lines(in.get());
    auto hist = usage_histogram(rows, f.lo, f.hi);
    Output out(f.out, io.out);
    write_usage_csv(out.get(), hist);
    out.finish();
    io.err << "used " << hist.used() << " of " << hist.counts.size() << " codes (" << hist.used_fraction() << ")\n";
}

void cmd_stats_length(const StatsFlags& f, Streams io) {
    Input in(f.in, io.in);
    auto scenes = read_scenes(in.get());
    const auto q = make_quantizer(f.vocab, first_style(scenes));
    const double mean = mean_sequence_length(scenes, q);
    const double baseline = fragmenting_baseline_length(scenes, q);
    Output out(f.out, io.out);
    out.get() << json{{"scenes", scenes.size()},
                      {"mean_length", mean},
                      {"fragmenting_baseline_length", baseline},
                      {"ratio", baseline / mean}}
                     .dump(2)
              << '\n';
    out.finish();
}

// --- vocab -----------------------------------------------------------------

struct VocabCmdFlags {
    VocabFlags vocab;
    std::string manifest_out;
};

void cmd_vocab(const VocabCmdFlags& f, Streams io) {
    const auto q = make_quantizer(f.vocab);
    const auto v = make_vocab(f.vocab, q, {});
    if (!f.manifest_out.empty()) {
        Output m(f.manifest_out, io.out);
        v.write_manifest(m.get());
        m.finish();
    }
    json doc{{"granularity", v.quantizer().granularity},
             {"range", {v.quantizer().range_min, v.quantizer().range_max}},
             {"base", v.base_size()},
             {"words", v.word_count()},
             {"specials", v.special_count()},
             {"numeric", v.numeric_count()},
             {"image", v.image_codes()},
             {"shape", v.shape_codes()},
             {"base_total", v.total_size() - v.shape_codes()},
             {"total", v.total_size()}};
    io.out << doc.dump(2) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Structured 3D scene tokenization and evaluation toolkit", "scenetok"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config file; every flag can be set there, flags override it");
    int jobs = 0;
    app.add_option("--jobs", jobs, "Worker threads for batch work (0 = OpenMP default)");

    GenFlags gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate random scenes as JSON lines");
    gen_cmd->add_option("--style", gen.style)->capture_default_str();
    gen_cmd->add_option("--n", gen.n, "Number of scenes")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
    gen_cmd->add_option("--min-objects", gen.min_objects)->capture_default_str();
    gen_cmd->add_option("--max-objects", gen.max_objects)->capture_default_str();
    gen_cmd->add_option("--min-sep", gen.min_separation, "Minimum xy distance between objects")->capture_default_str();
    gen_cmd->add_option("--granularity", gen.granularity)->capture_default_str();
    gen_cmd->add_flag("--edits", gen.edits, "Emit {scene, instruction, edited} instruction pairs");
    gen_cmd->add_option("--out", gen.out);

    SerializeFlags ser;
    auto* ser_cmd = app.add_subcommand("serialize", "Scenes (JSON lines) to token lines");
    add_vocab_flags(ser_cmd, ser.vocab);
    ser_cmd->add_flag("--with-shapes", ser.vocab.with_shapes, "Include the shape-code block");
    ser_cmd->add_option("--in", ser.in);
    ser_cmd->add_option("--out", ser.out);
    ser_cmd->add_flag("--ids", ser.ids, "Emit token IDs instead of token strings");
    ser_cmd->add_flag("--binary", ser.binary, "Write a binary ID stream to --out");

    ParseFlags par;
    auto* par_cmd = app.add_subcommand("parse", "Token lines back to scenes");
    add_vocab_flags(par_cmd, par.vocab);
    par_cmd->add_flag("--with-shapes", par.vocab.with_shapes);
    par_cmd->add_option("--in", par.in);
    par_cmd->add_option("--out", par.out);
    par_cmd->add_flag("--ids", par.ids, "Input lines are token IDs");
    par_cmd->add_flag("--lenient", par.lenient, "Skip malformed objects and report them on stderr");

    BuildFlags bld;
    auto* bld_cmd = app.add_subcommand("build-seq", "Assemble task sequences from JSON-lines records");
    add_vocab_flags(bld_cmd, bld.vocab);
    bld_cmd->add_flag("--with-shapes", bld.vocab.with_shapes);
    bld_cmd->add_option("--task", bld.task, "rendering, recognition, instruction or qa")->capture_default_str();
    bld_cmd->add_option("--order", bld.order, "image-first or scene-first")->capture_default_str();
    bld_cmd->add_flag("--center-reorder", bld.center_reorder, "Emit image tokens center-out");
    bld_cmd->add_option("--hop", bld.hop, "First hop of the center reorder: left or right")->capture_default_str();
    bld_cmd->add_flag("--no-scene", bld.no_scene, "QA without the scene block");
    bld_cmd->add_option("--image-length", bld.image_length)->capture_default_str();
    bld_cmd->add_option("--head-weight", bld.head_weight)->capture_default_str();
    bld_cmd->add_option("--head-length", bld.head_length)->capture_default_str();
    bld_cmd->add_option("--weights", bld.weights, "Write per-token loss weights to this file");
    bld_cmd->add_option("--in", bld.in);
    bld_cmd->add_option("--out", bld.out);

    ReorderFlags reo;
    auto* reo_cmd = app.add_subcommand("reorder", "Center-out reorder (or restore) ID lines");
    reo_cmd->add_option("--hop", reo.hop)->capture_default_str();
    reo_cmd->add_flag("--invert", reo.invert, "Restore raster order");
    reo_cmd->add_option("--in", reo.in);
    reo_cmd->add_option("--out", reo.out);

    auto* eval_cmd = app.add_subcommand("eval", "Evaluation");
    eval_cmd->require_subcommand(1);
    JaccardFlags jac;
    auto* jac_cmd = eval_cmd->add_subcommand("jaccard", "Scene Jaccard index over a tau set");
    jac_cmd->add_option("--gt", jac.gt)->required();
    jac_cmd->add_option("--pred", jac.pred)->required();
    jac_cmd->add_option("--dataset", jac.dataset);
    jac_cmd->add_option("--tau", jac.taus, "Comma-separated thresholds")->delimiter(',');
    jac_cmd->add_option("--out", jac.out);
    QAFlags qa;
    auto* qa_cmd = eval_cmd->add_subcommand("qa", "Exact-match QA accuracy");
    qa_cmd->add_option("--gold", qa.gold, "QA items as JSON lines")->required();
    qa_cmd->add_option("--pred", qa.pred, "One predicted answer per line")->required();
    qa_cmd->add_option("--out", qa.out);
    auto* base_cmd = eval_cmd->add_subcommand("qa-baselines", "Random and frequency QA baselines");
    base_cmd->add_option("--train", qa.train)->required();
    base_cmd->add_option("--test", qa.test)->required();
    base_cmd->add_option("--runs", qa.runs, "Also simulate the random baseline this many times");
    base_cmd->add_option("--seed", qa.seed);
    base_cmd->add_option("--out", qa.out);

    StatsFlags st;
    auto* stats_cmd = app.add_subcommand("stats", "Token statistics");
    stats_cmd->require_subcommand(1);
    auto* pos_cmd = stats_cmd->add_subcommand("position", "Per-position most-common-token share (CSV)");
    pos_cmd->add_option("--in", st.in);
    pos_cmd->add_option("--out", st.out);
    pos_cmd->add_flag("--center-reorder", st.center_reorder, "Reorder each line center-out first");
    pos_cmd->add_option("--hop", st.hop)->capture_default_str();
    auto* use_cmd = stats_cmd->add_subcommand("usage", "Code usage histogram over [lo, hi) (CSV)");
    use_cmd->add_option("--in", st.in);
    use_cmd->add_option("--out", st.out);
    use_cmd->add_option("--lo", st.lo)->capture_default_str();
    use_cmd->add_option("--hi", st.hi)->capture_default_str();
    auto* len_cmd = stats_cmd->add_subcommand("length", "Scene sequence length vs. a fragmenting tokenizer (JSON)");
    add_vocab_flags(len_cmd, st.vocab, false);
    len_cmd->add_option("--in", st.in);
    len_cmd->add_option("--out", st.out);

    VocabCmdFlags voc;
    auto* voc_cmd = app.add_subcommand("vocab", "Report vocabulary block sizes");
    add_vocab_flags(voc_cmd, voc.vocab);
    voc_cmd->add_flag("--with-shapes", voc.vocab.with_shapes, "Include the 8192-entry shape-code block");
    voc_cmd->add_option("--manifest", voc.manifest_out, "Write the vocabulary manifest here");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ErrorCode::Usage);
    }

    const Streams io{in, out, err};
    try {
        set_thread_count(jobs);
        if (*gen_cmd) cmd_gen(gen, io);
        else if (*ser_cmd) cmd_serialize(ser, io);
        else if (*par_cmd) cmd_parse(par, io);
        else if (*bld_cmd) cmd_build(bld, io);
        else if (*reo_cmd) cmd_reorder(reo, io);
        else if (*jac_cmd) cmd_eval_jaccard(jac, io);
        else if (*qa_cmd) cmd_eval_qa(qa, io);
        else if (*base_cmd) cmd_eval_baselines(qa, io);
        else if (*pos_cmd) cmd_stats_position(st, io);
        else if (*use_cmd) cmd_stats_usage(st, io);
        else if (*len_cmd) cmd_stats_length(st, io);
        else if (*voc_cmd) cmd_vocab(voc, io);
        out.flush();
    } catch (const Error& e) {
        err << "error [" << error_code_name(e.code()) << "]: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace scenetok::cli
