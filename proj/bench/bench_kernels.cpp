#include <benchmark/benchmark.h>

#include <random>

#include "scenetok/evaluator.hpp"
#include "scenetok/number_encoding.hpp"
#include "scenetok/scene_gen.hpp"
#include "scenetok/serializer.hpp"
#include "scenetok/token_stats.hpp"

using namespace scenetok;

namespace {

const QuantizerConfig kQ = QuantizerConfig::for_style(DatasetStyle::Clevr);

const std::vector<Scene>& corpus() {
    static const auto scenes = [] {
        GenConfig cfg;
        cfg.seed = 1;
        return generate_corpus_serial(cfg, 2000);
    }();
    return scenes;
}

const std::vector<Scene>& shifted_corpus() {
    static const auto scenes = [] {
        auto out = corpus();
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> jitter(-0.04, 0.04);
        for (auto& s : out)
            for (auto& o : s.objects) (*o.location)[0] += jitter(rng);
        return out;
    }();
    return scenes;
}

const std::vector<Sequence>& image_codes() {
    static const auto seqs = [] {
        std::mt19937_64 rng(3);
        std::uniform_int_distribution<TokenId> code(0, 1023);
        std::vector<Sequence> out(4000, Sequence(256));
        for (auto& s : out)
            for (auto& t : s) t = code(rng);
        return out;
    }();
    return seqs;
}

void BM_serialize_batch(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(serialize_batch(corpus(), kQ));
}
void BM_serialize_batch_serial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(serialize_batch_serial(corpus(), kQ));
}

void BM_sincos_table(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sincos_table(4096, 256));
}
void BM_sincos_table_serial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sincos_table_serial(4096, 256));
}

void BM_jaccard_dataset(benchmark::State& state) {
    const auto crit = MatchCriteria::for_style(DatasetStyle::Clevr);
    const auto taus = default_taus(DatasetStyle::Clevr);
    for (auto _ : state) benchmark::DoNotOptimize(jaccard_dataset(corpus(), shifted_corpus(), crit, taus));
}
void BM_jaccard_dataset_serial(benchmark::State& state) {
    const auto crit = MatchCriteria::for_style(DatasetStyle::Clevr);
    const auto taus = default_taus(DatasetStyle::Clevr);
    for (auto _ : state) benchmark::DoNotOptimize(jaccard_dataset_serial(corpus(), shifted_corpus(), crit, taus));
}

void BM_generate_corpus(benchmark::State& state) {
    GenConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(generate_corpus(cfg, 500));
}
void BM_generate_corpus_serial(benchmark::State& state) {
    GenConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(generate_corpus_serial(cfg, 500));
}

void BM_usage_histogram(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(usage_histogram(image_codes(), 0, 1024));
}
void BM_usage_histogram_serial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(usage_histogram_serial(image_codes(), 0, 1024));
}

void BM_position_concentration(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(position_concentration(image_codes()));
}
void BM_position_concentration_serial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(position_concentration_serial(image_codes()));
}

}  // namespace

BENCHMARK(BM_serialize_batch)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_serialize_batch_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sincos_table)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sincos_table_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_jaccard_dataset)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_jaccard_dataset_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_generate_corpus)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_generate_corpus_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_usage_histogram)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_usage_histogram_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_position_concentration)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_position_concentration_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
