#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "scenetok/errors.hpp"
#include "scenetok/image_order.hpp"
#include "scenetok/token_stats.hpp"

using namespace scenetok;

namespace {

// Images whose top half is mostly one background code and whose bottom half
// is uniform noise.
std::vector<Sequence> banded_images(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<TokenId> code(0, 1023);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Sequence> out(count, Sequence(256));
    for (auto& s : out) {
        for (std::size_t i = 0; i < 256; ++i) s[i] = (i < 128 && unit(rng) < 0.9) ? 17 : code(rng);
    }
    return out;
}

double head_mean(const std::vector<double>& shares, std::size_t k) {
    double sum = 0;
    for (std::size_t i = 0; i < k; ++i) sum += shares[i];
    return sum / static_cast<double>(k);
}

}  // namespace

TEST_CASE("concentration extremes") {
    std::vector<Sequence> same(6, Sequence{4, 5, 6});
    CHECK(position_concentration(same) == std::vector<double>{1.0, 1.0, 1.0});

    std::vector<Sequence> distinct;
    for (TokenId t = 0; t < 4; ++t) distinct.push_back({t, 9});
    const auto c = position_concentration(distinct);
    CHECK(c[0] == 0.25);
    CHECK(c[1] == 1.0);
    CHECK(position_mode(distinct) == std::vector<TokenId>{0, 9});

    std::vector<Sequence> ragged{{1, 2}, {1}};
    CHECK_THROWS_AS(position_concentration(ragged), RaggedInputError);
    CHECK_THROWS_AS(position_concentration({}), EmptyInputError);
}

TEST_CASE("usage histogram") {
    std::vector<Sequence> seqs{{0, 0, 1}};
    const auto h = usage_histogram(seqs, 0, 3);
    CHECK(h.counts == std::vector<std::uint64_t>{2, 1, 0});
    CHECK(h.total() == 3);
    CHECK(h.used() == 2);
    CHECK(h.used_fraction() == doctest::Approx(2.0 / 3.0));

    const auto offset = usage_histogram(std::vector<Sequence>{{101, 102}}, 100, 104);
    CHECK(offset.counts == std::vector<std::uint64_t>{0, 1, 1, 0});

    CHECK(usage_histogram(std::vector<Sequence>{}, 0, 4).used() == 0);
    CHECK_THROWS_AS(usage_histogram(seqs, 0, 1), OutOfRangeError);
    CHECK_THROWS_AS(usage_histogram(seqs, 5, 5), ConfigError);
}

TEST_CASE("uniform codes fill the codebook as the coupon collector predicts") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<TokenId> code(0, 1023);
    const std::size_t draws = 2048;
    std::vector<Sequence> seqs(8, Sequence(draws / 8));
    for (auto& s : seqs)
        for (auto& t : s) t = code(rng);
    const double expected = 1.0 - std::pow(1.0 - 1.0 / 1024.0, static_cast<double>(draws));
    const auto h = usage_histogram(seqs, 0, 1024);
    CHECK(h.total() == draws);
    CHECK(std::fabs(h.used_fraction() - expected) < 0.03);
}

TEST_CASE("parallel kernels agree with the serial ones") {
    const auto imgs = banded_images(300, 2);
    CHECK(position_concentration(imgs) == position_concentration_serial(imgs));
    const auto a = usage_histogram(imgs, 0, 1024);
    const auto b = usage_histogram_serial(imgs, 0, 1024);
    CHECK(a.counts == b.counts);
}

TEST_CASE("center reordering moves low-concentration positions to the front") {
    const auto raster = banded_images(400, 3);
    const auto plan = center_plan(256);
    std::vector<Sequence> centered;
    for (const auto& s : raster) centered.push_back(apply<TokenId>(plan, s));
    const auto before = position_concentration(raster);
    const auto after = position_concentration(centered);
    CHECK(head_mean(before, 5) > 0.85);
    CHECK(head_mean(after, 5) < 0.5);
}

TEST_CASE("csv output") {
    std::ostringstream a, b;
    std::vector<double> shares{1.0, 0.25};
    write_concentration_csv(a, shares);
    CHECK(a.str() == "position,share\n0,1\n1,0.25\n");
    write_usage_csv(b, usage_histogram(std::vector<Sequence>{{3}}, 2, 4));
    CHECK(b.str() == "code,count\n2,0\n3,1\n");
}
