#include <doctest.h>

#include <numeric>
#include <random>

#include "scenetok/image_order.hpp"
#include "support.hpp"

using namespace scenetok;

TEST_CASE("small plans") {
    CHECK(center_plan(6).perm == std::vector<std::size_t>{3, 2, 4, 1, 5, 0});
    CHECK(center_plan(1).perm == std::vector<std::size_t>{0});
    CHECK(center_plan(2).perm == std::vector<std::size_t>{1, 0});
    CHECK(center_plan(5).perm == std::vector<std::size_t>{2, 1, 3, 0, 4});
    CHECK(center_plan(6, HopOrder::RightFirst).perm == std::vector<std::size_t>{3, 4, 2, 5, 1, 0});
    CHECK_THROWS_AS(center_plan(0), LengthMismatchError);
}

TEST_CASE("plans match the sorting oracle and are bijections") {
    for (std::size_t n = 1; n <= 512; ++n) {
        for (auto order : {HopOrder::LeftFirst, HopOrder::RightFirst}) {
            const auto plan = center_plan(n, order);
            REQUIRE(plan.perm == testsupport::oracle_center_perm(n, order == HopOrder::LeftFirst));
            std::vector<bool> seen(n, false);
            for (auto i : plan.perm) {
                REQUIRE(i < n);
                REQUIRE(!seen[i]);
                seen[i] = true;
            }
            REQUIRE(plan.perm[0] == n / 2);
        }
    }
    const auto p256 = center_plan(256);
    CHECK(p256.perm[0] == 128);
}

TEST_CASE("apply and invert") {
    const std::vector<char> raster{'a', 'b', 'c', 'd', 'e', 'f'};
    const auto plan = center_plan(6);
    const auto out = apply<char>(plan, raster);
    CHECK(out == std::vector<char>{'d', 'c', 'e', 'b', 'f', 'a'});
    CHECK(invert<char>(plan, out) == raster);

    const std::vector<int> constant(256, 7);
    CHECK(apply<int>(center_plan(256), constant) == constant);
    CHECK_THROWS_AS(apply<int>(plan, constant), LengthMismatchError);
    CHECK_THROWS_AS(invert<int>(plan, constant), LengthMismatchError);
}

TEST_CASE("round trip on random sequences") {
    std::mt19937 rng(1);
    std::uniform_int_distribution<int> code(0, 1023);
    const auto plan = center_plan(256);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> seq(256);
        for (auto& v : seq) v = code(rng);
        REQUIRE(invert<int>(plan, apply<int>(plan, seq)) == seq);
        REQUIRE(apply<int>(plan, invert<int>(plan, seq)) == seq);
    }
}
