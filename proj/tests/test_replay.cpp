#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "pqc/replay.hpp"

using namespace pqc;

namespace {

Experience exp_with(long long id) {
    Experience e;
    e.scene_id = id;
    return e;
}

// chi-squared statistic against expected counts
double chi2(const std::vector<long long>& observed, const std::vector<double>& expected) {
    double s = 0.0;
    for (size_t i = 0; i < observed.size(); ++i) {
        double d = observed[i] - expected[i];
        s += d * d / expected[i];
    }
    return s;
}

}  // namespace

TEST_CASE("empty buffer refuses to sample") {
    PERBuffer buf(8, 0.6, 1e-3, 0.4, 1.0);
    Rng rng(1);
    REQUIRE_THROWS_AS(buf.sample(4, rng), EmptyBuffer);
}

TEST_CASE("equal priorities sample uniformly with unit weights") {
    PERBuffer buf(16, 0.6, 1e-3, 0.4, 1.0);
    for (int i = 0; i < 16; ++i) buf.insert_with_priority(exp_with(i), 2.5);
    Rng rng(7);
    std::vector<long long> counts(16, 0);
    const int draws = 160000;
    for (int i = 0; i < draws / 64; ++i) {
        auto s = buf.sample(64, rng);
        for (size_t k = 0; k < s.indices.size(); ++k) {
            ++counts[s.indices[k]];
            REQUIRE(s.is_weights[k] == 1.0);
        }
    }
    std::vector<double> expected(16, draws / 16.0);
    REQUIRE(chi2(counts, expected) < 30.578);  // chi2_{15} at p = 0.01
}

TEST_CASE("alpha zero reduces to uniform sampling regardless of priorities") {
    PERBuffer buf(8, 0.0, 1e-3, 0.0, 0.0);
    for (int i = 0; i < 8; ++i) buf.insert_with_priority(exp_with(i), i == 0 ? 100.0 : 0.5);
    Rng rng(11);
    std::vector<long long> counts(8, 0);
    const int draws = 80000;
    for (int i = 0; i < draws / 40; ++i) {
        auto s = buf.sample(40, rng);
        for (size_t k = 0; k < s.indices.size(); ++k) {
            ++counts[s.indices[k]];
            REQUIRE(s.is_weights[k] == 1.0);  // (N * 1/N)^0 = 1
        }
    }
    std::vector<double> expected(8, draws / 8.0);
    REQUIRE(chi2(counts, expected) < 18.475);  // chi2_{7} at p = 0.01
}

TEST_CASE("priorities (1,3) with alpha 1 draw at the 1:3 rate") {
    PERBuffer buf(2, 1.0, 0.0, 0.4, 1.0);
    buf.insert_with_priority(exp_with(0), 1.0);
    buf.insert_with_priority(exp_with(1), 3.0);
    Rng rng(13);
    std::vector<long long> counts(2, 0);
    const int draws = 100000;
    for (int i = 0; i < draws / 50; ++i) {
        auto s = buf.sample(50, rng);
        for (size_t idx : s.indices) ++counts[idx];
    }
    std::vector<double> expected{draws * 0.25, draws * 0.75};
    REQUIRE(chi2(counts, expected) < 6.635);  // chi2_{1} at p = 0.01
}

TEST_CASE("importance weights never exceed one and scale with rarity") {
    PERBuffer buf(4, 1.0, 0.0, 0.4, 1.0);
    buf.insert_with_priority(exp_with(0), 1.0);
    buf.insert_with_priority(exp_with(1), 1.0);
    buf.insert_with_priority(exp_with(2), 2.0);
    buf.insert_with_priority(exp_with(3), 4.0);
    buf.set_progress(1.0);  // beta = 1
    Rng rng(17);
    auto s = buf.sample(256, rng);
    bool saw_small = false;
    for (size_t k = 0; k < s.indices.size(); ++k) {
        REQUIRE(s.is_weights[k] <= 1.0 + 1e-12);
        if (s.indices[k] <= 1) {
            REQUIRE(s.is_weights[k] == Catch::Approx(1.0));  // rarest item: max weight
            saw_small = true;
        }
        if (s.indices[k] == 3) REQUIRE(s.is_weights[k] == Catch::Approx(0.25));
    }
    REQUIRE(saw_small);
}

TEST_CASE("beta anneals linearly with progress") {
    PERBuffer buf(4, 0.6, 1e-3, 0.4, 1.0);
    REQUIRE(buf.beta() == 0.4);
    buf.set_progress(0.5);
    REQUIRE(buf.beta() == Catch::Approx(0.7));
    buf.set_progress(2.0);  // clamped
    REQUIRE(buf.beta() == 1.0);
}

TEST_CASE("new items enter at the running maximum priority") {
    PERBuffer buf(8, 1.0, 0.0, 0.4, 1.0);
    buf.insert(exp_with(0));  // default max = 1.0
    REQUIRE(buf.item(0).priority == 1.0);
    buf.update_priorities({0}, {5.0});
    buf.insert(exp_with(1));
    REQUIRE(buf.item(1).priority == 5.0);
}

TEST_CASE("priority updates change the sampling distribution") {
    PERBuffer buf(2, 1.0, 0.0, 0.4, 1.0);
    buf.insert_with_priority(exp_with(0), 1.0);
    buf.insert_with_priority(exp_with(1), 1.0);
    buf.update_priorities({1}, {9.0});  // |loss| + eps, eps = 0
    Rng rng(23);
    long long hits = 0;
    const int draws = 50000;
    for (int i = 0; i < draws / 50; ++i) {
        auto s = buf.sample(50, rng);
        for (size_t idx : s.indices) hits += idx == 1;
    }
    double frac = double(hits) / draws;
    REQUIRE(frac == Catch::Approx(0.9).margin(0.01));
}

TEST_CASE("ring buffer overwrites the oldest items at capacity") {
    PERBuffer buf(4, 1.0, 0.0, 0.4, 1.0);
    for (int i = 0; i < 6; ++i) buf.insert_with_priority(exp_with(i), 1.0);
    REQUIRE(buf.size() == 4);
    std::vector<long long> ids;
    for (size_t i = 0; i < 4; ++i) ids.push_back(buf.item(i).scene_id);
    std::sort(ids.begin(), ids.end());
    REQUIRE(ids == std::vector<long long>{2, 3, 4, 5});
}

TEST_CASE("sampling is reproducible under a fixed seed") {
    PERBuffer buf(16, 0.6, 1e-3, 0.4, 1.0);
    for (int i = 0; i < 16; ++i) buf.insert_with_priority(exp_with(i), 1.0 + i);
    Rng a(31), b(31);
    auto s1 = buf.sample(32, a);
    auto s2 = buf.sample(32, b);
    REQUIRE(s1.indices == s2.indices);
    REQUIRE(s1.is_weights == s2.is_weights);
}
