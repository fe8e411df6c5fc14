#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "brute_force.hpp"
#include "table2.hpp"

#include "stsearch/predictor.hpp"

#include <numeric>
#include <thread>

using namespace stsearch;
using namespace table2;

namespace {

constexpr double kTol = 1e-12;

void check_vector(const PredictionVector& v, std::vector<double> expect) {
    REQUIRE(v.probs.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(v.probs[i] == doctest::Approx(expect[i]).epsilon(kTol));
    }
}

Corpus build(const brute::Rows& rows, std::size_t n_loc) {
    std::vector<DiscreteTrajectory> ts;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ts.push_back(DiscreteTrajectory::from_locations("o" + std::to_string(i), "d", rows[i]));
    }
    return Corpus::build(ts, n_loc);
}

}  // namespace

TEST_CASE("first-order rows of the toy corpus") {
    const auto c = corpus();
    check_vector(first_order(c, {l2, t1}, t3), {1.0 / 3, 0, 2.0 / 3, 0});
    check_vector(first_order(c, {l4, t1}, t3), {0.25, 0.25, 0.25, 0.25});
    check_vector(first_order(c, {l2, t1}, t2), {1.0 / 3, 1.0 / 3, 0, 1.0 / 3});
    CHECK_THROWS_AS(first_order(c, {l2, t2}, t2), std::invalid_argument);
}

TEST_CASE("second-order rows of the toy corpus") {
    const auto c = corpus();
    check_vector(second_order(c, {l2, t1}, {l4, t2}, t3), {0, 0, 1, 0});
    check_vector(second_order(c, {l2, t1}, {l3, t2}, t3), {0.25, 0.25, 0.25, 0.25});
    // no trajectory has l1 at t1 and l4 at t2, so the row falls back to (l4,t2)
    check_vector(second_order(c, {l1, t1}, {l4, t2}, t3), first_order(c, {l4, t2}, t3).probs);
    CHECK_THROWS_AS(second_order(c, {l2, t2}, {l4, t1}, t3), std::invalid_argument);
    CHECK_THROWS_AS(second_order(c, {l2, t1}, {l4, t3}, t3), std::invalid_argument);
}

TEST_CASE("pooled first order counts every start moment at the same lag") {
    const auto c = corpus();
    check_vector(time_specific_first_order(c, {l2, t1}, t3, true), {1.0 / 3, 0, 2.0 / 3, 0});
    check_vector(time_specific_first_order(c, {l2, t1}, t3, false), first_order(c, {l2, t1}, t3).probs);
    // lag 1 from l2: (l2,t1) leads to l2,l1,l4 and (l2,t2) leads to l3,l3
    check_vector(time_specific_first_order(c, {l2, t2}, t3, true), {0.2, 0.2, 0.4, 0.2});
    const auto unused = Corpus::build(trajectories(), 5);
    check_vector(time_specific_first_order(unused, {4, t1}, t2, true), {0.2, 0.2, 0.2, 0.2, 0.2});
}

TEST_CASE("predict dispatches on the evidence") {
    const auto c = corpus();
    check_vector(predict(c, Evidence{{l2, t1}}, t3), {1.0 / 3, 0, 2.0 / 3, 0});
    const Evidence two{{l2, t1}, {l4, t2}};
    check_vector(predict(c, two, t3, PredictorVariant::second_order), {0, 0, 1, 0});
    check_vector(predict(c, two, t3, PredictorVariant::first_order), first_order(c, {l4, t2}, t3).probs);
    check_vector(predict(c, Evidence{{l2, t1}}, t3, PredictorVariant::second_order), {1.0 / 3, 0, 2.0 / 3, 0});
    CHECK_THROWS_AS(predict(c, Evidence{}, t3), std::invalid_argument);
    Evidence ev{{l2, t2}};
    CHECK_THROWS_AS(ev.append({l1, t1}), std::invalid_argument);
}

TEST_CASE("rank orders by probability then location") {
    const auto r = rank(PredictionVector{t3, {1.0 / 3, 0, 2.0 / 3, 0}});
    CHECK(r.order == std::vector<LocationId>{l3, l1, l2, l4});
    CHECK(rank(PredictionVector{0, {0.25, 0.25, 0.25, 0.25}}).order == std::vector<LocationId>{0, 1, 2, 3});
    CHECK(rank(PredictionVector{0, {0, 0, 0, 1}}).order.front() == 3);

    const auto counts = first_order_counts(corpus(), {l2, t1}, t3);
    CHECK(rank(counts).order == r.order);
    CHECK(rank(TransitionCounts{t3, 4, 0, {}}).order == std::vector<LocationId>{0, 1, 2, 3});
}

TEST_CASE("prediction properties on random corpora") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n_loc = 2 + trial % 5, n_mom = 3 + trial % 3;
        const auto rows = brute::random_rows(rng, 3 + trial % 30, n_loc, n_mom);
        const auto c = build(rows, n_loc);
        for (LocationId l = 0; l < n_loc; ++l) {
            for (MomentId t = 0; t + 1 < n_mom; ++t) {
                for (MomentId target = t + 1; target < n_mom; ++target) {
                    const auto v = first_order(c, {l, t}, target);
                    const double sum = std::accumulate(v.probs.begin(), v.probs.end(), 0.0);
                    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
                    const UnitConstraint from[] = {{l, t}};
                    const auto denom = static_cast<double>(c.count_matching(from));
                    const auto ref = brute::first_order(rows, n_loc, l, t, target);
                    for (std::size_t j = 0; j < n_loc; ++j) {
                        CHECK(v.probs[j] >= 0.0);
                        CHECK(v.probs[j] == doctest::Approx(ref[j]).epsilon(1e-12));
                        if (denom > 0) {
                            const double scaled = v.probs[j] * denom;
                            CHECK(std::abs(scaled - std::round(scaled)) < 1e-9);
                        }
                    }
                    check_vector(second_order(c, {l, t}, {l, t}, target), v.probs);

                    const auto r = rank(v);
                    std::vector<double> back(n_loc);
                    for (std::size_t k = 0; k < n_loc; ++k) {
                        back[r.order[k]] = r.probs[k];
                        if (k > 0) {
                            CHECK(r.probs[k] <= r.probs[k - 1]);
                            if (r.probs[k] == r.probs[k - 1]) {
                                CHECK(r.order[k] > r.order[k - 1]);
                            }
                        }
                    }
                    CHECK(back == v.probs);
                    CHECK(r.order == brute::rank_order(v.probs));
                }
            }
        }
    }
}

TEST_CASE("empirical frequency equals the first-order row when test equals train") {
    std::mt19937_64 rng(9);
    const auto rows = brute::random_rows(rng, 40, 3, 4);
    const auto c = build(rows, 3);
    for (LocationId l = 0; l < 3; ++l) {
        const auto v = first_order(c, {l, 0}, 3);
        std::vector<double> freq(3, 0.0);
        double n = 0;
        for (const auto& r : rows) {
            if (r[0] == l) {
                freq[r[3]] += 1;
                n += 1;
            }
        }
        if (n == 0) {
            continue;
        }
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(freq[j] / n == doctest::Approx(v.probs[j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("memoized predictor agrees with direct computation under concurrency") {
    std::mt19937_64 rng(13);
    const std::size_t n_loc = 6, n_mom = 5;
    const auto rows = brute::random_rows(rng, 50, n_loc, n_mom);
    const auto c = build(rows, n_loc);
    const Predictor memo(c, 16);
    std::vector<std::jthread> pool;
    std::atomic<int> mismatches{0};
    for (int w = 0; w < 4; ++w) {
        pool.emplace_back([&, w] {
            for (int rep = 0; rep < 20; ++rep) {
                for (LocationId l = 0; l < n_loc; ++l) {
                    for (LocationId m = 0; m < n_loc; ++m) {
                        const Evidence ev{{l, 0}, {m, static_cast<MomentId>(1 + (rep + w) % 2)}};
                        for (auto variant : {PredictorVariant::first_order, PredictorVariant::second_order,
                                             PredictorVariant::pooled_first_order}) {
                            if (memo.predict(ev, 4, variant).probs != predict(c, ev, 4, variant).probs) {
                                ++mismatches;
                            }
                        }
                    }
                }
            }
        });
    }
    pool.clear();
    CHECK(mismatches == 0);
    CHECK(memo.cached_rows() <= 16);
}
