#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "brute_force.hpp"
#include "table2.hpp"

#include "stsearch/estimator.hpp"
#include "stsearch/harness.hpp"
#include "stsearch/oracle.hpp"
#include "stsearch/strategies.hpp"

#include <set>

using namespace stsearch;
using namespace table2;

namespace {

struct Run {
    TrackResult result;
    std::vector<SearchRecord> log;
};

Run run(Strategy s, const Predictor& p, const DiscreteTrajectory& truth, UnitConstraint start, MomentId end,
        PredictorVariant v = PredictorVariant::first_order, std::optional<MomentId> mid = std::nullopt) {
    auto session = SearchSession::open(truth, end);
    auto r = run_strategy(s, {start, end, p, session}, v, mid);
    CHECK(r.total_searches == session.cost());
    return {std::move(r), {session.log().begin(), session.log().end()}};
}

Corpus build(const brute::Rows& rows, std::size_t n_loc) {
    std::vector<DiscreteTrajectory> ts;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ts.push_back(DiscreteTrajectory::from_locations("o" + std::to_string(i), "d", rows[i]));
    }
    return Corpus::build(ts, n_loc);
}

}  // namespace

TEST_CASE("strategy names") {
    for (auto s : kAllStrategies) {
        CHECK(parse_strategy(to_string(s)) == s);
    }
    CHECK_THROWS_AS(parse_strategy("best"), std::invalid_argument);
}

TEST_CASE("ALT on the toy corpus") {
    const Predictor p(corpus());
    const auto hit = run(Strategy::alt, p, row(1), {l2, t1}, t3);
    CHECK(hit.result.total_searches == 1);
    CHECK(hit.result.found_location == l3);
    const auto second = run(Strategy::alt, p, row(2), {l2, t1}, t3);
    CHECK(second.result.total_searches == 2);
    CHECK(second.log.front().location == l3);
    CHECK(second.result.found_location == l1);
    CHECK(format_steps(second.result) == "2:2:0");
}

TEST_CASE("IPM on the toy corpus") {
    const Predictor p(corpus());
    for (auto v : {PredictorVariant::first_order, PredictorVariant::second_order}) {
        const auto r = run(Strategy::ipm, p, row(4), {l2, t1}, t3, v, t2);
        CHECK(r.result.total_searches == 4);
        REQUIRE(r.result.steps.size() == 2);
        CHECK(r.result.steps[0].spent == 3);
        CHECK(r.result.steps[0].hit == l4);
        CHECK(r.result.found_location == l3);
    }
    const auto at_end = run(Strategy::ipm, p, row(2), {l2, t1}, t3, PredictorVariant::first_order, t3);
    CHECK(at_end.result.total_searches == run(Strategy::alt, p, row(2), {l2, t1}, t3).result.total_searches);
    auto session = SearchSession::open(row(2));
    CHECK_THROWS_AS(run_ipm({{l2, t1}, t3, p, session}, t1), std::invalid_argument);
}

TEST_CASE("IEM on the toy corpus keeps the end moment") {
    const Predictor p(corpus());
    auto session = SearchSession::open(row(2));
    const Episode e{{l2, t1}, t3, p, session};
    CHECK(iem_choose_moment(e, PredictorVariant::second_order) == t3);
    CHECK(iem_choose_moment(e, PredictorVariant::first_order) == t3);
    CHECK(run(Strategy::iem, p, row(2), {l2, t1}, t3).result.total_searches == 2);
}

TEST_CASE("IEM picks an interior moment when the mid hit sharpens the end") {
    // one mid branch per half of eight end locations
    brute::Rows rows;
    for (std::uint32_t end = 0; end < 8; ++end) {
        rows.push_back({0, end < 4 ? 0u : 1u, end});
    }
    const Predictor p(build(rows, 8));
    auto session = SearchSession::open(p.corpus().trajectory(6));
    const Episode e{{0, 0}, 2, p, session};
    CHECK(expected_searches(*p.counts(Evidence{{0, 0}}, 2, PredictorVariant::first_order)) ==
          doctest::Approx(4.5));
    CHECK(estimate_second_stage(p, {0, 0}, 1, 2) == doctest::Approx(2.5));
    CHECK(iem_choose_moment(e, PredictorVariant::first_order) == 1);
    const auto r = run_iem(e);
    CHECK(r.steps.size() == 2);
    CHECK(r.found_location == 6);
}

TEST_CASE("IHMs on the toy corpus") {
    const Predictor p(corpus());
    const auto r = run(Strategy::ihms, p, row(2), {l2, t1}, t3);
    CHECK(r.result.total_searches == 2);
    CHECK(r.result.found_location == l1);
    REQUIRE(r.result.steps.size() == 1);
    CHECK(r.result.steps[0].moment == t3);
}

TEST_CASE("IHMs steps four moments at a time on a branching corpus") {
    // a location is held for four moments, then each path splits four ways;
    // location ids number the nodes of the branching tree
    constexpr std::uint32_t kBlocks = 4, kBranch = 4, kBlockLen = 4;
    brute::Rows rows;
    const std::uint32_t leaves = kBranch * kBranch * kBranch;
    std::uint32_t n_loc = 0;
    for (std::uint32_t leaf = 0; leaf < leaves; ++leaf) {
        std::vector<std::uint32_t> r;
        std::uint32_t level_base = 0, width = 1;
        for (std::uint32_t b = 0; b < kBlocks; ++b) {
            const std::uint32_t node = level_base + leaf / (leaves / width);
            for (std::uint32_t k = 0; k < kBlockLen; ++k) {
                r.push_back(node);
            }
            n_loc = std::max(n_loc, node + 1);
            level_base += width;
            width *= kBranch;
        }
        rows.push_back(r);
    }
    const Predictor p(build(rows, n_loc));
    for (TrajectoryId truth : {0u, 17u, 63u}) {
        const auto r = run(Strategy::ihms, p, p.corpus().trajectory(truth), {0, 3}, 15);
        REQUIRE(r.result.steps.size() == 3);
        CHECK(r.result.steps[0].moment == 7);
        CHECK(r.result.steps[1].moment == 11);
        CHECK(r.result.steps[2].moment == 15);
        CHECK(r.result.found_location == rows[truth][15]);
    }
}

TEST_CASE("IHUs on the toy corpus") {
    const Predictor p(corpus());
    const auto direct = run(Strategy::ihus, p, row(1), {l2, t1}, t3);
    CHECK(direct.result.total_searches == 1);
    CHECK(direct.log.front().location == l3);
    CHECK(direct.log.front().moment == t3);

    const auto refiltered = run(Strategy::ihus, p, row(2), {l2, t1}, t3);
    REQUIRE(refiltered.log.size() == 2);
    CHECK(refiltered.log[0].location == l3);
    CHECK_FALSE(refiltered.log[0].outcome);
    CHECK(refiltered.log[1].location == l1);
    CHECK(refiltered.log[1].moment == t3);
    CHECK(refiltered.result.found_location == l1);
}

TEST_CASE("IHUs with a one-hot single-step row costs one search") {
    const Predictor p(build({{0, 1}, {0, 1}, {1, 0}}, 2));
    CHECK(run(Strategy::ihus, p, p.corpus().trajectory(0), {0, 0}, 1).result.total_searches == 1);
}

TEST_CASE("invariants over randomized synthetic episodes") {
    SynthParams sp;
    sp.grid.n_rows = 5;
    sp.grid.n_cols = 5;
    sp.grid.day_start = 0;
    sp.grid.day_end = 12 * 60;
    sp.n_objects = 30;
    sp.n_days = 3;
    sp.seed = 17;
    const auto all = Corpus::build(synth(sp), sp.grid.n_locations());
    const auto [train, test] = all.split_by_day({"d0", "d1"});
    const Predictor p(train);
    std::mt19937_64 rng(2);
    const auto n_moments = static_cast<MomentId>(train.n_moments());
    for (int episode = 0; episode < 150; ++episode) {
        const auto truth = test.trajectory(static_cast<TrajectoryId>(rng() % test.size()));
        const auto t_p = static_cast<MomentId>(rng() % (n_moments - 1));
        const auto t_x = static_cast<MomentId>(t_p + 1 + rng() % (n_moments - 1 - t_p));
        const UnitConstraint start{truth.at(t_p), t_p};
        const auto variant = static_cast<PredictorVariant>(episode % 3);
        const auto alt = run(Strategy::alt, p, truth, start, t_x, variant);
        CHECK(alt.result.total_searches ==
              brute::rank_of(predict(train, Evidence(start), t_x, variant).probs, truth.at(t_x)));
        for (auto s : kAllStrategies) {
            const auto r = run(s, p, truth, start, t_x, variant);
            CHECK(r.result.found_location == truth.at(t_x));
            CHECK(r.result.total_searches <= train.n_locations() * (t_x - t_p));
            std::set<std::pair<LocationId, MomentId>> seen;
            for (const auto& rec : r.log) {
                CHECK(rec.moment <= t_x);
                CHECK(rec.moment > t_p);
                CHECK(seen.insert({rec.location, rec.moment}).second);
            }
            if (t_x == t_p + 1) {
                CHECK(r.result.total_searches == alt.result.total_searches);
            }
        }
    }
}
