#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "brute_force.hpp"
#include "table2.hpp"

#include <algorithm>

using namespace stsearch;
using namespace table2;

TEST_CASE("build the toy corpus") {
    const auto c = corpus();
    CHECK(c.n_locations() == 4);
    CHECK(c.n_moments() == 3);
    CHECK(c.size() == 5);
    CHECK(c.trajectories() == trajectories());
    CHECK(Corpus::build({}).empty());
}

TEST_CASE("single constant trajectory is indexed at every moment") {
    const LocationId cells[] = {l1, l1, l1};
    const auto c = Corpus::build({DiscreteTrajectory::from_locations("c", "d", cells)});
    CHECK(c.n_locations() == 1);
    for (MomentId t = 0; t < 3; ++t) {
        const auto p = c.posting({l1, t});
        REQUIRE(p.size() == 1);
        CHECK(p[0] == 0);
    }
}

TEST_CASE("build rejects inconsistent input") {
    const LocationId a[] = {0, 1, 2};
    const LocationId b[] = {0, 1};
    CHECK_THROWS_AS(Corpus::build({DiscreteTrajectory::from_locations("x", "d", a),
                                   DiscreteTrajectory::from_locations("y", "d", b)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Corpus::build({DiscreteTrajectory::from_locations("x", "d", a)}, 2), std::invalid_argument);
    DiscreteTrajectory gappy{"x", "d", {0u, std::nullopt, 1u}};
    CHECK_THROWS_AS(Corpus::build({gappy}), std::invalid_argument);
}

TEST_CASE("counting queries on the toy corpus") {
    const auto c = corpus();
    const UnitConstraint one[] = {{l2, t1}};
    const UnitConstraint two[] = {{l2, t1}, {l3, t3}};
    const UnitConstraint chain[] = {{l2, t1}, {l4, t2}};
    const UnitConstraint first[] = {{l1, t1}};
    const UnitConstraint unused[] = {{l4, t1}};
    CHECK(c.count_matching(one) == 3);
    CHECK(c.count_matching(two) == 2);
    CHECK(c.ids_matching(chain) == std::vector<TrajectoryId>{4});
    CHECK(c.ids_matching(first) == std::vector<TrajectoryId>{0});
    CHECK(c.count_matching(unused) == 0);
    CHECK(c.ids_matching(unused).empty());
    const UnitConstraint outside[] = {{l1, 3}};
    CHECK_THROWS_AS(c.count_matching(outside), std::out_of_range);
}

TEST_CASE("remove_through hides trajectories through a unit") {
    const auto c = corpus();
    const auto r = c.remove_through({l4, t2});
    CHECK(r.size() == 3);
    CHECK(c.size() == 5);
    const UnitConstraint u[] = {{l4, t2}};
    CHECK(r.count_matching(u) == 0);
    CHECK(r.remove_through({l4, t2}).ids() == r.ids());
    CHECK(c.remove_through({l4, t1}).ids() == c.ids());
    CHECK(r.trajectories().size() == 3);
}

TEST_CASE("split by day") {
    const auto c = corpus();
    const auto [train, test] = c.split_by_day({"d1", "d2"});
    CHECK(train.size() == 4);
    CHECK(test.size() == 1);
    CHECK(test.trajectory(0).day_id == "d3");
    const auto [all, none] = c.split_by_day({"d1", "d2", "d3"});
    CHECK(all.size() == 5);
    CHECK(none.empty());
    CHECK_THROWS_AS(c.split_by_day({"d9"}), std::invalid_argument);
}

TEST_CASE("busyness and groups") {
    const auto c = corpus();
    const auto b = c.busyness();
    CHECK(b[l2] == 4);
    CHECK(b[l1] == 2);
    CHECK(b[l3] == 4);
    CHECK(b[l4] == 2);
    const auto one = c.busyness_groups(1);
    CHECK(std::all_of(one.begin(), one.end(), [](auto g) { return g == 0; }));
    const auto two = c.busyness_groups(2);
    CHECK(two[l1] == 0);
    CHECK(two[l4] == 0);
    CHECK(two[l2] == 1);
    CHECK(two[l3] == 1);

    const LocationId x[] = {0, 1};
    const auto tie = Corpus::build({DiscreteTrajectory::from_locations("a", "d", x)}).busyness_groups(2);
    CHECK(tie[0] == 0);
    CHECK(tie[1] == 1);
}

TEST_CASE("index properties on random corpora") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n_loc = 2 + trial % 5, n_mom = 2 + trial % 4;
        const auto rows = brute::random_rows(rng, 5 + trial, n_loc, n_mom);
        std::vector<DiscreteTrajectory> ts;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            ts.push_back(DiscreteTrajectory::from_locations("o" + std::to_string(i), "d", rows[i]));
        }
        const auto c = Corpus::build(ts, n_loc);
        CHECK(c.trajectories() == ts);
        for (std::size_t t = 0; t < n_mom; ++t) {
            for (std::size_t l = 0; l < n_loc; ++l) {
                const UnitConstraint u{static_cast<LocationId>(l), static_cast<MomentId>(t)};
                const auto p = c.posting(u);
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    const bool in = std::find(p.begin(), p.end(), i) != p.end();
                    CHECK(in == (rows[i][t] == l));
                }
                std::vector<UnitConstraint> cs{u};
                const auto base = c.count_matching(cs);
                CHECK(base == c.ids_matching(cs).size());
                cs.push_back({static_cast<LocationId>(trial % n_loc), static_cast<MomentId>((t + 1) % n_mom)});
                CHECK(c.count_matching(cs) <= base);
                CHECK(c.count_matching(cs) == c.ids_matching(cs).size());
                const UnitConstraint only[] = {u};
                CHECK(c.remove_through(u).count_matching(only) == 0);
            }
        }
    }
}
