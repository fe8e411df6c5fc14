#pragma once

#include "stsearch/grid_model.hpp"
#include "stsearch/types.hpp"

#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stsearch {

// Immutable set of gap-free trajectories over one moment window, indexed by
// (location, moment). Copies are cheap and share the underlying storage.
//
// remove_through() yields a view that hides every trajectory passing a unit;
// hidden trajectories keep their ids but are skipped by every query.
class Corpus {
public:
    Corpus() = default;

    // n_locations == 0 infers |L| as one past the largest location id seen.
    // Throws std::invalid_argument on incomplete trajectories, mixed window
    // lengths, or location ids >= n_locations.
    static Corpus build(std::vector<DiscreteTrajectory> trajectories, std::size_t n_locations = 0);

    std::size_t n_locations() const;
    std::size_t n_moments() const;
    // Number of visible trajectories.
    std::size_t size() const { return visible_; }
    bool empty() const { return visible_ == 0; }
    // Total ids, visible or not.
    std::size_t id_count() const;

    bool visible(TrajectoryId id) const;
    std::vector<TrajectoryId> ids() const;
    LocationId location_at(TrajectoryId id, MomentId t) const;
    std::span<const LocationId> locations(TrajectoryId id) const;
    const std::string& object_id(TrajectoryId id) const;
    const std::string& day_id(TrajectoryId id) const;
    DiscreteTrajectory trajectory(TrajectoryId id) const;
    std::vector<DiscreteTrajectory> trajectories() const;

    // All ids at the unit, hidden ones included, ascending.
    std::span<const TrajectoryId> posting(UnitConstraint u) const;

    std::size_t count_matching(std::span<const UnitConstraint> constraints) const;
    std::vector<TrajectoryId> ids_matching(std::span<const UnitConstraint> constraints) const;

    // Calls fn(id) for every visible trajectory satisfying all constraints.
    template <typename Fn>
    void for_each_matching(std::span<const UnitConstraint> constraints, Fn&& fn) const;

    Corpus remove_through(UnitConstraint u) const;

    // Partition by day id. Throws std::invalid_argument for a day id that
    // no visible trajectory carries.
    std::pair<Corpus, Corpus> split_by_day(const std::set<std::string>& train_days) const;
    std::set<std::string> day_ids() const;

    // Distinct visible trajectories passing each location at any moment.
    std::vector<std::size_t> busyness() const;
    // Location -> quantile group in [0, k), group 0 least busy.
    std::vector<std::size_t> busyness_groups(std::size_t k = 4) const;

private:
    struct Storage {
        std::size_t n_locations = 0;
        std::size_t n_moments = 0;
        std::vector<LocationId> cells;  // id * n_moments + t
        std::vector<std::string> object_ids;
        std::vector<std::string> day_ids;
        std::vector<std::vector<TrajectoryId>> postings;  // t * n_locations + l
    };

    void check_unit(UnitConstraint u) const;

    std::shared_ptr<const Storage> storage_;
    std::shared_ptr<const std::vector<bool>> hidden_;
    std::size_t visible_ = 0;
};

template <typename Fn>
void Corpus::for_each_matching(std::span<const UnitConstraint> constraints, Fn&& fn) const {
    if (constraints.empty() || !storage_) {
        return;
    }
    for (const auto& c : constraints) {
        check_unit(c);
    }
    // Walk the shortest posting list and test the other constraints directly.
    const UnitConstraint* pivot = &constraints.front();
    for (const auto& c : constraints) {
        if (posting(c).size() < posting(*pivot).size()) {
            pivot = &c;
        }
    }
    const auto n_moments = storage_->n_moments;
    for (TrajectoryId id : posting(*pivot)) {
        if (hidden_ && (*hidden_)[id]) {
            continue;
        }
        const LocationId* row = storage_->cells.data() + std::size_t{id} * n_moments;
        bool ok = true;
        for (const auto& c : constraints) {
            if (row[c.moment] != c.location) {
                ok = false;
                break;
            }
        }
        if (ok) {
            fn(id);
        }
    }
}

}  // namespace stsearch
