#pragma once

#include "stsearch/grid_model.hpp"
#include "stsearch/types.hpp"

#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace stsearch {

struct SearchRecord {
    LocationId location = 0;
    MomentId moment = 0;
    bool outcome = false;
};

// Stand-in for the indexed camera-record store. The ground truth is only
// reachable through search(); every call is charged, repeats included.
class SearchSession {
public:
    // Throws std::invalid_argument for a trajectory with unknown moments.
    // With a horizon, searches after that moment are rejected.
    static SearchSession open(const DiscreteTrajectory& truth,
                              std::optional<MomentId> horizon = std::nullopt);

    // Throws std::out_of_range for a moment outside the window or past the
    // horizon.
    bool search(LocationId l, MomentId t);

    std::size_t cost() const { return log_.size(); }
    std::span<const SearchRecord> log() const { return log_; }
    std::size_t n_moments() const { return truth_.size(); }
    std::optional<MomentId> horizon() const { return horizon_; }

    // CSV `step,location,moment,outcome`, steps numbered from 1.
    void write_log_csv(std::ostream& out) const;

private:
    SearchSession() = default;

    std::vector<LocationId> truth_;
    std::optional<MomentId> horizon_;
    std::vector<SearchRecord> log_;
};

}  // namespace stsearch
