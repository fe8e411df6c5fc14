#include "stsearch/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace stsearch {

Corpus Corpus::build(std::vector<DiscreteTrajectory> trajectories, std::size_t n_locations) {
    auto storage = std::make_shared<Storage>();
    storage->n_moments = trajectories.empty() ? 0 : trajectories.front().cells.size();

    LocationId max_seen = 0;
    for (const auto& t : trajectories) {
        if (t.cells.size() != storage->n_moments) {
            throw std::invalid_argument("corpus: trajectories cover different moment windows");
        }
        if (!t.complete()) {
            throw std::invalid_argument("corpus: trajectory " + t.object_id + "/" + t.day_id +
                                        " has unknown moments");
        }
        for (const auto& c : t.cells) {
            max_seen = std::max(max_seen, *c);
        }
    }
    if (n_locations == 0) {
        n_locations = trajectories.empty() ? 0 : std::size_t{max_seen} + 1;
    } else if (!trajectories.empty() && max_seen >= n_locations) {
        throw std::invalid_argument("corpus: location id " + std::to_string(max_seen) +
                                    " outside " + std::to_string(n_locations) + " locations");
    }
    storage->n_locations = n_locations;

    const auto n = trajectories.size();
    storage->cells.reserve(n * storage->n_moments);
    storage->postings.resize(n_locations * storage->n_moments);
    for (TrajectoryId id = 0; id < n; ++id) {
        auto& t = trajectories[id];
        for (MomentId m = 0; m < storage->n_moments; ++m) {
            const LocationId l = *t.cells[m];
            storage->cells.push_back(l);
            storage->postings[std::size_t{m} * n_locations + l].push_back(id);
        }
        storage->object_ids.push_back(std::move(t.object_id));
        storage->day_ids.push_back(std::move(t.day_id));
    }

    Corpus c;
    c.storage_ = std::move(storage);
    c.visible_ = n;
    return c;
}

std::size_t Corpus::n_locations() const { return storage_ ? storage_->n_locations : 0; }
std::size_t Corpus::n_moments() const { return storage_ ? storage_->n_moments : 0; }
std::size_t Corpus::id_count() const { return storage_ ? storage_->object_ids.size() : 0; }

bool Corpus::visible(TrajectoryId id) const {
    return id < id_count() && !(hidden_ && (*hidden_)[id]);
}

std::vector<TrajectoryId> Corpus::ids() const {
    std::vector<TrajectoryId> out;
    out.reserve(visible_);
    for (TrajectoryId id = 0; id < id_count(); ++id) {
        if (visible(id)) {
            out.push_back(id);
        }
    }
    return out;
}

LocationId Corpus::location_at(TrajectoryId id, MomentId t) const {
    if (id >= id_count() || t >= n_moments()) {
        throw std::out_of_range("corpus: trajectory/moment out of range");
    }
    return storage_->cells[std::size_t{id} * storage_->n_moments + t];
}

std::span<const LocationId> Corpus::locations(TrajectoryId id) const {
    if (id >= id_count()) {
        throw std::out_of_range("corpus: trajectory id out of range");
    }
    return std::span(storage_->cells).subspan(std::size_t{id} * storage_->n_moments, storage_->n_moments);
}

const std::string& Corpus::object_id(TrajectoryId id) const { return storage_->object_ids.at(id); }
const std::string& Corpus::day_id(TrajectoryId id) const { return storage_->day_ids.at(id); }

DiscreteTrajectory Corpus::trajectory(TrajectoryId id) const {
    return DiscreteTrajectory::from_locations(object_id(id), day_id(id), locations(id));
}

std::vector<DiscreteTrajectory> Corpus::trajectories() const {
    std::vector<DiscreteTrajectory> out;
    for (TrajectoryId id : ids()) {
        out.push_back(trajectory(id));
    }
    return out;
}

void Corpus::check_unit(UnitConstraint u) const {
    if (u.location >= n_locations() || u.moment >= n_moments()) {
        throw std::out_of_range("corpus: unit (" + std::to_string(u.location) + "," +
                                std::to_string(u.moment) + ") outside the grid window");
    }
}

std::span<const TrajectoryId> Corpus::posting(UnitConstraint u) const {
    check_unit(u);
    return storage_->postings[std::size_t{u.moment} * storage_->n_locations + u.location];
}

std::size_t Corpus::count_matching(std::span<const UnitConstraint> constraints) const {
    std::size_t n = 0;
    for_each_matching(constraints, [&](TrajectoryId) { ++n; });
    return n;
}

std::vector<TrajectoryId> Corpus::ids_matching(std::span<const UnitConstraint> constraints) const {
    std::vector<TrajectoryId> out;
    for_each_matching(constraints, [&](TrajectoryId id) { out.push_back(id); });
    return out;
}

Corpus Corpus::remove_through(UnitConstraint u) const {
    if (!storage_) {
        return *this;
    }
    const auto hit = posting(u);
    const bool any_visible = std::any_of(hit.begin(), hit.end(), [&](TrajectoryId id) { return visible(id); });
    if (!any_visible) {
        return *this;
    }
    auto hidden = hidden_ ? std::make_shared<std::vector<bool>>(*hidden_)
                          : std::make_shared<std::vector<bool>>(id_count(), false);
    Corpus out = *this;
    for (TrajectoryId id : hit) {
        if (!(*hidden)[id]) {
            (*hidden)[id] = true;
            --out.visible_;
        }
    }
    out.hidden_ = std::move(hidden);
    return out;
}

std::set<std::string> Corpus::day_ids() const {
    std::set<std::string> out;
    for (TrajectoryId id : ids()) {
        out.insert(day_id(id));
    }
    return out;
}

std::pair<Corpus, Corpus> Corpus::split_by_day(const std::set<std::string>& train_days) const {
    const auto present = day_ids();
    for (const auto& d : train_days) {
        if (!present.count(d)) {
            throw std::invalid_argument("split_by_day: unknown day id '" + d + "'");
        }
    }
    std::vector<DiscreteTrajectory> train;
    std::vector<DiscreteTrajectory> test;
    for (TrajectoryId id : ids()) {
        (train_days.count(day_id(id)) ? train : test).push_back(trajectory(id));
    }
    return {build(std::move(train), n_locations()), build(std::move(test), n_locations())};
}

std::vector<std::size_t> Corpus::busyness() const {
    std::vector<std::size_t> out(n_locations(), 0);
    std::vector<TrajectoryId> last_seen(n_locations(), static_cast<TrajectoryId>(-1));
    for (TrajectoryId id : ids()) {
        for (LocationId l : locations(id)) {
            if (last_seen[l] != id) {
                last_seen[l] = id;
                ++out[l];
            }
        }
    }
    return out;
}

std::vector<std::size_t> Corpus::busyness_groups(std::size_t k) const {
    if (k < 1) {
        throw std::invalid_argument("busyness_groups: k must be at least 1");
    }
    const auto busy = busyness();
    std::vector<LocationId> order(busy.size());
    std::iota(order.begin(), order.end(), LocationId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](LocationId a, LocationId b) { return busy[a] < busy[b]; });
    std::vector<std::size_t> group(busy.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        group[order[i]] = i * k / order.size();
    }
    return group;
}

}  // namespace stsearch
