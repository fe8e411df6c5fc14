#include "stsearch/predictor.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace stsearch {

namespace {

// Turns a bag of target locations into sorted (location, count) pairs.
TransitionCounts tally(std::vector<LocationId>& seen, MomentId target, std::size_t n_locations) {
    TransitionCounts c;
    c.target_moment = target;
    c.n_locations = n_locations;
    c.total = static_cast<std::uint32_t>(seen.size());
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < seen.size();) {
        std::size_t j = i;
        while (j < seen.size() && seen[j] == seen[i]) {
            ++j;
        }
        c.support.emplace_back(seen[i], static_cast<std::uint32_t>(j - i));
        i = j;
    }
    return c;
}

void check_target(const Corpus& train, MomentId after, MomentId target) {
    if (target <= after) {
        throw std::invalid_argument("prediction target moment " + std::to_string(target) +
                                    " must follow conditioning moment " + std::to_string(after));
    }
    if (target >= train.n_moments()) {
        throw std::out_of_range("prediction target moment " + std::to_string(target) +
                                " outside the window");
    }
}

}  // namespace

Evidence::Evidence(std::initializer_list<UnitConstraint> units) {
    for (const auto& u : units) {
        append(u);
    }
}

void Evidence::append(UnitConstraint u) {
    if (!units_.empty() && u.moment <= units_.back().moment) {
        throw std::invalid_argument("evidence moments must be strictly increasing");
    }
    units_.push_back(u);
}

const UnitConstraint& Evidence::latest() const {
    if (units_.empty()) {
        throw std::logic_error("evidence is empty");
    }
    return units_.back();
}

double TransitionCounts::probability(LocationId l) const {
    if (uniform()) {
        return 1.0 / static_cast<double>(n_locations);
    }
    const auto it = std::lower_bound(support.begin(), support.end(), l,
                                     [](const auto& entry, LocationId v) { return entry.first < v; });
    if (it == support.end() || it->first != l) {
        return 0.0;
    }
    return static_cast<double>(it->second) / static_cast<double>(total);
}

PredictionVector TransitionCounts::to_vector() const {
    PredictionVector v;
    v.target_moment = target_moment;
    if (uniform()) {
        v.probs.assign(n_locations, 1.0 / static_cast<double>(n_locations));
        return v;
    }
    v.probs.assign(n_locations, 0.0);
    for (const auto& [l, n] : support) {
        v.probs[l] = static_cast<double>(n) / static_cast<double>(total);
    }
    return v;
}

TransitionCounts first_order_counts(const Corpus& train, UnitConstraint from, MomentId target) {
    check_target(train, from.moment, target);
    std::vector<LocationId> seen;
    const UnitConstraint cond[] = {from};
    train.for_each_matching(cond, [&](TrajectoryId id) { seen.push_back(train.location_at(id, target)); });
    return tally(seen, target, train.n_locations());
}

TransitionCounts second_order_counts(const Corpus& train, UnitConstraint first,
                                     UnitConstraint second, MomentId target) {
    if (first.moment > second.moment) {
        throw std::invalid_argument("second-order conditioning units out of moment order");
    }
    check_target(train, second.moment, target);
    std::vector<LocationId> seen;
    const UnitConstraint cond[] = {first, second};
    train.for_each_matching(cond, [&](TrajectoryId id) { seen.push_back(train.location_at(id, target)); });
    if (seen.empty()) {
        return first_order_counts(train, second, target);
    }
    return tally(seen, target, train.n_locations());
}

TransitionCounts pooled_first_order_counts(const Corpus& train, UnitConstraint from,
                                           MomentId target) {
    check_target(train, from.moment, target);
    const MomentId lag = target - from.moment;
    std::vector<LocationId> seen;
    for (MomentId s = 0; s + lag < train.n_moments(); ++s) {
        for (TrajectoryId id : train.posting({from.location, s})) {
            if (train.visible(id)) {
                seen.push_back(train.location_at(id, s + lag));
            }
        }
    }
    return tally(seen, target, train.n_locations());
}

TransitionCounts predict_counts(const Corpus& train, const Evidence& ev, MomentId target,
                                PredictorVariant variant) {
    if (ev.empty()) {
        throw std::invalid_argument("predict: evidence is empty");
    }
    const auto units = ev.units();
    switch (variant) {
        case PredictorVariant::second_order:
            if (units.size() >= 2) {
                return second_order_counts(train, units[units.size() - 2], units.back(), target);
            }
            return first_order_counts(train, units.back(), target);
        case PredictorVariant::pooled_first_order:
            return pooled_first_order_counts(train, units.back(), target);
        case PredictorVariant::first_order:
            break;
    }
    return first_order_counts(train, units.back(), target);
}

PredictionVector first_order(const Corpus& train, UnitConstraint from, MomentId target) {
    return first_order_counts(train, from, target).to_vector();
}

PredictionVector second_order(const Corpus& train, UnitConstraint first, UnitConstraint second,
                              MomentId target) {
    return second_order_counts(train, first, second, target).to_vector();
}

PredictionVector time_specific_first_order(const Corpus& train, UnitConstraint from,
                                           MomentId target, bool pooled) {
    return pooled ? pooled_first_order_counts(train, from, target).to_vector()
                  : first_order_counts(train, from, target).to_vector();
}

PredictionVector predict(const Corpus& train, const Evidence& ev, MomentId target,
                         PredictorVariant variant) {
    return predict_counts(train, ev, target, variant).to_vector();
}

RankedPrediction rank(const PredictionVector& v) {
    RankedPrediction r;
    r.target_moment = v.target_moment;
    r.order.resize(v.probs.size());
    std::iota(r.order.begin(), r.order.end(), LocationId{0});
    std::stable_sort(r.order.begin(), r.order.end(),
                     [&](LocationId a, LocationId b) { return v.probs[a] > v.probs[b]; });
    r.probs.reserve(v.probs.size());
    for (LocationId l : r.order) {
        r.probs.push_back(v.probs[l]);
    }
    return r;
}

RankedPrediction rank(const TransitionCounts& c) {
    RankedPrediction r;
    r.target_moment = c.target_moment;
    r.order.reserve(c.n_locations);
    r.probs.reserve(c.n_locations);
    if (c.uniform()) {
        for (LocationId l = 0; l < c.n_locations; ++l) {
            r.order.push_back(l);
            r.probs.push_back(1.0 / static_cast<double>(c.n_locations));
        }
        return r;
    }
    auto support = c.support;
    std::stable_sort(support.begin(), support.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<bool> listed(c.n_locations, false);
    for (const auto& [l, n] : support) {
        r.order.push_back(l);
        r.probs.push_back(static_cast<double>(n) / static_cast<double>(c.total));
        listed[l] = true;
    }
    for (LocationId l = 0; l < c.n_locations; ++l) {
        if (!listed[l]) {
            r.order.push_back(l);
            r.probs.push_back(0.0);
        }
    }
    return r;
}

Predictor::Predictor(Corpus train, std::size_t max_cached_rows)
    : train_(std::move(train)), max_cached_rows_(max_cached_rows) {}

std::size_t Predictor::KeyHash::operator()(const Key& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.variant);
    const auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    mix(k.target);
    mix(UnitConstraintHash{}(k.first));
    mix(UnitConstraintHash{}(k.second));
    return h;
}

std::shared_ptr<const TransitionCounts> Predictor::counts(const Evidence& ev, MomentId target,
                                                          PredictorVariant variant) const {
    if (ev.empty()) {
        throw std::invalid_argument("predict: evidence is empty");
    }
    // Key on the units the variant reads.
    const auto units = ev.units();
    Key key{variant, target, units.back(), {}};
    if (variant == PredictorVariant::second_order) {
        if (units.size() >= 2) {
            key.first = units[units.size() - 2];
            key.second = units.back();
        } else {
            key.variant = PredictorVariant::first_order;
        }
    }
    if (max_cached_rows_ > 0) {
        std::shared_lock lock(mutex_);
        if (const auto it = cache_.find(key); it != cache_.end()) {
            return it->second;
        }
    }
    auto row = std::make_shared<const TransitionCounts>(predict_counts(train_, ev, target, variant));
    if (max_cached_rows_ > 0) {
        std::unique_lock lock(mutex_);
        if (cache_.size() >= max_cached_rows_) {
            cache_.clear();
        }
        cache_.emplace(key, row);
    }
    return row;
}

PredictionVector Predictor::predict(const Evidence& ev, MomentId target, PredictorVariant variant) const {
    return counts(ev, target, variant)->to_vector();
}

RankedPrediction Predictor::ranked(const Evidence& ev, MomentId target, PredictorVariant variant) const {
    return rank(*counts(ev, target, variant));
}

std::size_t Predictor::cached_rows() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
}

}  // namespace stsearch
