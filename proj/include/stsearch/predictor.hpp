#pragma once

#include "stsearch/corpus.hpp"
#include "stsearch/types.hpp"

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <vector>

namespace stsearch {

// Appearing probability of every location at one moment.
struct PredictionVector {
    MomentId target_moment = 0;
    std::vector<double> probs;
};

// Locations by descending probability; equal probabilities by ascending id.
struct RankedPrediction {
    MomentId target_moment = 0;
    std::vector<LocationId> order;
    std::vector<double> probs;
};

// The known part of the target's trajectory, ordered by moment.
class Evidence {
public:
    Evidence() = default;
    explicit Evidence(UnitConstraint start) { append(start); }
    Evidence(std::initializer_list<UnitConstraint> units);

    // Throws std::invalid_argument unless u is later than every known unit.
    void append(UnitConstraint u);

    bool empty() const { return units_.empty(); }
    std::size_t size() const { return units_.size(); }
    const UnitConstraint& latest() const;
    std::span<const UnitConstraint> units() const { return units_; }

private:
    std::vector<UnitConstraint> units_;
};

// Sparse histogram of target-moment locations over the conditioning set.
// total == 0 encodes the uniform fallback over all locations.
struct TransitionCounts {
    MomentId target_moment = 0;
    std::size_t n_locations = 0;
    std::uint32_t total = 0;
    std::vector<std::pair<LocationId, std::uint32_t>> support;  // ascending location

    bool uniform() const { return total == 0; }
    double probability(LocationId l) const;
    PredictionVector to_vector() const;
};

TransitionCounts first_order_counts(const Corpus& train, UnitConstraint from, MomentId target);
TransitionCounts second_order_counts(const Corpus& train, UnitConstraint first,
                                     UnitConstraint second, MomentId target);
// Counts every (trajectory, start moment) pair at from.location with lag
// target - from.moment, regardless of the start moment.
TransitionCounts pooled_first_order_counts(const Corpus& train, UnitConstraint from,
                                           MomentId target);
TransitionCounts predict_counts(const Corpus& train, const Evidence& ev, MomentId target,
                                PredictorVariant variant);

PredictionVector first_order(const Corpus& train, UnitConstraint from, MomentId target);
PredictionVector second_order(const Corpus& train, UnitConstraint first, UnitConstraint second,
                              MomentId target);
PredictionVector time_specific_first_order(const Corpus& train, UnitConstraint from,
                                           MomentId target, bool pooled = false);
PredictionVector predict(const Corpus& train, const Evidence& ev, MomentId target,
                         PredictorVariant variant = PredictorVariant::first_order);

RankedPrediction rank(const PredictionVector& v);
RankedPrediction rank(const TransitionCounts& c);

// Training corpus plus a thread-safe memo of prediction rows keyed by the
// conditioning units the variant actually uses.
class Predictor {
public:
    explicit Predictor(Corpus train, std::size_t max_cached_rows = std::size_t{1} << 18);

    const Corpus& corpus() const { return train_; }

    std::shared_ptr<const TransitionCounts> counts(const Evidence& ev, MomentId target,
                                                   PredictorVariant variant) const;
    PredictionVector predict(const Evidence& ev, MomentId target, PredictorVariant variant) const;
    RankedPrediction ranked(const Evidence& ev, MomentId target, PredictorVariant variant) const;

    std::size_t cached_rows() const;

private:
    struct Key {
        PredictorVariant variant;
        MomentId target;
        UnitConstraint first;
        UnitConstraint second;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };

    Corpus train_;
    std::size_t max_cached_rows_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<Key, std::shared_ptr<const TransitionCounts>, KeyHash> cache_;
};

}  // namespace stsearch
