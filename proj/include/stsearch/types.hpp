#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>

namespace stsearch {

using LocationId = std::uint32_t;
using MomentId = std::uint32_t;
using TrajectoryId = std::uint32_t;

// A (location, moment) pair of the discretized city. Used both as a query
// term against the corpus and as a known point of a target's trajectory.
struct UnitConstraint {
    LocationId location = 0;
    MomentId moment = 0;

    friend bool operator==(const UnitConstraint&, const UnitConstraint&) = default;
    friend auto operator<=>(const UnitConstraint&, const UnitConstraint&) = default;
};

struct UnitConstraintHash {
    std::size_t operator()(const UnitConstraint& u) const noexcept {
        return std::hash<std::uint64_t>{}((std::uint64_t{u.location} << 32) | u.moment);
    }
};

// Which Markov model conditions a prediction.
//   first_order         latest known unit only, counted at that exact moment
//   second_order        latest two known units, falling back to first_order
//   pooled_first_order  latest known location, counted at every start moment
//                       with the same lag
enum class PredictorVariant { first_order, second_order, pooled_first_order };

std::string_view to_string(PredictorVariant v);
PredictorVariant parse_predictor_variant(std::string_view text);

}  // namespace stsearch
