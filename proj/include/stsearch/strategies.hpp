#pragma once

#include "stsearch/oracle.hpp"
#include "stsearch/predictor.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stsearch {

enum class Strategy { alt, ipm, iem, ihms, ihus };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view text);
inline constexpr Strategy kAllStrategies[] = {Strategy::alt, Strategy::ipm, Strategy::iem,
                                              Strategy::ihms, Strategy::ihus};

// One tracking problem: the object was witnessed at `start` and must be
// found at `end_moment`, using `train` for prediction and `session` to
// search.
struct Episode {
    UnitConstraint start;
    MomentId end_moment = 0;
    const Predictor& train;
    SearchSession& session;

    // Throws std::invalid_argument unless start.moment < end_moment < |T|.
    void validate() const;
};

struct TrackStep {
    MomentId moment = 0;
    std::size_t spent = 0;
    std::optional<LocationId> hit;
};

struct TrackResult {
    LocationId found_location = 0;
    std::size_t total_searches = 0;
    std::vector<TrackStep> steps;
};

// `moment:spent:hit` per step joined by '|', '-' for a miss.
std::string format_steps(const TrackResult& r);

// All searches at the end moment in ranked order.
TrackResult run_alt(const Episode& e, PredictorVariant variant = PredictorVariant::first_order);

// One ranked sweep at mid_moment, then one at the end moment with the hit
// added to the evidence. mid_moment == end_moment is a single sweep.
TrackResult run_ipm(const Episode& e, MomentId mid_moment,
                    PredictorVariant variant = PredictorVariant::first_order);

// IPM at the moment minimizing estimated first plus second sweep cost.
TrackResult run_iem(const Episode& e, PredictorVariant variant = PredictorVariant::first_order);
// The moment IEM would pick, ties to the earliest.
MomentId iem_choose_moment(const Episode& e, PredictorVariant variant);

// Greedy sweeps at the moment with the smallest cost-timespan ratio until the
// end moment is reached.
TrackResult run_ihms(const Episode& e, PredictorVariant variant = PredictorVariant::first_order);

// Greedy single searches at the unit with the smallest inverse-probability
// ratio; misses drop every training trajectory through the missed unit.
TrackResult run_ihus(const Episode& e, PredictorVariant variant = PredictorVariant::first_order);

// IPM defaults to the midpoint start + (end - start) / 2 when mid is unset.
TrackResult run_strategy(Strategy s, const Episode& e,
                         PredictorVariant variant = PredictorVariant::first_order,
                         std::optional<MomentId> ipm_mid = std::nullopt);

}  // namespace stsearch
