#pragma once

#include "stsearch/predictor.hpp"

namespace stsearch {

// Expected number of searches when sweeping locations in ranked order:
// sum over ranked positions j (1-based) of j * p'_j.
double expected_searches(const RankedPrediction& r);
// Same quantity straight from sparse counts, without materializing |L| entries.
double expected_searches(const TransitionCounts& c);

// Estimated searches at end_moment after an intermediate sweep at mid_moment:
// the mid-moment location distribution from start, weighting the expected
// searches of the prediction conditioned on start and each mid location.
// The default conditions on both units, falling back per predict().
double estimate_second_stage(const Predictor& train, UnitConstraint start, MomentId mid_moment,
                             MomentId end_moment,
                             PredictorVariant variant = PredictorVariant::second_order);
double estimate_second_stage(const Corpus& train, UnitConstraint start, MomentId mid_moment,
                             MomentId end_moment,
                             PredictorVariant variant = PredictorVariant::second_order);

// Cost-timespan ratio of sweeping moment t_k from t_cur.
double moment_indicator(const RankedPrediction& r, MomentId t_k, MomentId t_cur);
double moment_indicator(double expected, MomentId t_k, MomentId t_cur);

// (1 / p) / (t_k - t_cur); +infinity for p == 0.
double unit_indicator(double p, MomentId t_k, MomentId t_cur);

}  // namespace stsearch
