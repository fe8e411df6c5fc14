#include "stsearch/estimator.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace stsearch {

namespace {

double span_of(MomentId t_k, MomentId t_cur) {
    if (t_k <= t_cur) {
        throw std::invalid_argument("indicator needs t_k > t_cur");
    }
    return static_cast<double>(t_k - t_cur);
}

}  // namespace

double expected_searches(const RankedPrediction& r) {
    double en = 0.0;
    for (std::size_t j = 0; j < r.probs.size(); ++j) {
        en += static_cast<double>(j + 1) * r.probs[j];
    }
    return en;
}

double expected_searches(const TransitionCounts& c) {
    if (c.uniform()) {
        return (static_cast<double>(c.n_locations) + 1.0) / 2.0;
    }
    std::vector<std::uint32_t> counts;
    counts.reserve(c.support.size());
    for (const auto& entry : c.support) {
        counts.push_back(entry.second);
    }
    std::sort(counts.begin(), counts.end(), std::greater<>());
    double en = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        en += static_cast<double>(j + 1) * (static_cast<double>(counts[j]) / static_cast<double>(c.total));
    }
    return en;
}

double estimate_second_stage(const Predictor& train, UnitConstraint start, MomentId mid_moment,
                             MomentId end_moment, PredictorVariant variant) {
    if (!(start.moment < mid_moment && mid_moment < end_moment)) {
        throw std::invalid_argument("estimate_second_stage needs start < mid < end moments");
    }
    const Evidence from_start(start);
    const auto mid = train.counts(from_start, mid_moment, variant);
    // n-hat = sum_j p(l_j at mid) * en(prediction at end | start, (l_j, mid))
    double estimate = 0.0;
    const auto add = [&](LocationId l, double p) {
        Evidence ev(start);
        ev.append({l, mid_moment});
        estimate += p * expected_searches(*train.counts(ev, end_moment, variant));
    };
    if (mid->uniform()) {
        for (LocationId l = 0; l < mid->n_locations; ++l) {
            add(l, mid->probability(l));
        }
    } else {
        for (const auto& [l, n] : mid->support) {
            add(l, static_cast<double>(n) / static_cast<double>(mid->total));
        }
    }
    return estimate;
}

double estimate_second_stage(const Corpus& train, UnitConstraint start, MomentId mid_moment,
                             MomentId end_moment, PredictorVariant variant) {
    return estimate_second_stage(Predictor(train, 0), start, mid_moment, end_moment, variant);
}

double moment_indicator(const RankedPrediction& r, MomentId t_k, MomentId t_cur) {
    return moment_indicator(expected_searches(r), t_k, t_cur);
}

double moment_indicator(double expected, MomentId t_k, MomentId t_cur) {
    return expected / span_of(t_k, t_cur);
}

double unit_indicator(double p, MomentId t_k, MomentId t_cur) {
    const double span = span_of(t_k, t_cur);
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("unit_indicator: probability outside [0, 1]");
    }
    if (p == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return (1.0 / p) / span;
}

}  // namespace stsearch
