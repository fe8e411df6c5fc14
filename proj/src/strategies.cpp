#include "stsearch/strategies.hpp"

#include "stsearch/estimator.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace stsearch {

namespace {

// Searches `moment` in ranked order until the object turns up.
TrackStep sweep(SearchSession& session, const RankedPrediction& ranked) {
    TrackStep step{ranked.target_moment, 0, std::nullopt};
    for (LocationId l : ranked.order) {
        ++step.spent;
        if (session.search(l, ranked.target_moment)) {
            step.hit = l;
            return step;
        }
    }
    throw std::logic_error("sweep exhausted every location without a hit");
}

TrackResult finish(std::vector<TrackStep> steps) {
    TrackResult r;
    for (const auto& s : steps) {
        r.total_searches += s.spent;
    }
    r.found_location = *steps.back().hit;
    r.steps = std::move(steps);
    return r;
}

}  // namespace

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::alt:
            return "alt";
        case Strategy::ipm:
            return "ipm";
        case Strategy::iem:
            return "iem";
        case Strategy::ihms:
            return "ihms";
        case Strategy::ihus:
            return "ihus";
    }
    return "?";
}

Strategy parse_strategy(std::string_view text) {
    for (Strategy s : kAllStrategies) {
        if (to_string(s) == text) {
            return s;
        }
    }
    throw std::invalid_argument("unknown strategy '" + std::string(text) + "'");
}

void Episode::validate() const {
    const auto n_moments = train.corpus().n_moments();
    if (!(start.moment < end_moment && end_moment < n_moments)) {
        throw std::invalid_argument("episode needs start moment < end moment < " +
                                    std::to_string(n_moments));
    }
    if (start.location >= train.corpus().n_locations()) {
        throw std::invalid_argument("episode start location outside the grid");
    }
    if (session.n_moments() != n_moments) {
        throw std::invalid_argument("episode session and training corpus cover different windows");
    }
}

std::string format_steps(const TrackResult& r) {
    std::ostringstream out;
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        const auto& s = r.steps[i];
        if (i > 0) {
            out << '|';
        }
        out << s.moment << ':' << s.spent << ':';
        if (s.hit) {
            out << *s.hit;
        } else {
            out << '-';
        }
    }
    return out.str();
}

TrackResult run_alt(const Episode& e, PredictorVariant variant) {
    e.validate();
    const auto ranked = e.train.ranked(Evidence(e.start), e.end_moment, variant);
    return finish({sweep(e.session, ranked)});
}

TrackResult run_ipm(const Episode& e, MomentId mid_moment, PredictorVariant variant) {
    e.validate();
    if (!(e.start.moment < mid_moment && mid_moment <= e.end_moment)) {
        throw std::invalid_argument("IPM moment must lie in (start, end]");
    }
    if (mid_moment == e.end_moment) {
        return run_alt(e, variant);
    }
    Evidence ev(e.start);
    auto first = sweep(e.session, e.train.ranked(ev, mid_moment, variant));
    ev.append({*first.hit, mid_moment});
    auto second = sweep(e.session, e.train.ranked(ev, e.end_moment, variant));
    return finish({first, second});
}

MomentId iem_choose_moment(const Episode& e, PredictorVariant variant) {
    e.validate();
    const Evidence ev(e.start);
    MomentId best_moment = e.end_moment;
    double best = std::numeric_limits<double>::infinity();
    for (MomentId t = e.start.moment + 1; t <= e.end_moment; ++t) {
        double score = expected_searches(*e.train.counts(ev, t, variant));
        if (t < e.end_moment) {
            score += estimate_second_stage(e.train, e.start, t, e.end_moment, variant);
        }
        if (score < best) {
            best = score;
            best_moment = t;
        }
    }
    return best_moment;
}

TrackResult run_iem(const Episode& e, PredictorVariant variant) {
    return run_ipm(e, iem_choose_moment(e, variant), variant);
}

TrackResult run_ihms(const Episode& e, PredictorVariant variant) {
    e.validate();
    Evidence ev(e.start);
    MomentId t_cur = e.start.moment;
    std::vector<TrackStep> steps;
    while (t_cur < e.end_moment) {
        std::shared_ptr<const TransitionCounts> best_row;
        double best = std::numeric_limits<double>::infinity();
        for (MomentId t = t_cur + 1; t <= e.end_moment; ++t) {
            auto row = e.train.counts(ev, t, variant);
            const double indicator = moment_indicator(expected_searches(*row), t, t_cur);
            if (indicator < best) {
                best = indicator;
                best_row = std::move(row);
            }
        }
        auto step = sweep(e.session, rank(*best_row));
        ev.append({*step.hit, step.moment});
        t_cur = step.moment;
        steps.push_back(step);
    }
    return finish(std::move(steps));
}

TrackResult run_ihus(const Episode& e, PredictorVariant variant) {
    e.validate();
    const auto n_locations = e.train.corpus().n_locations();
    const MomentId first = e.start.moment + 1;
    Corpus view = e.train.corpus();
    bool filtered = false;
    Evidence ev(e.start);
    MomentId t_cur = e.start.moment;
    // Searched units per moment, with the count and the lowest unsearched id.
    std::vector<std::vector<bool>> searched(e.end_moment - e.start.moment, std::vector<bool>(n_locations));
    std::vector<std::size_t> n_searched(searched.size(), 0);
    std::vector<LocationId> lowest_open(searched.size(), 0);
    std::vector<TrackStep> steps;

    while (t_cur < e.end_moment) {
        std::optional<UnitConstraint> best_unit;
        double best = std::numeric_limits<double>::infinity();
        const auto consider = [&](LocationId l, MomentId t, double p) {
            const double indicator = unit_indicator(p, t, t_cur);
            if (indicator < best) {
                best = indicator;
                best_unit = UnitConstraint{l, t};
            }
        };
        for (MomentId t = t_cur + 1; t <= e.end_moment; ++t) {
            const auto& done = searched[t - first];
            // Unfiltered rows come from the shared memo until the first miss.
            const auto row = filtered ? std::make_shared<const TransitionCounts>(
                                            predict_counts(view, ev, t, variant))
                                      : e.train.counts(ev, t, variant);
            // Mass on already-searched units is dropped and the rest renormalized.
            std::uint64_t live = 0;
            for (const auto& [l, n] : row->support) {
                if (!done[l]) {
                    live += n;
                }
            }
            if (live == 0) {
                const auto open = n_locations - n_searched[t - first];
                if (open > 0) {
                    consider(lowest_open[t - first], t, 1.0 / static_cast<double>(open));
                }
                continue;
            }
            for (const auto& [l, n] : row->support) {
                if (!done[l]) {
                    consider(l, t, static_cast<double>(n) / static_cast<double>(live));
                }
            }
        }
        if (!best_unit) {
            throw std::logic_error("IHUs ran out of candidate units");
        }
        const bool hit = e.session.search(best_unit->location, best_unit->moment);
        steps.push_back({best_unit->moment, 1, hit ? std::optional(best_unit->location) : std::nullopt});
        if (hit) {
            ev.append(*best_unit);
            t_cur = best_unit->moment;
        } else {
            // Pooled rows are never filtered.
            if (variant != PredictorVariant::pooled_first_order) {
                view = view.remove_through(*best_unit);
                filtered = true;
            }
            const auto k = best_unit->moment - first;
            searched[k][best_unit->location] = true;
            ++n_searched[k];
            while (lowest_open[k] < n_locations && searched[k][lowest_open[k]]) {
                ++lowest_open[k];
            }
        }
    }
    return finish(std::move(steps));
}

TrackResult run_strategy(Strategy s, const Episode& e, PredictorVariant variant,
                         std::optional<MomentId> ipm_mid) {
    switch (s) {
        case Strategy::alt:
            return run_alt(e, variant);
        case Strategy::ipm: {
            const MomentId half = std::max<MomentId>(1, (e.end_moment - e.start.moment) / 2);
            return run_ipm(e, ipm_mid.value_or(e.start.moment + half), variant);
        }
        case Strategy::iem:
            return run_iem(e, variant);
        case Strategy::ihms:
            return run_ihms(e, variant);
        case Strategy::ihus:
            return run_ihus(e, variant);
    }
    throw std::invalid_argument("unknown strategy");
}

}  // namespace stsearch
