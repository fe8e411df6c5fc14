#include "stsearch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace stsearch {

namespace {

struct Move {
    int d_row = 0;
    int d_col = 0;
};

constexpr Move kMoves[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {0, 0}};

}  // namespace

std::vector<DiscreteTrajectory> synth(const SynthParams& p) {
    p.grid.validate();
    if (p.persistence < 0.0 || p.persistence > 1.0) {
        throw std::invalid_argument("synth: persistence must lie in [0, 1]");
    }
    const auto rows = static_cast<int>(p.grid.n_rows);
    const auto cols = static_cast<int>(p.grid.n_cols);
    const auto n_moments = p.grid.n_moments();

    std::mt19937_64 rng(p.seed);
    std::uniform_int_distribution<int> pick_row(0, rows - 1);
    std::uniform_int_distribution<int> pick_col(0, cols - 1);
    std::uniform_int_distribution<int> pick_move(0, 4);
    std::bernoulli_distribution keep_move(p.persistence);

    std::vector<DiscreteTrajectory> out;
    out.reserve(p.n_objects * p.n_days);
    for (std::size_t o = 0; o < p.n_objects; ++o) {
        const int home_row = pick_row(rng);
        const int home_col = pick_col(rng);
        for (std::size_t d = 0; d < p.n_days; ++d) {
            int row = home_row;
            int col = home_col;
            std::optional<Move> previous;
            std::vector<LocationId> cells;
            cells.reserve(n_moments);
            cells.push_back(static_cast<LocationId>(row * cols + col));
            for (std::size_t t = 1; t < n_moments; ++t) {
                const Move move = (previous && keep_move(rng)) ? *previous : kMoves[pick_move(rng)];
                row = std::clamp(row + move.d_row, 0, rows - 1);
                col = std::clamp(col + move.d_col, 0, cols - 1);
                cells.push_back(static_cast<LocationId>(row * cols + col));
                previous = move;
            }
            out.push_back(DiscreteTrajectory::from_locations("o" + std::to_string(o),
                                                             "d" + std::to_string(d), cells));
        }
    }
    return out;
}

std::size_t rank_of(const RankedPrediction& ranked, LocationId truth) {
    const auto it = std::find(ranked.order.begin(), ranked.order.end(), truth);
    if (it == ranked.order.end()) {
        throw std::invalid_argument("rank_of: location not in the ranking");
    }
    return static_cast<std::size_t>(it - ranked.order.begin()) + 1;
}

bool top_n_accuracy(const RankedPrediction& ranked, LocationId truth, std::size_t n) {
    if (n < 1) {
        throw std::invalid_argument("top_n_accuracy: n must be at least 1");
    }
    return rank_of(ranked, truth) <= n;
}

std::string_view to_string(Setting s) {
    switch (s) {
        case Setting::fixed_delta:
            return "fixed-delta";
        case Setting::fixed_start:
            return "fixed-start";
        case Setting::busyness:
            return "busyness";
        case Setting::ipm_sweep:
            return "ipm-sweep";
    }
    return "?";
}

Setting parse_setting(std::string_view text) {
    for (Setting s : {Setting::fixed_delta, Setting::fixed_start, Setting::busyness, Setting::ipm_sweep}) {
        if (to_string(s) == text) {
            return s;
        }
    }
    throw std::invalid_argument("unknown experiment setting '" + std::string(text) + "'");
}

void ExperimentSpec::validate(std::size_t n_moments) const {
    if (strategies.empty()) {
        throw std::invalid_argument("experiment needs at least one strategy");
    }
    if (start_moments.empty()) {
        throw std::invalid_argument("experiment needs start_moments");
    }
    const auto in_window = [&](std::size_t t) { return t < n_moments; };
    switch (setting) {
        case Setting::fixed_delta:
        case Setting::ipm_sweep:
            if (setting == Setting::ipm_sweep &&
                std::find(strategies.begin(), strategies.end(), Strategy::ipm) == strategies.end()) {
                throw std::invalid_argument("ipm-sweep needs the ipm strategy");
            }
            if (delta_t < 1) {
                throw std::invalid_argument("delta_t must be at least 1");
            }
            for (MomentId s : start_moments) {
                if (!in_window(std::size_t{s} + delta_t)) {
                    throw std::invalid_argument("start moment " + std::to_string(s) +
                                                " + delta_t leaves the window");
                }
            }
            break;
        case Setting::fixed_start:
        case Setting::busyness:
            if (end_moments.empty()) {
                throw std::invalid_argument("experiment needs end_moments");
            }
            for (MomentId t : end_moments) {
                if (t <= start_moments.front() || !in_window(t)) {
                    throw std::invalid_argument("end moment " + std::to_string(t) +
                                                " must follow the start moment inside the window");
                }
            }
            if (setting == Setting::busyness && groups < 1) {
                throw std::invalid_argument("busyness setting needs groups >= 1");
            }
            break;
    }
}

ExperimentSpec ExperimentSpec::from_config(const KeyValueConfig& kv) {
    ExperimentSpec spec;
    spec.setting = parse_setting(kv.at("setting"));
    spec.delta_t = static_cast<MomentId>(kv.get_int("delta_t", spec.delta_t));
    const auto moments = [&](const std::string& key) {
        std::vector<MomentId> out;
        if (kv.contains(key)) {
            for (auto v : kv.get_int_list(key)) {
                if (v < 0) {
                    throw std::invalid_argument("negative moment in '" + key + "'");
                }
                out.push_back(static_cast<MomentId>(v));
            }
        }
        return out;
    };
    spec.start_moments = moments("start_moments");
    spec.end_moments = moments("end_moments");
    if (const auto list = kv.get("strategies")) {
        spec.strategies.clear();
        for (const auto& s : split(*list, ',')) {
            if (const auto name = trim(s); !name.empty()) {
                spec.strategies.push_back(parse_strategy(name));
            }
        }
    }
    if (const auto v = kv.get("predictor")) {
        spec.predictor = parse_predictor_variant(*v);
    }
    spec.groups = static_cast<std::size_t>(kv.get_int("groups", static_cast<long long>(spec.groups)));
    spec.max_test = static_cast<std::size_t>(kv.get_int("max_test", 0));
    return spec;
}

ExperimentSpec ExperimentSpec::load(const std::filesystem::path& path) {
    return from_config(KeyValueConfig::load(path));
}

namespace {

struct Task {
    std::size_t cell = 0;  // index into cell keys
    Strategy strategy = Strategy::alt;
    TrajectoryId truth = 0;
    MomentId t_p = 0;
    MomentId t_x = 0;
    std::optional<MomentId> ipm_mid;
};

std::vector<TrajectoryId> pick_test_ids(const Corpus& test, std::size_t max_test, std::uint64_t seed) {
    auto ids = test.ids();
    if (max_test == 0 || ids.size() <= max_test) {
        return ids;
    }
    std::mt19937_64 rng(seed);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(max_test);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const Corpus& train, const Corpus& test,
                                const RunOptions& options) {
    if (test.empty()) {
        throw std::invalid_argument("run_experiment: empty test set");
    }
    if (train.n_moments() != test.n_moments()) {
        throw std::invalid_argument("run_experiment: train and test cover different windows");
    }
    spec.validate(train.n_moments());

    const Predictor predictor(train);
    const auto test_ids = pick_test_ids(test, spec.max_test, options.seed);

    std::vector<std::string> keys;
    std::vector<Task> tasks;
    const auto add_tasks = [&](std::size_t cell, TrajectoryId id, MomentId t_p, MomentId t_x,
                               std::optional<MomentId> ipm_mid, bool only_ipm) {
        for (Strategy s : spec.strategies) {
            if (only_ipm != (s == Strategy::ipm) && spec.setting == Setting::ipm_sweep) {
                continue;
            }
            tasks.push_back({cell, s, id, t_p, t_x, ipm_mid});
        }
    };

    switch (spec.setting) {
        case Setting::fixed_delta:
            for (MomentId s : spec.start_moments) {
                keys.push_back(std::to_string(s));
            }
            for (TrajectoryId id : test_ids) {
                for (std::size_t c = 0; c < spec.start_moments.size(); ++c) {
                    const auto t_p = spec.start_moments[c];
                    for (Strategy s : spec.strategies) {
                        tasks.push_back({c, s, id, t_p, t_p + spec.delta_t, std::nullopt});
                    }
                }
            }
            break;
        case Setting::fixed_start:
            for (MomentId t : spec.end_moments) {
                keys.push_back(std::to_string(t));
            }
            for (TrajectoryId id : test_ids) {
                for (std::size_t c = 0; c < spec.end_moments.size(); ++c) {
                    for (Strategy s : spec.strategies) {
                        tasks.push_back({c, s, id, spec.start_moments.front(), spec.end_moments[c], std::nullopt});
                    }
                }
            }
            break;
        case Setting::busyness: {
            const auto groups = train.busyness_groups(spec.groups);
            for (std::size_t g = 0; g < spec.groups; ++g) {
                keys.push_back(std::to_string(g));
            }
            const auto t_p = spec.start_moments.front();
            for (TrajectoryId id : test_ids) {
                const auto cell = groups[test.location_at(id, t_p)];
                for (Strategy s : spec.strategies) {
                    tasks.push_back({cell, s, id, t_p, spec.end_moments.front(), std::nullopt});
                }
            }
            break;
        }
        case Setting::ipm_sweep: {
            const auto t_p = spec.start_moments.front();
            const auto t_x = t_p + spec.delta_t;
            keys.push_back("all");
            for (MomentId mid = t_p + 1; mid <= t_x; ++mid) {
                keys.push_back("+" + std::to_string(mid - t_p));
            }
            for (TrajectoryId id : test_ids) {
                add_tasks(0, id, t_p, t_x, std::nullopt, false);
                for (MomentId mid = t_p + 1; mid <= t_x; ++mid) {
                    add_tasks(mid - t_p, id, t_p, t_x, mid, true);
                }
            }
            break;
        }
    }

    std::vector<EpisodeRecord> records(tasks.size());
    const auto run_task = [&](std::size_t i) {
        const auto& task = tasks[i];
        const auto truth = test.trajectory(task.truth);
        auto session = SearchSession::open(truth, task.t_x);
        const UnitConstraint start{truth.at(task.t_p), task.t_p};
        const Episode episode{start, task.t_x, predictor, session};
        const auto result = run_strategy(task.strategy, episode, spec.predictor, task.ipm_mid);
        if (result.total_searches != session.cost()) {
            throw std::logic_error("strategy searches disagree with the session meter");
        }
        const UnitConstraint start_only[] = {start};
        auto& rec = records[i];
        rec.key = keys[task.cell];
        rec.strategy = task.strategy;
        rec.object_id = truth.object_id;
        rec.day_id = truth.day_id;
        rec.t_p = task.t_p;
        rec.t_x = task.t_x;
        rec.start_loc = start.location;
        rec.truth_loc = truth.at(task.t_x);
        rec.found_loc = result.found_location;
        rec.total_searches = result.total_searches;
        rec.covered = train.count_matching(start_only) > 0;
        rec.steps = format_steps(result);
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, tasks.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            run_task(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < tasks.size(); i = next++) {
                        try {
                            run_task(i);
                        } catch (...) {
                            std::lock_guard lock(failure_mutex);
                            if (!failure) {
                                failure = std::current_exception();
                            }
                            next = tasks.size();
                        }
                    }
                });
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    // Reduce in task order.
    struct Acc {
        double sum = 0.0;
        double sum_sq = 0.0;
        std::size_t n = 0;
        std::size_t uncovered = 0;
    };
    std::map<std::pair<std::size_t, std::size_t>, Acc> acc;
    const auto strategy_index = [&](Strategy s) {
        return static_cast<std::size_t>(
            std::find(spec.strategies.begin(), spec.strategies.end(), s) - spec.strategies.begin());
    };
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto& a = acc[{tasks[i].cell, strategy_index(tasks[i].strategy)}];
        const auto v = static_cast<double>(records[i].total_searches);
        a.sum += v;
        a.sum_sq += v * v;
        ++a.n;
        a.uncovered += records[i].covered ? 0 : 1;
    }

    ExperimentResult result;
    for (const auto& [cell_strategy, a] : acc) {
        ReportRow row;
        row.setting = std::string(to_string(spec.setting));
        row.key = keys[cell_strategy.first];
        row.strategy = spec.strategies[cell_strategy.second];
        row.episodes = a.n;
        row.uncovered = a.uncovered;
        row.mean_searches = a.sum / static_cast<double>(a.n);
        if (a.n > 1) {
            const double var = (a.sum_sq - a.sum * a.sum / static_cast<double>(a.n)) /
                               static_cast<double>(a.n - 1);
            row.std_searches = std::sqrt(std::max(0.0, var));
        }
        result.rows.push_back(std::move(row));
    }
    result.episodes = std::move(records);
    return result;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    out << "setting,key,strategy,mean_searches,std_searches,episodes,uncovered\n";
    const auto old = out.precision(15);
    for (const auto& r : rows) {
        out << r.setting << ',' << r.key << ',' << to_string(r.strategy) << ',' << r.mean_searches << ','
            << r.std_searches << ',' << r.episodes << ',' << r.uncovered << '\n';
    }
    out.precision(old);
}

void write_episodes_csv(std::ostream& out, const std::vector<EpisodeRecord>& episodes) {
    out << "strategy,object_id,day_id,t_p,t_x,start_loc,found_loc,total_searches,steps\n";
    for (const auto& e : episodes) {
        out << to_string(e.strategy) << ',' << e.object_id << ',' << e.day_id << ',' << e.t_p << ','
            << e.t_x << ',' << e.start_loc << ',' << e.found_loc << ',' << e.total_searches << ','
            << e.steps << '\n';
    }
}

}  // namespace stsearch
