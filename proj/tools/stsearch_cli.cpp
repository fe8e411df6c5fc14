// Command line front end: synthetic data, GPS preprocessing, single-episode
// tracking and strategy benchmarks.

#include "stsearch/corpus.hpp"
#include "stsearch/grid_model.hpp"
#include "stsearch/harness.hpp"
#include "stsearch/oracle.hpp"
#include "stsearch/strategies.hpp"
#include "stsearch/trajectory_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

using namespace stsearch;

namespace {

std::size_t infer_locations(const std::vector<DiscreteTrajectory>& a, const std::vector<DiscreteTrajectory>& b) {
    LocationId max_seen = 0;
    for (const auto* set : {&a, &b}) {
        for (const auto& t : *set) {
            for (const auto& c : t.cells) {
                if (c) {
                    max_seen = std::max(max_seen, *c);
                }
            }
        }
    }
    return std::size_t{max_seen} + 1;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Track a disappeared object with the fewest spatiotemporal searches"};
    app.require_subcommand(1);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate momentum random-walk trajectories");
    std::string synth_grid;
    std::string synth_out;
    SynthParams synth_params;
    synth_cmd->add_option("--grid", synth_grid, "Grid config file")->required()->check(CLI::ExistingFile);
    synth_cmd->add_option("--objects", synth_params.n_objects, "Number of objects")->required();
    synth_cmd->add_option("--days", synth_params.n_days, "Days per object")->required();
    synth_cmd->add_option("--persistence", synth_params.persistence, "Probability of repeating the last move")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--seed", synth_params.seed, "Random seed")->required();
    synth_cmd->add_option("--out", synth_out, "Discrete trajectory CSV")->required();

    // prep
    auto* prep_cmd = app.add_subcommand("prep", "Discretize and repair raw GPS points");
    std::string prep_grid;
    std::string prep_raw;
    std::string prep_out;
    prep_cmd->add_option("--grid", prep_grid, "Grid config file")->required()->check(CLI::ExistingFile);
    prep_cmd->add_option("--raw", prep_raw, "Raw CSV object_id,lat,lon,timestamp")->required()->check(CLI::ExistingFile);
    prep_cmd->add_option("--out", prep_out, "Discrete trajectory CSV")->required();

    // track
    auto* track_cmd = app.add_subcommand("track", "Run one strategy against one ground-truth trajectory");
    std::string track_train;
    std::string track_truth;
    std::string track_strategy;
    std::string track_predictor = "first";
    std::string track_grid;
    std::string track_log;
    std::size_t track_row = 0;
    LocationId start_loc = 0;
    MomentId start_moment = 0;
    MomentId end_moment = 0;
    std::optional<MomentId> ipm_mid;
    track_cmd->add_option("--train", track_train, "Training trajectories CSV")->required()->check(CLI::ExistingFile);
    track_cmd->add_option("--truth", track_truth, "Ground-truth trajectory CSV")->required()->check(CLI::ExistingFile);
    track_cmd->add_option("--strategy", track_strategy, "alt|ipm|iem|ihms|ihus")
        ->required()
        ->check(CLI::IsMember({"alt", "ipm", "iem", "ihms", "ihus"}));
    track_cmd->add_option("--start-loc", start_loc, "Witnessed location")->required();
    track_cmd->add_option("--start-moment", start_moment, "Witnessed moment")->required();
    track_cmd->add_option("--end-moment", end_moment, "Current moment")->required();
    track_cmd->add_option("--ipm-mid", ipm_mid, "IPM intermediate moment (default: midpoint)");
    track_cmd->add_option("--predictor", track_predictor, "first|second|pooled")
        ->check(CLI::IsMember({"first", "second", "pooled"}));
    track_cmd->add_option("--truth-row", track_row, "Row of the truth CSV to track (default 0)");
    track_cmd->add_option("--grid", track_grid, "Grid config fixing the number of locations")->check(CLI::ExistingFile);
    track_cmd->add_option("--log", track_log, "Write the search audit log CSV here");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run an experiment over a test set");
    std::string bench_spec;
    std::string bench_train;
    std::string bench_test;
    std::string bench_out;
    std::string bench_episodes;
    std::string bench_grid;
    bool param_sweep = false;
    RunOptions run_options;
    bench_cmd->add_option("--spec", bench_spec, "Experiment config file")->required()->check(CLI::ExistingFile);
    bench_cmd->add_option("--train", bench_train, "Training trajectories CSV")->required()->check(CLI::ExistingFile);
    bench_cmd->add_option("--test", bench_test, "Test trajectories CSV")->required()->check(CLI::ExistingFile);
    bench_cmd->add_option("--out", bench_out, "Report CSV")->required();
    bench_cmd->add_option("--threads", run_options.threads, "Worker threads")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", run_options.seed, "Seed for test-set sampling");
    bench_cmd->add_option("--episodes", bench_episodes, "Write per-episode results CSV here");
    bench_cmd->add_option("--grid", bench_grid, "Grid config fixing the number of locations")->check(CLI::ExistingFile);
    bench_cmd->add_flag("--param-sweep", param_sweep, "Sweep the IPM intermediate moment");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth_cmd) {
            synth_params.grid = GridConfig::load(synth_grid);
            write_discrete_csv(synth_out, synth(synth_params));
        } else if (*prep_cmd) {
            const auto grid = GridConfig::load(prep_grid);
            PrepareStats stats;
            const auto ts = prepare_trajectories(read_raw_csv(prep_raw), grid, {}, &stats);
            write_discrete_csv(prep_out, ts);
            std::cerr << "object-days " << stats.object_days << ", retained " << stats.retained
                      << " (" << stats.retained_with_gaps << " repaired)\n";
        } else if (*track_cmd) {
            auto train_ts = read_discrete_csv(track_train);
            const auto truth_ts = read_discrete_csv(track_truth);
            if (track_row >= truth_ts.size()) {
                throw std::invalid_argument("truth CSV has no row " + std::to_string(track_row));
            }
            const auto n_locations = track_grid.empty() ? infer_locations(train_ts, truth_ts)
                                                        : GridConfig::load(track_grid).n_locations();
            const Predictor predictor(Corpus::build(std::move(train_ts), n_locations), 0);
            const auto& truth = truth_ts[track_row];
            auto session = SearchSession::open(truth, end_moment);
            const Episode episode{{start_loc, start_moment}, end_moment, predictor, session};
            const auto strategy = parse_strategy(track_strategy);
            const auto result =
                run_strategy(strategy, episode, parse_predictor_variant(track_predictor), ipm_mid);
            EpisodeRecord rec;
            rec.strategy = strategy;
            rec.object_id = truth.object_id;
            rec.day_id = truth.day_id;
            rec.t_p = start_moment;
            rec.t_x = end_moment;
            rec.start_loc = start_loc;
            rec.found_loc = result.found_location;
            rec.total_searches = result.total_searches;
            rec.steps = format_steps(result);
            write_episodes_csv(std::cout, {rec});
            if (!track_log.empty()) {
                auto out = open_out(track_log);
                session.write_log_csv(out);
            }
        } else if (*bench_cmd) {
            auto spec = ExperimentSpec::load(bench_spec);
            if (param_sweep) {
                spec.setting = Setting::ipm_sweep;
                if (std::find(spec.strategies.begin(), spec.strategies.end(), Strategy::ipm) == spec.strategies.end()) {
                    spec.strategies.push_back(Strategy::ipm);
                }
            }
            auto train_ts = read_discrete_csv(bench_train);
            auto test_ts = read_discrete_csv(bench_test);
            const auto n_locations = bench_grid.empty() ? infer_locations(train_ts, test_ts)
                                                        : GridConfig::load(bench_grid).n_locations();
            const auto train = Corpus::build(std::move(train_ts), n_locations);
            const auto test = Corpus::build(std::move(test_ts), n_locations);
            const auto result = run_experiment(spec, train, test, run_options);
            auto out = open_out(bench_out);
            write_report_csv(out, result.rows);
            if (!bench_episodes.empty()) {
                auto ep = open_out(bench_episodes);
                write_episodes_csv(ep, result.episodes);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
