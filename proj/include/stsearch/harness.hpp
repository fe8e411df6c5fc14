#pragma once

#include "stsearch/corpus.hpp"
#include "stsearch/grid_model.hpp"
#include "stsearch/predictor.hpp"
#include "stsearch/strategies.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace stsearch {

struct SynthParams {
    GridConfig grid;
    std::size_t n_objects = 200;
    std::size_t n_days = 11;
    double persistence = 0.8;
    std::uint64_t seed = 1;
};

// Momentum random walk per object-day. Every day of an object starts at the
// object's home cell; each step repeats the previous move with probability
// `persistence`, else draws uniformly from {north, south, east, west, stay}.
// Moves are clipped at the grid border. Day ids are "d0".."d{n-1}", object
// ids "o0".."o{n-1}".
std::vector<DiscreteTrajectory> synth(const SynthParams& p);

bool top_n_accuracy(const RankedPrediction& ranked, LocationId truth, std::size_t n);
// 1-based position of `truth` in the ranking.
std::size_t rank_of(const RankedPrediction& ranked, LocationId truth);

enum class Setting { fixed_delta, fixed_start, busyness, ipm_sweep };
std::string_view to_string(Setting s);
Setting parse_setting(std::string_view text);

// fixed_delta  one cell per start moment, end = start + delta_t
// fixed_start  one cell per end moment, start = start_moments[0]
// busyness     start_moments[0] -> end_moments[0], one cell per busyness
//              group of the start location
// ipm_sweep    start_moments[0] -> +delta_t, IPM at every intermediate moment
struct ExperimentSpec {
    Setting setting = Setting::fixed_delta;
    MomentId delta_t = 30;
    std::vector<MomentId> start_moments;
    std::vector<MomentId> end_moments;
    std::vector<Strategy> strategies{std::begin(kAllStrategies), std::end(kAllStrategies)};
    PredictorVariant predictor = PredictorVariant::first_order;
    std::size_t groups = 4;
    // Use at most this many test trajectories (seeded sample); 0 keeps all.
    std::size_t max_test = 0;

    void validate(std::size_t n_moments) const;
    static ExperimentSpec from_config(const KeyValueConfig& kv);
    static ExperimentSpec load(const std::filesystem::path& path);
};

struct ReportRow {
    std::string setting;
    std::string key;
    Strategy strategy = Strategy::alt;
    double mean_searches = 0.0;
    double std_searches = 0.0;
    std::size_t episodes = 0;
    // Episodes whose start unit never occurs in the training corpus.
    std::size_t uncovered = 0;
};

struct EpisodeRecord {
    std::string key;
    Strategy strategy = Strategy::alt;
    std::string object_id;
    std::string day_id;
    MomentId t_p = 0;
    MomentId t_x = 0;
    LocationId start_loc = 0;
    LocationId truth_loc = 0;
    LocationId found_loc = 0;
    std::size_t total_searches = 0;
    bool covered = true;
    std::string steps;
};

struct RunOptions {
    std::size_t threads = 1;
    std::uint64_t seed = 1;
};

struct ExperimentResult {
    std::vector<ReportRow> rows;
    std::vector<EpisodeRecord> episodes;  // in deterministic task order
};

// Throws std::invalid_argument on an empty test corpus, mismatched windows,
// or an invalid spec. Cells without episodes produce no row.
ExperimentResult run_experiment(const ExperimentSpec& spec, const Corpus& train,
                                const Corpus& test, const RunOptions& options = {});

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);
void write_episodes_csv(std::ostream& out, const std::vector<EpisodeRecord>& episodes);

}  // namespace stsearch
