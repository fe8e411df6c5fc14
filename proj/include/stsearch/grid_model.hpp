#pragma once

#include "stsearch/config.hpp"
#include "stsearch/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stsearch {

// Spatial grid plus the daily moment window. Cells are square, laid out
// row-major with row 0 at the origin (south-west corner) and growing north;
// moments cover [day_start, day_start + n_moments * moment_seconds).
struct GridConfig {
    double origin_lat = 0.0;
    double origin_lon = 0.0;
    double cell_size_km = 1.0;
    std::size_t n_rows = 30;
    std::size_t n_cols = 30;
    std::int64_t moment_seconds = 60;
    std::int64_t day_start = 7 * 3600;
    std::int64_t day_end = 22 * 3600;

    // Throws std::invalid_argument on a malformed configuration.
    void validate() const;

    std::size_t n_locations() const { return n_rows * n_cols; }
    std::size_t n_moments() const;

    static GridConfig from_config(const KeyValueConfig& kv);
    static GridConfig load(const std::filesystem::path& path);
    std::string to_config_string() const;
};

struct RawPoint {
    std::string object_id;
    double lat = 0.0;
    double lon = 0.0;
    std::int64_t timestamp = 0;  // seconds since the Unix epoch, UTC
};

// One object-day. Before repair a moment may be unknown; after repair every
// moment carries exactly one location id.
struct DiscreteTrajectory {
    std::string object_id;
    std::string day_id;
    std::vector<std::optional<LocationId>> cells;

    static DiscreteTrajectory from_locations(std::string object_id, std::string day_id,
                                             std::span<const LocationId> locations);

    std::size_t n_moments() const { return cells.size(); }
    bool complete() const;
    std::size_t known_count() const;
    // Throws std::logic_error when the moment is unknown.
    LocationId at(MomentId t) const;
    std::vector<LocationId> locations() const;

    friend bool operator==(const DiscreteTrajectory&, const DiscreteTrajectory&) = default;
};

struct KmOffset {
    double north = 0.0;
    double east = 0.0;
};

// Equirectangular offset of a coordinate from the grid origin.
KmOffset offset_km(double lat, double lon, const GridConfig& g);
std::optional<LocationId> cell_at(KmOffset p, const GridConfig& g);
KmOffset cell_center(LocationId l, const GridConfig& g);
double center_distance_km(LocationId a, LocationId b, const GridConfig& g);

std::optional<LocationId> assign_cell(const RawPoint& p, const GridConfig& g);

// "YYYY-MM-DD" of the UTC calendar day containing the timestamp.
std::string day_id_of(std::int64_t timestamp);
// Moment of the day window containing the timestamp, absent outside it.
std::optional<MomentId> moment_of(std::int64_t timestamp, const GridConfig& g);

// Keeps the first in-grid point of each moment. Points must be sorted by
// timestamp and belong to one object and one day (std::invalid_argument
// otherwise).
DiscreteTrajectory discretize(std::span<const RawPoint> points, const GridConfig& g);

struct RepairLimits {
    std::size_t max_edge_gap = 5;
    std::size_t max_interior_gap = 10;
    double max_interior_km = 15.0;
};

// Fills leading/trailing gaps with the nearest known cell and interior gaps
// by constant-velocity interpolation between the flanking cell centers.
// Returns nothing when any gap breaks the limits or fewer than two moments
// are known.
std::optional<DiscreteTrajectory> repair(const DiscreteTrajectory& t, const GridConfig& g,
                                         const RepairLimits& limits = {});

struct PrepareStats {
    std::size_t object_days = 0;
    std::size_t retained = 0;
    std::size_t retained_with_gaps = 0;
};

// Groups raw points by (object, day), then discretizes and repairs each
// group. Output order is by object id, then day id.
std::vector<DiscreteTrajectory> prepare_trajectories(std::vector<RawPoint> points,
                                                     const GridConfig& g,
                                                     const RepairLimits& limits = {},
                                                     PrepareStats* stats = nullptr);

}  // namespace stsearch
