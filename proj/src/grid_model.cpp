#include "stsearch/grid_model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace stsearch {

namespace {

constexpr double kEarthRadiusKm = 6371.0088;
constexpr double kKmPerDegree = kEarthRadiusKm * std::numbers::pi / 180.0;
constexpr std::int64_t kSecondsPerDay = 86400;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    const auto q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

}  // namespace

void GridConfig::validate() const {
    if (n_rows < 1 || n_cols < 1) {
        throw std::invalid_argument("grid needs at least one row and one column");
    }
    if (!(cell_size_km > 0.0)) {
        throw std::invalid_argument("cell_size_km must be positive");
    }
    if (moment_seconds <= 0) {
        throw std::invalid_argument("moment_seconds must be positive");
    }
    if (origin_lat < -90.0 || origin_lat > 90.0 || origin_lon < -180.0 || origin_lon > 180.0) {
        throw std::invalid_argument("grid origin out of range");
    }
    if (day_start < 0 || day_end > kSecondsPerDay || day_end <= day_start) {
        throw std::invalid_argument("day window must satisfy 0 <= day_start < day_end <= 86400");
    }
    if (n_moments() < 1) {
        throw std::invalid_argument("day window shorter than one moment");
    }
}

std::size_t GridConfig::n_moments() const {
    if (moment_seconds <= 0 || day_end <= day_start) {
        return 0;
    }
    return static_cast<std::size_t>((day_end - day_start) / moment_seconds);
}

GridConfig GridConfig::from_config(const KeyValueConfig& kv) {
    GridConfig g;
    g.origin_lat = kv.get_double("origin_lat");
    g.origin_lon = kv.get_double("origin_lon");
    g.cell_size_km = kv.get_double("cell_size_km");
    const auto rows = kv.get_int("n_rows");
    const auto cols = kv.get_int("n_cols");
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("n_rows and n_cols must be positive");
    }
    g.n_rows = static_cast<std::size_t>(rows);
    g.n_cols = static_cast<std::size_t>(cols);
    g.moment_seconds = kv.get_int("moment_seconds");
    g.day_start = kv.get_int("day_start");
    g.day_end = kv.get_int("day_end");
    g.validate();
    return g;
}

GridConfig GridConfig::load(const std::filesystem::path& path) {
    return from_config(KeyValueConfig::load(path));
}

std::string GridConfig::to_config_string() const {
    std::ostringstream out;
    out.precision(17);
    out << "origin_lat = " << origin_lat << '\n'
        << "origin_lon = " << origin_lon << '\n'
        << "cell_size_km = " << cell_size_km << '\n'
        << "n_rows = " << n_rows << '\n'
        << "n_cols = " << n_cols << '\n'
        << "moment_seconds = " << moment_seconds << '\n'
        << "day_start = " << day_start << '\n'
        << "day_end = " << day_end << '\n';
    return out.str();
}

DiscreteTrajectory DiscreteTrajectory::from_locations(std::string object_id, std::string day_id,
                                                      std::span<const LocationId> locations) {
    DiscreteTrajectory t{std::move(object_id), std::move(day_id), {}};
    t.cells.assign(locations.begin(), locations.end());
    return t;
}

bool DiscreteTrajectory::complete() const {
    return std::all_of(cells.begin(), cells.end(), [](const auto& c) { return c.has_value(); });
}

std::size_t DiscreteTrajectory::known_count() const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.has_value(); }));
}

LocationId DiscreteTrajectory::at(MomentId t) const {
    if (t >= cells.size() || !cells[t]) {
        throw std::logic_error("trajectory " + object_id + "/" + day_id + " has no location at moment " +
                               std::to_string(t));
    }
    return *cells[t];
}

std::vector<LocationId> DiscreteTrajectory::locations() const {
    std::vector<LocationId> out;
    out.reserve(cells.size());
    for (MomentId t = 0; t < cells.size(); ++t) {
        out.push_back(at(t));
    }
    return out;
}

KmOffset offset_km(double lat, double lon, const GridConfig& g) {
    const double cos_lat = std::cos(g.origin_lat * std::numbers::pi / 180.0);
    return {(lat - g.origin_lat) * kKmPerDegree, (lon - g.origin_lon) * kKmPerDegree * cos_lat};
}

std::optional<LocationId> cell_at(KmOffset p, const GridConfig& g) {
    if (!(p.north >= 0.0) || !(p.east >= 0.0)) {
        return std::nullopt;
    }
    const double row = std::floor(p.north / g.cell_size_km);
    const double col = std::floor(p.east / g.cell_size_km);
    if (row >= static_cast<double>(g.n_rows) || col >= static_cast<double>(g.n_cols)) {
        return std::nullopt;
    }
    return static_cast<LocationId>(static_cast<std::size_t>(row) * g.n_cols +
                                   static_cast<std::size_t>(col));
}

KmOffset cell_center(LocationId l, const GridConfig& g) {
    const auto row = l / g.n_cols;
    const auto col = l % g.n_cols;
    return {(static_cast<double>(row) + 0.5) * g.cell_size_km,
            (static_cast<double>(col) + 0.5) * g.cell_size_km};
}

double center_distance_km(LocationId a, LocationId b, const GridConfig& g) {
    const auto pa = cell_center(a, g);
    const auto pb = cell_center(b, g);
    return std::hypot(pa.north - pb.north, pa.east - pb.east);
}

std::optional<LocationId> assign_cell(const RawPoint& p, const GridConfig& g) {
    return cell_at(offset_km(p.lat, p.lon, g), g);
}

std::string day_id_of(std::int64_t timestamp) {
    using namespace std::chrono;
    const sys_days day{days{floor_div(timestamp, kSecondsPerDay)}};
    const year_month_day ymd{day};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::optional<MomentId> moment_of(std::int64_t timestamp, const GridConfig& g) {
    const auto sec = timestamp - floor_div(timestamp, kSecondsPerDay) * kSecondsPerDay;
    if (sec < g.day_start) {
        return std::nullopt;
    }
    const auto m = static_cast<std::size_t>((sec - g.day_start) / g.moment_seconds);
    if (m >= g.n_moments()) {
        return std::nullopt;
    }
    return static_cast<MomentId>(m);
}

DiscreteTrajectory discretize(std::span<const RawPoint> points, const GridConfig& g) {
    DiscreteTrajectory out;
    out.cells.assign(g.n_moments(), std::nullopt);
    if (points.empty()) {
        return out;
    }
    out.object_id = points.front().object_id;
    out.day_id = day_id_of(points.front().timestamp);
    const auto day = floor_div(points.front().timestamp, kSecondsPerDay);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (i > 0 && p.timestamp < points[i - 1].timestamp) {
            throw std::invalid_argument("discretize: points not sorted by timestamp");
        }
        if (p.object_id != out.object_id) {
            throw std::invalid_argument("discretize: points of several objects");
        }
        if (floor_div(p.timestamp, kSecondsPerDay) != day) {
            throw std::invalid_argument("discretize: points of several days");
        }
        const auto m = moment_of(p.timestamp, g);
        if (!m || out.cells[*m]) {
            continue;
        }
        if (const auto cell = assign_cell(p, g)) {
            out.cells[*m] = cell;
        }
    }
    return out;
}

std::optional<DiscreteTrajectory> repair(const DiscreteTrajectory& t, const GridConfig& g,
                                         const RepairLimits& limits) {
    std::vector<std::size_t> known;
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        if (t.cells[i]) {
            known.push_back(i);
        }
    }
    if (known.size() < 2) {
        return std::nullopt;
    }
    const std::size_t n = t.cells.size();
    if (known.front() > limits.max_edge_gap || n - 1 - known.back() > limits.max_edge_gap) {
        return std::nullopt;
    }

    DiscreteTrajectory out = t;
    for (std::size_t i = 0; i < known.front(); ++i) {
        out.cells[i] = t.cells[known.front()];
    }
    for (std::size_t i = known.back() + 1; i < n; ++i) {
        out.cells[i] = t.cells[known.back()];
    }
    for (std::size_t k = 1; k < known.size(); ++k) {
        const auto a = known[k - 1];
        const auto b = known[k];
        const auto gap = b - a - 1;
        if (gap == 0) {
            continue;
        }
        const auto from = *t.cells[a];
        const auto to = *t.cells[b];
        if (gap > limits.max_interior_gap || center_distance_km(from, to, g) > limits.max_interior_km) {
            return std::nullopt;
        }
        const auto pa = cell_center(from, g);
        const auto pb = cell_center(to, g);
        for (std::size_t i = 1; i <= gap; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(gap + 1);
            const auto cell = cell_at({pa.north + f * (pb.north - pa.north),
                                       pa.east + f * (pb.east - pa.east)},
                                      g);
            if (!cell) {
                return std::nullopt;
            }
            out.cells[a + i] = cell;
        }
    }
    return out;
}

std::vector<DiscreteTrajectory> prepare_trajectories(std::vector<RawPoint> points,
                                                     const GridConfig& g,
                                                     const RepairLimits& limits,
                                                     PrepareStats* stats) {
    g.validate();
    std::stable_sort(points.begin(), points.end(), [](const RawPoint& a, const RawPoint& b) {
        return a.object_id != b.object_id ? a.object_id < b.object_id : a.timestamp < b.timestamp;
    });

    PrepareStats local;
    std::vector<DiscreteTrajectory> out;
    std::size_t begin = 0;
    while (begin < points.size()) {
        const auto day = floor_div(points[begin].timestamp, kSecondsPerDay);
        std::size_t end = begin + 1;
        while (end < points.size() && points[end].object_id == points[begin].object_id &&
               floor_div(points[end].timestamp, kSecondsPerDay) == day) {
            ++end;
        }
        ++local.object_days;
        const auto raw = discretize(std::span(points).subspan(begin, end - begin), g);
        if (auto fixed = repair(raw, g, limits)) {
            ++local.retained;
            if (!raw.complete()) {
                ++local.retained_with_gaps;
            }
            out.push_back(std::move(*fixed));
        }
        begin = end;
    }
    if (stats) {
        *stats = local;
    }
    return out;
}

}  // namespace stsearch
