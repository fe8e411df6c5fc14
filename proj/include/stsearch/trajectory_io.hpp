#pragma once

#include "stsearch/grid_model.hpp"

#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

namespace stsearch {

// `object_id,lat,lon,timestamp`; timestamps are epoch seconds or ISO-8601
// (`YYYY-MM-DD[T ]hh:mm:ss[Z]`, UTC), detected from the first data row.
std::vector<RawPoint> read_raw_csv(std::istream& in);
std::vector<RawPoint> read_raw_csv(const std::filesystem::path& path);

// Parses an ISO-8601 UTC timestamp; throws std::invalid_argument.
std::int64_t parse_iso8601(std::string_view text);

// `object_id,day_id,m0,m1,...`; an empty field is an unknown moment.
std::vector<DiscreteTrajectory> read_discrete_csv(std::istream& in);
std::vector<DiscreteTrajectory> read_discrete_csv(const std::filesystem::path& path);
void write_discrete_csv(std::ostream& out, const std::vector<DiscreteTrajectory>& ts);
void write_discrete_csv(const std::filesystem::path& path, const std::vector<DiscreteTrajectory>& ts);

}  // namespace stsearch
