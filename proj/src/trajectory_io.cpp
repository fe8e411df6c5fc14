#include "stsearch/trajectory_io.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>
#include <stdexcept>

namespace stsearch {

namespace {

std::vector<std::string> split_row(const std::string& line) {
    auto fields = split(line, ',');
    for (auto& f : fields) {
        f = trim(f);
    }
    return fields;
}

bool is_epoch(std::string_view text) {
    if (text.empty()) {
        return false;
    }
    std::size_t i = (text.front() == '-') ? 1 : 0;
    bool digits = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits = true;
        } else if (c != '.') {
            return false;
        }
    }
    return digits;
}

int read_fixed(std::string_view text, std::size_t pos, std::size_t len) {
    if (pos + len > text.size()) {
        throw std::invalid_argument("bad ISO-8601 timestamp: " + std::string(text));
    }
    int v = 0;
    const auto* b = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(b, b + len, v);
    if (ec != std::errc{} || ptr != b + len) {
        throw std::invalid_argument("bad ISO-8601 timestamp: " + std::string(text));
    }
    return v;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return in;
}

}  // namespace

std::int64_t parse_iso8601(std::string_view text) {
    // YYYY-MM-DD[T ]hh:mm:ss[.fff][Z]
    if (text.size() < 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
        text[13] != ':' || text[16] != ':') {
        throw std::invalid_argument("bad ISO-8601 timestamp: " + std::string(text));
    }
    auto rest = text.substr(19);
    if (!rest.empty() && rest.front() == '.') {
        std::size_t i = 1;
        while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) {
            ++i;
        }
        rest = rest.substr(i);
    }
    if (!(rest.empty() || rest == "Z")) {
        throw std::invalid_argument("ISO-8601 timestamp must be UTC: " + std::string(text));
    }
    using namespace std::chrono;
    const year_month_day ymd{year{read_fixed(text, 0, 4)},
                             month{static_cast<unsigned>(read_fixed(text, 5, 2))},
                             day{static_cast<unsigned>(read_fixed(text, 8, 2))}};
    if (!ymd.ok()) {
        throw std::invalid_argument("bad calendar date: " + std::string(text));
    }
    const int hh = read_fixed(text, 11, 2);
    const int mm = read_fixed(text, 14, 2);
    const int ss = read_fixed(text, 17, 2);
    if (hh > 23 || mm > 59 || ss > 60) {
        throw std::invalid_argument("bad clock time: " + std::string(text));
    }
    const auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
    return static_cast<std::int64_t>(days_since_epoch) * 86400 + hh * 3600 + mm * 60 + ss;
}

std::vector<RawPoint> read_raw_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || split_row(line) != std::vector<std::string>{"object_id", "lat", "lon", "timestamp"}) {
        throw std::invalid_argument("raw CSV must start with header object_id,lat,lon,timestamp");
    }
    std::vector<RawPoint> out;
    std::optional<bool> epoch;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto f = split_row(line);
        if (f.size() != 4) {
            throw std::invalid_argument("raw CSV line " + std::to_string(line_no) + ": expected 4 fields");
        }
        if (!epoch) {
            epoch = is_epoch(f[3]);
        }
        RawPoint p;
        p.object_id = f[0];
        try {
            p.lat = std::stod(f[1]);
            p.lon = std::stod(f[2]);
            p.timestamp = *epoch ? static_cast<std::int64_t>(std::stod(f[3])) : parse_iso8601(f[3]);
        } catch (const std::logic_error& e) {
            throw std::invalid_argument("raw CSV line " + std::to_string(line_no) + ": " + e.what());
        }
        if (p.lat < -90.0 || p.lat > 90.0 || p.lon < -180.0 || p.lon > 180.0) {
            throw std::invalid_argument("raw CSV line " + std::to_string(line_no) + ": coordinate out of range");
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<RawPoint> read_raw_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_raw_csv(in);
}

std::vector<DiscreteTrajectory> read_discrete_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("discrete CSV is empty");
    }
    const auto header = split_row(line);
    if (header.size() < 2 || header[0] != "object_id" || header[1] != "day_id") {
        throw std::invalid_argument("discrete CSV must start with header object_id,day_id,m0,...");
    }
    for (std::size_t i = 2; i < header.size(); ++i) {
        if (header[i] != "m" + std::to_string(i - 2)) {
            throw std::invalid_argument("discrete CSV header column " + std::to_string(i) +
                                        " must be m" + std::to_string(i - 2));
        }
    }
    const std::size_t n_moments = header.size() - 2;
    std::vector<DiscreteTrajectory> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto f = split_row(line);
        if (f.size() != n_moments + 2) {
            throw std::invalid_argument("discrete CSV line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(n_moments + 2) + " fields");
        }
        DiscreteTrajectory t{f[0], f[1], {}};
        t.cells.reserve(n_moments);
        for (std::size_t i = 2; i < f.size(); ++i) {
            if (f[i].empty()) {
                t.cells.emplace_back(std::nullopt);
                continue;
            }
            LocationId l = 0;
            const auto* b = f[i].data();
            const auto [ptr, ec] = std::from_chars(b, b + f[i].size(), l);
            if (ec != std::errc{} || ptr != b + f[i].size()) {
                throw std::invalid_argument("discrete CSV line " + std::to_string(line_no) +
                                            ": bad location id '" + f[i] + "'");
            }
            t.cells.emplace_back(l);
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<DiscreteTrajectory> read_discrete_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_discrete_csv(in);
}

void write_discrete_csv(std::ostream& out, const std::vector<DiscreteTrajectory>& ts) {
    const std::size_t n_moments = ts.empty() ? 0 : ts.front().cells.size();
    out << "object_id,day_id";
    for (std::size_t i = 0; i < n_moments; ++i) {
        out << ",m" << i;
    }
    out << '\n';
    for (const auto& t : ts) {
        if (t.cells.size() != n_moments) {
            throw std::invalid_argument("write_discrete_csv: mixed window lengths");
        }
        out << t.object_id << ',' << t.day_id;
        for (const auto& c : t.cells) {
            out << ',';
            if (c) {
                out << *c;
            }
        }
        out << '\n';
    }
}

void write_discrete_csv(const std::filesystem::path& path, const std::vector<DiscreteTrajectory>& ts) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    write_discrete_csv(out, ts);
}

}  // namespace stsearch
