#include "stsearch/oracle.hpp"

#include <stdexcept>

namespace stsearch {

SearchSession SearchSession::open(const DiscreteTrajectory& truth, std::optional<MomentId> horizon) {
    if (!truth.complete()) {
        throw std::invalid_argument("search session needs a gap-free trajectory");
    }
    if (horizon && *horizon >= truth.n_moments()) {
        throw std::out_of_range("search horizon outside the window");
    }
    SearchSession s;
    s.truth_ = truth.locations();
    s.horizon_ = horizon;
    return s;
}

bool SearchSession::search(LocationId l, MomentId t) {
    if (t >= truth_.size()) {
        throw std::out_of_range("search moment " + std::to_string(t) + " outside the window");
    }
    if (horizon_ && t > *horizon_) {
        throw std::out_of_range("search moment " + std::to_string(t) + " after the current moment " +
                                std::to_string(*horizon_));
    }
    const bool hit = truth_[t] == l;
    log_.push_back({l, t, hit});
    return hit;
}

void SearchSession::write_log_csv(std::ostream& out) const {
    out << "step,location,moment,outcome\n";
    for (std::size_t i = 0; i < log_.size(); ++i) {
        out << (i + 1) << ',' << log_[i].location << ',' << log_[i].moment << ','
            << (log_[i].outcome ? 1 : 0) << '\n';
    }
}

}  // namespace stsearch
