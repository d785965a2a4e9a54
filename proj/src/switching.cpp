#include "syncnet/switching.hpp"

#include "syncnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

namespace syncnet {

namespace {

constexpr double kTimeEps = 1e-9;

std::vector<WeightedDigraph> pick(const std::vector<WeightedDigraph>& gs, const std::vector<int>& ids) {
    std::vector<WeightedDigraph> out;
    for (int id : ids) out.push_back(gs.at(id));
    return out;
}

void require_graphs(const SwitchingSignal& sig, const std::vector<WeightedDigraph>& gs) {
    if (sig.max_graph_index() >= static_cast<int>(gs.size()))
        throw DimensionError("schedule references graph " + std::to_string(sig.max_graph_index() + 1) + " but only " +
                             std::to_string(gs.size()) + " graphs were given");
}

}  // namespace

SwitchingSignal::SwitchingSignal(std::vector<ScheduleEntry> schedule, double horizon, double t_min, double t_max,
                                 std::vector<double> marks)
    : schedule_(std::move(schedule)), horizon_(horizon), t_min_(t_min), t_max_(t_max), marks_(std::move(marks)) {
    if (schedule_.empty()) throw ValidationError("switching schedule is empty");
    if (!(t_min_ > 0.0)) throw ParameterError("t_min must be positive");
    if (!(t_max_ >= t_min_)) throw ParameterError("t_max must be at least t_min");
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw ParameterError("horizon must be positive and finite");
    if (std::abs(schedule_.front().t) > kTimeEps) throw ValidationError("schedule must start at t = 0");
    schedule_.front().t = 0.0;
    for (std::size_t k = 0; k < schedule_.size(); ++k) {
        if (schedule_[k].graph < 0) throw ValidationError("negative graph index in schedule");
        if (!(schedule_[k].t < horizon_)) throw ValidationError("schedule entry at or beyond the horizon");
        if (k == 0) continue;
        if (!(schedule_[k].t > schedule_[k - 1].t)) throw ValidationError("schedule times must be strictly increasing");
        double dwell = schedule_[k].t - schedule_[k - 1].t;
        if (dwell < t_min_ - kTimeEps * std::max(1.0, t_min_))
            throw ValidationError("dwell of " + std::to_string(dwell) + " s at t = " + std::to_string(schedule_[k - 1].t) +
                                  " is shorter than t_min");
    }
    if (marks_.empty()) return;
    if (std::abs(marks_.front()) > kTimeEps) throw ValidationError("window marks must start at 0");
    auto st = switch_times();
    for (std::size_t k = 0; k < marks_.size(); ++k) {
        bool on_switch = std::any_of(st.begin(), st.end(), [&](double s) { return std::abs(s - marks_[k]) <= kTimeEps; });
        if (!on_switch) throw ValidationError("window mark " + std::to_string(marks_[k]) + " is not a switch time");
        if (k > 0 && !(marks_[k] > marks_[k - 1])) throw ValidationError("window marks must be strictly increasing");
        if (k > 0 && marks_[k] - marks_[k - 1] > t_max_ + kTimeEps)
            throw ValidationError("window starting at " + std::to_string(marks_[k - 1]) + " is longer than t_max");
    }
}

SwitchingSignal SwitchingSignal::periodic(const std::vector<int>& graph_ids, double dwell, double horizon) {
    if (graph_ids.empty()) throw ParameterError("periodic schedule needs at least one graph");
    if (!(dwell > 0.0)) throw ParameterError("dwell must be positive");
    std::vector<ScheduleEntry> sched;
    for (long k = 0;; ++k) {
        double t = static_cast<double>(k) * dwell;
        if (t >= horizon - kTimeEps && k > 0) break;
        sched.push_back({t, graph_ids[static_cast<std::size_t>(k) % graph_ids.size()]});
    }
    return SwitchingSignal(std::move(sched), horizon, dwell, dwell * static_cast<double>(graph_ids.size()));
}

int SwitchingSignal::max_graph_index() const {
    int m = 0;
    for (const auto& e : schedule_) m = std::max(m, e.graph);
    return m;
}

int SwitchingSignal::graph_at(double t) const {
    auto it = std::upper_bound(schedule_.begin(), schedule_.end(), t,
                               [](double v, const ScheduleEntry& e) { return v < e.t; });
    if (it == schedule_.begin()) return schedule_.front().graph;
    return std::prev(it)->graph;
}

std::vector<Segment> SwitchingSignal::segments() const {
    std::vector<Segment> out;
    for (std::size_t k = 0; k < schedule_.size(); ++k) {
        double t1 = k + 1 < schedule_.size() ? schedule_[k + 1].t : horizon_;
        out.push_back({schedule_[k].t, t1, schedule_[k].graph});
    }
    return out;
}

std::vector<double> SwitchingSignal::switch_times() const {
    std::vector<double> out;
    for (const auto& e : schedule_) out.push_back(e.t);
    return out;
}

std::vector<Window> SwitchingSignal::windows(const std::vector<WeightedDigraph>& gs) const {
    require_graphs(*this, gs);
    auto segs = segments();
    std::vector<Window> out;

    auto close = [&](Window w) {
        std::vector<int> ids;
        for (const auto& p : w.pieces) ids.push_back(p.graph);
        w.connected = has_directed_spanning_tree(union_graph(pick(gs, ids)));
        out.push_back(std::move(w));
    };

    if (!marks_.empty()) {
        std::vector<double> bounds = marks_;
        bounds.push_back(horizon_);
        for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
            Window w{bounds[k], bounds[k + 1], {}, true};
            for (const auto& s : segs)
                if (s.t0 >= w.start - kTimeEps && s.t1 <= w.end + kTimeEps) w.pieces.push_back(s);
            close(std::move(w));
        }
        return out;
    }

    Window cur{0.0, 0.0, {}, false};
    std::vector<int> ids;
    for (const auto& s : segs) {
        cur.pieces.push_back(s);
        cur.end = s.t1;
        ids.push_back(s.graph);
        if (has_directed_spanning_tree(union_graph(pick(gs, ids)))) {
            close(cur);
            cur = Window{s.t1, s.t1, {}, false};
            ids.clear();
        }
    }
    if (!cur.pieces.empty()) close(std::move(cur));
    return out;
}

bool check_joint_connectivity(const SwitchingSignal& sig, const std::vector<WeightedDigraph>& gs, double T) {
    if (!(T > 0.0)) throw ParameterError("joint-connectivity window length must be positive");
    require_graphs(sig, gs);
    const double horizon = sig.horizon();
    auto segs = sig.segments();

    std::set<double> starts;
    for (double s : sig.switch_times())
        if (s + T <= horizon + kTimeEps) starts.insert(s);
    const double step = sig.t_min() / 4.0;
    for (long k = 0;; ++k) {
        double s = static_cast<double>(k) * step;
        if (s + T > horizon + kTimeEps) break;
        starts.insert(s);
    }

    auto window_ok = [&](double a, double b) {
        std::vector<int> ids;
        for (const auto& seg : segs)
            if (seg.t0 < b - kTimeEps && seg.t1 > a + kTimeEps) ids.push_back(seg.graph);
        return has_directed_spanning_tree(union_graph(pick(gs, ids)));
    };

    if (starts.empty()) return window_ok(0.0, horizon);
    return std::all_of(starts.begin(), starts.end(), [&](double s) { return window_ok(s, s + T); });
}

}  // namespace syncnet
