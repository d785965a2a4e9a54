#pragma once

#include "syncnet/graph.hpp"

#include <vector>

namespace syncnet {

/// Graph `graph` (0-based) becomes active at time `t`.
struct ScheduleEntry {
    double t = 0.0;
    int graph = 0;
};

/// Maximal interval [t0, t1) on which one graph is active.
struct Segment {
    double t0 = 0.0;
    double t1 = 0.0;
    int graph = 0;
};

/// Joint-connectivity window [start, end) and its constant-topology pieces.
struct Window {
    double start = 0.0;
    double end = 0.0;
    std::vector<Segment> pieces;
    bool connected = true;  ///< union over the window has a directed spanning tree
};

/// Right-continuous piecewise-constant switching signal on [0, horizon].
class SwitchingSignal {
public:
    SwitchingSignal() = default;
    /// `marks` are optional window boundaries t_k; they must be switch times and start at 0.
    SwitchingSignal(std::vector<ScheduleEntry> schedule, double horizon, double t_min, double t_max,
                    std::vector<double> marks = {});

    /// Cycles through `graph_ids` with constant dwell; t_max defaults to one full cycle.
    static SwitchingSignal periodic(const std::vector<int>& graph_ids, double dwell, double horizon);

    const std::vector<ScheduleEntry>& schedule() const { return schedule_; }
    const std::vector<double>& marks() const { return marks_; }
    double horizon() const { return horizon_; }
    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    int max_graph_index() const;

    /// σ(t); times past the horizon keep the last active graph.
    int graph_at(double t) const;

    std::vector<Segment> segments() const;
    std::vector<double> switch_times() const;

    /// Windows from the explicit marks, or else a greedy partition closing a window as soon as
    /// the union of its graphs has a directed spanning tree. A trailing remainder whose union
    /// never becomes connected is returned as a last, unconnected window.
    std::vector<Window> windows(const std::vector<WeightedDigraph>& gs) const;

private:
    std::vector<ScheduleEntry> schedule_;
    double horizon_ = 0.0;
    double t_min_ = 0.0;
    double t_max_ = 0.0;
    std::vector<double> marks_;
};

/// True iff every length-T window, aligned at switch times and on a T_min/4 grid, has a
/// union containing a directed spanning tree.
bool check_joint_connectivity(const SwitchingSignal& sig, const std::vector<WeightedDigraph>& gs, double T);

}  // namespace syncnet
