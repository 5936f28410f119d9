#pragma once

#include "lsmsim/latency.hpp"
#include "lsmsim/model.hpp"
#include "lsmsim/policy.hpp"
#include "lsmsim/scheduler.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lsmsim {

enum class ArrivalKind { Closed, OpenConstant, OpenBursty };

struct ArrivalProcess {
    ArrivalKind kind = ArrivalKind::Closed;
    int clients = 1;           // closed-system client count (echoed only)
    double rate = 0;           // entries/s for open_constant
    double base_rate = 2000;   // bursty
    double base_duration = 1500;
    double burst_rate = 8000;
    double burst_duration = 300;
    double duration = 7200;    // seconds of simulated time

    void validate() const;
    /// Instantaneous open arrival rate at time t (0 for closed).
    double rate_at(double t) const;
    /// Next time > t at which the rate changes, capped at duration.
    double next_boundary(double t) const;
    /// Piecewise-constant rate segments (start, end, rate) over [0, duration).
    std::vector<std::tuple<double, double, double>> segments() const;
};

enum class EventKind { MergeDone, FlushDone, MemFull, StallRelease, Boundary };

struct SimEvent {
    double time = 0;
    EventKind kind = EventKind::Boundary;
    std::uint64_t id = 0; // task id for merges, interval index for stalls
};

struct StallInterval {
    double start = 0;
    double end = 0;
    std::string cause; // "component_constraint" or "memory_full"
};

struct RunOptions {
    double window = 30;      // throughput window, seconds
    std::uint64_t seed = 0;  // echoed; the kernel itself is deterministic
    double warmup = 0;       // excluded from the throughput summary
    std::optional<TreeState> initial_tree;
    std::uint64_t next_component_id = 1;
    std::uint64_t next_task_id = 1;
    double stop_after_admitted = 0; // > 0: end the run once this many entries are admitted
    bool no_admission = false;      // drain mode: finish pending flushes/merges, admit nothing
};

struct Trace {
    double duration = 0;
    double window = 0;
    double warmup = 0;
    std::uint64_t seed = 0;

    std::vector<SimEvent> events;
    std::vector<StallInterval> stalls;
    std::vector<std::pair<double, int>> components; // (time, disk component count)
    Curve arrival_curve;
    Curve admission_curve;
    LatencyDistribution write_latency;
    LatencyDistribution processing_latency;

    double admitted_total = 0;
    double queue_backlog = 0;      // open-arrival queue left at the end
    bool queue_growing = false;    // backlog still rising when time ran out

    TreeState final_tree;          // for phase chaining
    std::uint64_t next_component_id = 1;
    std::uint64_t next_task_id = 1;

    /// Mean admitted throughput over [warmup, duration].
    double mean_throughput() const;
    double stall_fraction() const;
    double stall_fraction(double from) const;
};

/// Per-window admitted-write throughput (entries/s); the last partial
/// window is dropped.
std::vector<std::pair<double, double>> measure_windows(const Trace& trace, double window);

Trace run_sim(const SimParams& sim, const PolicyConfig& policy, const SchedulerConfig& sched,
              const ArrivalProcess& arrivals, const RunOptions& opts);

/// Preloaded tree: `dataset_size` entries inserted through a closed-system
/// run from an empty tree, so every level holds its steady-state share.
/// Pending flushes and merges are handed over as-is (mid-stream snapshot).
TreeState make_initial_tree(const SimParams& sim, const PolicyConfig& policy,
                            std::uint64_t& next_component_id);

/// Runs the tree with admission halted until all pending flushes and merges
/// (and the cascades they trigger) complete.
TreeState quiesce_tree(const SimParams& sim, const PolicyConfig& policy, TreeState tree,
                       std::uint64_t& next_component_id, std::uint64_t& next_task_id);

/// Queueing model used by the kernel, exposed standalone: given piecewise
/// constant arrivals, stall windows, and the entry capacity admitted at each
/// stall's end, reconstruct the latency of every write in arrival order.
LatencyProfile queue_account(const std::vector<std::tuple<double, double, double>>& arrival_segments,
                             const std::vector<StallInterval>& stalls,
                             const std::vector<double>& release_capacities);

std::string to_string(ArrivalKind k);
std::string to_string(EventKind k);

} // namespace lsmsim
