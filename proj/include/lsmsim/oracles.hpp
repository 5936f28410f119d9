#pragma once

#include "lsmsim/kernel.hpp"
#include "lsmsim/model.hpp"

#include <cstdint>
#include <set>
#include <span>
#include <vector>

namespace lsmsim {

/// Completion times of a merge schedule, ascending. The component count at
/// time t is the initial count minus the completions at or before t.
struct ScheduleCurve {
    std::vector<double> completion_times;

    int completed_at(double t) const;
};

/// Greedy reference: shortest-remaining-first, which processes merges in
/// ascending size order back to back.
ScheduleCurve greedy_curve(std::span<const double> sizes, double B);

/// Enumerates schedules for a static merge set: every non-preemptive order
/// (switches exactly at completions), plus the per-index lower envelope of
/// all preemptive schedules whose switch points lie on a uniform grid.
/// Work inside a grid slot goes to a single merge; a completion mid-slot
/// idles the slot's remainder, so enumerated curves are never optimistic.
std::vector<ScheduleCurve> brute_force_curves(std::span<const double> sizes, double B,
                                              int grid_slots = 64);

struct McEstimate {
    double mean = 0;
    double half_width = 0; // 99% confidence
};

/// Monte-Carlo distinct-key count after n draws over keys 1..U.
McEstimate mc_distinct(std::uint64_t n, std::uint64_t U, KeyDistribution dist, double zipf_s,
                       std::uint64_t seed, std::uint64_t trials);

/// Monte-Carlo distinct count of a union of independent uniform subsets.
McEstimate mc_union_distinct(std::span<const std::uint64_t> subset_sizes, std::uint64_t K,
                             std::uint64_t seed, std::uint64_t trials);

/// Discrete reference for queue_account: write i (1-based) arrives when the
/// cumulative arrival count reaches i and is admitted FIFO at stall ends,
/// bounded by per-release capacities. Returns per-write latencies in
/// arrival order.
std::vector<double> per_write_reference(
    const std::vector<std::tuple<double, double, double>>& arrival_segments,
    const std::vector<StallInterval>& stalls, const std::vector<double>& release_capacities);

/// True when every write is admitted in `fast` no later than in `limited`:
/// the admission-curve inverse of `fast` is pointwise <= that of `limited`
/// (up to tol) over the common admitted mass.
bool write_dominance(const Curve& fast, const Curve& limited, double tol = 1e-9);

/// All (first, second) completion-time pairs achievable on the dependent
/// three-merge instance used by the scheduling counterexample: merges of
/// size `a` and `b` exist at t=0, and completing `a` spawns a merge of size
/// `c`. Switch points on a uniform grid of `grid_slots` slots plus
/// completions; exact on the lattice when sizes divide the slot work.
std::set<std::pair<double, double>> dependent_pair_schedules(double a, double b, double c,
                                                             double B, int grid_slots = 20);

} // namespace lsmsim
