#include "lsmsim/scheduler.hpp"

#include <algorithm>

namespace lsmsim {

void SchedulerConfig::validate() const {
    if (max_total < 0) throw std::invalid_argument("scheduler.max_total must be >= 0");
    if (max_per_level < 0) throw std::invalid_argument("scheduler.max_per_level must be >= 0");
    if (write_interaction == WriteInteraction::RateLimit && rate_limit <= 0)
        throw std::invalid_argument("scheduler.rate_limit must be > 0");
}

double Allocation::total() const {
    double s = flush_rate;
    for (const auto& [id, r] : merge_rates) s += r;
    return s;
}

const MergeTask* greedy_reschedule(std::span<const MergeTask> tasks) {
    const MergeTask* best = nullptr;
    for (const auto& t : tasks)
        if (!best || t.remaining < best->remaining ||
            (t.remaining == best->remaining && t.id < best->id))
            best = &t;
    return best;
}

Allocation allocate(const SchedulerConfig& cfg, std::span<const MergeTask> tasks,
                    bool flush_active, double B) {
    if (B <= 0) throw std::invalid_argument("allocate: B must be > 0");
    Allocation a;
    double budget = B;
    if (flush_active) {
        a.flush_rate = cfg.flush_priority ? B : B / static_cast<double>(tasks.size() + 1);
        budget = B - a.flush_rate;
    }
    if (tasks.empty() || budget <= 0) return a;

    switch (cfg.kind) {
        case SchedulerKind::Fair:
            for (const auto& t : tasks) a.merge_rates[t.id] = budget / static_cast<double>(tasks.size());
            break;
        case SchedulerKind::Greedy:
            a.merge_rates[greedy_reschedule(tasks)->id] = budget;
            break;
        case SchedulerKind::SingleThreaded: {
            const MergeTask* first = nullptr;
            for (const auto& t : tasks)
                if (!first || t.created_at < first->created_at ||
                    (t.created_at == first->created_at && t.id < first->id))
                    first = &t;
            a.merge_rates[first->id] = budget;
            break;
        }
        case SchedulerKind::Blsm: {
            double total_rem = 0;
            for (const auto& t : tasks) total_rem += t.remaining;
            if (total_rem <= 0) break;
            for (const auto& t : tasks) a.merge_rates[t.id] = budget * t.remaining / total_rem;
            break;
        }
    }
    return a;
}

double effective_max_total(const SchedulerConfig& cfg, const PolicyConfig& policy, int L) {
    if (cfg.max_total > 0) return cfg.max_total;
    switch (policy.family) {
        case PolicyFamily::Leveling: return 2.0 * L;
        case PolicyFamily::Tiering: return 2.0 * policy.size_ratio * L;
        case PolicyFamily::SizeTiered: return 50;
        case PolicyFamily::PartitionedLeveling: return 12; // L0 stop threshold
    }
    return 0;
}

double effective_max_per_level(const SchedulerConfig& cfg, const PolicyConfig& policy) {
    if (cfg.max_per_level > 0) return cfg.max_per_level;
    if (policy.family == PolicyFamily::Tiering) return 2.0 * policy.size_ratio;
    return 2.0;
}

StallCheck admit_writes(const SchedulerConfig& cfg, const PolicyConfig& policy,
                        const SimParams& sim, const TreeState& tree, int L) {
    bool constrained = false;
    switch (policy.family) {
        case PolicyFamily::PartitionedLeveling:
            constrained = static_cast<double>(tree.levels.at(0).size()) >=
                          effective_max_total(cfg, policy, L);
            break;
        case PolicyFamily::SizeTiered:
            constrained = tree.total_disk_components() > effective_max_total(cfg, policy, L);
            break;
        default:
            if (cfg.constraint == ConstraintKind::Global) {
                constrained = tree.total_disk_components() > effective_max_total(cfg, policy, L);
            } else {
                double cap = effective_max_per_level(cfg, policy);
                for (const auto& lvl : tree.levels)
                    if (static_cast<double>(lvl.size()) > cap) { constrained = true; break; }
            }
            break;
    }
    if (constrained) return {true, "component_constraint"};
    if (static_cast<int>(tree.sealed_mem.size()) >= sim.mem_component_count)
        return {true, "memory_full"};
    return {false, {}};
}

double blsm_write_cap(const TreeState& tree, const Allocation& /*alloc*/, const SimParams& sim,
                      const PolicyConfig& policy, double B) {
    if (policy.family != PolicyFamily::Leveling || tree.levels.size() > 3)
        throw std::invalid_argument("blsm scheduler requires a two-disk-level leveling tree");
    if (tree.in_flight.empty()) return B;

    auto caps = leveling_caps(policy, sim, static_cast<int>(tree.levels.size()) - 1);
    double total_rem = 0;
    for (const auto& t : tree.in_flight) total_rem += t.remaining;

    double cap = B;
    for (const auto& t : tree.in_flight) {
        int src_level = t.output_level - 1;
        double capacity = src_level == 0 ? sim.mem_component_size
                                         : caps.at(static_cast<std::size_t>(src_level));
        // Fill fraction of the component re-forming at the merge's source level.
        double fill = 0;
        if (src_level == 0) {
            fill = tree.active_fill;
            for (const auto& m : tree.sealed_mem) fill += m.logical;
            for (const auto& c : tree.levels[0])
                if (!c.merging) fill += c.logical;
        } else {
            for (const auto& c : tree.levels.at(static_cast<std::size_t>(src_level)))
                if (!c.merging) fill += c.logical;
        }
        double in_frac = std::min(1.0, fill / capacity);
        double out_frac = t.input_total > 0 ? 1.0 - t.remaining / t.input_total : 1.0;
        double rate = total_rem > 0 ? B * t.remaining / total_rem : 0.0;
        // Feedforward gear ratio, corrected toward equal progress fractions.
        double level_cap = rate * capacity / std::max(t.input_total, 1e-9) *
                           std::max(0.0, 1.0 - (in_frac - out_frac));
        cap = std::min(cap, level_cap);
    }
    return std::max(0.0, cap);
}

std::string to_string(SchedulerKind k) {
    switch (k) {
        case SchedulerKind::SingleThreaded: return "single_threaded";
        case SchedulerKind::Fair: return "fair";
        case SchedulerKind::Greedy: return "greedy";
        case SchedulerKind::Blsm: return "blsm";
    }
    return "?";
}

std::string to_string(ConstraintKind k) {
    return k == ConstraintKind::Global ? "global" : "local";
}

std::string to_string(WriteInteraction w) {
    return w == WriteInteraction::AsFastAsPossible ? "as_fast_as_possible" : "rate_limit";
}

} // namespace lsmsim
