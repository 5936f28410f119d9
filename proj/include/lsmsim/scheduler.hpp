#pragma once

#include "lsmsim/model.hpp"
#include "lsmsim/policy.hpp"

#include <map>
#include <string>

namespace lsmsim {

enum class SchedulerKind { SingleThreaded, Fair, Greedy, Blsm };
enum class ConstraintKind { Global, Local };
enum class WriteInteraction { AsFastAsPossible, RateLimit };

struct SchedulerConfig {
    SchedulerKind kind = SchedulerKind::Fair;
    ConstraintKind constraint = ConstraintKind::Global;
    double max_total = 0;     // 0 = policy default (2L, 2TL, 50, or 12 at L0)
    double max_per_level = 0; // 0 = policy default (2 or 2T)
    WriteInteraction write_interaction = WriteInteraction::AsFastAsPossible;
    double rate_limit = 4000; // entries/s, used when write_interaction == RateLimit
    bool flush_priority = true;

    void validate() const;
};

/// Instantaneous bandwidth split. Rates sum to at most B; if any merge is
/// live and flushes leave headroom, the remainder is fully assigned.
struct Allocation {
    std::map<std::uint64_t, double> merge_rates; // task id -> entries/s
    double flush_rate = 0;

    double total() const;
};

/// Splits bandwidth B between the (at most one) active flush and the live
/// merges according to the scheduler kind. Blsm allocation is proportional
/// to remaining work; use blsm_write_cap for the admission throttle.
Allocation allocate(const SchedulerConfig& cfg, std::span<const MergeTask> tasks,
                    bool flush_active, double B);

/// The task greedy would run: minimum remaining, ties to the lowest id.
/// Returns nullptr when no task is live.
const MergeTask* greedy_reschedule(std::span<const MergeTask> tasks);

struct StallCheck {
    bool stalled = false;
    std::string cause; // "component_constraint" or "memory_full"
};

/// Effective component limits for a policy (config overrides win).
double effective_max_total(const SchedulerConfig& cfg, const PolicyConfig& policy, int L);
double effective_max_per_level(const SchedulerConfig& cfg, const PolicyConfig& policy);

/// Write-admission gate: component constraint plus the memory-full check.
StallCheck admit_writes(const SchedulerConfig& cfg, const PolicyConfig& policy,
                        const SimParams& sim, const TreeState& tree, int L);

/// Spring-and-gear write cap for the bLSM shape: couples the admission rate
/// to the progress of the merge feeding the last level. Recomputed at event
/// boundaries; >= 0 always; B when no merge backlog exists.
double blsm_write_cap(const TreeState& tree, const Allocation& alloc, const SimParams& sim,
                      const PolicyConfig& policy, double B);

std::string to_string(SchedulerKind k);
std::string to_string(ConstraintKind k);
std::string to_string(WriteInteraction w);

} // namespace lsmsim
