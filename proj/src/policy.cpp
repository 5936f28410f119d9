#include "lsmsim/policy.hpp"

#include <algorithm>
#include <cmath>

namespace lsmsim {

void PolicyConfig::validate() const {
    if (family == PolicyFamily::Leveling || family == PolicyFamily::Tiering) {
        if (size_ratio < 2) throw std::invalid_argument("policy.size_ratio must be >= 2");
    }
    if (levels < 0) throw std::invalid_argument("policy.levels must be >= 0");
    if (family == PolicyFamily::SizeTiered) {
        if (st_ratio <= 0) throw std::invalid_argument("policy.st_ratio must be > 0");
        if (st_min_merge < 2) throw std::invalid_argument("policy.st_min_merge must be >= 2");
        if (st_max_merge < st_min_merge)
            throw std::invalid_argument("policy.st_max_merge must be >= st_min_merge");
    }
    if (family == PolicyFamily::PartitionedLeveling) {
        if (part_file_max_bytes <= 0) throw std::invalid_argument("policy.part_file_max must be > 0");
        if (part_level1_base_bytes <= 0)
            throw std::invalid_argument("policy.part_level1_base must be > 0");
        if (part_l0_min_merge < 2) throw std::invalid_argument("policy.part_l0_min_merge must be >= 2");
    }
}

int derive_levels(double dataset_size, double M, double T, PolicyFamily family) {
    if (dataset_size <= 0 || M <= 0 || T <= 1) throw std::invalid_argument("derive_levels: bad inputs");
    // Deepest component holds M*T^L entries under leveling and M*T^(L-1)
    // under tiering, whose numbering includes the flush tier.
    int L = 1;
    double cap = M * T;
    while (cap < dataset_size && L < 64) {
        cap *= T;
        ++L;
    }
    if (family == PolicyFamily::Tiering && dataset_size > M * T) ++L;
    return L;
}

std::vector<double> leveling_caps(const PolicyConfig& policy, const SimParams& sim, int L) {
    std::vector<double> caps(static_cast<std::size_t>(L) + 1);
    caps[0] = sim.mem_component_size;
    if (policy.dynamic_level_size) {
        // Keep ratios of deeper levels at T and pin the last level's
        // capacity to the dataset size by adjusting the L0->L1 ratio.
        double cap = sim.dataset_size;
        for (int i = L; i >= 1; --i) {
            caps[static_cast<std::size_t>(i)] = cap;
            cap /= policy.size_ratio;
        }
    } else {
        double base = (policy.size_ratio - 1) * sim.mem_component_size;
        for (int i = 1; i <= L; ++i) {
            caps[static_cast<std::size_t>(i)] = base;
            base *= policy.size_ratio;
        }
    }
    return caps;
}

int partitioned_level_count(const PolicyConfig& policy, const SimParams& sim) {
    double dataset_bytes = sim.dataset_size * sim.entry_size;
    int n = 1;
    double cap = policy.part_level1_base_bytes;
    while (cap < dataset_bytes && n < 64) {
        cap *= policy.size_ratio;
        ++n;
    }
    return n;
}

double partitioned_target_bytes(const PolicyConfig& policy, int level) {
    return policy.part_level1_base_bytes * std::pow(policy.size_ratio, level - 1);
}

std::vector<MergeTask> next_merges(const PolicyConfig& policy, const SimParams& sim,
                                   const TreeState& tree) {
    std::vector<MergeTask> out;
    const auto L = static_cast<int>(tree.levels.size()) - 1; // deepest existing level

    if (policy.family == PolicyFamily::Leveling) {
        auto caps = leveling_caps(policy, sim, std::max(L, policy.levels));
        std::vector<std::uint64_t> claimed;
        std::vector<int> claimed_outputs;
        auto is_claimed = [&](std::uint64_t id) {
            return std::find(claimed.begin(), claimed.end(), id) != claimed.end();
        };
        // At most one merge may feed a level at a time; otherwise parallel
        // L0 merges would each spawn their own level-1 component.
        auto output_busy = [&](int level) {
            for (const auto& task : tree.in_flight)
                if (task.output_level == level) return true;
            return std::find(claimed_outputs.begin(), claimed_outputs.end(), level) !=
                   claimed_outputs.end();
        };
        // Deepest first, so an over-cap component is claimed for its own
        // downward merge before a shallower merge grabs it as a destination.
        for (int i = L - 1; i >= 0; --i) {
            if (output_busy(i + 1)) continue;
            const auto& lvl = tree.levels[static_cast<std::size_t>(i)];
            const DiskComponent* src = nullptr;
            if (i == 0) {
                for (const auto& c : lvl)
                    if (!c.merging && !is_claimed(c.id)) { src = &c; break; } // oldest flushed
            } else {
                for (const auto& c : lvl) {
                    if (c.merging || is_claimed(c.id)) continue;
                    if (c.logical >= caps[static_cast<std::size_t>(i)]) { src = &c; break; }
                }
            }
            if (!src) continue;
            const DiskComponent* dst = nullptr;
            for (const auto& c : tree.levels[static_cast<std::size_t>(i) + 1])
                if (!c.merging && !is_claimed(c.id)) { dst = &c; break; }

            MergeTask t;
            t.inputs.push_back(src->id);
            t.input_total = src->size;
            if (dst) {
                t.inputs.push_back(dst->id);
                t.input_total += dst->size;
            }
            t.remaining = t.input_total;
            t.output_level = i + 1;
            claimed.insert(claimed.end(), t.inputs.begin(), t.inputs.end());
            claimed_outputs.push_back(t.output_level);
            out.push_back(std::move(t));
        }
    } else if (policy.family == PolicyFamily::Tiering) {
        const int T = static_cast<int>(policy.size_ratio);
        // At most one active merge per level.
        auto level_busy = [&](int output_level) {
            for (const auto& task : tree.in_flight)
                if (task.output_level == output_level) return true;
            for (const auto& task : out)
                if (task.output_level == output_level) return true;
            return false;
        };
        for (int i = 0; i <= L; ++i) {
            if (level_busy(i + 1)) continue;
            const auto& lvl = tree.levels[static_cast<std::size_t>(i)];
            std::vector<const DiskComponent*> idle;
            for (const auto& c : lvl)
                if (!c.merging) idle.push_back(&c);
            if (static_cast<int>(idle.size()) < T) continue;
            MergeTask t;
            for (int k = 0; k < T; ++k) { // oldest T
                t.inputs.push_back(idle[static_cast<std::size_t>(k)]->id);
                t.input_total += idle[static_cast<std::size_t>(k)]->size;
            }
            t.remaining = t.input_total;
            t.output_level = i + 1;
            out.push_back(std::move(t));
        }
    } else {
        throw std::invalid_argument("next_merges: policy family has a dedicated trigger");
    }
    return out;
}

std::vector<MergeTask> size_tiered_next(const PolicyConfig& policy, const TreeState& tree) {
    const auto& seq = tree.levels.at(0); // oldest -> youngest
    std::vector<MergeTask> out;
    // Each execution examines the longest prefix with no merging component,
    // so components younger than an active merge accumulate until it
    // completes. Scheduling a merge shortens the prefix for the next pass,
    // which can only add merges older than the ones already emitted.
    std::size_t prefix_end = 0;
    while (prefix_end < seq.size() && !seq[prefix_end].merging) ++prefix_end;
    while (true) {
        std::size_t picked = prefix_end;
        for (std::size_t j = 0; j + 1 < prefix_end; ++j) {
            std::size_t win_end =
                std::min(prefix_end, j + static_cast<std::size_t>(policy.st_max_merge));
            double younger_sum = 0;
            for (std::size_t k = j + 1; k < win_end; ++k) younger_sum += seq[k].size;
            bool triggered = win_end - j >= static_cast<std::size_t>(policy.st_min_merge) &&
                             seq[j].size <= policy.st_ratio * younger_sum;
            if (!triggered) continue;
            if (policy.testing_mode)
                win_end = j + static_cast<std::size_t>(policy.st_min_merge);
            MergeTask t;
            for (std::size_t k = j; k < win_end; ++k) {
                t.inputs.push_back(seq[k].id);
                t.input_total += seq[k].size;
            }
            t.remaining = t.input_total;
            t.output_level = 0;
            out.push_back(std::move(t));
            picked = j;
            break;
        }
        if (picked == prefix_end) break;
        prefix_end = picked;
    }
    return out;
}

std::optional<MergeTask> leveldb_pick(const PolicyConfig& policy, const SimParams& sim,
                                      const TreeState& tree) {
    const auto n_levels = static_cast<int>(tree.levels.size());

    int best_level = -1;
    double best_score = 0;
    {
        int idle0 = 0;
        for (const auto& c : tree.levels[0])
            if (!c.merging) ++idle0;
        double s0 = static_cast<double>(idle0) / policy.part_l0_min_merge;
        if (s0 >= 1) { best_level = 0; best_score = s0; }
    }
    for (int i = 1; i < n_levels; ++i) {
        double bytes = 0;
        for (const auto& c : tree.levels[static_cast<std::size_t>(i)]) bytes += c.size * sim.entry_size;
        double s = bytes / partitioned_target_bytes(policy, i);
        if (s >= 1 && s > best_score) { best_score = s; best_level = i; } // ties -> lower level
    }
    if (best_level < 0) return std::nullopt;

    MergeTask t;
    if (best_level == 0) {
        std::vector<const DiskComponent*> idle;
        for (const auto& c : tree.levels[0])
            if (!c.merging) idle.push_back(&c);
        std::size_t take = idle.size(); // merge as many flushed components as possible
        if (policy.testing_mode)
            take = std::min(take, static_cast<std::size_t>(policy.part_l0_min_merge));
        for (std::size_t k = 0; k < take; ++k) { // oldest first
            t.inputs.push_back(idle[k]->id);
            t.input_total += idle[k]->size;
        }
        t.output_level = 1;
        t.output_interval = {0, 1};
        if (n_levels > 1) {
            for (const auto& f : tree.levels[1]) {
                if (f.merging) continue;
                t.inputs.push_back(f.id);
                t.input_total += f.size;
            }
        }
    } else {
        const auto& lvl = tree.levels[static_cast<std::size_t>(best_level)];
        std::span<const DiskComponent> next_lvl;
        if (best_level + 1 < n_levels) next_lvl = tree.levels[static_cast<std::size_t>(best_level) + 1];

        const DiskComponent* picked = nullptr;
        if (policy.part_selection == FileSelection::RoundRobin) {
            double cursor = best_level < static_cast<int>(tree.round_robin_cursors.size())
                                ? tree.round_robin_cursors[static_cast<std::size_t>(best_level)]
                                : 0.0;
            for (const auto& f : lvl)
                if (!f.merging && f.interval.lo >= cursor) { picked = &f; break; }
            if (!picked) // wrap
                for (const auto& f : lvl)
                    if (!f.merging) { picked = &f; break; }
        } else {
            std::size_t best_overlaps = 0;
            for (const auto& f : lvl) {
                if (f.merging) continue;
                auto [a, b] = overlapping_range(f.interval, next_lvl);
                std::size_t n = b - a;
                if (!picked || n < best_overlaps ||
                    (n == best_overlaps && f.interval.lo < picked->interval.lo)) {
                    picked = &f;
                    best_overlaps = n;
                }
            }
        }
        if (!picked) return std::nullopt;

        t.inputs.push_back(picked->id);
        t.input_total = picked->size;
        t.output_interval = picked->interval;
        auto [a, b] = overlapping_range(picked->interval, next_lvl);
        for (std::size_t k = a; k < b; ++k) {
            t.inputs.push_back(next_lvl[k].id);
            t.input_total += next_lvl[k].size;
            t.output_interval.lo = std::min(t.output_interval.lo, next_lvl[k].interval.lo);
            t.output_interval.hi = std::max(t.output_interval.hi, next_lvl[k].interval.hi);
        }
        t.output_level = best_level + 1;
    }
    t.remaining = t.input_total;
    return t;
}

void advance_round_robin(TreeState& tree, int level, const Interval& picked) {
    if (static_cast<std::size_t>(level) >= tree.round_robin_cursors.size())
        tree.round_robin_cursors.resize(static_cast<std::size_t>(level) + 1, 0.0);
    tree.round_robin_cursors[static_cast<std::size_t>(level)] = picked.hi >= 1.0 ? 0.0 : picked.hi;
}

std::string to_string(PolicyFamily f) {
    switch (f) {
        case PolicyFamily::Leveling: return "leveling";
        case PolicyFamily::Tiering: return "tiering";
        case PolicyFamily::SizeTiered: return "size_tiered";
        case PolicyFamily::PartitionedLeveling: return "partitioned_leveling";
    }
    return "?";
}

std::string to_string(FileSelection s) {
    return s == FileSelection::RoundRobin ? "round_robin" : "choose_best";
}

} // namespace lsmsim
