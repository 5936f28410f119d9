#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace lsmsim {

/// Half-open key interval inside the unit key space [0,1).
struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double width() const { return hi - lo; }
    bool intersects(const Interval& o) const { return lo < o.hi && o.lo < hi; }
    bool operator==(const Interval&) const = default;
};

enum class KeyDistribution { Uniform, Zipf };

/// Global simulation parameters (Table-style defaults: 128K-entry memory
/// components, 100K entries/s of flush+merge bandwidth, 100M-key space).
struct SimParams {
    double entry_size = 1000;           // bytes per entry
    double mem_component_size = 128000; // M, entries
    int mem_component_count = 2;
    double bandwidth = 100000;          // B, entries/s
    double keyspace = 1e8;              // U, distinct keys
    KeyDistribution key_distribution = KeyDistribution::Uniform;
    double zipf_s = 1.0;
    double dataset_size = 1e8;          // entries preloaded
    double periodic_force_bytes = 16e6; // accepted, modeled as a no-op

    void validate() const;
    double entries(double bytes) const { return bytes / entry_size; }
};

/// An immutable on-disk run. `logical` counts the raw writes it represents,
/// `size` the distinct entries actually stored (fluid, fractional allowed).
struct DiskComponent {
    std::uint64_t id = 0;
    int level = 0;
    double logical = 0; // n
    double size = 0;    // d
    Interval interval{};
    double created_at = 0;
    bool merging = false;
};

/// A scheduled merge. `remaining` is the unprocessed share of the total
/// input amount and drives both completion times and greedy selection.
struct MergeTask {
    std::uint64_t id = 0;
    std::vector<std::uint64_t> inputs;
    double input_total = 0;
    double remaining = 0;
    int output_level = 0;
    Interval output_interval{};
    double created_at = 0;
};

/// A sealed in-memory component awaiting flush.
struct MemComponent {
    double logical = 0;
    double size = 0;
};

/// Full LSM structure. `levels[i]` holds the components of level i, ordered
/// oldest to youngest (and by key for partitioned levels >= 1). For the
/// size-tiered policy the whole tree is the single age-ordered `levels[0]`.
struct TreeState {
    double active_fill = 0;
    std::vector<MemComponent> sealed_mem;
    std::vector<std::vector<DiskComponent>> levels;
    bool partitioned = false;
    std::vector<double> round_robin_cursors;
    std::vector<MergeTask> in_flight;

    int total_disk_components() const;
    const DiskComponent* find(std::uint64_t id) const;
    DiskComponent* find(std::uint64_t id);
    void set_merging(std::span<const std::uint64_t> ids, bool flag);
    /// Removes the listed components (must exist) and returns them.
    std::vector<DiskComponent> take(std::span<const std::uint64_t> ids);
};

/// Expected number of distinct keys after n uniform draws over K keys:
/// K * (1 - (1 - 1/K)^n).
double draws_distinct(double n, double K);

/// Expected distinct-key count of a union of independent subsets of sizes
/// d_i over K keys: K * (1 - prod(1 - d_i/K)).
double union_distinct(std::span<const double> inputs, double K);

/// Expected distinct keys after n Zipf(s) draws over keys 1..U.
/// Reduces to draws_distinct(n, U) at s = 0. O(U); results are cached.
double zipf_distinct(double n, double U, double s);

/// Files of a sorted, pairwise-disjoint level whose half-open intervals
/// intersect `query`, in key order (a contiguous run of the input).
std::vector<DiskComponent> overlapping_files(const Interval& query,
                                             std::span<const DiskComponent> level_files);

/// Index range [first, last) of the overlapping run; avoids copies.
std::pair<std::size_t, std::size_t> overlapping_range(const Interval& query,
                                                      std::span<const DiskComponent> level_files);

/// Size of a freshly flushed memory component under the configured key
/// distribution: in-memory updates to the same key coalesce.
double flushed_size(const SimParams& p);

} // namespace lsmsim
