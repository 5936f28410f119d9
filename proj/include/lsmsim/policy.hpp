#pragma once

#include "lsmsim/model.hpp"

#include <optional>
#include <string>

namespace lsmsim {

enum class PolicyFamily { Leveling, Tiering, SizeTiered, PartitionedLeveling };
enum class FileSelection { RoundRobin, ChooseBest };

struct PolicyConfig {
    PolicyFamily family = PolicyFamily::Tiering;
    double size_ratio = 3; // T
    int levels = 0;        // L; 0 = derive from dataset size
    bool dynamic_level_size = false;
    bool testing_mode = false;

    // size-tiered
    double st_ratio = 1.2;
    int st_min_merge = 2;
    int st_max_merge = 10;

    // partitioned leveling
    double part_level1_base_bytes = 1280e6;
    double part_file_max_bytes = 64e6;
    int part_l0_min_merge = 4; // T0
    FileSelection part_selection = FileSelection::RoundRobin;

    void validate() const;
};

/// Smallest level count whose deepest component can hold the dataset.
/// Tiering counts the flush tier as a level once the tree is deeper than
/// one level, matching the usual 0-based tier numbering.
int derive_levels(double dataset_size, double M, double T, PolicyFamily family);

/// Per-level logical-size merge trigger for leveling: cap_i for disk level
/// i in [1, L]. Level 0 (flushed components) triggers at M.
std::vector<double> leveling_caps(const PolicyConfig& policy, const SimParams& sim, int L);

/// Number of partitioned levels (>= 1) sized so the deepest fits the dataset.
int partitioned_level_count(const PolicyConfig& policy, const SimParams& sim);

/// Byte-size target of partitioned level i >= 1: level1_base * T^(i-1).
double partitioned_target_bytes(const PolicyConfig& policy, int level);

/// Leveling/tiering merge trigger. Returns eligible merges deepest output
/// first; never touches components already merging.
std::vector<MergeTask> next_merges(const PolicyConfig& policy, const SimParams& sim,
                                   const TreeState& tree);

/// Size-tiered trigger over the age-ordered sequence in levels[0].
std::vector<MergeTask> size_tiered_next(const PolicyConfig& policy, const TreeState& tree);

/// LevelDB-style score-based pick; at most one merge (single-threaded).
std::optional<MergeTask> leveldb_pick(const PolicyConfig& policy, const SimParams& sim,
                                      const TreeState& tree);

/// Advances the round-robin cursor of `level` past `picked` (call on pick).
void advance_round_robin(TreeState& tree, int level, const Interval& picked);

std::string to_string(PolicyFamily f);
std::string to_string(FileSelection s);

} // namespace lsmsim
