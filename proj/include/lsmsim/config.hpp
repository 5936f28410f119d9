#pragma once

#include "lsmsim/kernel.hpp"
#include "lsmsim/model.hpp"
#include "lsmsim/policy.hpp"
#include "lsmsim/scheduler.hpp"

#include <cstdint>
#include <string>

namespace lsmsim {

struct HarnessParams {
    double test_duration = 7200;
    double warmup = 1200;
    double run_duration = 7200;
    double rho = 0.95;
    double window = 30;

    void validate() const;
};

struct ExperimentConfig {
    SimParams sim;
    PolicyConfig policy;
    SchedulerConfig scheduler;
    ArrivalProcess arrivals;
    HarnessParams harness;
    std::uint64_t seed = 0;
    std::string output_dir = "out";

    /// Nested invariants plus the cross-field rules (zipf keys exclude the
    /// partitioned policy; blsm requires a two-disk-level leveling shape,
    /// partitioned leveling requires the single-threaded scheduler).
    void validate() const;
    /// Applies one `section.key = value` override and re-validates nothing;
    /// call validate() after a batch. Unknown keys throw.
    void set(const std::string& key, const std::string& value);
};

/// Parses the flat `section.key = value` format (`#` comments, blank lines
/// allowed). Unknown keys and malformed lines are errors with line numbers.
ExperimentConfig parse_config(const std::string& text);

/// Canonical one-key-per-line dump; parse(dump(c)) == c byte-for-byte
/// after a second dump.
std::string dump_config(const ExperimentConfig& cfg);

} // namespace lsmsim
