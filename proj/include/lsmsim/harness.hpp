#pragma once

#include "lsmsim/config.hpp"
#include "lsmsim/kernel.hpp"

#include <string>
#include <vector>

namespace lsmsim {

struct PhaseReport {
    std::string phase; // "testing" or "running"
    double measured_W = 0;  // entries/s, testing phase
    double target_rate = 0; // entries/s, running phase
    double rho = 0;
    double stall_fraction = 0;
    std::vector<std::string> warnings;
    Trace trace;
};

/// Closed-system run measuring the maximum write throughput W over
/// [warmup, test_duration]. Warns when the greedy scheduler is requested
/// (it overstates W by deferring large merges).
PhaseReport testing_phase(const ExperimentConfig& cfg);

/// Open run at target rate rho * W for run_duration, continuing from the
/// testing phase's final tree when `from` is given. Flags a growing final
/// queue as a warning (sustained overload).
PhaseReport running_phase(const ExperimentConfig& cfg, double W, double rho,
                          const PhaseReport* from = nullptr);

/// testing_phase followed by running_phase at cfg.harness.rho.
std::pair<PhaseReport, PhaseReport> two_phase(const ExperimentConfig& cfg);

/// running_phase per utilization; p99 write latency is nondecreasing in rho.
std::vector<PhaseReport> utilization_sweep(const ExperimentConfig& cfg, double W,
                                           const std::vector<double>& rhos,
                                           const PhaseReport* from = nullptr);

const std::vector<std::string>& preset_names();
ExperimentConfig preset(const std::string& name);

} // namespace lsmsim
