#pragma once

#include "lsmsim/harness.hpp"
#include "lsmsim/kernel.hpp"

#include <string>

namespace lsmsim {

/// Trace JSON: {config_echo, events[], windows[], components[], stalls[],
/// latency{p50,p99,p999,max,processing_p50,...,processing_max}}.
std::string trace_to_json(const Trace& trace, const std::string& config_echo);

std::string phase_report_to_json(const PhaseReport& report, const std::string& config_echo);

// CSV series, column headers exactly as written.
std::string windows_csv(const Trace& trace);     // time_s,throughput_per_s
std::string components_csv(const Trace& trace);  // time_s,component_count
std::string stalls_csv(const Trace& trace);      // start_s,end_s,cause

void write_file(const std::string& path, const std::string& contents);

} // namespace lsmsim
