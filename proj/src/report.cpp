#include "lsmsim/report.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace lsmsim {

namespace {

using nlohmann::json;

json latency_json(const Trace& t) {
    return json{{"p50", t.write_latency.p50()},
                {"p99", t.write_latency.p99()},
                {"p999", t.write_latency.p999()},
                {"max", t.write_latency.max()},
                {"processing_p50", t.processing_latency.p50()},
                {"processing_p99", t.processing_latency.p99()},
                {"processing_p999", t.processing_latency.p999()},
                {"processing_max", t.processing_latency.max()}};
}

json trace_json(const Trace& t, const std::string& config_echo) {
    json events = json::array();
    for (const auto& e : t.events)
        events.push_back({{"time", e.time}, {"kind", to_string(e.kind)}, {"id", e.id}});

    json windows = json::array();
    for (const auto& [start, rate] : measure_windows(t, t.window))
        windows.push_back({{"time_s", start}, {"throughput_per_s", rate}});

    json components = json::array();
    for (const auto& [time, count] : t.components)
        components.push_back({{"time_s", time}, {"component_count", count}});

    json stalls = json::array();
    for (const auto& s : t.stalls)
        stalls.push_back({{"start_s", s.start}, {"end_s", s.end}, {"cause", s.cause}});

    return json{{"config_echo", config_echo}, {"events", std::move(events)},
                {"windows", std::move(windows)}, {"components", std::move(components)},
                {"stalls", std::move(stalls)}, {"latency", latency_json(t)}};
}

} // namespace

std::string trace_to_json(const Trace& trace, const std::string& config_echo) {
    return trace_json(trace, config_echo).dump(2) + "\n";
}

std::string phase_report_to_json(const PhaseReport& report, const std::string& config_echo) {
    json j{{"phase", report.phase},
           {"measured_W", report.measured_W},
           {"target_rate", report.target_rate},
           {"rho", report.rho},
           {"stall_fraction", report.stall_fraction},
           {"warnings", report.warnings},
           {"trace", trace_json(report.trace, config_echo)}};
    return j.dump(2) + "\n";
}

std::string windows_csv(const Trace& trace) {
    std::ostringstream out;
    out << "time_s,throughput_per_s\n";
    for (const auto& [start, rate] : measure_windows(trace, trace.window))
        out << nlohmann::json(start).dump() << "," << nlohmann::json(rate).dump() << "\n";
    return out.str();
}

std::string components_csv(const Trace& trace) {
    std::ostringstream out;
    out << "time_s,component_count\n";
    for (const auto& [time, count] : trace.components)
        out << nlohmann::json(time).dump() << "," << count << "\n";
    return out.str();
}

std::string stalls_csv(const Trace& trace) {
    std::ostringstream out;
    out << "start_s,end_s,cause\n";
    for (const auto& s : trace.stalls)
        out << nlohmann::json(s.start).dump() << "," << nlohmann::json(s.end).dump() << ","
            << s.cause << "\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace lsmsim
