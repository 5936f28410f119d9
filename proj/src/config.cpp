#include "lsmsim/config.hpp"

#include <json.hpp>

#include <charconv>
#include <functional>
#include <map>
#include <sstream>

namespace lsmsim {

namespace {

std::string fmt_double(double v) {
    // nlohmann's writer emits the shortest representation that round-trips.
    return nlohmann::json(v).dump();
}

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v) {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("not a number: '" + v + "'");
    return d;
}

int parse_int(const std::string& v) {
    double d = parse_double(v);
    auto i = static_cast<long long>(d);
    if (static_cast<double>(i) != d) throw std::invalid_argument("not an integer: '" + v + "'");
    return static_cast<int>(i);
}

std::uint64_t parse_u64(const std::string& v) {
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw std::invalid_argument("not an unsigned integer: '" + v + "'");
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw std::invalid_argument("not a bool: '" + v + "'");
}

KeyDistribution parse_distribution(const std::string& v) {
    if (v == "uniform") return KeyDistribution::Uniform;
    if (v == "zipf") return KeyDistribution::Zipf;
    throw std::invalid_argument("unknown key_distribution: '" + v + "'");
}

PolicyFamily parse_family(const std::string& v) {
    if (v == "leveling") return PolicyFamily::Leveling;
    if (v == "tiering") return PolicyFamily::Tiering;
    if (v == "size_tiered") return PolicyFamily::SizeTiered;
    if (v == "partitioned_leveling") return PolicyFamily::PartitionedLeveling;
    throw std::invalid_argument("unknown policy.family: '" + v + "'");
}

FileSelection parse_selection(const std::string& v) {
    if (v == "round_robin") return FileSelection::RoundRobin;
    if (v == "choose_best") return FileSelection::ChooseBest;
    throw std::invalid_argument("unknown policy.part_selection: '" + v + "'");
}

SchedulerKind parse_sched(const std::string& v) {
    if (v == "single_threaded") return SchedulerKind::SingleThreaded;
    if (v == "fair") return SchedulerKind::Fair;
    if (v == "greedy") return SchedulerKind::Greedy;
    if (v == "blsm") return SchedulerKind::Blsm;
    throw std::invalid_argument("unknown scheduler.kind: '" + v + "'");
}

ConstraintKind parse_constraint(const std::string& v) {
    if (v == "global") return ConstraintKind::Global;
    if (v == "local") return ConstraintKind::Local;
    throw std::invalid_argument("unknown scheduler.constraint: '" + v + "'");
}

WriteInteraction parse_interaction(const std::string& v) {
    if (v == "as_fast_as_possible") return WriteInteraction::AsFastAsPossible;
    if (v == "rate_limit") return WriteInteraction::RateLimit;
    throw std::invalid_argument("unknown scheduler.write_interaction: '" + v + "'");
}

ArrivalKind parse_arrival(const std::string& v) {
    if (v == "closed") return ArrivalKind::Closed;
    if (v == "open_constant") return ArrivalKind::OpenConstant;
    if (v == "open_bursty") return ArrivalKind::OpenBursty;
    throw std::invalid_argument("unknown arrivals.kind: '" + v + "'");
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

} // namespace

void HarnessParams::validate() const {
    if (test_duration <= 0) throw std::invalid_argument("harness.test_duration must be > 0");
    if (warmup < 0 || warmup >= test_duration)
        throw std::invalid_argument("harness.warmup must be in [0, test_duration)");
    if (run_duration <= 0) throw std::invalid_argument("harness.run_duration must be > 0");
    if (rho <= 0 || rho >= 1) throw std::invalid_argument("harness.rho must be in (0, 1)");
    if (window <= 0) throw std::invalid_argument("harness.window must be > 0");
}

void ExperimentConfig::validate() const {
    sim.validate();
    policy.validate();
    scheduler.validate();
    arrivals.validate();
    harness.validate();
    if (sim.key_distribution == KeyDistribution::Zipf &&
        policy.family == PolicyFamily::PartitionedLeveling)
        throw std::invalid_argument(
            "zipf key distribution is not supported with partitioned leveling");
    if (scheduler.kind == SchedulerKind::Blsm) {
        if (policy.family != PolicyFamily::Leveling)
            throw std::invalid_argument("blsm scheduler requires the leveling policy");
        int L = policy.levels > 0 ? policy.levels
                                  : derive_levels(sim.dataset_size, sim.mem_component_size,
                                                  policy.size_ratio, policy.family);
        if (L != 2)
            throw std::invalid_argument("blsm scheduler requires a two-disk-level tree");
    }
    if (policy.family == PolicyFamily::PartitionedLeveling &&
        scheduler.kind != SchedulerKind::SingleThreaded)
        throw std::invalid_argument(
            "partitioned leveling requires the single_threaded scheduler");
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "sim.entry_size") sim.entry_size = parse_double(v);
    else if (key == "sim.mem_component_size") sim.mem_component_size = parse_double(v);
    else if (key == "sim.mem_component_count") sim.mem_component_count = parse_int(v);
    else if (key == "sim.bandwidth") sim.bandwidth = parse_double(v);
    else if (key == "sim.keyspace") sim.keyspace = parse_double(v);
    else if (key == "sim.key_distribution") sim.key_distribution = parse_distribution(v);
    else if (key == "sim.zipf_s") sim.zipf_s = parse_double(v);
    else if (key == "sim.dataset_size") sim.dataset_size = parse_double(v);
    else if (key == "sim.periodic_force_bytes") sim.periodic_force_bytes = parse_double(v);
    else if (key == "policy.family") policy.family = parse_family(v);
    else if (key == "policy.size_ratio") policy.size_ratio = parse_double(v);
    else if (key == "policy.levels") policy.levels = parse_int(v);
    else if (key == "policy.dynamic_level_size") policy.dynamic_level_size = parse_bool(v);
    else if (key == "policy.testing_mode") policy.testing_mode = parse_bool(v);
    else if (key == "policy.st_ratio") policy.st_ratio = parse_double(v);
    else if (key == "policy.st_min_merge") policy.st_min_merge = parse_int(v);
    else if (key == "policy.st_max_merge") policy.st_max_merge = parse_int(v);
    else if (key == "policy.part_level1_base_bytes") policy.part_level1_base_bytes = parse_double(v);
    else if (key == "policy.part_file_max_bytes") policy.part_file_max_bytes = parse_double(v);
    else if (key == "policy.part_l0_min_merge") policy.part_l0_min_merge = parse_int(v);
    else if (key == "policy.part_selection") policy.part_selection = parse_selection(v);
    else if (key == "scheduler.kind") scheduler.kind = parse_sched(v);
    else if (key == "scheduler.constraint") scheduler.constraint = parse_constraint(v);
    else if (key == "scheduler.max_total") scheduler.max_total = parse_double(v);
    else if (key == "scheduler.max_per_level") scheduler.max_per_level = parse_double(v);
    else if (key == "scheduler.write_interaction")
        scheduler.write_interaction = parse_interaction(v);
    else if (key == "scheduler.rate_limit") scheduler.rate_limit = parse_double(v);
    else if (key == "scheduler.flush_priority") scheduler.flush_priority = parse_bool(v);
    else if (key == "arrivals.kind") arrivals.kind = parse_arrival(v);
    else if (key == "arrivals.clients") arrivals.clients = parse_int(v);
    else if (key == "arrivals.rate") arrivals.rate = parse_double(v);
    else if (key == "arrivals.base_rate") arrivals.base_rate = parse_double(v);
    else if (key == "arrivals.base_duration") arrivals.base_duration = parse_double(v);
    else if (key == "arrivals.burst_rate") arrivals.burst_rate = parse_double(v);
    else if (key == "arrivals.burst_duration") arrivals.burst_duration = parse_double(v);
    else if (key == "arrivals.duration") arrivals.duration = parse_double(v);
    else if (key == "harness.test_duration") harness.test_duration = parse_double(v);
    else if (key == "harness.warmup") harness.warmup = parse_double(v);
    else if (key == "harness.run_duration") harness.run_duration = parse_double(v);
    else if (key == "harness.rho") harness.rho = parse_double(v);
    else if (key == "harness.window") harness.window = parse_double(v);
    else if (key == "seed") seed = parse_u64(v);
    else if (key == "output_dir") output_dir = v;
    else throw std::invalid_argument("unknown key: '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            cfg.set(key, value);
        } catch (const std::exception& e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": " +
                                        e.what());
        }
    }
    cfg.validate();
    return cfg;
}

std::string dump_config(const ExperimentConfig& c) {
    std::ostringstream out;
    auto kv = [&](const std::string& k, const std::string& v) { out << k << " = " << v << "\n"; };
    kv("sim.entry_size", fmt_double(c.sim.entry_size));
    kv("sim.mem_component_size", fmt_double(c.sim.mem_component_size));
    kv("sim.mem_component_count", std::to_string(c.sim.mem_component_count));
    kv("sim.bandwidth", fmt_double(c.sim.bandwidth));
    kv("sim.keyspace", fmt_double(c.sim.keyspace));
    kv("sim.key_distribution",
       c.sim.key_distribution == KeyDistribution::Zipf ? "zipf" : "uniform");
    kv("sim.zipf_s", fmt_double(c.sim.zipf_s));
    kv("sim.dataset_size", fmt_double(c.sim.dataset_size));
    kv("sim.periodic_force_bytes", fmt_double(c.sim.periodic_force_bytes));
    kv("policy.family", to_string(c.policy.family));
    kv("policy.size_ratio", fmt_double(c.policy.size_ratio));
    kv("policy.levels", std::to_string(c.policy.levels));
    kv("policy.dynamic_level_size", bool_str(c.policy.dynamic_level_size));
    kv("policy.testing_mode", bool_str(c.policy.testing_mode));
    kv("policy.st_ratio", fmt_double(c.policy.st_ratio));
    kv("policy.st_min_merge", std::to_string(c.policy.st_min_merge));
    kv("policy.st_max_merge", std::to_string(c.policy.st_max_merge));
    kv("policy.part_level1_base_bytes", fmt_double(c.policy.part_level1_base_bytes));
    kv("policy.part_file_max_bytes", fmt_double(c.policy.part_file_max_bytes));
    kv("policy.part_l0_min_merge", std::to_string(c.policy.part_l0_min_merge));
    kv("policy.part_selection", to_string(c.policy.part_selection));
    kv("scheduler.kind", to_string(c.scheduler.kind));
    kv("scheduler.constraint", to_string(c.scheduler.constraint));
    kv("scheduler.max_total", fmt_double(c.scheduler.max_total));
    kv("scheduler.max_per_level", fmt_double(c.scheduler.max_per_level));
    kv("scheduler.write_interaction", to_string(c.scheduler.write_interaction));
    kv("scheduler.rate_limit", fmt_double(c.scheduler.rate_limit));
    kv("scheduler.flush_priority", bool_str(c.scheduler.flush_priority));
    kv("arrivals.kind", to_string(c.arrivals.kind));
    kv("arrivals.clients", std::to_string(c.arrivals.clients));
    kv("arrivals.rate", fmt_double(c.arrivals.rate));
    kv("arrivals.base_rate", fmt_double(c.arrivals.base_rate));
    kv("arrivals.base_duration", fmt_double(c.arrivals.base_duration));
    kv("arrivals.burst_rate", fmt_double(c.arrivals.burst_rate));
    kv("arrivals.burst_duration", fmt_double(c.arrivals.burst_duration));
    kv("arrivals.duration", fmt_double(c.arrivals.duration));
    kv("harness.test_duration", fmt_double(c.harness.test_duration));
    kv("harness.warmup", fmt_double(c.harness.warmup));
    kv("harness.run_duration", fmt_double(c.harness.run_duration));
    kv("harness.rho", fmt_double(c.harness.rho));
    kv("harness.window", fmt_double(c.harness.window));
    kv("seed", std::to_string(c.seed));
    kv("output_dir", c.output_dir);
    return out.str();
}

} // namespace lsmsim
