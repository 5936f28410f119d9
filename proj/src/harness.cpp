#include "lsmsim/harness.hpp"

#include <stdexcept>

namespace lsmsim {

PhaseReport testing_phase(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentConfig c = cfg;
    c.arrivals.kind = ArrivalKind::Closed;
    c.arrivals.duration = c.harness.test_duration;

    PhaseReport report;
    report.phase = "testing";
    if (c.scheduler.kind == SchedulerKind::Greedy)
        report.warnings.push_back(
            "greedy scheduler overstates the maximum throughput by deferring large merges; "
            "prefer fair for the testing phase");

    RunOptions opts;
    opts.window = c.harness.window;
    opts.warmup = c.harness.warmup;
    opts.seed = c.seed;
    report.trace = run_sim(c.sim, c.policy, c.scheduler, c.arrivals, opts);
    report.measured_W = report.trace.mean_throughput();
    report.stall_fraction = report.trace.stall_fraction();
    return report;
}

PhaseReport running_phase(const ExperimentConfig& cfg, double W, double rho,
                          const PhaseReport* from) {
    if (rho <= 0 || rho >= 1) throw std::invalid_argument("running_phase: rho must be in (0,1)");
    if (W <= 0) throw std::invalid_argument("running_phase: measured W must be > 0");
    cfg.validate();
    ExperimentConfig c = cfg;
    c.arrivals.kind = ArrivalKind::OpenConstant;
    c.arrivals.rate = rho * W;
    c.arrivals.duration = c.harness.run_duration;

    RunOptions opts;
    opts.window = c.harness.window;
    opts.warmup = 0;
    opts.seed = c.seed;
    if (from) {
        // The closed phase ends mid-stall by construction; drain its pending
        // work so the open phase starts from the steady-state tree rather
        // than a constraint-saturated one.
        opts.next_component_id = from->trace.next_component_id;
        opts.next_task_id = from->trace.next_task_id;
        opts.initial_tree = quiesce_tree(c.sim, c.policy, from->trace.final_tree,
                                         opts.next_component_id, opts.next_task_id);
    }

    PhaseReport report;
    report.phase = "running";
    report.rho = rho;
    report.target_rate = rho * W;
    report.trace = run_sim(c.sim, c.policy, c.scheduler, c.arrivals, opts);
    report.stall_fraction = report.trace.stall_fraction(0);
    if (report.trace.queue_growing)
        report.warnings.push_back("arrival rate exceeds long-run capacity: final queue is "
                                  "nonempty and growing");
    return report;
}

std::pair<PhaseReport, PhaseReport> two_phase(const ExperimentConfig& cfg) {
    PhaseReport testing = testing_phase(cfg);
    PhaseReport running = running_phase(cfg, testing.measured_W, cfg.harness.rho, &testing);
    return {std::move(testing), std::move(running)};
}

std::vector<PhaseReport> utilization_sweep(const ExperimentConfig& cfg, double W,
                                           const std::vector<double>& rhos,
                                           const PhaseReport* from) {
    std::vector<PhaseReport> out;
    out.reserve(rhos.size());
    for (double rho : rhos) out.push_back(running_phase(cfg, W, rho, from));
    return out;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "tiering_base",       "leveling_base",           "size_ratio_sweep",
        "constraint_local_vs_global", "burst_limit_vs_nolimit",
        "size_tiered_unfixed", "size_tiered_fixed",      "leveldb_unfixed",
        "leveldb_fixed",      "leveldb_partition_size_sweep", "blsm_base"};
    return names;
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c; // paper-scale defaults: M=128K entries, B=100K/s, U=1e8, D=1e8

    if (name == "tiering_base") {
        c.policy.family = PolicyFamily::Tiering;
        c.policy.size_ratio = 3;
    } else if (name == "leveling_base" || name == "size_ratio_sweep") {
        c.policy.family = PolicyFamily::Leveling;
        c.policy.size_ratio = 10;
    } else if (name == "constraint_local_vs_global") {
        c.policy.family = PolicyFamily::Tiering;
        c.policy.size_ratio = 3;
        c.scheduler.constraint = ConstraintKind::Local;
    } else if (name == "burst_limit_vs_nolimit") {
        c.policy.family = PolicyFamily::Leveling;
        c.policy.size_ratio = 10;
        c.arrivals.kind = ArrivalKind::OpenBursty;
        c.arrivals.base_rate = 2000;
        c.arrivals.base_duration = 1500;
        c.arrivals.burst_rate = 8000;
        c.arrivals.burst_duration = 300;
        c.scheduler.write_interaction = WriteInteraction::RateLimit;
        c.scheduler.rate_limit = 4000;
    } else if (name == "size_tiered_unfixed" || name == "size_tiered_fixed") {
        c.policy.family = PolicyFamily::SizeTiered;
        c.policy.testing_mode = name == "size_tiered_fixed";
    } else if (name == "leveldb_unfixed" || name == "leveldb_fixed" ||
               name == "leveldb_partition_size_sweep") {
        c.policy.family = PolicyFamily::PartitionedLeveling;
        c.policy.size_ratio = 10;
        c.policy.testing_mode = name == "leveldb_fixed";
        c.scheduler.kind = SchedulerKind::SingleThreaded;
    } else if (name == "blsm_base") {
        c.policy.family = PolicyFamily::Leveling;
        c.policy.size_ratio = 10;
        c.policy.levels = 2;
        c.sim.mem_component_size = 1'000'000; // 1GB memory component
        c.scheduler.kind = SchedulerKind::Blsm;
    } else {
        throw std::invalid_argument("unknown preset: '" + name + "'");
    }
    c.validate();
    return c;
}

} // namespace lsmsim
