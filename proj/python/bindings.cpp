#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lsmsim/config.hpp"
#include "lsmsim/harness.hpp"
#include "lsmsim/kernel.hpp"
#include "lsmsim/model.hpp"
#include "lsmsim/report.hpp"

namespace py = pybind11;
using namespace lsmsim;

PYBIND11_MODULE(_lsmsim, m) {
    m.doc() = "Fluid discrete-event simulator of LSM-tree write pipelines";

    py::enum_<PolicyFamily>(m, "PolicyFamily")
        .value("Leveling", PolicyFamily::Leveling)
        .value("Tiering", PolicyFamily::Tiering)
        .value("SizeTiered", PolicyFamily::SizeTiered)
        .value("PartitionedLeveling", PolicyFamily::PartitionedLeveling);
    py::enum_<SchedulerKind>(m, "SchedulerKind")
        .value("SingleThreaded", SchedulerKind::SingleThreaded)
        .value("Fair", SchedulerKind::Fair)
        .value("Greedy", SchedulerKind::Greedy)
        .value("Blsm", SchedulerKind::Blsm);
    py::enum_<ConstraintKind>(m, "ConstraintKind")
        .value("Global", ConstraintKind::Global)
        .value("Local", ConstraintKind::Local);
    py::enum_<WriteInteraction>(m, "WriteInteraction")
        .value("AsFastAsPossible", WriteInteraction::AsFastAsPossible)
        .value("RateLimit", WriteInteraction::RateLimit);
    py::enum_<ArrivalKind>(m, "ArrivalKind")
        .value("Closed", ArrivalKind::Closed)
        .value("OpenConstant", ArrivalKind::OpenConstant)
        .value("OpenBursty", ArrivalKind::OpenBursty);
    py::enum_<KeyDistribution>(m, "KeyDistribution")
        .value("Uniform", KeyDistribution::Uniform)
        .value("Zipf", KeyDistribution::Zipf);

    py::class_<SimParams>(m, "SimParams")
        .def(py::init<>())
        .def_readwrite("entry_size", &SimParams::entry_size)
        .def_readwrite("mem_component_size", &SimParams::mem_component_size)
        .def_readwrite("mem_component_count", &SimParams::mem_component_count)
        .def_readwrite("bandwidth", &SimParams::bandwidth)
        .def_readwrite("keyspace", &SimParams::keyspace)
        .def_readwrite("key_distribution", &SimParams::key_distribution)
        .def_readwrite("zipf_s", &SimParams::zipf_s)
        .def_readwrite("dataset_size", &SimParams::dataset_size);

    py::class_<PolicyConfig>(m, "PolicyConfig")
        .def(py::init<>())
        .def_readwrite("family", &PolicyConfig::family)
        .def_readwrite("size_ratio", &PolicyConfig::size_ratio)
        .def_readwrite("levels", &PolicyConfig::levels)
        .def_readwrite("dynamic_level_size", &PolicyConfig::dynamic_level_size)
        .def_readwrite("testing_mode", &PolicyConfig::testing_mode)
        .def_readwrite("st_ratio", &PolicyConfig::st_ratio)
        .def_readwrite("st_min_merge", &PolicyConfig::st_min_merge)
        .def_readwrite("st_max_merge", &PolicyConfig::st_max_merge)
        .def_readwrite("part_level1_base_bytes", &PolicyConfig::part_level1_base_bytes)
        .def_readwrite("part_file_max_bytes", &PolicyConfig::part_file_max_bytes)
        .def_readwrite("part_l0_min_merge", &PolicyConfig::part_l0_min_merge);

    py::class_<SchedulerConfig>(m, "SchedulerConfig")
        .def(py::init<>())
        .def_readwrite("kind", &SchedulerConfig::kind)
        .def_readwrite("constraint", &SchedulerConfig::constraint)
        .def_readwrite("max_total", &SchedulerConfig::max_total)
        .def_readwrite("max_per_level", &SchedulerConfig::max_per_level)
        .def_readwrite("write_interaction", &SchedulerConfig::write_interaction)
        .def_readwrite("rate_limit", &SchedulerConfig::rate_limit)
        .def_readwrite("flush_priority", &SchedulerConfig::flush_priority);

    py::class_<ArrivalProcess>(m, "ArrivalProcess")
        .def(py::init<>())
        .def_readwrite("kind", &ArrivalProcess::kind)
        .def_readwrite("clients", &ArrivalProcess::clients)
        .def_readwrite("rate", &ArrivalProcess::rate)
        .def_readwrite("base_rate", &ArrivalProcess::base_rate)
        .def_readwrite("base_duration", &ArrivalProcess::base_duration)
        .def_readwrite("burst_rate", &ArrivalProcess::burst_rate)
        .def_readwrite("burst_duration", &ArrivalProcess::burst_duration)
        .def_readwrite("duration", &ArrivalProcess::duration);

    py::class_<HarnessParams>(m, "HarnessParams")
        .def(py::init<>())
        .def_readwrite("test_duration", &HarnessParams::test_duration)
        .def_readwrite("warmup", &HarnessParams::warmup)
        .def_readwrite("run_duration", &HarnessParams::run_duration)
        .def_readwrite("rho", &HarnessParams::rho)
        .def_readwrite("window", &HarnessParams::window);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("sim", &ExperimentConfig::sim)
        .def_readwrite("policy", &ExperimentConfig::policy)
        .def_readwrite("scheduler", &ExperimentConfig::scheduler)
        .def_readwrite("arrivals", &ExperimentConfig::arrivals)
        .def_readwrite("harness", &ExperimentConfig::harness)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def("validate", &ExperimentConfig::validate)
        .def("set", &ExperimentConfig::set, py::arg("key"), py::arg("value"));

    py::class_<StallInterval>(m, "StallInterval")
        .def_readonly("start", &StallInterval::start)
        .def_readonly("end", &StallInterval::end)
        .def_readonly("cause", &StallInterval::cause);

    py::class_<LatencyDistribution>(m, "LatencyDistribution")
        .def("quantile", &LatencyDistribution::quantile, py::arg("q"))
        .def("p50", &LatencyDistribution::p50)
        .def("p99", &LatencyDistribution::p99)
        .def("p999", &LatencyDistribution::p999)
        .def("max", &LatencyDistribution::max)
        .def("total_mass", &LatencyDistribution::total_mass);

    py::class_<Trace>(m, "Trace")
        .def_readonly("duration", &Trace::duration)
        .def_readonly("window", &Trace::window)
        .def_readonly("warmup", &Trace::warmup)
        .def_readonly("seed", &Trace::seed)
        .def_readonly("stalls", &Trace::stalls)
        .def_readonly("components", &Trace::components)
        .def_readonly("write_latency", &Trace::write_latency)
        .def_readonly("processing_latency", &Trace::processing_latency)
        .def_readonly("admitted_total", &Trace::admitted_total)
        .def_readonly("queue_backlog", &Trace::queue_backlog)
        .def_readonly("queue_growing", &Trace::queue_growing)
        .def("mean_throughput", &Trace::mean_throughput)
        .def("stall_fraction", py::overload_cast<>(&Trace::stall_fraction, py::const_))
        .def("stall_fraction_from",
             py::overload_cast<double>(&Trace::stall_fraction, py::const_), py::arg("from_s"));

    py::class_<PhaseReport>(m, "PhaseReport")
        .def_readonly("phase", &PhaseReport::phase)
        .def_readonly("measured_W", &PhaseReport::measured_W)
        .def_readonly("target_rate", &PhaseReport::target_rate)
        .def_readonly("rho", &PhaseReport::rho)
        .def_readonly("stall_fraction", &PhaseReport::stall_fraction)
        .def_readonly("warnings", &PhaseReport::warnings)
        .def_readonly("trace", &PhaseReport::trace);

    m.def("preset_names", [] { return preset_names(); });
    m.def("preset", &preset, py::arg("name"));
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("dump_config", &dump_config, py::arg("config"));

    m.def(
        "run_sim",
        [](const ExperimentConfig& cfg, double warmup) {
            RunOptions opts;
            opts.window = cfg.harness.window;
            opts.warmup = warmup;
            opts.seed = cfg.seed;
            return run_sim(cfg.sim, cfg.policy, cfg.scheduler, cfg.arrivals, opts);
        },
        py::arg("config"), py::arg("warmup") = 0.0);

    m.def("testing_phase", &testing_phase, py::arg("config"));
    m.def(
        "running_phase",
        [](const ExperimentConfig& cfg, double W, double rho, const PhaseReport* from) {
            return running_phase(cfg, W, rho, from);
        },
        py::arg("config"), py::arg("W"), py::arg("rho"), py::arg("from_phase") = nullptr);
    m.def("two_phase", &two_phase, py::arg("config"));
    m.def(
        "utilization_sweep",
        [](const ExperimentConfig& cfg, double W, const std::vector<double>& rhos,
           const PhaseReport* from) { return utilization_sweep(cfg, W, rhos, from); },
        py::arg("config"), py::arg("W"), py::arg("rhos"), py::arg("from_phase") = nullptr);

    m.def("measure_windows", &measure_windows, py::arg("trace"), py::arg("window"));
    m.def("trace_to_json", &trace_to_json, py::arg("trace"), py::arg("config_echo") = "");
    m.def("phase_report_to_json", &phase_report_to_json, py::arg("report"),
          py::arg("config_echo") = "");

    m.def("draws_distinct", &draws_distinct, py::arg("n"), py::arg("K"));
    m.def(
        "union_distinct",
        [](const std::vector<double>& inputs, double K) { return union_distinct(inputs, K); },
        py::arg("inputs"), py::arg("K"));
    m.def("zipf_distinct", &zipf_distinct, py::arg("n"), py::arg("U"), py::arg("s"));
}
