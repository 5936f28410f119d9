#include "lsmsim/config.hpp"
#include "lsmsim/harness.hpp"
#include "lsmsim/oracles.hpp"
#include "lsmsim/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace lsmsim;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ExperimentConfig load_config(const std::string& config_path, const std::string& preset_name,
                             const std::vector<std::string>& overrides) {
    ExperimentConfig cfg;
    if (!preset_name.empty()) cfg = preset(preset_name);
    if (!config_path.empty()) {
        if (!preset_name.empty())
            throw std::invalid_argument("--config and --preset are mutually exclusive");
        cfg = parse_config(read_file(config_path));
    }
    for (const auto& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("override must be key=value: '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

void write_phase_outputs(const fs::path& dir, const ExperimentConfig& cfg,
                         const PhaseReport& testing, const PhaseReport& running) {
    fs::create_directories(dir);
    std::string echo = dump_config(cfg);
    write_file((dir / "testing.json").string(), phase_report_to_json(testing, echo));
    write_file((dir / "running.json").string(), phase_report_to_json(running, echo));
    write_file((dir / "throughput.csv").string(), windows_csv(running.trace));
    write_file((dir / "components.csv").string(), components_csv(running.trace));
    write_file((dir / "stalls.csv").string(), stalls_csv(running.trace));
    for (const auto& w : testing.warnings) std::cerr << "warning (testing): " << w << "\n";
    for (const auto& w : running.warnings) std::cerr << "warning (running): " << w << "\n";
}

int run_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
    RunOptions opts;
    opts.window = cfg.harness.window;
    opts.warmup = cfg.harness.warmup;
    opts.seed = cfg.seed;
    Trace trace = run_sim(cfg.sim, cfg.policy, cfg.scheduler, cfg.arrivals, opts);

    fs::path dir = out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(out_dir);
    fs::create_directories(dir);
    std::string echo = dump_config(cfg);
    write_file((dir / "trace.json").string(), trace_to_json(trace, echo));
    write_file((dir / "throughput.csv").string(), windows_csv(trace));
    write_file((dir / "components.csv").string(), components_csv(trace));
    write_file((dir / "stalls.csv").string(), stalls_csv(trace));
    std::cout << "mean_throughput_per_s " << trace.mean_throughput() << "\n"
              << "stall_fraction " << trace.stall_fraction() << "\n"
              << "p99_write_latency_s " << trace.write_latency.p99() << "\n";
    return 0;
}

int run_two_phase(const ExperimentConfig& cfg, const std::string& out_dir) {
    auto [testing, running] = two_phase(cfg);
    fs::path dir = out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(out_dir);
    write_phase_outputs(dir, cfg, testing, running);
    std::cout << "measured_W_per_s " << testing.measured_W << "\n"
              << "target_rate_per_s " << running.target_rate << "\n"
              << "stall_fraction " << running.stall_fraction << "\n"
              << "p99_write_latency_s " << running.trace.write_latency.p99() << "\n";
    return 0;
}

std::vector<double> parse_values(const std::string& spec) {
    std::vector<double> out;
    auto dots = spec.find("..");
    if (dots != std::string::npos) {
        double a = std::stod(spec.substr(0, dots));
        double b = std::stod(spec.substr(dots + 2));
        for (double v = a; v <= b + 1e-9; v += 1) out.push_back(v);
        return out;
    }
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

int run_sweep(const ExperimentConfig& base, const std::string& axis, const std::string& values,
              const std::string& out_dir) {
    std::vector<double> vals = parse_values(values);
    if (vals.empty()) throw std::invalid_argument("sweep: empty value list");
    fs::path root = out_dir.empty() ? fs::path(base.output_dir) : fs::path(out_dir);

    if (axis == "rho") {
        PhaseReport testing = testing_phase(base);
        for (double rho : vals) {
            PhaseReport running = running_phase(base, testing.measured_W, rho, &testing);
            std::ostringstream name;
            name << "rho=" << rho;
            write_phase_outputs(root / name.str(), base, testing, running);
            std::cout << name.str() << " stall_fraction " << running.stall_fraction << " p99 "
                      << running.trace.write_latency.p99() << "\n";
        }
        return 0;
    }

    std::string key;
    if (axis == "size_ratio") key = "policy.size_ratio";
    else if (axis == "file_max") key = "policy.part_file_max_bytes";
    else throw std::invalid_argument("sweep: unknown axis '" + axis + "' (rho, size_ratio, file_max)");

    for (double v : vals) {
        ExperimentConfig cfg = base;
        cfg.set(key, nlohmann::json(v).dump());
        cfg.validate();
        auto [testing, running] = two_phase(cfg);
        std::ostringstream name;
        name << axis << "=" << v;
        write_phase_outputs(root / name.str(), cfg, testing, running);
        std::cout << name.str() << " measured_W " << testing.measured_W << " stall_fraction "
                  << running.stall_fraction << "\n";
    }
    return 0;
}

int run_verify() {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    // Greedy dominance over enumerated schedules on sampled multisets.
    {
        bool ok = true;
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<int> size(1, 5), count(1, 5);
        for (int rep = 0; rep < 20 && ok; ++rep) {
            std::vector<double> sizes;
            int n = count(rng);
            for (int i = 0; i < n; ++i) sizes.push_back(size(rng));
            auto greedy = greedy_curve(sizes, 100.0);
            for (const auto& curve : brute_force_curves(sizes, 100.0, 32))
                for (std::size_t i = 0; i < greedy.completion_times.size(); ++i)
                    if (greedy.completion_times[i] > curve.completion_times[i] + 1e-9) ok = false;
        }
        report("greedy_pointwise_dominance", ok);
    }

    // Dependent-merge counterexample: no schedule achieves both optima.
    {
        auto pairs = dependent_pair_schedules(500, 300, 100, 100, 18);
        double best_first = 1e18, best_second = 1e18;
        bool both = false;
        for (const auto& [c1, c2] : pairs) {
            best_first = std::min(best_first, c1);
            best_second = std::min(best_second, c2);
            if (c1 <= 3.0 && c2 <= 6.0) both = true;
        }
        report("scheduling_counterexample", best_first == 3.0 && best_second == 6.0 && !both);
    }

    // Dedup formulas against Monte-Carlo.
    {
        auto est = mc_distinct(200, 100, KeyDistribution::Uniform, 0, 11, 20000);
        double analytic = draws_distinct(200, 100);
        bool ok = std::abs(est.mean - analytic) <= est.half_width;
        auto zest = mc_distinct(50, 100, KeyDistribution::Zipf, 1.0, 13, 20000);
        ok = ok && std::abs(zest.mean - zipf_distinct(50, 100, 1.0)) <= zest.half_width;
        report("dedup_oracle_agreement", ok);
    }

    // Queue accounting against the per-write reference.
    {
        std::vector<std::tuple<double, double, double>> segs{{0, 100, 1000}};
        std::vector<StallInterval> stalls{{10, 11, "memory_full"}};
        auto profile = queue_account(segs, stalls, {});
        auto ref = per_write_reference(segs, stalls, {});
        bool ok = true;
        for (std::size_t i = 0; i < ref.size(); ++i)
            if (std::abs(ref[i] - profile.value_at(static_cast<double>(i + 1))) > 1e-9) ok = false;
        double mean_stalled = 0;
        int n_stalled = 0;
        for (std::size_t i = 0; i < ref.size(); ++i)
            if (ref[i] > 0) { mean_stalled += ref[i]; ++n_stalled; }
        ok = ok && n_stalled > 0 && std::abs(mean_stalled / n_stalled - 0.5) < 1e-9;
        report("queue_accounting", ok);
    }

    // Write-latency dominance: unthrottled admission is never later.
    {
        bool ok = true;
        for (auto kind : {SchedulerKind::Fair, SchedulerKind::Greedy,
                          SchedulerKind::SingleThreaded}) {
            ExperimentConfig cfg = preset("tiering_base");
            cfg.sim.dataset_size = 1e6;
            cfg.scheduler.kind = kind;
            cfg.arrivals.kind = ArrivalKind::OpenConstant;
            cfg.arrivals.rate = 9000;
            cfg.arrivals.duration = 600;
            RunOptions opts;
            opts.window = 30;
            Trace fast = run_sim(cfg.sim, cfg.policy, cfg.scheduler, cfg.arrivals, opts);
            cfg.scheduler.write_interaction = WriteInteraction::RateLimit;
            cfg.scheduler.rate_limit = 8000;
            Trace limited = run_sim(cfg.sim, cfg.policy, cfg.scheduler, cfg.arrivals, opts);
            if (!write_dominance(fast.admission_curve, limited.admission_curve)) ok = false;
        }
        report("rate_limit_dominance", ok);
    }

    return failures == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LSM-tree write-pipeline simulator"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir, axis, values;
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (section.key = value lines)");
        sub->add_option("--preset", preset_name, "named preset");
        sub->add_option("-O,--set", overrides, "override key=value (repeatable)");
        sub->add_option("--output", out_dir, "output directory (defaults to output_dir key)");
    };

    auto* sim_cmd = app.add_subcommand("simulate", "run one simulation and write trace + CSVs");
    add_common(sim_cmd);
    auto* two_cmd = app.add_subcommand("two-phase", "testing phase then running phase");
    add_common(two_cmd);
    auto* sweep_cmd = app.add_subcommand("sweep", "two-phase runs along an axis");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--axis", axis, "rho | size_ratio | file_max")->required();
    sweep_cmd->add_option("--values", values, "comma list or a..b integer range")->required();

    std::string preset_arg;
    bool preset_run = false;
    auto* preset_cmd = app.add_subcommand("preset", "dump (or run) a named preset");
    preset_cmd->add_option("name", preset_arg, "preset name")->required();
    preset_cmd->add_flag("--run", preset_run, "run the preset as two-phase");
    preset_cmd->add_option("--output", out_dir, "output directory");

    auto* verify_cmd = app.add_subcommand("verify", "run the property suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim_cmd->parsed()) return run_simulate(load_config(config_path, preset_name, overrides), out_dir);
        if (two_cmd->parsed()) return run_two_phase(load_config(config_path, preset_name, overrides), out_dir);
        if (sweep_cmd->parsed())
            return run_sweep(load_config(config_path, preset_name, overrides), axis, values, out_dir);
        if (preset_cmd->parsed()) {
            ExperimentConfig cfg = preset(preset_arg);
            if (!preset_run) {
                std::cout << dump_config(cfg);
                return 0;
            }
            return run_two_phase(cfg, out_dir);
        }
        if (verify_cmd->parsed()) return run_verify();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
