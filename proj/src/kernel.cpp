#include "lsmsim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsmsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-9;
} // namespace

void ArrivalProcess::validate() const {
    if (duration <= 0) throw std::invalid_argument("arrivals.duration must be > 0");
    switch (kind) {
        case ArrivalKind::Closed:
            if (clients < 1) throw std::invalid_argument("arrivals.clients must be >= 1");
            break;
        case ArrivalKind::OpenConstant:
            if (rate < 0) throw std::invalid_argument("arrivals.rate must be >= 0");
            break;
        case ArrivalKind::OpenBursty:
            if (base_rate <= 0 || burst_rate <= 0)
                throw std::invalid_argument("arrivals: bursty rates must be > 0");
            if (base_duration <= 0 || burst_duration <= 0)
                throw std::invalid_argument("arrivals: bursty durations must be > 0");
            break;
    }
}

double ArrivalProcess::rate_at(double t) const {
    if (t < 0 || t >= duration) return 0;
    switch (kind) {
        case ArrivalKind::Closed: return 0;
        case ArrivalKind::OpenConstant: return rate;
        case ArrivalKind::OpenBursty: {
            double period = base_duration + burst_duration;
            double phase = std::fmod(t, period);
            return phase < base_duration ? base_rate : burst_rate;
        }
    }
    return 0;
}

double ArrivalProcess::next_boundary(double t) const {
    if (t >= duration) return duration;
    if (kind != ArrivalKind::OpenBursty) return duration;
    double period = base_duration + burst_duration;
    double k = std::floor(t / period);
    double phase = t - k * period;
    double next = phase < base_duration ? k * period + base_duration : (k + 1) * period;
    if (next <= t + 1e-12) next += phase < base_duration ? burst_duration : base_duration;
    return std::min(next, duration);
}

std::vector<std::tuple<double, double, double>> ArrivalProcess::segments() const {
    std::vector<std::tuple<double, double, double>> out;
    if (kind == ArrivalKind::Closed) return out;
    double t = 0;
    while (t < duration - 1e-12) {
        double next = next_boundary(t);
        out.emplace_back(t, next, rate_at(t));
        t = next;
    }
    return out;
}

double Trace::mean_throughput() const {
    double span = duration - warmup;
    if (span <= 0) return 0;
    return (admission_curve.value(duration) - admission_curve.value(warmup)) / span;
}

double Trace::stall_fraction() const { return stall_fraction(warmup); }

double Trace::stall_fraction(double from) const {
    double span = duration - from;
    if (span <= 0) return 0;
    double s = 0;
    for (const auto& iv : stalls)
        s += std::max(0.0, std::min(iv.end, duration) - std::max(iv.start, from));
    return s / span;
}

std::vector<std::pair<double, double>> measure_windows(const Trace& trace, double window) {
    if (window <= 0) throw std::invalid_argument("measure_windows: window must be > 0");
    std::vector<std::pair<double, double>> out;
    auto n = static_cast<std::size_t>(std::floor(trace.duration / window + 1e-9));
    for (std::size_t k = 0; k < n; ++k) {
        double a = static_cast<double>(k) * window;
        double b = a + window;
        double count = trace.admission_curve.value(b) - trace.admission_curve.value(a);
        out.emplace_back(a, count / window);
    }
    return out;
}

namespace {

TreeState empty_tree(const SimParams& sim, const PolicyConfig& policy) {
    TreeState tree;
    switch (policy.family) {
        case PolicyFamily::Leveling: {
            int L = policy.levels > 0
                        ? policy.levels
                        : derive_levels(sim.dataset_size, sim.mem_component_size,
                                        policy.size_ratio, policy.family);
            tree.levels.resize(static_cast<std::size_t>(L) + 1);
            break;
        }
        case PolicyFamily::Tiering: {
            int L = policy.levels > 0
                        ? policy.levels
                        : derive_levels(sim.dataset_size, sim.mem_component_size,
                                        policy.size_ratio, policy.family);
            tree.levels.resize(static_cast<std::size_t>(L));
            break;
        }
        case PolicyFamily::SizeTiered:
            tree.levels.resize(1);
            break;
        case PolicyFamily::PartitionedLeveling: {
            int n = partitioned_level_count(policy, sim);
            tree.levels.resize(static_cast<std::size_t>(n) + 1);
            tree.partitioned = true;
            tree.round_robin_cursors.assign(tree.levels.size(), 0.0);
            break;
        }
    }
    return tree;
}

} // namespace

TreeState make_initial_tree(const SimParams& sim, const PolicyConfig& policy,
                            std::uint64_t& next_component_id) {
    TreeState tree = empty_tree(sim, policy);
    if (sim.dataset_size <= 0) return tree;

    // Insert the dataset through a normal closed-system run so the returned
    // tree has every level at its steady-state occupancy. The load scheduler
    // is fixed (fair, unthrottled) so all experiment variants start from the
    // same tree.
    SchedulerConfig load;
    ArrivalProcess arr;
    arr.kind = ArrivalKind::Closed;
    arr.duration = 1e12;
    RunOptions opts;
    opts.initial_tree = tree;
    opts.next_component_id = next_component_id;
    opts.stop_after_admitted = sim.dataset_size;
    Trace loaded = run_sim(sim, policy, load, arr, opts);
    next_component_id = loaded.next_component_id;
    return loaded.final_tree;
}

TreeState quiesce_tree(const SimParams& sim, const PolicyConfig& policy, TreeState tree,
                       std::uint64_t& next_component_id, std::uint64_t& next_task_id) {
    SchedulerConfig drain;
    ArrivalProcess arr;
    arr.kind = ArrivalKind::Closed;
    arr.duration = 1e8;
    RunOptions opts;
    opts.initial_tree = std::move(tree);
    opts.next_component_id = next_component_id;
    opts.next_task_id = next_task_id;
    opts.no_admission = true;
    Trace drained = run_sim(sim, policy, drain, arr, opts);
    next_component_id = drained.next_component_id;
    next_task_id = drained.next_task_id;
    return drained.final_tree;
}

// ---------------------------------------------------------------------------

namespace {

class Engine {
public:
    Engine(const SimParams& sim, const PolicyConfig& policy, const SchedulerConfig& sched,
           const ArrivalProcess& arrivals, const RunOptions& opts)
        : sim_(sim), policy_(policy), sched_(sched), arr_(arrivals), opts_(opts) {
        sim_.validate();
        policy_.validate();
        sched_.validate();
        arr_.validate();

        next_comp_ = opts.next_component_id;
        next_task_ = opts.next_task_id;
        if (opts.initial_tree) {
            tree_ = *opts.initial_tree;
        } else {
            tree_ = make_initial_tree(sim_, policy_, next_comp_);
            // Open-arrival runs start drained: the loader hands over a
            // mid-stream snapshot whose full memory components would
            // otherwise stall the run at t=0.
            if (arrivals.kind != ArrivalKind::Closed)
                tree_ = quiesce_tree(sim_, policy_, std::move(tree_), next_comp_, next_task_);
        }

        if (policy_.family == PolicyFamily::Leveling || policy_.family == PolicyFamily::Tiering)
            L_ = policy_.levels > 0
                     ? policy_.levels
                     : derive_levels(sim_.dataset_size, sim_.mem_component_size,
                                     policy_.size_ratio, policy_.family);
        else
            L_ = static_cast<int>(tree_.levels.size());

        cap_infinite_ = sched_.write_interaction == WriteInteraction::AsFastAsPossible &&
                        sched_.kind != SchedulerKind::Blsm;
        open_ = arr_.kind != ArrivalKind::Closed;
    }

    Trace run() {
        trace_.duration = arr_.duration;
        trace_.window = opts_.window;
        trace_.warmup = opts_.warmup;
        trace_.seed = opts_.seed;
        arrival_curve_.add(0, 0);
        admission_curve_.add(0, 0);
        post_state();
        record_components(true);

        std::uint64_t safety = 0;
        while (t_ < arr_.duration - 1e-12) {
            if (opts_.stop_after_admitted > 0 &&
                admitted_ >= opts_.stop_after_admitted - 1e-6)
                break;
            if (++safety > 50'000'000)
                throw std::runtime_error("run_sim: event budget exhausted (nonterminating?)");
            auto [ok, ev] = next_event();
            if (!ok || ev.time >= arr_.duration) {
                advance_to(arr_.duration);
                break;
            }
            if (ev.time - t_ > 1e9)
                throw std::runtime_error("run_sim: no event within 1e9 virtual seconds");
            advance_to(ev.time);
            handle(ev);
            post_state();
        }
        finalize();
        return std::move(trace_);
    }

private:
    struct Rates {
        double arr = 0;
        double adm = 0;
        bool throttled = false;
    };

    Rates rates() const {
        Rates r;
        r.arr = open_ ? arr_.rate_at(t_) : 0.0;
        if (stalled_ || opts_.no_admission) return r;
        if (!open_) {
            // Closed system under a finite cap admits continuously at the cap
            // (the uncapped closed case tops up in instant jumps instead).
            if (!cap_infinite_ && t_ < arr_.duration) {
                r.adm = cap_;
                r.arr = r.adm;
                r.throttled = cap_ > 0 && std::isfinite(cap_);
            }
            return r;
        }
        if (cap_infinite_) {
            r.adm = r.arr; // queue is drained instantly, so pass-through
        } else if (queue_ > kEps) {
            r.adm = cap_;
            r.throttled = cap_ > 0;
        } else {
            r.adm = std::min(r.arr, cap_);
            r.throttled = cap_ < r.arr - 1e-12 && cap_ > 0;
        }
        return r;
    }

    std::pair<bool, SimEvent> next_event() const {
        bool have = false;
        SimEvent best{};
        auto consider = [&](double time, EventKind kind, std::uint64_t id) {
            if (time < t_) time = t_;
            if (!have || time < best.time ||
                (time == best.time &&
                 (static_cast<int>(kind) < static_cast<int>(best.kind) ||
                  (kind == best.kind && id < best.id)))) {
                best = {time, kind, id};
                have = true;
            }
        };

        // Exhausted tasks complete now even if the allocator starves them
        // (blsm's remaining-proportional split gives them zero bandwidth).
        for (const auto& mt : tree_.in_flight)
            if (mt.remaining <= 1e-6) consider(t_, EventKind::MergeDone, mt.id);
        for (const auto& [id, rate] : alloc_.merge_rates) {
            if (rate <= 0) continue;
            const MergeTask* task = nullptr;
            for (const auto& mt : tree_.in_flight)
                if (mt.id == id) { task = &mt; break; }
            if (task) consider(t_ + task->remaining / rate, EventKind::MergeDone, id);
        }
        if (flushing_ && alloc_.flush_rate > 0)
            consider(t_ + flush_rem_ / alloc_.flush_rate, EventKind::FlushDone, 0);

        Rates r = rates();
        if (r.adm > 0)
            consider(t_ + (sim_.mem_component_size - tree_.active_fill) / r.adm,
                     EventKind::MemFull, 0);
        if (open_) {
            double b = arr_.next_boundary(t_);
            if (b > t_ + 1e-12) consider(b, EventKind::Boundary, 0);
            if (queue_ > kEps && r.adm > r.arr + 1e-12)
                consider(t_ + queue_ / (r.adm - r.arr), EventKind::Boundary, 1);
        }
        return {have, best};
    }

    void advance_to(double t2) {
        double dt = t2 - t_;
        if (dt < 0) throw std::logic_error("run_sim: time went backwards");
        if (dt == 0) { t_ = t2; return; }

        Rates r = rates();
        arrived_ += r.arr * dt;
        double admitted_now = r.adm * dt;
        queue_ += (r.arr - r.adm) * dt;
        // Snap rounding residue to zero or the drain boundary re-fires at dt=0.
        if (queue_ < 1e-6) queue_ = 0;
        if (!half_recorded_ && t2 >= arr_.duration / 2) {
            queue_at_half_ = queue_;
            half_recorded_ = true;
        }
        admitted_ += admitted_now;
        tree_.active_fill = std::min(sim_.mem_component_size, tree_.active_fill + admitted_now);
        if (r.throttled && admitted_now > 0)
            proc_segments_.push_back({admitted_now, 1.0 / cap_, 1.0 / cap_});

        for (auto& task : tree_.in_flight) {
            auto it = alloc_.merge_rates.find(task.id);
            if (it != alloc_.merge_rates.end())
                task.remaining = std::max(0.0, task.remaining - it->second * dt);
        }
        if (flushing_) flush_rem_ = std::max(0.0, flush_rem_ - alloc_.flush_rate * dt);

        t_ = t2;
        arrival_curve_.add(t_, arrived_);
        admission_curve_.add(t_, admitted_);
    }

    void handle(const SimEvent& ev) {
        trace_.events.push_back(ev);
        switch (ev.kind) {
            case EventKind::MergeDone: complete_merge(ev.id); break;
            case EventKind::FlushDone: complete_flush(); break;
            case EventKind::MemFull: seal_active(); break;
            case EventKind::Boundary: break;
            case EventKind::StallRelease: break; // emitted from post_state only
        }
    }

    void seal_active() {
        tree_.sealed_mem.push_back({sim_.mem_component_size, flushed_size(sim_)});
        tree_.active_fill = 0;
    }

    void complete_flush() {
        if (tree_.sealed_mem.empty()) throw std::logic_error("flush_done with empty queue");
        MemComponent m = tree_.sealed_mem.front();
        tree_.sealed_mem.erase(tree_.sealed_mem.begin());
        flushing_ = false;
        if (tree_.levels.empty()) tree_.levels.resize(1);
        tree_.levels[0].push_back({next_comp_++, 0, m.logical, m.size, {0, 1}, t_, false});
    }

    void complete_merge(std::uint64_t task_id) {
        auto it = std::find_if(tree_.in_flight.begin(), tree_.in_flight.end(),
                               [&](const MergeTask& mt) { return mt.id == task_id; });
        if (it == tree_.in_flight.end()) throw std::logic_error("merge_done: unknown task");
        MergeTask task = *it;
        tree_.in_flight.erase(it);

        // Insertion point for size-tiered outputs: where the oldest input sat.
        std::size_t st_pos = 0;
        if (policy_.family == PolicyFamily::SizeTiered) {
            const auto& seq = tree_.levels[0];
            st_pos = seq.size();
            for (std::size_t i = 0; i < seq.size(); ++i)
                if (std::find(task.inputs.begin(), task.inputs.end(), seq[i].id) !=
                    task.inputs.end()) { st_pos = i; break; }
        }

        auto inputs = tree_.take(task.inputs);
        std::vector<double> sizes;
        double logical = 0;
        for (const auto& c : inputs) {
            sizes.push_back(c.size);
            logical += c.logical;
        }

        auto lvl_idx = static_cast<std::size_t>(task.output_level);
        if (policy_.family == PolicyFamily::PartitionedLeveling) {
            double width = std::max(task.output_interval.width(), 1e-12);
            double K = std::max(1.0, sim_.keyspace * width);
            for (auto& s : sizes) s = std::min(s, K);
            double total = union_distinct(sizes, K);
            if (lvl_idx >= tree_.levels.size()) tree_.levels.resize(lvl_idx + 1);

            double file_entries = sim_.entries(policy_.part_file_max_bytes);
            auto files = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::ceil(total / file_entries - 1e-9)));
            auto& lvl = tree_.levels[lvl_idx];
            double placed = 0;
            for (std::size_t i = 0; i < files; ++i) {
                double sz = i + 1 < files ? file_entries : std::max(0.0, total - placed);
                Interval iv{
                    task.output_interval.lo + task.output_interval.width() * placed / total,
                    task.output_interval.lo +
                        task.output_interval.width() * (placed + sz) / total};
                if (i + 1 == files) iv.hi = task.output_interval.hi;
                lvl.push_back({next_comp_++, task.output_level,
                               total > 0 ? logical * sz / total : 0, sz, iv, t_, false});
                placed += sz;
            }
            std::sort(lvl.begin(), lvl.end(), [](const DiskComponent& a, const DiskComponent& b) {
                return a.interval.lo < b.interval.lo;
            });
        } else {
            double out_size = union_distinct(sizes, sim_.keyspace);
            DiskComponent out{next_comp_++, task.output_level, logical, out_size, {0, 1}, t_,
                              false};
            if (policy_.family == PolicyFamily::SizeTiered) {
                auto& seq = tree_.levels[0];
                seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(
                                              std::min(st_pos, seq.size())),
                           out);
            } else {
                if (lvl_idx >= tree_.levels.size()) tree_.levels.resize(lvl_idx + 1);
                tree_.levels[lvl_idx].push_back(out);
            }
        }
    }

    bool maybe_start_flush() {
        if (flushing_ || tree_.sealed_mem.empty()) return false;
        flushing_ = true;
        flush_rem_ = tree_.sealed_mem.front().size;
        return true;
    }

    bool create_merges() {
        bool any = false;
        if (policy_.family == PolicyFamily::PartitionedLeveling) {
            if (!tree_.in_flight.empty()) return false;
            auto picked = leveldb_pick(policy_, sim_, tree_);
            if (!picked) return false;
            picked->id = next_task_++;
            picked->created_at = t_;
            if (picked->output_level >= 2 &&
                policy_.part_selection == FileSelection::RoundRobin) {
                const DiskComponent* f = tree_.find(picked->inputs.front());
                if (f) advance_round_robin(tree_, picked->output_level - 1, f->interval);
            }
            tree_.set_merging(picked->inputs, true);
            tree_.in_flight.push_back(std::move(*picked));
            return true;
        }

        // Local constraints also gate merge starts: while the merge runs its
        // output is forming at the next level, so starting it when that level
        // is already at its cap would breach the per-level limit. A deep merge
        // in flight therefore back-pressures every shallower merge.
        auto local_block = [&](const MergeTask& task) {
            if (sched_.constraint != ConstraintKind::Local) return false;
            if (policy_.family != PolicyFamily::Leveling &&
                policy_.family != PolicyFamily::Tiering)
                return false;
            double cap = effective_max_per_level(sched_, policy_);
            std::size_t j = static_cast<std::size_t>(task.output_level);
            std::size_t n = j < tree_.levels.size() ? tree_.levels[j].size() : 0;
            return static_cast<double>(n) + 1 > cap;
        };

        while (true) {
            std::vector<MergeTask> tasks =
                policy_.family == PolicyFamily::SizeTiered
                    ? size_tiered_next(policy_, tree_)
                    : next_merges(policy_, sim_, tree_);
            bool accepted = false;
            for (auto& task : tasks) {
                if (local_block(task)) continue;
                task.id = next_task_++;
                task.created_at = t_;
                tree_.set_merging(task.inputs, true);
                tree_.in_flight.push_back(std::move(task));
                accepted = true;
            }
            if (!accepted) break;
            any = true;
        }
        return any;
    }

    StallCheck check_stall() const {
        return admit_writes(sched_, policy_, sim_, tree_, L_);
    }

    // Instant drain of the open-arrival queue when admission is uncapped.
    bool drain_queue() {
        if (!open_ || !cap_infinite_ || stalled_ || queue_ <= kEps) return false;
        double drained = 0;
        while (queue_ > kEps && !check_stall().stalled) {
            double room = sim_.mem_component_size - tree_.active_fill;
            double take = std::min(room, queue_);
            tree_.active_fill += take;
            queue_ -= take;
            drained += take;
            if (tree_.active_fill >= sim_.mem_component_size - 1e-9) seal_active();
        }
        if (drained > 0) {
            admitted_ += drained;
            admission_curve_.add(t_, admitted_);
        }
        return drained > 0;
    }

    bool closed_topup() {
        if (open_ || opts_.no_admission || !cap_infinite_ || t_ >= arr_.duration) return false;
        double jump = 0;
        while (!check_stall().stalled) {
            jump += sim_.mem_component_size - tree_.active_fill;
            tree_.active_fill = sim_.mem_component_size;
            seal_active();
        }
        if (jump > 0) {
            arrived_ += jump;
            admitted_ += jump;
            arrival_curve_.add(t_, arrived_);
            admission_curve_.add(t_, admitted_);
        }
        return jump > 0;
    }

    bool update_stall() {
        StallCheck check = check_stall();
        bool changed = false;
        if (stalled_ && !check.stalled) {
            stalled_ = false;
            if (open_) {
                trace_.events.push_back(
                    {t_, EventKind::StallRelease, static_cast<std::uint64_t>(trace_.stalls.size())});
                trace_.stalls.push_back({stall_start_, t_, stall_cause_});
            }
            changed = true;
        } else if (!stalled_ && check.stalled) {
            stalled_ = true;
            stall_start_ = t_;
            stall_cause_ = check.cause;
            changed = true;
        }
        return changed;
    }

    void post_state() {
        for (int pass = 0; pass < 64; ++pass) {
            bool changed = false;
            changed |= maybe_start_flush();
            changed |= create_merges();
            changed |= update_stall();
            changed |= drain_queue();
            changed |= closed_topup();
            if (!changed) break;
            if (pass == 63) throw std::logic_error("run_sim: post-event fixpoint did not settle");
        }
        alloc_ = allocate(sched_, tree_.in_flight, flushing_, sim_.bandwidth);
        if (alloc_.total() > sim_.bandwidth * (1 + 1e-9))
            throw std::logic_error("run_sim: bandwidth conservation violated");
        cap_ = kInf;
        if (sched_.write_interaction == WriteInteraction::RateLimit) cap_ = sched_.rate_limit;
        if (sched_.kind == SchedulerKind::Blsm)
            cap_ = std::min(cap_, blsm_write_cap(tree_, alloc_, sim_, policy_, sim_.bandwidth));
        record_components(false);
    }

    void record_components(bool force) {
        int n = tree_.total_disk_components();
        if (force || trace_.components.empty() || trace_.components.back().second != n)
            trace_.components.emplace_back(t_, n);
    }

    void finalize() {
        if (stalled_ && open_) trace_.stalls.push_back({stall_start_, t_, stall_cause_});

        trace_.arrival_curve = arrival_curve_;
        trace_.admission_curve = admission_curve_;
        trace_.admitted_total = admitted_;
        trace_.queue_backlog = queue_;
        trace_.queue_growing = queue_ > kEps && queue_ > queue_at_half_ + 1e-6;

        trace_.write_latency =
            to_distribution(latency_from_curves(arrival_curve_, admission_curve_));
        LatencyDistribution proc(proc_segments_);
        double throttled_mass = proc.total_mass();
        if (admitted_ > throttled_mass) proc.add(admitted_ - throttled_mass, 0, 0);
        trace_.processing_latency = std::move(proc);

        trace_.final_tree = tree_;
        trace_.next_component_id = next_comp_;
        trace_.next_task_id = next_task_;
    }

    SimParams sim_;
    PolicyConfig policy_;
    SchedulerConfig sched_;
    ArrivalProcess arr_;
    RunOptions opts_;

    TreeState tree_;
    Trace trace_;
    Allocation alloc_;
    Curve arrival_curve_, admission_curve_;
    std::vector<LatencySegment> proc_segments_;

    double t_ = 0;
    double arrived_ = 0;
    double admitted_ = 0;
    double queue_ = 0;
    double queue_at_half_ = 0;
    bool half_recorded_ = false;
    double cap_ = kInf;
    double flush_rem_ = 0;
    bool flushing_ = false;
    bool stalled_ = false;
    double stall_start_ = 0;
    std::string stall_cause_;
    bool cap_infinite_ = false;
    bool open_ = false;
    int L_ = 0;
    std::uint64_t next_comp_ = 1;
    std::uint64_t next_task_ = 1;
};

} // namespace

Trace run_sim(const SimParams& sim, const PolicyConfig& policy, const SchedulerConfig& sched,
              const ArrivalProcess& arrivals, const RunOptions& opts) {
    Engine engine(sim, policy, sched, arrivals, opts);
    return engine.run();
}

LatencyProfile queue_account(const std::vector<std::tuple<double, double, double>>& arrival_segments,
                             const std::vector<StallInterval>& stalls,
                             const std::vector<double>& release_capacities) {
    for (std::size_t i = 1; i < stalls.size(); ++i)
        if (stalls[i].start < stalls[i - 1].end)
            throw std::invalid_argument("queue_account: stalls must be sorted and disjoint");

    std::vector<double> bps;
    for (const auto& [a, b, r] : arrival_segments) {
        bps.push_back(a);
        bps.push_back(b);
    }
    for (const auto& s : stalls) {
        bps.push_back(s.start);
        bps.push_back(s.end);
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    if (bps.empty()) return {};

    auto rate_at = [&](double t) {
        for (const auto& [a, b, r] : arrival_segments)
            if (t >= a && t < b) return r;
        return 0.0;
    };
    auto stalled_at = [&](double t) {
        for (const auto& s : stalls)
            if (t >= s.start && t < s.end) return true;
        return false;
    };

    Curve A, P;
    double arrived = 0, admitted = 0, backlog = 0;
    A.add(bps.front(), 0);
    P.add(bps.front(), 0);
    for (std::size_t i = 0; i + 1 <= bps.size(); ++i) {
        double t = bps[i];
        // releases scheduled at this instant
        for (std::size_t k = 0; k < stalls.size(); ++k) {
            if (stalls[k].end != t) continue;
            double cap = k < release_capacities.size()
                             ? release_capacities[k]
                             : std::numeric_limits<double>::infinity();
            double jump = std::min(backlog, cap);
            if (jump > 0) {
                admitted += jump;
                backlog -= jump;
                P.add(t, admitted);
            }
        }
        if (!stalled_at(t) && backlog > 0) { // not re-stalled: drain fully
            admitted += backlog;
            backlog = 0;
            P.add(t, admitted);
        }
        if (i + 1 == bps.size()) break;
        double dt = bps[i + 1] - t;
        double r = rate_at(t);
        arrived += r * dt;
        if (stalled_at(t)) backlog += r * dt;
        else admitted += r * dt;
        A.add(bps[i + 1], arrived);
        P.add(bps[i + 1], admitted);
    }
    return latency_from_curves(A, P);
}

std::string to_string(ArrivalKind k) {
    switch (k) {
        case ArrivalKind::Closed: return "closed";
        case ArrivalKind::OpenConstant: return "open_constant";
        case ArrivalKind::OpenBursty: return "open_bursty";
    }
    return "?";
}

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::MergeDone: return "merge_done";
        case EventKind::FlushDone: return "flush_done";
        case EventKind::MemFull: return "mem_full";
        case EventKind::StallRelease: return "stall_release";
        case EventKind::Boundary: return "boundary";
    }
    return "?";
}

} // namespace lsmsim
