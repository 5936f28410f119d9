#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lsmsim/scheduler.hpp"

using namespace lsmsim;

namespace {

MergeTask task(std::uint64_t id, double remaining, double created_at = 0) {
    MergeTask t;
    t.id = id;
    t.input_total = remaining;
    t.remaining = remaining;
    t.created_at = created_at;
    return t;
}

} // namespace

TEST_CASE("fair allocation splits evenly") {
    SchedulerConfig cfg;
    cfg.kind = SchedulerKind::Fair;
    std::vector<MergeTask> tasks{task(1, 500), task(2, 200), task(3, 900), task(4, 100)};
    auto a = allocate(cfg, tasks, false, 100000);
    for (const auto& t : tasks) CHECK(a.merge_rates.at(t.id) == doctest::Approx(25000.0));
    CHECK(a.total() == doctest::Approx(100000.0));
}

TEST_CASE("greedy gives everything to the smallest remaining") {
    SchedulerConfig cfg;
    cfg.kind = SchedulerKind::Greedy;
    std::vector<MergeTask> tasks{task(1, 500), task(2, 200), task(3, 900)};
    auto a = allocate(cfg, tasks, false, 100000);
    CHECK(a.merge_rates.size() == 1);
    CHECK(a.merge_rates.at(2) == doctest::Approx(100000.0));

    // a smaller new task preempts; ties break to the lowest id
    tasks.push_back(task(4, 100));
    CHECK(greedy_reschedule(tasks)->id == 4);
    tasks.push_back(task(5, 100));
    CHECK(greedy_reschedule(tasks)->id == 4);
    CHECK(greedy_reschedule(std::vector<MergeTask>{}) == nullptr);
}

TEST_CASE("single-threaded runs FIFO without preemption") {
    SchedulerConfig cfg;
    cfg.kind = SchedulerKind::SingleThreaded;
    std::vector<MergeTask> tasks{task(1, 900, 5), task(2, 100, 3)};
    auto a = allocate(cfg, tasks, false, 100000);
    CHECK(a.merge_rates.size() == 1);
    CHECK(a.merge_rates.at(2) == doctest::Approx(100000.0)); // created first
}

TEST_CASE("flush priority takes the full budget") {
    SchedulerConfig cfg;
    cfg.kind = SchedulerKind::Fair;
    std::vector<MergeTask> tasks{task(1, 500)};
    auto a = allocate(cfg, tasks, true, 100000);
    CHECK(a.flush_rate == doctest::Approx(100000.0));
    CHECK(a.total() <= 100000.0 * (1 + 1e-12));
}

TEST_CASE("blsm allocation is proportional to remaining work") {
    SchedulerConfig cfg;
    cfg.kind = SchedulerKind::Blsm;
    std::vector<MergeTask> tasks{task(1, 300), task(2, 100)};
    auto a = allocate(cfg, tasks, false, 100000);
    CHECK(a.merge_rates.at(1) == doctest::Approx(75000.0));
    CHECK(a.merge_rates.at(2) == doctest::Approx(25000.0));
}

TEST_CASE("effective component limits") {
    SchedulerConfig cfg;
    PolicyConfig leveling;
    leveling.family = PolicyFamily::Leveling;
    leveling.size_ratio = 10;
    PolicyConfig tiering;
    tiering.family = PolicyFamily::Tiering;
    tiering.size_ratio = 3;

    CHECK(effective_max_total(cfg, leveling, 3) == 6.0);
    CHECK(effective_max_total(cfg, tiering, 8) == 48.0);
    CHECK(effective_max_per_level(cfg, leveling) == 2.0);
    CHECK(effective_max_per_level(cfg, tiering) == 6.0);

    cfg.max_total = 10;
    CHECK(effective_max_total(cfg, leveling, 3) == 10.0);
}

TEST_CASE("admit_writes stall rules") {
    SchedulerConfig cfg;
    SimParams sim;
    PolicyConfig p;
    p.family = PolicyFamily::Leveling;
    p.size_ratio = 10;
    TreeState tree;
    tree.levels.resize(4);

    CHECK(!admit_writes(cfg, p, sim, tree, 3).stalled); // empty tree is open

    // leveling L=3: global max 2L=6, 7 components stall
    for (int i = 0; i < 7; ++i)
        tree.levels[static_cast<std::size_t>(i % 4)].push_back({});
    auto check = admit_writes(cfg, p, sim, tree, 3);
    CHECK(check.stalled);
    CHECK(check.cause == "component_constraint");

    // local: any level above its per-level cap
    cfg.constraint = ConstraintKind::Local;
    TreeState local_tree;
    local_tree.levels.resize(4);
    for (int i = 0; i < 3; ++i) local_tree.levels[1].push_back({});
    CHECK(admit_writes(cfg, p, sim, local_tree, 3).stalled);
    local_tree.levels[1].pop_back();
    CHECK(!admit_writes(cfg, p, sim, local_tree, 3).stalled);

    // memory-full stall when all memory components are sealed
    cfg.constraint = ConstraintKind::Global;
    TreeState mem_tree;
    mem_tree.levels.resize(4);
    mem_tree.sealed_mem.resize(2);
    auto mem = admit_writes(cfg, p, sim, mem_tree, 3);
    CHECK(mem.stalled);
    CHECK(mem.cause == "memory_full");
}

TEST_CASE("blsm write cap") {
    SimParams sim;
    PolicyConfig p;
    p.family = PolicyFamily::Leveling;
    p.size_ratio = 10;
    p.levels = 2;
    TreeState tree;
    tree.levels.resize(3);
    Allocation alloc;

    // no merge backlog -> unthrottled
    CHECK(blsm_write_cap(tree, alloc, sim, p, 100000) == doctest::Approx(100000.0));

    // a lagging merge with a nearly full source level drives the cap to ~0
    MergeTask big = {};
    big.id = 1;
    big.input_total = 1e7;
    big.remaining = 1e7;
    big.output_level = 1;
    tree.in_flight.push_back(big);
    tree.active_fill = sim.mem_component_size;
    double cap = blsm_write_cap(tree, alloc, sim, p, 100000);
    CHECK(cap >= 0.0);
    CHECK(cap < 100.0);

    // wrong shape is a configuration error
    TreeState deep;
    deep.levels.resize(4);
    CHECK_THROWS_AS(blsm_write_cap(deep, alloc, sim, p, 100000), std::invalid_argument);
}
