#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lsmsim/kernel.hpp"
#include "lsmsim/latency.hpp"
#include "lsmsim/oracles.hpp"

using namespace lsmsim;

TEST_CASE("curve value and inverses across jumps and flats") {
    Curve c;
    c.add(0, 0);
    c.add(10, 10);
    c.add(10, 20); // jump
    c.add(20, 30);
    c.add(30, 30); // flat
    c.add(40, 40);

    CHECK(c.value(5) == doctest::Approx(5.0));
    CHECK(c.value(10) == doctest::Approx(20.0)); // right-continuous
    CHECK(c.value(15) == doctest::Approx(25.0));
    CHECK(c.value(25) == doctest::Approx(30.0));
    CHECK(c.value(35) == doctest::Approx(35.0));

    CHECK(c.inverse(5) == doctest::Approx(5.0));
    CHECK(c.inverse(15) == doctest::Approx(10.0)); // inside the jump
    CHECK(c.inverse(30) == doctest::Approx(20.0));
    CHECK(c.inverse_after(30) == doctest::Approx(30.0)); // right limit across the flat
    CHECK(c.inverse(10) == doctest::Approx(10.0));
    CHECK(c.inverse_after(10) == doctest::Approx(10.0));

    c.add(40, 40); // duplicate is a no-op
    CHECK(c.pts.size() == 6);
    CHECK_THROWS_AS(c.add(39, 50), std::logic_error);
    CHECK_THROWS_AS(c.add(41, 39), std::logic_error);
}

TEST_CASE("latency profile interpolation") {
    LatencyProfile p;
    p.pts = {{0, 0}, {0, 5}, {5, 0}, {10, 0}};
    CHECK(p.total_mass() == doctest::Approx(10.0));
    CHECK(p.value_at(0) == doctest::Approx(0.0));
    CHECK(p.value_at(2.5) == doctest::Approx(2.5));
    CHECK(p.value_at(7) == doctest::Approx(0.0));
}

TEST_CASE("latency_from_curves: stall makes a latency jump at w=0") {
    Curve arr, adm;
    arr.add(0, 0);
    arr.add(10, 10);
    adm.add(0, 0);
    adm.add(5, 0); // stalled for 5s, then instant release
    adm.add(5, 5);
    adm.add(10, 10);

    auto prof = latency_from_curves(arr, adm);
    CHECK(prof.total_mass() == doctest::Approx(10.0));
    CHECK(prof.value_at(2.5) == doctest::Approx(2.5)); // waits until t=5
    CHECK(prof.value_at(7) == doctest::Approx(0.0));

    auto dist = to_distribution(prof);
    CHECK(dist.total_mass() == doctest::Approx(10.0));
    CHECK(dist.max() == doctest::Approx(5.0));
    CHECK(dist.quantile(0.5) == doctest::Approx(0.0));
    CHECK(dist.quantile(0.9) == doctest::Approx(4.0));
}

TEST_CASE("distribution quantiles with point and uniform mass") {
    LatencyDistribution d;
    d.add(10, 0, 0);
    d.add(10, 0, 1);
    CHECK(d.total_mass() == doctest::Approx(20.0));
    CHECK(d.quantile(0.5) == doctest::Approx(0.0));
    CHECK(d.quantile(0.75) == doctest::Approx(0.5));
    CHECK(d.max() == doctest::Approx(1.0));

    // quantiles are nondecreasing in q
    double prev = 0;
    for (double q : {0.0, 0.1, 0.5, 0.9, 0.99, 0.999, 1.0}) {
        double v = d.quantile(q);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(d.p50() <= d.p99());
    CHECK(d.p99() <= d.p999());
    CHECK(d.p999() <= d.max());

    CHECK(LatencyDistribution{}.quantile(0.5) == 0.0);
    CHECK_THROWS_AS(d.quantile(1.5), std::invalid_argument);
    CHECK_THROWS_AS(d.add(-1, 0, 1), std::invalid_argument);
}

TEST_CASE("queue_account: no stalls means zero latency") {
    std::vector<std::tuple<double, double, double>> segs{{0, 100, 1000}};
    auto prof = queue_account(segs, {}, {});
    auto dist = to_distribution(prof);
    CHECK(dist.max() == doctest::Approx(0.0));
}

TEST_CASE("queue_account: 1000/s arrivals through a 1s stall average 0.5s") {
    std::vector<std::tuple<double, double, double>> segs{{0, 100, 1000}};
    std::vector<StallInterval> stalls{{10, 11, "memory_full"}};
    auto prof = queue_account(segs, stalls, {});
    auto ref = per_write_reference(segs, stalls, {});
    REQUIRE(ref.size() == 100000);

    double sum = 0;
    int n = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK(std::abs(ref[i] - prof.value_at(static_cast<double>(i + 1))) < 1e-9);
        if (ref[i] > 0) {
            sum += ref[i];
            ++n;
        }
    }
    CHECK(n == 999); // writes arriving strictly inside the stall
    CHECK(sum / n == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("queue_account matches the per-write reference on two stalls") {
    std::vector<std::tuple<double, double, double>> segs{{0, 60, 100}};
    std::vector<StallInterval> stalls{{10, 11, "memory_full"}, {20, 22, "component_constraint"}};
    auto prof = queue_account(segs, stalls, {});
    auto ref = per_write_reference(segs, stalls, {});
    for (std::size_t i = 0; i < ref.size(); ++i)
        CHECK(std::abs(ref[i] - prof.value_at(static_cast<double>(i + 1))) < 1e-9);
}

TEST_CASE("queue_account with bounded release capacity cascades") {
    // 100/s arrivals, one stall; only 30 entries admitted at release, so the
    // backlog drains across the later capacity-less horizon.
    std::vector<std::tuple<double, double, double>> segs{{0, 40, 100}};
    std::vector<StallInterval> stalls{{10, 12, "memory_full"}};
    auto prof = queue_account(segs, stalls, {30});
    auto ref = per_write_reference(segs, stalls, {30});
    for (std::size_t i = 0; i < ref.size(); ++i)
        CHECK(std::abs(ref[i] - prof.value_at(static_cast<double>(i + 1))) < 1e-6);
}
