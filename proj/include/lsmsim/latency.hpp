#pragma once

#include <cstddef>
#include <vector>

namespace lsmsim {

/// Piecewise-linear nondecreasing cumulative curve (time -> count).
/// Vertical jumps are represented by two points at the same time.
struct Curve {
    std::vector<std::pair<double, double>> pts; // (time, cumulative)

    void add(double t, double v);
    double total() const { return pts.empty() ? 0.0 : pts.back().second; }
    double end_time() const { return pts.empty() ? 0.0 : pts.back().first; }
    /// Earliest time at which the curve reaches w (left-continuous in w).
    double inverse(double w) const;
    /// Time at which the curve first exceeds w: the right limit of the
    /// inverse, which differs from inverse(w) across flat stretches.
    double inverse_after(double w) const;
    /// Curve value at time t (right-continuous across jumps).
    double value(double t) const;
};

/// Latency of the w-th write as a piecewise-linear function of w.
struct LatencyProfile {
    std::vector<std::pair<double, double>> pts; // (w, latency)

    double total_mass() const { return pts.empty() ? 0.0 : pts.back().first; }
    double value_at(double w) const;
};

/// Mass `mass` of latencies spread uniformly over [lo, hi] (point mass when
/// lo == hi).
struct LatencySegment {
    double mass = 0;
    double lo = 0;
    double hi = 0;
};

class LatencyDistribution {
public:
    LatencyDistribution() = default;
    explicit LatencyDistribution(std::vector<LatencySegment> segments);

    void add(double mass, double lo, double hi);
    double total_mass() const;
    /// inf{x : CDF(x) >= q * total}; 0 for an empty distribution.
    double quantile(double q) const;
    double p50() const { return quantile(0.50); }
    double p99() const { return quantile(0.99); }
    double p999() const { return quantile(0.999); }
    double max() const;
    const std::vector<LatencySegment>& segments() const { return segs_; }

private:
    std::vector<LatencySegment> segs_;
};

/// Horizontal gap between the arrival and admission curves: the latency of
/// every admitted write, in arrival order.
LatencyProfile latency_from_curves(const Curve& arrivals, const Curve& admissions);

LatencyDistribution to_distribution(const LatencyProfile& profile);

} // namespace lsmsim
