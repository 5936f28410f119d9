#include "lsmsim/latency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lsmsim {

void Curve::add(double t, double v) {
    if (!pts.empty()) {
        auto [pt, pv] = pts.back();
        if (t < pt - 1e-12 || v < pv - 1e-9)
            throw std::logic_error("Curve::add: points must be nondecreasing");
        if (t <= pt && v <= pv) return; // duplicate
    }
    pts.emplace_back(t, v);
}

double Curve::inverse(double w) const {
    if (pts.empty()) return 0;
    if (w <= pts.front().second) return pts.front().first;
    // first point with value >= w
    auto it = std::lower_bound(pts.begin(), pts.end(), w,
                               [](const auto& p, double x) { return p.second < x; });
    if (it == pts.end()) return pts.back().first;
    auto prev = it - 1;
    if (it->first == prev->first || it->second == prev->second) return it->first;
    return prev->first +
           (it->first - prev->first) * (w - prev->second) / (it->second - prev->second);
}

double Curve::inverse_after(double w) const {
    if (pts.empty()) return 0;
    // first point with value > w; the previous point is where the curve
    // leaves the level w
    auto it = std::upper_bound(pts.begin(), pts.end(), w,
                               [](double x, const auto& p) { return x < p.second; });
    if (it == pts.end()) return pts.back().first;
    if (it == pts.begin()) return it->first;
    auto prev = it - 1;
    if (prev->second == w) return prev->first; // curve leaves the level w here
    if (it->first == prev->first) return it->first; // inside a jump
    return prev->first +
           (it->first - prev->first) * (w - prev->second) / (it->second - prev->second);
}

double Curve::value(double t) const {
    if (pts.empty()) return 0;
    if (t < pts.front().first) return 0;
    // first point with time > t; the one before is post-jump at time <= t
    auto it = std::upper_bound(pts.begin(), pts.end(), t,
                               [](double x, const auto& p) { return x < p.first; });
    if (it == pts.begin()) return 0;
    auto prev = it - 1;
    if (it == pts.end() || it->first == prev->first) return prev->second;
    return prev->second +
           (it->second - prev->second) * (t - prev->first) / (it->first - prev->first);
}

double LatencyProfile::value_at(double w) const {
    if (pts.empty()) return 0;
    if (w <= pts.front().first) return pts.front().second;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        auto [w0, l0] = pts[i - 1];
        auto [w1, l1] = pts[i];
        if (w <= w1) {
            if (w1 == w0) return l1;
            return l0 + (l1 - l0) * (w - w0) / (w1 - w0);
        }
    }
    return pts.back().second;
}

LatencyDistribution::LatencyDistribution(std::vector<LatencySegment> segments)
    : segs_(std::move(segments)) {
    for (const auto& s : segs_)
        if (s.mass < 0 || s.hi < s.lo)
            throw std::invalid_argument("LatencyDistribution: bad segment");
}

void LatencyDistribution::add(double mass, double lo, double hi) {
    if (mass < 0 || hi < lo) throw std::invalid_argument("LatencyDistribution::add: bad segment");
    if (mass == 0) return;
    segs_.push_back({mass, lo, hi});
}

double LatencyDistribution::total_mass() const {
    double m = 0;
    for (const auto& s : segs_) m += s.mass;
    return m;
}

double LatencyDistribution::max() const {
    double v = 0;
    for (const auto& s : segs_)
        if (s.mass > 0) v = std::max(v, s.hi);
    return v;
}

double LatencyDistribution::quantile(double q) const {
    if (q < 0 || q > 1) throw std::invalid_argument("quantile: q in [0,1]");
    double total = total_mass();
    if (total <= 0) return 0;
    double target = q * total;

    // CDF(x) = sum of each segment's mass below or at x.
    auto cdf = [&](double x) {
        double m = 0;
        for (const auto& s : segs_) {
            if (x >= s.hi) m += s.mass;
            else if (x > s.lo) m += s.mass * (x - s.lo) / (s.hi - s.lo);
        }
        return m;
    };

    std::vector<double> crit;
    crit.reserve(segs_.size() * 2);
    for (const auto& s : segs_) {
        crit.push_back(s.lo);
        crit.push_back(s.hi);
    }
    std::sort(crit.begin(), crit.end());
    crit.erase(std::unique(crit.begin(), crit.end()), crit.end());

    double prev_x = crit.front();
    double prev_c = cdf(prev_x);
    if (prev_c >= target) return prev_x;
    for (std::size_t i = 1; i < crit.size(); ++i) {
        double x = crit[i];
        double c = cdf(x);
        if (c >= target) {
            // Point masses sit exactly at critical values, so the CDF is
            // linear on the open interval and may jump at x itself.
            double cont = prev_c;
            double slope_mass = 0;
            for (const auto& s : segs_)
                if (s.hi > s.lo && s.lo <= prev_x && s.hi >= x)
                    slope_mass += s.mass * (x - prev_x) / (s.hi - s.lo);
            double c_before_jump = cont + slope_mass;
            if (c_before_jump >= target && slope_mass > 0)
                return prev_x + (x - prev_x) * (target - cont) / slope_mass;
            return x;
        }
        prev_x = x;
        prev_c = c;
    }
    return crit.back();
}

LatencyProfile latency_from_curves(const Curve& arrivals, const Curve& admissions) {
    LatencyProfile out;
    double W = std::min(arrivals.total(), admissions.total());
    if (W <= 0) return out;

    std::vector<double> grid;
    for (const auto& [t, v] : arrivals.pts)
        if (v <= W) grid.push_back(v);
    for (const auto& [t, v] : admissions.pts)
        if (v <= W) grid.push_back(v);
    grid.push_back(0);
    grid.push_back(W);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    for (double w : grid) {
        // The latency can jump where either inverse does (flat admission
        // during a stall); emit both one-sided values.
        double left = admissions.inverse(w) - arrivals.inverse(w);
        double right = admissions.inverse_after(w) - arrivals.inverse_after(w);
        out.pts.emplace_back(w, std::max(0.0, left));
        if (right != left && w < W) out.pts.emplace_back(w, std::max(0.0, right));
    }
    return out;
}

LatencyDistribution to_distribution(const LatencyProfile& profile) {
    LatencyDistribution d;
    for (std::size_t i = 1; i < profile.pts.size(); ++i) {
        auto [w0, l0] = profile.pts[i - 1];
        auto [w1, l1] = profile.pts[i];
        if (w1 > w0) d.add(w1 - w0, std::min(l0, l1), std::max(l0, l1));
    }
    return d;
}

} // namespace lsmsim
